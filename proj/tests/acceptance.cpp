// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "checks.hpp"
#include "cli.hpp"
#include "oracle_compare.hpp"
#include "support.hpp"

#include "stumpscope/api_server.hpp"
#include "stumpscope/editing.hpp"
#include "stumpscope/explain.hpp"
#include "stumpscope/json_io.hpp"
#include "stumpscope/projection.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <string>

using namespace stumpscope;
using testing::Gen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.pass) ++failures;
  std::printf("%s  %-22s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", name, secs, r.detail.c_str());
  std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const testing::Fixture& bc() { return testing::breast_cancer_fixture(7); }

Outcome boosting_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(2025);
  int mismatches = 0;
  std::string first;
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = g.range(2, 12);
    const Index d = g.range(1, 3);
    const Matrix X = testing::grid_matrix(g, n, d, g.range(2, 6));
    const Labels y = testing::random_labels(g, n, rep % 10 != 0);
    const int rounds = g.range(1, 4);
    const auto diff = testing::compare_with_oracle(X, y, rounds, g.next());
    if (!diff.empty()) {
      ++mismatches;
      if (first.empty()) first = diff;
    }
  }
  const double secs = elapsed(t0);
  return {mismatches == 0 && secs < 10.0,
          fmt("%d/200 mismatches, %.2fs (limit 10s)", mismatches, secs) + first};
}

Outcome fidelity_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  auto loaded = load_dataset(testing::breast_cancer_csv(), testing::breast_cancer_spec());
  auto preds = build_target(loaded.dataset, loaded.split, TargetSpec{});
  const auto ws = make_workspace(std::move(loaded.dataset), std::move(loaded.split), std::move(preds));
  SweepConfig cfg;
  cfg.seed = 7;
  const auto sweep = sweep_workspace(*ws, cfg);
  const double secs = elapsed(t0);
  double small = 0.0, best = 0.0;
  int small_n = 0, best_n = 0;
  for (std::size_t m = 0; m < sweep.models.size(); ++m) {
    const double f = sweep.fidelity.row(static_cast<Index>(m)).maxCoeff();
    if (sweep.models[m].n_estimators <= 5 && f > small) small = f, small_n = sweep.models[m].n_estimators;
    if (f > best) best = f, best_n = sweep.models[m].n_estimators;
  }
  return {small >= 0.95 && best >= 0.99 && sweep.models.size() == 50 && secs < 60.0,
          fmt("<=5 stumps: %.4f (%d stumps, need 0.95); best: %.4f (%d stumps, need 0.99); %.2fs",
              small, small_n, best, best_n, secs)};
}

Outcome precision_analysis() {
  const auto& s = bc().sweep;
  double worst = 0.0;
  for (Index m = 0; m < s.fidelity.rows(); ++m)
    worst = std::max(worst, std::abs(s.fidelity(m, 3) - s.fidelity(m, 4)));
  return {worst <= 0.02, fmt("max |fid@4 - fid@full| = %.6f over %td models (limit 0.02)", worst,
                             s.fidelity.rows())};
}

Outcome uniqueness_partition() {
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Gen g(seed * 7919 + 1);
    const Index n = g.range(20, 60);
    const Index d = g.range(1, 6);
    const Matrix X = testing::grid_matrix(g, n, d, g.range(3, 12));
    const Labels y = testing::random_labels(g, n);
    SweepConfig cfg;
    cfg.iterations = g.range(3, 12);
    cfg.max_estimators = cfg.iterations + g.range(0, 10);
    cfg.seed = g.next();
    cfg.threads = 1;
    violations += testing::uniqueness_violations(run_sweep(X, y, y, cfg));
  }
  return {violations == 0, fmt("%d violations over 50 sweeps", violations)};
}

Outcome segment_algebra() {
  Gen g(4242);
  double seg = 0.0, sum = 0.0, pct = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const Index d = g.range(1, 6);
    const auto model = testing::random_model(g, g.range(1, 15), d);
    seg = std::max(seg, testing::segment_algebra_error(model, d));
    Eigen::RowVectorXd x(d);
    for (Index j = 0; j < d; ++j) x(j) = g.unit();
    const auto e = testing::contribution_error(model, x);
    sum = std::max(sum, e.sum);
    pct = std::max(pct, e.percent);
  }
  return {seg <= 1e-9 && sum <= 1e-9 && pct <= 1e-6,
          fmt("segment err %.2e, contribution err %.2e, percent err %.2e", seg, sum, pct)};
}

Outcome edit_loop() {
  Gen g(555);
  const auto& fx = bc();
  int edits = 0, bad_undo = 0, bad_moved = 0;
  while (edits < 500) {
    const int k = g.range(1, 50);
    const Precision p = kPrecisionGrid[static_cast<std::size_t>(g.range(0, 4))];
    auto s = open_session(fx.sweep, fx.ws->training, k, p);
    for (int step = 0; step < 25 && edits < 500; ++step, ++edits) {
      const auto before = s.working();
      const auto t = static_cast<std::size_t>(g.range(0, static_cast<int>(before.stumps.size()) - 1));
      const auto impact = s.override_threshold(static_cast<Index>(t), g.unit(),
                                               g.coin() ? LeafMode::Refit : LeafMode::Frozen);
      const auto& a = before.stumps[t];
      const auto& b = s.working().stumps[t];
      std::vector<Index> expect;
      const auto& X = s.data().X;
      for (Index i = 0; i < X.rows(); ++i)
        if ((X(i, a.feature) < a.threshold) != (X(i, b.feature) < b.threshold)) expect.push_back(i);
      std::vector<Index> got;
      for (const auto& m : impact.moved) got.push_back(m.sample);
      bad_moved += got != expect;
      if (g.coin()) {
        s.undo();
        bad_undo += !(s.working() == before);
      }
    }
    while (!s.log().empty()) s.undo();
    bad_undo += !(s.working() == s.base());
  }
  return {bad_undo == 0 && bad_moved == 0,
          fmt("%d edits: %d undo mismatches, %d moved-set mismatches", edits, bad_undo, bad_moved)};
}

Outcome projection() {
  const auto& fx = bc();
  const auto& X = fx.ws->training->X;
  int nondeterministic = 0;
  for (int k : {1, 3, 10, 25, 50}) {
    const auto bits = membership_vectors(fx.sweep.models[static_cast<std::size_t>(k - 1)], X);
    const auto a = project(bits), b = project(bits);
    nondeterministic += !(a.coords.array() == b.coords.array()).all();
  }

  Gen g(777);
  int worse = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = g.range(2, 40);
    Layout a, b;
    a.coords.resize(n, 2);
    b.coords.resize(n, 2);
    for (Index i = 0; i < a.coords.size(); ++i) a.coords(i) = g.unit() - 0.5, b.coords(i) = g.unit() - 0.5;
    if (rep % 2) {
      const double th = g.unit() * 2.0 * std::numbers::pi;
      Eigen::Matrix2d r;
      r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      b.coords = a.coords * r + 0.05 * b.coords;
    }
    const double before = procrustes_residual(b.coords, a.coords);
    const double after = procrustes_residual(align(a, b).coords, a.coords);
    worse += after > before + 1e-12 * (1.0 + before);
  }

  int flag_mismatch = 0, layouts = 0;
  for (int k : {4, 12, 30}) {
    auto s = open_session(fx.sweep, fx.ws->training, k, Precision::Two);
    s.layout_update(0);
    for (int step = 0; step < 10; ++step, ++layouts) {
      const auto t = static_cast<Index>(g.range(0, k - 1));
      const auto impact = s.override_threshold(t, g.unit());
      const auto upd = s.layout_update(t);
      std::set<Index> moved;
      for (const auto& m : impact.moved) moved.insert(m.sample);
      std::set<Index> flagged;
      for (std::size_t i = 0; i < upd.trajectories.size(); ++i)
        if (upd.trajectories[i].changed) flagged.insert(static_cast<Index>(i));
      flag_mismatch += moved != flagged;
    }
  }
  return {nondeterministic == 0 && worse == 0 && flag_mismatch == 0,
          fmt("MDS reruns differing %d/5, residual increases %d/200, flag mismatches %d/%d",
              nondeterministic, worse, flag_mismatch, layouts)};
}

Outcome flip_search() {
  const auto& fx = bc();
  const auto& ws = *fx.ws;
  const auto& train = ws.training->X;
  Gen g(888);
  int returned = 0, not_flipping = 0, none = 0, missed = 0;
  for (int c = 0; c < 1000; ++c) {
    const auto& model = fx.sweep.models[static_cast<std::size_t>(g.range(0, 49))];
    const auto t = static_cast<std::size_t>(g.range(0, static_cast<int>(model.stumps.size()) - 1));
    const Index sample = ws.split.test_idx[static_cast<std::size_t>(
        g.range(0, static_cast<int>(ws.split.test_idx.size()) - 1))];
    const Eigen::RowVectorXd x = ws.dataset.X.row(sample);
    const Index f = model.stumps[t].feature;
    const int pred = classify(model, x);
    const auto result = flip_threshold(model, static_cast<Index>(t), x, train.col(f));
    if (result) {
      ++returned;
      auto moved = model;
      moved.stumps[t].threshold = result->threshold;
      not_flipping += classify(moved, x) == pred;
      continue;
    }
    ++none;
    std::set<double> vals(train.col(f).begin(), train.col(f).end());
    vals.insert(x(f));
    std::vector<double> cands{0.0, 1.0};
    double prev = -1.0;
    for (double v : vals) {
      if (prev >= 0.0) cands.push_back(0.5 * (prev + v));
      prev = v;
    }
    for (double th : cands) {
      auto moved = model;
      moved.stumps[t].threshold = th;
      if (classify(moved, x) != pred) {
        ++missed;
        break;
      }
    }
  }
  return {not_flipping == 0 && missed == 0,
          fmt("%d returned (%d failed to flip), %d none (%d contradicted by scan)", returned,
              not_flipping, none, missed)};
}

Outcome cli_api_parity() {
  const auto dir = fs::temp_directory_path() / "stumpscope_acceptance";
  fs::remove_all(dir);
  const std::string csv = testing::data_path("breast_cancer_wisconsin.csv");
  std::vector<std::string> args = {"stumpscope", "sweep", "--input", csv, "--positive-label",
                                   "malignant", "--seed", "11", "--out", dir.string()};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (run_cli(static_cast<int>(argv.size()), argv.data()) != 0) return {false, "CLI sweep failed"};
  const auto cli_doc = json::parse(testing::read_text((dir / "sweep.json").string()));

  ServerOptions opts;
  opts.port = 0;
  ApiServer server(opts);
  const int port = server.start();
  httplib::Client c("127.0.0.1", port);
  c.set_read_timeout(60, 0);
  httplib::MultipartFormDataItems items = {
      {"file", testing::breast_cancer_csv(), "data.csv", "text/csv"},
      {"positive_label", "malignant", "", ""},
  };
  const auto ds = c.Post("/v1/datasets", items);
  if (!ds || ds->status != 201) return {false, "dataset upload failed"};
  const std::string id = json::parse(ds->body)["dataset_id"];
  c.Post("/v1/datasets/" + id + "/target", R"({"source":"builtin"})", "application/json");
  const auto sw = c.Post("/v1/datasets/" + id + "/sweep", R"({"seed":11})", "application/json");
  if (!sw || sw->status != 200) return {false, "sweep request failed"};
  const auto api_doc = json::parse(sw->body);
  server.stop();
  fs::remove_all(dir);
  const bool same = cli_doc.dump() == api_doc.dump();
  return {same, fmt("canonical bodies %s, %zu bytes", same ? "identical" : "differ",
                    cli_doc.dump().size())};
}

}  // namespace

int main() {
  criterion("boosting-oracle", boosting_oracle);
  criterion("fidelity-reproduction", fidelity_reproduction);
  criterion("precision-analysis", precision_analysis);
  criterion("uniqueness-partition", uniqueness_partition);
  criterion("segment-algebra", segment_algebra);
  criterion("edit-loop", edit_loop);
  criterion("projection", projection);
  criterion("flip-search", flip_search);
  criterion("cli-api-parity", cli_api_parity);
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
