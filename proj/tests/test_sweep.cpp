#include "checks.hpp"
#include "support.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/sweep.hpp"

#include <doctest.h>

#include <set>

using namespace stumpscope;
using testing::Gen;

namespace {

DecisionStump stump(Index f, double t) {
  DecisionStump s;
  s.feature = f;
  s.threshold = t;
  s.weight = 1.0;
  return s;
}

SurrogateModel model_of(std::vector<DecisionStump> stumps) {
  SurrogateModel m;
  m.stumps = std::move(stumps);
  m.n_estimators = static_cast<int>(m.stumps.size());
  return m;
}

SweepResult small_sweep(std::uint64_t seed, int iterations = 8, int max_n = 12) {
  Gen g(seed);
  const Index n = g.range(20, 60);
  const Index d = g.range(1, 5);
  const Matrix X = testing::grid_matrix(g, n, d, g.range(3, 12));
  const Labels y = testing::random_labels(g, n);
  SweepConfig cfg;
  cfg.iterations = iterations;
  cfg.max_estimators = max_n;
  cfg.seed = g.next();
  cfg.threads = 1;
  return run_sweep(X, y, y, cfg);
}

}  // namespace

TEST_CASE("complexities cover [1, 50] when iterations equals the range") {
  const auto c = sample_complexities(50, 50, 123);
  REQUIRE(c.size() == 50);
  for (int i = 0; i < 50; ++i) CHECK(c[static_cast<std::size_t>(i)] == i + 1);
}

TEST_CASE("complexity sampling is deterministic, distinct and in range") {
  CHECK(sample_complexities(3, 100, 9) == sample_complexities(3, 100, 9));
  Gen g(1);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto seed = g.next();
    const int max_n = g.range(1, 200);
    const int it = g.range(1, max_n);
    const auto c = sample_complexities(it, max_n, seed);
    CHECK(static_cast<int>(c.size()) == it);
    CHECK(std::set<int>(c.begin(), c.end()).size() == c.size());
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(c.front() >= 1);
    CHECK(c.back() <= max_n);
  }
  CHECK_THROWS_AS(sample_complexities(5, 4, 0), Error);
  CHECK_THROWS_AS(sample_complexities(0, 4, 0), Error);
}

TEST_CASE("rounding") {
  CHECK(round_half_away(0.1537, 2) == 0.15);
  CHECK(round_half_away(0.125, 2) == 0.13);
  CHECK(round_half_away(0.5, 0) == 1.0);
  auto m = model_of({stump(0, 0.1537), stump(0, 0.33335)});
  const auto r = round_thresholds(m, Precision::Two);
  CHECK(r.stumps[0].threshold == 0.15);
  CHECK(r.precision == Precision::Two);
  CHECK(round_thresholds(m, Precision::Full).stumps == m.stumps);

  // Midpoints of 4-decimal data are exact at 4 decimals only when the gap
  // is even; build such data.
  auto m4 = model_of({stump(0, 0.5 * (0.1234 + 0.1236)), stump(1, 0.5 * (0.9 + 0.9002))});
  const auto r4 = round_thresholds(m4, Precision::Four);
  CHECK(r4.stumps[0].threshold == doctest::Approx(0.1235).epsilon(1e-15));
  CHECK(r4.stumps[1].threshold == doctest::Approx(0.9001).epsilon(1e-15));
}

TEST_CASE("fidelity of memorizing and constant models") {
  Matrix X(4, 1);
  X << 0.1, 0.2, 0.8, 0.9;
  Labels y(4);
  y << 0, 0, 1, 1;
  auto perfect = model_of({stump(0, 0.5)});
  perfect.stumps[0].p_left = {1, 0};
  perfect.stumps[0].p_right = {0, 1};
  CHECK(fidelity(perfect, X, y, Precision::Full) == 1.0);
  auto constant = model_of({stump(0, 0.5)});
  constant.stumps[0].p_left = {1, 0};
  constant.stumps[0].p_right = {1, 0};
  CHECK(fidelity(constant, X, y, Precision::Full) == 0.5);
  CHECK_THROWS_AS(fidelity(perfect, X, Labels(3), Precision::Full), Error);
}

TEST_CASE("rounded fidelity equals brute-force reclassification") {
  Gen g(77);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = g.range(5, 40);
    Matrix X(n, 3);
    for (Index i = 0; i < X.size(); ++i) X(i) = g.unit();
    const Labels y = testing::random_labels(g, n);
    const auto m = testing::random_model(g, g.range(1, 6), 3);
    for (const auto p : kPrecisionGrid) {
      Index agree = 0;
      for (Index i = 0; i < n; ++i) {
        ClassPair s = ClassPair::Zero();
        for (const auto& st : m.stumps) {
          const double t = testing::rounded(st.threshold, p);
          s += st.weight * (X(i, st.feature) < t ? st.p_left : st.p_right);
        }
        agree += (s(1) > s(0) ? 1 : 0) == y(i);
      }
      CHECK(fidelity(m, X, y, p) == static_cast<double>(agree) / n);
    }
  }
}

TEST_CASE("best precision prefers fewer decimals and ranks full last") {
  Eigen::RowVectorXd row(5);
  row << 0.9, 0.95, 0.95, 0.95, 0.95;
  CHECK(best_precision(row) == Precision::Two);
  row << 0.9, 0.9, 0.9, 0.9, 0.95;
  CHECK(best_precision(row) == Precision::Full);
  row << 1, 1, 1, 1, 1;
  CHECK(best_precision(row) == Precision::One);
}

TEST_CASE("uniqueness tags") {
  const auto A = stump(0, 0.3), B = stump(1, 0.6);
  const std::vector<Precision> full(3, Precision::Full);
  const auto tags = classify_uniqueness({model_of({A}), model_of({A, B}), model_of({A, A, B})}, full);
  CHECK(tags[0] == std::vector{Uniqueness::Unique});
  CHECK(tags[1] == std::vector{Uniqueness::Original, Uniqueness::Unique});
  CHECK(tags[2] == std::vector{Uniqueness::Duplicated, Uniqueness::Duplicated, Uniqueness::Original});

  // Thresholds equal after rounding to the model's precision are the same rule.
  const auto near = classify_uniqueness({model_of({stump(0, 0.301)}), model_of({stump(0, 0.304)})},
                                        {Precision::Full, Precision::Two});
  CHECK(near[1][0] == Uniqueness::Original);
}

TEST_CASE("stump performance") {
  Matrix X(4, 1);
  X << 0.1, 0.2, 0.8, 0.9;
  Labels gt(4);
  gt << 0, 0, 1, 1;
  auto s = stump(0, 0.5);
  s.p_left = {1, 0};
  s.p_right = {0, 1};
  s.weight = 2.0;
  CHECK(stump_performance(model_of({s}), X, gt)[0] == 2.0);
  auto h = stump(0, 0.5);
  CHECK(stump_performance(model_of({h}), X, gt)[0] == 0.5);

  Gen g(3);
  const auto m = testing::random_model(g, 5, 1);
  const auto perf = stump_performance(m, X, gt);
  for (std::size_t t = 0; t < 5; ++t) {
    double sum = 0;
    for (Index i = 0; i < 4; ++i) {
      const auto& st = m.stumps[t];
      sum += (X(i, 0) < st.threshold ? st.p_left : st.p_right)(gt(i));
    }
    CHECK(perf[t] == doctest::Approx(m.stumps[t].weight * sum / 4).epsilon(1e-14));
  }
}

TEST_CASE("default model takes the highest fidelity, ties to lower index") {
  SweepResult s;
  s.models.resize(3);
  s.fidelity = Matrix::Zero(3, 5);
  s.fidelity.col(4) << 0.9, 1.0, 1.0;
  s.best_precision = {Precision::Full, Precision::Full, Precision::Full};
  CHECK(default_model(s).complexity_index == 2);
  SweepResult one;
  one.models.resize(1);
  one.fidelity = Matrix::Constant(1, 5, 0.5);
  one.best_precision = {Precision::One};
  CHECK(default_model(one).complexity_index == 1);
  CHECK(default_model(one).precision == Precision::One);
}

TEST_CASE("sweep structure and determinism") {
  const auto a = small_sweep(10, 8, 12);
  REQUIRE(a.models.size() == 8);
  for (std::size_t m = 0; m + 1 < a.models.size(); ++m) {
    CHECK(a.models[m].n_estimators < a.models[m + 1].n_estimators);
  }
  for (std::size_t m = 0; m < a.models.size(); ++m) {
    CHECK(a.models[m].complexity_index == static_cast<int>(m) + 1);
    CHECK(static_cast<int>(a.models[m].stumps.size()) <= a.models[m].n_estimators);
    CHECK(a.best_precision[m] == best_precision(a.fidelity.row(static_cast<Index>(m))));
    CHECK(a.performance[m].size() == a.models[m].stumps.size());
  }
  const auto& def = a.default_choice;
  const double top = a.fidelity.row(def.complexity_index - 1).maxCoeff();
  for (Index m = 0; m < a.fidelity.rows(); ++m) CHECK(a.fidelity.row(m).maxCoeff() <= top);

  const auto b = small_sweep(10, 8, 12);
  CHECK(a.fidelity == b.fidelity);
  for (std::size_t m = 0; m < a.models.size(); ++m) CHECK(a.models[m] == b.models[m]);
}

TEST_CASE("thread count does not change the sweep") {
  Gen g(8);
  const Matrix X = testing::grid_matrix(g, 80, 4, 9);
  const Labels y = testing::random_labels(g, 80);
  SweepConfig cfg;
  cfg.iterations = 10;
  cfg.max_estimators = 30;
  cfg.seed = 4;
  cfg.threads = 1;
  const auto serial = run_sweep(X, y, y, cfg);
  cfg.threads = 4;
  const auto parallel = run_sweep(X, y, y, cfg);
  CHECK(serial.fidelity == parallel.fidelity);
  for (std::size_t m = 0; m < serial.models.size(); ++m) CHECK(serial.models[m] == parallel.models[m]);
}

TEST_CASE("uniqueness tags survive an independent re-scan") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CHECK(testing::uniqueness_violations(small_sweep(seed)) == 0);
  }
}

TEST_CASE("sweep rejects single-class targets and mismatched arrays") {
  Matrix X = Matrix::Random(5, 2).cwiseAbs();
  const Labels ones = Labels::Ones(5);
  SweepConfig cfg;
  cfg.iterations = 2;
  cfg.max_estimators = 3;
  try {
    run_sweep(X, ones, ones, cfg);
    FAIL("expected DegenerateTraining");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTraining);
  }
  CHECK_THROWS_AS(run_sweep(X, Labels::Zero(4), Labels::Zero(5), cfg), Error);
}
