#include "cli.hpp"

#include "stumpscope/api_server.hpp"
#include "stumpscope/error.hpp"
#include "stumpscope/json_io.hpp"
#include "stumpscope/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace stumpscope {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  DatasetSpec data;
  std::string target = "builtin";
  std::string target_file;
  std::uint64_t target_seed = 0;
  SweepConfig sweep;
  std::optional<int> complexity;
  std::optional<std::string> precision;
  fs::path out = ".";
};

void add_pipeline_flags(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--input", cfg.input, "CSV file with a header row")->required();
  cmd.add_option("--label-column", cfg.data.label_column, "Name of the class column")
      ->capture_default_str();
  cmd.add_option("--positive-label", cfg.data.positive_label, "Label value mapped to class 1")
      ->required();
  cmd.add_option("--split-seed", cfg.data.split_seed, "Seed of the stratified split")
      ->capture_default_str();
  cmd.add_option("--split-ratio", cfg.data.split_ratio, "Training fraction per class")
      ->capture_default_str();
  cmd.add_option("--target", cfg.target, "Target model: builtin or file")
      ->check(CLI::IsMember({"builtin", "file"}))
      ->capture_default_str();
  cmd.add_option("--target-file", cfg.target_file, "CSV with index,label predictions");
  cmd.add_option("--target-seed", cfg.target_seed, "Seed of the builtin target")
      ->capture_default_str();
  cmd.add_option("--iterations", cfg.sweep.iterations, "Number of surrogates in the sweep")
      ->capture_default_str();
  cmd.add_option("--max-estimators", cfg.sweep.max_estimators, "Largest stump count sampled")
      ->capture_default_str();
  cmd.add_option("--seed", cfg.sweep.seed, "Sweep seed")->capture_default_str();
  cmd.add_option("--threads", cfg.sweep.threads, "Worker threads (0 = all cores)");
  cmd.add_option("--out", cfg.out, "Output directory")->capture_default_str();
}

void validate(const RunConfig& cfg) {
  if (!(cfg.data.split_ratio > 0.0 && cfg.data.split_ratio < 1.0)) {
    throw UsageError("--split-ratio must lie strictly between 0 and 1");
  }
  if (cfg.sweep.iterations < 1) throw UsageError("--iterations must be at least 1");
  if (cfg.sweep.max_estimators < cfg.sweep.iterations) {
    throw UsageError("--max-estimators must be at least --iterations");
  }
  if (cfg.target == "file" && cfg.target_file.empty()) {
    throw UsageError("--target file needs --target-file");
  }
  if (cfg.target == "builtin" && !cfg.target_file.empty()) {
    throw UsageError("--target-file given without --target file");
  }
  if (cfg.complexity && (*cfg.complexity < 1 || *cfg.complexity > cfg.sweep.iterations)) {
    throw UsageError("--complexity must lie in [1, --iterations]");
  }
  if (cfg.precision) {
    try {
      parse_precision(*cfg.precision);
    } catch (const Error&) {
      throw UsageError("--precision must be 1, 2, 3, 4 or full");
    }
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
}

struct Pipeline {
  std::shared_ptr<const Workspace> workspace;
  SweepResult sweep;
};

Pipeline run_pipeline(const RunConfig& cfg) {
  auto loaded = load_dataset(read_file(cfg.input), cfg.data);
  TargetSpec target;
  target.seed = cfg.target_seed;
  if (cfg.target == "file") {
    target.source = TargetSource::ExternalFile;
    target.predictions_csv = read_file(cfg.target_file);
  }
  auto preds = build_target(loaded.dataset, loaded.split, target);
  Pipeline p;
  p.workspace = make_workspace(std::move(loaded.dataset), std::move(loaded.split), std::move(preds));
  p.sweep = sweep_workspace(*p.workspace, cfg.sweep);
  return p;
}

std::string frontier_table(const SweepResult& sweep) {
  std::string out = "index  n_estimators  fid@1     fid@2     fid@3     fid@4     fid@full  best\n";
  char line[160];
  for (std::size_t m = 0; m < sweep.models.size(); ++m) {
    const auto row = sweep.fidelity.row(static_cast<Index>(m));
    std::snprintf(line, sizeof line, "%5zu  %12d  %.6f  %.6f  %.6f  %.6f  %.6f  %s", m + 1,
                  sweep.models[m].n_estimators, row(0), row(1), row(2), row(3), row(4),
                  to_string(sweep.best_precision[m]).c_str());
    out += line;
    if (static_cast<int>(m) + 1 == sweep.default_choice.complexity_index) out += "  DEFAULT";
    out += '\n';
  }
  return out;
}

int run_sweep_cmd(const RunConfig& cfg) {
  validate(cfg);
  const auto p = run_pipeline(cfg);
  prepare_out(cfg.out);
  write_file(cfg.out / "sweep.json", sweep_document(p.sweep).dump(2) + "\n");
  write_file(cfg.out / "frontier.txt", frontier_table(p.sweep));
  const auto& def = p.sweep.default_choice;
  std::cout << "wrote " << (cfg.out / "sweep.json").string() << " and "
            << (cfg.out / "frontier.txt").string() << " (default #" << def.complexity_index
            << ", precision " << to_string(def.precision) << ")\n";
  return 0;
}

int run_explain_cmd(const RunConfig& cfg) {
  validate(cfg);
  const auto p = run_pipeline(cfg);
  const int k = cfg.complexity.value_or(p.sweep.default_choice.complexity_index);
  const Precision precision =
      cfg.precision ? parse_precision(*cfg.precision) : p.sweep.default_choice.precision;
  const auto& ws = *p.workspace;
  const auto session = open_session(p.sweep, ws.training, k, precision);
  prepare_out(cfg.out);
  write_file(cfg.out / "summary.json",
             summary_document(session.working(), *ws.training, ws.dataset.feature_names).dump(2) +
                 "\n");
  write_file(cfg.out / "tests.json",
             tests_document(test_table(session.working(), ws.dataset, ws.split, &ws.target),
                            ws.dataset)
                     .dump(2) +
                 "\n");
  std::cout << "wrote summary.json and tests.json for #" << k << " ("
            << session.working().n_estimators << " stumps, precision " << to_string(precision)
            << ")\n";
  return 0;
}

struct ServeConfig {
  int port = 8080;
  std::string state_dir;
  std::string ui_dir = "webui/dist";
  std::int64_t sweep_budget = ServerOptions{}.sweep_budget;
  unsigned threads = 0;
};

int run_serve_cmd(const ServeConfig& cfg) {
  if (cfg.port < 0 || cfg.port > 65535) throw UsageError("--port must lie in [0, 65535]");
  ServerOptions opts;
  opts.host = bind_host_from_env();
  opts.port = cfg.port;
  if (!cfg.state_dir.empty()) opts.state_dir = cfg.state_dir;
  if (!cfg.ui_dir.empty()) opts.ui_dir = cfg.ui_dir;
  opts.sweep_budget = cfg.sweep_budget;
  opts.sweep_threads = cfg.threads;
  ApiServer server(opts);
  std::cout << "serving /v1 on " << opts.host << ":" << opts.port << std::endl;
  if (!server.run()) {
    std::cerr << "error: cannot bind " << opts.host << ":" << opts.port << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Fit and inspect decision-stump surrogates of a binary classifier", "stumpscope"};
  app.require_subcommand(1);

  RunConfig sweep_cfg;
  auto* sweep = app.add_subcommand("sweep", "Fit the surrogate sweep; writes sweep.json and frontier.txt");
  add_pipeline_flags(*sweep, sweep_cfg);

  RunConfig explain_cfg;
  auto* explain = app.add_subcommand("explain", "Summarize one surrogate; writes summary.json and tests.json");
  add_pipeline_flags(*explain, explain_cfg);
  explain->add_option("--complexity", explain_cfg.complexity, "Complexity index (default: sweep default)");
  explain->add_option("--precision", explain_cfg.precision, "1, 2, 3, 4 or full (default: sweep default)");

  ServeConfig serve_cfg;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API (bind address from STUMPSCOPE_BIND)");
  serve->add_option("--port", serve_cfg.port, "TCP port")->capture_default_str();
  serve->add_option("--state-dir", serve_cfg.state_dir, "Write JSON snapshots here on mutation");
  serve->add_option("--ui-dir", serve_cfg.ui_dir, "Static assets served under /ui")
      ->capture_default_str();
  serve->add_option("--sweep-budget", serve_cfg.sweep_budget,
                    "n_train * iterations above which sweeps run as background jobs")
      ->capture_default_str();
  serve->add_option("--threads", serve_cfg.threads, "Sweep worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sweep) return run_sweep_cmd(sweep_cfg);
    if (*explain) return run_explain_cmd(explain_cfg);
    return run_serve_cmd(serve_cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace stumpscope
