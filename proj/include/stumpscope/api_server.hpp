#pragma once

#include "stumpscope/json_io.hpp"
#include "stumpscope/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace stumpscope {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds any free port
  std::optional<std::filesystem::path> state_dir;
  std::optional<std::filesystem::path> ui_dir;
  // Sweeps with n_train * iterations above this run as background jobs.
  std::int64_t sweep_budget = 2'000'000;
  unsigned sweep_threads = 0;
};

/// Host from STUMPSCOPE_BIND, else `fallback`.
std::string bind_host_from_env(const std::string& fallback = "127.0.0.1");

/// Result of one API call: HTTP status, JSON body and extra headers.
struct ApiResponse {
  int status = 200;
  json body;
  std::vector<std::pair<std::string, std::string>> headers;
};

/// In-memory workflow store behind the /v1 endpoints. Every method maps to
/// one endpoint and throws stumpscope::Error on failure. Thread-safe.
class Workflow {
 public:
  explicit Workflow(ServerOptions options = {});
  ~Workflow();
  Workflow(const Workflow&) = delete;
  Workflow& operator=(const Workflow&) = delete;

  ApiResponse create_dataset(const std::string& csv, const DatasetSpec& spec);
  ApiResponse get_dataset(const std::string& id);
  ApiResponse set_target(const std::string& dataset_id, const TargetSpec& spec);
  ApiResponse create_sweep(const std::string& dataset_id, const SweepConfig& config);
  ApiResponse get_job(const std::string& id);
  ApiResponse get_sweep(const std::string& id);
  ApiResponse get_sweep_model(const std::string& id, int complexity_index);

  ApiResponse open_session(const json& request);
  ApiResponse import_session(const json& request);
  ApiResponse summary(const std::string& id);
  ApiResponse layout(const std::string& id, Index selected_stump);
  ApiResponse histogram(const std::string& id, Index feature);
  ApiResponse override_threshold(const std::string& id, const json& request);
  ApiResponse undo(const std::string& id);
  ApiResponse reset(const std::string& id);
  ApiResponse export_session(const std::string& id);
  ApiResponse tests(const std::string& id);
  ApiResponse flip(const std::string& id, Index sample, Index stump);

  /// Blocks until queued sweep jobs finish.
  void wait_for_jobs();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// HTTP front end for a Workflow.
class ApiServer {
 public:
  explicit ApiServer(ServerOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  Workflow& workflow() noexcept;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Binds and serves on the calling thread.
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stumpscope
