#include "stumpscope/api_server.hpp"

#include "stumpscope/error.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace stumpscope {
namespace {

struct DatasetEntry {
  Dataset dataset;
  Split split;
  std::shared_ptr<const Workspace> workspace;  // set once a target exists
};

struct SweepEntry {
  std::shared_ptr<const Workspace> workspace;
  SweepResult result;
};

struct SessionEntry {
  std::string sweep_id;
  std::shared_ptr<const Workspace> workspace;
  std::mutex mutex;
  std::unique_ptr<EditSession> session;
};

enum class JobStatus { Pending, Running, Done, Failed };

std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Pending: return "pending";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
    case JobStatus::Failed: return "failed";
  }
  return "failed";
}

struct Job {
  JobStatus status = JobStatus::Pending;
  std::string sweep_id;
  std::string error_code;
  std::string error_message;
};

[[noreturn]] void not_found(const std::string& what, const std::string& id) {
  throw Error(ErrorCode::NotFound, what + " '" + id + "' not found");
}

template <class T>
std::shared_ptr<T> lookup(const std::map<std::string, std::shared_ptr<T>>& items,
                          const std::string& id, const char* what) {
  const auto it = items.find(id);
  if (it == items.end()) not_found(what, id);
  return it->second;
}

ApiResponse ok(json body, int status = 200) { return {status, std::move(body), {}}; }

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidRequest, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string bind_host_from_env(const std::string& fallback) {
  const char* env = std::getenv("STUMPSCOPE_BIND");
  return env && *env ? std::string(env) : fallback;
}

struct Workflow::State {
  ServerOptions options;
  std::mutex mutex;
  std::uint64_t counter = 0;
  std::map<std::string, std::shared_ptr<DatasetEntry>> datasets;
  std::map<std::string, std::shared_ptr<SweepEntry>> sweeps;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::vector<std::thread> workers;

  std::string next_id(const char* prefix) {
    return std::string(prefix) + "-" + std::to_string(++counter);
  }

  void snapshot(const std::string& kind, const std::string& id, const json& doc) {
    if (!options.state_dir) return;
    std::error_code ec;
    const auto dir = *options.state_dir / kind;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / (id + ".json");
    const auto tmp = dir / (id + ".json.tmp");
    {
      std::ofstream out(tmp);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
      out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }

  std::string store_sweep(std::shared_ptr<const Workspace> ws, SweepResult result) {
    auto entry = std::make_shared<SweepEntry>();
    entry->workspace = std::move(ws);
    entry->result = std::move(result);
    std::string id;
    {
      std::lock_guard lock(mutex);
      id = next_id("sw");
      sweeps[id] = entry;
    }
    snapshot("sweeps", id, sweep_document(entry->result));
    return id;
  }

  std::shared_ptr<SessionEntry> session(const std::string& id) {
    std::lock_guard lock(mutex);
    return lookup(sessions, id, "session");
  }

  std::shared_ptr<SweepEntry> sweep(const std::string& id) {
    std::lock_guard lock(mutex);
    return lookup(sweeps, id, "sweep");
  }
};

Workflow::Workflow(ServerOptions options) : state_(std::make_unique<State>()) {
  state_->options = std::move(options);
}

Workflow::~Workflow() { wait_for_jobs(); }

void Workflow::wait_for_jobs() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(state_->mutex);
    workers.swap(state_->workers);
  }
  for (auto& w : workers) w.join();
}

ApiResponse Workflow::create_dataset(const std::string& csv, const DatasetSpec& spec) {
  auto loaded = load_dataset(csv, spec);
  auto entry = std::make_shared<DatasetEntry>();
  entry->dataset = std::move(loaded.dataset);
  entry->split = std::move(loaded.split);
  std::string id;
  {
    std::lock_guard lock(state_->mutex);
    id = state_->next_id("ds");
    state_->datasets[id] = entry;
  }
  json body = {{"dataset_id", id}, {"summary", dataset_summary(entry->dataset, entry->split)}};
  state_->snapshot("datasets", id, body);
  return ok(std::move(body), 201);
}

ApiResponse Workflow::get_dataset(const std::string& id) {
  std::shared_ptr<DatasetEntry> entry;
  {
    std::lock_guard lock(state_->mutex);
    entry = lookup(state_->datasets, id, "dataset");
  }
  return ok({{"dataset_id", id}, {"summary", dataset_summary(entry->dataset, entry->split)}});
}

ApiResponse Workflow::set_target(const std::string& dataset_id, const TargetSpec& spec) {
  std::shared_ptr<DatasetEntry> entry;
  {
    std::lock_guard lock(state_->mutex);
    entry = lookup(state_->datasets, dataset_id, "dataset");
  }
  auto preds = build_target(entry->dataset, entry->split, spec);
  auto ws = make_workspace(entry->dataset, entry->split, std::move(preds));
  json body = {{"dataset_id", dataset_id},
               {"target", target_summary(ws->target, ws->training->gt,
                                         select_rows(ws->dataset.y, ws->split.test_idx))}};
  {
    std::lock_guard lock(state_->mutex);
    entry->workspace = std::move(ws);
  }
  return ok(std::move(body));
}

ApiResponse Workflow::create_sweep(const std::string& dataset_id, const SweepConfig& config) {
  std::shared_ptr<const Workspace> ws;
  {
    std::lock_guard lock(state_->mutex);
    ws = lookup(state_->datasets, dataset_id, "dataset")->workspace;
  }
  if (!ws) throw Error(ErrorCode::InvalidRequest, "dataset has no target; POST .../target first");
  // Validate before queueing so bad configs fail synchronously.
  sample_complexities(config.iterations, config.max_estimators, config.seed);

  SweepConfig cfg = config;
  if (cfg.threads == 0) cfg.threads = state_->options.sweep_threads;
  const auto work = static_cast<std::int64_t>(ws->training->X.rows()) * cfg.iterations;
  if (work <= state_->options.sweep_budget) {
    const std::string id = state_->store_sweep(ws, sweep_workspace(*ws, cfg));
    ApiResponse r = ok(sweep_document(state_->sweep(id)->result));
    r.headers = {{"X-Sweep-Id", id}, {"Location", "/v1/sweep/" + id}};
    return r;
  }

  auto job = std::make_shared<Job>();
  std::string job_id;
  {
    std::lock_guard lock(state_->mutex);
    job_id = state_->next_id("job");
    state_->jobs[job_id] = job;
    state_->workers.emplace_back([this, job, ws, cfg] {
      {
        std::lock_guard lock(state_->mutex);
        job->status = JobStatus::Running;
      }
      try {
        const std::string id = state_->store_sweep(ws, sweep_workspace(*ws, cfg));
        std::lock_guard lock(state_->mutex);
        job->sweep_id = id;
        job->status = JobStatus::Done;
      } catch (const Error& e) {
        std::lock_guard lock(state_->mutex);
        job->status = JobStatus::Failed;
        job->error_code = std::string(stumpscope::to_string(e.code()));
        job->error_message = e.what();
      } catch (const std::exception& e) {
        std::lock_guard lock(state_->mutex);
        job->status = JobStatus::Failed;
        job->error_code = "InternalError";
        job->error_message = e.what();
      }
    });
  }
  ApiResponse r = ok({{"job_id", job_id}, {"status", "pending"}}, 202);
  r.headers = {{"Location", "/v1/jobs/" + job_id}};
  return r;
}

ApiResponse Workflow::get_job(const std::string& id) {
  std::lock_guard lock(state_->mutex);
  const auto job = lookup(state_->jobs, id, "job");
  json body = {{"job_id", id}, {"status", std::string(to_string(job->status))}};
  if (job->status == JobStatus::Done) body["sweep_id"] = job->sweep_id;
  if (job->status == JobStatus::Failed) {
    body["error"] = {{"code", job->error_code}, {"message", job->error_message}};
  }
  return ok(std::move(body));
}

ApiResponse Workflow::get_sweep(const std::string& id) {
  return ok(sweep_document(state_->sweep(id)->result));
}

ApiResponse Workflow::get_sweep_model(const std::string& id, int complexity_index) {
  return ok(sweep_model_document(state_->sweep(id)->result, complexity_index));
}

ApiResponse Workflow::open_session(const json& request) {
  const auto sweep_id = field<std::string>(request, "sweep_id", "");
  const auto sweep = state_->sweep(sweep_id);
  const auto& def = sweep->result.default_choice;
  const int complexity = field<int>(request, "complexity_index", def.complexity_index);
  const Precision precision = request.contains("precision") && !request["precision"].is_null()
                                  ? precision_from_json(request["precision"])
                                  : def.precision;
  const auto method =
      parse_projection_method(field<std::string>(request, "projection_method", "mds"));
  const auto projection_seed = field<std::uint64_t>(request, "projection_seed", 0);

  auto entry = std::make_shared<SessionEntry>();
  entry->sweep_id = sweep_id;
  entry->workspace = sweep->workspace;
  std::string id;
  {
    std::lock_guard lock(state_->mutex);
    id = state_->next_id("se");
  }
  entry->session = std::make_unique<EditSession>(stumpscope::open_session(
      sweep->result, sweep->workspace->training, complexity, precision, id, method,
      projection_seed));
  {
    std::lock_guard lock(state_->mutex);
    state_->sessions[id] = entry;
  }
  state_->snapshot("sessions", id, stumpscope::export_session(*entry->session));
  return ok({{"session_id", id},
             {"sweep_id", sweep_id},
             {"complexity_index", complexity},
             {"precision", to_json(precision)},
             {"version", entry->session->version()}},
            201);
}

ApiResponse Workflow::import_session(const json& request) {
  const auto sweep_id = field<std::string>(request, "sweep_id", "");
  const auto sweep = state_->sweep(sweep_id);
  if (!request.contains("document") || !request["document"].is_object()) {
    throw Error(ErrorCode::InvalidRequest, "import needs a 'document' object");
  }
  auto entry = std::make_shared<SessionEntry>();
  entry->sweep_id = sweep_id;
  entry->workspace = sweep->workspace;
  std::string id;
  {
    std::lock_guard lock(state_->mutex);
    id = state_->next_id("se");
  }
  entry->session = std::make_unique<EditSession>(
      stumpscope::import_session(request["document"], sweep->workspace->training, id));
  {
    std::lock_guard lock(state_->mutex);
    state_->sessions[id] = entry;
  }
  state_->snapshot("sessions", id, stumpscope::export_session(*entry->session));
  return ok({{"session_id", id},
             {"sweep_id", sweep_id},
             {"complexity_index", entry->session->base().complexity_index},
             {"precision", to_json(entry->session->precision())},
             {"version", entry->session->version()}},
            201);
}

ApiResponse Workflow::summary(const std::string& id) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  return ok(summary_document(entry->session->working(), entry->session->data(),
                             entry->workspace->dataset.feature_names));
}

ApiResponse Workflow::layout(const std::string& id, Index selected_stump) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  return ok(to_json(entry->session->layout_update(selected_stump)));
}

ApiResponse Workflow::histogram(const std::string& id, Index feature) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  const auto& data = entry->session->data();
  return ok(to_json(feature_histogram(data.X, data.gt, feature, entry->session->precision())));
}

ApiResponse Workflow::override_threshold(const std::string& id, const json& request) {
  const auto entry = state_->session(id);
  if (!request.contains("stump") || !request.contains("threshold")) {
    throw Error(ErrorCode::InvalidRequest, "override needs 'stump' and 'threshold'");
  }
  const auto stump = field<Index>(request, "stump", 0);
  const auto threshold = field<double>(request, "threshold", 0.0);
  const auto leaves = field<std::string>(request, "leaves", "refit");
  if (leaves != "refit" && leaves != "frozen") {
    throw Error(ErrorCode::InvalidRequest, "leaves must be 'refit' or 'frozen'");
  }
  std::lock_guard lock(entry->mutex);
  auto& session = *entry->session;
  const auto impact = session.override_threshold(
      stump, threshold, leaves == "refit" ? LeafMode::Refit : LeafMode::Frozen);
  json body = {{"impact", to_json(impact)},
               {"layout", to_json(session.layout_update(stump))},
               {"timestamp", session.log().back().timestamp},
               {"version", session.version()}};
  state_->snapshot("sessions", id, stumpscope::export_session(session));
  return ok(std::move(body));
}

ApiResponse Workflow::undo(const std::string& id) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  auto& session = *entry->session;
  const auto impact = session.undo();
  json body = {{"impact", to_json(impact)},
               {"layout", to_json(session.layout_update(impact.stump))},
               {"version", session.version()}};
  state_->snapshot("sessions", id, stumpscope::export_session(session));
  return ok(std::move(body));
}

ApiResponse Workflow::reset(const std::string& id) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  auto& session = *entry->session;
  session.reset();
  json body = {{"layout", to_json(session.layout_update(0))}, {"version", session.version()}};
  state_->snapshot("sessions", id, stumpscope::export_session(session));
  return ok(std::move(body));
}

ApiResponse Workflow::export_session(const std::string& id) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  return ok(stumpscope::export_session(*entry->session));
}

ApiResponse Workflow::tests(const std::string& id) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  const auto& ws = *entry->workspace;
  return ok(tests_document(test_table(entry->session->working(), ws.dataset, ws.split, &ws.target),
                           ws.dataset));
}

ApiResponse Workflow::flip(const std::string& id, Index sample, Index stump) {
  const auto entry = state_->session(id);
  std::lock_guard lock(entry->mutex);
  const auto& ws = *entry->workspace;
  const auto& test = ws.split.test_idx;
  if (std::find(test.begin(), test.end(), sample) == test.end()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "sample " + std::to_string(sample) + " is not in the test split");
  }
  const auto& model = entry->session->working();
  if (stump < 0 || stump >= static_cast<Index>(model.stumps.size())) {
    throw Error(ErrorCode::StumpIndexOutOfRange, "stump index out of range");
  }
  const auto& train = entry->session->data().X;
  const auto result = flip_threshold(model, stump, ws.dataset.X.row(sample),
                                     train.col(model.stumps[static_cast<std::size_t>(stump)].feature));
  return ok({{"sample", sample},
             {"stump", stump},
             {"flip", result ? to_json(*result) : json(nullptr)}});
}


namespace {

json error_body(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  res.set_content(r.body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidRequest, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidRequest, std::string("invalid JSON body: ") + e.what());
  }
}

std::string form_value(const httplib::Request& req, const std::string& key,
                       const std::string& fallback) {
  if (req.has_file(key)) return req.get_file_value(key).content;
  if (req.has_param(key)) return req.get_param_value(key);
  return fallback;
}

long long parse_integer(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidRequest, std::string(what) + " must be an integer");
  }
}

double parse_double(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidRequest, std::string(what) + " must be a number");
  }
}

std::string query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) {
    throw Error(ErrorCode::InvalidRequest, std::string("missing query parameter '") + key + "'");
  }
  return req.get_param_value(key);
}

}  // namespace

struct ApiServer::Impl {
  ServerOptions options;
  Workflow workflow;
  httplib::Server http;
  std::thread thread;

  explicit Impl(ServerOptions opts) : options(opts), workflow(std::move(opts)) { routes(); }

  template <class F>
  httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        send(res, f(req));
      } catch (const Error& e) {
        res.status = e.code() == ErrorCode::NotFound ? 404 : 422;
        res.set_content(error_body(std::string(to_string(e.code())), e.what()).dump(),
                        "application/json");
      } catch (const json::exception& e) {
        res.status = 422;
        res.set_content(error_body("InvalidRequest", e.what()).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_body("InternalError", e.what()).dump(), "application/json");
      }
    };
  }

  void routes() {
    auto& wf = workflow;
    const auto p = [](const httplib::Request& req, const char* key) {
      return req.path_params.at(key);
    };

    http.Get("/v1/health", wrap([](const httplib::Request&) {
               return ApiResponse{200, {{"status", "ok"}}, {}};
             }));

    http.Post("/v1/datasets", wrap([&wf](const httplib::Request& req) {
                DatasetSpec spec;
                std::string csv;
                if (req.is_multipart_form_data()) {
                  if (!req.has_file("file")) {
                    throw Error(ErrorCode::InvalidRequest, "multipart upload needs a 'file' part");
                  }
                  csv = req.get_file_value("file").content;
                  spec.label_column = form_value(req, "label_column", spec.label_column);
                  spec.positive_label = form_value(req, "positive_label", "");
                  if (const auto r = form_value(req, "split_ratio", ""); !r.empty()) {
                    spec.split_ratio = parse_double(r, "split_ratio");
                  }
                  if (const auto s = form_value(req, "split_seed", ""); !s.empty()) {
                    spec.split_seed = static_cast<std::uint64_t>(parse_integer(s, "split_seed"));
                  }
                } else {
                  const json body = parse_body(req);
                  csv = field<std::string>(body, "csv", "");
                  spec.label_column = field<std::string>(body, "label_column", spec.label_column);
                  spec.positive_label = field<std::string>(body, "positive_label", "");
                  spec.split_ratio = field<double>(body, "split_ratio", spec.split_ratio);
                  spec.split_seed = field<std::uint64_t>(body, "split_seed", 0);
                }
                return wf.create_dataset(csv, spec);
              }));

    http.Get("/v1/datasets/:id", wrap([&wf, p](const httplib::Request& req) {
               return wf.get_dataset(p(req, "id"));
             }));

    http.Post("/v1/datasets/:id/target", wrap([&wf, p](const httplib::Request& req) {
                TargetSpec spec;
                if (req.is_multipart_form_data()) {
                  if (!req.has_file("predictions")) {
                    throw Error(ErrorCode::InvalidRequest,
                                "multipart target needs a 'predictions' part");
                  }
                  spec.source = TargetSource::ExternalFile;
                  spec.predictions_csv = req.get_file_value("predictions").content;
                } else {
                  const json body = parse_body(req);
                  const auto source = field<std::string>(body, "source", "builtin");
                  if (source == "builtin") {
                    spec.source = TargetSource::Builtin;
                    spec.seed = field<std::uint64_t>(body, "seed", 0);
                  } else if (source == "file") {
                    spec.source = TargetSource::ExternalFile;
                    spec.predictions_csv = field<std::string>(body, "predictions_csv", "");
                  } else {
                    throw Error(ErrorCode::InvalidRequest, "source must be 'builtin' or 'file'");
                  }
                }
                return wf.set_target(p(req, "id"), spec);
              }));

    http.Post("/v1/datasets/:id/sweep", wrap([&wf, p](const httplib::Request& req) {
                const json body = parse_body(req);
                SweepConfig config;
                config.iterations = field<int>(body, "iterations", config.iterations);
                config.max_estimators = field<int>(
                    body, "max_estimators", field<int>(body, "max_n", config.max_estimators));
                config.seed = field<std::uint64_t>(body, "seed", config.seed);
                return wf.create_sweep(p(req, "id"), config);
              }));

    http.Get("/v1/jobs/:id", wrap([&wf, p](const httplib::Request& req) {
               return wf.get_job(p(req, "id"));
             }));
    http.Get("/v1/sweep/:id", wrap([&wf, p](const httplib::Request& req) {
               return wf.get_sweep(p(req, "id"));
             }));
    http.Get("/v1/sweep/:id/models/:k", wrap([&wf, p](const httplib::Request& req) {
               return wf.get_sweep_model(
                   p(req, "id"), static_cast<int>(parse_integer(p(req, "k"), "complexity index")));
             }));

    http.Post("/v1/sessions", wrap([&wf](const httplib::Request& req) {
                return wf.open_session(parse_body(req));
              }));
    http.Post("/v1/sessions/import", wrap([&wf](const httplib::Request& req) {
                return wf.import_session(parse_body(req));
              }));
    http.Get("/v1/sessions/:id/summary", wrap([&wf, p](const httplib::Request& req) {
               return wf.summary(p(req, "id"));
             }));
    http.Get("/v1/sessions/:id/layout", wrap([&wf, p](const httplib::Request& req) {
               const Index stump =
                   req.has_param("stump") ? parse_integer(req.get_param_value("stump"), "stump") : 0;
               return wf.layout(p(req, "id"), stump);
             }));
    http.Get("/v1/sessions/:id/histogram", wrap([&wf, p](const httplib::Request& req) {
               return wf.histogram(p(req, "id"), parse_integer(query(req, "feature"), "feature"));
             }));
    http.Post("/v1/sessions/:id/override", wrap([&wf, p](const httplib::Request& req) {
                return wf.override_threshold(p(req, "id"), parse_body(req));
              }));
    http.Post("/v1/sessions/:id/undo", wrap([&wf, p](const httplib::Request& req) {
                return wf.undo(p(req, "id"));
              }));
    http.Post("/v1/sessions/:id/reset", wrap([&wf, p](const httplib::Request& req) {
                return wf.reset(p(req, "id"));
              }));
    http.Get("/v1/sessions/:id/export", wrap([&wf, p](const httplib::Request& req) {
               return wf.export_session(p(req, "id"));
             }));
    http.Get("/v1/sessions/:id/tests", wrap([&wf, p](const httplib::Request& req) {
               return wf.tests(p(req, "id"));
             }));
    http.Get("/v1/sessions/:id/tests/:i/flip", wrap([&wf, p](const httplib::Request& req) {
               return wf.flip(p(req, "id"), parse_integer(p(req, "i"), "sample"),
                              parse_integer(query(req, "stump"), "stump"));
             }));

    if (options.ui_dir && std::filesystem::is_directory(*options.ui_dir)) {
      http.set_mount_point("/ui", options.ui_dir->string());
    }

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError",
                                   httplib::status_message(res.status))
                            .dump(),
                        "application/json");
      }
    });
  }

  int bind() {
    if (options.port == 0) return http.bind_to_any_port(options.host);
    return http.bind_to_port(options.host, options.port) ? options.port : -1;
  }
};

ApiServer::ApiServer(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

ApiServer::~ApiServer() { stop(); }

Workflow& ApiServer::workflow() noexcept { return impl_->workflow; }

int ApiServer::start() {
  const int port = impl_->bind();
  if (port <= 0) {
    throw Error(ErrorCode::IoError, "cannot bind " + impl_->options.host + ":" +
                                        std::to_string(impl_->options.port));
  }
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return port;
}

bool ApiServer::run() {
  if (impl_->bind() <= 0) return false;
  return impl_->http.listen_after_bind();
}

void ApiServer::stop() {
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace stumpscope
