#include "stumpscope/editing.hpp"

#include "stumpscope/analysis.hpp"
#include "stumpscope/error.hpp"
#include "stumpscope/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace stumpscope {

std::string_view to_string(LeafMode mode) noexcept {
  return mode == LeafMode::Refit ? "refit" : "frozen";
}

LeafState leaf_state(const DecisionStump& stump) {
  return {stump.p_left, stump.p_right, stump.counts_left, stump.counts_right,
          stump.degenerate};
}

void apply_edit(SurrogateModel& model, const EditRecord& record, const TrainingData& data) {
  auto& stump = model.stumps.at(static_cast<std::size_t>(record.stump));
  stump.threshold = record.new_threshold;
  if (record.leaves == LeafMode::Refit) {
    stump = refit_leaves(stump, data.X, data.target);
  }
  std::tie(stump.counts_left, stump.counts_right) = leaf_counts(stump, data.X, data.gt);
}

SurrogateModel replay(const SurrogateModel& base, const std::vector<EditRecord>& log,
                      const TrainingData& data) {
  SurrogateModel model = base;
  for (const auto& record : log) apply_edit(model, record, data);
  return model;
}

EditSession::EditSession(std::string id, std::shared_ptr<const TrainingData> data,
                         SurrogateModel base, Precision precision, ProjectionMethod method,
                         std::uint64_t projection_seed)
    : id_(std::move(id)),
      data_(std::move(data)),
      base_(std::move(base)),
      working_(base_),
      precision_(precision),
      method_(method),
      projection_seed_(projection_seed) {
  rebuild_caches();
}

void EditSession::rebuild_caches() {
  memberships_ = membership_vectors(working_, data_->X);
  for (const auto p : kPrecisionGrid) {
    fidelity_[static_cast<std::size_t>(precision_slot(p))] =
        stumpscope::fidelity(working_, data_->X, data_->target, p);
  }
}

EditImpact EditSession::diff(Index stump, const SurrogateModel& before,
                             const MembershipMatrix& bits_before,
                             double fidelity_before) const {
  EditImpact impact;
  impact.stump = stump;
  const auto s = static_cast<std::size_t>(stump);
  impact.old_threshold = before.stumps[s].threshold;
  impact.new_threshold = working_.stumps[s].threshold;
  for (Index i = 0; i < memberships_.rows(); ++i) {
    if (bits_before(i, stump) != memberships_(i, stump)) {
      impact.moved.push_back({i, bits_before(i, stump) ? Side::Right : Side::Left,
                              memberships_(i, stump) ? Side::Right : Side::Left});
    }
  }
  impact.fidelity_before = fidelity_before;
  impact.fidelity_after = session_fidelity();
  impact.leaves_before = leaf_state(before.stumps[s]);
  impact.leaves_after = leaf_state(working_.stumps[s]);
  for (std::size_t t = 0; t < working_.stumps.size(); ++t) {
    impact.gini_before.push_back(gini_impurity(before.stumps[t], data_->X, data_->gt));
    impact.gini_after.push_back(gini_impurity(working_.stumps[t], data_->X, data_->gt));
  }
  return impact;
}

EditImpact EditSession::override_threshold(Index stump, double threshold, LeafMode leaves) {
  if (stump < 0 || stump >= static_cast<Index>(working_.stumps.size())) {
    throw Error(ErrorCode::StumpIndexOutOfRange,
                "stump " + std::to_string(stump) + " not in model of " +
                    std::to_string(working_.stumps.size()));
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::ThresholdOutOfDomain, "threshold must lie in [0, 1]");
  }
  if (const auto d = decimals(precision_)) threshold = round_half_away(threshold, *d);

  const SurrogateModel before = working_;
  const MembershipMatrix bits_before = memberships_;
  const double fidelity_before = session_fidelity();

  EditRecord record{stump, working_.stumps[static_cast<std::size_t>(stump)].threshold,
                    threshold, leaves, ++clock_};
  apply_edit(working_, record, *data_);
  log_.push_back(record);
  ++version_;
  rebuild_caches();
  return diff(stump, before, bits_before, fidelity_before);
}

EditImpact EditSession::undo() {
  if (log_.empty()) throw Error(ErrorCode::NothingToUndo, "edit log is empty");
  const SurrogateModel before = working_;
  const MembershipMatrix bits_before = memberships_;
  const double fidelity_before = session_fidelity();
  const Index stump = log_.back().stump;
  log_.pop_back();
  working_ = replay(base_, log_, *data_);
  ++version_;
  rebuild_caches();
  return diff(stump, before, bits_before, fidelity_before);
}

void EditSession::reset() {
  log_.clear();
  working_ = base_;
  ++version_;
  rebuild_caches();
}

void EditSession::restore(std::vector<EditRecord> log, const SurrogateModel& expected_working) {
  SurrogateModel replayed = replay(base_, log, *data_);
  if (!(replayed == expected_working)) {
    throw Error(ErrorCode::InvalidDocument,
                "replaying the edit log does not reproduce the exported working model");
  }
  working_ = std::move(replayed);
  log_ = std::move(log);
  for (const auto& r : log_) clock_ = std::max(clock_, r.timestamp);
  ++version_;
  rebuild_caches();
}

LayoutUpdate EditSession::layout_update(Index selected_stump) {
  if (layout_version_ == 0) {
    layout_ = project(memberships_, method_, projection_seed_);
    layout_.id = version_;
    layout_bits_ = memberships_;
    last_trajectories_ = trajectories(layout_, layout_, layout_bits_, memberships_);
    layout_version_ = version_;
  } else if (layout_version_ != version_) {
    Layout next = project(memberships_, method_, projection_seed_);
    next.id = version_;
    Layout aligned = align(layout_, next);
    last_trajectories_ = trajectories(layout_, aligned, layout_bits_, memberships_);
    layout_ = std::move(aligned);
    layout_bits_ = memberships_;
    layout_version_ = version_;
  }
  LayoutUpdate update;
  update.layout = layout_;
  update.trajectories = last_trajectories_;
  if (selected_stump >= 0 && selected_stump < static_cast<Index>(working_.stumps.size())) {
    update.sides = local_side_labels(working_, selected_stump, data_->X);
  }
  return update;
}

EditSession open_session(const SweepResult& sweep, std::shared_ptr<const TrainingData> data,
                         int complexity_index, Precision precision, std::string id,
                         ProjectionMethod method, std::uint64_t projection_seed) {
  if (complexity_index < 1 || complexity_index > static_cast<int>(sweep.models.size())) {
    throw Error(ErrorCode::IndexOutOfRange,
                "complexity index " + std::to_string(complexity_index) + " outside [1, " +
                    std::to_string(sweep.models.size()) + "]");
  }
  return EditSession(std::move(id), std::move(data),
                     round_thresholds(sweep.models[static_cast<std::size_t>(complexity_index - 1)],
                                      precision),
                     precision, method, projection_seed);
}

json export_session(const EditSession& session) {
  json doc;
  doc["schema_version"] = kSessionSchemaVersion;
  doc["session_id"] = session.id();
  doc["complexity_index"] = session.base().complexity_index;
  doc["n_estimators"] = session.base().n_estimators;
  doc["precision"] = to_json(session.precision());
  doc["projection_method"] = std::string(to_string(session.projection_method()));
  doc["base_model"] = to_json(session.base());
  doc["working_model"] = to_json(session.working());
  json log = json::array();
  for (const auto& r : session.log()) log.push_back(to_json(r));
  doc["edit_log"] = std::move(log);
  json fid = json::object();
  for (const auto p : kPrecisionGrid) {
    fid[to_string(p)] = session.fidelity()[static_cast<std::size_t>(precision_slot(p))];
  }
  doc["fidelity"] = std::move(fid);
  return doc;
}

EditSession import_session(const json& document, std::shared_ptr<const TrainingData> data,
                           std::string id) {
  try {
    if (document.at("schema_version").get<int>() != kSessionSchemaVersion) {
      throw Error(ErrorCode::InvalidDocument, "unsupported session schema version");
    }
    const Precision precision = precision_from_json(document.at("precision"));
    const ProjectionMethod method =
        document.contains("projection_method")
            ? parse_projection_method(document.at("projection_method").get<std::string>())
            : ProjectionMethod::Mds;
    SurrogateModel base = model_from_json(document.at("base_model"));
    const SurrogateModel working = model_from_json(document.at("working_model"));
    std::vector<EditRecord> log;
    for (const auto& r : document.at("edit_log")) log.push_back(edit_record_from_json(r));
    for (const auto& r : log) {
      if (r.stump < 0 || r.stump >= static_cast<Index>(base.stumps.size())) {
        throw Error(ErrorCode::InvalidDocument, "edit log references a missing stump");
      }
    }
    for (const auto& s : base.stumps) {
      if (s.feature < 0 || s.feature >= data->X.cols()) {
        throw Error(ErrorCode::InvalidDocument, "model references a missing feature");
      }
    }
    EditSession session(std::move(id), std::move(data), std::move(base), precision, method);
    session.restore(std::move(log), working);
    return session;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidDocument, std::string("malformed session document: ") + e.what());
  }
}

}  // namespace stumpscope
