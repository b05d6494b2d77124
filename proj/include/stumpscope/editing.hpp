#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/projection.hpp"
#include "stumpscope/sweep.hpp"
#include "stumpscope/types.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace stumpscope {

/// Training partition a session edits against.
struct TrainingData {
  Matrix X;
  Labels target;  // labels the surrogate mimics
  Labels gt;      // ground truth
};

enum class LeafMode { Refit, Frozen };

std::string_view to_string(LeafMode mode) noexcept;

struct EditRecord {
  Index stump = 0;
  double old_threshold = 0.0;
  double new_threshold = 0.0;
  LeafMode leaves = LeafMode::Refit;
  // Per-session logical clock, strictly increasing.
  std::uint64_t timestamp = 0;

  bool operator==(const EditRecord&) const = default;
};

struct MovedSample {
  Index sample = 0;
  Side from = Side::Left;
  Side to = Side::Left;
};

struct LeafState {
  ClassPair p_left{0.5, 0.5};
  ClassPair p_right{0.5, 0.5};
  ClassCounts counts_left{0, 0};
  ClassCounts counts_right{0, 0};
  bool degenerate = false;
};

LeafState leaf_state(const DecisionStump& stump);

struct EditImpact {
  Index stump = 0;
  double old_threshold = 0.0;
  double new_threshold = 0.0;
  std::vector<MovedSample> moved;
  double fidelity_before = 0.0;
  double fidelity_after = 0.0;
  LeafState leaves_before;
  LeafState leaves_after;
  std::vector<double> gini_before;
  std::vector<double> gini_after;
};

/// Aligned layout for the current working model plus the movement since
/// the previously reported layout.
struct LayoutUpdate {
  Layout layout;
  std::vector<Trajectory> trajectories;
  std::vector<Side> sides;  // of the selected stump
};

/// Applies one edit record to `model` (threshold replaced; leaves refit
/// with uniform weights against the target labels unless frozen; counts
/// refreshed from ground truth; W untouched).
void apply_edit(SurrogateModel& model, const EditRecord& record,
                const TrainingData& data);

SurrogateModel replay(const SurrogateModel& base,
                      const std::vector<EditRecord>& log,
                      const TrainingData& data);

/// Working copy of one surrogate with an edit log. Precision is fixed at
/// open: overrides are snapped to it. Not thread-safe; callers serialize
/// access per session.
class EditSession {
 public:
  EditSession(std::string id, std::shared_ptr<const TrainingData> data,
              SurrogateModel base, Precision precision,
              ProjectionMethod method = ProjectionMethod::Mds,
              std::uint64_t projection_seed = 0);

  const std::string& id() const noexcept { return id_; }
  const SurrogateModel& base() const noexcept { return base_; }
  const SurrogateModel& working() const noexcept { return working_; }
  const std::vector<EditRecord>& log() const noexcept { return log_; }
  Precision precision() const noexcept { return precision_; }
  const TrainingData& data() const noexcept { return *data_; }
  std::shared_ptr<const TrainingData> data_ptr() const noexcept { return data_; }
  const MembershipMatrix& memberships() const noexcept { return memberships_; }
  /// Working-model fidelity per precision, kPrecisionGrid order.
  const std::array<double, 5>& fidelity() const noexcept { return fidelity_; }
  double session_fidelity() const noexcept {
    return fidelity_[precision_slot(precision_)];
  }
  /// Bumped on every mutation.
  std::uint64_t version() const noexcept { return version_; }
  ProjectionMethod projection_method() const noexcept { return method_; }

  EditImpact override_threshold(Index stump, double threshold,
                                LeafMode leaves = LeafMode::Refit);
  EditImpact undo();
  void reset();

  /// Recomputes the projection if the working model changed since the last
  /// call, aligned to the previous layout.
  LayoutUpdate layout_update(Index selected_stump = 0);

  /// Replaces the log wholesale (import). Throws InvalidDocument when the
  /// replayed model differs from `expected_working`.
  void restore(std::vector<EditRecord> log,
               const SurrogateModel& expected_working);

 private:
  void rebuild_caches();
  EditImpact diff(Index stump, const SurrogateModel& before,
                  const MembershipMatrix& bits_before,
                  double fidelity_before) const;

  std::string id_;
  std::shared_ptr<const TrainingData> data_;
  SurrogateModel base_;
  SurrogateModel working_;
  Precision precision_;
  ProjectionMethod method_;
  std::uint64_t projection_seed_;
  std::vector<EditRecord> log_;
  std::uint64_t clock_ = 0;
  std::uint64_t version_ = 1;
  MembershipMatrix memberships_;
  std::array<double, 5> fidelity_{};

  Layout layout_;
  MembershipMatrix layout_bits_;
  std::uint64_t layout_version_ = 0;
  std::vector<Trajectory> last_trajectories_;
};

/// Session on round_thresholds(models[complexity_index - 1], precision).
EditSession open_session(const SweepResult& sweep,
                         std::shared_ptr<const TrainingData> data,
                         int complexity_index, Precision precision,
                         std::string id = "session",
                         ProjectionMethod method = ProjectionMethod::Mds,
                         std::uint64_t projection_seed = 0);

inline constexpr int kSessionSchemaVersion = 1;

nlohmann::json export_session(const EditSession& session);

/// Rebuilds a session from export_session output.
EditSession import_session(const nlohmann::json& document,
                           std::shared_ptr<const TrainingData> data,
                           std::string id);

}  // namespace stumpscope
