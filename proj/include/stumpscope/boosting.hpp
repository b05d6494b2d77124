#pragma once

#include "stumpscope/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace stumpscope {

/// One-level decision tree. Samples with x[feature] < threshold go Left.
struct DecisionStump {
  Index feature = 0;
  double threshold = 0.0;
  ClassPair p_left{0.5, 0.5};
  ClassPair p_right{0.5, 0.5};
  double weight = 0.0;
  // Unweighted ground-truth class counts per leaf, for display.
  ClassCounts counts_left{0, 0};
  ClassCounts counts_right{0, 0};
  // Set when a leaf received no samples and holds the neutral (0.5, 0.5).
  bool degenerate = false;

  bool operator==(const DecisionStump&) const = default;
};

inline Side route(const DecisionStump& stump, double value) noexcept {
  return value < stump.threshold ? Side::Left : Side::Right;
}

template <typename Row>
Side route_row(const DecisionStump& stump, const Eigen::DenseBase<Row>& x) {
  return route(stump, x(stump.feature));
}

inline const ClassPair& leaf(const DecisionStump& stump, Side side) noexcept {
  return side == Side::Left ? stump.p_left : stump.p_right;
}

/// Argmax of a leaf distribution, ties to class 0.
inline int leaf_label(const ClassPair& p) noexcept { return p(1) > p(0) ? 1 : 0; }

struct SurrogateModel {
  std::vector<DecisionStump> stumps;
  int n_estimators = 0;
  int complexity_index = 0;
  Precision precision = Precision::Full;

  bool operator==(const SurrogateModel&) const = default;
};

/// What happened in one boosting round, for trace comparison.
struct BoostingRound {
  std::vector<Index> candidate_features;
  double error = 0.0;       // clamped weighted error
  double raw_weight = 0.0;  // ln((1 - err) / err) before flooring
  double weight = 0.0;      // stored weight, max(raw_weight, 0)
};

struct FitTrace {
  std::vector<BoostingRound> rounds;
};

inline constexpr double kErrorClamp = 1e-10;
// Impurities closer than this are ties; resolved by (feature, threshold).
inline constexpr double kImpurityTieTolerance = 1e-12;

/// Best weighted-Gini split over `candidate_features`. Candidate thresholds
/// are midpoints of consecutive distinct values; ties go to the lower
/// feature index, then the lower threshold. If every candidate feature is
/// constant the stump routes everything Right (threshold 0) with p_right set
/// to the weighted class frequencies and `degenerate` set. Counts are
/// filled from `labels`; weight is left at 0.
DecisionStump fit_stump(const Matrix& X, const Labels& labels,
                        const Vector& sample_weights,
                        const std::vector<Index>& candidate_features);

/// Discrete AdaBoost (SAMME, K = 2) with ceil(sqrt(d)) candidate features
/// drawn per round from SplitMix64(seed).
///
/// A single-class label vector yields one degenerate stump voting for that
/// class.
SurrogateModel fit_adaboost(const Matrix& X, const Labels& target_labels,
                            int n_estimators, std::uint64_t seed,
                            FitTrace* trace = nullptr);

/// Number of candidate features drawn per round.
Index features_per_round(Index n_features) noexcept;

/// Weighted class votes (s0, s1) = sum_t W_t * p_leaf_t(x).
template <typename Row>
ClassPair score(const SurrogateModel& model, const Eigen::DenseBase<Row>& x) {
  ClassPair s = ClassPair::Zero();
  for (const auto& stump : model.stumps) {
    s += stump.weight * leaf(stump, route_row(stump, x));
  }
  return s;
}

/// Argmax of score, ties to class 0.
inline int classify_scores(const ClassPair& s) noexcept {
  return s(1) > s(0) ? 1 : 0;
}

template <typename Row>
int classify(const SurrogateModel& model, const Eigen::DenseBase<Row>& x) {
  return classify_scores(score(model, x));
}

/// classify applied to every row.
Labels classify_rows(const SurrogateModel& model, const Matrix& X);

/// Recomputes leaf distributions and counts from `labels` under the stump's
/// current threshold. Uniform weights unless `instance_weights` is given.
/// Weight W is kept. An empty side gets (0.5, 0.5), zero counts, and sets
/// `degenerate`.
DecisionStump refit_leaves(const DecisionStump& stump, const Matrix& X,
                           const Labels& labels,
                           const std::optional<Vector>& instance_weights = {});

/// Unweighted per-leaf class counts of `labels`.
std::pair<ClassCounts, ClassCounts> leaf_counts(const DecisionStump& stump,
                                                const Matrix& X,
                                                const Labels& labels);

/// Replaces every stump's counts with ground-truth counts.
void fill_counts(SurrogateModel& model, const Matrix& X, const Labels& gt);

}  // namespace stumpscope
