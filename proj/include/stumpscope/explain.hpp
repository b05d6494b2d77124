#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/dataset.hpp"
#include "stumpscope/target.hpp"
#include "stumpscope/types.hpp"

#include <optional>
#include <vector>

namespace stumpscope {

struct FeatureContribution {
  Index feature = 0;
  double value = 0.0;    // positive pushes toward class 1
  double percent = 0.0;  // |value| / sum |value| * 100
  int toward = 0;
};

struct TestExplanation {
  Index sample = 0;
  int gt = 0;
  int surrogate_pred = 0;
  std::optional<int> target_pred;
  ClassPair scores{0.0, 0.0};
  double margin = 0.0;
  // Largest percent first, ties by feature index. Empty when every
  // contribution is zero.
  std::vector<FeatureContribution> contributions;
};

TestExplanation explain_case(const SurrogateModel& model,
                             const Eigen::Ref<const Eigen::RowVectorXd>& x,
                             int gt, std::optional<int> target_pred = {},
                             Index sample = 0);

/// Test rows: correctly classified first, then misclassified, each block by
/// margin descending (ties by sample index). The last row is the
/// misclassified case closest to swapping.
std::vector<TestExplanation> test_table(
    const SurrogateModel& model, const Dataset& ds, const Split& split,
    const TargetPredictions* target_preds = nullptr);

struct FlipResult {
  double old_threshold = 0.0;
  double threshold = 0.0;
  Side new_side = Side::Left;
  ClassPair new_scores{0.0, 0.0};
  int new_pred = 0;
};

/// Smallest threshold move on one stump, leaves frozen, that changes
/// classify(model, x). Only the placement that moves x to the other side
/// can flip it: just below x's value (x - eps) when x routes Left, just
/// above (x + eps) when it routes Right, where eps is half the gap to the
/// nearest distinct value of `reference_values` on that side (at least
/// 1e-6). Nullopt when that move does not flip the prediction or would
/// leave [0, 1].
std::optional<FlipResult> flip_threshold(
    const SurrogateModel& model, Index stump_index,
    const Eigen::Ref<const Eigen::RowVectorXd>& x,
    const Eigen::Ref<const Eigen::VectorXd>& reference_values);

inline constexpr double kMinFlipEpsilon = 1e-6;

}  // namespace stumpscope
