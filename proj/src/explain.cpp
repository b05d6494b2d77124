#include "stumpscope/explain.hpp"

#include "stumpscope/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace stumpscope {

TestExplanation explain_case(const SurrogateModel& model,
                             const Eigen::Ref<const Eigen::RowVectorXd>& x, int gt,
                             std::optional<int> target_pred, Index sample) {
  TestExplanation row;
  row.sample = sample;
  row.gt = gt;
  row.target_pred = target_pred;
  row.scores = score(model, x);
  row.surrogate_pred = classify_scores(row.scores);
  row.margin = std::abs(row.scores(0) - row.scores(1));

  std::map<Index, double> by_feature;
  for (const auto& stump : model.stumps) {
    const ClassPair& p = leaf(stump, route_row(stump, x));
    by_feature[stump.feature] += stump.weight * (p(1) - p(0));
  }
  double total = 0.0;
  for (const auto& [f, v] : by_feature) total += std::abs(v);
  if (!(total > 0.0)) return row;

  for (const auto& [f, v] : by_feature) {
    row.contributions.push_back({f, v, std::abs(v) / total * 100.0, v > 0.0 ? 1 : 0});
  }
  std::stable_sort(row.contributions.begin(), row.contributions.end(),
                   [](const FeatureContribution& a, const FeatureContribution& b) {
                     return a.percent > b.percent;
                   });
  return row;
}

std::vector<TestExplanation> test_table(const SurrogateModel& model, const Dataset& ds,
                                        const Split& split,
                                        const TargetPredictions* target_preds) {
  std::vector<TestExplanation> rows;
  rows.reserve(split.test_idx.size());
  for (std::size_t k = 0; k < split.test_idx.size(); ++k) {
    const Index sample = split.test_idx[k];
    std::optional<int> target;
    if (target_preds && static_cast<Index>(k) < target_preds->test_pred.size()) {
      target = target_preds->test_pred(static_cast<Index>(k));
    }
    rows.push_back(explain_case(model, ds.X.row(sample), ds.y(sample), target, sample));
  }
  std::sort(rows.begin(), rows.end(), [](const TestExplanation& a, const TestExplanation& b) {
    const bool ca = a.surrogate_pred == a.gt;
    const bool cb = b.surrogate_pred == b.gt;
    if (ca != cb) return ca;
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.sample < b.sample;
  });
  return rows;
}

std::optional<FlipResult> flip_threshold(const SurrogateModel& model, Index stump_index,
                                         const Eigen::Ref<const Eigen::RowVectorXd>& x,
                                         const Eigen::Ref<const Eigen::VectorXd>& reference_values) {
  if (stump_index < 0 || stump_index >= static_cast<Index>(model.stumps.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "stump index out of range");
  }
  const auto& stump = model.stumps[static_cast<std::size_t>(stump_index)];
  const double v = x(stump.feature);
  const Side side = route(stump, v);
  const ClassPair scores = score(model, x);
  const int pred = classify_scores(scores);

  FlipResult result;
  result.old_threshold = stump.threshold;
  if (side == Side::Left) {
    // Need threshold <= v.
    double gap = kMinFlipEpsilon;
    bool have = false;
    double prev = 0.0;
    for (Index i = 0; i < reference_values.size(); ++i) {
      const double r = reference_values(i);
      if (r < v && (!have || r > prev)) {
        prev = r;
        have = true;
      }
    }
    if (have) gap = std::max(kMinFlipEpsilon, 0.5 * (v - prev));
    result.threshold = std::max(v - gap, 0.0);
    result.new_side = Side::Right;
  } else {
    // Need threshold > v.
    if (!(v < 1.0)) return std::nullopt;
    double gap = kMinFlipEpsilon;
    bool have = false;
    double next = 1.0;
    for (Index i = 0; i < reference_values.size(); ++i) {
      const double r = reference_values(i);
      if (r > v && (!have || r < next)) {
        next = r;
        have = true;
      }
    }
    if (have) gap = std::max(kMinFlipEpsilon, 0.5 * (next - v));
    result.threshold = std::min(v + gap, 1.0);
    result.new_side = Side::Left;
  }

  SurrogateModel moved = model;
  moved.stumps[static_cast<std::size_t>(stump_index)].threshold = result.threshold;
  result.new_scores = score(moved, x);
  result.new_pred = classify_scores(result.new_scores);
  if (result.new_pred == pred) return std::nullopt;
  return result;
}

}  // namespace stumpscope
