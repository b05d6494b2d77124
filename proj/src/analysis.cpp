#include "stumpscope/analysis.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace stumpscope {

FeatureSummary summarize_feature(const SurrogateModel& model, Index feature) {
  FeatureSummary summary;
  summary.feature = feature;
  for (std::size_t t = 0; t < model.stumps.size(); ++t) {
    if (model.stumps[t].feature == feature) {
      summary.stumps.push_back(static_cast<Index>(t));
      summary.boundaries.push_back(model.stumps[t].threshold);
    }
  }
  if (summary.stumps.empty()) return summary;

  auto& b = summary.boundaries;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());

  std::vector<double> edges;
  edges.reserve(b.size() + 2);
  edges.push_back(0.0);
  for (double t : b) edges.push_back(std::clamp(t, 0.0, 1.0));
  edges.push_back(1.0);

  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    Segment seg;
    seg.lo = edges[s];
    seg.hi = edges[s + 1];
    const double probe = 0.5 * (seg.lo + seg.hi);
    ClassPair votes = ClassPair::Zero();
    for (const Index t : summary.stumps) {
      const auto& stump = model.stumps[static_cast<std::size_t>(t)];
      votes += stump.weight * leaf(stump, route(stump, probe));
    }
    seg.top_class = votes(1) > votes(0) ? 1 : 0;
    seg.top_value = votes(seg.top_class);
    seg.bottom_value = -votes(1 - seg.top_class);
    summary.segments.push_back(seg);
  }
  return summary;
}

std::vector<FeatureScore> feature_importance(const SurrogateModel& model, const Matrix& X,
                                             const Labels& gt) {
  std::vector<FeatureScore> scores(static_cast<std::size_t>(X.cols()));
  for (Index f = 0; f < X.cols(); ++f) scores[static_cast<std::size_t>(f)].feature = f;
  const auto perf = stump_performance(model, X, gt);
  for (std::size_t t = 0; t < model.stumps.size(); ++t) {
    const auto f = model.stumps[t].feature;
    if (f >= 0 && f < X.cols()) scores[static_cast<std::size_t>(f)].score += perf[t];
  }
  std::stable_sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    return a.score > b.score;
  });
  return scores;
}

double gini_from_counts(const ClassCounts& left, const ClassCounts& right) noexcept {
  const auto side = [](const ClassCounts& c) {
    const double n = c.sum();
    if (n == 0) return 0.0;
    const double q0 = c(0) / n, q1 = c(1) / n;
    return n * (1.0 - q0 * q0 - q1 * q1);
  };
  const double n = left.sum() + right.sum();
  if (n == 0) return 0.0;
  return (side(left) + side(right)) / n;
}

double gini_impurity(const DecisionStump& stump, const Matrix& X, const Labels& gt) {
  const auto [left, right] = leaf_counts(stump, X, gt);
  return gini_from_counts(left, right);
}

std::vector<StumpRank> rank_stumps(const SurrogateModel& model, const Matrix& X,
                                   const Labels& gt) {
  const auto perf = stump_performance(model, X, gt);
  std::vector<StumpRank> ranks;
  for (std::size_t t = 0; t < model.stumps.size(); ++t) {
    ranks.push_back({static_cast<Index>(t), gini_impurity(model.stumps[t], X, gt), perf[t]});
  }
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const StumpRank& a, const StumpRank& b) { return a.gini > b.gini; });
  return ranks;
}

SampleGrid sample_grid(const DecisionStump& stump, const Matrix& X, const Labels& gt) {
  SampleGrid grid;
  for (Index i = 0; i < X.rows(); ++i) {
    const Side side = route(stump, X(i, stump.feature));
    const int c = gt(i) == 1 ? 1 : 0;
    SampleGridRow row{i, side, leaf(stump, side)(c), c};
    (side == Side::Left ? grid.left : grid.right).push_back(row);
  }
  const auto by_p = [](const SampleGridRow& a, const SampleGridRow& b) { return a.p_gt > b.p_gt; };
  std::stable_sort(grid.left.begin(), grid.left.end(), by_p);
  std::stable_sort(grid.right.begin(), grid.right.end(), by_p);
  return grid;
}

std::vector<HistogramBin> feature_histogram(const Matrix& X, const Labels& gt, Index feature,
                                            Precision precision) {
  if (feature < 0 || feature >= X.cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature index out of range");
  }
  const int n_bins = precision == Precision::One ? 10 : 20;
  std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    bins[static_cast<std::size_t>(b)].lo = static_cast<double>(b) / n_bins;
    bins[static_cast<std::size_t>(b)].hi = static_cast<double>(b + 1) / n_bins;
  }
  for (Index i = 0; i < X.rows(); ++i) {
    const double v = std::clamp(X(i, feature), 0.0, 1.0);
    const int b = std::min(static_cast<int>(std::floor(v * n_bins)), n_bins - 1);
    ++bins[static_cast<std::size_t>(b)].counts(gt(i) == 1 ? 1 : 0);
  }
  return bins;
}

}  // namespace stumpscope
