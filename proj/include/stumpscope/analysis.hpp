#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/types.hpp"

#include <vector>

namespace stumpscope {

struct Segment {
  double lo = 0.0;
  double hi = 1.0;
  int top_class = 0;
  double top_value = 0.0;     // >= 0
  double bottom_value = 0.0;  // <= 0
};

/// Combined vote of all stumps on one feature, piecewise over [0, 1].
struct FeatureSummary {
  Index feature = 0;
  std::vector<Index> stumps;  // indices into the model, boosting order
  std::vector<double> boundaries;
  std::vector<Segment> segments;
};

FeatureSummary summarize_feature(const SurrogateModel& model, Index feature);

struct FeatureScore {
  Index feature = 0;
  double score = 0.0;
};

/// Every feature of `X`, sorted by summed stump performance (descending,
/// ties by feature index).
std::vector<FeatureScore> feature_importance(const SurrogateModel& model,
                                             const Matrix& X,
                                             const Labels& gt);

/// Weighted mean of leaf Gini indices over unweighted GT counts.
double gini_impurity(const DecisionStump& stump, const Matrix& X,
                     const Labels& gt);

/// Gini from leaf counts directly.
double gini_from_counts(const ClassCounts& left, const ClassCounts& right) noexcept;

struct StumpRank {
  Index stump = 0;
  double gini = 0.0;
  double performance = 0.0;
};

/// Descending impurity, ties in boosting order. Front is the default pick.
std::vector<StumpRank> rank_stumps(const SurrogateModel& model,
                                   const Matrix& X, const Labels& gt);

struct SampleGridRow {
  Index sample = 0;
  Side side = Side::Left;
  double p_gt = 0.0;
  int gt = 0;
};

struct SampleGrid {
  std::vector<SampleGridRow> left;
  std::vector<SampleGridRow> right;
};

/// Rows split by routing, each side sorted by p_gt descending (ties by
/// sample index).
SampleGrid sample_grid(const DecisionStump& stump, const Matrix& X,
                       const Labels& gt);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  ClassCounts counts{0, 0};
};

/// 10 uniform bins for one decimal, 20 otherwise. The last bin includes 1.0.
std::vector<HistogramBin> feature_histogram(const Matrix& X, const Labels& gt,
                                            Index feature, Precision precision);

}  // namespace stumpscope
