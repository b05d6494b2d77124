#include "stumpscope/boosting.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stumpscope {
namespace {

// Weighted binary Gini of one side, scaled by the side's weight.
double scaled_gini(double w0, double w1) {
  const double total = w0 + w1;
  if (!(total > 0.0)) return 0.0;
  const double q0 = w0 / total;
  const double q1 = w1 / total;
  return total * (1.0 - q0 * q0 - q1 * q1);
}

ClassPair normalized(double w0, double w1) {
  const double total = w0 + w1;
  if (!(total > 0.0)) return {0.5, 0.5};
  return {w0 / total, w1 / total};
}

bool single_class(const Labels& y) {
  return y.size() == 0 || (y.array() == y(0)).all();
}

}  // namespace

Index features_per_round(Index n_features) noexcept {
  Index k = 0;
  while (k * k < n_features) ++k;
  return std::max<Index>(k, 1);
}

DecisionStump fit_stump(const Matrix& X, const Labels& labels,
                        const Vector& sample_weights,
                        const std::vector<Index>& candidate_features) {
  const Index n = X.rows();
  if (labels.size() != n || sample_weights.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "fit_stump: X, labels and weights disagree in length");
  }
  if (candidate_features.empty()) {
    throw Error(ErrorCode::InvalidRequest, "fit_stump: no candidate features");
  }
  double total0 = 0.0, total1 = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (sample_weights(i) < 0.0) {
      throw Error(ErrorCode::InvalidRequest, "fit_stump: negative sample weight");
    }
    (labels(i) == 1 ? total1 : total0) += sample_weights(i);
  }
  const double total = total0 + total1;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidRequest, "fit_stump: sample weights sum to zero");
  }

  std::vector<Index> features(candidate_features);
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  bool found = false;
  Index best_feature = features.front();
  double best_threshold = 0.0;
  double best_impurity = 0.0;

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (const Index f : features) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return X(a, f) < X(b, f); });
    double left0 = 0.0, left1 = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const Index i = order[k];
      (labels(i) == 1 ? left1 : left0) += sample_weights(i);
      const double here = X(i, f);
      const double next = X(order[k + 1], f);
      if (!(next > here)) continue;
      const double impurity =
          (scaled_gini(left0, left1) + scaled_gini(total0 - left0, total1 - left1)) / total;
      if (!found || impurity < best_impurity - kImpurityTieTolerance) {
        found = true;
        best_feature = f;
        best_threshold = 0.5 * (here + next);
        best_impurity = impurity;
      }
    }
  }

  DecisionStump stump;
  stump.feature = best_feature;
  if (!found) {
    stump.threshold = 0.0;
    stump.p_left = {0.5, 0.5};
    stump.p_right = normalized(total0, total1);
    stump.degenerate = true;
    const auto ones = static_cast<int>((labels.array() == 1).count());
    stump.counts_right = {static_cast<int>(n) - ones, ones};
    return stump;
  }
  stump.threshold = best_threshold;

  // Leaf distributions from a direct pass in row order.
  double l0 = 0.0, l1 = 0.0, r0 = 0.0, r1 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const bool left = X(i, best_feature) < best_threshold;
    const bool positive = labels(i) == 1;
    const double w = sample_weights(i);
    if (left) {
      (positive ? l1 : l0) += w;
      ++stump.counts_left(positive ? 1 : 0);
    } else {
      (positive ? r1 : r0) += w;
      ++stump.counts_right(positive ? 1 : 0);
    }
  }
  stump.p_left = normalized(l0, l1);
  stump.p_right = normalized(r0, r1);
  return stump;
}

SurrogateModel fit_adaboost(const Matrix& X, const Labels& target_labels,
                            int n_estimators, std::uint64_t seed, FitTrace* trace) {
  const Index n = X.rows();
  const Index d = X.cols();
  if (target_labels.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "fit_adaboost: label count differs from row count");
  }
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::DegenerateTraining, "fit_adaboost: empty training matrix");
  }
  if (n_estimators < 1) {
    throw Error(ErrorCode::InvalidRequest, "fit_adaboost: n_estimators must be positive");
  }

  SurrogateModel model;
  if (single_class(target_labels)) {
    DecisionStump stump;
    stump.feature = 0;
    stump.threshold = 0.0;
    stump.degenerate = true;
    const int c = target_labels(0);
    stump.p_right = c == 1 ? ClassPair{0.0, 1.0} : ClassPair{1.0, 0.0};
    stump.counts_right(c) = static_cast<int>(n);
    stump.weight = std::log((1.0 - kErrorClamp) / kErrorClamp);
    model.stumps.push_back(stump);
    model.n_estimators = 1;
    return model;
  }

  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  SplitMix64 rng(seed);
  const auto k = static_cast<std::size_t>(features_per_round(d));
  std::vector<char> missed(static_cast<std::size_t>(n));

  for (int t = 0; t < n_estimators; ++t) {
    const auto drawn = sample_without_replacement(static_cast<std::size_t>(d), k, rng);
    std::vector<Index> candidates(drawn.begin(), drawn.end());
    std::sort(candidates.begin(), candidates.end());

    DecisionStump stump = fit_stump(X, target_labels, w, candidates);

    double err = 0.0;
    for (Index i = 0; i < n; ++i) {
      const int pred = leaf_label(leaf(stump, route(stump, X(i, stump.feature))));
      missed[static_cast<std::size_t>(i)] = pred != target_labels(i);
      if (missed[static_cast<std::size_t>(i)]) err += w(i);
    }
    err = std::clamp(err, kErrorClamp, 1.0 - kErrorClamp);
    const double raw_weight = std::log((1.0 - err) / err);
    const double weight = std::max(raw_weight, 0.0);
    stump.weight = weight;

    const double boost = std::exp(weight);
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (missed[static_cast<std::size_t>(i)]) w(i) *= boost;
      sum += w(i);
    }
    for (Index i = 0; i < n; ++i) w(i) /= sum;

    if (trace) trace->rounds.push_back({candidates, err, raw_weight, weight});
    model.stumps.push_back(stump);
  }
  model.n_estimators = n_estimators;
  return model;
}

Labels classify_rows(const SurrogateModel& model, const Matrix& X) {
  Labels out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) out(i) = classify(model, X.row(i));
  return out;
}

DecisionStump refit_leaves(const DecisionStump& stump, const Matrix& X,
                           const Labels& labels,
                           const std::optional<Vector>& instance_weights) {
  if (labels.size() != X.rows() ||
      (instance_weights && instance_weights->size() != X.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "refit_leaves: length mismatch");
  }
  DecisionStump out = stump;
  out.counts_left = {0, 0};
  out.counts_right = {0, 0};
  double l0 = 0.0, l1 = 0.0, r0 = 0.0, r1 = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const double w = instance_weights ? (*instance_weights)(i) : 1.0;
    const int c = labels(i) == 1 ? 1 : 0;
    if (route(stump, X(i, stump.feature)) == Side::Left) {
      (c ? l1 : l0) += w;
      ++out.counts_left(c);
    } else {
      (c ? r1 : r0) += w;
      ++out.counts_right(c);
    }
  }
  out.p_left = normalized(l0, l1);
  out.p_right = normalized(r0, r1);
  out.degenerate = out.counts_left.sum() == 0 || out.counts_right.sum() == 0;
  return out;
}

std::pair<ClassCounts, ClassCounts> leaf_counts(const DecisionStump& stump,
                                                const Matrix& X, const Labels& labels) {
  ClassCounts left{0, 0}, right{0, 0};
  for (Index i = 0; i < X.rows(); ++i) {
    auto& side = route(stump, X(i, stump.feature)) == Side::Left ? left : right;
    ++side(labels(i) == 1 ? 1 : 0);
  }
  return {left, right};
}

void fill_counts(SurrogateModel& model, const Matrix& X, const Labels& gt) {
  for (auto& stump : model.stumps) {
    std::tie(stump.counts_left, stump.counts_right) = leaf_counts(stump, X, gt);
  }
}

}  // namespace stumpscope
