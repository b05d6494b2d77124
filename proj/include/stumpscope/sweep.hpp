#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/types.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace stumpscope {

enum class Uniqueness { Unique, Original, Duplicated };

std::string_view to_string(Uniqueness u) noexcept;

struct SweepConfig {
  int iterations = 50;
  int max_estimators = 50;
  std::uint64_t seed = 0;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct DefaultChoice {
  int complexity_index = 1;
  Precision precision = Precision::Full;
};

/// Family of surrogates fit to the same target labels.
struct SweepResult {
  SweepConfig config;
  std::vector<SurrogateModel> models;
  // models.size() x 5, columns in kPrecisionGrid order.
  Matrix fidelity;
  std::vector<Precision> best_precision;
  std::vector<std::vector<Uniqueness>> uniqueness;
  std::vector<std::vector<double>> performance;
  DefaultChoice default_choice;
};

/// `iterations` distinct values from [1, max_n], sorted ascending.
std::vector<int> sample_complexities(int iterations, int max_n,
                                     std::uint64_t seed);

double round_half_away(double value, int decimals) noexcept;

/// Rounds every threshold; identity for Precision::Full.
SurrogateModel round_thresholds(const SurrogateModel& model,
                                Precision precision);

/// Fraction of rows where the rounded model agrees with `target_labels`.
double fidelity(const SurrogateModel& model, const Matrix& X,
                const Labels& target_labels, Precision precision);

/// Smallest precision reaching the row maximum; Full ranks last.
Precision best_precision(const Eigen::Ref<const Eigen::RowVectorXd>& row);

/// W_t times the mean leaf probability of each sample's ground-truth class.
std::vector<double> stump_performance(const SurrogateModel& model,
                                      const Matrix& X, const Labels& gt);

/// Tags every stump. A stump's identity is (feature, threshold rounded to
/// its model's best precision); smaller models' thresholds are rounded to
/// the same precision before comparison.
std::vector<std::vector<Uniqueness>> classify_uniqueness(
    const std::vector<SurrogateModel>& models,
    const std::vector<Precision>& best);

/// Highest best-precision fidelity, ties to the lowest complexity.
DefaultChoice default_model(const SweepResult& sweep);

/// Fits one surrogate per sampled complexity against `target_labels`,
/// using seed ^ n_estimators per model. Stump counts hold ground-truth
/// counts from `gt_labels`.
SweepResult run_sweep(const Matrix& X_train, const Labels& target_labels,
                      const Labels& gt_labels, const SweepConfig& config);

}  // namespace stumpscope
