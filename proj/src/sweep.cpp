#include "stumpscope/sweep.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

namespace stumpscope {
namespace {

using StumpKey = std::pair<Index, double>;

StumpKey identity_key(const DecisionStump& stump, Precision p) {
  const auto d = decimals(p);
  return {stump.feature, d ? round_half_away(stump.threshold, *d) : stump.threshold};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(Uniqueness u) noexcept {
  switch (u) {
    case Uniqueness::Unique: return "unique";
    case Uniqueness::Original: return "original";
    case Uniqueness::Duplicated: return "duplicated";
  }
  return "unique";
}

std::vector<int> sample_complexities(int iterations, int max_n, std::uint64_t seed) {
  if (iterations < 1 || max_n < 1 || iterations > max_n) {
    throw Error(ErrorCode::RangeTooSmall,
                "cannot draw " + std::to_string(iterations) + " distinct values from [1, " +
                    std::to_string(max_n) + "]");
  }
  SplitMix64 rng(seed);
  const auto drawn = sample_without_replacement(static_cast<std::size_t>(max_n),
                                                static_cast<std::size_t>(iterations), rng);
  std::vector<int> out;
  out.reserve(drawn.size());
  for (auto v : drawn) out.push_back(static_cast<int>(v) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

double round_half_away(double value, int decimals) noexcept {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

SurrogateModel round_thresholds(const SurrogateModel& model, Precision precision) {
  SurrogateModel out = model;
  out.precision = precision;
  if (const auto d = decimals(precision)) {
    for (auto& stump : out.stumps) stump.threshold = round_half_away(stump.threshold, *d);
  }
  return out;
}

double fidelity(const SurrogateModel& model, const Matrix& X,
                const Labels& target_labels, Precision precision) {
  if (X.rows() != target_labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity: row and label counts differ");
  }
  if (X.rows() == 0) return 0.0;
  const SurrogateModel rounded = round_thresholds(model, precision);
  Index agree = 0;
  for (Index i = 0; i < X.rows(); ++i) {
    if (classify(rounded, X.row(i)) == target_labels(i)) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(X.rows());
}

Precision best_precision(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const double top = row.maxCoeff();
  for (const auto p : kPrecisionGrid) {
    if (row(precision_slot(p)) == top) return p;
  }
  return Precision::Full;
}

std::vector<double> stump_performance(const SurrogateModel& model, const Matrix& X,
                                      const Labels& gt) {
  std::vector<double> out;
  out.reserve(model.stumps.size());
  for (const auto& stump : model.stumps) {
    double sum = 0.0;
    for (Index i = 0; i < X.rows(); ++i) {
      sum += leaf(stump, route(stump, X(i, stump.feature)))(gt(i) == 1 ? 1 : 0);
    }
    const double mean = X.rows() > 0 ? sum / static_cast<double>(X.rows()) : 0.0;
    out.push_back(stump.weight * mean);
  }
  return out;
}

std::vector<std::vector<Uniqueness>> classify_uniqueness(
    const std::vector<SurrogateModel>& models, const std::vector<Precision>& best) {
  std::vector<std::vector<Uniqueness>> tags(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    const Precision p = best.at(m);
    std::set<StumpKey> seen;
    for (std::size_t prev = 0; prev < m; ++prev) {
      for (const auto& s : models[prev].stumps) seen.insert(identity_key(s, p));
    }
    std::map<StumpKey, int> within;
    for (const auto& s : models[m].stumps) ++within[identity_key(s, p)];
    for (const auto& s : models[m].stumps) {
      const auto key = identity_key(s, p);
      if (within[key] >= 2) {
        tags[m].push_back(Uniqueness::Duplicated);
      } else if (!seen.count(key)) {
        tags[m].push_back(Uniqueness::Unique);
      } else {
        tags[m].push_back(Uniqueness::Original);
      }
    }
  }
  return tags;
}

DefaultChoice default_model(const SweepResult& sweep) {
  if (sweep.models.empty()) {
    throw Error(ErrorCode::IndexOutOfRange, "default_model: empty sweep");
  }
  Index best_row = 0;
  double best_value = sweep.fidelity.row(0).maxCoeff();
  for (Index m = 1; m < sweep.fidelity.rows(); ++m) {
    const double v = sweep.fidelity.row(m).maxCoeff();
    if (v > best_value) {
      best_value = v;
      best_row = m;
    }
  }
  return {static_cast<int>(best_row) + 1, sweep.best_precision[static_cast<std::size_t>(best_row)]};
}

SweepResult run_sweep(const Matrix& X_train, const Labels& target_labels,
                      const Labels& gt_labels, const SweepConfig& config) {
  if (X_train.rows() != target_labels.size() || X_train.rows() != gt_labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "run_sweep: training arrays differ in length");
  }
  if (X_train.rows() == 0 || (target_labels.array() == target_labels(0)).all()) {
    throw Error(ErrorCode::DegenerateTraining, "target labels must contain both classes");
  }
  const auto complexities =
      sample_complexities(config.iterations, config.max_estimators, config.seed);

  SweepResult sweep;
  sweep.config = config;
  sweep.models.resize(complexities.size());
  parallel_for(complexities.size(), config.threads, [&](std::size_t m) {
    const int n_est = complexities[m];
    SurrogateModel model = fit_adaboost(X_train, target_labels, n_est,
                                        config.seed ^ static_cast<std::uint64_t>(n_est));
    model.complexity_index = static_cast<int>(m) + 1;
    fill_counts(model, X_train, gt_labels);
    sweep.models[m] = std::move(model);
  });

  const auto count = static_cast<Index>(sweep.models.size());
  sweep.fidelity = Matrix::Zero(count, static_cast<Index>(kPrecisionGrid.size()));
  for (Index m = 0; m < count; ++m) {
    const auto& model = sweep.models[static_cast<std::size_t>(m)];
    for (const auto p : kPrecisionGrid) {
      sweep.fidelity(m, precision_slot(p)) = fidelity(model, X_train, target_labels, p);
    }
    sweep.best_precision.push_back(best_precision(sweep.fidelity.row(m)));
    sweep.performance.push_back(stump_performance(model, X_train, gt_labels));
  }
  sweep.uniqueness = classify_uniqueness(sweep.models, sweep.best_precision);
  sweep.default_choice = default_model(sweep);
  return sweep;
}

}  // namespace stumpscope
