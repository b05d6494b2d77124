#pragma once

#include "oracle/samme_oracle.hpp"
#include "support.hpp"

#include <string>

namespace testing {

inline oracle::Rows to_rows(const Matrix& X) {
  oracle::Rows rows(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(X(i, j));
  return rows;
}

inline std::vector<int> to_vec(const Labels& y) { return {y.data(), y.data() + y.size()}; }

/// Empty string when fit_adaboost agrees exactly with the oracle.
inline std::string compare_with_oracle(const Matrix& X, const Labels& y, int rounds,
                                       std::uint64_t seed) {
  FitTrace trace;
  const auto model = fit_adaboost(X, y, rounds, seed, &trace);
  const auto ref = oracle::samme(to_rows(X), to_vec(y), rounds, seed);
  if (model.stumps.size() != ref.size()) return "stump count";
  for (std::size_t t = 0; t < ref.size(); ++t) {
    const auto& s = model.stumps[t];
    const auto& r = ref[t];
    const std::string at = " at round " + std::to_string(t);
    if (s.degenerate != r.degenerate) return "degenerate flag" + at;
    if (s.feature != r.feature) return "feature" + at;
    if (s.threshold != r.threshold) return "threshold" + at;
    if (s.p_left(0) != r.pl[0] || s.p_left(1) != r.pl[1]) return "p_left" + at;
    if (s.p_right(0) != r.pr[0] || s.p_right(1) != r.pr[1]) return "p_right" + at;
    if (s.weight != r.weight) return "weight" + at;
    if (t < trace.rounds.size()) {
      if (trace.rounds[t].error != r.error) return "error" + at;
      std::vector<long> cands(trace.rounds[t].candidate_features.begin(),
                              trace.rounds[t].candidate_features.end());
      if (cands != r.candidates) return "candidates" + at;
    }
  }
  return {};
}

}  // namespace testing
