#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/dataset.hpp"
#include "stumpscope/pipeline.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace testing {

using namespace stumpscope;

// Test-local SplitMix64; kept separate from the library generator.
struct Gen {
  std::uint64_t s;
  explicit Gen(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin() { return (next() & 1) != 0; }
};

// Values on a coarse grid so ties between candidate splits occur.
inline Matrix grid_matrix(Gen& g, Index n, Index d, int levels = 5) {
  Matrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = g.range(0, levels - 1) / double(levels - 1);
  return X;
}

inline Labels random_labels(Gen& g, Index n, bool both_classes = true) {
  Labels y(n);
  for (Index i = 0; i < n; ++i) y(i) = g.coin() ? 1 : 0;
  if (both_classes && n >= 2) {
    y(0) = 0;
    y(1) = 1;
  }
  return y;
}

inline ClassPair random_pair(Gen& g) {
  const double p = g.unit();
  return {1.0 - p, p};
}

inline SurrogateModel random_model(Gen& g, int stumps, Index d) {
  SurrogateModel m;
  for (int t = 0; t < stumps; ++t) {
    DecisionStump s;
    s.feature = g.range(0, static_cast<int>(d) - 1);
    s.threshold = g.range(1, 19) / 20.0;
    s.p_left = random_pair(g);
    s.p_right = random_pair(g);
    s.weight = 0.05 + 3.0 * g.unit();
    m.stumps.push_back(s);
  }
  m.n_estimators = stumps;
  return m;
}

inline std::string data_path(const std::string& name) {
  return std::string(STUMPSCOPE_DATA_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline DatasetSpec breast_cancer_spec() {
  DatasetSpec spec;
  spec.label_column = "class";
  spec.positive_label = "malignant";
  spec.split_ratio = 0.8;
  spec.split_seed = 0;
  return spec;
}

inline std::string breast_cancer_csv() { return read_text(data_path("breast_cancer_wisconsin.csv")); }

}  // namespace testing

namespace testing {

struct Fixture {
  std::shared_ptr<const Workspace> ws;
  SweepResult sweep;
};

/// Breast-cancer workspace with the builtin target and a 50-model sweep.
inline const Fixture& breast_cancer_fixture(std::uint64_t sweep_seed = 7) {
  static std::map<std::uint64_t, Fixture> cache;
  auto it = cache.find(sweep_seed);
  if (it != cache.end()) return it->second;
  auto loaded = load_dataset(breast_cancer_csv(), breast_cancer_spec());
  auto preds = build_target(loaded.dataset, loaded.split, TargetSpec{});
  Fixture f;
  f.ws = make_workspace(std::move(loaded.dataset), std::move(loaded.split), std::move(preds));
  SweepConfig cfg;
  cfg.seed = sweep_seed;
  f.sweep = sweep_workspace(*f.ws, cfg);
  return cache.emplace(sweep_seed, std::move(f)).first->second;
}

}  // namespace testing
