#pragma once

#include "stumpscope/types.hpp"

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace stumpscope {

struct NormParam {
  double min = 0.0;
  double max = 0.0;
};

/// Binary-classification table with features normalized to [0, 1].
/// Class 1 is the positive label.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix X_raw;
  Matrix X;
  Labels y;
  std::array<std::string, 2> class_names;
  std::vector<NormParam> norm_params;

  Index n_samples() const noexcept { return X.rows(); }
  Index n_features() const noexcept { return X.cols(); }
};

struct Split {
  IndexList train_idx;
  IndexList test_idx;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

/// Parses a header-first CSV. Every non-label column must be numeric, the
/// label column must hold exactly two distinct values, `positive_label` maps
/// to class 1.
Dataset load_csv(std::istream& source, const std::string& label_column,
                 const std::string& positive_label);

/// Per-column affine map onto [0, 1]; constant columns map to 0.
std::pair<Matrix, std::vector<NormParam>> normalize_minmax(const Matrix& X_raw);

/// Inverse of normalize_minmax for non-constant columns (constant columns
/// come back as their single value).
Matrix denormalize(const Matrix& X, const std::vector<NormParam>& params);

/// Per class: shuffle indices with SplitMix64(seed), put
/// round(ratio * class_size) (clamped to [1, size - 1]) into train.
/// Index lists are returned sorted ascending.
Split stratified_split(const Dataset& ds, double ratio, std::uint64_t seed);

}  // namespace stumpscope
