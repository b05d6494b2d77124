#pragma once

#include "stumpscope/dataset.hpp"
#include "stumpscope/types.hpp"

#include <cstdint>
#include <istream>
#include <string_view>
#include <vector>

namespace stumpscope {

enum class TargetSource { Builtin, ExternalFile };

std::string_view to_string(TargetSource source) noexcept;

/// Hard labels of the model being explained, aligned with a Split.
struct TargetPredictions {
  Labels train_pred;
  Labels test_pred;
  TargetSource source = TargetSource::Builtin;
};

struct TreeOptions {
  int n_trees = 100;
  int max_depth = 4;
  int min_samples_split = 2;
};

/// Array-encoded binary tree. Leaves have feature == -1.
struct TreeNode {
  Index feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  int predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// Bagged depth-limited CART ensemble with majority vote (ties to class 0).
struct BuiltinTarget {
  std::vector<Tree> trees;
  Index n_features = 0;
  std::uint64_t seed = 0;
  TreeOptions options;
};

BuiltinTarget fit_builtin_target(const Dataset& ds, const Split& split,
                                 std::uint64_t seed,
                                 const TreeOptions& options = {});

/// Lower-level entry used by fit_builtin_target.
BuiltinTarget fit_bagged_trees(const Matrix& X, const Labels& y,
                               std::uint64_t seed,
                               const TreeOptions& options = {});

Labels predict(const BuiltinTarget& target, const Matrix& X);

TargetPredictions predictions_for_split(const BuiltinTarget& target,
                                        const Dataset& ds, const Split& split);

/// Reads an `index,label` CSV that must label every sample referenced by
/// `split`.
TargetPredictions load_external_predictions(std::istream& source,
                                            const Split& split);

}  // namespace stumpscope
