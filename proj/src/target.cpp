#include "stumpscope/target.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/rng.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <string>

namespace stumpscope {
namespace {

struct Node {
  std::vector<Index> rows;  // bootstrap rows, with repetition
  int depth = 0;
};

int majority(const ClassCounts& counts) { return counts(1) > counts(0) ? 1 : 0; }

ClassCounts count_labels(const Labels& y, const std::vector<Index>& rows) {
  ClassCounts c{0, 0};
  for (auto r : rows) ++c(y(r));
  return c;
}

double gini_sum(const ClassCounts& c) {
  const double n = c.sum();
  if (n == 0) return 0.0;
  const double p0 = c(0) / n, p1 = c(1) / n;
  return n * (1.0 - p0 * p0 - p1 * p1);
}

struct BestSplit {
  Index feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

BestSplit best_split(const Matrix& X, const Labels& y, const std::vector<Index>& rows) {
  BestSplit best;
  const ClassCounts total = count_labels(y, rows);
  best.impurity = gini_sum(total);
  std::vector<Index> order(rows);
  for (Index f = 0; f < X.cols(); ++f) {
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return X(a, f) < X(b, f); });
    ClassCounts left{0, 0};
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      ++left(y(order[k]));
      const double here = X(order[k], f);
      const double next = X(order[k + 1], f);
      if (!(next > here)) continue;
      const double imp = gini_sum(left) + gini_sum(total - left);
      if (imp < best.impurity - 1e-12) {
        best = {f, 0.5 * (here + next), imp};
      }
    }
  }
  return best;
}

Tree grow_tree(const Matrix& X, const Labels& y, std::vector<Index> rows,
               const TreeOptions& options) {
  Tree tree;
  std::vector<std::pair<int, Node>> stack;
  tree.nodes.push_back({});
  stack.push_back({0, Node{std::move(rows), 0}});
  while (!stack.empty()) {
    auto [id, node] = std::move(stack.back());
    stack.pop_back();
    const ClassCounts counts = count_labels(y, node.rows);
    tree.nodes[static_cast<std::size_t>(id)].label = majority(counts);
    const bool pure = counts(0) == 0 || counts(1) == 0;
    if (pure || node.depth >= options.max_depth ||
        static_cast<int>(node.rows.size()) < options.min_samples_split) {
      continue;
    }
    const BestSplit split = best_split(X, y, node.rows);
    if (split.feature < 0) continue;
    Node left{{}, node.depth + 1}, right{{}, node.depth + 1};
    for (auto r : node.rows) {
      (X(r, split.feature) < split.threshold ? left : right).rows.push_back(r);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    auto& parent = tree.nodes[static_cast<std::size_t>(id)];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left_id;
    parent.right = left_id + 1;
    stack.push_back({left_id + 1, std::move(right)});
    stack.push_back({left_id, std::move(left)});
  }
  return tree;
}

}  // namespace

std::string_view to_string(TargetSource source) noexcept {
  return source == TargetSource::Builtin ? "builtin" : "external-file";
}

int Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t id = 0;
  while (nodes[id].feature >= 0) {
    const auto& n = nodes[id];
    id = static_cast<std::size_t>(x(n.feature) < n.threshold ? n.left : n.right);
  }
  return nodes[id].label;
}

BuiltinTarget fit_bagged_trees(const Matrix& X, const Labels& y, std::uint64_t seed,
                               const TreeOptions& options) {
  if (X.rows() == 0 || (y.array() == 0).all() || (y.array() == 1).all()) {
    throw Error(ErrorCode::DegenerateTraining,
                "target training set must contain both classes");
  }
  BuiltinTarget target;
  target.n_features = X.cols();
  target.seed = seed;
  target.options = options;
  SplitMix64 rng(seed);
  const auto n = static_cast<std::uint64_t>(X.rows());
  for (int t = 0; t < options.n_trees; ++t) {
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) r = static_cast<Index>(rng.below(n));
    target.trees.push_back(grow_tree(X, y, std::move(rows), options));
  }
  return target;
}

BuiltinTarget fit_builtin_target(const Dataset& ds, const Split& split,
                                 std::uint64_t seed, const TreeOptions& options) {
  return fit_bagged_trees(select_rows(ds.X, split.train_idx),
                          select_rows(ds.y, split.train_idx), seed, options);
}

Labels predict(const BuiltinTarget& target, const Matrix& X) {
  if (X.rows() == 0) return Labels(0);
  if (X.cols() != target.n_features) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(target.n_features) + " columns, got " +
                    std::to_string(X.cols()));
  }
  Labels out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    int votes = 0;
    for (const auto& tree : target.trees) votes += tree.predict(X.row(i));
    out(i) = 2 * votes > static_cast<int>(target.trees.size()) ? 1 : 0;
  }
  return out;
}

TargetPredictions predictions_for_split(const BuiltinTarget& target, const Dataset& ds,
                                        const Split& split) {
  return {predict(target, select_rows(ds.X, split.train_idx)),
          predict(target, select_rows(ds.X, split.test_idx)), TargetSource::Builtin};
}

TargetPredictions load_external_predictions(std::istream& source, const Split& split) {
  std::string line;
  if (!std::getline(source, line)) {
    throw Error(ErrorCode::InvalidDocument, "predictions file is empty");
  }
  std::map<Index, int> labels;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    ++row;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidDocument,
                  "predictions row " + std::to_string(row) + " is not 'index,label'");
    }
    Index index = 0;
    const auto idx_text = std::string_view(line).substr(0, comma);
    const auto [p, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
    if (ec != std::errc{} || p != idx_text.data() + idx_text.size() || index < 0) {
      throw Error(ErrorCode::InvalidDocument,
                  "predictions row " + std::to_string(row) + " has a bad index");
    }
    const auto label = line.substr(comma + 1);
    if (label != "0" && label != "1") {
      throw Error(ErrorCode::InvalidLabel,
                  "index " + std::to_string(index) + " has label '" + label + "'");
    }
    if (!labels.emplace(index, label == "1" ? 1 : 0).second) {
      throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(index) + " repeated");
    }
  }
  IndexList all(split.train_idx);
  all.insert(all.end(), split.test_idx.begin(), split.test_idx.end());
  std::sort(all.begin(), all.end());
  for (auto i : all) {
    if (!labels.count(i)) {
      throw Error(ErrorCode::MissingIndex, "no prediction for index " + std::to_string(i));
    }
  }
  TargetPredictions out;
  out.source = TargetSource::ExternalFile;
  out.train_pred.resize(static_cast<Index>(split.train_idx.size()));
  out.test_pred.resize(static_cast<Index>(split.test_idx.size()));
  for (std::size_t k = 0; k < split.train_idx.size(); ++k) {
    out.train_pred(static_cast<Index>(k)) = labels.at(split.train_idx[k]);
  }
  for (std::size_t k = 0; k < split.test_idx.size(); ++k) {
    out.test_pred(static_cast<Index>(k)) = labels.at(split.test_idx[k]);
  }
  return out;
}

}  // namespace stumpscope
