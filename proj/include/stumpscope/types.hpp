#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stumpscope {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = Eigen::VectorXi;
using IndexList = std::vector<Index>;

/// Per-class quantity, class 0 first.
using ClassPair = Eigen::Vector2d;
using ClassCounts = Eigen::Vector2i;

enum class Side { Left, Right };

std::string_view to_string(Side side) noexcept;

/// Threshold precision: 1..4 decimals or full double precision.
enum class Precision { One = 1, Two = 2, Three = 3, Four = 4, Full = 5 };

/// Grid order used for fidelity matrices: 1, 2, 3, 4, full.
inline constexpr std::array<Precision, 5> kPrecisionGrid = {
    Precision::One, Precision::Two, Precision::Three, Precision::Four,
    Precision::Full};

/// Column of `p` in a fidelity matrix.
constexpr int precision_slot(Precision p) noexcept {
  return static_cast<int>(p) - 1;
}

/// Decimal places, or nullopt for full precision.
constexpr std::optional<int> decimals(Precision p) noexcept {
  if (p == Precision::Full) return std::nullopt;
  return static_cast<int>(p);
}

std::string to_string(Precision p);

/// Accepts "1".."4" and "full". Throws Error(InvalidPrecision).
Precision parse_precision(std::string_view text);

/// Rows of `X` selected by `rows`, in order.
Matrix select_rows(const Matrix& X, const IndexList& rows);
Labels select_rows(const Labels& y, const IndexList& rows);

}  // namespace stumpscope
