#pragma once

#include "stumpscope/boosting.hpp"
#include "stumpscope/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cstdint>
#include <string_view>
#include <vector>

namespace stumpscope {

/// bits(i, t) == 0 iff sample i routes Left in stump t.
using MembershipMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class ProjectionMethod { Mds, NeighborEmbedding };

std::string_view to_string(ProjectionMethod method) noexcept;
ProjectionMethod parse_projection_method(std::string_view text);

template <typename Scalar>
using Coords2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

/// 2-D embedding of the training samples. `reference` is the id of the
/// layout this one was aligned to (0 when unaligned).
template <typename Scalar>
struct BasicLayout {
  Coords2<Scalar> coords;
  ProjectionMethod method = ProjectionMethod::Mds;
  std::uint64_t id = 0;
  std::uint64_t reference = 0;
};

using Layout = BasicLayout<double>;

struct Trajectory {
  Eigen::Vector2d from;
  Eigen::Vector2d to;
  bool changed = false;
};

MembershipMatrix membership_vectors(const SurrogateModel& model,
                                    const Matrix& X);

/// Pairwise Hamming counts between membership rows.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hamming_matrix(
    const MembershipMatrix& bits) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat b = bits.cast<Scalar>();
  // |a - b|^2 = |a|^2 + |b|^2 - 2 a.b, exact for 0/1 entries.
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sq = b.rowwise().squaredNorm();
  Mat d = (-Scalar(2) * (b * b.transpose())).colwise() + sq;
  d.rowwise() += sq.transpose();
  return d;
}

/// Flips each axis so its first clearly nonzero coordinate is positive.
template <typename Derived>
void canonicalize_signs(Eigen::MatrixBase<Derived>& coords) {
  using Scalar = typename Derived::Scalar;
  for (Index axis = 0; axis < coords.cols(); ++axis) {
    const Scalar scale = coords.col(axis).cwiseAbs().maxCoeff();
    if (!(scale > Scalar(0))) continue;
    for (Index i = 0; i < coords.rows(); ++i) {
      const Scalar v = coords(i, axis);
      if (std::abs(v) > scale * Scalar(1e-9)) {
        if (v < Scalar(0)) coords.col(axis) *= Scalar(-1);
        break;
      }
    }
  }
}

/// Classical (Torgerson) MDS of a matrix of squared dissimilarities:
/// B = -1/2 J D J, coordinates from the two largest eigenpairs as
/// v * sqrt(lambda). Axes whose eigenvalue is not clearly positive are
/// zero. Result is centered and sign-canonicalized.
template <typename Derived>
Coords2<typename Derived::Scalar> classical_mds(
    const Eigen::MatrixBase<Derived>& squared_dissimilarity) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = squared_dissimilarity.rows();
  Coords2<Scalar> coords = Coords2<Scalar>::Zero(n, 2);
  if (n < 2) return coords;

  Mat b = squared_dissimilarity;
  const auto row_mean = b.rowwise().mean().eval();
  const auto col_mean = b.colwise().mean().eval();
  const Scalar all_mean = b.mean();
  b.colwise() -= row_mean;
  b.rowwise() -= col_mean;
  b.array() += all_mean;
  b *= Scalar(-0.5);

  Eigen::SelfAdjointEigenSolver<Mat> solver(b);
  const auto& values = solver.eigenvalues();  // ascending
  const Scalar top = values(n - 1);
  const Scalar tol = Scalar(1e-9) * std::max(Scalar(1), std::abs(top));
  for (Index axis = 0; axis < 2 && axis < n; ++axis) {
    const Scalar lambda = values(n - 1 - axis);
    if (lambda > tol) {
      coords.col(axis) = solver.eigenvectors().col(n - 1 - axis) * std::sqrt(lambda);
    }
  }
  coords.rowwise() -= coords.colwise().mean();
  canonicalize_signs(coords);
  return coords;
}

struct NeighborEmbeddingOptions {
  int n_neighbors = 15;
  int epochs = 200;
  int negative_samples = 5;
  double learning_rate = 1.0;
};

/// Seeded UMAP-style layout: symmetric kNN graph over Hamming distances,
/// initialized from MDS, optimized by edge sampling with negative samples.
Coords2<double> neighbor_embedding(const MembershipMatrix& bits,
                                   std::uint64_t seed,
                                   const NeighborEmbeddingOptions& options = {});

/// Layout of the membership rows. MDS is deterministic and ignores `seed`.
Layout project(const MembershipMatrix& bits,
               ProjectionMethod method = ProjectionMethod::Mds,
               std::uint64_t seed = 0);

/// Orthogonal R (rotation or reflection) minimizing |next * R - prev|^2.
template <typename DerivedPrev, typename DerivedNext>
Eigen::Matrix<typename DerivedPrev::Scalar, 2, 2> procrustes_rotation(
    const Eigen::MatrixBase<DerivedPrev>& prev,
    const Eigen::MatrixBase<DerivedNext>& next) {
  using Scalar = typename DerivedPrev::Scalar;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  const Mat2 cross = next.transpose() * prev;
  Eigen::JacobiSVD<Mat2> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar procrustes_residual(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).squaredNorm();
}

template <typename Scalar>
BasicLayout<Scalar> align(const BasicLayout<Scalar>& prev,
                          const BasicLayout<Scalar>& next) {
  BasicLayout<Scalar> out = next;
  if (prev.coords.rows() != next.coords.rows() || next.coords.rows() == 0) {
    return out;
  }
  out.coords = next.coords * procrustes_rotation(prev.coords, next.coords);
  out.reference = prev.id;
  return out;
}

/// One segment per sample; `changed` marks membership rows that differ.
std::vector<Trajectory> trajectories(const Layout& prev,
                                     const Layout& aligned_next,
                                     const MembershipMatrix& prev_bits,
                                     const MembershipMatrix& next_bits);

/// Column `stump_index` of the membership matrix as sides.
std::vector<Side> local_side_labels(const SurrogateModel& model,
                                    Index stump_index, const Matrix& X);

}  // namespace stumpscope
