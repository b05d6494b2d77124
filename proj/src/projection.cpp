#include "stumpscope/projection.hpp"

#include "stumpscope/error.hpp"
#include "stumpscope/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stumpscope {
namespace {

// Curve parameters of the low-dimensional similarity 1 / (1 + a d^(2b)),
// the usual fit for min_dist = 0.1, spread = 1.
constexpr double kCurveA = 1.577;
constexpr double kCurveB = 0.8951;

struct Edge {
  Index i;
  Index j;
  double weight;
};

std::vector<Edge> knn_graph(const Matrix& dist, int n_neighbors) {
  const Index n = dist.rows();
  const Index k = std::min<Index>(n_neighbors, n - 1);
  Matrix w = Matrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return dist(i, a) < dist(i, b); });
    std::vector<Index> nbrs;
    for (Index a : order) {
      if (a == i) continue;
      nbrs.push_back(a);
      if (static_cast<Index>(nbrs.size()) == k) break;
    }
    if (nbrs.empty()) continue;
    const double rho = dist(i, nbrs.front());
    double sigma = 0.0;
    for (Index a : nbrs) sigma += dist(i, a) - rho;
    sigma = sigma > 0.0 ? sigma / static_cast<double>(nbrs.size()) : 1.0;
    for (Index a : nbrs) w(i, a) = std::exp(-(dist(i, a) - rho) / sigma);
  }
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double a = w(i, j), b = w(j, i);
      const double sym = a + b - a * b;
      if (sym > 0.0) edges.push_back({i, j, sym});
    }
  }
  return edges;
}

double clip(double g) { return std::clamp(g, -4.0, 4.0); }

}  // namespace

std::string_view to_string(ProjectionMethod method) noexcept {
  return method == ProjectionMethod::Mds ? "mds" : "neighbor-embedding";
}

ProjectionMethod parse_projection_method(std::string_view text) {
  if (text == "mds") return ProjectionMethod::Mds;
  if (text == "neighbor-embedding") return ProjectionMethod::NeighborEmbedding;
  throw Error(ErrorCode::InvalidRequest,
              "projection method must be 'mds' or 'neighbor-embedding'");
}

MembershipMatrix membership_vectors(const SurrogateModel& model, const Matrix& X) {
  const auto t_count = static_cast<Index>(model.stumps.size());
  MembershipMatrix bits(X.rows(), t_count);
  for (Index t = 0; t < t_count; ++t) {
    const auto& stump = model.stumps[static_cast<std::size_t>(t)];
    for (Index i = 0; i < X.rows(); ++i) {
      bits(i, t) = route(stump, X(i, stump.feature)) == Side::Left ? 0 : 1;
    }
  }
  return bits;
}

Coords2<double> neighbor_embedding(const MembershipMatrix& bits, std::uint64_t seed,
                                   const NeighborEmbeddingOptions& options) {
  const Index n = bits.rows();
  if (n < 2) return Coords2<double>::Zero(n, 2);
  const Matrix dist = hamming_matrix<double>(bits).cwiseSqrt();
  if (dist.maxCoeff() == 0.0) return Coords2<double>::Zero(n, 2);
  const auto edges = knn_graph(dist, options.n_neighbors);

  SplitMix64 rng(seed);
  Coords2<double> y = classical_mds(hamming_matrix<double>(bits));
  const double extent = y.cwiseAbs().maxCoeff();
  if (extent > 0.0) y *= 10.0 / extent;
  for (Index i = 0; i < n; ++i) {
    y(i, 0) += 1e-3 * (rng.uniform() - 0.5);
    y(i, 1) += 1e-3 * (rng.uniform() - 0.5);
  }

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double alpha =
        options.learning_rate * (1.0 - static_cast<double>(epoch) / options.epochs);
    for (const auto& e : edges) {
      if (rng.uniform() >= e.weight) continue;
      Eigen::Vector2d diff = (y.row(e.i) - y.row(e.j)).transpose();
      const double d2 = diff.squaredNorm();
      if (d2 > 0.0) {
        const double coeff = -2.0 * kCurveA * kCurveB * std::pow(d2, kCurveB - 1.0) /
                             (1.0 + kCurveA * std::pow(d2, kCurveB));
        for (int c = 0; c < 2; ++c) {
          const double g = clip(coeff * diff(c));
          y(e.i, c) += alpha * g;
          y(e.j, c) -= alpha * g;
        }
      }
      for (int s = 0; s < options.negative_samples; ++s) {
        const auto k = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        if (k == e.i) continue;
        diff = (y.row(e.i) - y.row(k)).transpose();
        const double nd2 = diff.squaredNorm();
        const double coeff =
            2.0 * kCurveB / ((0.001 + nd2) * (1.0 + kCurveA * std::pow(nd2, kCurveB)));
        for (int c = 0; c < 2; ++c) {
          y(e.i, c) += alpha * (nd2 > 0.0 ? clip(coeff * diff(c)) : 4.0);
        }
      }
    }
  }
  y.rowwise() -= y.colwise().mean();
  canonicalize_signs(y);
  return y;
}

Layout project(const MembershipMatrix& bits, ProjectionMethod method, std::uint64_t seed) {
  Layout layout;
  layout.method = method;
  if (method == ProjectionMethod::Mds) {
    layout.coords = classical_mds(hamming_matrix<double>(bits));
  } else {
    layout.coords = neighbor_embedding(bits, seed);
  }
  return layout;
}

std::vector<Trajectory> trajectories(const Layout& prev, const Layout& aligned_next,
                                     const MembershipMatrix& prev_bits,
                                     const MembershipMatrix& next_bits) {
  const Index n = aligned_next.coords.rows();
  if (prev.coords.rows() != n || prev_bits.rows() != n || next_bits.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "trajectories: layouts differ in sample count");
  }
  std::vector<Trajectory> out(static_cast<std::size_t>(n));
  const bool comparable = prev_bits.cols() == next_bits.cols();
  for (Index i = 0; i < n; ++i) {
    auto& t = out[static_cast<std::size_t>(i)];
    t.from = prev.coords.row(i).transpose();
    t.to = aligned_next.coords.row(i).transpose();
    t.changed = !comparable || prev_bits.row(i) != next_bits.row(i);
  }
  return out;
}

std::vector<Side> local_side_labels(const SurrogateModel& model, Index stump_index,
                                    const Matrix& X) {
  if (stump_index < 0 || stump_index >= static_cast<Index>(model.stumps.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "stump index out of range");
  }
  const auto& stump = model.stumps[static_cast<std::size_t>(stump_index)];
  std::vector<Side> sides(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    sides[static_cast<std::size_t>(i)] = route(stump, X(i, stump.feature));
  }
  return sides;
}

}  // namespace stumpscope
