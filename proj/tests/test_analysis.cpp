#include "checks.hpp"
#include "support.hpp"

#include "stumpscope/analysis.hpp"
#include "stumpscope/error.hpp"

#include <doctest.h>

using namespace stumpscope;
using testing::Gen;

namespace {

DecisionStump make(Index f, double t, double w, ClassPair l, ClassPair r) {
  DecisionStump s;
  s.feature = f;
  s.threshold = t;
  s.weight = w;
  s.p_left = l;
  s.p_right = r;
  return s;
}

SurrogateModel model_of(std::vector<DecisionStump> s) {
  SurrogateModel m;
  m.stumps = std::move(s);
  m.n_estimators = static_cast<int>(m.stumps.size());
  return m;
}

}  // namespace

TEST_CASE("single stump summary mirrors the stump") {
  const auto m = model_of({make(0, 0.5, 1.0, {0.8, 0.2}, {0.3, 0.7})});
  const auto s = summarize_feature(m, 0);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[0].lo == 0.0);
  CHECK(s.segments[0].hi == 0.5);
  CHECK(s.segments[0].top_class == 0);
  CHECK(s.segments[0].top_value == doctest::Approx(0.8));
  CHECK(s.segments[0].bottom_value == doctest::Approx(-0.2));
  CHECK(s.segments[1].top_class == 1);
  CHECK(s.segments[1].top_value == doctest::Approx(0.7));
}

TEST_CASE("two stumps give three segments summed by hand") {
  const auto m = model_of({make(0, 0.3, 1.0, {0.8, 0.2}, {0.4, 0.6}),
                           make(0, 0.6, 0.5, {0.6, 0.4}, {0.2, 0.8})});
  const auto s = summarize_feature(m, 0);
  REQUIRE(s.segments.size() == 3);
  CHECK(s.segments[0].top_class == 0);
  CHECK(s.segments[0].top_value == doctest::Approx(1.1));
  CHECK(s.segments[0].bottom_value == doctest::Approx(-0.4));
  // [0.3, 0.6): 1 x (0.4, 0.6) + 0.5 x (0.6, 0.4) = (0.7, 0.8)
  CHECK(s.segments[1].top_class == 1);
  CHECK(s.segments[1].top_value == doctest::Approx(0.8));
  CHECK(s.segments[1].bottom_value == doctest::Approx(-0.7));
  CHECK(s.stumps == std::vector<Index>{0, 1});
}

TEST_CASE("identical thresholds collapse into one boundary") {
  const auto m = model_of({make(0, 0.4, 1.0, {0.8, 0.2}, {0.4, 0.6}),
                           make(0, 0.4, 2.0, {0.6, 0.4}, {0.2, 0.8})});
  CHECK(summarize_feature(m, 0).segments.size() == 2);
  CHECK(summarize_feature(m, 1).segments.empty());
}

TEST_CASE("segment totals equal the summed weights") {
  Gen g(91);
  for (int rep = 0; rep < 500; ++rep) {
    const auto m = testing::random_model(g, g.range(1, 12), 3);
    CHECK(testing::segment_algebra_error(m, 3) <= 1e-9);
  }
}

TEST_CASE("feature importance") {
  Gen g(4);
  Matrix X(30, 5);
  for (Index i = 0; i < X.size(); ++i) X(i) = g.unit();
  const Labels gt = testing::random_labels(g, 30);

  auto m = testing::random_model(g, 4, 5);
  for (auto& s : m.stumps) s.feature = 3;
  const auto imp = feature_importance(m, X, gt);
  REQUIRE(imp.size() == 5);
  CHECK(imp[0].feature == 3);
  for (std::size_t k = 1; k < 5; ++k) CHECK(imp[k].score == 0.0);
  CHECK(imp[1].feature == 0);  // zero scores keep feature order

  auto two = testing::random_model(g, 6, 2);
  const auto perf = stump_performance(two, X, gt);
  double s0 = 0, s1 = 0;
  for (std::size_t t = 0; t < 6; ++t) (two.stumps[t].feature == 0 ? s0 : s1) += perf[t];
  const auto order = feature_importance(two, X, gt);
  CHECK(order[0].feature == (s1 > s0 ? 1 : 0));
  CHECK(order[0].score == doctest::Approx(std::max(s0, s1)));
}

TEST_CASE("dominant feature ranks first on synthetic data") {
  Gen g(12);
  const Index n = 300;
  Matrix X(n, 4);
  Labels y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < 4; ++j) X(i, j) = g.unit();
    y(i) = X(i, 2) + 0.1 * (g.unit() - 0.5) > 0.5 ? 1 : 0;
  }
  const auto m = fit_adaboost(X, y, 12, 5);
  CHECK(feature_importance(m, X, y)[0].feature == 2);
}

TEST_CASE("gini arithmetic") {
  CHECK(gini_from_counts({4, 0}, {0, 4}) == 0.0);
  CHECK(gini_from_counts({2, 2}, {0, 0}) == 0.5);
  CHECK(gini_from_counts({3, 1}, {1, 3}) == doctest::Approx(0.375));
  CHECK(gini_from_counts({0, 0}, {0, 0}) == 0.0);
}

TEST_CASE("ranking puts impure stumps first and keeps boosting order on ties") {
  Matrix X(4, 1);
  X << 0.1, 0.2, 0.8, 0.9;
  Labels gt(4);
  gt << 0, 0, 1, 1;
  const auto pure = make(0, 0.5, 1, {1, 0}, {0, 1});
  const auto impure = make(0, 0.15, 1, {1, 0}, {0.3, 0.7});
  auto r = rank_stumps(model_of({pure, impure}), X, gt);
  CHECK(r[0].stump == 1);
  r = rank_stumps(model_of({pure, pure, impure, impure}), X, gt);
  CHECK(r[0].stump == 2);
  CHECK(r[1].stump == 3);
  CHECK(r[2].stump == 0);
  CHECK(r[3].stump == 1);

  Gen g(6);
  for (int rep = 0; rep < 100; ++rep) {
    Matrix Xr(20, 3);
    for (Index i = 0; i < Xr.size(); ++i) Xr(i) = g.unit();
    const Labels y = testing::random_labels(g, 20);
    const auto m = testing::random_model(g, 7, 3);
    const auto ranks = rank_stumps(m, Xr, y);
    for (std::size_t k = 0; k + 1 < ranks.size(); ++k) {
      CHECK(ranks[k].gini >= ranks[k + 1].gini);
      if (ranks[k].gini == ranks[k + 1].gini) CHECK(ranks[k].stump < ranks[k + 1].stump);
    }
    for (const auto& rk : ranks) {
      CHECK(rk.gini == gini_impurity(m.stumps[static_cast<std::size_t>(rk.stump)], Xr, y));
      CHECK(rk.gini >= 0.0);
      CHECK(rk.gini <= 0.5);
    }
  }
}

TEST_CASE("sample grid") {
  Matrix X(5, 1);
  X << 0.1, 0.2, 0.3, 0.4, 0.45;
  Labels gt(5);
  gt << 0, 0, 0, 0, 0;
  const auto all_left = make(0, 0.9, 1, {1, 0}, {0.5, 0.5});
  const auto g1 = sample_grid(all_left, X, gt);
  CHECK(g1.right.empty());
  CHECK(g1.left.size() == 5);
  for (const auto& r : g1.left) CHECK(r.p_gt == 1.0);

  gt(1) = 1;
  const auto mixed = make(0, 0.9, 1, {0.8, 0.2}, {0.5, 0.5});
  const auto g2 = sample_grid(mixed, X, gt);
  CHECK(g2.left.back().sample == 1);
  CHECK(g2.left.back().p_gt < 0.5);

  Gen g(13);
  for (int rep = 0; rep < 100; ++rep) {
    Matrix Xr(25, 2);
    for (Index i = 0; i < Xr.size(); ++i) Xr(i) = g.unit();
    const Labels y = testing::random_labels(g, 25);
    auto s = testing::random_model(g, 1, 2).stumps[0];
    std::tie(s.counts_left, s.counts_right) = leaf_counts(s, Xr, y);
    const auto grid = sample_grid(s, Xr, y);
    CHECK(static_cast<int>(grid.left.size()) == s.counts_left.sum());
    CHECK(static_cast<int>(grid.right.size()) == s.counts_right.sum());
    const auto sides = local_side_labels(model_of({s}), 0, Xr);
    for (const auto& r : grid.left) CHECK(sides[static_cast<std::size_t>(r.sample)] == Side::Left);
    for (const auto& r : grid.right) CHECK(sides[static_cast<std::size_t>(r.sample)] == Side::Right);
  }
}

TEST_CASE("histogram bins") {
  Matrix X(4, 1);
  X << 0.0, 0.55, 0.999, 1.0;
  Labels gt(4);
  gt << 0, 1, 1, 0;
  const auto ten = feature_histogram(X, gt, 0, Precision::One);
  REQUIRE(ten.size() == 10);
  CHECK(ten.back().counts == ClassCounts(1, 1));
  CHECK(ten[5].counts == ClassCounts(0, 1));
  CHECK(ten[0].counts == ClassCounts(1, 0));
  CHECK(feature_histogram(X, gt, 0, Precision::Two).size() == 20);
  CHECK(feature_histogram(X, gt, 0, Precision::Full).size() == 20);
  int total = 0;
  for (const auto& b : feature_histogram(X, gt, 0, Precision::Three)) total += b.counts.sum();
  CHECK(total == 4);
  CHECK_THROWS_AS(feature_histogram(X, gt, 1, Precision::One), Error);
}
