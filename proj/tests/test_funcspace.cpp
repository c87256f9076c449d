#include <doctest.h>

#include <cmath>

#include "ncpa/errors.hpp"
#include "ncpa/funcspace.hpp"
#include "ncpa/worked_example.hpp"
#include "support.hpp"

using namespace ncpa;
using ncpa::testing::brute_min;

TEST_CASE("eval of g_0 at eps = 1/2") {
  const MaxQuadFunction g0 = make_g(0, 0.5);
  CHECK(g0(0.0) == doctest::Approx(0.0));
  CHECK(g0(1.0) == doctest::Approx(0.5));
}

TEST_CASE("zero function evaluates to zero") {
  const MaxQuadFunction zero(1, {QuadraticPiece(0.0, 0.0, 0.0)});
  for (double x : {-7.0, 0.0, 0.3, 12.5}) CHECK(zero(x) == 0.0);
}

TEST_CASE("piece value matches the quadratic formula") {
  const QuadraticPiece p(1.5, Point{0.25, -2.0}, 0.75);
  const Point x{0.4, -1.1};
  const double direct = 0.75 * (0.16 + 1.21) + 0.25 * 0.4 + 2.0 * 1.1 + 0.75;
  CHECK(p(x) == doctest::Approx(direct).epsilon(1e-14));
  const Point g = p.gradient(x);
  CHECK(g[0] == doctest::Approx(1.5 * 0.4 + 0.25));
  CHECK(g[1] == doctest::Approx(1.5 * -1.1 - 2.0));
}

TEST_CASE("outside the domain box the function is +inf") {
  const MaxQuadFunction f(1, {QuadraticPiece(1.0, 0.0, 0.0)}, Box{{-1.0}, {2.0}});
  CHECK(std::isinf(f(-1.5)));
  CHECK(std::isinf(f(2.01)));
  CHECK(f(2.0) == doctest::Approx(2.0));
}

TEST_CASE("dimension mismatches are rejected") {
  const MaxQuadFunction f(2, {QuadraticPiece(1.0, Point{0.0, 0.0}, 0.0)});
  const Point bad{1.0};
  CHECK_THROWS_AS(f(PointView(bad)), InvalidArgument);
  CHECK_THROWS_AS(MaxQuadFunction(2, {QuadraticPiece(1.0, 0.0, 0.0)}), InvalidArgument);
  CHECK_THROWS_AS(MaxQuadFunction(1, {}), InvalidArgument);
  CHECK_THROWS_AS(QuadraticPiece(std::nan(""), 0.0, 0.0), InvalidArgument);
}

TEST_CASE("prox_threshold of g_0 is zero and its envelopes are finite") {
  const MaxQuadFunction g0 = make_g(0, 0.5);
  CHECK(prox_threshold(g0) == 0.0);
  for (double r : {0.1, 1.0, 2.0}) {
    auto h = [&](double y) { return g0(y) + 0.5 * r * y * y; };
    const double narrow = brute_min(h, -25.0, 25.0, 100001).value;
    const double wide = brute_min(h, -50.0, 50.0, 200001).value;
    CHECK(std::isfinite(wide));
    CHECK(narrow == doctest::Approx(wide).epsilon(1e-6));
  }
}

TEST_CASE("prox_threshold of a single concave piece alpha = -3 is 3") {
  const MaxQuadFunction f(1, {QuadraticPiece(-3.0, 0.0, 0.0)});
  CHECK(prox_threshold(f) == 3.0);
  auto scan = [&](double r, double half) {
    return brute_min([&](double y) { return f(y) + 0.5 * r * y * y; }, -half, half, 20001).value;
  };
  // Unbounded below: the minimum keeps dropping as the window grows.
  CHECK(scan(2.9, 100.0) < scan(2.9, 50.0) - 100.0);
  CHECK(scan(3.1, 100.0) == doctest::Approx(scan(3.1, 50.0)));
  CHECK(scan(3.1, 100.0) == doctest::Approx(0.0));
}

TEST_CASE("prox_threshold of a convex piece is zero") {
  CHECK(prox_threshold(MaxQuadFunction(1, {QuadraticPiece(1.0, 0.0, 0.0)})) == 0.0);
}

TEST_CASE("prox_threshold ignores dominated pieces") {
  const MaxQuadFunction base(1, {QuadraticPiece(-3.0, 0.0, 0.0), QuadraticPiece(-0.5, 1.0, 2.0)});
  // -4 y^2/2 - 1 on top of -3 y^2/2 stays below it everywhere.
  const MaxQuadFunction padded(
      1, {QuadraticPiece(-3.0, 0.0, 0.0), QuadraticPiece(-0.5, 1.0, 2.0),
          QuadraticPiece(-4.0, 0.0, -1.0)});
  CHECK(prox_threshold(base) == prox_threshold(padded));
  CHECK(prox_threshold(base) == 0.5);
}

TEST_CASE("eval dominates every piece") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MaxQuadFunction f = ncpa::testing::random_function(rng);
    for (int k = 0; k < 50; ++k) {
      const double x = rng.uniform(-4.0, 4.0);
      for (const auto& p : f.pieces()) CHECK(f(x) >= p(PointView(&x, 1)));
    }
  }
}

TEST_CASE("is_shift_convex on g_0") {
  const MaxQuadFunction g0 = make_g(0, 0.5);
  const ShiftConvexity one = is_shift_convex(g0, 1.0);
  CHECK(one.convex);
  CHECK_FALSE(one.sampled);

  CHECK_FALSE(is_shift_convex(g0, 0.5).convex);
  const ShiftConvexity sampled = is_shift_convex(g0, 0.5, GridSpec::line(-1.0, 3.0, 2001));
  CHECK(sampled.sampled);
  CHECK_FALSE(sampled.convex);
  REQUIRE(sampled.witness.size() == 1);
  // The hump -(x-1)^2/2 + 1/2 dominates on (0, sqrt 3).
  CHECK(sampled.witness[0] > 0.0);
  CHECK(sampled.witness[0] < std::sqrt(3.0));
}

TEST_CASE("is_shift_convex on the zero function with c = 0") {
  CHECK(is_shift_convex(MaxQuadFunction(1, {QuadraticPiece(0.0, 0.0, 0.0)}), 0.0).convex);
}

TEST_CASE("piece-test convexity implies sampled midpoint convexity") {
  Rng rng(5);
  const GridSpec grid = GridSpec::line(-4.0, 4.0, 801);
  int tested = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const MaxQuadFunction f = ncpa::testing::random_function(rng);
    const double c = rng.uniform(0.0, 2.0);
    if (!is_shift_convex(f, c).convex) continue;
    ++tested;
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double x = grid.axis(0).coord(k);
      values[k] = f(x) + 0.5 * c * x * x;
    }
    CHECK(midpoint_violations(values, grid, 1e-9).empty());
  }
  CHECK(tested > 5);
}

TEST_CASE("simplex_path examples") {
  const auto mid = simplex_path(SimplexWeight({1.0, 0.0}), SimplexWeight({0.0, 1.0}), 3);
  REQUIRE(mid.size() == 3);
  CHECK(mid[0].weights() == std::vector<double>{1.0, 0.0});
  CHECK(mid[1].weights() == std::vector<double>{0.5, 0.5});
  CHECK(mid[2].weights() == std::vector<double>{0.0, 1.0});

  const SimplexWeight a({0.2, 0.3, 0.5});
  const auto same = simplex_path(a, a, 5);
  REQUIRE(same.size() == 5);
  for (const auto& w : same) CHECK(w.distance(a) < 1e-15);

  const auto ends = simplex_path(SimplexWeight::vertex(3, 0), SimplexWeight::vertex(3, 2), 2);
  REQUIRE(ends.size() == 2);
  CHECK(ends[0].weights() == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(ends[1].weights() == std::vector<double>{0.0, 0.0, 1.0});

  CHECK_THROWS_AS(simplex_path(SimplexWeight::vertex(2, 0), SimplexWeight::vertex(3, 0), 3),
                  InvalidArgument);
}

TEST_CASE("simplex_path weights stay on the simplex") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + rng.index(4);
    const auto path = simplex_path(SimplexWeight(rng.simplex(m)), SimplexWeight(rng.simplex(m)),
                                   2 + rng.index(40));
    for (const auto& w : path) {
      double sum = 0.0;
      for (double x : w.weights()) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("SimplexWeight validation and vertex test") {
  CHECK_THROWS_AS(SimplexWeight({0.6, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(SimplexWeight({1.1, -0.1}), InvalidArgument);
  const SimplexWeight clamped({1.0 + 1e-13, -1e-13});
  CHECK(clamped[1] == 0.0);
  CHECK(clamped.is_vertex());
  CHECK(*clamped.vertex_index() == 0);
  CHECK_FALSE(SimplexWeight::barycenter(3).is_vertex());
}

TEST_CASE("grid layout") {
  const GridSpec grid({Axis{0.0, 1.0, 3}, Axis{-1.0, 1.0, 5}});
  CHECK(grid.size() == 15);
  // Last axis fastest.
  CHECK(grid.point(1) == Point{0.0, -0.5});
  CHECK(grid.point(5) == Point{0.5, -1.0});
  const auto idx = grid.unflatten(13);
  CHECK(grid.flatten(idx) == 13);
  CHECK(grid.on_boundary(0));
  CHECK_FALSE(grid.on_boundary(7));
  CHECK(grid.max_spacing() == doctest::Approx(0.5));
  const GridSpec doubled = GridSpec::line(-1.0, 1.0, 5).doubled();
  CHECK(doubled.axis(0).lower == doctest::Approx(-2.0));
  CHECK(doubled.axis(0).upper == doctest::Approx(2.0));
  CHECK(doubled.axis(0).points == 9);
  CHECK_THROWS_AS(GridSpec::line(1.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::line(0.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("sampled function interpolation") {
  const GridSpec grid({Axis{0.0, 1.0, 2}, Axis{0.0, 1.0, 2}});
  const SampledFunction s(grid, {0.0, 1.0, 2.0, 3.0});
  const Point mid{0.5, 0.5};
  CHECK(s.interpolate(mid) == doctest::Approx(1.5));
  const SampledFunction holes(GridSpec::line(0.0, 1.0, 2), {0.0, kInfinity});
  const double x = 0.5;
  CHECK(std::isinf(holes.interpolate(PointView(&x, 1))));
  CHECK_THROWS_AS(SampledFunction(GridSpec::line(0.0, 1.0, 2), {0.0}), InvalidArgument);
  CHECK_THROWS_AS(SampledFunction(GridSpec::line(0.0, 1.0, 2), {0.0, std::nan("")}),
                  InvalidArgument);
}
