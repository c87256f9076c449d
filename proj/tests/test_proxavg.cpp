#include <doctest.h>

#include <cmath>

#include "ncpa/errors.hpp"
#include "ncpa/oracle.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/worked_example.hpp"
#include "support.hpp"

using namespace ncpa;
using ncpa::testing::brute_min;
using ncpa::testing::kSqrt3;

namespace {

const ProxAverageProblem& example() {
  static const ProxAverageProblem problem = make_example_problem();
  return problem;
}

const SimplexWeight kHalf({0.5, 0.5});

// m = 1 with (1/2)(x - 0.3)^2.
ProxAverageProblem single_parabola() {
  const MaxQuadFunction f(1, {QuadraticPiece(1.0, -0.3, 0.045)});
  return ProxAverageProblem({f}, 1.0, DeltaSpec::symmetric_quadratic(),
                            GridSpec::line(-2.0, 2.0, 401));
}

}  // namespace

TEST_CASE("delta examples") {
  const DeltaSpec d = DeltaSpec::symmetric_quadratic();
  for (std::size_t i = 0; i < 3; ++i) CHECK(delta_eval(d, SimplexWeight::vertex(3, i)) == 0.0);
  CHECK(delta_eval(d, kHalf) == doctest::Approx(0.25));
  CHECK(delta_eval(d, SimplexWeight::barycenter(3)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("custom delta validation") {
  const DeltaSpec product = DeltaSpec::custom_polynomial({{{1, 1}, 1.0}});
  CHECK(validate_delta(product, 2).valid);
  CHECK(delta_eval(product, kHalf) == doctest::Approx(0.25));
  // w_1 alone is nonzero at the first vertex.
  CHECK_FALSE(validate_delta(DeltaSpec::custom_polynomial({{{1, 0}, 1.0}}), 2).valid);
  // w_1 w_2 vanishes on the edge between vertices 1 and 3 of a triangle.
  CHECK_FALSE(validate_delta(DeltaSpec::custom_polynomial({{{1, 1, 0}, 1.0}}), 3).valid);
  CHECK_THROWS_AS(ProxAverageProblem({make_g(0), make_g(1)}, 2.0,
                                     DeltaSpec::custom_polynomial({{{1, 0}, 1.0}}),
                                     GridSpec::line(-1.0, 3.0, 101)),
                  InvalidArgument);
}

TEST_CASE("problem rejects r below a threshold") {
  const MaxQuadFunction steep(1, {QuadraticPiece(-3.0, 0.0, 0.0)});
  CHECK_THROWS_AS(ProxAverageProblem({steep}, 2.0, DeltaSpec::symmetric_quadratic(),
                                     GridSpec::line(-1.0, 1.0, 11)),
                  ParameterError);
}

TEST_CASE("inner function examples") {
  const auto single = single_parabola();
  const Callback F1 = inner_function(single, SimplexWeight::vertex(1, 0));
  for (double x : {-1.0, 0.3, 1.7}) {
    CHECK(F1(PointView(&x, 1)) == doctest::Approx(-single.inner_envelope(0, PointView(&x, 1))));
  }

  const double zero = 0.0;
  const double frozen = -0.5 * (5.5 - 3.0 * kSqrt3);
  CHECK(inner_function(example(), kHalf)(PointView(&zero, 1)) ==
        doctest::Approx(frozen).epsilon(1e-12));

  const double three = 3.0;
  CHECK(inner_function(example(), SimplexWeight({1.0, 0.0}))(PointView(&three, 1)) ==
        doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("inner function is affine in the weight") {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const SimplexWeight a(rng.simplex(2));
    const SimplexWeight b(rng.simplex(2));
    const double t = rng.uniform();
    const SimplexWeight c({t * a[0] + (1.0 - t) * b[0], t * a[1] + (1.0 - t) * b[1]});
    const double x = rng.uniform(-1.0, 3.0);
    const PointView xv(&x, 1);
    const double lhs = inner_function(example(), c)(xv);
    const double rhs = t * inner_function(example(), a)(xv) + (1.0 - t) * inner_function(example(), b)(xv);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("proximal average at the vertices recovers the functions") {
  const GridSpec grid = GridSpec::line(-1.0, 3.0, 81);
  for (std::size_t i = 0; i < 2; ++i) {
    const SampledFunction curve = pa_curve(example(), SimplexWeight::vertex(2, i), grid);
    const MaxQuadFunction g = make_g(static_cast<int>(i));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(curve.values[k] - g(grid.axis(0).coord(k))) <= 1e-6);
    }
  }
}

TEST_CASE("proximal average of one convex function is the function") {
  const auto single = single_parabola();
  for (double x : {-1.2, 0.0, 0.3, 1.5}) {
    const double fx = 0.5 * (x - 0.3) * (x - 0.3);
    CHECK(pa_eval(single, Point{x}, SimplexWeight::vertex(1, 0)) ==
          doctest::Approx(fx).epsilon(1e-9));
  }
}

TEST_CASE("proximal average of a constant is constant") {
  const MaxQuadFunction c(1, {QuadraticPiece(0.0, 0.0, 0.8)});
  const ProxAverageProblem p({c}, 1.0, DeltaSpec::symmetric_quadratic(),
                             GridSpec::line(-2.0, 2.0, 101));
  const SampledFunction curve = pa_curve(p, SimplexWeight::vertex(1, 0), GridSpec::line(-2.0, 2.0, 21));
  for (double v : curve.values) CHECK(v == doctest::Approx(0.8));
}

TEST_CASE("proximal average values at equal weights") {
  // Frozen from a brute-force sup over y of G(y) - (9/8)(y - x)^2.
  const std::vector<std::pair<double, double>> frozen = {
      {1.0, 0.5}, {0.0, 0.225}, {2.0, 0.225}, {0.5, 25.0 / 68.0}};
  for (const auto& [x, value] : frozen) {
    const double brute =
        -brute_min([&](double y) { return -(G_closed(y, 0.5) - 1.125 * (y - x) * (y - x)); },
                   -2.0, 4.0, 600001)
             .value;
    CHECK(brute == doctest::Approx(value).epsilon(1e-8));
    CHECK(std::abs(pa_eval(example(), Point{x}, kHalf) - value) <= 1e-6);
  }
}

TEST_CASE("equal-weight curve has exactly two strict local minima") {
  const GridSpec grid = GridSpec::line(-1.0, 3.0, 401);
  const SampledFunction curve = pa_curve(example(), kHalf, grid);
  std::vector<double> minima;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    if (curve.values[k] < curve.values[k - 1] && curve.values[k] < curve.values[k + 1]) {
      minima.push_back(grid.axis(0).coord(k));
    }
  }
  REQUIRE(minima.size() == 2);
  CHECK(minima[0] == doctest::Approx((2.0 - kSqrt3) / 2.0).epsilon(0.05));
  CHECK(minima[1] == doctest::Approx((2.0 + kSqrt3) / 2.0).epsilon(0.05));
}

TEST_CASE("argmin equivalence examples") {
  const GridSpec& grid = example().inner_grid();
  const ArgminEquivalence half = argmin_equivalence(example(), kHalf, grid, 1e-4);
  CHECK(half.agree);
  REQUIRE(half.argmin_pa.size() == 2);
  REQUIRE(half.argmin_weighted.size() == 2);
  for (const auto* set : {&half.argmin_pa, &half.argmin_weighted}) {
    CHECK(std::abs((*set)[0][0] - (2.0 - kSqrt3) / 2.0) <= 1e-4);
    CHECK(std::abs((*set)[1][0] - (2.0 + kSqrt3) / 2.0) <= 1e-4);
  }
  CHECK(half.hausdorff <= 1e-4);

  const ArgminEquivalence vertex = argmin_equivalence(example(), SimplexWeight({1.0, 0.0}), grid, 1e-4);
  CHECK(vertex.agree);
  REQUIRE(vertex.argmin_pa.size() == 1);
  REQUIRE(vertex.argmin_weighted.size() == 1);
  CHECK(std::abs(vertex.argmin_pa[0][0]) <= 1e-4);
  CHECK(std::abs(vertex.argmin_weighted[0][0]) <= 1e-4);

  const auto single = single_parabola();
  const ArgminEquivalence one =
      argmin_equivalence(single, SimplexWeight::vertex(1, 0), single.inner_grid(), 1e-4);
  CHECK(one.agree);
  REQUIRE(one.argmin_pa.size() == 1);
  CHECK(one.argmin_pa[0][0] == doctest::Approx(0.3).epsilon(1e-5));
}

TEST_CASE("proximal average is bounded below by the weighted envelope") {
  Rng rng(32);
  for (int k = 0; k < 40; ++k) {
    const SimplexWeight w(rng.simplex(2));
    const double x = rng.uniform(-1.0, 3.0);
    const double pa = pa_eval(example(), Point{x}, w);
    CHECK(pa >= weighted_envelope(example(), w, PointView(&x, 1)) - 1e-10);
  }
}

TEST_CASE("outer envelope of the proximal average returns the inner function") {
  const SimplexWeight w({0.3, 0.7});
  const ProxAverage pa(example(), w);
  const Callback pa_cb = [&](PointView x) { return pa(x); };
  const Callback F = inner_function(example(), w);
  const GridSpec scan = GridSpec::line(-2.0, 4.0, 601);
  for (double x : {-0.5, 0.4, 1.0, 1.9, 2.6}) {
    const double e = prox_oracle(pa_cb, pa.outer_parameter(), PointView(&x, 1), scan, 60,
                                 std::nullopt, Execution::serial)
                         .value;
    CHECK(std::abs(-e - F(PointView(&x, 1))) <= 1e-6);
  }
}

TEST_CASE("shifted proximal average is midpoint convex") {
  const SimplexWeight w({0.4, 0.6});
  const ProxAverage pa(example(), w);
  const SampledFunction curve = pa_curve(pa, GridSpec::line(-1.0, 3.0, 801), Execution::parallel);
  Rng rng(33);
  for (int k = 0; k < 5; ++k) {
    const Point xbar{rng.uniform(-1.0, 3.0)};
    std::vector<double> shifted(curve.values.size());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
      const double d = curve.grid.axis(0).coord(j) - xbar[0];
      shifted[j] = curve.values[j] + 0.5 * pa.outer_parameter() * d * d;
    }
    CHECK(midpoint_violations(shifted, curve.grid, 1e-7).empty());
  }
}

TEST_CASE("weight size mismatch is rejected") {
  CHECK_THROWS_AS(pa_eval(example(), Point{0.0}, SimplexWeight::barycenter(3)), InvalidArgument);
}
