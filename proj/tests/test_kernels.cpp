#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ncpa/errors.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/minpath.hpp"
#include "ncpa/oracle.hpp"
#include "ncpa/worked_example.hpp"

using namespace ncpa;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const Callback kWavy = [](PointView x) {
  double s = 0.0;
  for (double c : x) s += std::sin(3.0 * c) + 0.1 * c * c;
  return s;
};

}  // namespace

TEST_CASE("sample: serial and parallel agree bit for bit") {
  const GridSpec g1 = GridSpec::line(-3.0, 3.0, 10001);
  CHECK(bitwise_equal(sample_serial(kWavy, g1), sample_parallel(kWavy, g1)));
  const GridSpec g2({Axis{-1.0, 1.0, 101}, Axis{-2.0, 2.0, 77}});
  CHECK(bitwise_equal(sample_serial(kWavy, g2), sample_parallel(kWavy, g2)));
}

TEST_CASE("add_shifted_quadratic: serial and parallel agree bit for bit") {
  const GridSpec g({Axis{-1.0, 1.0, 131}, Axis{-2.0, 2.0, 97}});
  const auto base = sample_serial(kWavy, g);
  const Point x{0.3, -0.7};
  std::vector<double> a(base.size()), b(base.size());
  add_shifted_quadratic_serial(base, g, 2.5, x, a);
  add_shifted_quadratic_parallel(base, g, 2.5, x, b);
  CHECK(bitwise_equal(a, b));
  const Point p = g.point(500);
  const double d0 = p[0] - x[0], d1 = p[1] - x[1];
  CHECK(a[500] == doctest::Approx(base[500] + 1.25 * (d0 * d0 + d1 * d1)));
}

TEST_CASE("for_each_index touches every index once") {
  std::vector<int> hits(5000, 0);
  for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; }, Execution::parallel);
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("problem-level results do not depend on the execution mode") {
  const ProxAverageProblem serial = make_example_problem(0.5, 2.0, Execution::serial);
  const ProxAverageProblem parallel = make_example_problem(0.5, 2.0, Execution::parallel);
  const GridSpec grid = GridSpec::line(-1.0, 3.0, 201);
  const SimplexWeight w({0.3, 0.7});
  CHECK(bitwise_equal(pa_curve(serial, w, grid).values, pa_curve(parallel, w, grid).values));

  const auto path = example_edge_path(11);
  const ArgminPath a = track_argmin(serial, path, serial.inner_grid());
  const ArgminPath b = track_argmin(parallel, path, parallel.inner_grid());
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].min_value == b.records[k].min_value);
    REQUIRE(a.records[k].argmin.size() == b.records[k].argmin.size());
    for (std::size_t j = 0; j < a.records[k].argmin.size(); ++j) {
      CHECK(a.records[k].argmin[j] == b.records[k].argmin[j]);
    }
  }
  CHECK(a.jumps.size() == b.jumps.size());
}

TEST_CASE("grid minimizer: ties, expansion and errors") {
  const GridSpec grid = GridSpec::line(-1.0, 1.0, 201);
  const GridMinimum two = minimize_on_grid(
      [](PointView x) { return (x[0] * x[0] - 0.25) * (x[0] * x[0] - 0.25); }, grid);
  REQUIRE(two.minimizers.size() == 2);
  CHECK(two.minimizers[0][0] == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(two.minimizers[1][0] == doctest::Approx(0.5).epsilon(1e-8));

  const GridMinimum moved = minimize_on_grid(
      [](PointView x) { return (x[0] - 1.6) * (x[0] - 1.6); }, grid);
  CHECK(moved.expanded);
  CHECK(moved.minimizers[0][0] == doctest::Approx(1.6).epsilon(1e-8));

  CHECK_THROWS_AS(minimize_on_grid([](PointView x) { return -x[0]; }, grid), GridTooSmall);
  CHECK_THROWS_AS(minimize_on_grid([](PointView) { return kInfinity; }, grid), ImproperOnGrid);

  const GridMinimum flat = minimize_on_grid([](PointView) { return 0.0; }, grid);
  CHECK(flat.value == 0.0);
  CHECK_FALSE(flat.expanded);
}

TEST_CASE("hausdorff distance") {
  CHECK(hausdorff({Point{0.0}}, {Point{0.0}}) == 0.0);
  CHECK(hausdorff({Point{0.0}, Point{2.0}}, {Point{0.1}}) == doctest::Approx(1.9));
}
