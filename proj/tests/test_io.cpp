#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ncpa/errors.hpp"
#include "ncpa/io.hpp"
#include "ncpa/worked_example.hpp"

using namespace ncpa;

namespace {

const char* kExample = R"({
  "dimension": 1, "r": 2,
  "delta": {"kind": "symmetric_quadratic"},
  "grid": {"lower": [-1], "upper": [3], "points": [201]},
  "functions": [
    {"pieces": [{"alpha": 0, "beta": [-1], "gamma": 0},
                {"alpha": -1, "beta": [1], "gamma": 0},
                {"alpha": 0, "beta": [1], "gamma": -1.5}]},
    {"pieces": [{"alpha": 0, "beta": -1, "gamma": 0.5},
                {"alpha": -1, "beta": 1, "gamma": 0},
                {"alpha": 0, "beta": 1, "gamma": -2}]}
  ]
})";

}  // namespace

TEST_CASE("parse the example problem") {
  const ProblemSpec spec = parse_problem_text(kExample);
  CHECK(spec.dimension == 1);
  CHECK(spec.r == 2.0);
  REQUIRE(spec.functions.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const MaxQuadFunction g = make_g(i);
    for (double x : {-1.0, 0.2, 1.0, 1.9, 2.7}) CHECK(spec.functions[i](x) == g(x));
  }
  CHECK(spec.grid.size() == 201);
  CHECK_FALSE(spec.outer_grid);
  const ProxAverageProblem p = spec.build();
  CHECK(p.size() == 2);
}

TEST_CASE("parse domains, outer grids and custom delta") {
  const ProblemSpec spec = parse_problem_text(R"({
    "dimension": 2, "r": 1.5,
    "delta": {"kind": "custom_polynomial", "terms": [{"powers": [1, 1], "coef": 2}]},
    "grid": {"lower": [-1, -1], "upper": [1, 1], "points": 11},
    "outer_grid": {"lower": [-2, -2], "upper": [2, 2], "points": [21, 21]},
    "functions": [
      {"pieces": [{"alpha": 1, "beta": [0, 0], "gamma": 0}],
       "domain": {"lower": [-1, -1], "upper": [1, 1]}},
      {"pieces": [{"alpha": 2, "beta": [1, 0], "gamma": 0}]}
    ]})");
  CHECK(spec.dimension == 2);
  CHECK(spec.grid.size() == 121);
  REQUIRE(spec.outer_grid);
  CHECK(spec.outer_grid->size() == 441);
  CHECK(spec.delta.kind() == DeltaSpec::Kind::custom_polynomial);
  CHECK(spec.functions[0].domain().has_value());
  CHECK(std::isinf(spec.functions[0](PointView(std::vector<double>{1.5, 0.0}))));
}

TEST_CASE("malformed problems are input errors") {
  const char* bad[] = {
      "not json",
      R"({"dimension": 1})",
      R"({"dimension": 1, "r": 1, "delta": {"kind": "nope"},
          "grid": {"lower": [0], "upper": [1], "points": [3]},
          "functions": [{"pieces": [{"alpha": 1, "beta": [0], "gamma": 0}]}]})",
      R"({"dimension": 1, "r": 1, "delta": {"kind": "symmetric_quadratic"},
          "grid": {"lower": [0], "upper": [1], "points": [3]},
          "functions": [{"pieces": [{"alpha": 1, "beta": [0, 1], "gamma": 0}]}]})",
      R"({"dimension": 1, "r": "two", "delta": {"kind": "symmetric_quadratic"},
          "grid": {"lower": [0], "upper": [1], "points": [3]},
          "functions": [{"pieces": [{"alpha": 1, "beta": [0], "gamma": 0}]}]})",
      R"({"dimension": 1, "r": 1, "delta": {"kind": "symmetric_quadratic"},
          "grid": {"lower": [1], "upper": [0], "points": [3]},
          "functions": [{"pieces": [{"alpha": 1, "beta": [0], "gamma": 0}]}]})",
      R"({"dimension": 1, "r": 1, "delta": {"kind": "symmetric_quadratic"},
          "grid": {"lower": [0], "upper": [1], "points": [3]}, "functions": []})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_problem_text(text), InvalidArgument);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), InvalidArgument);
}

TEST_CASE("threshold violations surface at build time") {
  ProblemSpec spec = parse_problem_text(kExample);
  spec.functions.push_back(MaxQuadFunction(1, {QuadraticPiece(-3.0, 0.0, 0.0)}));
  CHECK_THROWS_AS(spec.build(), ParameterError);
}

TEST_CASE("axis and weight strings") {
  const Axis a = parse_axis("-1:3:5");
  CHECK(a.lower == -1.0);
  CHECK(a.upper == 3.0);
  CHECK(a.points == 5);
  CHECK_THROWS_AS(parse_axis("1:2"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("a:2:3"), InvalidArgument);
  CHECK_THROWS_AS(parse_axis("0:1:1"), InvalidArgument);
  const SimplexWeight w = parse_weight("0.25,0.75");
  CHECK(w.weights() == std::vector<double>{0.25, 0.75});
  CHECK_THROWS_AS(parse_weight("0.5,0.6"), InvalidArgument);
  CHECK_THROWS_AS(parse_weight("x"), InvalidArgument);
}

TEST_CASE("numbers round-trip through 17 digits") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, std::sqrt(2.0)}) {
    CHECK(std::stod(format_number(x)) == x);
  }
}

TEST_CASE("csv layouts") {
  const GridSpec grid = GridSpec::line(0.0, 1.0, 2);
  std::ostringstream env;
  write_envelope_csv(env, grid, {0.0, 0.5}, {Point{0.0}, Point{1.0}});
  CHECK(env.str() == "x,value,grad\n0,0,0\n1,0.5,1\n");

  std::ostringstream surf;
  write_surface_csv(surf, {SimplexWeight({1.0, 0.0})}, {SampledFunction(grid, {2.0, 3.0})});
  CHECK(surf.str() == "lambda_1,lambda_2,x,value\n1,0,0,2\n1,0,1,3\n");

  ArgminPath path;
  path.records.push_back({0.0, SimplexWeight({1.0, 0.0}), {Point{0.0}}, 0.0, {0.0}});
  path.records.push_back({1.0, SimplexWeight({0.0, 1.0}), {Point{0.0}, Point{2.0}}, -1.0, {0.0, 0.0}});
  path.jumps.push_back({0.5, SimplexWeight({0.5, 0.5}), {Point{0.0}}, {Point{2.0}}, 2.0});
  std::ostringstream ap;
  write_argmin_path_csv(ap, path);
  CHECK(ap.str() ==
        "t,lambda_1,lambda_2,argmin_count,argmin_1,argmin_2,min_value\n"
        "0,1,0,1,0,,0\n"
        "1,0,1,2,0,2,-1\n"
        "#jump,0.5,0.5,0.5,2\n");
}

TEST_CASE("report json") {
  CheckReport r;
  r.name = "demo";
  r.samples_tested = 3;
  r.estimate = 0.5;
  r.add_violation({Point{1.0}, Point{2.0}, std::vector<double>{0.5, 0.5}, -0.25});
  const auto j = to_json(r);
  CHECK(j["name"] == "demo");
  CHECK(j["passed"] == false);
  CHECK(j["samples"] == 3);
  CHECK(j["estimate"] == 0.5);
  CHECK(j["violation_count"] == 1);
  CHECK(j["violations"][0]["margin"] == -0.25);
  CHECK(j["violations"][0]["lambda"][1] == 0.5);
}
