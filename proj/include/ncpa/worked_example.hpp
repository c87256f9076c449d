#ifndef NCPA_WORKED_EXAMPLE_HPP_
#define NCPA_WORKED_EXAMPLE_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/minpath.hpp"
#include "ncpa/proxavg.hpp"

namespace ncpa {

// Two three-piece functions sharing the hump -(x-1)^2/2 + 1/2 with linear
// flanks; g_0 lifts the right flank by eps, g_1 the left one:
//   g_0(x) = max{-x,       hump, x - 2 + eps}
//   g_1(x) = max{-x + eps, hump, x - 2}
// so that g_1(x) = g_0(2 - x).
struct ExampleParams {
  double eps;
  double k;  // 2 - sqrt(4 - 2 eps), left flank meets the hump in g_1
  double l;  // sqrt(4 - 2 eps), right flank meets the hump in g_0
  std::array<double, 2> left_kink;   // k_0 = 0, k_1 = k
  std::array<double, 2> right_kink;  // l_0 = l, l_1 = 2
  std::array<double, 2> left_lift;   // 0, eps
  std::array<double, 2> right_lift;  // eps, 0

  static ExampleParams make(double eps);
};

MaxQuadFunction make_g(int index, double eps = 0.5);

// Five-branch closed forms of P_r g_i and e_r g_i. Need r > 1.
double prox_g_closed(int index, double r, double xbar, double eps = 0.5);
double envelope_g_closed(int index, double r, double xbar, double eps = 0.5);

// w e_2 g_0 + (1 - w) e_2 g_1 at eps = 1/2, as the nine-branch piecewise
// quadratic. w is the weight on g_0.
double G_closed(double xbar, double w);

// ((1 - w)(2 - sqrt 3), 1, 2 - (2 - sqrt 3) w): left minimum, maximum, right minimum.
std::array<double, 3> critical_points_closed(double w);

// {g_0, g_1} with the symmetric quadratic delta on [-1, 3] (2001 points); the
// outer grid is the default 25% expansion.
ProxAverageProblem make_example_problem(double eps = 0.5, double r = 2.0,
                                        Execution exec = Execution::parallel);

// Weights (1, 0) to (0, 1) in `steps` steps.
std::vector<SimplexWeight> example_edge_path(std::size_t steps);

struct DemoReport {
  bool passed = true;
  std::vector<std::string> failures;
  std::size_t steps = 0;
  double eps = 0.5;
  std::size_t jump_count = 0;
  std::optional<double> jump_weight;  // weight on g_0 at the first jump
  std::optional<double> jump_magnitude;
  std::vector<Point> tie_argmin;  // argmin set at equal weights
  double tie_value = 0.0;
  ArgminPath path;
};

// Tracks the argmin along the edge path and checks: one jump, at weight 1/2
// within one step; a two-point argmin at equal weights with value
// (2 - sqrt 3)/2; each single-valued record on the closed-form branch. For
// eps other than 1/2 only the jump count is asserted.
DemoReport run_discontinuity_demo(std::size_t steps = 101, double eps = 0.5,
                                  Execution exec = Execution::parallel);

}  // namespace ncpa

#endif  // NCPA_WORKED_EXAMPLE_HPP_
