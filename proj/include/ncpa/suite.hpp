#ifndef NCPA_SUITE_HPP_
#define NCPA_SUITE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/regularity.hpp"

namespace ncpa {

// Property checks over a problem. Unless stated otherwise they scan at most
// `max_points` evenly strided points of `grid`.

// r above the prox-boundedness threshold of every function.
CheckReport check_thresholds(const std::vector<InputFunction>& functions, double r);

// e_r f_i <= f_i.
CheckReport check_majorization(const ProxAverageProblem& problem, const GridSpec& grid,
                               std::size_t max_points = 401);

// e_r f_i <= e_{2r} f_i <= f_i.
CheckReport check_r_monotonicity(const ProxAverageProblem& problem, const GridSpec& grid,
                                 std::size_t max_points = 201);

// min of e_r f_i over the grid equals min of f_i (within 1e-6 relative).
CheckReport check_infimum_preservation(const ProxAverageProblem& problem, const GridSpec& grid);

// -e_r(-e_r f_i) <= f_i, with equality (1e-8 relative) when f_i + (r/2)q is convex.
CheckReport check_proximal_hull(const ProxAverageProblem& problem, const GridSpec& grid,
                                std::size_t max_points = 41);

// F_{tλ + (1-t)μ} = t F_λ + (1-t) F_μ at random points and weights.
CheckReport check_inner_affinity(const ProxAverageProblem& problem, std::size_t samples = 100,
                                 std::uint64_t seed = 0);

// δ vanishes at the vertices and is positive at random interior weights.
CheckReport check_delta(const ProxAverageProblem& problem, std::uint64_t seed = 0);

// r (x - P_r f_i(x)) against central differences of e_r f_i at `samples`
// random single-valued points per function; relative error <= 1e-4.
CheckReport check_gradient_identity(const ProxAverageProblem& problem, std::size_t samples = 100,
                                    std::uint64_t seed = 0);

// Value error bound of the tabulated inner envelopes: (r/8) h^2 with h the
// largest outer-grid spacing, or 0 when every inner envelope is exact.
double interpolation_error(const ProxAverageProblem& problem);

// |PA(x, e_i) - f_i(x)| <= tol (1 + |f_i(x)|) + slack wherever f_i is finite.
CheckReport check_vertex_recovery(const ProxAverageProblem& problem, const GridSpec& grid,
                                  double tol = 1e-5, std::size_t max_points = 501,
                                  double slack = 0.0);

// Hausdorff distance between argmin PA(., λ) and argmin sum λ_i e_r f_i.
CheckReport check_argmin_equivalence(const ProxAverageProblem& problem, const SimplexWeight& lambda,
                                     const GridSpec& grid, double tol = 1e-4);

struct SuiteReport {
  std::string suite;
  bool passed = true;
  std::vector<CheckReport> checks;
};

// Threshold check first; when it fails the remaining checks are skipped.
// With tabulated inner envelopes, vertex recovery and the para-prox check
// get 2 interpolation_error of slack and argmin equivalence one inner-grid
// spacing.
SuiteReport run_verify_suite(const std::vector<InputFunction>& functions, double r,
                             const DeltaSpec& delta, const GridSpec& grid,
                             const ProblemOptions& options, std::uint64_t seed = 0);

}  // namespace ncpa

#endif  // NCPA_SUITE_HPP_
