#ifndef NCPA_MOREAU_HPP_
#define NCPA_MOREAU_HPP_

#include <optional>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/grid_kernels.hpp"

namespace ncpa {

// Envelope value e_r f(x) and the proximal set P_r f(x).
struct ProxResult {
  double value = 0.0;
  std::vector<Point> minimizers;
  bool multivalued = false;
};

// One closed cell of the breakpoint decomposition of a 1-D max-of-quadratics:
// piece `piece` attains the max on [lower, upper].
struct Cell {
  double lower;
  double upper;
  std::size_t piece;
};

std::vector<Cell> cell_decomposition_1d(const MaxQuadFunction& f);

// Smallest r for which every piece subproblem is strongly convex:
// max(prox_threshold(f), -min_j alpha_j). The exact path needs r strictly above.
double exact_prox_bound(const MaxQuadFunction& f);
bool exact_path_available(const InputFunction& f, double r);

ProxResult prox_exact_1d(const MaxQuadFunction& f, double r, double x,
                         std::optional<double> tie_tol = std::nullopt);
// Same computation over a precomputed decomposition; r is not re-checked.
ProxResult prox_exact_1d(const MaxQuadFunction& f, std::span<const Cell> cells, double r,
                         double x, std::optional<double> tie_tol = std::nullopt);
// Value only, allocation free.
double envelope_exact_1d(const MaxQuadFunction& f, std::span<const Cell> cells, double r,
                         double x);

// Points x at which the prox switches between an interior cell minimizer and a
// clamped breakpoint; the envelope is piecewise quadratic between them.
std::vector<double> prox_regime_boundaries_1d(const MaxQuadFunction& f, double r);

ProxResult prox_oracle(const Callback& f, double r, PointView x, const GridSpec& grid,
                       int refine_iters = 60, std::optional<double> tie_tol = std::nullopt,
                       Execution exec = Execution::parallel);

// prox_oracle with f already sampled on `grid`; f is re-sampled only if the
// grid has to be expanded.
ProxResult prox_oracle_sampled(const Callback& f, std::span<const double> f_on_grid, double r,
                               PointView x, const GridSpec& grid, int refine_iters = 60,
                               std::optional<double> tie_tol = std::nullopt,
                               Execution exec = Execution::parallel);

struct EnvelopeOptions {
  // Search grid for the oracle path; unused on the exact 1-D path.
  std::optional<GridSpec> grid;
  int refine_iters = 60;
  std::optional<double> tie_tol;
  Execution exec = Execution::parallel;
};

// Exact path for 1-D max-of-quadratics with r above exact_prox_bound, grid
// oracle otherwise. Throws ParameterError when r is at or below the threshold.
ProxResult prox(const InputFunction& f, double r, PointView x,
                const EnvelopeOptions& options = {});
double envelope(const InputFunction& f, double r, PointView x,
                const EnvelopeOptions& options = {});
// r (x - p) for the unique proximal point p; GradientUndefined if P_r f(x) is
// not a singleton.
Point envelope_gradient(const InputFunction& f, double r, PointView x,
                        const EnvelopeOptions& options = {});

// -e_r(-e_r f)(x): the inner envelope is a callback, the outer one always goes
// through the grid oracle on `outer_grid`.
double double_envelope(const InputFunction& f, double r, PointView x,
                       const GridSpec& outer_grid, const EnvelopeOptions& inner = {});

}  // namespace ncpa

#endif  // NCPA_MOREAU_HPP_
