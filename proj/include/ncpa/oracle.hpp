#ifndef NCPA_ORACLE_HPP_
#define NCPA_ORACLE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/grid_kernels.hpp"

namespace ncpa {

// 1e-8 * (1 + |best|)
double default_tie_tol(double best);

struct MinimizeOptions {
  int refine_iters = 60;
  // Absolute tolerance for keeping a basin; default_tie_tol when unset.
  std::optional<double> tie_tol;
  bool allow_expansion = true;
  Execution exec = Execution::parallel;
};

struct GridMinimum {
  double value = 0.0;
  // Every refined basin whose value is within the tie tolerance, sorted.
  std::vector<Point> minimizers;
  bool expanded = false;
};

// Produces the objective sampled on a grid (used after an expansion too).
using Sampler = std::function<std::vector<double>(const GridSpec&)>;

// Brute-force scan, basin detection, golden-section (1-D) or coordinate
// descent (n-D) refinement. When the best grid point lies on the grid
// boundary the grid is doubled once; a second boundary hit throws GridTooSmall.
GridMinimum minimize_on_grid(const Callback& objective, const GridSpec& grid,
                             const MinimizeOptions& options = {});
GridMinimum minimize_sampled(const Callback& objective, const Sampler& sampler,
                             const GridSpec& grid, const MinimizeOptions& options = {});

struct LineMinimum {
  double x;
  double value;
};

LineMinimum golden_section(const std::function<double(double)>& f, double a, double b,
                           int iters);

// Largest distance from a point of either set to the other set.
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

double euclidean(PointView a, PointView b);

}  // namespace ncpa

#endif  // NCPA_ORACLE_HPP_
