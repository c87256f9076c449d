#ifndef NCPA_PROXAVG_HPP_
#define NCPA_PROXAVG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/moreau.hpp"

namespace ncpa {

struct DeltaTerm {
  std::vector<unsigned> powers;
  double coef = 0.0;
};

// Perturbation of the outer prox-parameter: zero at the simplex vertices,
// positive elsewhere, polynomial in the weights.
class DeltaSpec {
 public:
  enum class Kind { symmetric_quadratic, custom_polynomial };

  // (1/2)(1 - sum_i w_i^2); for two weights this is w(1-w).
  static DeltaSpec symmetric_quadratic();
  // sum_t coef_t prod_i w_i^powers_t[i]. Not validated here; see validate_delta.
  static DeltaSpec custom_polynomial(std::vector<DeltaTerm> terms);

  Kind kind() const { return kind_; }
  const std::vector<DeltaTerm>& terms() const { return terms_; }

  double operator()(const SimplexWeight& w) const;

 private:
  DeltaSpec(Kind kind, std::vector<DeltaTerm> terms) : kind_(kind), terms_(std::move(terms)) {}

  Kind kind_;
  std::vector<DeltaTerm> terms_;
};

double delta_eval(const DeltaSpec& spec, const SimplexWeight& w);

struct DeltaValidation {
  bool valid = false;
  std::string reason;
  double max_vertex_value = 0.0;
  double min_interior_value = 0.0;
};

// Vertex values within 1e-12 of zero, strictly positive at `interior_samples`
// random interior points and at every edge midpoint.
DeltaValidation validate_delta(const DeltaSpec& spec, std::size_t m,
                               std::size_t interior_samples = 1000, std::uint64_t seed = 0);

struct ProblemOptions {
  // Defaults to the inner grid expanded by 25% on each side.
  std::optional<GridSpec> outer_grid;
  int refine_iters = 60;
  Execution exec = Execution::parallel;
};

// The functions f_i, the inner prox-parameter r, the perturbation delta and
// the grids used by the oracle paths. Immutable once built. Inner envelopes
// without an exact path are tabulated on the outer grid at construction.
class ProxAverageProblem {
 public:
  ProxAverageProblem(std::vector<InputFunction> functions, double r, DeltaSpec delta,
                     GridSpec inner_grid, ProblemOptions options = {});

  std::size_t size() const { return functions_.size(); }
  std::size_t dimension() const { return inner_grid_.dimension(); }
  double r() const { return r_; }
  const DeltaSpec& delta() const { return delta_; }
  const GridSpec& inner_grid() const { return inner_grid_; }
  const GridSpec& outer_grid() const { return outer_grid_; }
  const std::vector<InputFunction>& functions() const { return functions_; }
  int refine_iters() const { return refine_iters_; }
  Execution exec() const { return exec_; }

  bool exact_inner(std::size_t i) const { return !tables_[i].has_value(); }
  // e_r f_i(x)
  double inner_envelope(std::size_t i, PointView x) const;
  // P_r f_i(x)
  ProxResult inner_prox(std::size_t i, PointView x) const;

 private:
  EnvelopeOptions oracle_options() const;

  std::vector<InputFunction> functions_;
  double r_;
  DeltaSpec delta_;
  GridSpec inner_grid_;
  GridSpec outer_grid_;
  int refine_iters_;
  Execution exec_;
  std::vector<std::optional<SampledFunction>> tables_;
  std::vector<std::vector<Cell>> cells_;
};

// Sum_i w_i e_r f_i(x)
double weighted_envelope(const ProxAverageProblem& problem, const SimplexWeight& w,
                         PointView x);

// F_w(x) = -sum_i w_i e_r f_i(x). The callback refers to `problem`, which must
// outlive it.
Callback inner_function(const ProxAverageProblem& problem, const SimplexWeight& w);

// PA(., w) = -e_{r + delta(w)}(F_w), evaluated through the grid oracle on the
// problem's outer grid with F_w cached there.
class ProxAverage {
 public:
  ProxAverage(const ProxAverageProblem& problem, SimplexWeight w);

  const SimplexWeight& weight() const { return weight_; }
  double outer_parameter() const { return outer_r_; }
  const std::vector<double>& inner_samples() const { return inner_samples_; }

  double operator()(PointView x) const;
  double operator()(double x) const { return (*this)(PointView(&x, 1)); }
  // Minimizers of F_w(y) + (s/2)|y - x|^2.
  ProxResult outer_prox(PointView x) const;

 private:
  const ProxAverageProblem* problem_;
  SimplexWeight weight_;
  double outer_r_;
  Callback inner_;
  std::vector<double> inner_samples_;
};

double pa_eval(const ProxAverageProblem& problem, PointView x, const SimplexWeight& w);

SampledFunction pa_curve(const ProxAverageProblem& problem, const SimplexWeight& w,
                         const GridSpec& grid);
SampledFunction pa_curve(const ProxAverage& pa, const GridSpec& grid, Execution exec);

struct ArgminEquivalence {
  std::vector<Point> argmin_pa;
  std::vector<Point> argmin_weighted;
  double hausdorff = 0.0;
  // Every reported minimizer of either objective is within the default tie
  // tolerance of the other objective's minimum. Decides flat regions, where
  // the reported points of a minimizing plateau are arbitrary.
  bool cross_optimal = false;
  // hausdorff <= tol, or cross_optimal.
  bool agree = false;
};

ArgminEquivalence argmin_equivalence(const ProxAverageProblem& problem, const SimplexWeight& w,
                                     const GridSpec& grid, double tol);

}  // namespace ncpa

#endif  // NCPA_PROXAVG_HPP_
