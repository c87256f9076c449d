#include "ncpa/proxavg.hpp"

#include <algorithm>
#include <cmath>

#include "ncpa/errors.hpp"
#include "ncpa/oracle.hpp"
#include "ncpa/random.hpp"

namespace ncpa {

DeltaSpec DeltaSpec::symmetric_quadratic() { return DeltaSpec(Kind::symmetric_quadratic, {}); }

DeltaSpec DeltaSpec::custom_polynomial(std::vector<DeltaTerm> terms) {
  if (terms.empty()) throw InvalidArgument("custom delta polynomial needs at least one term");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coef)) throw InvalidArgument("delta coefficient must be finite");
  }
  return DeltaSpec(Kind::custom_polynomial, std::move(terms));
}

double DeltaSpec::operator()(const SimplexWeight& w) const {
  if (kind_ == Kind::symmetric_quadratic) {
    double sq = 0.0;
    for (double x : w.weights()) sq += x * x;
    return std::max(0.0, 0.5 * (1.0 - sq));
  }
  double acc = 0.0;
  for (const auto& t : terms_) {
    if (t.powers.size() != w.size()) {
      throw InvalidArgument("delta term has " + std::to_string(t.powers.size()) +
                            " powers for " + std::to_string(w.size()) + " weights");
    }
    double term = t.coef;
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (unsigned p = 0; p < t.powers[i]; ++p) term *= w[i];
    }
    acc += term;
  }
  return std::max(0.0, acc);
}

double delta_eval(const DeltaSpec& spec, const SimplexWeight& w) { return spec(w); }

DeltaValidation validate_delta(const DeltaSpec& spec, std::size_t m,
                               std::size_t interior_samples, std::uint64_t seed) {
  DeltaValidation out;
  if (spec.kind() == DeltaSpec::Kind::custom_polynomial) {
    for (const auto& t : spec.terms()) {
      if (t.powers.size() != m) {
        out.reason = "delta term power count does not match the number of functions";
        return out;
      }
    }
  }
  // The raw polynomial, without the clamp at zero, so negative values show up.
  auto raw = [&](const SimplexWeight& w) {
    if (spec.kind() == DeltaSpec::Kind::symmetric_quadratic) return spec(w);
    double acc = 0.0;
    for (const auto& t : spec.terms()) {
      double term = t.coef;
      for (std::size_t i = 0; i < m; ++i) {
        for (unsigned p = 0; p < t.powers[i]; ++p) term *= w[i];
      }
      acc += term;
    }
    return acc;
  };
  for (std::size_t i = 0; i < m; ++i) {
    const double v = raw(SimplexWeight::vertex(m, i));
    out.max_vertex_value = std::max(out.max_vertex_value, std::abs(v));
  }
  if (out.max_vertex_value > 1e-12) {
    out.reason = "delta does not vanish at a simplex vertex";
    return out;
  }
  out.min_interior_value = kInfinity;
  if (m >= 2) {
    Rng rng(seed);
    for (std::size_t k = 0; k < interior_samples; ++k) {
      out.min_interior_value = std::min(out.min_interior_value, raw(SimplexWeight(rng.simplex(m))));
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        std::vector<double> w(m, 0.0);
        w[i] = 0.5;
        w[j] = 0.5;
        out.min_interior_value = std::min(out.min_interior_value, raw(SimplexWeight(w)));
      }
    }
    if (!(out.min_interior_value > 0.0)) {
      out.reason = "delta is not strictly positive off the vertices";
      return out;
    }
  }
  out.valid = true;
  return out;
}

ProxAverageProblem::ProxAverageProblem(std::vector<InputFunction> functions, double r,
                                       DeltaSpec delta, GridSpec inner_grid,
                                       ProblemOptions options)
    : functions_(std::move(functions)),
      r_(r),
      delta_(std::move(delta)),
      inner_grid_(std::move(inner_grid)),
      outer_grid_(options.outer_grid ? *options.outer_grid : inner_grid_.expanded(0.25)),
      refine_iters_(options.refine_iters),
      exec_(options.exec) {
  if (functions_.empty()) throw InvalidArgument("proximal average needs at least one function");
  if (!std::isfinite(r_)) throw InvalidArgument("prox-parameter must be finite");
  if (outer_grid_.dimension() != inner_grid_.dimension()) {
    throw InvalidArgument("inner and outer grids differ in dimension");
  }
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (functions_[i].dimension() != inner_grid_.dimension()) {
      throw InvalidArgument("function " + std::to_string(i + 1) + " has dimension " +
                            std::to_string(functions_[i].dimension()) + ", grid has " +
                            std::to_string(inner_grid_.dimension()));
    }
    const double threshold = functions_[i].threshold();
    if (!(r_ > threshold)) {
      throw ParameterError("prox-parameter below threshold of function " +
                           std::to_string(i + 1) + ": r=" + std::to_string(r_) +
                           ", threshold=" + std::to_string(threshold));
    }
  }
  const auto check = validate_delta(delta_, functions_.size());
  if (!check.valid) throw InvalidArgument("invalid delta: " + check.reason);

  tables_.resize(functions_.size());
  cells_.resize(functions_.size());
  const EnvelopeOptions opts = oracle_options();
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (exact_path_available(functions_[i], r_)) {
      cells_[i] = cell_decomposition_1d(*functions_[i].max_quad());
      continue;
    }
    std::vector<double> values(outer_grid_.size());
    const auto& f = functions_[i];
    for_each_index(
        outer_grid_.size(),
        [&](std::size_t k) {
          const Point y = outer_grid_.point(k);
          values[k] = envelope(f, r_, y, opts);
        },
        exec_);
    tables_[i].emplace(outer_grid_, std::move(values));
  }
}

EnvelopeOptions ProxAverageProblem::oracle_options() const {
  EnvelopeOptions opts;
  opts.grid = outer_grid_;
  opts.refine_iters = refine_iters_;
  opts.exec = Execution::serial;
  return opts;
}

double ProxAverageProblem::inner_envelope(std::size_t i, PointView x) const {
  if (!tables_[i]) return envelope_exact_1d(*functions_[i].max_quad(), cells_[i], r_, x[0]);
  if (outer_grid_.contains(x)) return tables_[i]->interpolate(x);
  return envelope(functions_[i], r_, x, oracle_options());
}

ProxResult ProxAverageProblem::inner_prox(std::size_t i, PointView x) const {
  if (!tables_[i]) return prox_exact_1d(*functions_[i].max_quad(), cells_[i], r_, x[0]);
  return prox(functions_[i], r_, x, oracle_options());
}

double weighted_envelope(const ProxAverageProblem& problem, const SimplexWeight& w,
                         PointView x) {
  if (w.size() != problem.size()) {
    throw InvalidArgument("weight has " + std::to_string(w.size()) + " entries for " +
                          std::to_string(problem.size()) + " functions");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (w[i] != 0.0) acc += w[i] * problem.inner_envelope(i, x);
  }
  return acc;
}

Callback inner_function(const ProxAverageProblem& problem, const SimplexWeight& w) {
  if (w.size() != problem.size()) {
    throw InvalidArgument("weight size does not match the number of functions");
  }
  return [&problem, w](PointView x) { return -weighted_envelope(problem, w, x); };
}

ProxAverage::ProxAverage(const ProxAverageProblem& problem, SimplexWeight w)
    : problem_(&problem),
      weight_(std::move(w)),
      outer_r_(problem.r() + problem.delta()(weight_)),
      inner_(inner_function(problem, weight_)),
      inner_samples_(sample(inner_, problem.outer_grid(), problem.exec())) {}

ProxResult ProxAverage::outer_prox(PointView x) const {
  return prox_oracle_sampled(inner_, inner_samples_, outer_r_, x, problem_->outer_grid(),
                             problem_->refine_iters(), std::nullopt, problem_->exec());
}

double ProxAverage::operator()(PointView x) const { return -outer_prox(x).value; }

double pa_eval(const ProxAverageProblem& problem, PointView x, const SimplexWeight& w) {
  return ProxAverage(problem, w)(x);
}

SampledFunction pa_curve(const ProxAverage& pa, const GridSpec& grid, Execution exec) {
  std::vector<double> values(grid.size());
  for_each_index(
      grid.size(), [&](std::size_t k) { values[k] = pa(grid.point(k)); }, exec);
  return SampledFunction(grid, std::move(values));
}

SampledFunction pa_curve(const ProxAverageProblem& problem, const SimplexWeight& w,
                         const GridSpec& grid) {
  return pa_curve(ProxAverage(problem, w), grid, problem.exec());
}

ArgminEquivalence argmin_equivalence(const ProxAverageProblem& problem, const SimplexWeight& w,
                                     const GridSpec& grid, double tol) {
  MinimizeOptions opts;
  opts.refine_iters = problem.refine_iters();
  opts.exec = problem.exec();

  const Callback weighted = [&](PointView x) { return weighted_envelope(problem, w, x); };
  ArgminEquivalence out;
  const GridMinimum wmin = minimize_on_grid(weighted, grid, opts);
  out.argmin_weighted = wmin.minimizers;

  const ProxAverage pa(problem, w);
  const Callback pa_fn = [&pa](PointView x) { return pa(x); };
  auto sampler = [&](const GridSpec& g) { return pa_curve(pa, g, problem.exec()).values; };
  const GridMinimum pmin = minimize_sampled(pa_fn, sampler, grid, opts);
  out.argmin_pa = pmin.minimizers;

  out.hausdorff = hausdorff(out.argmin_pa, out.argmin_weighted);
  out.cross_optimal = true;
  for (const auto& p : out.argmin_pa) {
    out.cross_optimal = out.cross_optimal && weighted(p) <= wmin.value + default_tie_tol(wmin.value);
  }
  for (const auto& q : out.argmin_weighted) {
    out.cross_optimal = out.cross_optimal && pa(q) <= pmin.value + default_tie_tol(pmin.value);
  }
  out.agree = out.hausdorff <= tol || out.cross_optimal;
  return out;
}

}  // namespace ncpa
