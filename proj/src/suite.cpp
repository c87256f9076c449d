#include "ncpa/suite.hpp"

#include <algorithm>
#include <cmath>

#include "ncpa/errors.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/moreau.hpp"
#include "ncpa/oracle.hpp"
#include "ncpa/random.hpp"

namespace ncpa {

namespace {

std::vector<std::size_t> strided(std::size_t n, std::size_t max_points) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (max_points == 0 || n <= max_points) {
    for (std::size_t k = 0; k < n; ++k) out.push_back(k);
    return out;
  }
  for (std::size_t j = 0; j < max_points; ++j) {
    out.push_back(static_cast<std::size_t>((static_cast<double>(j) * static_cast<double>(n - 1)) /
                                           static_cast<double>(max_points - 1) + 0.5));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EnvelopeOptions direct_options(const ProxAverageProblem& problem) {
  EnvelopeOptions opts;
  opts.grid = problem.outer_grid();
  opts.refine_iters = problem.refine_iters();
  opts.exec = Execution::serial;
  return opts;
}

Point random_point(const GridSpec& grid, Rng& rng) {
  Point x(grid.dimension());
  for (std::size_t d = 0; d < x.size(); ++d) x[d] = rng.uniform(grid.axis(d).lower, grid.axis(d).upper);
  return x;
}

double norm(PointView v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void finish(CheckReport& report) { report.passed = report.violation_count == 0; }

// One scan over (function, point) pairs. `test` returns the margin (negative
// means violated) or nullopt when the pair is skipped.
template <class Test>
void scan_points(CheckReport& report, const ProxAverageProblem& problem, const GridSpec& grid,
                 std::size_t max_points, Test&& test) {
  const auto idx = strided(grid.size(), max_points);
  const std::size_t m = problem.size();
  std::vector<std::optional<double>> margins(idx.size() * m);
  for_each_index(
      margins.size(),
      [&](std::size_t job) {
        const std::size_t i = job / idx.size();
        margins[job] = test(i, grid.point(idx[job % idx.size()]));
      },
      problem.exec());
  for (std::size_t job = 0; job < margins.size(); ++job) {
    if (!margins[job]) continue;
    ++report.samples_tested;
    if (*margins[job] < 0.0) {
      const Point x = grid.point(idx[job % idx.size()]);
      report.add_violation({x, x, SimplexWeight::vertex(m, job / idx.size()).weights(),
                            *margins[job]});
    }
  }
}

}  // namespace

CheckReport check_thresholds(const std::vector<InputFunction>& functions, double r) {
  CheckReport report;
  report.name = "prox_threshold";
  double worst = 0.0;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    ++report.samples_tested;
    const double threshold = functions[i].threshold();
    worst = std::max(worst, threshold);
    if (!(r > threshold)) {
      report.add_violation({Point{}, Point{},
                            SimplexWeight::vertex(functions.size(), i).weights(), r - threshold});
      report.note = "prox-parameter below threshold of function " + std::to_string(i + 1);
    }
  }
  report.estimate = worst;
  finish(report);
  return report;
}

CheckReport check_majorization(const ProxAverageProblem& problem, const GridSpec& grid,
                               std::size_t max_points) {
  CheckReport report;
  report.name = "envelope_majorization";
  scan_points(report, problem, grid, max_points,
              [&](std::size_t i, const Point& x) -> std::optional<double> {
                const double f = problem.functions()[i](x);
                if (!std::isfinite(f)) return std::nullopt;
                const double e = problem.inner_envelope(i, x);
                return f - e + 1e-9 * (1.0 + std::abs(f));
              });
  finish(report);
  return report;
}

CheckReport check_r_monotonicity(const ProxAverageProblem& problem, const GridSpec& grid,
                                 std::size_t max_points) {
  CheckReport report;
  report.name = "r_monotonicity";
  const auto opts = direct_options(problem);
  scan_points(report, problem, grid, max_points,
              [&](std::size_t i, const Point& x) -> std::optional<double> {
                const auto& fi = problem.functions()[i];
                const double f = fi(x);
                const double e1 = envelope(fi, problem.r(), x, opts);
                const double e2 = envelope(fi, 2.0 * problem.r(), x, opts);
                const double tol = 1e-8 * (1.0 + std::abs(e2));
                double margin = e2 - e1 + tol;
                if (std::isfinite(f)) margin = std::min(margin, f - e2 + tol);
                return margin;
              });
  finish(report);
  return report;
}

CheckReport check_infimum_preservation(const ProxAverageProblem& problem, const GridSpec& grid) {
  CheckReport report;
  report.name = "infimum_preservation";
  MinimizeOptions opts;
  opts.refine_iters = problem.refine_iters();
  opts.exec = problem.exec();
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& fi = problem.functions()[i];
    const double min_f = minimize_on_grid(fi.callback(), grid, opts).value;
    const Callback e = [&](PointView x) { return problem.inner_envelope(i, x); };
    const GridMinimum me = minimize_on_grid(e, grid, opts);
    ++report.samples_tested;
    const double margin = 1e-6 * (1.0 + std::abs(min_f)) - std::abs(min_f - me.value);
    if (margin < 0.0) {
      const Point at = me.minimizers.empty() ? Point{} : me.minimizers.front();
      report.add_violation({at, at, SimplexWeight::vertex(problem.size(), i).weights(), margin});
    }
  }
  finish(report);
  return report;
}

CheckReport check_proximal_hull(const ProxAverageProblem& problem, const GridSpec& grid,
                                std::size_t max_points) {
  CheckReport report;
  report.name = "proximal_hull";
  const auto opts = direct_options(problem);
  std::vector<char> convex_shift(problem.size(), 0);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto* mq = problem.functions()[i].max_quad();
    convex_shift[i] = mq && is_shift_convex(*mq, problem.r()).convex;
  }
  scan_points(report, problem, grid, max_points,
              [&](std::size_t i, const Point& x) -> std::optional<double> {
                const auto& fi = problem.functions()[i];
                const double f = fi(x);
                if (!std::isfinite(f)) return std::nullopt;
                const double hull = double_envelope(fi, problem.r(), x, problem.outer_grid(), opts);
                const double tol = 1e-8 * (1.0 + std::abs(f));
                if (convex_shift[i]) return tol - std::abs(hull - f);
                return f - hull + 1e-8 * (1.0 + std::abs(f));
              });
  finish(report);
  return report;
}

CheckReport check_inner_affinity(const ProxAverageProblem& problem, std::size_t samples,
                                 std::uint64_t seed) {
  CheckReport report;
  report.name = "inner_affinity";
  report.seed = seed;
  const std::size_t m = problem.size();
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const SimplexWeight a(rng.simplex(m));
    const SimplexWeight b(rng.simplex(m));
    const double t = rng.uniform();
    const Point x = random_point(problem.inner_grid(), rng);
    std::vector<double> mix(m);
    for (std::size_t i = 0; i < m; ++i) mix[i] = t * a[i] + (1.0 - t) * b[i];
    double sum = 0.0;
    for (double w : mix) sum += w;
    for (double& w : mix) w /= sum;
    const SimplexWeight c(std::move(mix));
    const double lhs = inner_function(problem, c)(x);
    const double rhs = t * inner_function(problem, a)(x) + (1.0 - t) * inner_function(problem, b)(x);
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) scale += std::abs(problem.inner_envelope(i, x));
    ++report.samples_tested;
    const double margin = 1e-10 * scale - std::abs(lhs - rhs);
    if (margin < 0.0) report.add_violation({x, x, c.weights(), margin});
  }
  finish(report);
  return report;
}

CheckReport check_delta(const ProxAverageProblem& problem, std::uint64_t seed) {
  CheckReport report;
  report.name = "delta_validity";
  report.seed = seed;
  const std::size_t m = problem.size();
  const auto v = validate_delta(problem.delta(), m, 1000, seed);
  report.samples_tested = m + (m >= 2 ? 1000 + m * (m - 1) / 2 : 0);
  if (m >= 2) report.estimate = v.min_interior_value;
  if (!v.valid) {
    report.note = v.reason;
    report.add_violation({Point{}, Point{}, std::nullopt, -v.max_vertex_value});
  }
  finish(report);
  return report;
}

CheckReport check_gradient_identity(const ProxAverageProblem& problem, std::size_t samples,
                                    std::uint64_t seed) {
  CheckReport report;
  report.name = "gradient_identity";
  report.seed = seed;
  const auto opts = direct_options(problem);
  const std::size_t candidates = 4 * samples;
  const std::size_t n = problem.dimension();

  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& fi = problem.functions()[i];
    const double r = problem.r();
    Rng rng(seed + i);
    std::vector<Point> xs(candidates);
    for (auto& x : xs) x = random_point(problem.inner_grid(), rng);
    const double h = exact_path_available(fi, r) ? 1e-6 : 1e-5;

    std::vector<std::optional<double>> err(candidates);
    for_each_index(
        candidates,
        [&](std::size_t k) {
          const Point& x = xs[k];
          const ProxResult p = prox(fi, r, x, opts);
          if (p.multivalued) return;
          Point g(n);
          for (std::size_t d = 0; d < n; ++d) g[d] = r * (x[d] - p.minimizers.front()[d]);
          Point fd(n);
          Point probe = x;
          for (std::size_t d = 0; d < n; ++d) {
            probe[d] = x[d] + h;
            const ProxResult up = prox(fi, r, probe, opts);
            probe[d] = x[d] - h;
            const ProxResult down = prox(fi, r, probe, opts);
            probe[d] = x[d];
            // A prox jump between the probes means the difference straddles a kink.
            if (up.multivalued || down.multivalued ||
                euclidean(up.minimizers.front(), down.minimizers.front()) > 1e-3) {
              return;
            }
            fd[d] = (up.value - down.value) / (2.0 * h);
          }
          double diff = 0.0;
          for (std::size_t d = 0; d < n; ++d) diff += (g[d] - fd[d]) * (g[d] - fd[d]);
          err[k] = std::sqrt(diff) / std::max(1.0, norm(g));
        },
        problem.exec());

    std::size_t used = 0;
    for (std::size_t k = 0; k < candidates && used < samples; ++k) {
      if (!err[k]) continue;
      ++used;
      ++report.samples_tested;
      report.estimate = std::max(report.estimate.value_or(0.0), *err[k]);
      if (*err[k] > 1e-4) {
        report.add_violation({xs[k], xs[k], SimplexWeight::vertex(problem.size(), i).weights(),
                              1e-4 - *err[k]});
      }
    }
    if (used < samples) {
      report.note += "function " + std::to_string(i + 1) + ": only " + std::to_string(used) +
                     " single-valued points found; ";
    }
  }
  finish(report);
  return report;
}

double interpolation_error(const ProxAverageProblem& problem) {
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (!problem.exact_inner(i)) {
      const double h = problem.outer_grid().max_spacing();
      return problem.r() * h * h / 8.0;
    }
  }
  return 0.0;
}

CheckReport check_vertex_recovery(const ProxAverageProblem& problem, const GridSpec& grid,
                                  double tol, std::size_t max_points, double slack) {
  CheckReport report;
  report.name = "vertex_recovery";
  const auto idx = strided(grid.size(), max_points);
  double worst = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const ProxAverage pa(problem, SimplexWeight::vertex(problem.size(), i));
    const auto& fi = problem.functions()[i];
    std::vector<std::optional<double>> gap(idx.size());
    for_each_index(
        idx.size(),
        [&](std::size_t j) {
          const Point x = grid.point(idx[j]);
          const double f = fi(x);
          if (!std::isfinite(f)) return;
          gap[j] = std::max(0.0, std::abs(pa(x) - f) - slack) / (1.0 + std::abs(f));
        },
        problem.exec());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (!gap[j]) continue;
      ++report.samples_tested;
      worst = std::max(worst, *gap[j]);
      if (*gap[j] > tol) {
        const Point x = grid.point(idx[j]);
        report.add_violation({x, x, SimplexWeight::vertex(problem.size(), i).weights(),
                              tol - *gap[j]});
      }
    }
  }
  report.estimate = worst;
  finish(report);
  return report;
}

CheckReport check_argmin_equivalence(const ProxAverageProblem& problem, const SimplexWeight& lambda,
                                     const GridSpec& grid, double tol) {
  CheckReport report;
  report.name = "argmin_equivalence";
  const auto eq = argmin_equivalence(problem, lambda, grid, tol);
  report.samples_tested = eq.argmin_pa.size() + eq.argmin_weighted.size();
  report.estimate = eq.hausdorff;
  if (!eq.agree) {
    const Point a = eq.argmin_pa.empty() ? Point{} : eq.argmin_pa.front();
    const Point b = eq.argmin_weighted.empty() ? Point{} : eq.argmin_weighted.front();
    report.add_violation({a, b, lambda.weights(), tol - eq.hausdorff});
  }
  finish(report);
  return report;
}

SuiteReport run_verify_suite(const std::vector<InputFunction>& functions, double r,
                             const DeltaSpec& delta, const GridSpec& grid,
                             const ProblemOptions& options, std::uint64_t seed) {
  SuiteReport suite;
  suite.suite = "verify";
  suite.checks.push_back(check_thresholds(functions, r));
  if (!suite.checks.back().passed) {
    suite.passed = false;
    return suite;
  }
  const ProxAverageProblem problem(functions, r, delta, grid, options);
  const SimplexWeight center_weight = SimplexWeight::barycenter(problem.size());
  Point center(grid.dimension());
  for (std::size_t d = 0; d < center.size(); ++d) {
    center[d] = 0.5 * (grid.axis(d).lower + grid.axis(d).upper);
  }

  const double slack = 2.0 * interpolation_error(problem);
  const double argmin_tol = 1e-4 + (slack > 0.0 ? grid.max_spacing() : 0.0);

  suite.checks.push_back(check_majorization(problem, grid));
  suite.checks.push_back(check_r_monotonicity(problem, grid));
  suite.checks.push_back(check_gradient_identity(problem, 100, seed));
  suite.checks.push_back(check_vertex_recovery(problem, grid, 1e-5, 501, slack));
  suite.checks.push_back(check_shifted_convexity(problem, center_weight, center, grid));
  suite.checks.push_back(estimate_prox_map_lipschitz(problem, center_weight, grid));
  suite.checks.push_back(check_argmin_equivalence(problem, center_weight, grid, argmin_tol));
  suite.checks.push_back(
      check_para_prox_inequality(problem, center, center_weight, 0.2, 1.25 * r, 2000, seed, slack));
  for (const auto& c : suite.checks) suite.passed = suite.passed && c.passed;
  return suite;
}

}  // namespace ncpa
