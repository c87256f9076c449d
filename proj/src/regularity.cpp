#include "ncpa/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncpa/errors.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/oracle.hpp"

namespace ncpa {

namespace {

constexpr double kInequalityTol = 1e-9;
constexpr double kShiftConvexTol = 1e-7;
constexpr double kLipschitzSlack = 1e-6;

double norm(PointView v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Uniform in the open ball of radius `radius` about `center`.
Point sample_ball(PointView center, double radius, Rng& rng) {
  Point out(center.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double sq = 0.0;
    for (std::size_t d = 0; d < center.size(); ++d) {
      out[d] = rng.uniform(-radius, radius);
      sq += out[d] * out[d];
    }
    if (sq < radius * radius) break;
  }
  for (std::size_t d = 0; d < center.size(); ++d) out[d] += center[d];
  return out;
}

void finish(CheckReport& report) { report.passed = report.violation_count == 0; }

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void CheckReport::add_violation(Violation v) {
  ++violation_count;
  if (violations.size() < kMaxStoredViolations) violations.push_back(std::move(v));
  passed = false;
}

Point central_gradient(const Callback& f, PointView x, double h) {
  Point g(x.size());
  Point probe(x.begin(), x.end());
  for (std::size_t d = 0; d < x.size(); ++d) {
    probe[d] = x[d] + h;
    const double up = f(probe);
    probe[d] = x[d] - h;
    const double down = f(probe);
    probe[d] = x[d];
    g[d] = (up - down) / (2.0 * h);
  }
  return g;
}

SimplexWeight sample_weight_near(const SimplexWeight& center, double radius, Rng& rng) {
  const std::size_t m = center.size();
  if (m < 2 || !(radius > 0.0)) return center;
  std::vector<double> u(m);
  for (int attempt = 0; attempt < 100; ++attempt) {
    double mean = 0.0;
    for (auto& x : u) {
      x = rng.uniform(-1.0, 1.0);
      mean += x;
    }
    mean /= static_cast<double>(m);
    for (auto& x : u) x -= mean;
    const double len = norm(u);
    if (len == 0.0) continue;
    const double step = radius * rng.uniform() / len;
    std::vector<double> w(m);
    bool inside = true;
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = center[i] + step * u[i];
      if (w[i] < 0.0) inside = false;
    }
    if (!inside) continue;
    double sum = 0.0;
    for (double x : w) sum += x;
    for (auto& x : w) x /= sum;
    return SimplexWeight(std::move(w));
  }
  return center;
}

CheckReport check_prox_inequality(const MaxQuadFunction& f, double xbar, double eps, double r,
                                  std::size_t sample_count) {
  if (f.dimension() != 1) throw InvalidArgument("prox inequality check is one-dimensional");
  if (!(eps > 0.0)) throw InvalidArgument("neighbourhood radius must be positive");
  if (sample_count < 2) throw InvalidArgument("need at least two samples");
  CheckReport report;
  report.name = "prox_inequality";
  const double fbar = f(xbar);
  if (!std::isfinite(fbar)) {
    report.note = "x̄ lies outside the domain";
    return report;
  }
  auto gradients_at = [&](double x) {
    std::vector<double> out;
    for (std::size_t j : f.active_pieces(PointView(&x, 1))) {
      out.push_back(f.pieces()[j].gradient(PointView(&x, 1))[0]);
    }
    return out;
  };
  const auto vbar = gradients_at(xbar);
  const double vlo = *std::min_element(vbar.begin(), vbar.end());
  const double vhi = *std::max_element(vbar.begin(), vbar.end());

  std::vector<double> xs(sample_count);
  std::vector<double> fx(sample_count);
  for (std::size_t k = 0; k < sample_count; ++k) {
    xs[k] = xbar - eps + 2.0 * eps * static_cast<double>(k + 1) / static_cast<double>(sample_count + 1);
    fx[k] = f(xs[k]);
  }

  for (std::size_t a = 0; a < sample_count; ++a) {
    if (!std::isfinite(fx[a]) || !(std::abs(fx[a] - fbar) < eps)) continue;
    for (double v : gradients_at(xs[a])) {
      const double gap = v < vlo ? vlo - v : (v > vhi ? v - vhi : 0.0);
      if (!(gap < eps)) continue;
      for (std::size_t b = 0; b < sample_count; ++b) {
        if (b == a) continue;
        ++report.samples_tested;
        if (!std::isfinite(fx[b])) continue;
        const double d = xs[b] - xs[a];
        const double margin = fx[b] - (fx[a] + v * d - 0.5 * r * d * d);
        if (margin < -kInequalityTol * (1.0 + std::abs(fx[a]))) {
          report.add_violation({Point{xs[a]}, Point{xs[b]}, std::nullopt, margin});
        }
      }
    }
  }
  finish(report);
  return report;
}

CheckReport check_para_prox_inequality(const ProxAverageProblem& problem, PointView xbar,
                                       const SimplexWeight& lambda_bar, double eps, double r,
                                       std::size_t sample_count, std::uint64_t seed,
                                       double slack) {
  if (xbar.size() != problem.dimension()) throw InvalidArgument("x̄ has the wrong dimension");
  if (lambda_bar.size() != problem.size()) throw InvalidArgument("λ̄ has the wrong size");
  if (!(eps > 0.0)) throw InvalidArgument("neighbourhood radius must be positive");
  CheckReport report;
  report.name = "para_prox_inequality";
  report.seed = seed;

  struct Sample {
    SimplexWeight lambda;
    Point x;
    Point xp;
  };
  std::vector<Sample> samples;
  samples.reserve(sample_count);
  Rng rng(seed);
  for (std::size_t k = 0; k < sample_count; ++k) {
    SimplexWeight lambda = sample_weight_near(lambda_bar, eps, rng);
    Point x = sample_ball(xbar, eps, rng);
    Point xp = sample_ball(xbar, eps, rng);
    samples.push_back({std::move(lambda), std::move(x), std::move(xp)});
  }

  const Callback F_bar = inner_function(problem, lambda_bar);
  const double Fbar = F_bar(xbar);
  const Point vbar = central_gradient(F_bar, xbar, 1e-6 * (1.0 + norm(xbar)));

  enum class Outcome { skipped, held, violated };
  std::vector<Outcome> outcome(sample_count, Outcome::skipped);
  std::vector<double> margins(sample_count, 0.0);
  for_each_index(
      sample_count,
      [&](std::size_t k) {
        const auto& s = samples[k];
        const Callback F = inner_function(problem, s.lambda);
        const double fx = F(s.x);
        if (!std::isfinite(fx) || !(std::abs(fx - Fbar) < eps)) return;
        const Point v = central_gradient(F, s.x, 1e-6 * (1.0 + norm(s.x)));
        double gap = 0.0;
        for (std::size_t d = 0; d < v.size(); ++d) gap += (v[d] - vbar[d]) * (v[d] - vbar[d]);
        if (!(std::sqrt(gap) < eps)) return;
        const double fxp = F(s.xp);
        double lin = 0.0;
        double sq = 0.0;
        for (std::size_t d = 0; d < v.size(); ++d) {
          const double dd = s.xp[d] - s.x[d];
          lin += v[d] * dd;
          sq += dd * dd;
        }
        const double margin = fxp - (fx + lin - 0.5 * r * sq);
        margins[k] = margin;
        outcome[k] = margin < -(kInequalityTol * (1.0 + std::abs(fx)) + slack) ? Outcome::violated
                                                                       : Outcome::held;
      },
      problem.exec());

  for (std::size_t k = 0; k < sample_count; ++k) {
    if (outcome[k] == Outcome::skipped) continue;
    ++report.samples_tested;
    if (outcome[k] == Outcome::violated) {
      report.add_violation({samples[k].x, samples[k].xp, samples[k].lambda.weights(), margins[k]});
    }
  }
  finish(report);
  return report;
}

CheckReport check_shifted_convexity(const SampledFunction& pa, double outer_parameter,
                                    PointView xbar) {
  if (xbar.size() != pa.grid.dimension()) throw InvalidArgument("x̄ has the wrong dimension");
  CheckReport report;
  report.name = "shifted_convexity";
  std::vector<double> shifted(pa.values.size());
  add_shifted_quadratic(pa.values, pa.grid, outer_parameter, xbar, shifted, Execution::serial);
  const auto bad = midpoint_violations(shifted, pa.grid, kShiftConvexTol, &report.samples_tested);
  const Point center(xbar.begin(), xbar.end());
  for (const auto& v : bad) report.add_violation({pa.grid.point(v.center), center, std::nullopt, v.margin});
  finish(report);
  return report;
}

CheckReport check_shifted_convexity(const ProxAverageProblem& problem, const SimplexWeight& lambda,
                                    PointView xbar, const GridSpec& grid) {
  const ProxAverage pa(problem, lambda);
  CheckReport report =
      check_shifted_convexity(pa_curve(pa, grid, problem.exec()), pa.outer_parameter(), xbar);
  if (lambda.is_vertex()) report.note = "λ is a simplex vertex, so δ(λ) = 0";
  return report;
}

CheckReport estimate_prox_map_lipschitz(const ProxAverageProblem& problem,
                                        const SimplexWeight& lambda, const GridSpec& grid) {
  if (grid.dimension() != problem.dimension()) throw InvalidArgument("grid has the wrong dimension");
  if (lambda.size() != problem.size()) throw InvalidArgument("λ has the wrong size");
  CheckReport report;
  report.name = "prox_map_lipschitz";
  const std::size_t n = grid.dimension();
  std::vector<double> T(grid.size() * n, 0.0);
  std::vector<char> excluded(grid.size(), 0);
  for_each_index(
      grid.size(),
      [&](std::size_t k) {
        const Point x = grid.point(k);
        for (std::size_t i = 0; i < problem.size(); ++i) {
          if (lambda[i] == 0.0) continue;
          const ProxResult p = problem.inner_prox(i, x);
          if (p.multivalued) {
            excluded[k] = 1;
            return;
          }
          for (std::size_t d = 0; d < n; ++d) T[k * n + d] += lambda[i] * p.minimizers.front()[d];
        }
        for (std::size_t d = 0; d < n; ++d) T[k * n + d] -= x[d];
      },
      problem.exec());

  double estimate = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (excluded[k]) continue;
    const auto index = grid.unflatten(k);
    for (std::size_t d = 0; d < n; ++d) {
      if (index[d] + 1 == grid.axis(d).points) continue;
      const std::size_t j = k + grid.stride(d);
      if (excluded[j]) continue;
      ++report.samples_tested;
      double diff = 0.0;
      for (std::size_t e = 0; e < n; ++e) {
        diff += (T[k * n + e] - T[j * n + e]) * (T[k * n + e] - T[j * n + e]);
      }
      const double q = std::sqrt(diff) / grid.axis(d).spacing();
      estimate = std::max(estimate, q);
      if (q > 1.0 + kLipschitzSlack) {
        report.add_violation({grid.point(k), grid.point(j), lambda.weights(), 1.0 + kLipschitzSlack - q});
      }
    }
  }
  const auto n_excluded = std::count(excluded.begin(), excluded.end(), 1);
  if (n_excluded > 0) {
    report.note = std::to_string(n_excluded) + " grid points excluded (multivalued prox)";
  }
  report.estimate = estimate;
  finish(report);
  return report;
}

CheckReport check_gradient_lambda_lipschitz(const ProxAverageProblem& problem, PointView x,
                                            const SimplexWeight& lambda_bar, double radius,
                                            std::size_t sample_count, std::uint64_t seed) {
  if (x.size() != problem.dimension()) throw InvalidArgument("x has the wrong dimension");
  if (lambda_bar.size() != problem.size()) throw InvalidArgument("λ̄ has the wrong size");
  CheckReport report;
  report.name = "gradient_lambda_lipschitz";
  report.seed = seed;
  if (problem.size() == 1) {
    report.estimate = 0.0;
    report.note = "a single function: PA does not depend on the weight";
    return report;
  }
  constexpr double kStep = 1e-5;
  auto gradient = [&](const SimplexWeight& w) {
    const ProxAverage pa(problem, w);
    return central_gradient([&pa](PointView y) { return pa(y); }, x, kStep);
  };
  auto estimate_at = [&](double rho) {
    Rng rng(seed);
    double best = 0.0;
    for (std::size_t k = 0; k < sample_count; ++k) {
      const SimplexWeight a = sample_weight_near(lambda_bar, rho, rng);
      const SimplexWeight b = sample_weight_near(lambda_bar, rho, rng);
      const double dl = a.distance(b);
      if (!(dl > 0.0)) continue;
      ++report.samples_tested;
      const Point ga = gradient(a);
      const Point gb = gradient(b);
      double diff = 0.0;
      for (std::size_t d = 0; d < ga.size(); ++d) diff += (ga[d] - gb[d]) * (ga[d] - gb[d]);
      best = std::max(best, std::sqrt(diff) / dl);
    }
    return best;
  };
  const double full = estimate_at(radius);
  const double half = estimate_at(0.5 * radius);
  report.estimate = full;
  report.note = "estimate at radius/2: " + format_double(half) +
                ", δ(λ̄) = " + format_double(problem.delta()(lambda_bar));
  const bool stable = std::isfinite(full) && std::isfinite(half) &&
                      half <= 1.5 * full + kLipschitzSlack;
  if (!stable) {
    report.add_violation({Point(x.begin(), x.end()), Point(x.begin(), x.end()),
                          lambda_bar.weights(), 1.5 * full + kLipschitzSlack - half});
  }
  finish(report);
  return report;
}

}  // namespace ncpa
