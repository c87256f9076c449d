#include "ncpa/minpath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncpa/errors.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/oracle.hpp"
#include "ncpa/random.hpp"

namespace ncpa {

namespace {

constexpr double kDerivativeStep = 1e-6;
constexpr double kClassifyStep = 1e-4;
constexpr double kBisectionWidth = 1e-10;
constexpr double kCriticalTol = 1e-4;

double norm(PointView v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double distance_to_set(PointView p, const std::vector<Point>& set) {
  double best = kInfinity;
  for (const auto& q : set) best = std::min(best, euclidean(p, q));
  return best;
}

const Point& nearest(const std::vector<Point>& candidates, const std::vector<Point>& target) {
  std::size_t best = 0;
  double d = kInfinity;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double di = distance_to_set(candidates[i], target);
    if (di < d) {
      d = di;
      best = i;
    }
  }
  return candidates[best];
}

SimplexWeight midpoint(const SimplexWeight& a, const SimplexWeight& b) {
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (a[i] + b[i]);
  return SimplexWeight(std::move(w));
}

std::string format_point(PointView p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t d = 0; d < p.size(); ++d) os << (d ? ", " : "") << p[d];
  os << ')';
  return os.str();
}

}  // namespace

double default_jump_threshold(const GridSpec& grid) {
  double extent = 0.0;
  for (const auto& a : grid.axes()) extent = std::max(extent, a.upper - a.lower);
  return 1e-2 * extent;
}

ArgminPath track_argmin(const ProxAverageProblem& problem, const std::vector<SimplexWeight>& path,
                        const GridSpec& grid, std::optional<double> tie_tol,
                        std::optional<double> jump_threshold) {
  if (path.empty()) throw InvalidArgument("weight path is empty");
  if (grid.dimension() != problem.dimension()) throw InvalidArgument("grid has the wrong dimension");
  for (const auto& w : path) {
    if (w.size() != problem.size()) throw InvalidArgument("path weight has the wrong size");
  }
  ArgminPath out;
  out.records.reserve(path.size());
  const double denom = path.size() > 1 ? static_cast<double>(path.size() - 1) : 1.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    out.records.push_back(ArgminRecord{static_cast<double>(k) / denom, path[k], {}, 0.0, {}});
  }

  MinimizeOptions opts;
  opts.refine_iters = problem.refine_iters();
  opts.tie_tol = tie_tol;
  opts.exec = Execution::serial;
  for_each_index(
      path.size(),
      [&](std::size_t k) {
        auto& rec = out.records[k];
        const Callback W = [&](PointView x) { return weighted_envelope(problem, rec.lambda, x); };
        GridMinimum m = minimize_on_grid(W, grid, opts);
        rec.min_value = m.value;
        rec.argmin = std::move(m.minimizers);
        for (const auto& p : rec.argmin) {
          rec.gradient_norms.push_back(norm(central_gradient(W, p, kDerivativeStep)));
        }
      },
      problem.exec());

  out.jumps = detect_jumps(out.records, jump_threshold.value_or(default_jump_threshold(grid)));
  return out;
}

std::vector<JumpEvent> detect_jumps(const std::vector<ArgminRecord>& records, double threshold) {
  std::vector<JumpEvent> events;
  if (records.size() < 2) return events;
  std::vector<char> over(records.size() - 1);
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    over[k] = hausdorff(records[k].argmin, records[k + 1].argmin) > threshold;
  }
  std::size_t k = 0;
  while (k < over.size()) {
    if (!over[k]) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < over.size() && over[end + 1]) ++end;
    const auto& left = records[k];
    const auto& right = records[end + 1];
    const ArgminRecord* tie = nullptr;
    for (std::size_t j = k + 1; j <= end; ++j) {
      if (records[j].argmin.size() >= 2) {
        tie = &records[j];
        break;
      }
    }
    if (tie) {
      const Point& from = nearest(tie->argmin, left.argmin);
      const Point& to = nearest(tie->argmin, right.argmin);
      events.push_back(JumpEvent{tie->t, tie->lambda, left.argmin, right.argmin, euclidean(from, to)});
    } else {
      events.push_back(JumpEvent{0.5 * (left.t + right.t), midpoint(left.lambda, right.lambda),
                                 left.argmin, right.argmin,
                                 hausdorff(left.argmin, right.argmin)});
    }
    k = end + 1;
  }
  return events;
}

std::string to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::min:
      return "min";
    case CriticalKind::max:
      return "max";
    case CriticalKind::saddle_flat:
      return "saddle-flat";
  }
  return "unknown";
}

std::vector<CriticalPoint> critical_points_1d(const ProxAverageProblem& problem,
                                              const SimplexWeight& lambda, const GridSpec& grid) {
  if (problem.dimension() != 1 || grid.dimension() != 1) {
    throw InvalidArgument("critical point scan is one-dimensional");
  }
  auto W = [&](double x) { return weighted_envelope(problem, lambda, PointView(&x, 1)); };
  auto D = [&](double x) {
    return (W(x + kDerivativeStep) - W(x - kDerivativeStep)) / (2.0 * kDerivativeStep);
  };
  std::vector<double> d(grid.size());
  for_each_index(
      grid.size(), [&](std::size_t k) { d[k] = D(grid.axis(0).coord(k)); }, problem.exec());

  std::vector<CriticalPoint> out;
  std::size_t last = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (d[k] == 0.0) continue;
    if (last < grid.size() && (d[last] < 0.0) != (d[k] < 0.0)) {
      double a = grid.axis(0).coord(last);
      double b = grid.axis(0).coord(k);
      const bool rising = d[k] > 0.0;
      while (b - a > kBisectionWidth) {
        const double mid = 0.5 * (a + b);
        const double dm = D(mid);
        if (dm == 0.0) {
          a = b = mid;
          break;
        }
        if ((dm > 0.0) == rising) {
          b = mid;
        } else {
          a = mid;
        }
      }
      const double x = 0.5 * (a + b);
      const double h = kClassifyStep;
      const double second = (W(x + h) - 2.0 * W(x) + W(x - h)) / (h * h);
      const double scale = 1e-6 * (1.0 + std::abs(W(x)));
      CriticalKind kind = CriticalKind::saddle_flat;
      if (second > scale) kind = CriticalKind::min;
      if (second < -scale) kind = CriticalKind::max;
      out.push_back({x, kind});
    }
    last = k;
  }
  return out;
}

Point estimate_limit_point(const std::vector<WeightedPoint>& sequence,
                           const SimplexWeight& lambda_bar) {
  if (sequence.empty()) throw InvalidArgument("sequence is empty");
  const std::size_t n = sequence.front().first.size();
  const double count = static_cast<double>(sequence.size());
  double s_mean = 0.0;
  for (const auto& [x, w] : sequence) s_mean += w.distance(lambda_bar);
  s_mean /= count;
  double s_var = 0.0;
  for (const auto& [x, w] : sequence) {
    const double ds = w.distance(lambda_bar) - s_mean;
    s_var += ds * ds;
  }
  Point out(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double x_mean = 0.0;
    for (const auto& [x, w] : sequence) x_mean += x[d];
    x_mean /= count;
    if (!(s_var > 0.0)) {
      out[d] = x_mean;
      continue;
    }
    double cov = 0.0;
    for (const auto& [x, w] : sequence) cov += (w.distance(lambda_bar) - s_mean) * (x[d] - x_mean);
    out[d] = x_mean - (cov / s_var) * s_mean;
  }
  return out;
}

CheckReport verify_limit_critical(const ProxAverageProblem& problem,
                                  const std::vector<WeightedPoint>& sequence,
                                  const SimplexWeight& lambda_bar) {
  if (sequence.empty()) throw InvalidArgument("sequence is empty");
  if (lambda_bar.size() != problem.size()) throw InvalidArgument("λ̄ has the wrong size");
  for (const auto& [x, w] : sequence) {
    if (x.size() != problem.dimension() || w.size() != problem.size()) {
      throw InvalidArgument("sequence entry has the wrong dimension");
    }
  }
  CheckReport report;
  report.name = "limit_critical";
  report.samples_tested = sequence.size();

  MinimizeOptions opts;
  opts.refine_iters = problem.refine_iters();
  opts.exec = Execution::serial;
  std::vector<double> gaps(sequence.size(), 0.0);
  for_each_index(
      sequence.size(),
      [&](std::size_t k) {
        const auto& [x, w] = sequence[k];
        const Callback W = [&](PointView y) { return weighted_envelope(problem, w, y); };
        const double best = minimize_on_grid(W, problem.inner_grid(), opts).value;
        gaps[k] = (W(x) - best) / (1.0 + std::abs(best));
      },
      problem.exec());
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    if (!(gaps[k] <= 1e-6)) {
      throw InvalidArgument("sequence point " + std::to_string(k + 1) + " is not a minimizer");
    }
  }
  if (sequence.size() >= 2) {
    const auto& a = sequence[sequence.size() - 2].first;
    const auto& b = sequence.back().first;
    if (euclidean(a, b) > 1e-2 * (1.0 + norm(b))) {
      throw InvalidArgument("sequence does not converge: last step " +
                            std::to_string(euclidean(a, b)));
    }
  }

  const Point limit = estimate_limit_point(sequence, lambda_bar);
  const ProxAverage pa(problem, lambda_bar);
  const Point g = central_gradient([&pa](PointView y) { return pa(y); }, limit, 1e-5);
  const double gnorm = norm(g);
  report.estimate = gnorm;
  report.note = "limit point " + format_point(limit);
  if (!(gnorm <= kCriticalTol)) {
    report.add_violation({limit, limit, lambda_bar.weights(), kCriticalTol - gnorm});
  }
  report.passed = report.violation_count == 0;
  return report;
}

CheckReport cross_check_records(const ProxAverageProblem& problem, const ArgminPath& path,
                                const GridSpec& grid, double fraction, std::uint64_t seed) {
  CheckReport report;
  report.name = "argmin_cross_check";
  report.seed = seed;
  std::vector<std::size_t> chosen;
  Rng rng(seed);
  for (std::size_t k = 0; k < path.records.size(); ++k) {
    if (rng.uniform() < fraction) chosen.push_back(k);
  }
  if (chosen.empty() && !path.records.empty()) chosen.push_back(rng.index(path.records.size()));
  MinimizeOptions opts;
  opts.refine_iters = problem.refine_iters();
  opts.exec = problem.exec();
  for (std::size_t k : chosen) {
    const auto& rec = path.records[k];
    const ProxAverage pa(problem, rec.lambda);
    const Callback f = [&pa](PointView y) { return pa(y); };
    auto sampler = [&](const GridSpec& g) { return pa_curve(pa, g, problem.exec()).values; };
    const double direct = minimize_sampled(f, sampler, grid, opts).value;
    ++report.samples_tested;
    const double margin = 1e-5 - std::abs(direct - rec.min_value);
    if (margin < 0.0) {
      const Point at = rec.argmin.empty() ? Point{} : rec.argmin.front();
      report.add_violation({at, at, rec.lambda.weights(), margin});
    }
  }
  report.passed = report.violation_count == 0;
  return report;
}

}  // namespace ncpa
