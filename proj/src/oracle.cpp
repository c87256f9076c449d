#include "ncpa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ncpa/errors.hpp"

namespace ncpa {

namespace {

constexpr std::size_t kMaxBasins = 256;
constexpr int kMaxSweeps = 50;

struct Candidate {
  Point x;
  double value;
};

bool is_local_min(std::span<const double> v, const GridSpec& grid, std::size_t flat) {
  const double c = v[flat];
  if (!std::isfinite(c)) return false;
  const auto index = grid.unflatten(flat);
  for (std::size_t d = 0; d < grid.dimension(); ++d) {
    const std::size_t s = grid.stride(d);
    // Strict against the backward neighbour so a plateau yields one basin.
    if (index[d] > 0 && !(c < v[flat - s])) return false;
    if (index[d] + 1 < grid.axis(d).points && !(c <= v[flat + s])) return false;
  }
  return true;
}

Candidate refine(const Callback& objective, const GridSpec& grid, std::size_t flat,
                 double grid_value, int iters) {
  Candidate best{grid.point(flat), grid_value};
  if (iters <= 0) return best;
  const std::size_t n = grid.dimension();
  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (std::size_t d = 0; d < n; ++d) {
    const Axis& a = grid.axis(d);
    lo[d] = std::max(a.lower, best.x[d] - a.spacing());
    hi[d] = std::min(a.upper, best.x[d] + a.spacing());
  }
  Point probe = best.x;
  const int sweeps = n == 1 ? 1 : kMaxSweeps;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double before = best.value;
    for (std::size_t d = 0; d < n; ++d) {
      probe = best.x;
      auto line = [&](double t) {
        probe[d] = t;
        return objective(probe);
      };
      const LineMinimum m = golden_section(line, lo[d], hi[d], iters);
      if (m.value < best.value) {
        best.x[d] = m.x;
        best.value = m.value;
      }
    }
    if (!(before - best.value > 1e-15 * (1.0 + std::abs(best.value)))) break;
  }
  return best;
}

std::size_t argmin_index(std::span<const double> values) {
  std::size_t best = values.size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isnan(values[k]) || values[k] == -kInfinity) {
      throw ImproperOnGrid("improper on grid: objective is NaN or -inf at a grid point");
    }
    if (values[k] == kInfinity) continue;
    if (best == values.size() || values[k] < values[best]) best = k;
  }
  if (best == values.size()) {
    throw ImproperOnGrid("improper on grid: objective is +inf at every grid point");
  }
  return best;
}

// The best value sits on the boundary and no interior point ties with it.
bool boundary_minimum(std::span<const double> values, const GridSpec& grid, std::size_t best,
                      const MinimizeOptions& options) {
  if (!grid.on_boundary(best)) return false;
  const double tie = options.tie_tol.value_or(1e-8 * (1.0 + std::abs(values[best])));
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] <= values[best] + tie && !grid.on_boundary(k)) return false;
  }
  return true;
}

}  // namespace

double default_tie_tol(double best) { return 1e-8 * (1.0 + std::abs(best)); }

double euclidean(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInfinity;
  auto one_sided = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double nearest = kInfinity;
      for (const auto& q : to) nearest = std::min(nearest, euclidean(p, q));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

LineMinimum golden_section(const std::function<double(double)>& f, double a, double b,
                           int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  LineMinimum best = fc <= fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
  for (int it = 0; it < iters; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

GridMinimum minimize_sampled(const Callback& objective, const Sampler& sampler,
                             const GridSpec& grid, const MinimizeOptions& options) {
  GridSpec current = grid;
  std::vector<double> values = sampler(current);
  std::size_t best = argmin_index(values);
  bool expanded = false;
  if (boundary_minimum(values, current, best, options)) {
    if (!options.allow_expansion) {
      throw GridTooSmall("grid too small: minimum on the grid boundary");
    }
    current = current.doubled();
    values = sampler(current);
    best = argmin_index(values);
    expanded = true;
    if (boundary_minimum(values, current, best, options)) {
      throw GridTooSmall("grid too small: minimum on the boundary of the expanded grid");
    }
  }

  std::vector<std::size_t> basins;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (is_local_min(values, current, k)) basins.push_back(k);
  }
  std::stable_sort(basins.begin(), basins.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  if (basins.size() > kMaxBasins) basins.resize(kMaxBasins);

  std::vector<Candidate> refined(basins.size());
  for_each_index(
      basins.size(),
      [&](std::size_t i) {
        refined[i] = refine(objective, current, basins[i], values[basins[i]],
                            options.refine_iters);
      },
      options.exec);

  double top = kInfinity;
  for (const auto& c : refined) top = std::min(top, c.value);
  const double tie = options.tie_tol.value_or(default_tie_tol(top));

  std::stable_sort(refined.begin(), refined.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  const double merge_radius = current.max_spacing();
  GridMinimum out;
  out.value = top;
  out.expanded = expanded;
  for (const auto& c : refined) {
    if (c.value > top + tie) break;
    const bool duplicate = std::any_of(out.minimizers.begin(), out.minimizers.end(),
                                       [&](const Point& p) {
                                         return euclidean(p, c.x) <= merge_radius;
                                       });
    if (!duplicate) out.minimizers.push_back(c.x);
  }
  std::sort(out.minimizers.begin(), out.minimizers.end());
  return out;
}

GridMinimum minimize_on_grid(const Callback& objective, const GridSpec& grid,
                             const MinimizeOptions& options) {
  const Execution exec = options.exec;
  return minimize_sampled(
      objective, [&](const GridSpec& g) { return sample(objective, g, exec); }, grid, options);
}

}  // namespace ncpa
