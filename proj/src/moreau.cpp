#include "ncpa/moreau.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncpa/errors.hpp"
#include "ncpa/oracle.hpp"

namespace ncpa {

namespace {

// Real roots of a y^2 + b y + c.
void quadratic_roots(double a, double b, double c, std::vector<double>& out) {
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) {
    out.push_back(0.0);
    return;
  }
  out.push_back(q / a);
  out.push_back(c / q);
}

double probe_point(double lo, double hi) {
  if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
  if (std::isfinite(lo)) return lo + std::max(1.0, std::abs(lo));
  if (std::isfinite(hi)) return hi - std::max(1.0, std::abs(hi));
  return 0.0;
}

std::size_t top_piece(const MaxQuadFunction& f, double y) {
  std::size_t best = 0;
  double v = -kInfinity;
  for (std::size_t j = 0; j < f.pieces().size(); ++j) {
    const double pj = f.pieces()[j](PointView(&y, 1));
    if (pj > v) {
      v = pj;
      best = j;
    }
  }
  return best;
}

void require_1d(const MaxQuadFunction& f) {
  if (f.dimension() != 1) throw InvalidArgument("exact prox path is one-dimensional only");
}

std::string describe_bound(const char* what, double r, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": r=" << r << " must exceed " << bound;
  return os.str();
}

ProxResult to_prox(GridMinimum m) {
  ProxResult out;
  out.value = m.value;
  out.minimizers = std::move(m.minimizers);
  out.multivalued = out.minimizers.size() >= 2;
  return out;
}

}  // namespace

std::vector<Cell> cell_decomposition_1d(const MaxQuadFunction& f) {
  require_1d(f);
  double lo = -kInfinity;
  double hi = kInfinity;
  if (f.domain()) {
    lo = f.domain()->lower[0];
    hi = f.domain()->upper[0];
  }
  if (lo == hi) return {Cell{lo, hi, top_piece(f, lo)}};

  std::vector<double> roots;
  const auto& pieces = f.pieces();
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    for (std::size_t k = j + 1; k < pieces.size(); ++k) {
      quadratic_roots(0.5 * (pieces[j].alpha - pieces[k].alpha),
                      pieces[j].beta[0] - pieces[k].beta[0], pieces[j].gamma - pieces[k].gamma,
                      roots);
    }
  }
  std::vector<double> breaks;
  if (std::isfinite(lo)) breaks.push_back(lo);
  for (double y : roots) {
    if (std::isfinite(y) && y > lo && y < hi) breaks.push_back(y);
  }
  if (std::isfinite(hi)) breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a));
                           }),
               breaks.end());

  std::vector<double> edges;
  if (!std::isfinite(lo)) edges.push_back(-kInfinity);
  edges.insert(edges.end(), breaks.begin(), breaks.end());
  if (!std::isfinite(hi)) edges.push_back(kInfinity);

  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const std::size_t piece = top_piece(f, probe_point(a, b));
    // Adjacent cells of one piece merge (tangential roots, dominated crossings).
    if (!cells.empty() && cells.back().piece == piece) {
      cells.back().upper = b;
    } else {
      cells.push_back(Cell{a, b, piece});
    }
  }
  return cells;
}

double exact_prox_bound(const MaxQuadFunction& f) {
  return std::max(prox_threshold(f), -f.min_curvature());
}

bool exact_path_available(const InputFunction& f, double r) {
  const auto* mq = f.max_quad();
  return mq != nullptr && mq->dimension() == 1 && r > exact_prox_bound(*mq);
}

ProxResult prox_exact_1d(const MaxQuadFunction& f, double r, double x,
                         std::optional<double> tie_tol) {
  require_1d(f);
  const double bound = exact_prox_bound(f);
  if (!(r > bound)) {
    throw ParameterError(describe_bound("prox-parameter at or below the exact-path bound", r,
                                        bound));
  }
  const auto cells = cell_decomposition_1d(f);
  return prox_exact_1d(f, cells, r, x, tie_tol);
}

namespace {

// Minimizer of the strictly convex piece subproblem, clamped to the cell.
inline double cell_minimizer(const MaxQuadFunction& f, const Cell& cell, double r, double x) {
  const auto& p = f.pieces()[cell.piece];
  return std::clamp((r * x - p.beta[0]) / (p.alpha + r), cell.lower, cell.upper);
}

inline double prox_objective(const MaxQuadFunction& f, double r, double x, double y) {
  const double d = y - x;
  return f(y) + 0.5 * r * d * d;
}

}  // namespace

ProxResult prox_exact_1d(const MaxQuadFunction& f, std::span<const Cell> cells, double r,
                         double x, std::optional<double> tie_tol) {
  if (cells.empty()) throw NumericError("internal error: empty cell decomposition");
  struct Local {
    double y;
    double value;
    bool local_min;
  };
  // Slope of the subproblem objective at y using piece j.
  auto slope = [&](std::size_t j, double y) {
    const auto& p = f.pieces()[j];
    return p.alpha * y + p.beta[0] + r * (y - x);
  };
  std::vector<Local> locals;
  locals.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    const double y = cell_minimizer(f, cell, r, x);
    // A minimizer clamped to a shared edge is a local minimum of the whole
    // objective only if the neighbouring piece does not descend from it.
    bool local_min = true;
    const double tol = 1e-10 * (1.0 + std::abs(r * x) + std::abs(r * y));
    if (c > 0 && y == cell.lower && slope(cell.piece, y) > 0.0) {
      local_min = slope(cells[c - 1].piece, y) <= tol;
    }
    if (c + 1 < cells.size() && y == cell.upper && slope(cell.piece, y) < 0.0) {
      local_min = slope(cells[c + 1].piece, y) >= -tol;
    }
    locals.push_back({y, prox_objective(f, r, x, y), local_min});
  }
  double best = kInfinity;
  for (const auto& l : locals) best = std::min(best, l.value);
  const double tie = tie_tol.value_or(default_tie_tol(best));

  ProxResult out;
  out.value = best;
  std::stable_sort(locals.begin(), locals.end(),
                   [](const Local& a, const Local& b) { return a.value < b.value; });
  for (const auto& l : locals) {
    if (l.value > best + tie) break;
    if (!l.local_min) continue;
    const bool duplicate =
        std::any_of(out.minimizers.begin(), out.minimizers.end(), [&](const Point& p) {
          return std::abs(p[0] - l.y) <= 1e-9 * (1.0 + std::abs(l.y));
        });
    if (!duplicate) out.minimizers.push_back(Point{l.y});
  }
  if (out.minimizers.empty()) out.minimizers.push_back(Point{locals.front().y});
  std::sort(out.minimizers.begin(), out.minimizers.end());
  out.multivalued = out.minimizers.size() >= 2;
  return out;
}

double envelope_exact_1d(const MaxQuadFunction& f, std::span<const Cell> cells, double r,
                         double x) {
  double best = kInfinity;
  for (const auto& cell : cells) {
    best = std::min(best, prox_objective(f, r, x, cell_minimizer(f, cell, r, x)));
  }
  return best;
}

std::vector<double> prox_regime_boundaries_1d(const MaxQuadFunction& f, double r) {
  std::vector<double> out;
  for (const auto& cell : cell_decomposition_1d(f)) {
    const auto& p = f.pieces()[cell.piece];
    for (double e : {cell.lower, cell.upper}) {
      if (std::isfinite(e)) out.push_back(((p.alpha + r) * e + p.beta[0]) / r);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ProxResult prox_oracle(const Callback& f, double r, PointView x, const GridSpec& grid,
                       int refine_iters, std::optional<double> tie_tol, Execution exec) {
  if (!(r > 0.0)) throw ParameterError("prox-parameter must be positive");
  if (x.size() != grid.dimension()) throw InvalidArgument("point and grid dimension differ");
  const Point center(x.begin(), x.end());
  auto objective = [&f, r, &center](PointView y) {
    const double fy = f(y);
    double sq = 0.0;
    for (std::size_t d = 0; d < y.size(); ++d) sq += (y[d] - center[d]) * (y[d] - center[d]);
    return fy + 0.5 * r * sq;
  };
  MinimizeOptions opts;
  opts.refine_iters = refine_iters;
  opts.tie_tol = tie_tol;
  opts.exec = exec;
  return to_prox(minimize_on_grid(objective, grid, opts));
}

ProxResult prox_oracle_sampled(const Callback& f, std::span<const double> f_on_grid, double r,
                               PointView x, const GridSpec& grid, int refine_iters,
                               std::optional<double> tie_tol, Execution exec) {
  if (!(r > 0.0)) throw ParameterError("prox-parameter must be positive");
  if (x.size() != grid.dimension()) throw InvalidArgument("point and grid dimension differ");
  const Point center(x.begin(), x.end());
  auto objective = [&f, r, &center](PointView y) {
    const double fy = f(y);
    double sq = 0.0;
    for (std::size_t d = 0; d < y.size(); ++d) sq += (y[d] - center[d]) * (y[d] - center[d]);
    return fy + 0.5 * r * sq;
  };
  auto sampler = [&](const GridSpec& g) {
    std::vector<double> out(g.size());
    if (g == grid) {
      add_shifted_quadratic(f_on_grid, g, r, center, out, exec);
    } else {
      const auto base = sample(f, g, exec);
      add_shifted_quadratic(base, g, r, center, out, exec);
    }
    return out;
  };
  MinimizeOptions opts;
  opts.refine_iters = refine_iters;
  opts.tie_tol = tie_tol;
  opts.exec = exec;
  return to_prox(minimize_sampled(objective, sampler, grid, opts));
}

ProxResult prox(const InputFunction& f, double r, PointView x, const EnvelopeOptions& options) {
  if (x.size() != f.dimension()) {
    throw InvalidArgument("point of dimension " + std::to_string(x.size()) +
                          " passed to a function of dimension " + std::to_string(f.dimension()));
  }
  const double threshold = f.threshold();
  if (!(r > threshold)) {
    throw ParameterError(describe_bound("prox-parameter below threshold", r, threshold));
  }
  if (exact_path_available(f, r)) {
    return prox_exact_1d(*f.max_quad(), r, x[0], options.tie_tol);
  }
  if (!options.grid) {
    throw InvalidArgument("the grid oracle path needs a search grid");
  }
  return prox_oracle(f.callback(), r, x, *options.grid, options.refine_iters, options.tie_tol,
                     options.exec);
}

double envelope(const InputFunction& f, double r, PointView x, const EnvelopeOptions& options) {
  return prox(f, r, x, options).value;
}

Point envelope_gradient(const InputFunction& f, double r, PointView x,
                        const EnvelopeOptions& options) {
  const ProxResult p = prox(f, r, x, options);
  if (p.multivalued) throw GradientUndefined("gradient undefined here: proximal set has " +
                                             std::to_string(p.minimizers.size()) + " points");
  Point g(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) g[d] = r * (x[d] - p.minimizers.front()[d]);
  return g;
}

double double_envelope(const InputFunction& f, double r, PointView x,
                       const GridSpec& outer_grid, const EnvelopeOptions& inner) {
  EnvelopeOptions inner_opts = inner;
  if (!inner_opts.grid) inner_opts.grid = outer_grid;
  // The outer scan is already parallel over grid points.
  inner_opts.exec = Execution::serial;
  const double threshold = f.threshold();
  if (!(r > threshold)) {
    throw ParameterError(describe_bound("prox-parameter below threshold", r, threshold));
  }
  auto neg_env = [&](PointView y) { return -envelope(f, r, y, inner_opts); };
  return -prox_oracle(neg_env, r, x, outer_grid, inner.refine_iters, inner.tie_tol, inner.exec)
              .value;
}

}  // namespace ncpa
