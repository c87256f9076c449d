#include "ncpa/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ncpa/errors.hpp"

namespace ncpa {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

}  // namespace

QuadraticPiece::QuadraticPiece(double alpha, Point beta, double gamma)
    : alpha(alpha), beta(std::move(beta)), gamma(gamma) {
  require_finite(alpha, "piece alpha");
  require_finite(gamma, "piece gamma");
  for (double b : this->beta) require_finite(b, "piece beta");
}

QuadraticPiece::QuadraticPiece(double alpha, double beta, double gamma)
    : QuadraticPiece(alpha, Point{beta}, gamma) {}

double QuadraticPiece::operator()(PointView x) const {
  double sq = 0.0;
  double lin = 0.0;
  for (std::size_t d = 0; d < beta.size(); ++d) {
    sq += x[d] * x[d];
    lin += beta[d] * x[d];
  }
  return 0.5 * alpha * sq + lin + gamma;
}

Point QuadraticPiece::gradient(PointView x) const {
  Point g(beta.size());
  for (std::size_t d = 0; d < beta.size(); ++d) g[d] = alpha * x[d] + beta[d];
  return g;
}

bool Box::contains(PointView x) const {
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (x[d] < lower[d] || x[d] > upper[d]) return false;
  }
  return true;
}

MaxQuadFunction::MaxQuadFunction(std::size_t dimension, std::vector<QuadraticPiece> pieces,
                                 std::optional<Box> domain)
    : dimension_(dimension), pieces_(std::move(pieces)), domain_(std::move(domain)) {
  if (dimension_ == 0) throw InvalidArgument("function dimension must be positive");
  if (pieces_.empty()) throw InvalidArgument("max-of-quadratics needs at least one piece");
  for (const auto& p : pieces_) {
    if (p.dimension() != dimension_) {
      throw InvalidArgument("piece beta length " + std::to_string(p.dimension()) +
                            " does not match dimension " + std::to_string(dimension_));
    }
  }
  if (domain_) {
    if (domain_->lower.size() != dimension_ || domain_->upper.size() != dimension_) {
      throw InvalidArgument("domain box dimension mismatch");
    }
    for (std::size_t d = 0; d < dimension_; ++d) {
      if (std::isnan(domain_->lower[d]) || std::isnan(domain_->upper[d]) ||
          !(domain_->lower[d] <= domain_->upper[d])) {
        throw InvalidArgument("domain box needs lower <= upper");
      }
    }
  }
}

bool MaxQuadFunction::in_domain(PointView x) const {
  return !domain_ || domain_->contains(x);
}

double MaxQuadFunction::operator()(PointView x) const {
  if (x.size() != dimension_) {
    throw InvalidArgument("point of dimension " + std::to_string(x.size()) +
                          " passed to a function of dimension " + std::to_string(dimension_));
  }
  if (!in_domain(x)) return kInfinity;
  double best = -kInfinity;
  for (const auto& p : pieces_) best = std::max(best, p(x));
  return best;
}

double MaxQuadFunction::operator()(double x) const {
  return (*this)(PointView(&x, 1));
}

std::vector<std::size_t> MaxQuadFunction::active_pieces(PointView x, double tol) const {
  const double top = (*this)(x);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    if (pieces_[j](x) >= top - tol * (1.0 + std::abs(top))) active.push_back(j);
  }
  return active;
}

double MaxQuadFunction::min_curvature() const {
  double m = kInfinity;
  for (const auto& p : pieces_) m = std::min(m, p.alpha);
  return m;
}

double MaxQuadFunction::max_curvature() const {
  double m = -kInfinity;
  for (const auto& p : pieces_) m = std::max(m, p.alpha);
  return m;
}

double eval(const MaxQuadFunction& f, PointView x) { return f(x); }

double prox_threshold(const MaxQuadFunction& f) {
  return std::max(0.0, -f.max_curvature());
}

double Axis::coord(std::size_t k) const {
  if (k + 1 == points) return upper;
  return lower + static_cast<double>(k) * spacing();
}

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidArgument("grid needs at least one axis");
  size_ = 1;
  for (const auto& a : axes_) {
    if (!std::isfinite(a.lower) || !std::isfinite(a.upper) || !(a.lower < a.upper)) {
      throw InvalidArgument("grid axis needs finite lower < upper");
    }
    if (a.points < 2) throw InvalidArgument("grid axis needs at least 2 points");
    size_ *= a.points;
  }
}

GridSpec GridSpec::line(double lower, double upper, std::size_t points) {
  return GridSpec({Axis{lower, upper, points}});
}

std::size_t GridSpec::stride(std::size_t d) const {
  std::size_t s = 1;
  for (std::size_t e = d + 1; e < axes_.size(); ++e) s *= axes_[e].points;
  return s;
}

std::vector<std::size_t> GridSpec::unflatten(std::size_t flat) const {
  std::vector<std::size_t> index(axes_.size());
  for (std::size_t d = axes_.size(); d-- > 0;) {
    index[d] = flat % axes_[d].points;
    flat /= axes_[d].points;
  }
  return index;
}

std::size_t GridSpec::flatten(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) flat = flat * axes_[d].points + index[d];
  return flat;
}

void GridSpec::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t d = axes_.size(); d-- > 0;) {
    out[d] = axes_[d].coord(flat % axes_[d].points);
    flat /= axes_[d].points;
  }
}

Point GridSpec::point(std::size_t flat) const {
  Point p(axes_.size());
  point(flat, p);
  return p;
}

bool GridSpec::on_boundary(std::size_t flat) const {
  for (std::size_t d = axes_.size(); d-- > 0;) {
    const std::size_t k = flat % axes_[d].points;
    if (k == 0 || k + 1 == axes_[d].points) return true;
    flat /= axes_[d].points;
  }
  return false;
}

bool GridSpec::contains(PointView x) const {
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    if (x[d] < axes_[d].lower || x[d] > axes_[d].upper) return false;
  }
  return true;
}

double GridSpec::max_spacing() const {
  double h = 0.0;
  for (const auto& a : axes_) h = std::max(h, a.spacing());
  return h;
}

GridSpec GridSpec::expanded(double fraction) const {
  std::vector<Axis> axes;
  for (const auto& a : axes_) {
    const double h = a.spacing();
    const auto extra = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(a.points - 1)));
    const double pad = static_cast<double>(extra) * h;
    axes.push_back(Axis{a.lower - pad, a.upper + pad, a.points + 2 * extra});
  }
  return GridSpec(std::move(axes));
}

GridSpec GridSpec::doubled() const { return expanded(0.5); }

bool GridSpec::operator==(const GridSpec& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto& a = axes_[d];
    const auto& b = other.axes_[d];
    if (a.lower != b.lower || a.upper != b.upper || a.points != b.points) return false;
  }
  return true;
}

SampledFunction::SampledFunction(GridSpec g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("sampled function has " + std::to_string(values.size()) +
                          " values for " + std::to_string(grid.size()) + " grid points");
  }
  for (double value : values) {
    if (std::isnan(value) || value == -kInfinity) {
      throw InvalidArgument("sampled function values must not be NaN or -inf");
    }
  }
}

double SampledFunction::interpolate(PointView x) const {
  const std::size_t n = grid.dimension();
  std::vector<std::size_t> base(n);
  std::vector<double> frac(n);
  for (std::size_t d = 0; d < n; ++d) {
    const Axis& a = grid.axis(d);
    const double s = std::clamp((x[d] - a.lower) / a.spacing(), 0.0,
                                static_cast<double>(a.points - 1));
    auto k = static_cast<std::size_t>(std::floor(s));
    if (k + 1 >= a.points) k = a.points - 2;
    base[d] = k;
    frac[d] = s - static_cast<double>(k);
  }
  double acc = 0.0;
  std::vector<std::size_t> corner(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      const bool hi = (mask >> d) & 1U;
      corner[d] = base[d] + (hi ? 1 : 0);
      w *= hi ? frac[d] : 1.0 - frac[d];
    }
    if (w == 0.0) continue;
    const double v = values[grid.flatten(corner)];
    if (v == kInfinity) return kInfinity;
    acc += w * v;
  }
  return acc;
}

SimplexWeight::SimplexWeight(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("simplex weight needs at least one entry");
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < -kSimplexTol) {
      throw InvalidArgument("simplex weight entries must be >= 0");
    }
    w = std::max(w, 0.0);
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw InvalidArgument("simplex weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

SimplexWeight SimplexWeight::vertex(std::size_t m, std::size_t i) {
  if (i >= m) throw InvalidArgument("vertex index out of range");
  std::vector<double> w(m, 0.0);
  w[i] = 1.0;
  return SimplexWeight(std::move(w));
}

SimplexWeight SimplexWeight::barycenter(std::size_t m) {
  if (m == 0) throw InvalidArgument("simplex weight needs at least one entry");
  // Assigning the remainder to the last entry keeps the sum exact.
  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return SimplexWeight(std::move(w));
}

std::optional<std::size_t> SimplexWeight::vertex_index() const {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (std::abs(weights_[i] - 1.0) <= kSimplexTol) return i;
  }
  return std::nullopt;
}

double SimplexWeight::distance(const SimplexWeight& other) const {
  if (other.size() != size()) throw InvalidArgument("simplex weight size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = weights_[i] - other.weights_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<SimplexWeight> simplex_path(const SimplexWeight& a, const SimplexWeight& b,
                                        std::size_t steps) {
  if (a.size() != b.size()) throw InvalidArgument("simplex path endpoints differ in size");
  if (steps < 2) throw InvalidArgument("simplex path needs at least 2 steps");
  std::vector<SimplexWeight> path;
  path.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    std::vector<double> w(a.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      w[i] = std::max(0.0, (1.0 - t) * a[i] + t * b[i]);
      sum += w[i];
    }
    for (double& x : w) x /= sum;
    path.emplace_back(std::move(w));
  }
  return path;
}

namespace {

template <class Visit>
void scan_triples(std::span<const double> values, const GridSpec& grid, Visit&& visit) {
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto index = grid.unflatten(flat);
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
      if (index[d] == 0 || index[d] + 1 == grid.axis(d).points) continue;
      const std::size_t s = grid.stride(d);
      const double lo = values[flat - s];
      const double mid = values[flat];
      const double hi = values[flat + s];
      if (!std::isfinite(lo) || !std::isfinite(mid) || !std::isfinite(hi)) continue;
      visit(flat, d, (lo + hi - 2.0 * mid) / (1.0 + std::abs(mid)));
    }
  }
}

}  // namespace

std::vector<MidpointViolation> midpoint_violations(std::span<const double> values,
                                                   const GridSpec& grid, double rel_tol,
                                                   std::size_t* triples_tested) {
  if (values.size() != grid.size()) throw InvalidArgument("sample count does not match grid");
  std::vector<MidpointViolation> out;
  std::size_t tested = 0;
  scan_triples(values, grid, [&](std::size_t flat, std::size_t d, double margin) {
    ++tested;
    if (margin < -rel_tol) out.push_back({flat, d, margin});
  });
  if (triples_tested) *triples_tested = tested;
  return out;
}

ShiftConvexity midpoint_convexity(std::span<const double> values, const GridSpec& grid,
                                  double rel_tol) {
  if (values.size() != grid.size()) throw InvalidArgument("sample count does not match grid");
  ShiftConvexity out;
  out.sampled = true;
  double worst = kInfinity;
  std::size_t worst_at = 0;
  scan_triples(values, grid, [&](std::size_t flat, std::size_t, double margin) {
    if (margin < worst) {
      worst = margin;
      worst_at = flat;
    }
  });
  out.worst_margin = std::isfinite(worst) ? worst : 0.0;
  out.convex = out.worst_margin >= -rel_tol;
  out.witness = grid.point(worst_at);
  return out;
}

ShiftConvexity is_shift_convex(const MaxQuadFunction& f, double c) {
  if (c < 0.0) throw InvalidArgument("shift constant must be >= 0");
  ShiftConvexity out;
  out.worst_margin = f.min_curvature() + c;
  out.convex = out.worst_margin >= 0.0;
  return out;
}

ShiftConvexity is_shift_convex(const MaxQuadFunction& f, double c, const GridSpec& grid) {
  auto verdict = is_shift_convex(f, c);
  if (verdict.convex) return verdict;
  if (grid.dimension() != f.dimension()) throw InvalidArgument("grid dimension mismatch");
  std::vector<double> values(grid.size());
  Point y(grid.dimension());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, y);
    double sq = 0.0;
    for (double v : y) sq += v * v;
    values[k] = f(y) + 0.5 * c * sq;
  }
  return midpoint_convexity(values, grid, 1e-9);
}

std::size_t InputFunction::dimension() const {
  if (const auto* mq = max_quad()) return mq->dimension();
  return std::get<OracleFunction>(impl_).dimension;
}

double InputFunction::threshold() const {
  if (const auto* mq = max_quad()) return prox_threshold(*mq);
  return std::get<OracleFunction>(impl_).threshold;
}

double InputFunction::operator()(PointView x) const {
  if (const auto* mq = max_quad()) return (*mq)(x);
  return std::get<OracleFunction>(impl_).eval(x);
}

Callback InputFunction::callback() const {
  if (const auto* mq = max_quad()) {
    return [f = *mq](PointView x) { return f(x); };
  }
  return std::get<OracleFunction>(impl_).eval;
}

}  // namespace ncpa
