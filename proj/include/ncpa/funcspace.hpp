#ifndef NCPA_FUNCSPACE_HPP_
#define NCPA_FUNCSPACE_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ncpa {

using Point = std::vector<double>;
using PointView = std::span<const double>;

// Scalar function of a point. Must be safe to call concurrently.
using Callback = std::function<double(PointView)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kSimplexTol = 1e-12;

// (alpha/2)|x|^2 + <beta, x> + gamma
struct QuadraticPiece {
  double alpha = 0.0;
  Point beta;
  double gamma = 0.0;

  QuadraticPiece() = default;
  QuadraticPiece(double alpha, Point beta, double gamma);
  // One-dimensional shorthand.
  QuadraticPiece(double alpha, double beta, double gamma);

  double operator()(PointView x) const;
  Point gradient(PointView x) const;
  std::size_t dimension() const { return beta.size(); }
};

struct Box {
  Point lower;
  Point upper;

  bool contains(PointView x) const;
};

// Pointwise maximum of quadratic pieces, +inf outside an optional box.
class MaxQuadFunction {
 public:
  MaxQuadFunction(std::size_t dimension, std::vector<QuadraticPiece> pieces,
                  std::optional<Box> domain = std::nullopt);

  std::size_t dimension() const { return dimension_; }
  const std::vector<QuadraticPiece>& pieces() const { return pieces_; }
  const std::optional<Box>& domain() const { return domain_; }

  double operator()(PointView x) const;
  double operator()(double x) const;

  bool in_domain(PointView x) const;
  // Indices of pieces within `tol` of the maximum at x (x must be in the domain).
  std::vector<std::size_t> active_pieces(PointView x, double tol = 1e-12) const;

  double min_curvature() const;
  double max_curvature() const;

 private:
  std::size_t dimension_;
  std::vector<QuadraticPiece> pieces_;
  std::optional<Box> domain_;
};

double eval(const MaxQuadFunction& f, PointView x);

// max(0, -max_j alpha_j). Some piece then has alpha_j + r > 0 for r above it,
// and f + (r/2)q is bounded below by that piece.
double prox_threshold(const MaxQuadFunction& f);

struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t points = 2;

  double spacing() const { return (upper - lower) / static_cast<double>(points - 1); }
  double coord(std::size_t k) const;
};

// Tensor-product grid. Flat indices run with the last axis fastest.
class GridSpec {
 public:
  explicit GridSpec(std::vector<Axis> axes);
  static GridSpec line(double lower, double upper, std::size_t points);

  std::size_t dimension() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const Axis& axis(std::size_t d) const { return axes_[d]; }
  const std::vector<Axis>& axes() const { return axes_; }

  void point(std::size_t flat, std::span<double> out) const;
  Point point(std::size_t flat) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> index) const;
  std::size_t stride(std::size_t d) const;

  bool on_boundary(std::size_t flat) const;
  bool contains(PointView x) const;
  double max_spacing() const;

  // Adds `fraction` of each axis extent on both sides, keeping the spacing.
  GridSpec expanded(double fraction) const;
  // Twice the extent about the same centre, same spacing.
  GridSpec doubled() const;

  bool operator==(const GridSpec& other) const;

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 0;
};

struct SampledFunction {
  GridSpec grid;
  std::vector<double> values;

  SampledFunction(GridSpec grid, std::vector<double> values);

  // Multilinear interpolation; +inf if a contributing corner is +inf.
  double interpolate(PointView x) const;
};

class SimplexWeight {
 public:
  // Rejects weights below -kSimplexTol or a sum off 1 by more than
  // kSimplexTol; tiny negatives are clamped to zero.
  explicit SimplexWeight(std::vector<double> weights);
  static SimplexWeight vertex(std::size_t m, std::size_t i);
  static SimplexWeight barycenter(std::size_t m);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  bool is_vertex() const { return vertex_index().has_value(); }
  std::optional<std::size_t> vertex_index() const;

  double distance(const SimplexWeight& other) const;

 private:
  std::vector<double> weights_;
};

// (1-t)a + tb for t = k/(steps-1).
std::vector<SimplexWeight> simplex_path(const SimplexWeight& a, const SimplexWeight& b,
                                        std::size_t steps);

struct ShiftConvexity {
  bool convex = false;
  // True when the verdict comes from midpoint sampling, which can only falsify.
  bool sampled = false;
  double worst_margin = 0.0;
  Point witness;
};

ShiftConvexity is_shift_convex(const MaxQuadFunction& f, double c);
ShiftConvexity is_shift_convex(const MaxQuadFunction& f, double c, const GridSpec& grid);

struct MidpointViolation {
  std::size_t center;  // flat grid index of the middle point
  std::size_t axis;
  double margin;       // (h(lo) + h(hi) - 2h(mid)) / (1 + |h(mid)|)
};

// Midpoint-convexity scan over consecutive grid triples along every axis.
// Margins below -rel_tol are violations. Triples touching +inf are skipped.
std::vector<MidpointViolation> midpoint_violations(std::span<const double> values,
                                                   const GridSpec& grid, double rel_tol,
                                                   std::size_t* triples_tested = nullptr);
ShiftConvexity midpoint_convexity(std::span<const double> values, const GridSpec& grid,
                                  double rel_tol);

// A black-box function. Its prox-boundedness threshold is asserted by the caller.
struct OracleFunction {
  std::size_t dimension = 1;
  Callback eval;
  double threshold = 0.0;
};

class InputFunction {
 public:
  InputFunction(MaxQuadFunction f) : impl_(std::move(f)) {}  // NOLINT(implicit)
  InputFunction(OracleFunction f) : impl_(std::move(f)) {}   // NOLINT(implicit)

  std::size_t dimension() const;
  double threshold() const;
  double operator()(PointView x) const;
  const MaxQuadFunction* max_quad() const { return std::get_if<MaxQuadFunction>(&impl_); }
  Callback callback() const;

 private:
  std::variant<MaxQuadFunction, OracleFunction> impl_;
};

}  // namespace ncpa

#endif  // NCPA_FUNCSPACE_HPP_
