#include "ncpa/worked_example.hpp"

#include <cmath>
#include <sstream>

#include "ncpa/errors.hpp"
#include "ncpa/oracle.hpp"

namespace ncpa {

namespace {

const double kSqrt3 = std::sqrt(3.0);

void require_index(int index) {
  if (index != 0 && index != 1) throw InvalidArgument("example function index must be 0 or 1");
}

void require_r(double r) {
  if (!(r > 1.0)) throw ParameterError("closed forms need r > 1");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ExampleParams ExampleParams::make(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  ExampleParams p;
  p.eps = eps;
  p.l = std::sqrt(4.0 - 2.0 * eps);
  p.k = 2.0 - p.l;
  p.left_kink = {0.0, p.k};
  p.right_kink = {p.l, 2.0};
  p.left_lift = {0.0, eps};
  p.right_lift = {eps, 0.0};
  return p;
}

MaxQuadFunction make_g(int index, double eps) {
  require_index(index);
  const auto p = ExampleParams::make(eps);
  const auto i = static_cast<std::size_t>(index);
  return MaxQuadFunction(1, {QuadraticPiece(0.0, -1.0, p.left_lift[i]),
                             QuadraticPiece(-1.0, 1.0, 0.0),
                             QuadraticPiece(0.0, 1.0, -2.0 + p.right_lift[i])});
}

double prox_g_closed(int index, double r, double xbar, double eps) {
  require_index(index);
  require_r(r);
  const auto p = ExampleParams::make(eps);
  const double k = p.left_kink[static_cast<std::size_t>(index)];
  const double l = p.right_kink[static_cast<std::size_t>(index)];
  if (xbar < k - 1.0 / r) return xbar + 1.0 / r;
  if (xbar <= k - k / r + 1.0 / r) return k;
  if (xbar < l - l / r + 1.0 / r) return (r * xbar - 1.0) / (r - 1.0);
  if (xbar <= l + 1.0 / r) return l;
  return xbar - 1.0 / r;
}

double envelope_g_closed(int index, double r, double xbar, double eps) {
  require_index(index);
  require_r(r);
  const auto p = ExampleParams::make(eps);
  const auto i = static_cast<std::size_t>(index);
  const double k = p.left_kink[i];
  const double l = p.right_kink[i];
  const double x = xbar;
  if (x < k - 1.0 / r) return -x - 1.0 / (2.0 * r) + p.left_lift[i];
  if (x <= k - k / r + 1.0 / r) return 0.5 * r * x * x - r * k * x + 0.5 * (r - 1.0) * k * k + k;
  if (x < l - l / r + 1.0 / r) return -(r * x * x - 2.0 * r * x + 1.0) / (2.0 * (r - 1.0));
  if (x <= l + 1.0 / r) return 0.5 * r * x * x - r * l * x + 0.5 * (r - 1.0) * l * l + l;
  return x - 2.0 - 1.0 / (2.0 * r) + p.right_lift[i];
}

double G_closed(double x, double w) {
  const double s = kSqrt3;
  if (x < -0.5) return -x - w / 2.0 + 0.25;
  if (x < (3.0 - 2.0 * s) / 2.0) return w * x * x + (w - 1.0) * x - (w - 1.0) / 4.0;
  if (x <= 0.5) {
    return x * x + (w - 1.0) * (4.0 - 2.0 * s) * x - (w - 1.0) * (11.0 - 6.0 * s) / 2.0;
  }
  if (x <= (3.0 - s) / 2.0) {
    return (1.0 - 2.0 * w) * x * x + (-4.0 + 2.0 * s + (6.0 - 2.0 * s) * w) * x +
           (11.0 - 6.0 * s) / 2.0 - (6.0 - 3.0 * s) * w;
  }
  if (x < (1.0 + s) / 2.0) return -x * x + 2.0 * x - 0.5;
  if (x < 1.5) {
    return (2.0 * w - 1.0) * x * x + (2.0 - (2.0 + 2.0 * s) * w) * x - 0.5 + (2.0 + s) * w;
  }
  if (x <= (1.0 + 2.0 * s) / 2.0) {
    return x * x - (4.0 - (4.0 - 2.0 * s) * w) * x + 4.0 - (5.0 - 2.0 * s) / 2.0 * w;
  }
  if (x <= 2.5) return (1.0 - w) * x * x + (5.0 * w - 4.0) * x + 4.0 - 23.0 / 4.0 * w;
  return x + w / 2.0 - 9.0 / 4.0;
}

std::array<double, 3> critical_points_closed(double w) {
  return {(1.0 - w) * (2.0 - kSqrt3), 1.0, 2.0 - (2.0 - kSqrt3) * w};
}

ProxAverageProblem make_example_problem(double eps, double r, Execution exec) {
  ProblemOptions options;
  options.exec = exec;
  return ProxAverageProblem({make_g(0, eps), make_g(1, eps)}, r, DeltaSpec::symmetric_quadratic(),
                            GridSpec::line(-1.0, 3.0, 2001), options);
}

std::vector<SimplexWeight> example_edge_path(std::size_t steps) {
  return simplex_path(SimplexWeight::vertex(2, 0), SimplexWeight::vertex(2, 1), steps);
}

DemoReport run_discontinuity_demo(std::size_t steps, double eps, Execution exec) {
  if (steps < 2) throw InvalidArgument("the demo path needs at least two steps");
  DemoReport report;
  report.steps = steps;
  report.eps = eps;
  auto fail = [&](std::string what) {
    report.passed = false;
    report.failures.push_back(std::move(what));
  };

  const ProxAverageProblem problem = make_example_problem(eps, 2.0, exec);
  const GridSpec& grid = problem.inner_grid();
  report.path = track_argmin(problem, example_edge_path(steps), grid);
  report.jump_count = report.path.jumps.size();
  if (!report.path.jumps.empty()) {
    report.jump_weight = report.path.jumps.front().lambda[0];
    report.jump_magnitude = report.path.jumps.front().magnitude;
  }
  if (report.jump_count != 1) {
    fail("expected exactly one jump, found " + std::to_string(report.jump_count));
  }

  const auto tie = track_argmin(problem, {SimplexWeight::barycenter(2)}, grid);
  report.tie_argmin = tie.records.front().argmin;
  report.tie_value = tie.records.front().min_value;

  if (eps != 0.5) return report;

  const double step = 1.0 / static_cast<double>(steps - 1);
  if (report.jump_weight && std::abs(*report.jump_weight - 0.5) > step + 1e-12) {
    fail("jump at weight " + fmt(*report.jump_weight) + ", expected 1/2 within one step");
  }

  const double half_root = (2.0 - kSqrt3) / 2.0;
  if (report.tie_argmin.size() != 2) {
    fail("argmin at equal weights has " + std::to_string(report.tie_argmin.size()) +
         " points, expected 2");
  } else {
    const double expect[2] = {half_root, (2.0 + kSqrt3) / 2.0};
    for (int j = 0; j < 2; ++j) {
      if (std::abs(report.tie_argmin[j][0] - expect[j]) > 1e-4) {
        fail("argmin point " + fmt(report.tie_argmin[j][0]) + " at equal weights, expected " +
             fmt(expect[j]));
      }
    }
  }
  if (std::abs(report.tie_value - half_root) > 1e-6) {
    fail("minimum value at equal weights " + fmt(report.tie_value) + ", expected " +
         fmt(half_root));
  }

  for (const auto& rec : report.path.records) {
    const double w = rec.lambda[0];
    if (rec.argmin.size() != 1 || std::abs(w - 0.5) < 1e-12) continue;
    const auto c = critical_points_closed(w);
    const double expected = w > 0.5 ? c[0] : c[2];
    if (std::abs(rec.argmin.front()[0] - expected) > 1e-6) {
      fail("argmin " + fmt(rec.argmin.front()[0]) + " at weight " + fmt(w) +
           " is off the closed-form branch " + fmt(expected));
    }
  }
  return report;
}

}  // namespace ncpa
