#ifndef NCPA_REGULARITY_HPP_
#define NCPA_REGULARITY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/random.hpp"

namespace ncpa {

struct Violation {
  Point x;
  Point xp;
  std::optional<std::vector<double>> lambda;
  double margin = 0.0;
};

// Result of a sampled check. Sampling can only falsify, so a passing report
// means the sufficient condition held at every tested sample.
struct CheckReport {
  std::string name;
  std::size_t samples_tested = 0;
  std::vector<Violation> violations;
  // Total number found; at most kMaxStoredViolations are kept.
  std::size_t violation_count = 0;
  bool passed = true;
  std::optional<double> estimate;
  std::uint64_t seed = 0;
  std::string note;

  static constexpr std::size_t kMaxStoredViolations = 64;

  void add_violation(Violation v);
};

// f(x') >= f(x) + v (x' - x) - (r/2)(x' - x)^2 for x, x' on a sample_count-point
// grid strictly inside (x̄ - eps, x̄ + eps), v ranging over active-piece
// gradients at x, restricted to |f(x) - f(x̄)| < eps and v within eps of the
// active gradients at x̄. 1-D only.
CheckReport check_prox_inequality(const MaxQuadFunction& f, double xbar, double eps, double r,
                                  std::size_t sample_count = 201);

// Same inequality for F(., λ) = -sum λ_i e_r f_i with v = ∇_x F(x, λ) by central
// differences, over random triples (x, x', λ) with |x - x̄|, |x' - x̄|, |λ - λ̄| < eps.
// `slack` is added to the violation tolerance (for interpolated envelopes).
CheckReport check_para_prox_inequality(const ProxAverageProblem& problem, PointView xbar,
                                       const SimplexWeight& lambda_bar, double eps, double r,
                                       std::size_t sample_count = 2000, std::uint64_t seed = 0,
                                       double slack = 0.0);

// Midpoint convexity of PA(., λ) + ((r + δ(λ))/2)|. - x̄|^2 over grid triples,
// relative tolerance 1e-7.
CheckReport check_shifted_convexity(const ProxAverageProblem& problem, const SimplexWeight& lambda,
                                    PointView xbar, const GridSpec& grid);
// Same test on an already sampled PA curve.
CheckReport check_shifted_convexity(const SampledFunction& pa, double outer_parameter,
                                    PointView xbar);

// Lip(sum λ_i P_r f_i - I) from difference quotients of consecutive grid
// points. Points where some P_r f_i is multivalued are excluded.
// Passes iff the estimate is at most 1 + 1e-6.
CheckReport estimate_prox_map_lipschitz(const ProxAverageProblem& problem,
                                        const SimplexWeight& lambda, const GridSpec& grid);

// Max of |∇_x PA(x, λ) - ∇_x PA(x, λ')| / |λ - λ'| over random pairs within
// `radius` of λ̄. Passes iff the estimate is finite and the estimate at
// radius/2 is at most 1.5 times the estimate at radius (plus 1e-6).
CheckReport check_gradient_lambda_lipschitz(const ProxAverageProblem& problem, PointView x,
                                            const SimplexWeight& lambda_bar, double radius,
                                            std::size_t sample_count = 20,
                                            std::uint64_t seed = 0);

// Central-difference gradient with step h in every coordinate.
Point central_gradient(const Callback& f, PointView x, double h);

// A random weight with |λ - center| < radius, or center itself when none was
// found (m = 1, or center at a vertex with an unlucky stream).
SimplexWeight sample_weight_near(const SimplexWeight& center, double radius, Rng& rng);

}  // namespace ncpa

#endif  // NCPA_REGULARITY_HPP_
