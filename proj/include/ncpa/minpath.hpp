#ifndef NCPA_MINPATH_HPP_
#define NCPA_MINPATH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/regularity.hpp"

namespace ncpa {

struct ArgminRecord {
  double t = 0.0;  // path parameter in [0, 1]
  SimplexWeight lambda;
  std::vector<Point> argmin;
  double min_value = 0.0;
  // |∇ sum λ_i e_r f_i| at each argmin point, by central differences.
  std::vector<double> gradient_norms;
};

struct JumpEvent {
  double t = 0.0;
  SimplexWeight lambda;
  std::vector<Point> left;
  std::vector<Point> right;
  double magnitude = 0.0;
};

struct ArgminPath {
  std::vector<ArgminRecord> records;
  std::vector<JumpEvent> jumps;
};

// 1e-2 times the largest axis extent of the grid.
double default_jump_threshold(const GridSpec& grid);

// Minimizes sum λ_i e_r f_i over `grid` at every weight of the path, keeping
// every basin within the tie tolerance, then runs detect_jumps.
ArgminPath track_argmin(const ProxAverageProblem& problem, const std::vector<SimplexWeight>& path,
                        const GridSpec& grid, std::optional<double> tie_tol = std::nullopt,
                        std::optional<double> jump_threshold = std::nullopt);

// Consecutive records whose argmin sets are farther apart (Hausdorff) than
// `threshold`. A multivalued record inside a run of such pairs is reported as
// the jump location; otherwise the event sits halfway between the two records.
std::vector<JumpEvent> detect_jumps(const std::vector<ArgminRecord>& records, double threshold);

enum class CriticalKind { min, max, saddle_flat };

struct CriticalPoint {
  double x;
  CriticalKind kind;
};

std::string to_string(CriticalKind kind);

// Sign changes of the numerical derivative of sum λ_i e_r f_i over a 1-D grid,
// bisected to 1e-10 and classified by a second difference.
std::vector<CriticalPoint> critical_points_1d(const ProxAverageProblem& problem,
                                              const SimplexWeight& lambda, const GridSpec& grid);

using WeightedPoint = std::pair<Point, SimplexWeight>;

// Intercept of the least-squares line x_k ≈ a + b |λ_k - λ̄| per coordinate;
// the mean when all distances coincide.
Point estimate_limit_point(const std::vector<WeightedPoint>& sequence,
                           const SimplexWeight& lambda_bar);

// Checks that every x_k minimizes sum λ_k,i e_r f_i on the inner grid and the
// sequence settles, then passes iff |∇_x PA(x̄, λ̄)| <= 1e-4 at the limit x̄.
// Throws InvalidArgument for non-minimizers or a non-convergent sequence.
CheckReport verify_limit_critical(const ProxAverageProblem& problem,
                                  const std::vector<WeightedPoint>& sequence,
                                  const SimplexWeight& lambda_bar);

// Compares min_value against a direct grid minimization of PA(., λ) for a
// random `fraction` of the records; tolerance 1e-5.
CheckReport cross_check_records(const ProxAverageProblem& problem, const ArgminPath& path,
                                const GridSpec& grid, double fraction = 0.1,
                                std::uint64_t seed = 0);

}  // namespace ncpa

#endif  // NCPA_MINPATH_HPP_
