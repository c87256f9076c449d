#ifndef NCPA_TESTS_SUPPORT_HPP_
#define NCPA_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ncpa/funcspace.hpp"
#include "ncpa/io.hpp"
#include "ncpa/random.hpp"
#include "ncpa/suite.hpp"

namespace ncpa::testing {

inline const double kSqrt3 = std::sqrt(3.0);

// Dense scan of h over [lo, hi], no refinement. Slow but independent of the
// library's oracle.
struct BruteMin {
  double x;
  double value;
};

inline BruteMin brute_min(const std::function<double(double)>& h, double lo, double hi,
                          std::size_t n) {
  BruteMin best{lo, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < n; ++k) {
    const double y = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    const double v = h(y);
    if (v < best.value) best = {y, v};
  }
  return best;
}

// inf_y f(y) + (r/2)(y - x)^2 by a scan followed by three zoomed rescans
// around the best sample.
inline double brute_envelope(const std::function<double(double)>& f, double r, double x,
                             double lo, double hi, std::size_t n = 200001) {
  auto h = [&](double y) { return f(y) + 0.5 * r * (y - x) * (y - x); };
  BruteMin m = brute_min(h, lo, hi, n);
  for (int zoom = 0; zoom < 3; ++zoom) {
    const double step = (hi - lo) / static_cast<double>(n - 1);
    lo = m.x - step;
    hi = m.x + step;
    n = 2001;
    const BruteMin z = brute_min(h, lo, hi, n);
    if (z.value < m.value) m = z;
  }
  return m.value;
}

// Random 1-D max-of-quadratics problems: 1-3 functions with 1-3 pieces
// (alpha/2)(x - c)^2 + g, alpha in [-1, 2], c in [-1, 1], g in [-0.5, 0.5],
// and at least one piece with alpha >= 0.5 so every function is coercive.
struct CorpusProblem {
  std::vector<MaxQuadFunction> functions;
  double r;
};

inline MaxQuadFunction random_function(Rng& rng) {
  const std::size_t pieces = 1 + rng.index(3);
  const std::size_t anchor = rng.index(pieces);
  std::vector<QuadraticPiece> out;
  for (std::size_t j = 0; j < pieces; ++j) {
    const double alpha = j == anchor ? rng.uniform(0.5, 2.0) : rng.uniform(-1.0, 2.0);
    const double c = rng.uniform(-1.0, 1.0);
    const double g = rng.uniform(-0.5, 0.5);
    out.emplace_back(alpha, -alpha * c, 0.5 * alpha * c * c + g);
  }
  return MaxQuadFunction(1, std::move(out));
}

inline std::vector<CorpusProblem> make_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CorpusProblem> out;
  for (std::size_t k = 0; k < count; ++k) {
    CorpusProblem p;
    const std::size_t m = 1 + rng.index(3);
    for (std::size_t i = 0; i < m; ++i) p.functions.push_back(random_function(rng));
    p.r = rng.uniform(1.5, 3.0);
    out.push_back(std::move(p));
  }
  return out;
}

inline GridSpec corpus_grid() { return GridSpec::line(-4.0, 4.0, 401); }

inline ProxAverageProblem build(const CorpusProblem& p) {
  return ProxAverageProblem(std::vector<InputFunction>(p.functions.begin(), p.functions.end()), p.r,
                            DeltaSpec::symmetric_quadratic(), corpus_grid());
}

inline std::vector<CheckReport> property_checks(const ProxAverageProblem& problem,
                                                std::uint64_t seed) {
  const GridSpec& grid = problem.inner_grid();
  return {check_majorization(problem, grid),          check_r_monotonicity(problem, grid),
          check_infimum_preservation(problem, grid),  check_proximal_hull(problem, grid),
          check_inner_affinity(problem, 100, seed),   check_delta(problem, seed)};
}

// Every property check on the problem, then the sampled ones again with the
// same seed; the second run must serialize identically.
inline std::vector<CheckReport> corpus_properties(const CorpusProblem& p, std::uint64_t seed) {
  const ProxAverageProblem problem = build(p);
  auto reports = property_checks(problem, seed);
  const auto again = property_checks(problem, seed);
  CheckReport det;
  det.name = "determinism";
  det.seed = seed;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    ++det.samples_tested;
    if (to_json(reports[k]).dump() != to_json(again[k]).dump()) {
      det.add_violation({Point{}, Point{}, std::nullopt, -1.0});
      det.note = reports[k].name + " differs between runs";
    }
  }
  reports.push_back(det);
  return reports;
}

}  // namespace ncpa::testing

#endif  // NCPA_TESTS_SUPPORT_HPP_
