#ifndef NCPA_IO_HPP_
#define NCPA_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncpa/funcspace.hpp"
#include "ncpa/minpath.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/regularity.hpp"

namespace ncpa {

// Problem file contents before any threshold check.
//
// {
//   "dimension": 1,
//   "r": 2.0,
//   "delta": {"kind": "symmetric_quadratic"}
//         or {"kind": "custom_polynomial", "terms": [{"powers": [1, 1], "coef": 1}]},
//   "grid": {"lower": [-1], "upper": [3], "points": [2001]},
//   "outer_grid": {...},                      (optional)
//   "functions": [{"pieces": [{"alpha": 0, "beta": [-1], "gamma": 0}, ...],
//                  "domain": {"lower": [...], "upper": [...]}}]   (domain optional)
// }
//
// In one dimension, vectors may be given as plain numbers.
struct ProblemSpec {
  std::size_t dimension = 1;
  std::vector<MaxQuadFunction> functions;
  double r = 1.0;
  DeltaSpec delta = DeltaSpec::symmetric_quadratic();
  GridSpec grid = GridSpec::line(0.0, 1.0, 2);
  std::optional<GridSpec> outer_grid;

  std::vector<InputFunction> inputs() const;
  // Throws ParameterError when r is at or below a threshold.
  ProxAverageProblem build(Execution exec = Execution::parallel) const;
};

// InvalidArgument on malformed input, missing keys or non-finite numbers.
ProblemSpec parse_problem(const nlohmann::json& doc);
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec load_problem(const std::string& path);

// "lo:hi:n"
Axis parse_axis(const std::string& text);
// "w1,w2,..."
SimplexWeight parse_weight(const std::string& text);

// printf %.17g
std::string format_number(double x);

// x (or x_1..x_n), value, grad (or grad_1..grad_n)
void write_envelope_csv(std::ostream& os, const GridSpec& grid, const std::vector<double>& values,
                        const std::vector<Point>& gradients);
// lambda_1..lambda_m, x (or x_1..x_n), value; one block of rows per weight.
void write_surface_csv(std::ostream& os, const std::vector<SimplexWeight>& weights,
                       const std::vector<SampledFunction>& curves);
// t, lambda_1..lambda_m, argmin_count, argmin_1..argmin_K, min_value; points
// in more than one dimension are written as coordinates joined by ';'. Jumps
// follow as "#jump,t,lambda_1..lambda_m,magnitude" rows.
void write_argmin_path_csv(std::ostream& os, const ArgminPath& path);

nlohmann::json to_json(const CheckReport& report);
nlohmann::json to_json(const std::vector<JumpEvent>& jumps);

}  // namespace ncpa

#endif  // NCPA_IO_HPP_
