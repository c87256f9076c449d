// ncpa: envelopes, proximal averages, argmin paths and verification suites
// for max-of-quadratics problems read from JSON files.
//
// Exit status: 0 success, 1 numeric failure or failed check, 2 usage or
// configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncpa/errors.hpp"
#include "ncpa/grid_kernels.hpp"
#include "ncpa/io.hpp"
#include "ncpa/minpath.hpp"
#include "ncpa/moreau.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/suite.hpp"
#include "ncpa/worked_example.hpp"

namespace {

using namespace ncpa;
using nlohmann::json;

struct RunConfig {
  std::string problem;
  std::string out = "-";
  std::string report;
  std::optional<double> r;
  std::optional<std::size_t> function;
  std::vector<std::string> lambdas;
  std::vector<std::size_t> edge;
  std::size_t steps = 101;
  std::vector<std::string> grids;
  std::uint64_t seed = 0;
  std::optional<double> tie_tol;
  std::optional<double> jump_threshold;
  double eps = 0.5;
  bool quiet = false;
};

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path);
  os << text;
  if (!os) throw InvalidArgument("failed writing " + path);
}

void note(const RunConfig& cfg, const std::string& line) {
  if (!cfg.quiet) std::cerr << line << '\n';
}

ProblemSpec load(const RunConfig& cfg) {
  if (cfg.problem.empty()) throw InvalidArgument("--problem is required");
  ProblemSpec spec = load_problem(cfg.problem);
  if (cfg.r) spec.r = *cfg.r;
  if (!cfg.grids.empty()) {
    if (cfg.grids.size() != spec.dimension) {
      throw InvalidArgument("--grid given " + std::to_string(cfg.grids.size()) +
                            " times for a problem of dimension " + std::to_string(spec.dimension));
    }
    std::vector<Axis> axes;
    for (const auto& g : cfg.grids) axes.push_back(parse_axis(g));
    spec.grid = GridSpec(std::move(axes));
    spec.outer_grid.reset();
  }
  return spec;
}

std::vector<SimplexWeight> weights_from(const RunConfig& cfg, std::size_t m, bool allow_default) {
  std::vector<SimplexWeight> out;
  if (!cfg.lambdas.empty() && !cfg.edge.empty()) {
    throw InvalidArgument("give either --lambda or --edge, not both");
  }
  for (const auto& text : cfg.lambdas) {
    out.push_back(parse_weight(text));
    if (out.back().size() != m) {
      throw InvalidArgument("--lambda " + text + " has " + std::to_string(out.back().size()) +
                            " entries for " + std::to_string(m) + " functions");
    }
  }
  if (!cfg.edge.empty()) {
    const std::size_t i = cfg.edge[0];
    const std::size_t j = cfg.edge[1];
    if (i < 1 || j < 1 || i > m || j > m) throw InvalidArgument("--edge index out of range");
    out = simplex_path(SimplexWeight::vertex(m, i - 1), SimplexWeight::vertex(m, j - 1), cfg.steps);
  }
  if (out.empty() && allow_default) {
    if (m == 1) {
      out.assign(cfg.steps, SimplexWeight::vertex(1, 0));
    } else {
      out = simplex_path(SimplexWeight::vertex(m, 0), SimplexWeight::vertex(m, 1), cfg.steps);
    }
  }
  if (out.empty()) throw InvalidArgument("no weights given: use --lambda or --edge");
  return out;
}

int cmd_envelope(const RunConfig& cfg) {
  const ProblemSpec spec = load(cfg);
  if (!cfg.function) throw InvalidArgument("--function is required");
  if (*cfg.function < 1 || *cfg.function > spec.functions.size()) {
    throw InvalidArgument("--function " + std::to_string(*cfg.function) + " out of range 1.." +
                          std::to_string(spec.functions.size()));
  }
  const InputFunction f = spec.functions[*cfg.function - 1];
  const GridSpec& grid = spec.grid;
  EnvelopeOptions opts;
  opts.grid = spec.outer_grid ? *spec.outer_grid : grid.expanded(0.25);
  opts.tie_tol = cfg.tie_tol;
  opts.exec = Execution::serial;
  if (!(spec.r > f.threshold())) {
    // Same error the kernel raises, before any work starts.
    prox(f, spec.r, grid.point(0), opts);
  }
  std::vector<double> values(grid.size());
  std::vector<Point> grads(grid.size());
  for_each_index(grid.size(), [&](std::size_t k) {
    const Point x = grid.point(k);
    const ProxResult p = prox(f, spec.r, x, opts);
    values[k] = p.value;
    grads[k].assign(x.size(), std::nan(""));
    if (!p.multivalued) {
      for (std::size_t d = 0; d < x.size(); ++d) grads[k][d] = spec.r * (x[d] - p.minimizers[0][d]);
    }
  });
  std::ostringstream os;
  write_envelope_csv(os, grid, values, grads);
  emit(cfg.out, os.str());
  note(cfg, "envelope: " + std::to_string(grid.size()) + " points");
  return 0;
}

int cmd_pa(const RunConfig& cfg) {
  const ProblemSpec spec = load(cfg);
  const ProxAverageProblem problem = spec.build();
  const auto weights = weights_from(cfg, problem.size(), false);
  std::vector<SampledFunction> curves;
  for (const auto& w : weights) curves.push_back(pa_curve(problem, w, spec.grid));
  std::ostringstream os;
  write_surface_csv(os, weights, curves);
  emit(cfg.out, os.str());
  note(cfg, "pa: " + std::to_string(weights.size()) + " weights x " +
                std::to_string(spec.grid.size()) + " points");
  return 0;
}

int cmd_argmin_path(const RunConfig& cfg) {
  const ProblemSpec spec = load(cfg);
  const ProxAverageProblem problem = spec.build();
  const auto path = weights_from(cfg, problem.size(), true);
  const ArgminPath result = track_argmin(problem, path, spec.grid, cfg.tie_tol, cfg.jump_threshold);
  std::ostringstream os;
  write_argmin_path_csv(os, result);
  emit(cfg.out, os.str());
  if (!cfg.report.empty()) {
    json doc;
    doc["jump_count"] = result.jumps.size();
    doc["jumps"] = to_json(result.jumps);
    emit(cfg.report, doc.dump(2) + "\n");
  }
  note(cfg, "argmin-path: " + std::to_string(result.records.size()) + " records, " +
                std::to_string(result.jumps.size()) + " jumps");
  for (const auto& j : result.jumps) {
    note(cfg, "  jump at t=" + format_number(j.t) + " magnitude " + format_number(j.magnitude));
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const ProblemSpec spec = load(cfg);
  ProblemOptions options;
  options.outer_grid = spec.outer_grid;
  const SuiteReport suite =
      run_verify_suite(spec.inputs(), spec.r, spec.delta, spec.grid, options, cfg.seed);
  json doc;
  doc["suite"] = suite.suite;
  doc["passed"] = suite.passed;
  doc["checks"] = json::array();
  for (const auto& c : suite.checks) {
    doc["checks"].push_back(to_json(c));
    note(cfg, std::string(c.passed ? "PASS " : "FAIL ") + c.name +
                  (c.note.empty() ? "" : " (" + c.note + ")"));
  }
  emit(cfg.out, doc.dump(2) + "\n");
  return suite.passed ? 0 : 1;
}

int cmd_example(const RunConfig& cfg) {
  const DemoReport demo = run_discontinuity_demo(cfg.steps, cfg.eps);
  std::ostringstream os;
  os << "figure,series,x,value\n";
  const GridSpec axis = GridSpec::line(-1.0, 3.0, 401);
  const MaxQuadFunction g0 = make_g(0, cfg.eps);
  const MaxQuadFunction g1 = make_g(1, cfg.eps);
  for (const auto* name : {"g_0", "g_1"}) {
    const MaxQuadFunction& g = name[2] == '0' ? g0 : g1;
    for (std::size_t k = 0; k < axis.size(); ++k) {
      const double x = axis.axis(0).coord(k);
      os << "g," << name << ',' << format_number(x) << ',' << format_number(g(x)) << '\n';
    }
  }
  for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (std::size_t k = 0; k < axis.size(); ++k) {
      const double x = axis.axis(0).coord(k);
      const double G = w * envelope_g_closed(0, 2.0, x, cfg.eps) +
                       (1.0 - w) * envelope_g_closed(1, 2.0, x, cfg.eps);
      os << "G," << format_number(w) << ',' << format_number(x) << ',' << format_number(G) << '\n';
    }
  }
  emit(cfg.out, os.str());

  json doc;
  doc["name"] = "discontinuity_demo";
  doc["passed"] = demo.passed;
  doc["steps"] = demo.steps;
  doc["eps"] = demo.eps;
  doc["jump_count"] = demo.jump_count;
  if (demo.jump_weight) doc["jump_weight"] = *demo.jump_weight;
  if (demo.jump_magnitude) doc["jump_magnitude"] = *demo.jump_magnitude;
  doc["tie_argmin"] = json::array();
  for (const auto& p : demo.tie_argmin) doc["tie_argmin"].push_back(p);
  doc["tie_value"] = demo.tie_value;
  doc["failures"] = demo.failures;
  if (!cfg.report.empty()) emit(cfg.report, doc.dump(2) + "\n");

  note(cfg, std::string("example: ") + (demo.passed ? "passed" : "FAILED") + ", " +
                std::to_string(demo.jump_count) + " jump(s)" +
                (demo.jump_weight ? " at weight " + format_number(*demo.jump_weight) : ""));
  for (const auto& f : demo.failures) note(cfg, "  " + f);
  return demo.passed ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--problem", cfg.problem, "problem file (JSON)");
  sub->add_option("--out", cfg.out, "output path, - for standard output");
  sub->add_option("--report", cfg.report, "JSON report path, - for standard output");
  sub->add_option("--r", cfg.r, "prox-parameter, overrides the file");
  sub->add_option("--grid", cfg.grids, "grid axis lo:hi:n, once per dimension");
  sub->add_option("--seed", cfg.seed, "sampling seed");
  sub->add_option("--tie-tol", cfg.tie_tol, "absolute tie tolerance for argmin sets");
  sub->add_flag("--quiet", cfg.quiet, "no progress output on standard error");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Moreau envelopes and proximal averages of max-of-quadratics functions"};
  app.require_subcommand(1);

  auto* envelope = app.add_subcommand("envelope", "e_r f_i and its gradient over the grid");
  add_common(envelope, cfg);
  envelope->add_option("--function", cfg.function, "1-based function index");

  auto* pa = app.add_subcommand("pa", "proximal average curves over the grid");
  add_common(pa, cfg);

  auto* path = app.add_subcommand("argmin-path", "argmin sets along a weight path");
  add_common(path, cfg);
  path->add_option("--jump-threshold", cfg.jump_threshold, "Hausdorff distance flagging a jump");

  for (auto* sub : {pa, path}) {
    sub->add_option("--lambda", cfg.lambdas, "weights w1,w2,...; repeatable");
    sub->add_option("--edge", cfg.edge, "path between vertices i and j (1-based)")->expected(2);
    sub->add_option("--steps", cfg.steps, "number of weights along --edge");
  }

  auto* verify = app.add_subcommand("verify", "property and regularity checks");
  add_common(verify, cfg);

  auto* example = app.add_subcommand("example", "the two-function discontinuity example");
  add_common(example, cfg);
  example->add_option("--steps", cfg.steps, "path resolution");
  example->add_option("--eps", cfg.eps, "flank lift in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cfg.steps < 1) throw InvalidArgument("--steps must be positive");
    if (*envelope) return cmd_envelope(cfg);
    if (*pa) return cmd_pa(cfg);
    if (*path) return cmd_argmin_path(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*example) return cmd_example(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
