#include "ncpa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ncpa/errors.hpp"

namespace ncpa {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidArgument(where + ": missing key \"" + key + "\"");
  }
  return obj.at(key);
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InvalidArgument(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidArgument(where + ": value is not finite");
  return x;
}

std::vector<double> number_list(const json& v, std::size_t n, const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(finite_number(v, where));
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(finite_number(v[i], where + "[" + std::to_string(i) + "]"));
    }
  } else {
    throw InvalidArgument(where + ": expected a number or an array of numbers");
  }
  if (out.size() != n) {
    throw InvalidArgument(where + ": expected " + std::to_string(n) + " entries, got " +
                          std::to_string(out.size()));
  }
  return out;
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidArgument(where + ": expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

GridSpec parse_grid(const json& g, std::size_t n, const std::string& where) {
  const auto lower = number_list(require(g, "lower", where), n, where + ".lower");
  const auto upper = number_list(require(g, "upper", where), n, where + ".upper");
  const json& pts = require(g, "points", where);
  std::vector<std::size_t> points;
  if (pts.is_array()) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      points.push_back(count(pts[i], where + ".points[" + std::to_string(i) + "]"));
    }
  } else {
    points.assign(n, count(pts, where + ".points"));
  }
  if (points.size() != n) throw InvalidArgument(where + ".points: wrong length");
  std::vector<Axis> axes;
  for (std::size_t d = 0; d < n; ++d) axes.push_back(Axis{lower[d], upper[d], points[d]});
  return GridSpec(std::move(axes));
}

DeltaSpec parse_delta(const json& d) {
  const std::string where = "delta";
  const json& kind = require(d, "kind", where);
  if (!kind.is_string()) throw InvalidArgument("delta.kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "symmetric_quadratic") return DeltaSpec::symmetric_quadratic();
  if (k != "custom_polynomial") throw InvalidArgument("unknown delta kind \"" + k + "\"");
  const json& terms = require(d, "terms", where);
  if (!terms.is_array()) throw InvalidArgument("delta.terms must be an array");
  std::vector<DeltaTerm> out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string at = "delta.terms[" + std::to_string(t) + "]";
    DeltaTerm term;
    const json& powers = require(terms[t], "powers", at);
    if (!powers.is_array()) throw InvalidArgument(at + ".powers must be an array");
    for (std::size_t i = 0; i < powers.size(); ++i) {
      term.powers.push_back(static_cast<unsigned>(count(powers[i], at + ".powers")));
    }
    term.coef = finite_number(require(terms[t], "coef", at), at + ".coef");
    out.push_back(std::move(term));
  }
  return DeltaSpec::custom_polynomial(std::move(out));
}

MaxQuadFunction parse_function(const json& f, std::size_t n, const std::string& where) {
  const json& pieces = require(f, "pieces", where);
  if (!pieces.is_array() || pieces.empty()) {
    throw InvalidArgument(where + ".pieces must be a nonempty array");
  }
  std::vector<QuadraticPiece> out;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const std::string at = where + ".pieces[" + std::to_string(j) + "]";
    const double alpha = finite_number(require(pieces[j], "alpha", at), at + ".alpha");
    auto beta = number_list(require(pieces[j], "beta", at), n, at + ".beta");
    const double gamma = finite_number(require(pieces[j], "gamma", at), at + ".gamma");
    out.emplace_back(alpha, std::move(beta), gamma);
  }
  std::optional<Box> domain;
  if (f.contains("domain")) {
    const json& d = f.at("domain");
    domain = Box{number_list(require(d, "lower", where + ".domain"), n, where + ".domain.lower"),
                 number_list(require(d, "upper", where + ".domain"), n, where + ".domain.upper")};
  }
  return MaxQuadFunction(n, std::move(out), std::move(domain));
}

void write_point(std::ostream& os, PointView p) {
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (d) os << ';';
    os << format_number(p[d]);
  }
}

json point_json(PointView p) { return json(std::vector<double>(p.begin(), p.end())); }

}  // namespace

std::vector<InputFunction> ProblemSpec::inputs() const {
  return std::vector<InputFunction>(functions.begin(), functions.end());
}

ProxAverageProblem ProblemSpec::build(Execution exec) const {
  ProblemOptions options;
  options.outer_grid = outer_grid;
  options.exec = exec;
  return ProxAverageProblem(inputs(), r, delta, grid, options);
}

ProblemSpec parse_problem(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("problem file must hold a JSON object");
  ProblemSpec spec;
  spec.dimension = count(require(doc, "dimension", "problem"), "dimension");
  if (spec.dimension == 0) throw InvalidArgument("dimension must be positive");
  spec.r = finite_number(require(doc, "r", "problem"), "r");
  if (doc.contains("delta")) spec.delta = parse_delta(doc.at("delta"));
  spec.grid = parse_grid(require(doc, "grid", "problem"), spec.dimension, "grid");
  if (doc.contains("outer_grid")) {
    spec.outer_grid = parse_grid(doc.at("outer_grid"), spec.dimension, "outer_grid");
  }
  const json& fs = require(doc, "functions", "problem");
  if (!fs.is_array() || fs.empty()) throw InvalidArgument("functions must be a nonempty array");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    spec.functions.push_back(
        parse_function(fs[i], spec.dimension, "functions[" + std::to_string(i) + "]"));
  }
  return spec;
}

ProblemSpec parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("problem file is not valid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

Axis parse_axis(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw InvalidArgument("grid axis must look like lo:hi:n, got " + text);
  try {
    std::size_t used = 0;
    const std::string lo_s = text.substr(0, a);
    const std::string hi_s = text.substr(a + 1, b - a - 1);
    const std::string n_s = text.substr(b + 1);
    const double lo = std::stod(lo_s, &used);
    if (used != lo_s.size()) throw std::invalid_argument(lo_s);
    const double hi = std::stod(hi_s, &used);
    if (used != hi_s.size()) throw std::invalid_argument(hi_s);
    const long long n = std::stoll(n_s, &used);
    if (used != n_s.size() || n < 0) throw std::invalid_argument(n_s);
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument(text);
    const Axis axis{lo, hi, static_cast<std::size_t>(n)};
    (void)GridSpec(std::vector<Axis>{axis});
    return axis;
  } catch (const std::logic_error&) {
    throw InvalidArgument("grid axis must look like lo:hi:n, got " + text);
  }
}

SimplexWeight parse_weight(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InvalidArgument("weight entries must be numbers, got \"" + item + "\"");
    }
  }
  if (w.empty()) throw InvalidArgument("empty weight");
  return SimplexWeight(std::move(w));
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_envelope_csv(std::ostream& os, const GridSpec& grid, const std::vector<double>& values,
                        const std::vector<Point>& gradients) {
  const std::size_t n = grid.dimension();
  if (n == 1) {
    os << "x,value,grad\n";
  } else {
    for (std::size_t d = 0; d < n; ++d) os << "x_" << d + 1 << ',';
    os << "value";
    for (std::size_t d = 0; d < n; ++d) os << ",grad_" << d + 1;
    os << '\n';
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (double c : grid.point(k)) os << format_number(c) << ',';
    os << format_number(values[k]);
    for (double g : gradients[k]) os << ',' << format_number(g);
    os << '\n';
  }
}

void write_surface_csv(std::ostream& os, const std::vector<SimplexWeight>& weights,
                       const std::vector<SampledFunction>& curves) {
  if (weights.empty()) return;
  const std::size_t m = weights.front().size();
  const std::size_t n = curves.front().grid.dimension();
  for (std::size_t i = 0; i < m; ++i) os << "lambda_" << i + 1 << ',';
  if (n == 1) {
    os << "x,";
  } else {
    for (std::size_t d = 0; d < n; ++d) os << "x_" << d + 1 << ',';
  }
  os << "value\n";
  for (std::size_t c = 0; c < weights.size(); ++c) {
    std::string prefix;
    for (double w : weights[c].weights()) prefix += format_number(w) + ",";
    const auto& curve = curves[c];
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
      os << prefix;
      for (double x : curve.grid.point(k)) os << format_number(x) << ',';
      os << format_number(curve.values[k]) << '\n';
    }
  }
}

void write_argmin_path_csv(std::ostream& os, const ArgminPath& path) {
  if (path.records.empty()) return;
  const std::size_t m = path.records.front().lambda.size();
  std::size_t width = 1;
  for (const auto& rec : path.records) width = std::max(width, rec.argmin.size());
  os << 't';
  for (std::size_t i = 0; i < m; ++i) os << ",lambda_" << i + 1;
  os << ",argmin_count";
  for (std::size_t j = 0; j < width; ++j) os << ",argmin_" << j + 1;
  os << ",min_value\n";
  for (const auto& rec : path.records) {
    os << format_number(rec.t);
    for (double w : rec.lambda.weights()) os << ',' << format_number(w);
    os << ',' << rec.argmin.size();
    for (std::size_t j = 0; j < width; ++j) {
      os << ',';
      if (j < rec.argmin.size()) write_point(os, rec.argmin[j]);
    }
    os << ',' << format_number(rec.min_value) << '\n';
  }
  for (const auto& jump : path.jumps) {
    os << "#jump," << format_number(jump.t);
    for (double w : jump.lambda.weights()) os << ',' << format_number(w);
    os << ',' << format_number(jump.magnitude) << '\n';
  }
}

json to_json(const CheckReport& report) {
  json out;
  out["name"] = report.name;
  out["passed"] = report.passed;
  out["samples"] = report.samples_tested;
  if (report.estimate) out["estimate"] = *report.estimate;
  out["seed"] = report.seed;
  if (!report.note.empty()) out["note"] = report.note;
  out["violation_count"] = report.violation_count;
  json vs = json::array();
  for (const auto& v : report.violations) {
    json item;
    item["x"] = point_json(v.x);
    item["xp"] = point_json(v.xp);
    if (v.lambda) item["lambda"] = *v.lambda;
    item["margin"] = v.margin;
    vs.push_back(std::move(item));
  }
  out["violations"] = std::move(vs);
  return out;
}

json to_json(const std::vector<JumpEvent>& jumps) {
  json out = json::array();
  for (const auto& j : jumps) {
    json left = json::array();
    for (const auto& p : j.left) left.push_back(point_json(p));
    json right = json::array();
    for (const auto& p : j.right) right.push_back(point_json(p));
    out.push_back({{"t", j.t},
                   {"lambda", j.lambda.weights()},
                   {"left", std::move(left)},
                   {"right", std::move(right)},
                   {"magnitude", j.magnitude}});
  }
  return out;
}

}  // namespace ncpa
