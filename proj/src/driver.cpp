#include "hardy/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hardy::driver {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorKind::InvalidArgument, "field '" + field + "': " + what);
}

int read_int(const json& j, const std::string& field, int lo) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) bad(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1000000) bad(field, "out of range");
  return static_cast<int>(v);
}

std::string read_string(const json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

void check(const RunConfig& c) {
  if (c.command != "compute-condition" && c.command != "verify" && c.command != "sweep" && c.command != "discretize")
    bad("command", "expected compute-condition, verify, sweep or discretize");
  if (c.format != "json" && c.format != "csv") bad("format", "expected json or csv");
  if (c.format == "csv" && c.command != "sweep") bad("format", "csv output is only produced by sweep");
  if (!(c.window.lo > 0) || !(c.window.hi > c.window.lo) || std::isinf(c.window.hi))
    bad("window", "expected 0 < lo < hi < inf");
  if (c.grid_points < 8) bad("grid_points", "must be at least 8");
  if (c.atoms < 4) bad("atoms", "must be at least 4");
  if (!(c.ratio >= 2) || std::isinf(c.ratio)) bad("ratio", "a must be >= 2");
  if (c.spec.is_null() && c.spec_path.empty()) bad("spec", "missing");
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

json load_spec(const RunConfig& c) {
  if (!c.spec.is_null()) return c.spec;
  std::ifstream in(c.spec_path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read spec file '" + c.spec_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return io::parse(ss.str(), c.spec_path);
}

ConditionOptions condition_options(const RunConfig& c) {
  ConditionOptions o;
  o.window = c.window;
  o.scan_points = c.grid_points;
  return o;
}

OracleOptions oracle_options(const RunConfig& c) {
  OracleOptions o;
  o.window = c.window;
  o.atoms = c.atoms;
  o.levels = c.levels;
  o.seed = c.seed;
  return o;
}

struct Outcome {
  json body;
  int exit_code = 0;
  std::string message;
};

Outcome compute_condition_cmd(const RunConfig& c, const json& doc) {
  const auto spec = io::spec_from_json(doc);
  const auto opt = condition_options(c);
  const auto hw = hypothesis_warnings(spec, opt);
  Outcome out;
  out.body = io::report_to_json(compute_condition(spec, opt));
  out.body["hypotheses_unmet"] = !hw.empty();
  if (!hw.empty()) {
    out.exit_code = 2;
    out.message = "hypotheses unmet: " + join(hw, "; ");
  }
  return out;
}

json discretization_part(const InequalitySpec& spec, const RunConfig& c) {
  json j;
  try {
    const auto phi = discretization_phi(spec, c.window);
    const auto seq = build_discretizing_sequence(phi, c.ratio);
    const auto check = verify_sequence(seq, phi);
    j["knots"] = seq.knots.size();
    j["verification"] = io::sequence_report_to_json(check);
    if (spec.kind == InequalityKind::IteratedHardy)
      j["discrete"] = io::report_to_json(discrete_A(spec, seq, phi));
    else
      j["discrete"] = io::report_to_json(discrete_D(spec, seq, phi));
    const auto chain = spec.ex.p < 1 ? chain_A(spec, seq, phi) : chain_B(spec, seq, phi);
    j["chain"] = io::chain_to_json(chain);
  } catch (const Error& e) {
    j["error"] = e.what();
  }
  return j;
}

Outcome verify_cmd(const RunConfig& c, const json& doc) {
  const auto spec = io::spec_from_json(doc);
  const auto copt = condition_options(c);
  const auto hw = hypothesis_warnings(spec, copt);
  const auto rep = compute_condition(spec, copt);
  const auto est = estimate_best_constant(spec, oracle_options(c));
  const double ratio = rep.value / est.c_lo;
  Outcome out;
  out.body["condition"] = io::report_to_json(rep);
  out.body["oracle"] = io::estimate_to_json(est);
  out.body["ratio"] = io::number(ratio);
  // The lower end allows the 5e-3 quadrature tolerance of the exact corner.
  out.body["bracket"] = {1, 50};
  out.body["pass"] = ratio >= 1 - 5e-3 && ratio <= 50 && est.stable;
  out.body["hypotheses_unmet"] = !hw.empty();
  if (spec.kind == InequalityKind::IteratedHardy || spec.kind == InequalityKind::IteratedHardySup)
    out.body["discretization"] = discretization_part(spec, c);
  if (!hw.empty()) {
    out.exit_code = 2;
    out.message = "hypotheses unmet: " + join(hw, "; ");
  }
  return out;
}

// Sweep target: "p", "q" or a weight path such as "v.pieces[1].alpha".
json& locate(json& doc, const std::string& path) {
  json* node = &doc;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '.') {
      ++i;
      continue;
    }
    if (path[i] == '[') {
      const auto close = path.find(']', i);
      if (close == std::string::npos) bad("sweep.param", "unbalanced '['");
      const auto idx = std::stoul(path.substr(i + 1, close - i - 1));
      if (!node->is_array() || idx >= node->size()) bad("sweep.param", "index out of range in '" + path + "'");
      node = &(*node)[idx];
      i = close + 1;
      continue;
    }
    const auto end = path.find_first_of(".[", i);
    const auto key = path.substr(i, end == std::string::npos ? std::string::npos : end - i);
    if (!node->is_object() || !node->contains(key)) bad("sweep.param", "no such field '" + path + "'");
    node = &(*node)[key];
    i = end == std::string::npos ? path.size() : end;
  }
  return *node;
}

struct SweepRow {
  double param = 0;
  std::string formula;
  double value = kNaN, c_lo = kNaN, ratio = kNaN, error_est = kNaN;
  std::vector<std::string> warnings;
  std::string error;
};

Outcome sweep_cmd(const RunConfig& c, const json& doc) {
  if (!doc.is_object()) bad("spec", "expected an object");
  auto it = doc.find("sweep");
  if (it == doc.end()) bad("sweep", "missing");
  const json& sw = *it;
  if (!sw.is_object()) bad("sweep", "expected an object");
  for (auto k = sw.begin(); k != sw.end(); ++k)
    if (k.key() != "param" && k.key() != "values") bad("sweep." + k.key(), "unknown field");
  if (!sw.contains("param")) bad("sweep.param", "missing");
  if (!sw.contains("values")) bad("sweep.values", "missing");
  const auto param = read_string(sw["param"], "sweep.param");
  if (!sw["values"].is_array()) bad("sweep.values", "expected an array of numbers");
  std::vector<double> values;
  for (std::size_t i = 0; i < sw["values"].size(); ++i)
    values.push_back(io::read_number(sw["values"][i], "sweep.values[" + std::to_string(i) + "]"));

  json base = doc;
  base.erase("sweep");
  locate(base, param);  // a bad path is malformed input, not a row failure
  io::spec_from_json(base);

  // Rows run one after another in index order.
  std::vector<SweepRow> rows;
  for (double x : values) {
    SweepRow row;
    row.param = x;
    try {
      json d = base;
      locate(d, param) = io::number(x);
      const auto spec = io::spec_from_json(d);
      const auto rep = compute_condition(spec, condition_options(c));
      row.formula = rep.formula;
      row.value = rep.value;
      row.error_est = rep.error_est;
      row.warnings = rep.warnings;
      const auto est = estimate_best_constant(spec, oracle_options(c));
      row.c_lo = est.c_lo;
      row.ratio = rep.value / est.c_lo;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  Outcome out;
  if (c.format == "csv") {
    std::string text;
    text += param + ",formula,value,c_lo,ratio,error_est,warnings,error\n";
    for (const auto& r : rows)
      text += fmt(r.param) + "," + csv_field(r.formula) + "," + fmt(r.value) + "," + fmt(r.c_lo) + "," + fmt(r.ratio) +
              "," + fmt(r.error_est) + "," + csv_field(join(r.warnings, "; ")) + "," + csv_field(r.error) + "\n";
    out.body = text;
  } else {
    out.body["param"] = param;
    out.body["rows"] = json::array();
    for (const auto& r : rows) {
      json j;
      j["param"] = io::number(r.param);
      j["formula"] = r.formula;
      j["value"] = io::number(r.value);
      j["c_lo"] = io::number(r.c_lo);
      j["ratio"] = io::number(r.ratio);
      j["error_est"] = io::number(r.error_est);
      j["warnings"] = r.warnings;
      j["error"] = r.error;
      out.body["rows"].push_back(j);
    }
  }
  return out;
}

// An analytic phi: {"phi":{"kind":"power","exponent":e,"scale":c},"u":{...},"r":r}
FundamentalFunction analytic_phi(const json& doc, const Window& window) {
  for (auto k = doc.begin(); k != doc.end(); ++k)
    if (k.key() != "phi" && k.key() != "u" && k.key() != "r") bad(k.key(), "unknown field");
  const json& pj = doc["phi"];
  if (!pj.is_object()) bad("phi", "expected an object");
  for (auto k = pj.begin(); k != pj.end(); ++k)
    if (k.key() != "kind" && k.key() != "exponent" && k.key() != "scale") bad("phi." + k.key(), "unknown field");
  if (!pj.contains("kind") || pj["kind"] != "power") bad("phi.kind", "expected \"power\"");
  if (!pj.contains("exponent")) bad("phi.exponent", "missing");
  const double e = io::read_number(pj["exponent"], "phi.exponent");
  const double scale = pj.contains("scale") ? io::read_number(pj["scale"], "phi.scale") : 1.0;
  if (!(scale > 0) || std::isinf(scale)) bad("phi.scale", "must be finite and > 0");
  if (!std::isfinite(e)) bad("phi.exponent", "must be finite");
  if (!doc.contains("u")) bad("u", "missing");
  if (!doc.contains("r")) bad("r", "missing");
  const auto u = io::weight_from_json(doc["u"], "u");
  const double r = io::read_number(doc["r"], "r");
  if (!(r > 0) || std::isinf(r)) bad("r", "must be finite and > 0");
  return analytic_function([e, scale](double x) { return scale * std::pow(x, e); }, CumulativeWeight(u), r, window);
}

Outcome discretize_cmd(const RunConfig& c, const json& doc) {
  if (!doc.is_object()) bad("spec", "expected an object");
  const auto phi = doc.contains("phi") ? analytic_phi(doc, c.window)
                                       : discretization_phi(io::spec_from_json(doc), c.window);
  Outcome out;
  out.body["source"] = doc.contains("phi") ? "analytic" : "spec";
  out.body["r"] = phi.r();
  out.body["phi_clauses"] = json::array();
  const auto failures = phi.flags().failures();
  for (const auto& f : failures) out.body["phi_clauses"].push_back(f);
  if (!failures.empty()) {
    out.exit_code = 2;
    out.message = "phi is degenerate: " + join(failures, "; ");
    return out;
  }
  const auto seq = build_discretizing_sequence(phi, c.ratio);
  const auto check = verify_sequence(seq, phi);
  out.body["sequence"] = io::sequence_to_json(seq);
  out.body["verification"] = io::sequence_report_to_json(check);
  if (!check.report.ok()) {
    std::vector<std::string> failed;
    for (const auto& cl : check.report.clauses)
      if (!cl.holds) failed.push_back(cl.name + (cl.detail.empty() ? "" : " (" + cl.detail + ")"));
    out.exit_code = 2;
    out.message = "sequence clauses failed: " + join(failed, "; ");
  }
  return out;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) bad("config", "expected an object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    const json& v = it.value();
    if (k == "command")
      c.command = read_string(v, k);
    else if (k == "spec")
      c.spec = v;
    else if (k == "spec_path")
      c.spec_path = read_string(v, k);
    else if (k == "out")
      c.out_path = read_string(v, k);
    else if (k == "format")
      c.format = read_string(v, k);
    else if (k == "window") {
      if (!v.is_array() || v.size() != 2) bad(k, "expected [lo, hi]");
      c.window.lo = io::read_number(v[0], "window[0]");
      c.window.hi = io::read_number(v[1], "window[1]");
    } else if (k == "grid_points")
      c.grid_points = read_int(v, k, 1);
    else if (k == "atoms")
      c.atoms = read_int(v, k, 1);
    else if (k == "levels")
      c.levels = read_int(v, k, 1);
    else if (k == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        bad(k, "expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "ratio")
      c.ratio = io::read_number(v, k);
    else
      bad(k, "unknown field");
  }
  if (!j.contains("command")) bad("command", "missing");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.spec_path.empty()) j["spec_path"] = c.spec_path;
  if (!c.out_path.empty()) j["out"] = c.out_path;
  j["format"] = c.format;
  j["window"] = {io::number(c.window.lo), io::number(c.window.hi)};
  j["grid_points"] = c.grid_points;
  j["atoms"] = c.atoms;
  j["levels"] = c.levels;
  j["seed"] = c.seed;
  j["ratio"] = c.ratio;
  return j;
}

RunResult run(const RunConfig& config) {
  RunResult res;
  try {
    check(config);
    const json doc = load_spec(config);
    Outcome o;
    if (config.command == "compute-condition")
      o = compute_condition_cmd(config, doc);
    else if (config.command == "verify")
      o = verify_cmd(config, doc);
    else if (config.command == "sweep")
      o = sweep_cmd(config, doc);
    else
      o = discretize_cmd(config, doc);

    json cfg = config_to_json(config);
    cfg["spec"] = doc;
    if (o.body.is_string()) {
      res.output = "# config " + cfg.dump() + "\n" + o.body.get<std::string>();
    } else {
      json out;
      out["command"] = config.command;
      for (auto it = o.body.begin(); it != o.body.end(); ++it) out[it.key()] = it.value();
      out["config"] = cfg;
      res.output = out.dump(2) + "\n";
    }
    res.exit_code = o.exit_code;
    res.message = o.message;
    if (!config.out_path.empty()) {
      std::ofstream f(config.out_path, std::ios::binary);
      if (!f) fail(ErrorKind::InvalidArgument, "cannot write output file '" + config.out_path + "'");
      f << res.output;
    }
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.output.clear();
    res.message = e.what();
  }
  return res;
}

}  // namespace hardy::driver
