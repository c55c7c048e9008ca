#include "hardy/serialization.hpp"

#include <algorithm>
#include <cmath>

namespace hardy::io {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorKind::InvalidArgument, "field '" + field + "': " + what);
}

void reject_unknown(const json& j, const std::string& field, std::vector<std::string> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      bad(field.empty() ? it.key() : field + "." + it.key(), "unknown field");
}

const json& member(const json& j, const std::string& field, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) bad(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

std::vector<double> number_array(const json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf") return -kInf;
  }
  bad(field, "expected a number");
}

WeightFunction weight_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) bad(field, "expected an object");
  const json& kind = member(j, field, "kind");
  if (!kind.is_string()) bad(field + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  try {
    if (k == "piecewise_power") {
      reject_unknown(j, field, {"kind", "pieces"});
      const json& pieces = member(j, field, "pieces");
      if (!pieces.is_array() || pieces.empty()) bad(field + ".pieces", "expected a nonempty array");
      std::vector<PowerPiece> out;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string f = field + ".pieces[" + std::to_string(i) + "]";
        const json& p = pieces[i];
        if (!p.is_object()) bad(f, "expected an object");
        reject_unknown(p, f, {"from", "to", "c", "alpha"});
        PowerPiece piece;
        piece.from = read_number(member(p, f, "from"), f + ".from");
        const json& to = member(p, f, "to");
        piece.to = to.is_null() ? kInf : read_number(to, f + ".to");
        piece.c = read_number(member(p, f, "c"), f + ".c");
        piece.alpha = read_number(member(p, f, "alpha"), f + ".alpha");
        out.push_back(piece);
      }
      return WeightFunction::piecewise_power(out);
    }
    if (k == "tabulated") {
      reject_unknown(j, field, {"kind", "t", "y", "interp"});
      auto t = number_array(member(j, field, "t"), field + ".t");
      auto y = number_array(member(j, field, "y"), field + ".y");
      Interp interp = Interp::LogLinear;
      if (auto it = j.find("interp"); it != j.end()) {
        if (*it == "linear")
          interp = Interp::Linear;
        else if (*it != "loglinear")
          bad(field + ".interp", "expected \"linear\" or \"loglinear\"");
      }
      return WeightFunction::tabulated(t, y, interp);
    }
  } catch (const Error& e) {
    if (std::string(e.what()).rfind("field '", 0) == 0) throw;
    bad(field, e.what());
  }
  bad(field + ".kind", "expected \"piecewise_power\" or \"tabulated\"");
}

json weight_to_json(const WeightFunction& w) {
  json j;
  if (w.kind() == WeightFunction::Kind::Tabulated) {
    j["kind"] = "tabulated";
    j["t"] = w.table_t();
    j["y"] = w.table_y();
    j["interp"] = w.interp() == Interp::Linear ? "linear" : "loglinear";
    return j;
  }
  j["kind"] = "piecewise_power";
  j["pieces"] = json::array();
  for (const auto& p : w.pieces()) {
    json pj;
    pj["from"] = p.from;
    pj["to"] = std::isinf(p.to) ? json(nullptr) : json(p.to);
    pj["c"] = p.c;
    pj["alpha"] = p.alpha;
    j["pieces"].push_back(pj);
  }
  return j;
}

InequalitySpec spec_from_json(const json& j, const std::vector<std::string>& extra_keys) {
  if (!j.is_object()) bad("spec", "expected an object");
  std::vector<std::string> allowed{"inequality", "p", "q", "u", "v", "w"};
  allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
  reject_unknown(j, "", allowed);
  const json& id = member(j, "", "inequality");
  if (!id.is_string()) bad("inequality", "expected a string such as \"3.1\"");
  InequalityKind kind;
  try {
    kind = parse_inequality_id(id.get<std::string>());
  } catch (const Error& e) {
    bad("inequality", e.what());
  }
  const double p = read_number(member(j, "", "p"), "p");
  double q = kInf;
  if (auto it = j.find("q"); it != j.end() && !it->is_null())
    q = read_number(*it, "q");
  else if (!is_sup_kind(kind))
    bad("q", "missing");
  auto u = weight_from_json(member(j, "", "u"), "u");
  auto v = weight_from_json(member(j, "", "v"), "v");
  auto w = weight_from_json(member(j, "", "w"), "w");
  try {
    return InequalitySpec(kind, p, q, u, v, w);
  } catch (const Error& e) {
    const std::string msg = e.what();
    bad(msg.find(" q") != std::string::npos || msg.find("q =") != std::string::npos ? "q" : "p", msg);
  }
}

json spec_to_json(const InequalitySpec& s) {
  json j;
  j["inequality"] = inequality_id(s.kind);
  j["p"] = number(s.ex.p);
  j["q"] = number(s.ex.q);
  j["u"] = weight_to_json(s.u);
  j["v"] = weight_to_json(s.v);
  j["w"] = weight_to_json(s.w);
  return j;
}

json report_to_json(const ConditionReport& r) {
  json j;
  j["formula"] = r.formula;
  j["value"] = number(r.value);
  j["regime"] = r.regime;
  j["error_est"] = number(r.error_est);
  j["warnings"] = r.warnings;
  if (r.argmax > 0) j["argmax"] = number(r.argmax);
  return j;
}

json chain_to_json(const ChainReport& c) {
  json j;
  j["regime"] = c.regime;
  j["values"] = json::object();
  for (const auto& [name, value] : c.values) j["values"][name] = number(value);
  j["max_adjacent_ratio"] = number(c.max_adjacent_ratio);
  return j;
}

json sequence_to_json(const DiscretizingSequence& s) {
  json j;
  j["a"] = s.a;
  j["k_min"] = s.k_min;
  j["knots"] = s.knots;
  j["labels"] = json::array();
  for (auto l : s.labels) j["labels"].push_back(label_name(l));
  j["min_u_ratio"] = number(s.min_u_ratio);
  j["min_phi_ratio"] = number(s.min_phi_ratio);
  j["max_ratio_ratio"] = number(s.max_ratio_ratio);
  j["max_cover"] = number(s.max_cover);
  return j;
}

json sequence_report_to_json(const SequenceReport& r) {
  json j;
  j["ok"] = r.report.ok();
  j["clauses"] = json::array();
  for (const auto& c : r.report.clauses) {
    json cj;
    cj["name"] = c.name;
    cj["holds"] = c.holds;
    cj["definite"] = c.definite;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["clauses"].push_back(cj);
  }
  j["min_u_ratio"] = number(r.min_u_ratio);
  j["min_phi_ratio"] = number(r.min_phi_ratio);
  j["max_ratio_ratio"] = number(r.max_ratio_ratio);
  j["max_cover_z1"] = number(r.max_cover_z1);
  j["max_cover_z2"] = number(r.max_cover_z2);
  return j;
}

json test_function_to_json(const TestFunction& h) {
  json j;
  switch (h.kind) {
    case TestFunction::Kind::Atoms:
      j["kind"] = "atoms";
      j["atoms"] = json::array();
      for (std::size_t i = 0; i < h.m.size(); ++i)
        if (h.m[i] > 0) j["atoms"].push_back({{"z", h.z[i]}, {"m", h.m[i]}});
      return j;
    case TestFunction::Kind::MonotoneSteps:
      j["kind"] = "monotone_steps";
      j["jumps"] = json::array();
      for (std::size_t i = 0; i < h.m.size(); ++i)
        if (h.m[i] > 0) j["jumps"].push_back({{"z", h.z[i]}, {"m", h.m[i]}});
      return j;
    case TestFunction::Kind::Steps:
      j["kind"] = "steps";
      j["edges"] = h.z;
      j["heights"] = h.m;
      return j;
  }
  return j;
}

TestFunction test_function_from_json(const json& j) {
  if (!j.is_object()) bad("test_function", "expected an object");
  const json& kind = member(j, "test_function", "kind");
  auto pairs = [&](const std::string& key) {
    std::vector<double> z, m;
    const json& a = member(j, "test_function", key);
    if (!a.is_array()) bad("test_function." + key, "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string f = "test_function." + key + "[" + std::to_string(i) + "]";
      z.push_back(read_number(member(a[i], f, "z"), f + ".z"));
      m.push_back(read_number(member(a[i], f, "m"), f + ".m"));
    }
    return std::make_pair(z, m);
  };
  if (kind == "atoms") {
    auto [z, m] = pairs("atoms");
    return TestFunction::atoms(z, m);
  }
  if (kind == "monotone_steps") {
    auto [z, m] = pairs("jumps");
    return TestFunction::monotone(z, m);
  }
  if (kind == "steps")
    return TestFunction::steps(number_array(member(j, "test_function", "edges"), "test_function.edges"),
                               number_array(member(j, "test_function", "heights"), "test_function.heights"));
  bad("test_function.kind", "expected \"atoms\", \"monotone_steps\" or \"steps\"");
}

json estimate_to_json(const OracleEstimate& e) {
  json j;
  j["inequality"] = e.inequality;
  j["c_lo"] = number(e.c_lo);
  j["method"] = e.method;
  if (e.maximizer.kind == TestFunction::Kind::Atoms) {
    j["atoms"] = json::array();
    for (std::size_t i = 0; i < e.maximizer.m.size(); ++i)
      if (e.maximizer.m[i] > 0) j["atoms"].push_back({{"z", e.maximizer.z[i]}, {"m", e.maximizer.m[i]}});
  } else {
    j["maximizer"] = test_function_to_json(e.maximizer);
  }
  j["stable"] = e.stable;
  j["unbounded"] = e.unbounded;
  j["window_edge"] = e.window_edge;
  j["lhs"] = number(e.lhs);
  j["rhs"] = number(e.rhs);
  j["level_points"] = e.level_points;
  j["level_values"] = json::array();
  for (double v : e.level_values) j["level_values"].push_back(number(v));
  j["restarts"] = e.restarts;
  j["trace"] = e.trace;
  return j;
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, what + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace hardy::io
