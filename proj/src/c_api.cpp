#include "hardy/hardy.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "hardy/driver.hpp"

struct hardy_spec {
  hardy::InequalitySpec spec;
};

struct hardy_report {
  hardy::ConditionReport report;
};

struct hardy_estimate {
  hardy::OracleEstimate estimate;
};

namespace {

thread_local std::string last_error;

hardy_status status_of(hardy::ErrorKind k) {
  switch (k) {
    case hardy::ErrorKind::InvalidArgument: return HARDY_EINVAL;
    case hardy::ErrorKind::Domain: return HARDY_EDOMAIN;
    case hardy::ErrorKind::Numerical: return HARDY_ENUMERIC;
    case hardy::ErrorKind::Degenerate: return HARDY_EDEGENERATE;
    case hardy::ErrorKind::Internal: return HARDY_EINTERNAL;
  }
  return HARDY_EINTERNAL;
}

template <class F>
hardy_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return HARDY_OK;
  } catch (const hardy::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return HARDY_EINTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return HARDY_EINTERNAL;
  }
}

hardy_status null_arg(const char* name) {
  last_error = std::string(name) + " is null";
  return HARDY_EINVAL;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hardy::ConditionOptions condition_options(const hardy_options* opt) {
  hardy_options o;
  hardy_options_default(&o);
  if (opt) o = *opt;
  hardy::ConditionOptions c;
  c.window.lo = o.window_lo;
  c.window.hi = o.window_hi;
  c.scan_points = o.grid_points;
  return c;
}

hardy::OracleOptions oracle_options(const hardy_options* opt) {
  hardy_options o;
  hardy_options_default(&o);
  if (opt) o = *opt;
  hardy::OracleOptions r;
  r.window.lo = o.window_lo;
  r.window.hi = o.window_hi;
  r.atoms = o.atoms;
  r.levels = o.levels;
  r.seed = o.seed;
  return r;
}

}  // namespace

extern "C" {

const char* hardy_version(void) { return "1.0.0"; }

void hardy_options_default(hardy_options* opt) {
  if (!opt) return;
  const hardy::Window w;
  const hardy::OracleOptions o;
  opt->window_lo = w.lo;
  opt->window_hi = w.hi;
  opt->grid_points = hardy::ConditionOptions{}.scan_points;
  opt->atoms = o.atoms;
  opt->levels = o.levels;
  opt->seed = o.seed;
}

const char* hardy_last_error(void) { return last_error.c_str(); }

hardy_status hardy_spec_parse(const char* json, hardy_spec** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto spec = hardy::io::spec_from_json(hardy::io::parse(json, "spec"));
    *out = new hardy_spec{std::move(spec)};
  });
}

void hardy_spec_free(hardy_spec* spec) { delete spec; }

hardy_status hardy_condition(const hardy_spec* spec, const hardy_options* opt, hardy_report** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new hardy_report{hardy::compute_condition(spec->spec, condition_options(opt))}; });
}

void hardy_report_free(hardy_report* report) { delete report; }

double hardy_report_value(const hardy_report* report) { return report ? report->report.value : 0.0; }
double hardy_report_error_est(const hardy_report* report) { return report ? report->report.error_est : 0.0; }
const char* hardy_report_formula(const hardy_report* report) { return report ? report->report.formula.c_str() : ""; }
const char* hardy_report_regime(const hardy_report* report) { return report ? report->report.regime.c_str() : ""; }

size_t hardy_report_warning_count(const hardy_report* report) { return report ? report->report.warnings.size() : 0; }

const char* hardy_report_warning(const hardy_report* report, size_t i) {
  if (!report || i >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[i].c_str();
}

hardy_status hardy_estimate_constant(const hardy_spec* spec, const hardy_options* opt, hardy_estimate** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new hardy_estimate{hardy::estimate_best_constant(spec->spec, oracle_options(opt))}; });
}

void hardy_estimate_free(hardy_estimate* est) { delete est; }

double hardy_estimate_c_lo(const hardy_estimate* est) { return est ? est->estimate.c_lo : 0.0; }
int hardy_estimate_stable(const hardy_estimate* est) { return est && est->estimate.stable ? 1 : 0; }
int hardy_estimate_unbounded(const hardy_estimate* est) { return est && est->estimate.unbounded ? 1 : 0; }
int hardy_estimate_window_edge(const hardy_estimate* est) { return est && est->estimate.window_edge ? 1 : 0; }

hardy_status hardy_report_json(const hardy_report* report, char** out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup(hardy::io::report_to_json(report->report).dump()); });
}

hardy_status hardy_estimate_json(const hardy_estimate* est, char** out) {
  if (!est) return null_arg("est");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup(hardy::io::estimate_to_json(est->estimate).dump()); });
}

hardy_status hardy_run(const char* config_json, char** output, int* exit_code) {
  if (!config_json) return null_arg("config_json");
  if (!output) return null_arg("output");
  if (!exit_code) return null_arg("exit_code");
  *output = nullptr;
  return guarded([&] {
    const auto cfg = hardy::driver::config_from_json(hardy::io::parse(config_json, "config"));
    const auto res = hardy::driver::run(cfg);
    *exit_code = res.exit_code;
    *output = dup(res.output);
    last_error = res.message;
  });
}

void hardy_string_free(char* s) { std::free(s); }
}
