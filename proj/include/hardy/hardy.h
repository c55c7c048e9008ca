#ifndef HARDY_H
#define HARDY_H

#include <stddef.h>
#include <stdint.h>

#if defined(HARDY_BUILDING_LIBRARY)
#define HARDY_API __attribute__((visibility("default")))
#else
#define HARDY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hardy_status {
  HARDY_OK = 0,
  HARDY_EINVAL = 1,      /* malformed input or bad argument */
  HARDY_EDOMAIN = 2,     /* arguments outside the domain of the operation */
  HARDY_ENUMERIC = 3,    /* quadrature or optimizer failure */
  HARDY_EDEGENERATE = 4, /* degenerate weight or quasiconcave function */
  HARDY_EINTERNAL = 5
} hardy_status;

typedef struct hardy_spec hardy_spec;
typedef struct hardy_report hardy_report;
typedef struct hardy_estimate hardy_estimate;

typedef struct hardy_options {
  double window_lo;
  double window_hi;
  int grid_points; /* scan points of the condition functionals */
  int atoms;       /* oracle grid points at level 0 */
  int levels;
  uint64_t seed;
} hardy_options;

HARDY_API const char* hardy_version(void);
HARDY_API void hardy_options_default(hardy_options* opt);

/* Message of the last failed call on this thread, "" if none. */
HARDY_API const char* hardy_last_error(void);

/* Parse a spec document such as
   {"inequality":"3.1","p":0.5,"q":1,"u":{...},"v":{...},"w":{...}}. */
HARDY_API hardy_status hardy_spec_parse(const char* json, hardy_spec** out);
HARDY_API void hardy_spec_free(hardy_spec* spec);

HARDY_API hardy_status hardy_condition(const hardy_spec* spec, const hardy_options* opt, hardy_report** out);
HARDY_API void hardy_report_free(hardy_report* report);
HARDY_API double hardy_report_value(const hardy_report* report);
HARDY_API double hardy_report_error_est(const hardy_report* report);
HARDY_API const char* hardy_report_formula(const hardy_report* report);
HARDY_API const char* hardy_report_regime(const hardy_report* report);
HARDY_API size_t hardy_report_warning_count(const hardy_report* report);
HARDY_API const char* hardy_report_warning(const hardy_report* report, size_t i);

HARDY_API hardy_status hardy_estimate_constant(const hardy_spec* spec, const hardy_options* opt,
                                               hardy_estimate** out);
HARDY_API void hardy_estimate_free(hardy_estimate* est);
HARDY_API double hardy_estimate_c_lo(const hardy_estimate* est);
HARDY_API int hardy_estimate_stable(const hardy_estimate* est);
HARDY_API int hardy_estimate_unbounded(const hardy_estimate* est);
/* 1 when the maximizer carries mass next to the window boundary. */
HARDY_API int hardy_estimate_window_edge(const hardy_estimate* est);

/* JSON renderings; free with hardy_string_free. */
HARDY_API hardy_status hardy_report_json(const hardy_report* report, char** out);
HARDY_API hardy_status hardy_estimate_json(const hardy_estimate* est, char** out);

/* Run a CLI command.  config_json holds the run configuration, with the spec
   inline under "spec" or on disk under "spec_path".  On HARDY_OK *exit_code is
   the command's exit code (0, 1 or 2) and *output its output. */
HARDY_API hardy_status hardy_run(const char* config_json, char** output, int* exit_code);

HARDY_API void hardy_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
