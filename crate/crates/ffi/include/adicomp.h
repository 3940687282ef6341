#ifndef ADICOMP_H
#define ADICOMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum AdicompStatus {
  ADICOMP_STATUS_OK = 0,
  ADICOMP_STATUS_NULL_POINTER = 1,
  ADICOMP_STATUS_INVALID_UTF8 = 2,
  ADICOMP_STATUS_PARSE_ERROR = 3,
  // The run finished but at least one task failed with an error; the
  // report is still produced.
  ADICOMP_STATUS_RUN_ERROR = 4,
  ADICOMP_STATUS_UNKNOWN_GALLERY = 5,
  ADICOMP_STATUS_PANIC = 6,
} AdicompStatus;

// A finished run.
typedef struct AdicompReport AdicompReport;

// A parsed scenario.
typedef struct AdicompScenario AdicompScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses scenario text. On success `*out` receives a new handle.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum AdicompStatus adicomp_scenario_parse(const char *text, struct AdicompScenario **out);

// Loads a shipped scenario by name.
//
// # Safety
// `name` must be a nul-terminated string and `out` a valid pointer.
enum AdicompStatus adicomp_gallery_load(const char *name, struct AdicompScenario **out);

// Runs a scenario. `depth` of 0 keeps each task's own depth. `*out`
// receives the report also when the status is `RunError`.
//
// # Safety
// `scenario` must come from this library and `out` must be valid.
enum AdicompStatus adicomp_run(const struct AdicompScenario *scenario,
                               uint32_t depth,
                               bool strict,
                               struct AdicompReport **out);

// The report as JSON, or null on a null handle.
//
// # Safety
// `report` must come from `adicomp_run` or be null.
char *adicomp_report_json(const struct AdicompReport *report);

// The report as aligned text, or null on a null handle.
//
// # Safety
// `report` must come from `adicomp_run` or be null.
char *adicomp_report_text(const struct AdicompReport *report);

// 1 if any theorem check flagged a discrepancy, 0 if not, -1 on null.
//
// # Safety
// `report` must come from `adicomp_run` or be null.
int32_t adicomp_report_has_discrepancy(const struct AdicompReport *report);

// Number of task results in the report; 0 on null.
//
// # Safety
// `report` must come from `adicomp_run` or be null.
size_t adicomp_report_task_count(const struct AdicompReport *report);

// The exit code the command-line tool would use: 0, 1 or 2. -1 on null.
//
// # Safety
// `report` must come from `adicomp_run` or be null.
int32_t adicomp_report_exit_code(const struct AdicompReport *report, bool strict);

// # Safety
// `s` must come from this library or be null; it must not be used afterwards.
void adicomp_string_free(char *s);

// # Safety
// `scenario` must come from this library or be null.
void adicomp_scenario_free(struct AdicompScenario *scenario);

// # Safety
// `report` must come from this library or be null.
void adicomp_report_free(struct AdicompReport *report);

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library from the same thread.
const char *adicomp_last_error_message(void);

// Library version, a static string.
const char *adicomp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADICOMP_H */
