#ifndef GAUGE_INTEGRALS_H
#define GAUGE_INTEGRALS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The first five equal the command-line exit codes.
typedef enum GiStatus {
  GI_STATUS_OK = 0,
  // Malformed scenario text or option value.
  GI_STATUS_USAGE = 2,
  GI_STATUS_CONVERGENCE = 3,
  GI_STATUS_CHECK_FAILED = 4,
  GI_STATUS_IO = 5,
  // A null pointer or invalid UTF-8 where a string was expected.
  GI_STATUS_INVALID_ARGUMENT = 64,
  // The library panicked; the handle involved should be freed and not reused.
  GI_STATUS_INTERNAL = 65,
} GiStatus;

typedef enum GiFormat {
  GI_FORMAT_TEXT = 0,
  GI_FORMAT_JSON = 1,
  GI_FORMAT_CSV = 2,
} GiFormat;

// The report of one scenario run.
typedef struct GiReport GiReport;

// A parsed scenario.
typedef struct GiScenario GiScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses scenario text into `*out`. On failure `*out` is set to null.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum GiStatus gi_scenario_parse(const char *text, struct GiScenario **out);

// # Safety
// `s` must be null or a handle from [`gi_scenario_parse`] not yet freed.
void gi_scenario_free(struct GiScenario *s);

// Overrides the tolerance; it must be positive and finite.
//
// # Safety
// `s` must be a live scenario handle.
enum GiStatus gi_scenario_set_tol(struct GiScenario *s, double tol);

// Overrides the division depth; it must be at least 1.
//
// # Safety
// `s` must be a live scenario handle.
enum GiStatus gi_scenario_set_depth(struct GiScenario *s, uint32_t depth);

// # Safety
// `s` must be a live scenario handle.
enum GiStatus gi_scenario_set_seed(struct GiScenario *s, uint64_t seed);

// Replaces the modes with a comma-separated list such as `"dm_ext,dm_piece"`.
//
// # Safety
// `s` must be a live scenario handle and `modes` a NUL-terminated string.
enum GiStatus gi_scenario_set_modes(struct GiScenario *s, const char *modes);

// Runs the scenario. A report is produced even when checks fail or
// integrals do not converge; read the outcome with [`gi_report_exit_code`].
//
// # Safety
// `s` must be a live scenario handle and `out` a valid pointer.
enum GiStatus gi_run(const struct GiScenario *s, struct GiReport **out);

// The exit code the command-line tool would return for this report, or
// -1 for a null handle.
//
// # Safety
// `r` must be null or a live report handle.
int32_t gi_report_exit_code(const struct GiReport *r);

// Renders the report into a new string at `*out`, released with
// [`gi_string_free`].
//
// # Safety
// `r` must be a live report handle and `out` a valid pointer.
enum GiStatus gi_report_render(const struct GiReport *r, enum GiFormat format, char **out);

// Shorthand for [`gi_report_render`] with [`GiFormat::Json`].
//
// # Safety
// As for [`gi_report_render`].
enum GiStatus gi_report_json(const struct GiReport *r, char **out);

// # Safety
// `r` must be null or a handle from [`gi_run`] not yet freed.
void gi_report_free(struct GiReport *r);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void gi_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *gi_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUGE_INTEGRALS_H */
