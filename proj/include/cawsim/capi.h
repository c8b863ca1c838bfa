/* cawsim C API: carbon-aware workflow simulation behind opaque handles.
 *
 * All functions return CAW_OK (0) on success. On failure they return a
 * nonzero status and leave a message in caw_last_error() (thread-local).
 * Strings returned through char** are heap-allocated; release them with
 * caw_string_free(). Handles are released with their *_free() function.
 */
#ifndef CAWSIM_CAPI_H
#define CAWSIM_CAPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CAWSIM_API __declspec(dllexport)
#else
#define CAWSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum caw_status {
    CAW_OK = 0,
    CAW_ERR_IO = 1,
    CAW_ERR_BAD_FORMAT = 2,
    CAW_ERR_MISSING_COLUMN = 3,
    CAW_ERR_UNPARSEABLE_VALUE = 4,
    CAW_ERR_EMPTY_TRACE = 5,
    CAW_ERR_UNKNOWN_NODE = 6,
    CAW_ERR_UNKNOWN_GOVERNOR = 7,
    CAW_ERR_NEGATIVE_INTENSITY = 8,
    CAW_ERR_GAP_DETECTED = 9,
    CAW_ERR_OUT_OF_RANGE = 10,
    CAW_ERR_INFEASIBLE_WINDOW = 11,
    CAW_ERR_MISSING_VARIANT_TRACE = 12,
    CAW_ERR_INVALID_ARGUMENT = 13,
    CAW_ERR_INTERNAL = 14
} caw_status;

typedef struct caw_catalog caw_catalog; /* node catalog (power curves, LCA) */
typedef struct caw_trace caw_trace;     /* workflow execution trace */
typedef struct caw_series caw_series;   /* carbon-intensity time series */

CAWSIM_API const char* caw_status_name(caw_status status);

/* Message of the most recent failure on this thread. */
CAWSIM_API const char* caw_last_error(void);

/* Warnings emitted by the most recent call on this thread, as a JSON array
 * of strings. Returns NULL when there were none. Caller frees. */
CAWSIM_API char* caw_take_warnings_json(void);

CAWSIM_API void caw_string_free(char* s);

/* ---- node catalog ------------------------------------------------------ */

CAWSIM_API caw_status caw_catalog_load(const char* path, caw_catalog** out);
CAWSIM_API void caw_catalog_free(caw_catalog* catalog);

/* ---- workflow traces --------------------------------------------------- */

/* options_json (may be NULL): {"workflow_name": "...", "cluster":
 * "atlantis x8", "region": "DE", "default_node": "atlantis"}.
 * Accepts .tsv (Nextflow-style) and .json (canonical serialization). */
CAWSIM_API caw_status caw_trace_load(const char* path, const caw_catalog* catalog,
                                     const char* options_json, caw_trace** out);
CAWSIM_API void caw_trace_free(caw_trace* trace);
CAWSIM_API caw_status caw_trace_to_json(const caw_trace* trace, char** out_json);
CAWSIM_API caw_status caw_trace_stats(const caw_trace* trace, size_t* task_count,
                                      double* makespan_s, int64_t* origin_start_utc_ms);
CAWSIM_API caw_status caw_trace_region(const caw_trace* trace, char** out_region);

/* ---- carbon-intensity series ------------------------------------------- */

/* kind: "average" | "marginal". fill_gaps != 0 forward-fills missing
 * intervals (with a warning); otherwise gaps fail integration. */
CAWSIM_API caw_status caw_series_load(const char* path, const char* region, const char* kind,
                                      int fill_gaps, caw_series** out);
CAWSIM_API void caw_series_free(caw_series* series);
CAWSIM_API caw_status caw_series_resample_hourly(const caw_series* series, caw_series** out);
CAWSIM_API caw_status caw_series_value_at(const caw_series* series, int64_t utc_ms,
                                          double* out_ci);
CAWSIM_API caw_status caw_series_integrate(const caw_series* series, int64_t start_utc_ms,
                                           int64_t end_utc_ms, double power_kw, double* out_g);

CAWSIM_API caw_status caw_parse_timestamp(const char* text, int64_t* out_utc_ms);

/* 9AM-local-style anchor: hour_local on the second Monday of (year, month),
 * converted to UTC with a fixed offset (DST deliberately ignored). */
CAWSIM_API caw_status caw_anchor_second_monday(int year, int month, int hour_local,
                                               int utc_offset_minutes, int64_t* out_utc_ms);

/* ---- analyses ----------------------------------------------------------
 * Results come back as JSON documents with a "type" discriminant; render
 * them with caw_render(). */

CAWSIM_API caw_status caw_run_footprint(const caw_trace* trace, const caw_catalog* catalog,
                                        const char* governor, const caw_series* average,
                                        const caw_series* marginal, char** out_json);

/* mode: "entire" | "interrupted". options_json (may be NULL):
 * {"overhead_spillover_only": false, "charge_idle": true}. */
CAWSIM_API caw_status caw_run_shift(const caw_trace* trace, const caw_catalog* catalog,
                                    const char* governor, const caw_series* series,
                                    const char* mode, int64_t anchor_utc_ms, int window_hours,
                                    const char* options_json, char** out_json);

/* 12-month x window-length reduction grid, both modes. options_json (may be
 * NULL): {"utc_offset_minutes": 0, "anchor_hour_local": 9, "threads": 0,
 * "overhead_spillover_only": false, "charge_idle": true}. threads == 0 uses
 * all cores, 1 forces serial evaluation; results are identical either way. */
CAWSIM_API caw_status caw_run_sweep(const caw_trace* trace, const caw_catalog* catalog,
                                    const char* governor, const caw_series* series, int year,
                                    const int* window_hours, size_t n_windows,
                                    const char* options_json, char** out_json);

/* options_json: {"candidates": ["sherwood", ...], "policy": {"year": 2024,
 * "utc_offset_minutes": 0, "first_hour_local": 9, "hour_step": 2,
 * "hour_overrides": {"fastqc": 13}, "fixed_start_utc_ms": null}}. */
CAWSIM_API caw_status caw_run_scale_nodes(const caw_trace* measurements,
                                          const caw_catalog* catalog, const char* governor,
                                          const caw_series* const* series,
                                          const char* const* labels, size_t n_series,
                                          const char* options_json, char** out_json);

/* options_json: {"governors": [{"name": "performance"},
 * {"name": "powersave", "runtime_multiplier": 2.58}]}. governor_traces may
 * be NULL, or an array parallel to "governors" whose non-NULL entries are
 * measured per-governor traces overriding the multiplier. */
CAWSIM_API caw_status caw_run_scale_governors(const caw_trace* base, const caw_catalog* catalog,
                                              const caw_series* const* series,
                                              const char* const* labels, size_t n_series,
                                              const char* options_json,
                                              const caw_trace* const* governor_traces,
                                              char** out_json);

CAWSIM_API caw_status caw_run_scale_cluster(const caw_trace* const* traces, size_t n_traces,
                                            const caw_catalog* catalog, const char* governor,
                                            const caw_series* const* series,
                                            const char* const* labels, size_t n_series,
                                            char** out_json);

/* ---- output ------------------------------------------------------------ */

/* format: "json", "csv", "csv:entire", "csv:interrupted", "reserved_csv",
 * "heatmap_json", "bars_json" (availability depends on the result type). */
CAWSIM_API caw_status caw_render(const char* result_json, const char* format, char** out_text);
CAWSIM_API caw_status caw_write_file(const char* path, const char* content);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CAWSIM_CAPI_H */
