/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C API for the ticl timing/CDC toolkit. All functions return ticl_status;
 * on any non-OK status, ticl_last_error() carries a message (thread-local,
 * valid until the next ticl call on the same thread). Strings returned
 * through char** are heap-allocated; release them with ticl_string_free().
 * Handles are opaque and single-owner; free with the matching _free().
 */
#ifndef TICL_C_H
#define TICL_C_H

#include <stdint.h>

#if defined(_WIN32)
#define TICL_API __declspec(dllexport)
#else
#define TICL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ticl_status {
    TICL_OK = 0,
    TICL_ERR_INPUT = 1,   /* parse errors, unresolved references, bad files */
    TICL_ERR_INVALID = 2, /* invalid arguments (null handles, bad values) */
    TICL_ERR_INTERNAL = 3
} ticl_status;

typedef struct ticl_netlist ticl_netlist;
typedef struct ticl_library ticl_library;
typedef struct ticl_constraints ticl_constraints;

TICL_API const char *ticl_version(void);
TICL_API const char *ticl_last_error(void);
TICL_API void ticl_string_free(char *s);

/* ---- netlist ---- */
TICL_API ticl_status ticl_netlist_parse(const char *text, ticl_netlist **out);
TICL_API ticl_status ticl_netlist_load(const char *path, ticl_netlist **out);
TICL_API void ticl_netlist_free(ticl_netlist *n);

/* ---- technology library ---- */
TICL_API ticl_status ticl_library_builtin(const char *name, ticl_library **out);
TICL_API ticl_status ticl_library_parse(const char *text, ticl_library **out);
TICL_API ticl_status ticl_library_load(const char *path, ticl_library **out);
TICL_API void ticl_library_free(ticl_library *lib);

/* Structural checks; `report` gets one line per finding (may be empty). */
TICL_API ticl_status ticl_netlist_validate(const ticl_netlist *n,
                                           const ticl_library *lib, char **report,
                                           int *error_count);

/* ---- constraints (parse + bind against a netlist) ---- */
TICL_API ticl_status ticl_constraints_parse(const char *text, const ticl_netlist *n,
                                            int lenient, ticl_constraints **out);
TICL_API ticl_status ticl_constraints_load(const char *path, const ticl_netlist *n,
                                           int lenient, ticl_constraints **out);
TICL_API void ticl_constraints_free(ticl_constraints *cs);
TICL_API ticl_status ticl_constraints_json(const ticl_constraints *cs, char **json);

/* ---- timing analysis ---- */
typedef enum ticl_check {
    TICL_CHECK_SETUP = 0,
    TICL_CHECK_HOLD = 1,
    TICL_CHECK_BOTH = 2
} ticl_check;

typedef struct ticl_timing_options {
    int check;            /* ticl_check */
    int max_paths;        /* 0 = all */
    int json;             /* 0 text, 1 json */
    double derate;        /* max-delay multiplier; 1.0 = none */
    const char *skew_csv; /* optional schedule file path; overrides the clock
                             period with the schedule's and applies its skews */
} ticl_timing_options;

typedef struct ticl_timing_summary {
    double worst_slack_ns;
    int violations;
    int paths;
} ticl_timing_summary;

/* `diagnostics` (nullable) collects analysis warnings, one per line, e.g.
 * unconstrained endpoints whose paths were skipped. */
TICL_API ticl_status ticl_report_timing(const ticl_netlist *n, const ticl_library *lib,
                                        const ticl_constraints *cs,
                                        const ticl_timing_options *opts, char **report,
                                        ticl_timing_summary *summary,
                                        char **diagnostics);

/* Per-clock maximum frequency. `clocks` gets the number of reported clocks. */
TICL_API ticl_status ticl_fmax(const ticl_netlist *n, const ticl_library *lib,
                               const ticl_constraints *cs, double derate, int json,
                               char **report, int *clocks, char **diagnostics);

/* ---- clock domain crossings ---- */
TICL_API ticl_status ticl_cdc_report(const ticl_netlist *n, const ticl_library *lib,
                                     const ticl_constraints *cs, double f_data_hz,
                                     int json, char **report, int *unsafe_count,
                                     int *warning_count, char **diagnostics);

/* ---- MTBF closed form ---- */
TICL_API ticl_status ticl_mtbf(double t_res_s, double tau_s, double t_w_s,
                               double f_data_hz, double f_clock_hz, int json,
                               char **report, double *mtbf_s, double *mtbf_log10);

/* ---- Monte Carlo metastability simulation ---- */
typedef struct ticl_sim_options {
    double t_res_s;
    double tau_s;
    double t_w_s;
    double f_data_hz;
    double f_clock_hz;
    uint64_t seed;
    uint64_t min_events;
    double max_sim_time_s;
} ticl_sim_options;

TICL_API ticl_status ticl_sim_mtbf(const ticl_sim_options *opts,
                                   const char *event_log_path, char **json);

TICL_API ticl_status ticl_sim_adaptive(const ticl_sim_options *opts, int min_depth,
                                       int max_depth, int reliability_mode,
                                       uint64_t window_cycles, uint64_t windows,
                                       char **csv);

/* ---- useful-skew scheduling ----
 * bound_ns < 0 defaults to one clock period. */
TICL_API ticl_status ticl_skew_optimize(const ticl_netlist *n, const ticl_library *lib,
                                        const ticl_constraints *cs, double bound_ns,
                                        double tol_ns, char **schedule_csv,
                                        double *period_ns);

/* ---- Gray code utilities ---- */
TICL_API ticl_status ticl_gray_encode(uint64_t value, int width, uint64_t *out);
TICL_API ticl_status ticl_gray_decode(uint64_t value, int width, uint64_t *out);

/* One word per line (decimal, 0x… hex or 0b… binary). `first_violation`
 * becomes the index of the first non-Gray step, or -1 when the trace is
 * clean. */
TICL_API ticl_status ticl_gray_check_file(const char *path, int width,
                                          int64_t *first_violation);

#ifdef __cplusplus
}
#endif

#endif /* TICL_C_H */
