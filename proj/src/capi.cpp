// SPDX-License-Identifier: Apache-2.0
#include "ticl/ticl_c.h"

#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "ticl/cdc.hpp"
#include "ticl/constraints.hpp"
#include "ticl/msim.hpp"
#include "ticl/netlist.hpp"
#include "ticl/report.hpp"
#include "ticl/skewopt.hpp"
#include "ticl/sta.hpp"
#include "ticl/techlib.hpp"

using namespace ticl;

struct ticl_netlist {
    Netlist n;
};
struct ticl_library {
    Library lib;
};
struct ticl_constraints {
    ConstraintSet cs;
};

namespace {

// slack comparisons share the engine's 1e-9 ns tolerance, so an
// exactly-critical path does not flip the exit code on rounding noise
constexpr double kSlackTol = 1e-9;

thread_local std::string g_error;

ticl_status set_error(ticl_status st, const std::string &msg)
{
    g_error = msg;
    return st;
}

char *dup_string(const std::string &s)
{
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string read_file(const char *path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(std::string("cannot open ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// All API entry points funnel through here so no exception crosses the
// C boundary.
template <typename Fn> ticl_status guarded(Fn &&fn)
{
    try {
        return fn();
    } catch (const Error &e) {
        return set_error(TICL_ERR_INPUT, e.what());
    } catch (const std::exception &e) {
        return set_error(TICL_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(TICL_ERR_INTERNAL, "unknown error");
    }
}

std::string diagnostics_report(const std::vector<Diagnostic> &diags)
{
    std::ostringstream out;
    std::set<std::string> seen; // setup and hold passes repeat endpoint warnings
    for (const auto &d : diags) {
        std::string line =
            std::string(d.severity == Diagnostic::Severity::Error ? "error" : "warning") +
            " " + d.object + ": " + d.message + "\n";
        if (seen.insert(line).second)
            out << line;
    }
    return out.str();
}

} // namespace

extern "C" {

const char *ticl_version(void) { return "0.1.0"; }

const char *ticl_last_error(void) { return g_error.c_str(); }

void ticl_string_free(char *s) { delete[] s; }

ticl_status ticl_netlist_parse(const char *text, ticl_netlist **out)
{
    if (!text || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto *h = new ticl_netlist{parse_netlist(text)};
        *out = h;
        return TICL_OK;
    });
}

ticl_status ticl_netlist_load(const char *path, ticl_netlist **out)
{
    if (!path || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto *h = new ticl_netlist{parse_netlist(read_file(path))};
        *out = h;
        return TICL_OK;
    });
}

void ticl_netlist_free(ticl_netlist *n) { delete n; }

ticl_status ticl_library_builtin(const char *name, ticl_library **out)
{
    if (!name || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        std::string nm(name);
        if (nm == "fpga")
            *out = new ticl_library{builtin_fpga()};
        else if (nm == "asic")
            *out = new ticl_library{builtin_asic()};
        else
            return set_error(TICL_ERR_INVALID, "unknown builtin library " + nm +
                                                   " (expected fpga or asic)");
        return TICL_OK;
    });
}

ticl_status ticl_library_parse(const char *text, ticl_library **out)
{
    if (!text || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = new ticl_library{parse_library(text)};
        return TICL_OK;
    });
}

ticl_status ticl_library_load(const char *path, ticl_library **out)
{
    if (!path || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = new ticl_library{parse_library(read_file(path))};
        return TICL_OK;
    });
}

void ticl_library_free(ticl_library *lib) { delete lib; }

ticl_status ticl_netlist_validate(const ticl_netlist *n, const ticl_library *lib,
                                  char **report, int *error_count)
{
    if (!n || !lib)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto diags = validate(n->n, lib->lib);
        int errors = 0;
        for (const auto &d : diags)
            if (d.severity == Diagnostic::Severity::Error)
                ++errors;
        if (report)
            *report = dup_string(diagnostics_report(diags));
        if (error_count)
            *error_count = errors;
        return TICL_OK;
    });
}

ticl_status ticl_constraints_parse(const char *text, const ticl_netlist *n, int lenient,
                                   ticl_constraints **out)
{
    if (!text || !n || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto raw = parse_sdc(text, lenient != 0);
        *out = new ticl_constraints{resolve(raw, n->n, lenient != 0)};
        return TICL_OK;
    });
}

ticl_status ticl_constraints_load(const char *path, const ticl_netlist *n, int lenient,
                                  ticl_constraints **out)
{
    if (!path || !n || !out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto raw = parse_sdc(read_file(path), lenient != 0);
        *out = new ticl_constraints{resolve(raw, n->n, lenient != 0)};
        return TICL_OK;
    });
}

void ticl_constraints_free(ticl_constraints *cs) { delete cs; }

ticl_status ticl_constraints_json(const ticl_constraints *cs, char **json)
{
    if (!cs || !json)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        *json = dup_string(constraints_to_json(cs->cs));
        return TICL_OK;
    });
}

ticl_status ticl_report_timing(const ticl_netlist *n, const ticl_library *lib,
                               const ticl_constraints *cs,
                               const ticl_timing_options *opts, char **report,
                               ticl_timing_summary *summary, char **diagnostics)
{
    if (!n || !lib || !cs || !opts || !report)
        return set_error(TICL_ERR_INVALID, "null argument");
    if (opts->check < 0 || opts->check > 2)
        return set_error(TICL_ERR_INVALID, "bad check kind");
    return guarded([&] {
        TimingGraph g = build_graph(n->n, lib->lib);
        if (opts->derate != 1.0)
            g = apply_derate(g, opts->derate);

        ConstraintSet bound = cs->cs;
        SkewTable skew;
        if (opts->skew_csv) {
            SkewSchedule sched = schedule_from_csv(read_file(opts->skew_csv));
            if (bound.clocks.size() != 1)
                throw Error("--skew needs a single-clock design");
            bound.clocks[0].period_ns = sched.period_ns;
            skew = sched.to_skew_table();
        }

        std::vector<PathReport> reports;
        std::vector<Diagnostic> diags;
        if (opts->check != TICL_CHECK_HOLD) {
            auto setup = setup_check(g, bound, skew, &diags);
            reports.insert(reports.end(), setup.begin(), setup.end());
        }
        if (opts->check != TICL_CHECK_SETUP) {
            auto hold = hold_check(g, bound, skew, &diags);
            reports.insert(reports.end(), hold.begin(), hold.end());
        }
        if (diagnostics)
            *diagnostics = dup_string(diagnostics_report(diags));
        if (opts->max_paths > 0 && reports.size() > static_cast<size_t>(opts->max_paths))
            reports = top_paths(std::move(reports), static_cast<size_t>(opts->max_paths));

        if (summary) {
            summary->paths = static_cast<int>(reports.size());
            summary->violations = 0;
            summary->worst_slack_ns = 0.0;
            bool any = false;
            for (const auto &r : reports) {
                if (!any || r.slack < summary->worst_slack_ns)
                    summary->worst_slack_ns = r.slack;
                any = true;
                if (r.slack < -kSlackTol)
                    ++summary->violations;
            }
        }
        *report = dup_string(opts->json ? timing_report_json(reports)
                                        : timing_report_text(reports));
        return TICL_OK;
    });
}

ticl_status ticl_fmax(const ticl_netlist *n, const ticl_library *lib,
                      const ticl_constraints *cs, double derate, int json, char **report,
                      int *clocks, char **diagnostics)
{
    if (!n || !lib || !cs || !report)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        TimingGraph g = build_graph(n->n, lib->lib);
        if (derate != 1.0)
            g = apply_derate(g, derate);
        SkewTable zero;
        std::vector<Diagnostic> diags;
        auto result = fmax(g, cs->cs, zero, &diags);
        if (clocks)
            *clocks = static_cast<int>(result.size());
        if (diagnostics)
            *diagnostics = dup_string(diagnostics_report(diags));
        *report = dup_string(json ? fmax_report_json(result) : fmax_report_text(result));
        return TICL_OK;
    });
}

ticl_status ticl_cdc_report(const ticl_netlist *n, const ticl_library *lib,
                            const ticl_constraints *cs, double f_data_hz, int json,
                            char **report, int *unsafe_count, int *warning_count,
                            char **diagnostics)
{
    if (!n || !lib || !cs || !report)
        return set_error(TICL_ERR_INVALID, "null argument");
    if (!(f_data_hz > 0.0))
        return set_error(TICL_ERR_INVALID, "f_data must be positive");
    return guarded([&] {
        std::vector<Diagnostic> diags;
        auto crossings = find_crossings(n->n, lib->lib, cs->cs, &diags);

        CdcReportParams params;
        params.f_data_hz = f_data_hz;
        std::set<std::string> cells_used;
        int unsafe = 0, warnings = 0;
        for (auto &c : crossings) {
            if (c.cls == CrossingClass::TwoFlopChain || c.cls == CrossingClass::GrayBus) {
                const FfInst *entry = n->n.find_ff(c.dst_entry_ffs.front());
                const CellSpec &cell = lib->lib.at(entry->cell);
                if (cell.tau && cell.tw) {
                    c.mtbf = crossing_mtbf(c, n->n, lib->lib, cs->cs, f_data_hz);
                    if (cells_used.insert(entry->cell).second)
                        params.cell_params.push_back(
                            {entry->cell, {*cell.tau, *cell.tw}});
                } else {
                    c.notes.push_back("library lacks metastability parameters "
                                      "(tau/tw) for cell " +
                                      entry->cell);
                }
            }
            bool safe = c.cls == CrossingClass::TwoFlopChain ||
                        c.cls == CrossingClass::GrayBus ||
                        c.cls == CrossingClass::Handshake;
            if (!safe)
                ++unsafe;
            if (c.coherency_risk)
                ++warnings;
        }
        if (unsafe_count)
            *unsafe_count = unsafe;
        if (warning_count)
            *warning_count = warnings;
        if (diagnostics)
            *diagnostics = dup_string(diagnostics_report(diags));
        *report = dup_string(json ? cdc_report_json(crossings, params)
                                  : cdc_report_text(crossings, params));
        return TICL_OK;
    });
}

ticl_status ticl_mtbf(double t_res_s, double tau_s, double t_w_s, double f_data_hz,
                      double f_clock_hz, int json, char **report, double *mtbf_s,
                      double *mtbf_log10)
{
    return guarded([&] {
        MtbfParams p{t_res_s, tau_s, f_data_hz, f_clock_hz, t_w_s};
        MtbfValue v = mtbf(p);
        if (mtbf_s)
            *mtbf_s = v.seconds;
        if (mtbf_log10)
            *mtbf_log10 = v.log10_seconds;
        if (report)
            *report = dup_string(json ? mtbf_report_json(p, v) : mtbf_report_text(p, v));
        return TICL_OK;
    });
}

ticl_status ticl_sim_mtbf(const ticl_sim_options *opts, const char *event_log_path,
                          char **json)
{
    if (!opts || !json)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        SimConfig cfg;
        cfg.params = {opts->t_res_s, opts->tau_s, opts->f_data_hz, opts->f_clock_hz,
                      opts->t_w_s};
        cfg.seed = opts->seed;
        cfg.min_events = opts->min_events;
        cfg.max_sim_time_s = opts->max_sim_time_s;

        std::vector<SimEvent> log;
        SimResult r = simulate_mtbf(cfg, event_log_path ? &log : nullptr);
        if (event_log_path) {
            std::ofstream out(event_log_path, std::ios::binary);
            if (!out)
                throw Error(std::string("cannot write ") + event_log_path);
            out << event_log_csv(log);
        }
        *json = dup_string(sim_result_json(cfg, r));
        return TICL_OK;
    });
}

ticl_status ticl_sim_adaptive(const ticl_sim_options *opts, int min_depth, int max_depth,
                              int reliability_mode, uint64_t window_cycles,
                              uint64_t windows, char **csv)
{
    if (!opts || !csv)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        SimConfig cfg;
        cfg.params = {opts->t_res_s, opts->tau_s, opts->f_data_hz, opts->f_clock_hz,
                      opts->t_w_s};
        cfg.seed = opts->seed;
        cfg.min_events = opts->min_events;
        cfg.max_sim_time_s = opts->max_sim_time_s;
        AdaptivePolicy policy{min_depth, max_depth, reliability_mode, window_cycles};
        auto trace = simulate_adaptive_depth(policy, cfg, windows);
        *csv = dup_string(depth_trace_csv(trace));
        return TICL_OK;
    });
}

ticl_status ticl_skew_optimize(const ticl_netlist *n, const ticl_library *lib,
                               const ticl_constraints *cs, double bound_ns,
                               double tol_ns, char **schedule_csv, double *period_ns)
{
    if (!n || !lib || !cs || !schedule_csv)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        TimingGraph g = build_graph(n->n, lib->lib);
        double bound = bound_ns;
        if (bound < 0.0) {
            if (cs->cs.clocks.size() != 1)
                throw Error("skew: default bound needs a single-clock design");
            bound = cs->cs.clocks[0].period_ns;
        }
        auto [period, sched] = optimize_period(g, cs->cs, bound, tol_ns);
        if (period_ns)
            *period_ns = period;
        *schedule_csv = dup_string(schedule_to_csv(sched));
        return TICL_OK;
    });
}

ticl_status ticl_gray_encode(uint64_t value, int width, uint64_t *out)
{
    if (!out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = bin_to_gray(value, width);
        return TICL_OK;
    });
}

ticl_status ticl_gray_decode(uint64_t value, int width, uint64_t *out)
{
    if (!out)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        *out = gray_to_bin(value, width);
        return TICL_OK;
    });
}

ticl_status ticl_gray_check_file(const char *path, int width, int64_t *first_violation)
{
    if (!path || !first_violation)
        return set_error(TICL_ERR_INVALID, "null argument");
    return guarded([&] {
        std::istringstream in(read_file(path));
        std::vector<uint64_t> words;
        std::string tok;
        int lineno = 0;
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            if (!(ls >> tok))
                continue;
            std::string extra;
            if (ls >> extra)
                throw Error("trace line " + std::to_string(lineno) +
                            ": one word per line");
            int base = 10;
            std::string digits = tok;
            if (tok.rfind("0x", 0) == 0 || tok.rfind("0X", 0) == 0) {
                base = 16;
                digits = tok.substr(2);
            } else if (tok.rfind("0b", 0) == 0 || tok.rfind("0B", 0) == 0) {
                base = 2;
                digits = tok.substr(2);
            }
            uint64_t v = 0;
            auto [p, ec] =
                std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
            if (ec != std::errc() || p != digits.data() + digits.size())
                throw Error("trace line " + std::to_string(lineno) + ": bad word '" +
                            tok + "'");
            words.push_back(v);
        }
        auto violation = check_gray_sequence(words, width);
        *first_violation = violation ? static_cast<int64_t>(*violation) : -1;
        return TICL_OK;
    });
}

} // extern "C"
