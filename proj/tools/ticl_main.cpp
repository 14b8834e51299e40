// SPDX-License-Identifier: Apache-2.0
//
// ticl: batch STA / CDC / metastability analysis front end. Thin shell over
// the C API: reports to stdout, diagnostics to stderr, exit 0 = clean,
// 1 = violations found, 2 = input error.
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "ticl/ticl_c.h"

namespace {

struct NetlistDeleter {
    void operator()(ticl_netlist *p) const { ticl_netlist_free(p); }
};
struct LibraryDeleter {
    void operator()(ticl_library *p) const { ticl_library_free(p); }
};
struct ConstraintsDeleter {
    void operator()(ticl_constraints *p) const { ticl_constraints_free(p); }
};
using NetlistPtr = std::unique_ptr<ticl_netlist, NetlistDeleter>;
using LibraryPtr = std::unique_ptr<ticl_library, LibraryDeleter>;
using ConstraintsPtr = std::unique_ptr<ticl_constraints, ConstraintsDeleter>;

struct CString {
    char *s = nullptr;
    ~CString() { ticl_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

[[noreturn]] void die(const std::string &context)
{
    std::cerr << "ticl: " << context << ": " << ticl_last_error() << "\n";
    std::exit(2);
}

struct DesignInputs {
    std::string netlist_path;
    std::string lib_spec; // fpga | asic | path
    std::string sdc_path;
    bool lenient = false;

    NetlistPtr netlist;
    LibraryPtr library;
    ConstraintsPtr constraints;

    void load()
    {
        ticl_netlist *n = nullptr;
        if (ticl_netlist_load(netlist_path.c_str(), &n) != TICL_OK)
            die(netlist_path);
        netlist.reset(n);

        ticl_library *lib = nullptr;
        if (lib_spec == "fpga" || lib_spec == "asic") {
            if (ticl_library_builtin(lib_spec.c_str(), &lib) != TICL_OK)
                die(lib_spec);
        } else if (ticl_library_load(lib_spec.c_str(), &lib) != TICL_OK) {
            die(lib_spec);
        }
        library.reset(lib);

        CString report;
        int errors = 0;
        if (ticl_netlist_validate(netlist.get(), library.get(), &report.s, &errors) !=
            TICL_OK)
            die(netlist_path);
        if (report.s && report.s[0])
            std::cerr << report.s;
        if (errors > 0)
            std::exit(2);

        ticl_constraints *cs = nullptr;
        if (ticl_constraints_load(sdc_path.c_str(), netlist.get(), lenient ? 1 : 0,
                                  &cs) != TICL_OK)
            die(sdc_path);
        constraints.reset(cs);
    }
};

void add_design_flags(CLI::App *cmd, DesignInputs &in)
{
    cmd->add_option("--netlist", in.netlist_path, "design netlist (.tnl)")->required();
    cmd->add_option("--lib", in.lib_spec, "builtin library (fpga|asic) or .tlib path")
        ->required();
    cmd->add_option("--sdc", in.sdc_path, "timing constraints (.sdc)")->required();
    cmd->add_flag("--lenient", in.lenient,
                  "downgrade unsupported SDC commands and unconstrained clocks "
                  "to warnings");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"gate-level static timing and clock-domain-crossing analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", []() { return std::string(ticl_version()); });

    // report-timing
    DesignInputs rt_in;
    std::string rt_check = "both", rt_format = "text", rt_skew;
    int rt_max_paths = 0;
    double rt_derate = 1.0;
    auto *rt = app.add_subcommand("report-timing", "setup/hold slack report");
    add_design_flags(rt, rt_in);
    rt->add_option("--check", rt_check, "setup|hold|both (default both)")
        ->check(CLI::IsMember({"setup", "hold", "both"}));
    rt->add_option("--max-paths", rt_max_paths, "report only the N worst paths");
    rt->add_option("--format", rt_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    rt->add_option("--derate", rt_derate, "max-delay derate multiplier");
    rt->add_option("--skew", rt_skew,
                   "skew schedule CSV; applies its skews and period");

    // fmax
    DesignInputs fm_in;
    std::string fm_format = "text";
    double fm_derate = 1.0;
    auto *fm = app.add_subcommand("fmax", "maximum clock frequency per clock");
    add_design_flags(fm, fm_in);
    fm->add_option("--format", fm_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    fm->add_option("--derate", fm_derate, "max-delay derate multiplier");

    // cdc
    DesignInputs cdc_in;
    std::string cdc_format = "text";
    double cdc_fdata = 1e6;
    auto *cdc = app.add_subcommand("cdc", "clock-domain-crossing audit with MTBF");
    add_design_flags(cdc, cdc_in);
    cdc->add_option("--format", cdc_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    cdc->add_option("--fdata", cdc_fdata,
                    "async data transition rate in Hz (default 1e6)");

    // mtbf
    double mb_tres = 0.0, mb_tau = 0.0, mb_tw = 0.0, mb_fdata = 0.0, mb_fclock = 0.0;
    std::string mb_format = "text";
    auto *mb = app.add_subcommand("mtbf", "closed-form synchronizer MTBF");
    mb->add_option("--tres", mb_tres, "resolution time budget (s)")->required();
    mb->add_option("--tau", mb_tau, "resolution time constant (s)")->required();
    mb->add_option("--tw", mb_tw, "metastability window (s)")->required();
    mb->add_option("--fdata", mb_fdata, "data transition rate (Hz)")->required();
    mb->add_option("--fclock", mb_fclock, "destination clock rate (Hz)")->required();
    mb->add_option("--format", mb_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // sim-mtbf
    ticl_sim_options sim{};
    sim.seed = 1;
    sim.min_events = 1000;
    sim.max_sim_time_s = 1e12;
    std::string sim_event_log;
    bool sim_adaptive = false;
    int ad_min_depth = 2, ad_max_depth = 5, ad_reliability = 0;
    uint64_t ad_window = 1u << 16, ad_windows = 100;
    auto *sm = app.add_subcommand("sim-mtbf", "Monte Carlo metastability simulation");
    sm->add_option("--tres", sim.t_res_s, "resolution time budget (s)")->required();
    sm->add_option("--tau", sim.tau_s, "resolution time constant (s)")->required();
    sm->add_option("--tw", sim.t_w_s, "metastability window (s)")->required();
    sm->add_option("--fdata", sim.f_data_hz, "data transition rate (Hz)")->required();
    sm->add_option("--fclock", sim.f_clock_hz, "destination clock rate (Hz)")
        ->required();
    sm->add_option("--seed", sim.seed, "RNG seed (default 1)");
    sm->add_option("--min-events", sim.min_events,
                   "metastable events to observe (default 1000)");
    sm->add_option("--max-time", sim.max_sim_time_s,
                   "simulated time cap in seconds (default 1e12)");
    sm->add_option("--event-log", sim_event_log, "write per-event CSV to this file");
    sm->add_flag("--adaptive", sim_adaptive,
                 "simulate the adaptive-depth controller (emits a CSV trace)");
    sm->add_option("--min-depth", ad_min_depth, "adaptive: minimum depth (default 2)");
    sm->add_option("--max-depth", ad_max_depth, "adaptive: maximum depth (default 5)");
    sm->add_option("--reliability", ad_reliability,
                   "adaptive: event threshold per window, 0..7 (default 0)");
    sm->add_option("--window", ad_window,
                   "adaptive: clock cycles per evaluation window (default 65536)");
    sm->add_option("--windows", ad_windows, "adaptive: windows to run (default 100)");

    // skew-opt
    DesignInputs sk_in;
    double sk_bound = -1.0, sk_tol = 0.001;
    auto *sk = app.add_subcommand("skew-opt",
                                  "useful-skew schedule minimizing the clock period");
    add_design_flags(sk, sk_in);
    sk->add_option("--bound", sk_bound,
                   "max skew magnitude in ns (default: one clock period)");
    sk->add_option("--tol", sk_tol, "period search tolerance in ns (default 0.001)");

    // gray
    uint64_t gr_value = 0;
    int gr_width = 0;
    std::string gr_check_file;
    bool gr_to_gray = false, gr_to_bin = false;
    auto *gr = app.add_subcommand("gray", "Gray-code conversion and trace checking");
    gr->add_option("--width", gr_width, "word width in bits")->required();
    auto *opt_tg = gr->add_option("--to-gray", gr_value, "binary value to encode");
    auto *opt_tb = gr->add_option("--to-bin", gr_value, "Gray value to decode");
    auto *opt_cf = gr->add_option("--check-file", gr_check_file,
                                  "trace file, one word per line");
    opt_tg->excludes(opt_tb)->excludes(opt_cf);
    opt_tb->excludes(opt_cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "ticl: " << e.what() << "\n";
        return 2;
    }
    gr_to_gray = opt_tg->count() > 0;
    gr_to_bin = opt_tb->count() > 0;

    if (rt->parsed()) {
        rt_in.load();
        ticl_timing_options opts{};
        opts.check = rt_check == "setup"  ? TICL_CHECK_SETUP
                     : rt_check == "hold" ? TICL_CHECK_HOLD
                                          : TICL_CHECK_BOTH;
        opts.max_paths = rt_max_paths;
        opts.json = rt_format == "json";
        opts.derate = rt_derate;
        opts.skew_csv = rt_skew.empty() ? nullptr : rt_skew.c_str();
        CString report, diags;
        ticl_timing_summary summary{};
        if (ticl_report_timing(rt_in.netlist.get(), rt_in.library.get(),
                               rt_in.constraints.get(), &opts, &report.s, &summary,
                               &diags.s) != TICL_OK)
            die("report-timing");
        if (diags.s && diags.s[0])
            std::cerr << diags.s;
        std::cout << report.s;
        return summary.violations > 0 ? 1 : 0;
    }

    if (fm->parsed()) {
        fm_in.load();
        CString report, diags;
        int clocks = 0;
        if (ticl_fmax(fm_in.netlist.get(), fm_in.library.get(),
                      fm_in.constraints.get(), fm_derate, fm_format == "json",
                      &report.s, &clocks, &diags.s) != TICL_OK)
            die("fmax");
        if (diags.s && diags.s[0])
            std::cerr << diags.s;
        if (clocks == 0) {
            std::cerr << "ticl: fmax: no constrained paths in the design\n";
            return 2;
        }
        std::cout << report.s;
        return 0;
    }

    if (cdc->parsed()) {
        cdc_in.load();
        CString report, diags;
        int unsafe = 0, warnings = 0;
        if (ticl_cdc_report(cdc_in.netlist.get(), cdc_in.library.get(),
                            cdc_in.constraints.get(), cdc_fdata,
                            cdc_format == "json", &report.s, &unsafe, &warnings,
                            &diags.s) != TICL_OK)
            die("cdc");
        if (diags.s && diags.s[0])
            std::cerr << diags.s;
        std::cout << report.s;
        return unsafe > 0 || warnings > 0 ? 1 : 0;
    }

    if (mb->parsed()) {
        CString report;
        if (ticl_mtbf(mb_tres, mb_tau, mb_tw, mb_fdata, mb_fclock,
                      mb_format == "json", &report.s, nullptr, nullptr) != TICL_OK)
            die("mtbf");
        std::cout << report.s;
        return 0;
    }

    if (sm->parsed()) {
        CString out;
        if (sim_adaptive) {
            if (ticl_sim_adaptive(&sim, ad_min_depth, ad_max_depth, ad_reliability,
                                  ad_window, ad_windows, &out.s) != TICL_OK)
                die("sim-mtbf --adaptive");
        } else if (ticl_sim_mtbf(&sim,
                                 sim_event_log.empty() ? nullptr
                                                       : sim_event_log.c_str(),
                                 &out.s) != TICL_OK) {
            die("sim-mtbf");
        }
        std::cout << out.s;
        return 0;
    }

    if (sk->parsed()) {
        sk_in.load();
        CString csv;
        double period = 0.0;
        if (ticl_skew_optimize(sk_in.netlist.get(), sk_in.library.get(),
                               sk_in.constraints.get(), sk_bound, sk_tol, &csv.s,
                               &period) != TICL_OK)
            die("skew-opt");
        std::cout << csv.s;
        return 0;
    }

    if (gr->parsed()) {
        if (gr_to_gray || gr_to_bin) {
            uint64_t out = 0;
            ticl_status st = gr_to_gray ? ticl_gray_encode(gr_value, gr_width, &out)
                                        : ticl_gray_decode(gr_value, gr_width, &out);
            if (st != TICL_OK)
                die("gray");
            std::cout << out << "\n";
            return 0;
        }
        if (!gr_check_file.empty()) {
            int64_t violation = -1;
            if (ticl_gray_check_file(gr_check_file.c_str(), gr_width, &violation) !=
                TICL_OK)
                die("gray --check-file");
            if (violation < 0) {
                std::cout << "ok\n";
                return 0;
            }
            std::cout << "violation at index " << violation << "\n";
            return 1;
        }
        std::cerr << "ticl: gray: one of --to-gray, --to-bin, --check-file required\n";
        return 2;
    }

    return 2;
}
