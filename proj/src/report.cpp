// SPDX-License-Identifier: Apache-2.0
#include "ticl/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ticl {

std::string fmt_fixed(double v, int decimals)
{
    // round half-even at the requested precision, then print
    double scale = std::pow(10.0, decimals);
    double r = std::nearbyint(v * scale) / scale;
    if (r == 0.0)
        r = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

std::string fmt_ns(double ns) { return fmt_fixed(ns, 3); }
std::string fmt_mhz(double mhz) { return fmt_fixed(mhz, 1); }

std::string fmt_sci(double seconds)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", seconds);
    return buf;
}

std::string json_escape(const std::string &s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

namespace {

const char *check_name(CheckKind k)
{
    return k == CheckKind::Setup ? "setup" : "hold";
}

} // namespace

std::string timing_report_text(const std::vector<PathReport> &reports)
{
    std::ostringstream out;
    double worst = 0.0;
    bool any = false;
    for (const auto &r : reports) {
        if (!any || r.slack < worst)
            worst = r.slack;
        any = true;
    }
    out << "paths " << reports.size();
    if (any)
        out << "  worst slack " << fmt_ns(worst);
    out << "\n";
    size_t i = 0;
    for (const auto &r : reports) {
        out << "\npath " << ++i << ": " << check_name(r.check) << "  clock " << r.clock
            << "  slack " << fmt_ns(r.slack) << "\n";
        out << "  launch  " << r.launch << (r.launch_is_port ? " (port)" : "") << "\n";
        out << "  capture " << r.capture << (r.capture_is_port ? " (port)" : "") << "\n";
        if (r.multicycle != 1)
            out << "  multicycle " << r.multicycle << "\n";
        for (const auto &s : r.segments)
            out << "    " << s.label << std::string(12 - std::min<size_t>(11, s.label.size()), ' ')
                << fmt_ns(s.ns) << "\n";
        out << "  arrival  " << fmt_ns(r.arrival) << "\n";
        out << "  required " << fmt_ns(r.required) << "\n";
        out << "  slack    " << fmt_ns(r.slack) << "\n";
    }
    return out.str();
}

namespace {

void path_json(std::ostringstream &out, const PathReport &r, const char *indent)
{
    out << indent << "{\"clock\": \"" << json_escape(r.clock) << "\", \"check\": \""
        << check_name(r.check) << "\", \"launch\": \"" << json_escape(r.launch)
        << "\", \"capture\": \"" << json_escape(r.capture)
        << "\", \"multicycle\": " << r.multicycle << ", \"segments\": [";
    for (size_t i = 0; i < r.segments.size(); ++i) {
        out << (i ? ", " : "") << "{\"label\": \"" << r.segments[i].label
            << "\", \"ns\": " << fmt_ns(r.segments[i].ns) << "}";
    }
    out << "], \"arrival\": " << fmt_ns(r.arrival)
        << ", \"required\": " << fmt_ns(r.required)
        << ", \"slack\": " << fmt_ns(r.slack) << "}";
}

} // namespace

std::string timing_report_json(const std::vector<PathReport> &reports)
{
    std::ostringstream out;
    out << "{\n  \"paths\": [";
    for (size_t i = 0; i < reports.size(); ++i) {
        out << (i ? "," : "") << "\n";
        path_json(out, reports[i], "    ");
    }
    out << (reports.empty() ? "" : "\n  ") << "]\n}\n";
    return out.str();
}

std::string fmax_report_text(const std::map<std::string, double> &fmax_mhz)
{
    std::ostringstream out;
    for (const auto &[clk, mhz] : fmax_mhz)
        out << clk << " " << fmt_mhz(mhz) << " MHz\n";
    return out.str();
}

std::string fmax_report_json(const std::map<std::string, double> &fmax_mhz)
{
    std::ostringstream out;
    out << "{\n  \"fmax_mhz\": {";
    bool first = true;
    for (const auto &[clk, mhz] : fmax_mhz) {
        out << (first ? "" : ",") << "\n    \"" << json_escape(clk)
            << "\": " << fmt_mhz(mhz);
        first = false;
    }
    out << (first ? "" : "\n  ") << "}\n}\n";
    return out.str();
}

namespace {

bool is_safe(const Crossing &c)
{
    return c.cls == CrossingClass::TwoFlopChain || c.cls == CrossingClass::GrayBus ||
           c.cls == CrossingClass::Handshake;
}

} // namespace

std::string cdc_report_text(const std::vector<Crossing> &crossings,
                            const CdcReportParams &params)
{
    std::ostringstream out;
    out << "crossings " << crossings.size() << "  f_data " << fmt_sci(params.f_data_hz)
        << " Hz\n";
    for (const auto &c : crossings) {
        out << "\n" << c.signal << ": " << c.src_domain << " -> " << c.dst_domain
            << "  " << to_string(c.cls);
        if (c.depth > 0 && (c.cls == CrossingClass::TwoFlopChain ||
                            c.cls == CrossingClass::GrayBus ||
                            c.cls == CrossingClass::Handshake))
            out << "  depth " << c.depth;
        if (c.width > 0)
            out << "  width " << c.width;
        out << (is_safe(c) ? "" : "  [unsafe]") << "\n";
        out << "  entry:";
        for (const auto &ff : c.dst_entry_ffs)
            out << " " << ff;
        out << "\n";
        if (c.mtbf)
            out << "  mtbf " << fmt_sci(c.mtbf->seconds) << " s  (log10 "
                << fmt_fixed(c.mtbf->log10_seconds, 3)
                << (c.mtbf->saturated ? ", saturated)" : ")") << "\n";
        for (const auto &note : c.notes)
            out << "  note: " << note << "\n";
    }
    if (!params.cell_params.empty()) {
        out << "\nmtbf parameters:\n";
        for (const auto &[cell, tt] : params.cell_params)
            out << "  " << cell << " tau " << fmt_ns(tt.first) << " ns, tw "
                << fmt_ns(tt.second) << " ns\n";
    }
    return out.str();
}

std::string cdc_report_json(const std::vector<Crossing> &crossings,
                            const CdcReportParams &params)
{
    std::ostringstream out;
    out << "{\n  \"f_data_hz\": " << fmt_sci(params.f_data_hz) << ",\n  \"crossings\": [";
    for (size_t i = 0; i < crossings.size(); ++i) {
        const auto &c = crossings[i];
        out << (i ? "," : "") << "\n    {\"signal\": \"" << json_escape(c.signal)
            << "\", \"src_clock\": \"" << json_escape(c.src_domain)
            << "\", \"dst_clock\": \"" << json_escape(c.dst_domain) << "\", \"class\": \""
            << to_string(c.cls) << "\", \"depth\": ";
        if (c.depth > 0)
            out << c.depth;
        else
            out << "null";
        out << ", \"width\": ";
        if (c.width > 0)
            out << c.width;
        else
            out << "null";
        out << ", \"mtbf_s\": ";
        if (c.mtbf)
            out << fmt_sci(c.mtbf->seconds);
        else
            out << "null";
        out << ", \"mtbf_log10\": ";
        if (c.mtbf)
            out << fmt_fixed(c.mtbf->log10_seconds, 3);
        else
            out << "null";
        out << "}";
    }
    out << (crossings.empty() ? "" : "\n  ") << "],\n  \"mtbf_params\": [";
    for (size_t i = 0; i < params.cell_params.size(); ++i) {
        const auto &[cell, tt] = params.cell_params[i];
        out << (i ? "," : "") << "\n    {\"cell\": \"" << json_escape(cell)
            << "\", \"tau_ns\": " << fmt_ns(tt.first)
            << ", \"tw_ns\": " << fmt_ns(tt.second) << "}";
    }
    out << (params.cell_params.empty() ? "" : "\n  ") << "]\n}\n";
    return out.str();
}

std::string mtbf_report_text(const MtbfParams &p, const MtbfValue &v)
{
    std::ostringstream out;
    out << "mtbf " << fmt_sci(v.seconds) << " s  (log10 "
        << fmt_fixed(v.log10_seconds, 3) << (v.saturated ? ", saturated" : "") << ")\n";
    out << "  t_res " << fmt_sci(p.t_res_s) << " s, tau " << fmt_sci(p.tau_s)
        << " s, tw " << fmt_sci(p.t_w_s) << " s, f_data " << fmt_sci(p.f_data_hz)
        << " Hz, f_clock " << fmt_sci(p.f_clock_hz) << " Hz\n";
    return out.str();
}

std::string mtbf_report_json(const MtbfParams &p, const MtbfValue &v)
{
    std::ostringstream out;
    out << "{\n  \"mtbf_s\": " << fmt_sci(v.seconds)
        << ",\n  \"mtbf_log10\": " << fmt_fixed(v.log10_seconds, 3)
        << ",\n  \"saturated\": " << (v.saturated ? "true" : "false")
        << ",\n  \"params\": {\"t_res_s\": " << fmt_sci(p.t_res_s)
        << ", \"tau_s\": " << fmt_sci(p.tau_s) << ", \"t_w_s\": " << fmt_sci(p.t_w_s)
        << ", \"f_data_hz\": " << fmt_sci(p.f_data_hz)
        << ", \"f_clock_hz\": " << fmt_sci(p.f_clock_hz) << "}\n}\n";
    return out.str();
}

std::string sim_result_json(const SimConfig &cfg, const SimResult &r)
{
    std::ostringstream out;
    out << "{\n  \"events\": " << r.events << ",\n  \"failures\": " << r.failures
        << ",\n  \"sim_time_s\": " << fmt_sci(r.sim_time_s) << ",\n  \"empirical_mtbf_s\": ";
    if (r.failures > 0)
        out << fmt_sci(r.empirical_mtbf_s);
    else
        out << "null";
    out << ",\n  \"ci95_low_s\": " << fmt_sci(r.ci_low_s) << ",\n  \"ci95_high_s\": ";
    if (r.ci_one_sided)
        out << "null";
    else
        out << fmt_sci(r.ci_high_s);
    out << ",\n  \"seed\": " << cfg.seed << ",\n  \"params\": {\"t_res_s\": "
        << fmt_sci(cfg.params.t_res_s) << ", \"tau_s\": " << fmt_sci(cfg.params.tau_s)
        << ", \"t_w_s\": " << fmt_sci(cfg.params.t_w_s)
        << ", \"f_data_hz\": " << fmt_sci(cfg.params.f_data_hz)
        << ", \"f_clock_hz\": " << fmt_sci(cfg.params.f_clock_hz) << "}\n}\n";
    return out.str();
}

std::string event_log_csv(const std::vector<SimEvent> &events)
{
    std::ostringstream out;
    out << "event_time_s,resolved_s,failed\n";
    for (const auto &e : events)
        out << fmt_sci(e.time_s) << "," << fmt_sci(e.resolved_s) << ","
            << (e.failed ? 1 : 0) << "\n";
    return out.str();
}

std::string depth_trace_csv(const std::vector<DepthTracePoint> &trace)
{
    std::ostringstream out;
    out << "window,depth,events\n";
    for (const auto &t : trace)
        out << t.window << "," << t.depth << "," << t.events << "\n";
    return out.str();
}

} // namespace ticl
