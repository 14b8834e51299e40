// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_REPORT_HPP
#define TICL_REPORT_HPP

#include <string>
#include <vector>

#include "ticl/cdc.hpp"
#include "ticl/msim.hpp"
#include "ticl/skewopt.hpp"
#include "ticl/sta.hpp"

// Deterministic, diffable report rendering. Nanoseconds print with 3
// decimals (half-even), frequencies with 1 decimal, seconds in scientific
// notation. No timestamps.
namespace ticl {

std::string fmt_ns(double ns);
std::string fmt_mhz(double mhz);
std::string fmt_sci(double seconds);
std::string fmt_fixed(double v, int decimals);
std::string json_escape(const std::string &s);

std::string timing_report_text(const std::vector<PathReport> &reports);
std::string timing_report_json(const std::vector<PathReport> &reports);

std::string fmax_report_text(const std::map<std::string, double> &fmax_mhz);
std::string fmax_report_json(const std::map<std::string, double> &fmax_mhz);

struct CdcReportParams {
    double f_data_hz = 1e6;
    // cell -> (tau_ns, tw_ns) actually used for MTBF, printed with every report
    std::vector<std::pair<std::string, std::pair<double, double>>> cell_params;
};

std::string cdc_report_text(const std::vector<Crossing> &crossings,
                            const CdcReportParams &params);
std::string cdc_report_json(const std::vector<Crossing> &crossings,
                            const CdcReportParams &params);

std::string mtbf_report_text(const MtbfParams &p, const MtbfValue &v);
std::string mtbf_report_json(const MtbfParams &p, const MtbfValue &v);

std::string sim_result_json(const SimConfig &cfg, const SimResult &r);
std::string event_log_csv(const std::vector<SimEvent> &events);
std::string depth_trace_csv(const std::vector<DepthTracePoint> &trace);

} // namespace ticl

#endif
