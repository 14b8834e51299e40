// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_CONSTRAINTS_HPP
#define TICL_CONSTRAINTS_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ticl/diag.hpp"
#include "ticl/netlist.hpp"

namespace ticl {

struct ClockDef {
    std::string name;        // equals the source port name
    double period_ns = 0.0;
    std::string source_port;
};

// SDC subset: create_clock, set_input_delay, set_output_delay,
// set_false_path (clock-to-clock), set_multicycle_path (-setup N).
// Duplicate definitions are errors, never last-write-wins.
struct ConstraintSet {
    std::vector<ClockDef> clocks;
    std::map<std::string, std::pair<std::string, double>> input_delays;  // port -> (clock, ns)
    std::map<std::string, std::pair<std::string, double>> output_delays; // port -> (clock, ns)
    std::set<std::pair<std::string, std::string>> false_paths;           // (from clk, to clk)
    std::map<std::pair<std::string, std::string>, int> multicycle;       // (from ff, to ff) -> N

    // Populated by resolve().
    bool resolved = false;
    std::map<std::string, std::string> ff_domain; // ff instance -> clock name
    std::vector<Diagnostic> diagnostics;          // lenient-mode notes

    const ClockDef *find_clock(const std::string &name) const;
    bool is_false_path(const std::string &from_clk, const std::string &to_clk) const
    {
        return false_paths.count({from_clk, to_clk}) != 0;
    }
    int multicycle_n(const std::string &from_ff, const std::string &to_ff) const
    {
        auto it = multicycle.find({from_ff, to_ff});
        return it == multicycle.end() ? 1 : it->second;
    }
};

ConstraintSet parse_sdc(std::string_view text, bool lenient = false);

// Binds every reference to a netlist object and assigns each flip-flop a
// clock domain by tracing its clk net backward through combinational drivers
// to a clock-defined input port. Strict mode throws on flip-flops whose clock
// is unreachable from any defined clock; lenient mode records a diagnostic
// and leaves those ffs domainless (downstream analyses skip them).
ConstraintSet resolve(const ConstraintSet &raw, const Netlist &n, bool lenient = false);

// Total over the netlist's ffs after a strict resolve. Throws for a
// domainless ff (possible only after a lenient resolve).
const std::string &domain_of(const ConstraintSet &cs, const std::string &ff);

// Stable JSON dump of a (raw or resolved) constraint set.
std::string constraints_to_json(const ConstraintSet &cs);

} // namespace ticl

#endif
