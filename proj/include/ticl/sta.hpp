// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_STA_HPP
#define TICL_STA_HPP

#include <map>
#include <string>
#include <vector>

#include "ticl/constraints.hpp"
#include "ticl/netlist.hpp"
#include "ticl/techlib.hpp"

namespace ticl {

// Pin-level timing graph. Gate input pins are merged into one node per gate;
// the clock-to-Q delay is an explicit arc from a per-ff launch node, so every
// data path is an alternating sequence of cell and net arcs. Capture
// requirements (setup/hold) are cached per ff so checks need no library.
struct TimingGraph {
    enum class NodeKind { InPort, OutPort, FfLaunch, FfQ, FfD, GateIn, GateOut };
    enum class ArcKind { Cell, Net };

    struct Node {
        NodeKind kind;
        std::string name; // "r1.launch", "r1.q", "g2.in", "din", ...
        int inst = -1;    // index into ffs/gates/ports, by kind
    };
    struct Arc {
        int from = -1;
        int to = -1;
        double delay_min = 0.0;
        double delay_max = 0.0;
        ArcKind kind = ArcKind::Net;
    };

    std::vector<Node> nodes;
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> in_arcs;  // per node, arc indices
    std::vector<std::vector<int>> out_arcs;
    std::vector<int> topo; // node indices in topological order

    std::map<std::string, int> ff_launch, ff_q, ff_d; // ff name -> node
    std::map<std::string, int> in_port, out_port;     // port name -> node
    std::map<std::string, double> ff_setup, ff_hold;  // capture requirements (ns)
};

// Per-register clock arrival offsets (ns). Anything absent is 0.
struct SkewTable {
    std::map<std::string, double> skews;
    double at(const std::string &ff) const
    {
        auto it = skews.find(ff);
        return it == skews.end() ? 0.0 : it->second;
    }
};

enum class CheckKind { Setup, Hold };

struct PathSegment {
    std::string label; // clock_to_q | logic | routing | input_delay
    double ns = 0.0;
};

// One launch/capture endpoint pair, decomposed along its worst path.
// Sign convention: negative slack is a violation for both check kinds.
struct PathReport {
    std::string launch;  // ff instance or input port
    std::string capture; // ff instance or output port
    bool launch_is_port = false;
    bool capture_is_port = false;
    std::string clock;
    int multicycle = 1;
    CheckKind check = CheckKind::Setup;
    std::vector<PathSegment> segments;
    double arrival = 0.0;
    double required = 0.0;
    double slack = 0.0;
};

TimingGraph build_graph(const Netlist &n, const Library &lib);

// Scales all max delays by `factor` (setup pessimism); min delays and
// capture requirements unchanged.
TimingGraph apply_derate(const TimingGraph &g, double factor);

// Worst setup path per same-domain (launch, capture) pair, ascending slack.
// arrival = skew(launch) + cq_max + sum of max arc delays (or input_delay
// start); required = N*period + skew(capture) - setup (or period -
// output_delay). False-path and cross-domain pairs are skipped. Endpoints
// with neither a clock nor an I/O delay are skipped with a diagnostic.
std::vector<PathReport> setup_check(const TimingGraph &g, const ConstraintSet &cs,
                                    const SkewTable &skew,
                                    std::vector<Diagnostic> *diags = nullptr);

// Hold counterpart: arrival_min = skew(launch) + cq_min + sum of min delays;
// required = skew(capture) + hold; slack = arrival - required. The capture
// edge is edge 0 regardless of any setup multicycle. Output ports have no
// hold requirement.
std::vector<PathReport> hold_check(const TimingGraph &g, const ConstraintSet &cs,
                                   const SkewTable &skew,
                                   std::vector<Diagnostic> *diags = nullptr);

// Per clock, 1000 / worst required period over that clock's setup paths, in
// MHz. Clocks without any constrained path are omitted (diagnostic).
std::map<std::string, double> fmax(const TimingGraph &g, const ConstraintSet &cs,
                                   const SkewTable &skew,
                                   std::vector<Diagnostic> *diags = nullptr);

// k worst-slack reports; ties broken by (launch, capture) name order.
std::vector<PathReport> top_paths(std::vector<PathReport> reports, size_t k);

// Worst-case data-path summaries between constrained endpoints, used by the
// skew scheduler. Delays include the launch clock-to-Q (max and min) but no
// skews; `setup`/`hold` are the capture requirements.
struct PairTiming {
    std::string launch;
    std::string capture;
    bool launch_is_port = false;
    bool capture_is_port = false;
    std::string clock;
    int multicycle = 1;
    double delay_max = 0.0; // cq_max + comb max (+ input_delay for ports)
    double delay_min = 0.0;
    double setup = 0.0; // capture ff setup, or output_delay for ports
    double hold = 0.0;  // capture ff hold (ports: no hold edge emitted)
};

std::vector<PairTiming> pair_timings(const TimingGraph &g, const ConstraintSet &cs,
                                     std::vector<Diagnostic> *diags = nullptr);

} // namespace ticl

#endif
