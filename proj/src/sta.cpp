// SPDX-License-Identifier: Apache-2.0
#include "ticl/sta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace ticl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

int add_node(TimingGraph &g, TimingGraph::NodeKind kind, std::string name, int inst)
{
    g.nodes.push_back({kind, std::move(name), inst});
    return static_cast<int>(g.nodes.size()) - 1;
}

void add_arc(TimingGraph &g, int from, int to, double dmin, double dmax,
             TimingGraph::ArcKind kind)
{
    g.arcs.push_back({from, to, dmin, dmax, kind});
}

void levelize(TimingGraph &g, const Netlist &n)
{
    size_t nn = g.nodes.size();
    g.in_arcs.assign(nn, {});
    g.out_arcs.assign(nn, {});
    for (size_t a = 0; a < g.arcs.size(); ++a) {
        g.out_arcs[static_cast<size_t>(g.arcs[a].from)].push_back(static_cast<int>(a));
        g.in_arcs[static_cast<size_t>(g.arcs[a].to)].push_back(static_cast<int>(a));
    }

    std::vector<int> indeg(nn, 0);
    for (const auto &a : g.arcs)
        ++indeg[static_cast<size_t>(a.to)];

    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (size_t i = 0; i < nn; ++i)
        if (indeg[i] == 0)
            ready.push(static_cast<int>(i));

    g.topo.clear();
    g.topo.reserve(nn);
    while (!ready.empty()) {
        int u = ready.top();
        ready.pop();
        g.topo.push_back(u);
        for (int ai : g.out_arcs[static_cast<size_t>(u)]) {
            int v = g.arcs[static_cast<size_t>(ai)].to;
            if (--indeg[static_cast<size_t>(v)] == 0)
                ready.push(v);
        }
    }

    if (g.topo.size() == nn)
        return;

    // cycle: walk predecessors among leftover nodes until one repeats
    std::vector<bool> stuck(nn, false);
    int start = -1;
    for (size_t i = 0; i < nn; ++i) {
        if (indeg[i] > 0) {
            stuck[i] = true;
            if (start < 0)
                start = static_cast<int>(i);
        }
    }
    std::vector<int> walk;
    std::vector<int> seen_at(nn, -1);
    int cur = start;
    while (seen_at[static_cast<size_t>(cur)] < 0) {
        seen_at[static_cast<size_t>(cur)] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (int ai : g.in_arcs[static_cast<size_t>(cur)]) {
            int p = g.arcs[static_cast<size_t>(ai)].from;
            if (stuck[static_cast<size_t>(p)]) {
                cur = p;
                break;
            }
        }
    }
    std::string cycle;
    for (size_t i = walk.size(); i-- > static_cast<size_t>(seen_at[static_cast<size_t>(cur)]);) {
        const auto &node = g.nodes[static_cast<size_t>(walk[i])];
        if (node.kind == TimingGraph::NodeKind::GateOut)
            cycle += n.gates[static_cast<size_t>(node.inst)].name + " -> ";
    }
    const auto &cnode = g.nodes[static_cast<size_t>(cur)];
    if (cnode.kind == TimingGraph::NodeKind::GateOut)
        cycle += n.gates[static_cast<size_t>(cnode.inst)].name;
    throw Error("combinational loop: " + cycle);
}

} // namespace

TimingGraph build_graph(const Netlist &n, const Library &lib)
{
    TimingGraph g;

    for (size_t i = 0; i < n.ports.size(); ++i) {
        const auto &p = n.ports[i];
        if (p.is_input)
            g.in_port[p.name] =
                add_node(g, TimingGraph::NodeKind::InPort, p.name, static_cast<int>(i));
        else
            g.out_port[p.name] =
                add_node(g, TimingGraph::NodeKind::OutPort, p.name, static_cast<int>(i));
    }
    for (size_t i = 0; i < n.ffs.size(); ++i) {
        const auto &f = n.ffs[i];
        const CellSpec &spec = lib.at(f.cell);
        if (spec.kind != CellKind::Sequential)
            throw Error(f.name + ": cell " + f.cell + " is not sequential");
        g.ff_launch[f.name] = add_node(g, TimingGraph::NodeKind::FfLaunch,
                                       f.name + ".launch", static_cast<int>(i));
        g.ff_q[f.name] =
            add_node(g, TimingGraph::NodeKind::FfQ, f.name + ".q", static_cast<int>(i));
        g.ff_d[f.name] =
            add_node(g, TimingGraph::NodeKind::FfD, f.name + ".d", static_cast<int>(i));
        g.ff_setup[f.name] = spec.setup;
        g.ff_hold[f.name] = spec.hold;
        add_arc(g, g.ff_launch[f.name], g.ff_q[f.name], spec.cq_min, spec.cq_max,
                TimingGraph::ArcKind::Cell);
    }
    std::vector<int> gate_in(n.gates.size()), gate_out(n.gates.size());
    for (size_t i = 0; i < n.gates.size(); ++i) {
        const auto &gt = n.gates[i];
        const CellSpec &spec = lib.at(gt.cell);
        if (spec.kind != CellKind::Combinational)
            throw Error(gt.name + ": cell " + gt.cell + " is not combinational");
        gate_in[i] =
            add_node(g, TimingGraph::NodeKind::GateIn, gt.name + ".in", static_cast<int>(i));
        gate_out[i] = add_node(g, TimingGraph::NodeKind::GateOut, gt.name + ".out",
                               static_cast<int>(i));
        add_arc(g, gate_in[i], gate_out[i], spec.delay_min, spec.delay_max,
                TimingGraph::ArcKind::Cell);
    }

    std::map<std::string, int> driver_node;
    for (const auto &[name, idx] : g.in_port)
        driver_node[name] = idx;
    for (const auto &f : n.ffs)
        driver_node[f.q] = g.ff_q[f.name];
    for (size_t i = 0; i < n.gates.size(); ++i)
        driver_node[n.gates[i].out] = gate_out[i];

    auto net_arc = [&](const std::string &net, int to) {
        auto it = driver_node.find(net);
        if (it == driver_node.end())
            throw Error("undriven net " + net);
        double d = n.net_delay(net);
        add_arc(g, it->second, to, d, d, TimingGraph::ArcKind::Net);
    };

    for (size_t i = 0; i < n.gates.size(); ++i) {
        std::set<std::string> seen;
        for (const auto &in : n.gates[i].inputs)
            if (seen.insert(in).second)
                net_arc(in, gate_in[i]);
    }
    for (const auto &f : n.ffs)
        net_arc(f.d, g.ff_d[f.name]);
    for (const auto &p : n.ports)
        if (!p.is_input)
            net_arc(p.name, g.out_port[p.name]);

    levelize(g, n);
    return g;
}

TimingGraph apply_derate(const TimingGraph &g, double factor)
{
    if (!(factor > 0.0))
        throw Error("derate factor must be positive");
    TimingGraph out = g;
    for (auto &a : out.arcs)
        a.delay_max *= factor;
    return out;
}

namespace {

struct Propagation {
    std::vector<double> arrival;
    std::vector<int> pred_arc;
};

// Longest (setup) or shortest (hold) arrival propagation from one source
// node. Fixed reduction order: nodes in topological order, arcs in
// construction order, strict improvement only. Per-path sums associate left
// to right from the source, matching exhaustive path enumeration bit for
// bit.
Propagation propagate(const TimingGraph &g, int source, double init, bool longest)
{
    Propagation p;
    p.arrival.assign(g.nodes.size(), longest ? kNegInf : kPosInf);
    p.pred_arc.assign(g.nodes.size(), -1);
    p.arrival[static_cast<size_t>(source)] = init;
    for (int u : g.topo) {
        double au = p.arrival[static_cast<size_t>(u)];
        if (au == (longest ? kNegInf : kPosInf))
            continue;
        for (int ai : g.out_arcs[static_cast<size_t>(u)]) {
            const auto &a = g.arcs[static_cast<size_t>(ai)];
            double cand = au + (longest ? a.delay_max : a.delay_min);
            double &av = p.arrival[static_cast<size_t>(a.to)];
            if (longest ? cand > av : cand < av) {
                av = cand;
                p.pred_arc[static_cast<size_t>(a.to)] = ai;
            }
        }
    }
    return p;
}

std::vector<PathSegment> decompose(const TimingGraph &g, const Propagation &p, int sink,
                                   double input_delay, bool launch_is_port, bool longest)
{
    double cq = 0.0, logic = 0.0, routing = 0.0;
    bool has_cq = false, has_logic = false, has_routing = false;
    for (int node = sink; p.pred_arc[static_cast<size_t>(node)] >= 0;) {
        const auto &a = g.arcs[static_cast<size_t>(p.pred_arc[static_cast<size_t>(node)])];
        double d = longest ? a.delay_max : a.delay_min;
        if (a.kind == TimingGraph::ArcKind::Net) {
            routing += d;
            has_routing = true;
        } else if (g.nodes[static_cast<size_t>(a.from)].kind ==
                   TimingGraph::NodeKind::FfLaunch) {
            cq += d;
            has_cq = true;
        } else {
            logic += d;
            has_logic = true;
        }
        node = a.from;
    }
    std::vector<PathSegment> segs;
    if (launch_is_port)
        segs.push_back({"input_delay", input_delay});
    if (has_cq)
        segs.push_back({"clock_to_q", cq});
    if (has_logic)
        segs.push_back({"logic", logic});
    if (has_routing)
        segs.push_back({"routing", routing});
    return segs;
}

struct LaunchPoint {
    std::string name;
    bool is_port = false;
    int node = -1;
    std::string clock;
    double init = 0.0;        // skew for ffs, input delay for ports
    double input_delay = 0.0; // for segment reporting
};

void note(std::vector<Diagnostic> *diags, const std::string &obj, const std::string &msg)
{
    if (diags)
        diags->push_back({Diagnostic::Severity::Warning, obj, msg});
}

std::vector<LaunchPoint> collect_launches(const TimingGraph &g, const ConstraintSet &cs,
                                          const SkewTable &skew,
                                          std::set<std::string> &unconstrained_inputs)
{
    std::vector<LaunchPoint> launches;
    for (const auto &[ff, node] : g.ff_launch) {
        auto dom = cs.ff_domain.find(ff);
        if (dom == cs.ff_domain.end())
            continue; // resolve already reported it (lenient mode)
        launches.push_back({ff, false, node, dom->second, skew.at(ff), 0.0});
    }
    for (const auto &[port, node] : g.in_port) {
        auto it = cs.input_delays.find(port);
        if (it == cs.input_delays.end()) {
            if (!g.out_arcs[static_cast<size_t>(node)].empty() && !cs.find_clock(port))
                unconstrained_inputs.insert(port);
            continue;
        }
        launches.push_back(
            {port, true, node, it->second.first, it->second.second, it->second.second});
    }
    return launches;
}

void sort_reports(std::vector<PathReport> &reports)
{
    std::stable_sort(reports.begin(), reports.end(),
                     [](const PathReport &a, const PathReport &b) {
                         if (a.slack != b.slack)
                             return a.slack < b.slack;
                         return std::tie(a.launch, a.capture) <
                                std::tie(b.launch, b.capture);
                     });
}

} // namespace

std::vector<PathReport> setup_check(const TimingGraph &g, const ConstraintSet &cs,
                                    const SkewTable &skew, std::vector<Diagnostic> *diags)
{
    if (!cs.resolved)
        throw Error("constraints not resolved");
    std::vector<PathReport> reports;
    std::set<std::string> unconstrained_inputs, unconstrained_outputs;
    auto launches = collect_launches(g, cs, skew, unconstrained_inputs);

    for (const auto &lp : launches) {
        const ClockDef *clk = cs.find_clock(lp.clock);
        if (!clk) {
            note(diags, lp.name, "input delay references unknown clock " + lp.clock);
            continue;
        }
        Propagation p = propagate(g, lp.node, lp.init, /*longest=*/true);

        for (const auto &[cap_ff, d_node] : g.ff_d) {
            double arr = p.arrival[static_cast<size_t>(d_node)];
            if (arr == kNegInf)
                continue;
            auto cap_dom = cs.ff_domain.find(cap_ff);
            if (cap_dom == cs.ff_domain.end())
                continue;
            if (cap_dom->second != lp.clock)
                continue; // cross-domain: CDC's concern
            if (cs.is_false_path(lp.clock, cap_dom->second))
                continue;
            int nmult = lp.is_port ? 1 : cs.multicycle_n(lp.name, cap_ff);
            PathReport r;
            r.launch = lp.name;
            r.launch_is_port = lp.is_port;
            r.capture = cap_ff;
            r.clock = lp.clock;
            r.multicycle = nmult;
            r.check = CheckKind::Setup;
            r.segments = decompose(g, p, d_node, lp.input_delay, lp.is_port, true);
            r.arrival = arr;
            r.required = nmult * clk->period_ns + skew.at(cap_ff) - g.ff_setup.at(cap_ff);
            r.slack = r.required - r.arrival;
            reports.push_back(std::move(r));
        }

        for (const auto &[port, node] : g.out_port) {
            double arr = p.arrival[static_cast<size_t>(node)];
            if (arr == kNegInf)
                continue;
            auto it = cs.output_delays.find(port);
            if (it == cs.output_delays.end()) {
                unconstrained_outputs.insert(port);
                continue;
            }
            if (it->second.first != lp.clock)
                continue;
            if (cs.is_false_path(lp.clock, it->second.first))
                continue;
            PathReport r;
            r.launch = lp.name;
            r.launch_is_port = lp.is_port;
            r.capture = port;
            r.capture_is_port = true;
            r.clock = lp.clock;
            r.check = CheckKind::Setup;
            r.segments = decompose(g, p, node, lp.input_delay, lp.is_port, true);
            r.arrival = arr;
            r.required = clk->period_ns - it->second.second;
            r.slack = r.required - r.arrival;
            reports.push_back(std::move(r));
        }
    }

    for (const auto &port : unconstrained_inputs)
        note(diags, port, "unconstrained input port; paths from it are skipped");
    for (const auto &port : unconstrained_outputs)
        note(diags, port, "unconstrained output port; paths to it are skipped");

    sort_reports(reports);
    return reports;
}

std::vector<PathReport> hold_check(const TimingGraph &g, const ConstraintSet &cs,
                                   const SkewTable &skew, std::vector<Diagnostic> *diags)
{
    if (!cs.resolved)
        throw Error("constraints not resolved");
    std::vector<PathReport> reports;
    std::set<std::string> unconstrained_inputs;
    auto launches = collect_launches(g, cs, skew, unconstrained_inputs);

    for (const auto &lp : launches) {
        if (!cs.find_clock(lp.clock)) {
            note(diags, lp.name, "input delay references unknown clock " + lp.clock);
            continue;
        }
        Propagation p = propagate(g, lp.node, lp.init, /*longest=*/false);

        for (const auto &[cap_ff, d_node] : g.ff_d) {
            double arr = p.arrival[static_cast<size_t>(d_node)];
            if (arr == kPosInf)
                continue;
            auto cap_dom = cs.ff_domain.find(cap_ff);
            if (cap_dom == cs.ff_domain.end())
                continue;
            if (cap_dom->second != lp.clock)
                continue;
            if (cs.is_false_path(lp.clock, cap_dom->second))
                continue;
            PathReport r;
            r.launch = lp.name;
            r.launch_is_port = lp.is_port;
            r.capture = cap_ff;
            r.clock = lp.clock;
            r.multicycle = 1; // hold captures at edge 0 regardless of setup N
            r.check = CheckKind::Hold;
            r.segments = decompose(g, p, d_node, lp.input_delay, lp.is_port, false);
            r.arrival = arr;
            r.required = skew.at(cap_ff) + g.ff_hold.at(cap_ff);
            r.slack = r.arrival - r.required;
            reports.push_back(std::move(r));
        }
        // output ports carry no hold requirement
    }

    for (const auto &port : unconstrained_inputs)
        note(diags, port, "unconstrained input port; paths from it are skipped");

    sort_reports(reports);
    return reports;
}

std::map<std::string, double> fmax(const TimingGraph &g, const ConstraintSet &cs,
                                   const SkewTable &skew, std::vector<Diagnostic> *diags)
{
    auto reports = setup_check(g, cs, skew, diags);
    // worst required period per clock, from each report's own terms:
    // reg capture: P >= (arrival + setup - skew_cap)/N
    //            = (arrival + N*P_now + skew_cap - required - skew_cap ... ) --
    // recover margin from required instead of re-querying the library.
    std::map<std::string, double> worst;
    for (const auto &r : reports) {
        const ClockDef *clk = cs.find_clock(r.clock);
        double margin; // setup or output delay, minus capture skew
        if (r.capture_is_port)
            margin = clk->period_ns - r.required;
        else
            margin = r.multicycle * clk->period_ns - r.required;
        double preq = (r.arrival + margin) / r.multicycle;
        auto [it, inserted] = worst.emplace(r.clock, preq);
        if (!inserted && preq > it->second)
            it->second = preq;
    }
    std::map<std::string, double> result;
    for (const auto &c : cs.clocks) {
        auto it = worst.find(c.name);
        if (it == worst.end()) {
            note(diags, c.name, "no constrained paths; fmax not reported");
            continue;
        }
        result[c.name] = 1000.0 / it->second;
    }
    return result;
}

std::vector<PathReport> top_paths(std::vector<PathReport> reports, size_t k)
{
    if (k < 1)
        throw Error("top_paths: k must be >= 1");
    sort_reports(reports);
    if (reports.size() > k)
        reports.resize(k);
    return reports;
}

std::vector<PairTiming> pair_timings(const TimingGraph &g, const ConstraintSet &cs,
                                     std::vector<Diagnostic> *diags)
{
    if (!cs.resolved)
        throw Error("constraints not resolved");
    SkewTable zero;
    std::vector<PairTiming> pairs;
    std::set<std::string> unconstrained_inputs;
    auto launches = collect_launches(g, cs, zero, unconstrained_inputs);

    for (const auto &lp : launches) {
        if (!cs.find_clock(lp.clock))
            continue;
        Propagation pmax = propagate(g, lp.node, lp.init, true);
        Propagation pmin = propagate(g, lp.node, lp.init, false);

        for (const auto &[cap_ff, d_node] : g.ff_d) {
            double amax = pmax.arrival[static_cast<size_t>(d_node)];
            if (amax == kNegInf)
                continue;
            auto cap_dom = cs.ff_domain.find(cap_ff);
            if (cap_dom == cs.ff_domain.end() || cap_dom->second != lp.clock)
                continue;
            if (cs.is_false_path(lp.clock, cap_dom->second))
                continue;
            PairTiming t;
            t.launch = lp.name;
            t.launch_is_port = lp.is_port;
            t.capture = cap_ff;
            t.clock = lp.clock;
            t.multicycle = lp.is_port ? 1 : cs.multicycle_n(lp.name, cap_ff);
            t.delay_max = amax;
            t.delay_min = pmin.arrival[static_cast<size_t>(d_node)];
            t.setup = g.ff_setup.at(cap_ff);
            t.hold = g.ff_hold.at(cap_ff);
            pairs.push_back(std::move(t));
        }
        for (const auto &[port, node] : g.out_port) {
            double amax = pmax.arrival[static_cast<size_t>(node)];
            if (amax == kNegInf)
                continue;
            auto it = cs.output_delays.find(port);
            if (it == cs.output_delays.end() || it->second.first != lp.clock)
                continue;
            if (cs.is_false_path(lp.clock, it->second.first))
                continue;
            PairTiming t;
            t.launch = lp.name;
            t.launch_is_port = lp.is_port;
            t.capture = port;
            t.capture_is_port = true;
            t.clock = lp.clock;
            t.delay_max = amax;
            t.delay_min = pmin.arrival[static_cast<size_t>(node)];
            t.setup = it->second.second;
            pairs.push_back(std::move(t));
        }
    }
    for (const auto &port : unconstrained_inputs)
        note(diags, port, "unconstrained input port; paths from it are skipped");
    return pairs;
}

} // namespace ticl
