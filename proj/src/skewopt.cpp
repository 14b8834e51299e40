// SPDX-License-Identifier: Apache-2.0
#include "ticl/skewopt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ticl/report.hpp"

namespace ticl {

namespace {

constexpr int kAnchor = 0;

struct PairData {
    std::vector<PairTiming> pairs;
    std::vector<std::string> regs; // sorted register names
    std::map<std::string, int> reg_node;
};

PairData gather_pairs(const TimingGraph &g, const ConstraintSet &cs)
{
    if (!cs.resolved)
        throw Error("skew: constraints not resolved");
    std::set<std::string> domains;
    for (const auto &[ff, dom] : cs.ff_domain)
        domains.insert(dom);
    if (domains.size() > 1)
        throw Error("skew: multi-domain scheduling is not supported");

    PairData d;
    d.pairs = pair_timings(g, cs);
    for (const auto &[ff, node] : g.ff_launch) {
        (void)node;
        if (cs.ff_domain.count(ff)) {
            d.reg_node.emplace(ff, static_cast<int>(d.regs.size()) + 1);
            d.regs.push_back(ff);
        }
    }
    return d;
}

double zero_skew_period(const PairData &d)
{
    double period = 0.0;
    for (const auto &p : d.pairs)
        period = std::max(period, (p.delay_max + p.setup) / p.multicycle);
    return period;
}

} // namespace

SkewConstraintGraph build_constraints(const TimingGraph &g, const ConstraintSet &cs,
                                      double period_ns, double bound_ns)
{
    if (!(period_ns > 0.0))
        throw Error("skew: period must be positive");
    if (bound_ns < 0.0)
        throw Error("skew: bound must be nonnegative");

    PairData d = gather_pairs(g, cs);

    SkewConstraintGraph scg;
    scg.period_ns = period_ns;
    scg.bound_ns = bound_ns;
    scg.nodes.push_back("__anchor__");
    for (const auto &r : d.regs)
        scg.nodes.push_back(r);

    auto node_of = [&](const std::string &name, bool is_port) {
        return is_port ? kAnchor : d.reg_node.at(name);
    };

    for (const auto &p : d.pairs) {
        int u = node_of(p.launch, p.launch_is_port);
        int v = node_of(p.capture, p.capture_is_port);
        // setup: s_u + delay_max <= N*period + s_v - setup
        scg.edges.push_back({u, v, p.multicycle * period_ns - p.delay_max - p.setup,
                             SkewConstraint::Kind::Setup,
                             "setup " + p.launch + " -> " + p.capture});
        // hold: s_u + delay_min >= s_v + hold  (skipped for port captures)
        if (!p.capture_is_port)
            scg.edges.push_back({v, u, p.delay_min - p.hold, SkewConstraint::Kind::Hold,
                                 "hold " + p.launch + " -> " + p.capture});
    }
    for (int i = 1; i < static_cast<int>(scg.nodes.size()); ++i) {
        scg.edges.push_back({i, kAnchor, bound_ns, SkewConstraint::Kind::Bound,
                             "bound +" + scg.nodes[static_cast<size_t>(i)]});
        scg.edges.push_back({kAnchor, i, bound_ns, SkewConstraint::Kind::Bound,
                             "bound -" + scg.nodes[static_cast<size_t>(i)]});
    }
    return scg;
}

SkewFeasibility feasible(const SkewConstraintGraph &scg)
{
    // Bellman-Ford from the anchor over constraints s_u - s_v <= w
    // (relax: dist[u] min= dist[v] + w).
    const size_t nn = scg.nodes.size();
    std::vector<double> dist(nn, 0.0); // anchor-connected; 0 upper-bounds all
    dist[kAnchor] = 0.0;
    std::vector<int> pred(nn, -1); // edge index that last tightened the node

    bool changed = true;
    for (size_t round = 0; round < nn && changed; ++round) {
        changed = false;
        for (size_t ei = 0; ei < scg.edges.size(); ++ei) {
            const auto &e = scg.edges[ei];
            double cand = dist[static_cast<size_t>(e.v)] + e.weight;
            if (cand < dist[static_cast<size_t>(e.u)] - 1e-12) {
                dist[static_cast<size_t>(e.u)] = cand;
                pred[static_cast<size_t>(e.u)] = static_cast<int>(ei);
                changed = true;
            }
        }
    }

    SkewFeasibility out;
    if (changed) {
        out.feasible = false;
        // one more round: every edge that still relaxes is a witness start;
        // follow predecessor edges until a node repeats
        for (size_t ei = 0; ei < scg.edges.size() && out.witness.empty(); ++ei) {
            const auto &e = scg.edges[ei];
            if (!(dist[static_cast<size_t>(e.v)] + e.weight <
                  dist[static_cast<size_t>(e.u)] - 1e-12))
                continue;
            dist[static_cast<size_t>(e.u)] = dist[static_cast<size_t>(e.v)] + e.weight;
            pred[static_cast<size_t>(e.u)] = static_cast<int>(ei);
            std::vector<int> seen(nn, -1);
            std::vector<int> walk;
            int cur = e.u;
            while (seen[static_cast<size_t>(cur)] < 0 &&
                   pred[static_cast<size_t>(cur)] >= 0) {
                seen[static_cast<size_t>(cur)] = static_cast<int>(walk.size());
                walk.push_back(cur);
                cur = scg.edges[static_cast<size_t>(pred[static_cast<size_t>(cur)])].v;
            }
            if (seen[static_cast<size_t>(cur)] < 0)
                continue; // chain dead-ends off the cycle; try another start
            for (size_t i = static_cast<size_t>(seen[static_cast<size_t>(cur)]);
                 i < walk.size(); ++i)
                out.witness.push_back(scg.nodes[static_cast<size_t>(walk[i])]);
            out.witness.push_back(scg.nodes[static_cast<size_t>(cur)]);
        }
        return out;
    }

    out.feasible = true;
    out.schedule.period_ns = scg.period_ns;
    out.schedule.bound_ns = scg.bound_ns;
    // canonical potentials; anchor pinned at 0
    double shift = dist[kAnchor];
    for (size_t i = 1; i < nn; ++i)
        out.schedule.skews[scg.nodes[i]] = dist[i] - shift;
    return out;
}

std::pair<double, SkewSchedule> optimize_period(const TimingGraph &g,
                                                const ConstraintSet &cs,
                                                double bound_ns, double tol_ns)
{
    if (!(tol_ns > 0.0))
        throw Error("skew: tolerance must be positive");
    PairData d = gather_pairs(g, cs);
    if (d.pairs.empty())
        throw Error("skew: no constrained paths");

    double upper = zero_skew_period(d);
    if (upper <= 0.0)
        upper = tol_ns;

    // per-edge floor: a setup edge between distinct nodes can be met with at
    // most 2*bound of skew difference; a self-loop gets no help at all
    double lower = 0.0;
    for (const auto &p : d.pairs) {
        bool self = !p.launch_is_port && !p.capture_is_port && p.launch == p.capture;
        double help = self ? 0.0 : 2.0 * bound_ns;
        lower = std::max(lower, (p.delay_max + p.setup - help) / p.multicycle);
    }
    lower = std::max(lower, 0.0);

    auto probe = [&](double period) {
        return feasible(build_constraints(g, cs, period, bound_ns));
    };

    SkewFeasibility at_upper = probe(upper);
    if (!at_upper.feasible) {
        std::string cyc;
        for (const auto &node : at_upper.witness)
            cyc += (cyc.empty() ? "" : " -> ") + node;
        throw Error("skew: infeasible even at the zero-skew period (hold-limited); "
                    "cycle: " + cyc);
    }

    SkewFeasibility best = at_upper;
    double best_period = upper;
    while (upper - lower > tol_ns) {
        double mid = 0.5 * (lower + upper);
        SkewFeasibility f = probe(mid);
        if (f.feasible) {
            upper = mid;
            best = f;
            best_period = mid;
        } else {
            lower = mid;
        }
    }
    best.schedule.period_ns = best_period;
    return {best_period, best.schedule};
}

std::pair<std::vector<PathReport>, std::vector<PathReport>>
verify_schedule(const TimingGraph &g, const ConstraintSet &cs, const SkewSchedule &sched)
{
    if (cs.clocks.size() != 1)
        throw Error("skew: verify_schedule needs exactly one clock");
    ConstraintSet at_period = cs;
    at_period.clocks[0].period_ns = sched.period_ns;
    SkewTable skew = sched.to_skew_table();
    return {setup_check(g, at_period, skew), hold_check(g, at_period, skew)};
}

std::string schedule_to_csv(const SkewSchedule &sched)
{
    std::ostringstream out;
    out << "period_ns=" << fmt_ns(sched.period_ns) << "\n";
    out << "register,skew_ns\n";
    for (const auto &[reg, s] : sched.skews)
        out << reg << "," << fmt_ns(s) << "\n";
    return out.str();
}

SkewSchedule schedule_from_csv(std::string_view text)
{
    SkewSchedule sched;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool have_period = false;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        if (line.rfind("period_ns=", 0) == 0) {
            std::string v = line.substr(10);
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(),
                                           sched.period_ns);
            if (ec != std::errc() || p != v.data() + v.size() || sched.period_ns <= 0)
                throw Error("schedule line " + std::to_string(lineno) +
                            ": bad period_ns");
            have_period = true;
            continue;
        }
        if (line == "register,skew_ns")
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error("schedule line " + std::to_string(lineno) +
                        ": expected register,skew_ns");
        std::string reg = line.substr(0, comma);
        std::string val = line.substr(comma + 1);
        double s = 0.0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
        if (ec != std::errc() || p != val.data() + val.size() || !std::isfinite(s))
            throw Error("schedule line " + std::to_string(lineno) + ": bad skew value");
        if (!sched.skews.emplace(reg, s).second)
            throw Error("schedule line " + std::to_string(lineno) + ": duplicate " + reg);
    }
    if (!have_period)
        throw Error("schedule: missing period_ns= header");
    return sched;
}

} // namespace ticl
