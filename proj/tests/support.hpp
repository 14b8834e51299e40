// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: fixture loading, an exhaustive
// path-enumeration oracle, random design generators and a skew-grid oracle.
// Everything here is test-only and independent of the engine's propagation
// and scheduling code paths it is used to check.
#ifndef TICL_TESTS_SUPPORT_HPP
#define TICL_TESTS_SUPPORT_HPP

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ticl/skewopt.hpp"
#include "ticl/sta.hpp"

namespace ticl::testsupport {

inline std::string read_fixture(const std::string &name)
{
    std::ifstream in(std::string(TICL_FIXTURES) + "/" + name);
    if (!in.is_open())
        throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Design {
    Netlist n;
    Library lib;
    ConstraintSet cs;
    TimingGraph g;
};

inline Design load_design(const std::string &tnl, Library lib, const std::string &sdc)
{
    Design d{parse_netlist(tnl), std::move(lib), {}, {}};
    if (has_errors(validate(d.n, d.lib)))
        throw std::runtime_error("fixture fails validation");
    d.cs = resolve(parse_sdc(sdc), d.n);
    d.g = build_graph(d.n, d.lib);
    return d;
}

inline Design load_fixture_design(const std::string &tnl, Library lib,
                                  const std::string &sdc)
{
    return load_design(read_fixture(tnl), std::move(lib), read_fixture(sdc));
}

// ---------------------------------------------------------------------------
// exhaustive path enumeration over the netlist (independent of TimingGraph),
// summing delays left to right from the launch: the reference for arrival
// times under the fixed reduction order
// ---------------------------------------------------------------------------
struct EnumOracle {
    const Netlist &n;
    const Library &lib;
    bool longest;
    std::map<std::string, std::vector<const GateInst *>> gates_of_net;
    std::map<std::string, std::vector<const FfInst *>> captures_of_net;
    std::map<std::string, double> best;

    EnumOracle(const Netlist &nl, const Library &l, bool max_mode)
        : n(nl), lib(l), longest(max_mode)
    {
        for (const auto &g : n.gates) {
            std::set<std::string> seen;
            for (const auto &in : g.inputs)
                if (seen.insert(in).second)
                    gates_of_net[in].push_back(&g);
        }
        for (const auto &f : n.ffs)
            captures_of_net[f.d].push_back(&f);
    }

    void take(const std::string &ff, double a)
    {
        auto [it, inserted] = best.emplace(ff, a);
        if (!inserted && (longest ? a > it->second : a < it->second))
            it->second = a;
    }

    // a = arrival at the driver output of `net`, before the net delay
    void walk(const std::string &net, double a)
    {
        if (auto it = captures_of_net.find(net); it != captures_of_net.end())
            for (const auto *f : it->second)
                take(f->name, a + n.net_delay(net));
        if (auto it = gates_of_net.find(net); it != gates_of_net.end()) {
            for (const auto *g : it->second) {
                const CellSpec &spec = lib.at(g->cell);
                double at_in = a + n.net_delay(net);
                walk(g->out, at_in + (longest ? spec.delay_max : spec.delay_min));
            }
        }
    }

    std::map<std::string, double> arrivals_from(const FfInst &launch)
    {
        best.clear();
        const CellSpec &spec = lib.at(launch.cell);
        walk(launch.q, 0.0 + (longest ? spec.cq_max : spec.cq_min));
        return best;
    }
};

// random DAG designs (<= 12 instances) for the oracle-equivalence property
struct RandomDesign {
    std::string tnl;
    std::string tlib;
};

inline RandomDesign make_random_design(std::mt19937_64 &rng)
{
    auto unit = [&] { return std::uniform_real_distribution<>(0.0, 1.0)(rng); };
    int nff = 2 + static_cast<int>(rng() % 4);        // 2..5
    int ngate = static_cast<int>(rng() % (13 - nff)); // total <= 12

    std::ostringstream lib;
    lib << "library rnd\n";
    double cq_max = 0.05 + unit();
    double cq_min = cq_max * (0.5 + 0.5 * unit());
    lib << "ff FF setup=" << 0.01 + 0.2 * unit() << " hold=" << 0.01 + 0.1 * unit()
        << " cq=" << cq_max << " cqmin=" << cq_min << "\n";

    std::ostringstream tnl;
    tnl << "design rnd\nport in clk\n";
    std::vector<std::string> nets;
    for (int i = 0; i < nff; ++i)
        nets.push_back("q" + std::to_string(i));

    std::ostringstream gates;
    for (int i = 0; i < ngate; ++i) {
        int fanin = 1 + static_cast<int>(rng() % 3);
        double dmax = unit();
        lib << "comb C" << i << " delay=" << dmax << " dmin=" << dmax * unit()
            << " inputs=" << fanin << "\n";
        gates << "gate g" << i << " C" << i << " in=";
        for (int j = 0; j < fanin; ++j)
            gates << (j ? "," : "") << nets[rng() % nets.size()];
        std::string out = "w" + std::to_string(i);
        gates << " out=" << out << "\n";
        nets.push_back(out);
    }
    for (int i = 0; i < nff; ++i)
        tnl << "ff f" << i << " FF clk=clk d=" << nets[rng() % nets.size()] << " q=q"
            << i << "\n";
    tnl << gates.str();
    for (const auto &net : nets)
        if (rng() % 2)
            tnl << "netdelay " << net << " " << unit() << "\n";
    return {tnl.str(), lib.str()};
}

// checks engine arrivals against the enumeration oracle, exact equality;
// throws on the first mismatch
inline void check_oracle_equivalence(const Design &d)
{
    auto setup = setup_check(d.g, d.cs, {});
    auto hold = hold_check(d.g, d.cs, {});
    for (bool longest : {true, false}) {
        EnumOracle oracle(d.n, d.lib, longest);
        const auto &reports = longest ? setup : hold;
        std::map<std::pair<std::string, std::string>, double> engine;
        for (const auto &r : reports)
            engine[{r.launch, r.capture}] = r.arrival;
        size_t expected_pairs = 0;
        for (const auto &f : d.n.ffs) {
            auto arrivals = oracle.arrivals_from(f);
            expected_pairs += arrivals.size();
            for (const auto &[cap, a] : arrivals) {
                auto it = engine.find({f.name, cap});
                if (it == engine.end())
                    throw std::runtime_error("missing pair " + f.name + "->" + cap);
                if (it->second != a)
                    throw std::runtime_error("arrival mismatch on " + f.name + "->" +
                                             cap);
            }
        }
        if (engine.size() != expected_pairs)
            throw std::runtime_error("extra pairs reported");
    }
}

// ---------------------------------------------------------------------------
// skew-grid oracle
// ---------------------------------------------------------------------------
inline double skew_edge_slack(const SkewConstraint &e,
                              const std::map<std::string, double> &skews,
                              const std::vector<std::string> &nodes)
{
    auto value = [&](int node) {
        return node == 0 ? 0.0 : skews.at(nodes[static_cast<size_t>(node)]);
    };
    return e.weight - (value(e.u) - value(e.v));
}

struct GridResult {
    double period = 0.0;
    bool found = false;
};

// minimal feasible period over a full grid of per-register skews
inline GridResult skew_grid_search(const Design &d, double bound, double step)
{
    auto pairs = pair_timings(d.g, d.cs);
    std::vector<std::string> regs;
    for (const auto &[ff, dom] : d.cs.ff_domain) {
        (void)dom;
        regs.push_back(ff);
    }
    std::map<std::string, size_t> reg_index;
    for (size_t i = 0; i < regs.size(); ++i)
        reg_index[regs[i]] = i;
    const int per_axis = 2 * static_cast<int>(std::lround(bound / step)) + 1;

    GridResult best;
    std::vector<int> idx(regs.size(), 0);
    std::vector<double> skew(regs.size(), 0.0);
    while (true) {
        for (size_t i = 0; i < regs.size(); ++i)
            skew[i] = -bound + idx[i] * step;
        bool hold_ok = true;
        double period = 0.0;
        for (const auto &p : pairs) {
            double su = p.launch_is_port ? 0.0 : skew[reg_index.at(p.launch)];
            double sv = p.capture_is_port ? 0.0 : skew[reg_index.at(p.capture)];
            if (!p.capture_is_port && su + p.delay_min < sv + p.hold - 1e-12) {
                hold_ok = false;
                break;
            }
            period = std::max(period, (p.delay_max + p.setup + su - sv) / p.multicycle);
        }
        if (hold_ok && (!best.found || period < best.period)) {
            best.found = true;
            best.period = period;
        }
        size_t axis = 0;
        while (axis < idx.size() && ++idx[axis] == per_axis) {
            idx[axis] = 0;
            ++axis;
        }
        if (idx.empty() || axis == idx.size())
            break;
    }
    return best;
}

// random ring-plus-chords single-clock designs with delays on a grid
inline RandomDesign make_random_skew_design(std::mt19937_64 &rng, int nreg, double step)
{
    auto delay = [&] {
        return step * static_cast<double>(1 + rng() % std::lround(1.0 / step));
    };
    std::ostringstream tnl, gates, tlib;
    tnl << "design rnd\nport in clk\n";
    tlib << "library rnd\nff REG setup=0 hold=0 cq=0\n";
    int ng = 0;
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < nreg; ++i)
        arcs.push_back({i, (i + 1) % nreg});
    int chords = static_cast<int>(rng() % 3);
    for (int c = 0; c < chords; ++c)
        arcs.push_back(
            {static_cast<int>(rng() % nreg), static_cast<int>(rng() % nreg)});
    std::map<int, std::string> d_net;
    for (auto [from, to] : arcs) {
        tlib << "comb C" << ng << " delay=" << delay() << " inputs=1\n";
        gates << "gate g" << ng << " C" << ng << " in=q" << from << " out=w" << ng
              << "\n";
        d_net[to] = "w" + std::to_string(ng); // later arcs into a reg win
        ++ng;
    }
    for (int i = 0; i < nreg; ++i) {
        std::string d = d_net.count(i) ? d_net[i] : "q" + std::to_string(i);
        tnl << "ff r" << i << " REG clk=clk d=" << d << " q=q" << i << "\n";
    }
    tnl << gates.str();
    return {tnl.str(), tlib.str()};
}

} // namespace ticl::testsupport

#endif
