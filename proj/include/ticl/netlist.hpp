// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_NETLIST_HPP
#define TICL_NETLIST_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ticl/diag.hpp"

namespace ticl {

struct Library;

struct Port {
    std::string name;
    bool is_input = true;
};

struct FfInst {
    std::string name;
    std::string cell;
    std::string clk;
    std::string d;
    std::string q;
};

struct GateInst {
    std::string name;
    std::string cell;
    std::vector<std::string> inputs;
    std::string out;
};

// Gate-level design: ports, edge-triggered flip-flops, single-output
// combinational gates, per-net routing delays (ns, default 0), bus
// declarations and free-form attributes. Immutable after parse.
struct Netlist {
    std::string name;
    std::vector<Port> ports;
    std::vector<FfInst> ffs;
    std::vector<GateInst> gates;
    std::map<std::string, double> net_delays;
    std::map<std::string, std::vector<std::string>> buses;
    std::map<std::pair<std::string, std::string>, std::string> attrs;

    double net_delay(const std::string &net) const
    {
        auto it = net_delays.find(net);
        return it == net_delays.end() ? 0.0 : it->second;
    }

    const Port *find_port(const std::string &n) const;
    const FfInst *find_ff(const std::string &n) const;
    const GateInst *find_gate(const std::string &n) const;
    std::string attr(const std::string &object, const std::string &key) const;

    // Driver name for a net: "port:NAME", "FF.q" or "GATE.out". Empty if
    // undriven. Multiple drivers are a validate() finding; the first one
    // in declaration order (ports, ffs, gates) wins here.
    std::string driver_of(const std::string &net) const;
};

// Source endpoint of a combinational fan-in cone.
struct ConeSource {
    enum class Kind { FfQ, InputPort };
    Kind kind;
    std::string name; // ff instance name or port name

    friend bool operator<(const ConeSource &a, const ConeSource &b)
    {
        return std::tie(a.kind, a.name) < std::tie(b.kind, b.name);
    }
    friend bool operator==(const ConeSource &a, const ConeSource &b)
    {
        return a.kind == b.kind && a.name == b.name;
    }
};

Netlist parse_netlist(std::string_view text);
std::string serialize_netlist(const Netlist &n);

std::vector<Diagnostic> validate(const Netlist &n, const Library &lib);

// All ff `q` pins and input ports reachable backward from `net` through
// combinational gates only. Throws Error on a combinational loop.
std::set<ConeSource> fanin_cone_of_net(const Netlist &n, const std::string &net);

// Cone of the net feeding an instance input pin. `pin` is "d" for a flip-flop
// or an input index for a gate.
std::set<ConeSource> fanin_cone(const Netlist &n, const std::string &instance,
                                const std::string &pin);

} // namespace ticl

#endif
