// SPDX-License-Identifier: Apache-2.0
#include "ticl/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

#include "ticl/techlib.hpp"

namespace ticl {

namespace {

bool valid_ident(std::string_view s)
{
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

[[noreturn]] void fail(int line, const std::string &msg)
{
    throw Error("netlist line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(std::string_view line)
{
    std::vector<std::string> toks;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            toks.emplace_back(line.substr(start, i - start));
    }
    return toks;
}

double parse_time(const std::string &tok, int line)
{
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(line, "expected a number, got '" + tok + "'");
    return v;
}

// key=value field; returns value or fails naming the missing key
std::string take_field(std::map<std::string, std::string> &fields, const std::string &key,
                       int line)
{
    auto it = fields.find(key);
    if (it == fields.end())
        fail(line, "missing " + key + "= field");
    std::string v = it->second;
    fields.erase(it);
    return v;
}

std::map<std::string, std::string> kv_fields(const std::vector<std::string> &toks,
                                             size_t first, int line)
{
    std::map<std::string, std::string> fields;
    for (size_t i = first; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos || eq == 0)
            fail(line, "expected key=value, got '" + toks[i] + "'");
        std::string key = toks[i].substr(0, eq);
        if (!fields.emplace(key, toks[i].substr(eq + 1)).second)
            fail(line, "duplicate field " + key + "=");
    }
    return fields;
}

} // namespace

const Port *Netlist::find_port(const std::string &n) const
{
    for (const auto &p : ports)
        if (p.name == n)
            return &p;
    return nullptr;
}

const FfInst *Netlist::find_ff(const std::string &n) const
{
    for (const auto &f : ffs)
        if (f.name == n)
            return &f;
    return nullptr;
}

const GateInst *Netlist::find_gate(const std::string &n) const
{
    for (const auto &g : gates)
        if (g.name == n)
            return &g;
    return nullptr;
}

std::string Netlist::attr(const std::string &object, const std::string &key) const
{
    auto it = attrs.find({object, key});
    return it == attrs.end() ? std::string() : it->second;
}

std::string Netlist::driver_of(const std::string &net) const
{
    for (const auto &p : ports)
        if (p.is_input && p.name == net)
            return "port:" + p.name;
    for (const auto &f : ffs)
        if (f.q == net)
            return f.name + ".q";
    for (const auto &g : gates)
        if (g.out == net)
            return g.name + ".out";
    return {};
}

Netlist parse_netlist(std::string_view text)
{
    Netlist n;
    bool saw_design = false;
    std::set<std::string> instance_names;
    std::set<std::string> port_names;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        auto toks = tokenize(raw);
        if (toks.empty())
            continue;
        const std::string &dir = toks[0];

        if (!saw_design) {
            if (dir != "design")
                fail(lineno, "first directive must be 'design'");
            if (toks.size() != 2 || !valid_ident(toks[1]))
                fail(lineno, "usage: design NAME");
            n.name = toks[1];
            saw_design = true;
            continue;
        }

        if (dir == "design") {
            fail(lineno, "duplicate design directive");
        } else if (dir == "port") {
            if (toks.size() != 3 || (toks[1] != "in" && toks[1] != "out"))
                fail(lineno, "usage: port in|out NAME");
            if (!valid_ident(toks[2]))
                fail(lineno, "invalid port name '" + toks[2] + "'");
            if (!port_names.insert(toks[2]).second)
                fail(lineno, "duplicate port " + toks[2]);
            n.ports.push_back({toks[2], toks[1] == "in"});
        } else if (dir == "ff") {
            if (toks.size() < 3)
                fail(lineno, "usage: ff INST CELL clk=NET d=NET q=NET");
            if (!valid_ident(toks[1]) || !valid_ident(toks[2]))
                fail(lineno, "invalid ff instance or cell name");
            auto fields = kv_fields(toks, 3, lineno);
            FfInst ff;
            ff.name = toks[1];
            ff.cell = toks[2];
            ff.clk = take_field(fields, "clk", lineno);
            ff.d = take_field(fields, "d", lineno);
            ff.q = take_field(fields, "q", lineno);
            if (!fields.empty())
                fail(lineno, "unknown field " + fields.begin()->first + "=");
            for (const auto *net : {&ff.clk, &ff.d, &ff.q})
                if (!valid_ident(*net))
                    fail(lineno, "invalid net name '" + *net + "'");
            if (!instance_names.insert(ff.name).second)
                fail(lineno, "duplicate instance " + ff.name);
            n.ffs.push_back(std::move(ff));
        } else if (dir == "gate") {
            if (toks.size() < 3)
                fail(lineno, "usage: gate INST CELL in=NET[,NET...] out=NET");
            if (!valid_ident(toks[1]) || !valid_ident(toks[2]))
                fail(lineno, "invalid gate instance or cell name");
            auto fields = kv_fields(toks, 3, lineno);
            GateInst g;
            g.name = toks[1];
            g.cell = toks[2];
            std::string ins = take_field(fields, "in", lineno);
            std::string out = take_field(fields, "out", lineno);
            if (!fields.empty())
                fail(lineno, "unknown field " + fields.begin()->first + "=");
            size_t pos = 0;
            while (pos <= ins.size()) {
                auto comma = ins.find(',', pos);
                std::string net = ins.substr(pos, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - pos);
                if (!valid_ident(net))
                    fail(lineno, "invalid net name '" + net + "'");
                g.inputs.push_back(std::move(net));
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            if (!valid_ident(out))
                fail(lineno, "invalid net name '" + out + "'");
            g.out = out;
            if (!instance_names.insert(g.name).second)
                fail(lineno, "duplicate instance " + g.name);
            n.gates.push_back(std::move(g));
        } else if (dir == "netdelay") {
            if (toks.size() != 3)
                fail(lineno, "usage: netdelay NET FLOAT_NS");
            if (!valid_ident(toks[1]))
                fail(lineno, "invalid net name '" + toks[1] + "'");
            double d = parse_time(toks[2], lineno);
            if (d < 0.0)
                fail(lineno, "negative net delay");
            if (!n.net_delays.emplace(toks[1], d).second)
                fail(lineno, "duplicate netdelay for " + toks[1]);
        } else if (dir == "bus") {
            if (toks.size() < 3)
                fail(lineno, "usage: bus NAME NET NET ...");
            if (!valid_ident(toks[1]))
                fail(lineno, "invalid bus name '" + toks[1] + "'");
            if (n.buses.count(toks[1]))
                fail(lineno, "duplicate bus " + toks[1]);
            std::vector<std::string> nets(toks.begin() + 2, toks.end());
            for (const auto &net : nets)
                if (!valid_ident(net))
                    fail(lineno, "invalid net name '" + net + "'");
            n.buses.emplace(toks[1], std::move(nets));
        } else if (dir == "attr") {
            if (toks.size() != 3)
                fail(lineno, "usage: attr OBJECT KEY=VALUE");
            auto eq = toks[2].find('=');
            if (eq == std::string::npos || eq == 0)
                fail(lineno, "usage: attr OBJECT KEY=VALUE");
            auto key = std::make_pair(toks[1], toks[2].substr(0, eq));
            if (!n.attrs.emplace(key, toks[2].substr(eq + 1)).second)
                fail(lineno, "duplicate attr " + toks[1] + " " + key.second);
        } else {
            fail(lineno, "unknown directive '" + dir + "'");
        }
    }
    if (!saw_design)
        throw Error("netlist: missing design directive");
    return n;
}

std::string serialize_netlist(const Netlist &n)
{
    std::ostringstream out;
    out << "design " << n.name << "\n";
    for (const auto &p : n.ports)
        out << "port " << (p.is_input ? "in " : "out ") << p.name << "\n";
    for (const auto &f : n.ffs)
        out << "ff " << f.name << " " << f.cell << " clk=" << f.clk << " d=" << f.d
            << " q=" << f.q << "\n";
    for (const auto &g : n.gates) {
        out << "gate " << g.name << " " << g.cell << " in=";
        for (size_t i = 0; i < g.inputs.size(); ++i)
            out << (i ? "," : "") << g.inputs[i];
        out << " out=" << g.out << "\n";
    }
    for (const auto &[net, d] : n.net_delays) {
        std::ostringstream v;
        v.precision(17);
        v << d;
        out << "netdelay " << net << " " << v.str() << "\n";
    }
    for (const auto &[bus, nets] : n.buses) {
        out << "bus " << bus;
        for (const auto &net : nets)
            out << " " << net;
        out << "\n";
    }
    for (const auto &[key, value] : n.attrs)
        out << "attr " << key.first << " " << key.second << "=" << value << "\n";
    return out.str();
}

namespace {

struct DriverIndex {
    // net -> list of driver descriptions
    std::map<std::string, std::vector<std::string>> drivers;

    explicit DriverIndex(const Netlist &n)
    {
        for (const auto &p : n.ports)
            if (p.is_input)
                drivers[p.name].push_back("port:" + p.name);
        for (const auto &f : n.ffs)
            drivers[f.q].push_back(f.name + ".q");
        for (const auto &g : n.gates)
            drivers[g.out].push_back(g.name + ".out");
    }
};

} // namespace

std::vector<Diagnostic> validate(const Netlist &n, const Library &lib)
{
    std::vector<Diagnostic> diags;
    auto err = [&](const std::string &obj, const std::string &msg) {
        diags.push_back({Diagnostic::Severity::Error, obj, msg});
    };
    auto warn = [&](const std::string &obj, const std::string &msg) {
        diags.push_back({Diagnostic::Severity::Warning, obj, msg});
    };

    DriverIndex idx(n);
    for (const auto &[net, drvs] : idx.drivers) {
        if (drvs.size() > 1) {
            std::string who;
            for (const auto &d : drvs)
                who += (who.empty() ? "" : ", ") + d;
            err(net, "multiple drivers: " + who);
        }
    }

    auto require_driven = [&](const std::string &net, const std::string &user) {
        if (!idx.drivers.count(net))
            err(net, "undriven net (referenced by " + user + ")");
    };

    for (const auto &p : n.ports)
        if (!p.is_input)
            require_driven(p.name, "output port " + p.name);

    for (const auto &f : n.ffs) {
        require_driven(f.clk, f.name + ".clk");
        require_driven(f.d, f.name + ".d");
        const CellSpec *spec = lib.find(f.cell);
        if (!spec)
            err(f.name, "unresolved cell " + f.cell);
        else if (spec->kind != CellKind::Sequential)
            err(f.name, "cell " + f.cell + " is not sequential");
    }
    for (const auto &g : n.gates) {
        for (const auto &in : g.inputs)
            require_driven(in, g.name + ".in");
        const CellSpec *spec = lib.find(g.cell);
        if (!spec) {
            err(g.name, "unresolved cell " + g.cell);
        } else if (spec->kind != CellKind::Combinational) {
            err(g.name, "cell " + g.cell + " is not combinational");
        } else if (static_cast<int>(g.inputs.size()) != spec->inputs) {
            err(g.name, "cell " + g.cell + " expects " + std::to_string(spec->inputs) +
                            " inputs, got " + std::to_string(g.inputs.size()));
        }
    }

    for (const auto &[net, d] : n.net_delays) {
        if (d < 0.0)
            err(net, "negative net delay");
        if (!idx.drivers.count(net))
            warn(net, "netdelay on undriven net");
    }
    for (const auto &[bus, nets] : n.buses)
        for (const auto &net : nets)
            require_driven(net, "bus " + bus);
    for (const auto &[key, value] : n.attrs) {
        const auto &obj = key.first;
        if (!n.find_port(obj) && !n.find_ff(obj) && !n.find_gate(obj) &&
            !idx.drivers.count(obj) && !n.buses.count(obj))
            warn(obj, "attr on unknown object");
    }
    return diags;
}

namespace {

// DFS over nets; white/grey/black coloring for loop detection.
struct ConeWalker {
    const Netlist &n;
    std::map<std::string, const GateInst *> gate_of_net;
    std::map<std::string, int> color; // 0 white, 1 grey, 2 black
    std::set<ConeSource> sources;
    std::vector<std::string> stack;

    explicit ConeWalker(const Netlist &nl) : n(nl)
    {
        for (const auto &g : n.gates)
            gate_of_net[g.out] = &g;
    }

    void walk(const std::string &net)
    {
        auto c = color.find(net);
        if (c != color.end()) {
            if (c->second == 1) {
                auto at = std::find(stack.begin(), stack.end(), net);
                std::string cycle;
                for (auto it = at; it != stack.end(); ++it)
                    cycle += gate_of_net.at(*it)->name + " -> ";
                cycle += gate_of_net.at(net)->name;
                throw Error("combinational loop: " + cycle);
            }
            return;
        }

        for (const auto &f : n.ffs) {
            if (f.q == net) {
                sources.insert({ConeSource::Kind::FfQ, f.name});
                color[net] = 2;
                return;
            }
        }
        if (const Port *p = n.find_port(net); p && p->is_input) {
            sources.insert({ConeSource::Kind::InputPort, p->name});
            color[net] = 2;
            return;
        }
        auto g = gate_of_net.find(net);
        if (g == gate_of_net.end()) {
            // undriven net; validate() reports it, cone just stops here
            color[net] = 2;
            return;
        }
        color[net] = 1;
        stack.push_back(net);
        for (const auto &in : g->second->inputs)
            walk(in);
        stack.pop_back();
        color[net] = 2;
    }
};

} // namespace

std::set<ConeSource> fanin_cone_of_net(const Netlist &n, const std::string &net)
{
    ConeWalker w(n);
    w.walk(net);
    return std::move(w.sources);
}

std::set<ConeSource> fanin_cone(const Netlist &n, const std::string &instance,
                                const std::string &pin)
{
    if (const FfInst *f = n.find_ff(instance)) {
        if (pin == "d")
            return fanin_cone_of_net(n, f->d);
        if (pin == "clk")
            return fanin_cone_of_net(n, f->clk);
        throw Error("no pin " + instance + "." + pin);
    }
    if (const GateInst *g = n.find_gate(instance)) {
        int idx = -1;
        auto [p, ec] = std::from_chars(pin.data(), pin.data() + pin.size(), idx);
        if (ec != std::errc() || idx < 0 || idx >= static_cast<int>(g->inputs.size()))
            throw Error("no pin " + instance + "." + pin);
        return fanin_cone_of_net(n, g->inputs[static_cast<size_t>(idx)]);
    }
    throw Error("no instance " + instance);
}

} // namespace ticl
