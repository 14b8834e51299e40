// SPDX-License-Identifier: Apache-2.0
#include "ticl/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

#include "ticl/report.hpp"

namespace ticl {

const ClockDef *ConstraintSet::find_clock(const std::string &name) const
{
    for (const auto &c : clocks)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

[[noreturn]] void fail(int line, const std::string &msg)
{
    throw Error("sdc line " + std::to_string(line) + ": " + msg);
}

// Tokens are whitespace-separated except [...] object queries, which stay
// one token (they may contain a space).
std::vector<std::string> tokenize(const std::string &line, int lineno)
{
    std::vector<std::string> toks;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size())
            break;
        if (line[i] == '[') {
            auto close = line.find(']', i);
            if (close == std::string::npos)
                fail(lineno, "unterminated [ query");
            toks.push_back(line.substr(i, close - i + 1));
            i = close + 1;
        } else {
            size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
                   line[i] != '[')
                ++i;
            toks.push_back(line.substr(start, i - start));
        }
    }
    return toks;
}

struct Query {
    enum class Kind { Ports, Clocks } kind;
    std::string name;
};

Query parse_query(const std::string &tok, int lineno)
{
    if (tok.empty() || tok.front() != '[' || tok.back() != ']')
        fail(lineno, "expected [get_ports X] or [get_clocks X], got '" + tok + "'");
    std::istringstream in(tok.substr(1, tok.size() - 2));
    std::string fn, arg, extra;
    in >> fn >> arg;
    if (in >> extra)
        fail(lineno, "only single-object queries are supported");
    if (arg.empty())
        fail(lineno, "malformed query '" + tok + "'");
    if (arg.find('*') != std::string::npos || arg.find('?') != std::string::npos)
        fail(lineno, "wildcards are not supported in queries");
    if (fn == "get_ports")
        return {Query::Kind::Ports, arg};
    if (fn == "get_clks" || fn == "get_clocks")
        return {Query::Kind::Clocks, arg};
    fail(lineno, "unknown query function '" + fn + "'");
}

double parse_double(const std::string &tok, int lineno)
{
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(lineno, "expected a number, got '" + tok + "'");
    return v;
}

} // namespace

ConstraintSet parse_sdc(std::string_view text, bool lenient)
{
    ConstraintSet cs;
    std::istringstream in{std::string(text)};
    std::string raw, logical;
    int lineno = 0, start_line = 0;

    auto handle = [&](const std::string &line, int at) {
        auto toks = tokenize(line, at);
        if (toks.empty())
            return;
        const std::string &cmd = toks[0];

        if (cmd == "create_clock") {
            bool have_period = false;
            double period = 0.0;
            std::string port;
            for (size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "-period") {
                    if (++i >= toks.size())
                        fail(at, "-period needs a value");
                    period = parse_double(toks[i], at);
                    have_period = true;
                } else if (toks[i].front() == '[') {
                    Query q = parse_query(toks[i], at);
                    if (q.kind != Query::Kind::Ports)
                        fail(at, "create_clock expects [get_ports X]");
                    port = q.name;
                } else {
                    fail(at, "unexpected token '" + toks[i] + "'");
                }
            }
            if (!have_period)
                fail(at, "create_clock: missing required -period");
            if (period <= 0.0)
                fail(at, "create_clock: period must be positive");
            if (port.empty())
                fail(at, "create_clock: missing [get_ports X]");
            if (cs.find_clock(port))
                fail(at, "duplicate clock " + port);
            cs.clocks.push_back({port, period, port});
        } else if (cmd == "set_input_delay" || cmd == "set_output_delay") {
            bool is_input = cmd == "set_input_delay";
            std::string clock, port;
            double delay = -1.0;
            for (size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "-clock") {
                    if (++i >= toks.size())
                        fail(at, "-clock needs a value");
                    clock = toks[i];
                } else if (toks[i].front() == '[') {
                    Query q = parse_query(toks[i], at);
                    if (q.kind != Query::Kind::Ports)
                        fail(at, cmd + " expects [get_ports X]");
                    port = q.name;
                } else {
                    delay = parse_double(toks[i], at);
                }
            }
            if (clock.empty())
                fail(at, cmd + ": missing required -clock");
            if (delay < 0.0)
                fail(at, cmd + ": missing or negative delay value");
            if (port.empty())
                fail(at, cmd + ": missing [get_ports X]");
            auto &table = is_input ? cs.input_delays : cs.output_delays;
            if (!table.emplace(port, std::make_pair(clock, delay)).second)
                fail(at, "duplicate " + cmd + " for port " + port);
        } else if (cmd == "set_false_path") {
            std::string from, to;
            for (size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "-from" || toks[i] == "-to") {
                    bool is_from = toks[i] == "-from";
                    if (++i >= toks.size())
                        fail(at, "-from/-to needs a value");
                    if (toks[i].front() != '[')
                        fail(at, "unsupported: only clock-to-clock false paths "
                                 "([get_clocks X]) are supported");
                    Query q = parse_query(toks[i], at);
                    if (q.kind != Query::Kind::Clocks)
                        fail(at, "unsupported: only clock-to-clock false paths "
                                 "([get_clocks X]) are supported");
                    (is_from ? from : to) = q.name;
                } else {
                    fail(at, "unexpected token '" + toks[i] + "'");
                }
            }
            if (from.empty() || to.empty())
                fail(at, "set_false_path: both -from and -to are required");
            if (!cs.false_paths.emplace(from, to).second)
                fail(at, "duplicate false path " + from + " -> " + to);
        } else if (cmd == "set_multicycle_path") {
            int n = -1;
            std::string from, to;
            for (size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "-setup") {
                    if (++i >= toks.size())
                        fail(at, "-setup needs a value");
                    double v = parse_double(toks[i], at);
                    n = static_cast<int>(v);
                    if (v != n || n < 1)
                        fail(at, "-setup multiplier must be an integer >= 1");
                } else if (toks[i] == "-from" || toks[i] == "-to") {
                    bool is_from = toks[i] == "-from";
                    if (++i >= toks.size())
                        fail(at, "-from/-to needs a value");
                    if (toks[i].front() == '[')
                        fail(at, "set_multicycle_path expects bare instance names");
                    (is_from ? from : to) = toks[i];
                } else {
                    fail(at, "unexpected token '" + toks[i] + "'");
                }
            }
            if (n < 1)
                fail(at, "set_multicycle_path: missing required -setup");
            if (from.empty() || to.empty())
                fail(at, "set_multicycle_path: both -from and -to are required");
            if (!cs.multicycle.emplace(std::make_pair(from, to), n).second)
                fail(at, "duplicate multicycle path " + from + " -> " + to);
        } else {
            if (!lenient)
                fail(at, "unknown command '" + cmd + "'");
            cs.diagnostics.push_back({Diagnostic::Severity::Warning, cmd,
                                      "sdc line " + std::to_string(at) +
                                          ": unsupported command skipped"});
        }
    };

    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        // trim trailing whitespace so a continuation backslash is last
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
            raw.pop_back();
        bool cont = !raw.empty() && raw.back() == '\\';
        if (cont)
            raw.pop_back();
        if (logical.empty())
            start_line = lineno;
        logical += raw;
        logical += ' ';
        if (cont)
            continue;
        handle(logical, start_line);
        logical.clear();
    }
    if (!logical.empty())
        handle(logical, start_line);
    return cs;
}

namespace {

// Trace a clock net backward through combinational drivers to clock-defined
// input ports. Returns the set of reachable clock names.
std::set<std::string> trace_clock_roots(const Netlist &n, const ConstraintSet &cs,
                                        const std::string &net)
{
    std::set<std::string> roots;
    std::set<std::string> seen;
    std::function<void(const std::string &)> walk = [&](const std::string &cur) {
        if (!seen.insert(cur).second)
            return;
        if (const Port *p = n.find_port(cur); p && p->is_input) {
            if (cs.find_clock(p->name))
                roots.insert(p->name);
            return;
        }
        for (const auto &g : n.gates)
            if (g.out == cur)
                for (const auto &in : g.inputs)
                    walk(in);
        // an ff q driving a clock net is not a clock root (no generated clocks)
    };
    walk(net);
    return roots;
}

} // namespace

ConstraintSet resolve(const ConstraintSet &raw, const Netlist &n, bool lenient)
{
    ConstraintSet cs = raw;
    cs.ff_domain.clear();
    cs.resolved = false;

    for (const auto &c : cs.clocks) {
        const Port *p = n.find_port(c.source_port);
        if (!p || !p->is_input)
            throw Error("clock " + c.name + ": source port " + c.source_port +
                        " is not an input port");
    }
    for (const auto &[port, cd] : cs.input_delays) {
        const Port *p = n.find_port(port);
        if (!p || !p->is_input)
            throw Error("set_input_delay: unknown input port " + port);
        if (!cs.find_clock(cd.first))
            throw Error("set_input_delay: unknown clock " + cd.first);
    }
    for (const auto &[port, cd] : cs.output_delays) {
        const Port *p = n.find_port(port);
        if (!p || p->is_input)
            throw Error("set_output_delay: unknown output port " + port);
        if (!cs.find_clock(cd.first))
            throw Error("set_output_delay: unknown clock " + cd.first);
    }
    for (const auto &[from, to] : cs.false_paths) {
        if (!cs.find_clock(from))
            throw Error("set_false_path: unknown clock " + from);
        if (!cs.find_clock(to))
            throw Error("set_false_path: unknown clock " + to);
    }
    for (const auto &[pair, nmult] : cs.multicycle) {
        if (!n.find_ff(pair.first))
            throw Error("set_multicycle_path: unknown instance " + pair.first);
        if (!n.find_ff(pair.second))
            throw Error("set_multicycle_path: unknown instance " + pair.second);
        (void)nmult;
    }

    for (const auto &ff : n.ffs) {
        auto roots = trace_clock_roots(n, cs, ff.clk);
        if (roots.size() == 1) {
            cs.ff_domain.emplace(ff.name, *roots.begin());
        } else if (roots.empty()) {
            if (!lenient)
                throw Error("unconstrained clock: no create_clock reaches " + ff.name +
                            " (clk net " + ff.clk + ")");
            cs.diagnostics.push_back({Diagnostic::Severity::Warning, ff.name,
                                      "unconstrained clock; excluded from analysis"});
        } else {
            std::string all;
            for (const auto &r : roots)
                all += (all.empty() ? "" : ", ") + r;
            if (!lenient)
                throw Error("ambiguous clock for " + ff.name + ": " + all);
            cs.diagnostics.push_back({Diagnostic::Severity::Warning, ff.name,
                                      "ambiguous clock (" + all +
                                          "); excluded from analysis"});
        }
    }
    cs.resolved = true;
    return cs;
}

const std::string &domain_of(const ConstraintSet &cs, const std::string &ff)
{
    auto it = cs.ff_domain.find(ff);
    if (it == cs.ff_domain.end())
        throw Error("no clock domain for " + ff);
    return it->second;
}

std::string constraints_to_json(const ConstraintSet &cs)
{
    std::ostringstream out;
    out << "{\n  \"clocks\": [";
    for (size_t i = 0; i < cs.clocks.size(); ++i) {
        const auto &c = cs.clocks[i];
        out << (i ? "," : "") << "\n    {\"name\": \"" << json_escape(c.name)
            << "\", \"period_ns\": " << fmt_ns(c.period_ns) << ", \"source_port\": \""
            << json_escape(c.source_port) << "\"}";
    }
    out << (cs.clocks.empty() ? "" : "\n  ") << "],\n  \"input_delays\": [";
    bool first = true;
    for (const auto &[port, cd] : cs.input_delays) {
        out << (first ? "" : ",") << "\n    {\"port\": \"" << json_escape(port)
            << "\", \"clock\": \"" << json_escape(cd.first)
            << "\", \"delay_ns\": " << fmt_ns(cd.second) << "}";
        first = false;
    }
    out << (first ? "" : "\n  ") << "],\n  \"output_delays\": [";
    first = true;
    for (const auto &[port, cd] : cs.output_delays) {
        out << (first ? "" : ",") << "\n    {\"port\": \"" << json_escape(port)
            << "\", \"clock\": \"" << json_escape(cd.first)
            << "\", \"delay_ns\": " << fmt_ns(cd.second) << "}";
        first = false;
    }
    out << (first ? "" : "\n  ") << "],\n  \"false_paths\": [";
    first = true;
    for (const auto &[from, to] : cs.false_paths) {
        out << (first ? "" : ",") << "\n    {\"from\": \"" << json_escape(from)
            << "\", \"to\": \"" << json_escape(to) << "\"}";
        first = false;
    }
    out << (first ? "" : "\n  ") << "],\n  \"multicycle\": [";
    first = true;
    for (const auto &[pair, nmult] : cs.multicycle) {
        out << (first ? "" : ",") << "\n    {\"from\": \"" << json_escape(pair.first)
            << "\", \"to\": \"" << json_escape(pair.second) << "\", \"setup\": " << nmult
            << "}";
        first = false;
    }
    out << (first ? "" : "\n  ") << "]\n}\n";
    return out.str();
}

} // namespace ticl
