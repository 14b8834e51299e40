// SPDX-License-Identifier: Apache-2.0
#include "ticl/techlib.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

#include "ticl/diag.hpp"

namespace ticl {

const CellSpec &Library::at(const std::string &cell) const
{
    const CellSpec *spec = find(cell);
    if (!spec)
        throw Error("unresolved cell " + cell + " in library " + name);
    return *spec;
}

namespace {

[[noreturn]] void fail(int line, const std::string &msg)
{
    throw Error("library line " + std::to_string(line) + ": " + msg);
}

double parse_time(const std::string &tok, int line)
{
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(line, "expected a number, got '" + tok + "'");
    if (v < 0.0)
        fail(line, "negative time");
    return v;
}

std::vector<std::string> tokenize(const std::string &line)
{
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t)
        toks.push_back(t);
    return toks;
}

} // namespace

Library parse_library(std::string_view text)
{
    Library lib;
    bool saw_header = false;
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
        if (!saw_header) {
            if (toks[0] != "library" || toks.size() != 2)
                fail(lineno, "first directive must be 'library NAME'");
            lib.name = toks[1];
            saw_header = true;
            continue;
        }

        if (toks[0] != "ff" && toks[0] != "comb")
            fail(lineno, "unknown directive '" + toks[0] + "'");
        if (toks.size() < 2)
            fail(lineno, "missing cell name");
        const std::string &cell = toks[1];

        CellSpec spec;
        bool have_setup = false, have_hold = false, have_cq = false, have_cqmin = false;
        bool have_delay = false, have_dmin = false, have_inputs = false;
        for (size_t i = 2; i < toks.size(); ++i) {
            auto eq = toks[i].find('=');
            if (eq == std::string::npos || eq == 0)
                fail(lineno, "expected key=value, got '" + toks[i] + "'");
            std::string key = toks[i].substr(0, eq);
            std::string val = toks[i].substr(eq + 1);
            if (key == "setup") {
                spec.setup = parse_time(val, lineno);
                have_setup = true;
            } else if (key == "hold") {
                spec.hold = parse_time(val, lineno);
                have_hold = true;
            } else if (key == "cq") {
                spec.cq_max = parse_time(val, lineno);
                have_cq = true;
            } else if (key == "cqmin") {
                spec.cq_min = parse_time(val, lineno);
                have_cqmin = true;
            } else if (key == "tau") {
                spec.tau = parse_time(val, lineno);
            } else if (key == "tw") {
                spec.tw = parse_time(val, lineno);
            } else if (key == "delay") {
                spec.delay_max = parse_time(val, lineno);
                have_delay = true;
            } else if (key == "dmin") {
                spec.delay_min = parse_time(val, lineno);
                have_dmin = true;
            } else if (key == "inputs") {
                int iv = 0;
                auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), iv);
                if (ec != std::errc() || p != val.data() + val.size() || iv < 1)
                    fail(lineno, "inputs= must be a positive integer");
                spec.inputs = iv;
                have_inputs = true;
            } else {
                fail(lineno, "unknown key " + key + "=");
            }
        }

        if (toks[0] == "ff") {
            spec.kind = CellKind::Sequential;
            if (!have_setup || !have_hold || !have_cq)
                fail(lineno, "ff requires setup=, hold=, cq=");
            if (have_delay || have_dmin || have_inputs)
                fail(lineno, "delay=/dmin=/inputs= not valid on an ff");
            if (!have_cqmin)
                spec.cq_min = spec.cq_max;
            if (spec.cq_min > spec.cq_max)
                fail(lineno, "cqmin > cq");
            if ((spec.tau && *spec.tau <= 0.0) || (spec.tw && *spec.tw <= 0.0))
                fail(lineno, "tau/tw must be positive");
        } else {
            spec.kind = CellKind::Combinational;
            if (!have_delay || !have_inputs)
                fail(lineno, "comb requires delay= and inputs=");
            if (have_setup || have_hold || have_cq || have_cqmin || spec.tau || spec.tw)
                fail(lineno, "sequential keys not valid on a comb cell");
            if (!have_dmin)
                spec.delay_min = spec.delay_max;
            if (spec.delay_min > spec.delay_max)
                fail(lineno, "dmin > delay");
        }

        if (!lib.cells.emplace(cell, spec).second)
            fail(lineno, "duplicate cell " + cell);
    }
    if (!saw_header)
        throw Error("library: missing library directive");
    return lib;
}

namespace {

CellSpec seq_cell(double setup, double hold, double cq, double tau, double tw)
{
    CellSpec s;
    s.kind = CellKind::Sequential;
    s.setup = setup;
    s.hold = hold;
    s.cq_max = cq;
    s.cq_min = cq;
    s.tau = tau;
    s.tw = tw;
    return s;
}

CellSpec comb_cell(double delay, int inputs)
{
    CellSpec s;
    s.kind = CellKind::Combinational;
    s.delay_max = delay;
    s.delay_min = delay;
    s.inputs = inputs;
    return s;
}

} // namespace

Library builtin_fpga()
{
    Library lib;
    lib.name = "fpga";
    // tau/tw are placeholders, not characterization data; override via .tlib
    lib.cells.emplace("FDRE", seq_cell(0.180, 0.120, 0.450, 0.100, 0.100));
    lib.cells.emplace("LUT6", comb_cell(0.320, 6));
    lib.cells.emplace("BUFG", comb_cell(0.030, 1));
    return lib;
}

Library builtin_asic()
{
    Library lib;
    lib.name = "asic";
    lib.cells.emplace("DFF_SVT", seq_cell(0.045, 0.035, 0.085, 0.020, 0.020));
    lib.cells.emplace("NAND2", comb_cell(0.025, 2));
    lib.cells.emplace("NOR2", comb_cell(0.030, 2));
    lib.cells.emplace("INV", comb_cell(0.012, 1));
    lib.cells.emplace("XOR2", comb_cell(0.050, 2));
    lib.cells.emplace("CLKBUF", comb_cell(0.015, 1));
    return lib;
}

} // namespace ticl
