// SPDX-License-Identifier: Apache-2.0
#include "ticl/cdc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

namespace ticl {

const char *to_string(CrossingClass c)
{
    switch (c) {
    case CrossingClass::Unsynchronized: return "unsynchronized";
    case CrossingClass::TwoFlopChain: return "two_flop_chain";
    case CrossingClass::GrayBus: return "gray_bus";
    case CrossingClass::Handshake: return "handshake";
    case CrossingClass::CombBeforeSync: return "comb_before_sync";
    case CrossingClass::MultiFanoutSync: return "multi_fanout_sync";
    }
    return "?";
}

namespace {

void check_params(const MtbfParams &p)
{
    if (!(p.tau_s > 0.0))
        throw Error("mtbf: tau must be positive");
    if (!(p.t_w_s > 0.0))
        throw Error("mtbf: t_w must be positive");
    if (!(p.f_data_hz > 0.0))
        throw Error("mtbf: f_data must be positive");
    if (!(p.f_clock_hz > 0.0))
        throw Error("mtbf: f_clock must be positive");
    if (p.t_res_s < 0.0)
        throw Error("mtbf: t_res must be nonnegative");
}

MtbfValue value_from_log10(double log10_seconds)
{
    MtbfValue v;
    v.log10_seconds = log10_seconds;
    if (log10_seconds > 300.0) {
        v.seconds = 1e300;
        v.saturated = true;
    } else if (log10_seconds < -300.0) {
        v.seconds = 1e-300;
        v.saturated = true;
    } else {
        v.seconds = std::pow(10.0, log10_seconds);
    }
    return v;
}

} // namespace

MtbfValue mtbf(const MtbfParams &p)
{
    check_params(p);
    double exponent = p.t_res_s / p.tau_s;
    double log10_den =
        std::log10(p.f_data_hz) + std::log10(p.f_clock_hz) + std::log10(p.t_w_s);
    double log10_mtbf = exponent / std::numbers::ln10 - log10_den;

    MtbfValue v = value_from_log10(log10_mtbf);
    if (!v.saturated && exponent < 690.0)
        v.seconds = std::exp(exponent) / (p.f_data_hz * p.f_clock_hz * p.t_w_s);
    return v;
}

namespace {

struct Consumer {
    enum class Kind { FfD, FfClk, GateIn, OutPort } kind;
    std::string name; // instance or port
};

// net -> consumers, in deterministic (declaration) order
std::map<std::string, std::vector<Consumer>> consumer_index(const Netlist &n)
{
    std::map<std::string, std::vector<Consumer>> idx;
    for (const auto &f : n.ffs) {
        idx[f.d].push_back({Consumer::Kind::FfD, f.name});
        idx[f.clk].push_back({Consumer::Kind::FfClk, f.name});
    }
    for (const auto &g : n.gates)
        for (const auto &in : g.inputs)
            idx[in].push_back({Consumer::Kind::GateIn, g.name});
    for (const auto &p : n.ports)
        if (!p.is_input)
            idx[p.name].push_back({Consumer::Kind::OutPort, p.name});
    return idx;
}

std::string domain_or_empty(const ConstraintSet &cs, const std::string &ff)
{
    auto it = cs.ff_domain.find(ff);
    return it == cs.ff_domain.end() ? std::string() : it->second;
}

} // namespace

// Chain walk. The chain ends at the first stage whose q does anything other
// than feed exactly one same-domain ff d pin; consumers tapping stage >= 2
// see a settled value, so only a stage-1 tap is flagged as MultiFanoutSync.
CrossingClass classify(const Netlist &n, const ConstraintSet &cs, Crossing &crossing)
{
    const FfInst *entry = n.find_ff(crossing.dst_entry_ffs.front());
    if (!entry)
        throw Error("classify: unknown entry ff");

    // combinational logic between the async source and the entry ff?
    std::string drv = n.driver_of(entry->d);
    if (drv.size() > 4 && drv.compare(drv.size() - 4, 4, ".out") == 0) {
        crossing.cls = CrossingClass::CombBeforeSync;
        return crossing.cls;
    }

    auto consumers = consumer_index(n);
    std::vector<std::string> stages{entry->name};
    const FfInst *cur = entry;
    bool tapped = false;
    while (true) {
        auto it = consumers.find(cur->q);
        size_t nsinks = it == consumers.end() ? 0 : it->second.size();
        const FfInst *next = nullptr;
        size_t ff_sinks = 0;
        if (it != consumers.end()) {
            for (const auto &c : it->second) {
                if (c.kind != Consumer::Kind::FfD)
                    continue;
                const FfInst *ff = n.find_ff(c.name);
                if (domain_or_empty(cs, ff->name) == crossing.dst_domain) {
                    ++ff_sinks;
                    next = ff;
                }
            }
        }
        if (ff_sinks == 1 && nsinks == 1) {
            stages.push_back(next->name);
            cur = next;
            continue;
        }
        tapped = ff_sinks >= 1 && nsinks >= 2;
        break;
    }

    crossing.depth = static_cast<int>(stages.size());
    crossing.dst_entry_ffs = {entry->name};
    if (stages.size() >= 2)
        crossing.cls = CrossingClass::TwoFlopChain;
    else if (tapped)
        crossing.cls = CrossingClass::MultiFanoutSync;
    else
        crossing.cls = CrossingClass::Unsynchronized;
    return crossing.cls;
}

std::vector<Crossing> find_crossings(const Netlist &n, const Library &lib,
                                     const ConstraintSet &cs,
                                     std::vector<Diagnostic> *diags)
{
    if (!cs.resolved)
        throw Error("constraints not resolved");
    (void)lib;

    auto warn = [&](const std::string &obj, const std::string &msg) {
        if (diags)
            diags->push_back({Diagnostic::Severity::Warning, obj, msg});
    };

    std::vector<Crossing> crossings;
    for (const auto &dst : n.ffs) {
        std::string dst_dom = domain_or_empty(cs, dst.name);
        if (dst_dom.empty()) {
            warn(dst.name, "no clock domain; skipped by crossing detection");
            continue;
        }
        for (const auto &src : fanin_cone_of_net(n, dst.d)) {
            if (src.kind != ConeSource::Kind::FfQ)
                continue;
            const FfInst *src_ff = n.find_ff(src.name);
            std::string src_dom = domain_or_empty(cs, src_ff->name);
            if (src_dom.empty()) {
                warn(src_ff->name, "no clock domain; skipped by crossing detection");
                continue;
            }
            if (src_dom == dst_dom)
                continue;
            Crossing c;
            c.signal = src_ff->q;
            c.src_domain = src_dom;
            c.dst_domain = dst_dom;
            c.dst_entry_ffs = {dst.name};
            classify(n, cs, c);
            crossings.push_back(std::move(c));
        }
    }

    std::sort(crossings.begin(), crossings.end(), [](const Crossing &a, const Crossing &b) {
        return std::tie(a.signal, a.dst_entry_ffs.front(), a.dst_domain) <
               std::tie(b.signal, b.dst_entry_ffs.front(), b.dst_domain);
    });

    // bus grouping
    std::vector<Crossing> grouped;
    std::vector<bool> consumed(crossings.size(), false);
    for (const auto &[bus, nets] : n.buses) {
        // bit index -> crossing index, only when each bit crosses exactly once
        // into one (src, dst) domain pair
        std::map<std::pair<std::string, std::string>, std::vector<int>> by_pair;
        for (size_t ci = 0; ci < crossings.size(); ++ci) {
            const auto &c = crossings[ci];
            if (std::find(nets.begin(), nets.end(), c.signal) != nets.end())
                by_pair[{c.src_domain, c.dst_domain}].push_back(static_cast<int>(ci));
        }
        for (const auto &[pair, idxs] : by_pair) {
            if (idxs.size() < 2)
                continue;
            bool gray_attr = n.attr(bus, "gray") == "true";
            std::set<std::string> bit_signals;
            for (int ci : idxs)
                bit_signals.insert(crossings[static_cast<size_t>(ci)].signal);
            bool full = idxs.size() == nets.size() && bit_signals.size() == nets.size();
            bool uniform_chains = true;
            int depth = crossings[static_cast<size_t>(idxs[0])].depth;
            for (int ci : idxs) {
                const auto &c = crossings[static_cast<size_t>(ci)];
                if (c.cls != CrossingClass::TwoFlopChain || c.depth != depth)
                    uniform_chains = false;
            }
            if (gray_attr && full && uniform_chains) {
                Crossing merged;
                merged.signal = bus;
                merged.src_domain = pair.first;
                merged.dst_domain = pair.second;
                merged.cls = CrossingClass::GrayBus;
                merged.depth = depth;
                merged.width = static_cast<int>(nets.size());
                for (int ci : idxs) {
                    merged.dst_entry_ffs.push_back(
                        crossings[static_cast<size_t>(ci)].dst_entry_ffs.front());
                    consumed[static_cast<size_t>(ci)] = true;
                }
                grouped.push_back(std::move(merged));
            } else {
                std::string why = !gray_attr          ? "no gray=true attribute"
                                  : !full             ? "only part of the bus crosses"
                                                      : "bits are not uniform two-flop chains";
                for (int ci : idxs) {
                    crossings[static_cast<size_t>(ci)].width =
                        static_cast<int>(nets.size());
                    crossings[static_cast<size_t>(ci)].coherency_risk = true;
                    crossings[static_cast<size_t>(ci)].notes.push_back(
                        "multi-bit coherency risk: bus " + bus + " (" + why + ")");
                }
            }
        }
    }
    for (size_t i = 0; i < crossings.size(); ++i)
        if (!consumed[i])
            grouped.push_back(std::move(crossings[i]));

    std::sort(grouped.begin(), grouped.end(), [](const Crossing &a, const Crossing &b) {
        return std::tie(a.signal, a.dst_entry_ffs.front(), a.dst_domain) <
               std::tie(b.signal, b.dst_entry_ffs.front(), b.dst_domain);
    });

    // handshake pairing: req/ack nets, opposite directions, both 2-flop synced
    for (auto &c : grouped) {
        if (n.attr(c.signal, "handshake") != "req" ||
            c.cls != CrossingClass::TwoFlopChain)
            continue;
        for (auto &other : grouped) {
            if (&other == &c)
                continue;
            if (n.attr(other.signal, "handshake") == "ack" &&
                other.cls == CrossingClass::TwoFlopChain &&
                other.src_domain == c.dst_domain && other.dst_domain == c.src_domain) {
                c.cls = CrossingClass::Handshake;
                other.cls = CrossingClass::Handshake;
                break;
            }
        }
        if (c.cls == CrossingClass::TwoFlopChain &&
            n.attr(c.signal, "handshake") == "req")
            c.notes.push_back("handshake req without a synchronized ack partner");
    }

    return grouped;
}

MtbfValue crossing_mtbf(const Crossing &crossing, const Netlist &n, const Library &lib,
                        const ConstraintSet &cs, double f_data_hz)
{
    if (crossing.cls != CrossingClass::TwoFlopChain &&
        crossing.cls != CrossingClass::GrayBus)
        throw Error("crossing_mtbf: only two-flop chains and gray buses have a "
                    "defined MTBF");
    const ClockDef *clk = cs.find_clock(crossing.dst_domain);
    if (!clk)
        throw Error("crossing_mtbf: unknown destination clock " + crossing.dst_domain);
    const FfInst *entry = n.find_ff(crossing.dst_entry_ffs.front());
    if (!entry)
        throw Error("crossing_mtbf: unknown entry ff");
    const CellSpec &cell = lib.at(entry->cell);
    if (!cell.tau || !cell.tw)
        throw Error("library lacks metastability parameters (tau/tw) for cell " +
                    entry->cell);

    double period_ns = clk->period_ns;
    // per-stage budget: each stage past the first adds one period
    double t_res_ns = (crossing.depth - 1) * period_ns - cell.setup;
    if (t_res_ns < 0.0)
        t_res_ns = 0.0;

    MtbfParams p;
    p.t_res_s = t_res_ns * 1e-9;
    p.tau_s = *cell.tau * 1e-9;
    p.t_w_s = *cell.tw * 1e-9;
    p.f_clock_hz = 1e9 / period_ns;
    p.f_data_hz = f_data_hz;

    MtbfValue v = mtbf(p);
    if (crossing.cls == CrossingClass::GrayBus) {
        // independent bits: bus failure rate is width times the per-bit rate
        double w = static_cast<double>(crossing.width);
        double log10_bus = v.log10_seconds - std::log10(w);
        MtbfValue bus = value_from_log10(log10_bus);
        if (!v.saturated && !bus.saturated)
            bus.seconds = v.seconds / w;
        return bus;
    }
    return v;
}

uint64_t bin_to_gray(uint64_t x, int width)
{
    if (width < 1 || width > 64)
        throw Error("gray: width must be in [1, 64]");
    uint64_t mask = width == 64 ? ~0ull : ((1ull << width) - 1);
    if (x > mask)
        throw Error("gray: value out of range for width " + std::to_string(width));
    return (x ^ (x >> 1)) & mask;
}

uint64_t gray_to_bin(uint64_t g, int width)
{
    if (width < 1 || width > 64)
        throw Error("gray: width must be in [1, 64]");
    uint64_t mask = width == 64 ? ~0ull : ((1ull << width) - 1);
    if (g > mask)
        throw Error("gray: value out of range for width " + std::to_string(width));
    uint64_t b = g;
    for (int shift = 1; shift < 64; shift <<= 1)
        b ^= b >> shift;
    return b & mask;
}

std::optional<size_t> check_gray_sequence(std::span<const uint64_t> words, int width)
{
    if (words.empty())
        throw Error("gray: empty sequence");
    if (width < 1 || width > 64)
        throw Error("gray: width must be in [1, 64]");
    uint64_t mask = width == 64 ? ~0ull : ((1ull << width) - 1);
    for (uint64_t w : words)
        if (w > mask)
            throw Error("gray: value out of range for width " + std::to_string(width));

    for (size_t i = 0; i + 1 < words.size(); ++i)
        if (std::popcount(words[i] ^ words[i + 1]) != 1)
            return i;
    bool full_cycle = width < 64 && words.size() == (1ull << width);
    if (full_cycle && std::popcount(words.back() ^ words.front()) != 1)
        return words.size() - 1;
    return std::nullopt;
}

int recommend_depth(int freq_ratio)
{
    if (freq_ratio < 1)
        throw Error("recommend_depth: ratio must be >= 1");
    if (freq_ratio == 1)
        return 2;
    if (freq_ratio <= 4)
        return 3;
    return 4;
}

} // namespace ticl
