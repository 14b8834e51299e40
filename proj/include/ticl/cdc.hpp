// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_CDC_HPP
#define TICL_CDC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ticl/constraints.hpp"
#include "ticl/netlist.hpp"
#include "ticl/techlib.hpp"

namespace ticl {

enum class CrossingClass {
    Unsynchronized,
    TwoFlopChain,
    GrayBus,
    Handshake,
    CombBeforeSync,
    MultiFanoutSync,
};

const char *to_string(CrossingClass c);

struct MtbfParams {
    double t_res_s = 0.0;
    double tau_s = 0.0;
    double f_data_hz = 0.0;
    double f_clock_hz = 0.0;
    double t_w_s = 0.0;
};

// MTBF evaluated in log space; `seconds` is clamped to [1e-300, 1e300] and
// `saturated` flags a clamp, with log10_seconds always exact.
struct MtbfValue {
    double seconds = 0.0;
    double log10_seconds = 0.0;
    bool saturated = false;
};

// One cross-domain signal (single net or whole bus) entering a destination
// domain.
struct Crossing {
    std::string signal; // source net, or bus name for grouped crossings
    std::string src_domain;
    std::string dst_domain;
    std::vector<std::string> dst_entry_ffs;
    CrossingClass cls = CrossingClass::Unsynchronized;
    int depth = 0; // synchronizer chain length (TwoFlopChain/GrayBus/Handshake)
    int width = 0; // bus width (GrayBus or ungrouped bus bits)
    bool coherency_risk = false; // multi-bit bus crossing without a gray grouping
    std::optional<MtbfValue> mtbf;
    std::vector<std::string> notes;
};

// exp(t_res/tau) / (f_data * f_clock * t_w). Throws on invalid parameters.
MtbfValue mtbf(const MtbfParams &p);

// Detects crossings, classifies synchronizer structures, groups declared
// buses, and pairs handshakes. Deterministic order by (signal, first entry
// ff). Requires resolved constraints; domainless ffs are skipped with a
// diagnostic.
std::vector<Crossing> find_crossings(const Netlist &n, const Library &lib,
                                     const ConstraintSet &cs,
                                     std::vector<Diagnostic> *diags = nullptr);

// Structural classification of a single-net crossing (chain walk only; bus
// grouping and handshake pairing happen in find_crossings).
CrossingClass classify(const Netlist &n, const ConstraintSet &cs, Crossing &crossing);

// MTBF of a TwoFlopChain(k) or GrayBus(w,k) crossing. The per-stage budget is
// t_res = (k-1)*T_dst - setup; bus bits combine as independent events
// (per-bit MTBF / w). Throws when the entry cell lacks tau/tw.
MtbfValue crossing_mtbf(const Crossing &crossing, const Netlist &n, const Library &lib,
                        const ConstraintSet &cs, double f_data_hz);

uint64_t bin_to_gray(uint64_t x, int width);
uint64_t gray_to_bin(uint64_t g, int width);

// Nullopt when every adjacent pair (plus wraparound for a full 2^width
// sequence) differs in exactly one bit; otherwise the first offending index
// i (words[i] -> words[i+1], or the wraparound step at index size-1).
std::optional<size_t> check_gray_sequence(std::span<const uint64_t> words, int width);

// Synchronizer stages for a source/destination frequency ratio
// (max/min, rounded to the nearest integer, >= 1): 1 -> 2, 2..4 -> 3, else 4.
int recommend_depth(int freq_ratio);

} // namespace ticl

#endif
