// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_MSIM_HPP
#define TICL_MSIM_HPP

#include <cstdint>
#include <vector>

#include "ticl/cdc.hpp"

namespace ticl {

// Monte Carlo metastability model: data transitions are a Poisson process at
// f_data; a transition within t_w of a destination clock edge is a
// metastable event whose resolution time is Exponential(tau); the event is a
// failure when resolution exceeds t_res. Edges with no event are skipped
// analytically (geometric thinning), so runs are event-bound, not
// cycle-bound.
struct SimConfig {
    MtbfParams params;
    uint64_t seed = 1;
    uint64_t min_events = 1000; // metastable events to observe
    double max_sim_time_s = 1e9;
};

struct SimEvent {
    double time_s = 0.0;
    double resolved_s = 0.0; // resolution draw
    bool failed = false;
};

struct SimResult {
    uint64_t events = 0;
    uint64_t failures = 0;
    double sim_time_s = 0.0;
    double empirical_mtbf_s = 0.0; // sim_time / failures; 0 when failures == 0
    double ci_low_s = 0.0;         // 95% Poisson CI on the MTBF
    double ci_high_s = 0.0;        // 0 when failures == 0 (one-sided)
    bool ci_one_sided = false;
};

// Deterministic given `seed` (single mt19937_64 stream, draws in event
// order). Stops at min_events or max_sim_time, whichever first.
SimResult simulate_mtbf(const SimConfig &cfg, std::vector<SimEvent> *event_log = nullptr);

// Adaptive synchronizer depth controller. Per evaluation window of
// `window_cycles` destination clock edges: more observed metastable events
// than `reliability_mode` raises the depth (capped), zero events lowers it
// (floored). The per-depth resolution budget anchors on the configured
// t_res as the depth-2 value: t_res(k) = t_res + (k-2)/f_clock.
struct AdaptivePolicy {
    int min_depth = 2;
    int max_depth = 5;
    int reliability_mode = 0; // 0 = performance .. 7 = max reliability
    uint64_t window_cycles = 1u << 16;
};

struct DepthTracePoint {
    uint64_t window = 0;
    int depth = 0;     // depth in force during this window
    uint64_t events = 0; // unresolved events observed in this window
};

std::vector<DepthTracePoint> simulate_adaptive_depth(const AdaptivePolicy &policy,
                                                     const SimConfig &cfg,
                                                     uint64_t windows);

} // namespace ticl

#endif
