// SPDX-License-Identifier: Apache-2.0
#include "ticl/msim.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

namespace ticl {

namespace {

// mt19937_64 is fully specified by the standard, so runs are reproducible.
// One stream per simulation; draws happen strictly in event order.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}

    // uniform in (0, 1]
    double u01()
    {
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double mean) { return -mean * std::log(u01()); }

    // geometric: edges to advance until the next edge with >= 1 event,
    // given per-edge event count ~ Poisson(lambda)
    uint64_t edges_until_event(double lambda)
    {
        // P(edge has >= 1 event) = 1 - e^-lambda; ln(1 - p) = -lambda
        double u = u01();
        double k = std::floor(std::log(u) / -lambda);
        if (k < 0.0)
            k = 0.0;
        if (k > 9e15)
            k = 9e15;
        return static_cast<uint64_t>(k) + 1;
    }

    // Poisson(lambda) conditioned on >= 1, by CDF inversion
    uint64_t truncated_poisson(double lambda)
    {
        double p0 = std::exp(-lambda);
        double target = p0 + u01() * (1.0 - p0);
        double cum = p0, term = p0;
        uint64_t k = 0;
        uint64_t cap = static_cast<uint64_t>(lambda + 20.0 * std::sqrt(lambda) + 100.0);
        while (cum < target && k < cap) {
            ++k;
            term *= lambda / static_cast<double>(k);
            cum += term;
        }
        return k >= 1 ? k : 1;
    }

    uint64_t poisson(double lambda)
    {
        double p0 = std::exp(-lambda);
        double target = u01();
        if (target <= p0)
            return 0;
        double cum = p0, term = p0;
        uint64_t k = 0;
        uint64_t cap = static_cast<uint64_t>(lambda + 20.0 * std::sqrt(lambda) + 100.0);
        while (cum < target && k < cap) {
            ++k;
            term *= lambda / static_cast<double>(k);
            cum += term;
        }
        return k;
    }
};

void check_config(const SimConfig &cfg)
{
    const auto &p = cfg.params;
    if (!(p.tau_s > 0.0) || !(p.t_w_s > 0.0) || !(p.f_data_hz > 0.0) ||
        !(p.f_clock_hz > 0.0) || p.t_res_s < 0.0)
        throw Error("sim: invalid model parameters");
    if (cfg.min_events < 1)
        throw Error("sim: min_events must be >= 1");
    if (!(cfg.max_sim_time_s > 0.0))
        throw Error("sim: max_sim_time must be positive");
}

} // namespace

SimResult simulate_mtbf(const SimConfig &cfg, std::vector<SimEvent> *event_log)
{
    check_config(cfg);
    const double t_clk = 1.0 / cfg.params.f_clock_hz;
    const double lambda = cfg.params.f_data_hz * cfg.params.t_w_s; // events per edge
    if (lambda > 500.0)
        throw Error("sim: more than 500 expected events per clock edge; "
                    "reduce f_data or t_w");

    Rng rng(cfg.seed);
    SimResult r;
    uint64_t edge = 0;

    while (r.events < cfg.min_events) {
        uint64_t skip = rng.edges_until_event(lambda);
        double next_time = static_cast<double>(edge + skip) * t_clk;
        if (next_time > cfg.max_sim_time_s) {
            r.sim_time_s = cfg.max_sim_time_s;
            break;
        }
        edge += skip;
        uint64_t k = rng.truncated_poisson(lambda);
        for (uint64_t i = 0; i < k; ++i) {
            double res = rng.exponential(cfg.params.tau_s);
            bool failed = res > cfg.params.t_res_s;
            ++r.events;
            if (failed)
                ++r.failures;
            if (event_log)
                event_log->push_back({next_time, res, failed});
        }
        r.sim_time_s = next_time;
    }

    // 95% Poisson CI on the failure rate, inverted to an MTBF interval
    using boost::math::chi_squared;
    double T = r.sim_time_s;
    double n = static_cast<double>(r.failures);
    double rate_hi = boost::math::quantile(chi_squared(2.0 * n + 2.0), 0.975) / (2.0 * T);
    r.ci_low_s = 1.0 / rate_hi;
    if (r.failures > 0) {
        r.empirical_mtbf_s = T / n;
        double rate_lo = boost::math::quantile(chi_squared(2.0 * n), 0.025) / (2.0 * T);
        r.ci_high_s = 1.0 / rate_lo;
    } else {
        r.ci_one_sided = true;
    }
    return r;
}

std::vector<DepthTracePoint> simulate_adaptive_depth(const AdaptivePolicy &policy,
                                                     const SimConfig &cfg,
                                                     uint64_t windows)
{
    check_config(cfg);
    if (policy.min_depth < 2 || policy.min_depth > policy.max_depth)
        throw Error("adaptive: need 2 <= min_depth <= max_depth");
    if (policy.reliability_mode < 0 || policy.reliability_mode > 7)
        throw Error("adaptive: reliability_mode must be in [0, 7]");
    if (policy.window_cycles < 1)
        throw Error("adaptive: window_cycles must be >= 1");
    if (windows < 1)
        throw Error("adaptive: need at least one window");

    const double t_clk = 1.0 / cfg.params.f_clock_hz;
    const double lambda_window = cfg.params.f_data_hz * cfg.params.t_w_s *
                                 static_cast<double>(policy.window_cycles);
    if (lambda_window > 500.0)
        throw Error("adaptive: more than 500 expected events per window; "
                    "shrink the window");

    Rng rng(cfg.seed);
    std::vector<DepthTracePoint> trace;
    trace.reserve(windows);
    int depth = policy.min_depth;

    for (uint64_t w = 0; w < windows; ++w) {
        // depth-2 budget comes from the configured t_res; each extra stage
        // adds one destination clock period
        double t_res = cfg.params.t_res_s + static_cast<double>(depth - 2) * t_clk;
        uint64_t events = rng.poisson(lambda_window);
        uint64_t unresolved = 0;
        for (uint64_t i = 0; i < events; ++i)
            if (rng.exponential(cfg.params.tau_s) > t_res)
                ++unresolved;
        trace.push_back({w, depth, unresolved});
        if (unresolved > static_cast<uint64_t>(policy.reliability_mode)) {
            if (depth < policy.max_depth)
                ++depth;
        } else if (unresolved == 0) {
            if (depth > policy.min_depth)
                --depth;
        }
    }
    return trace;
}

} // namespace ticl
