// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_SKEWOPT_HPP
#define TICL_SKEWOPT_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ticl/sta.hpp"

namespace ticl {

// Difference constraint s_u - s_v <= weight between register skews. Node 0
// is the virtual zero-skew anchor standing in for all ports.
struct SkewConstraint {
    int u = 0;
    int v = 0;
    double weight = 0.0;
    enum class Kind { Setup, Hold, Bound } kind = Kind::Bound;
    std::string note; // provenance, e.g. "setup rA->rB"
};

struct SkewConstraintGraph {
    std::vector<std::string> nodes; // [0] is the anchor
    std::vector<SkewConstraint> edges;
    double period_ns = 0.0;
    double bound_ns = 0.0;
};

struct SkewSchedule {
    std::map<std::string, double> skews; // register -> ns
    double period_ns = 0.0;
    double bound_ns = 0.0;

    SkewTable to_skew_table() const
    {
        SkewTable t;
        t.skews = skews;
        return t;
    }
};

struct SkewFeasibility {
    bool feasible = false;
    SkewSchedule schedule;            // valid when feasible
    std::vector<std::string> witness; // violating cycle node names otherwise
};

// One setup and one hold edge per register-to-register pair, plus anchor
// edges for I/O paths and the +/- bound box. Single clock domain only.
SkewConstraintGraph build_constraints(const TimingGraph &g, const ConstraintSet &cs,
                                      double period_ns, double bound_ns);

// Bellman-Ford feasibility; the returned skews are the canonical
// shortest-path potentials from the anchor (anchor skew 0).
SkewFeasibility feasible(const SkewConstraintGraph &scg);

// Binary search for the smallest feasible period within `tol`, between the
// per-edge floor and the zero-skew required period. Throws (with the witness
// cycle) when even the zero-skew period is hold-infeasible.
std::pair<double, SkewSchedule> optimize_period(const TimingGraph &g,
                                                const ConstraintSet &cs,
                                                double bound_ns, double tol_ns);

// Re-runs setup and hold checks with the schedule's skews at its period.
std::pair<std::vector<PathReport>, std::vector<PathReport>>
verify_schedule(const TimingGraph &g, const ConstraintSet &cs, const SkewSchedule &sched);

// Schedule file round-trip: header line "period_ns=X", then
// "register,skew_ns" CSV rows.
std::string schedule_to_csv(const SkewSchedule &sched);
SkewSchedule schedule_from_csv(std::string_view text);

} // namespace ticl

#endif
