// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>
#include <random>
#include <thread>

#include "support.hpp"
#include "ticl/sta.hpp"

using namespace ticl;
using testsupport::Design;
using testsupport::EnumOracle;
using testsupport::make_random_design;
using testsupport::read_fixture;

namespace {

Design load(const std::string &tnl, Library lib, const std::string &sdc)
{
    return testsupport::load_design(tnl, std::move(lib), sdc);
}

Design load_fixture(const std::string &tnl, Library lib, const std::string &sdc)
{
    return testsupport::load_fixture_design(tnl, std::move(lib), sdc);
}

const PathReport &find_pair(const std::vector<PathReport> &reports,
                            const std::string &launch, const std::string &capture)
{
    for (const auto &r : reports)
        if (r.launch == launch && r.capture == capture)
            return r;
    throw std::runtime_error("no report " + launch + " -> " + capture);
}

double segment_sum(const PathReport &r)
{
    double s = 0.0;
    for (const auto &seg : r.segments)
        s += seg.ns;
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// graph construction
// ---------------------------------------------------------------------------

TEST(BuildGraph, SmallestSequentialPath)
{
    Design d = load("design d\nport in clk\nport in din\n"
                    "ff r1 FDRE clk=clk d=din q=q1\n"
                    "gate l LUT6 in=q1,q1,q1,q1,q1,q1 out=y\n"
                    "ff r2 FDRE clk=clk d=y q=q2\n",
                    builtin_fpga(),
                    "create_clock -period 2.0 [get_ports clk]\n"
                    "set_input_delay -clock clk 0.1 [get_ports din]\n");
    // nodes: clk, din, 2 ffs x3, gate x2 = 10; arcs: 2 cq, din->r1.d,
    // q1->l.in, l cell, y->r2.d = 6
    EXPECT_EQ(d.g.nodes.size(), 10u);
    EXPECT_EQ(d.g.arcs.size(), 6u);
    EXPECT_EQ(d.g.topo.size(), d.g.nodes.size());

    // the r1 -> r2 path decomposes into exactly cq + net + lut + net
    auto reports = setup_check(d.g, d.cs, {});
    const PathReport &r = find_pair(reports, "r1", "r2");
    ASSERT_EQ(r.segments.size(), 3u);
    EXPECT_EQ(r.segments[0].label, "clock_to_q");
    EXPECT_DOUBLE_EQ(r.segments[0].ns, 0.450);
    EXPECT_EQ(r.segments[1].label, "logic");
    EXPECT_DOUBLE_EQ(r.segments[1].ns, 0.320);
    EXPECT_EQ(r.segments[2].label, "routing");
    EXPECT_DOUBLE_EQ(r.segments[2].ns, 0.0);
}

TEST(BuildGraph, ReferenceDesignPathWeight)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto reports = setup_check(d.g, d.cs, {});
    const PathReport &r = find_pair(reports, "r1", "r2");
    EXPECT_NEAR(r.arrival, 2.35, 1e-9);
    EXPECT_NEAR(segment_sum(r), 2.35, 1e-9);
}

TEST(BuildGraph, CombinationalLoop)
{
    Netlist n = parse_netlist("design d\nport in clk\n"
                              "gate g1 BUFG in=b out=a\n"
                              "gate g2 BUFG in=a out=b\n"
                              "ff r FDRE clk=clk d=a q=q\n");
    try {
        build_graph(n, builtin_fpga());
        FAIL() << "expected loop error";
    } catch (const Error &e) {
        EXPECT_NE(std::string(e.what()).find("loop"), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// setup / hold checks
// ---------------------------------------------------------------------------

TEST(SetupCheck, FpgaReferenceZeroSlack)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto reports = setup_check(d.g, d.cs, {});
    ASSERT_FALSE(reports.empty());
    EXPECT_NEAR(reports.front().slack, 0.0, 1e-9); // worst first
    EXPECT_EQ(reports.front().launch, "r1");
    EXPECT_EQ(reports.front().capture, "r2");
}

TEST(SetupCheck, AsicReferenceZeroSlack)
{
    Design d = load_fixture("ref_asic.tnl", builtin_asic(), "ref_asic.sdc");
    auto reports = setup_check(d.g, d.cs, {});
    const PathReport &r = find_pair(reports, "r1", "r2");
    EXPECT_NEAR(r.slack, 0.0, 1e-9);
    EXPECT_NEAR(r.arrival, 0.755, 1e-9);
    ASSERT_EQ(r.segments.size(), 3u);
    EXPECT_NEAR(r.segments[0].ns, 0.085, 1e-9);
    EXPECT_NEAR(r.segments[1].ns, 0.425, 1e-9);
    EXPECT_NEAR(r.segments[2].ns, 0.245, 1e-9);
}

TEST(SetupCheck, MulticycleRelaxesRequiredTime)
{
    std::string tlib = "library L\nff FF setup=0.18 hold=0 cq=0\n"
                       "comb D3 delay=3.0 inputs=1\n";
    Design d = load("design d\nport in clk\n"
                    "ff A FF clk=clk d=qb q=qa\n"
                    "gate s D3 in=qa out=w\n"
                    "ff B FF clk=clk d=w q=qb\n",
                    parse_library(tlib),
                    "create_clock -period 2.35 [get_ports clk]\n"
                    "set_multicycle_path -setup 2 -from A -to B\n");
    auto reports = setup_check(d.g, d.cs, {});
    const PathReport &r = find_pair(reports, "A", "B");
    EXPECT_EQ(r.multicycle, 2);
    EXPECT_NEAR(r.required, 4.52, 1e-9);
    EXPECT_NEAR(r.slack, 1.52, 1e-9);
    // hold still captures at edge 0
    auto hold = hold_check(d.g, d.cs, {});
    EXPECT_EQ(find_pair(hold, "A", "B").multicycle, 1);
}

TEST(HoldCheck, DirectWireFpga)
{
    Design d = load("design d\nport in clk\n"
                    "ff a FDRE clk=clk d=qb q=qa\n"
                    "ff b FDRE clk=clk d=qa q=qb\n",
                    builtin_fpga(), "create_clock -period 5.0 [get_ports clk]\n");
    auto reports = hold_check(d.g, d.cs, {});
    EXPECT_NEAR(find_pair(reports, "a", "b").slack, 0.330, 1e-9);

    // +0.5 ns capture skew turns it into a violation
    SkewTable skew;
    skew.skews["b"] = 0.5;
    auto skewed = hold_check(d.g, d.cs, skew);
    EXPECT_NEAR(find_pair(skewed, "a", "b").slack, -0.170, 1e-9);
}

TEST(HoldCheck, DirectWireAsic)
{
    Design d = load("design d\nport in clk\n"
                    "ff a DFF_SVT clk=clk d=qb q=qa\n"
                    "ff b DFF_SVT clk=clk d=qa q=qb\n",
                    builtin_asic(), "create_clock -period 1.0 [get_ports clk]\n");
    auto reports = hold_check(d.g, d.cs, {});
    EXPECT_NEAR(find_pair(reports, "a", "b").slack, 0.050, 1e-9);
}

TEST(HoldCheck, PeriodIndependent)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto at_ref = hold_check(d.g, d.cs, {});
    ConstraintSet slower = d.cs;
    slower.clocks[0].period_ns = 7.77;
    auto at_slow = hold_check(d.g, slower, {});
    ASSERT_EQ(at_ref.size(), at_slow.size());
    for (size_t i = 0; i < at_ref.size(); ++i) {
        EXPECT_EQ(at_ref[i].launch, at_slow[i].launch);
        EXPECT_EQ(at_ref[i].slack, at_slow[i].slack);
    }
}

TEST(Checks, FalsePathsAndCrossDomainSkipped)
{
    Design d = load("design d\nport in clk_a\nport in clk_b\nport out oa\n"
                    "ff fa FDRE clk=clk_a d=qa q=qa\n"
                    "ff fb FDRE clk=clk_b d=qa q=qb\n"
                    "ff fc FDRE clk=clk_a d=qc q=qc\n"
                    "ff fd FDRE clk=clk_a d=qc2 q=qd\n"
                    "gate c BUFG in=qc out=qc2\n"
                    "gate co BUFG in=qd out=oa\n",
                    builtin_fpga(),
                    "create_clock -period 5 [get_ports clk_a]\n"
                    "create_clock -period 9 [get_ports clk_b]\n"
                    "set_output_delay -clock clk_a 0.5 [get_ports oa]\n"
                    "set_false_path -from [get_clks clk_a] -to [get_clks clk_a]\n");
    auto reports = setup_check(d.g, d.cs, {});
    // fa->fb crosses domains; the reg-to-reg, reg-to-port pairs are all a
    // declared false path
    EXPECT_TRUE(reports.empty());
    EXPECT_TRUE(hold_check(d.g, d.cs, {}).empty());
}

TEST(Checks, UnconstrainedEndpointDiagnostics)
{
    std::vector<Diagnostic> diags;
    Design d = load("design d\nport in clk\nport in din\nport out dout\n"
                    "ff r FDRE clk=clk d=din q=dout\n",
                    builtin_fpga(), "create_clock -period 2 [get_ports clk]\n");
    auto reports = setup_check(d.g, d.cs, {}, &diags);
    EXPECT_TRUE(reports.empty());
    EXPECT_EQ(diags.size(), 2u); // din unconstrained, dout unconstrained
}

// ---------------------------------------------------------------------------
// fmax / top_paths / derate
// ---------------------------------------------------------------------------

TEST(Fmax, AsicReference)
{
    Design d = load_fixture("ref_asic.tnl", builtin_asic(), "ref_asic.sdc");
    auto result = fmax(d.g, d.cs, {});
    ASSERT_EQ(result.count("clk"), 1u);
    EXPECT_NEAR(result.at("clk"), 1250.0, 1e-6);
}

TEST(Fmax, FpgaReference)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto result = fmax(d.g, d.cs, {});
    EXPECT_NEAR(result.at("clk"), 395.2569169960474, 1e-6);
}

TEST(Fmax, SelfLoopThroughOneLut)
{
    Design d = load("design d\nport in clk\n"
                    "ff r FDRE clk=clk d=y q=q\n"
                    "gate l LUT6 in=q,q,q,q,q,q out=y\n",
                    builtin_fpga(), "create_clock -period 2.0 [get_ports clk]\n");
    auto result = fmax(d.g, d.cs, {});
    EXPECT_NEAR(result.at("clk"), 1000.0 / 0.95, 1e-6);
}

TEST(Fmax, NoPathsDiagnostic)
{
    std::vector<Diagnostic> diags;
    Design d = load("design d\nport in clk\nport in free\n"
                    "gate b BUFG in=free out=y\n",
                    builtin_fpga(), "create_clock -period 2.0 [get_ports clk]\n");
    auto result = fmax(d.g, d.cs, {}, &diags);
    EXPECT_TRUE(result.empty());
    bool noted = false;
    for (const auto &d2 : diags)
        if (d2.message.find("fmax not reported") != std::string::npos)
            noted = true;
    EXPECT_TRUE(noted);
}

TEST(TopPaths, SelectionAndTies)
{
    // two structurally identical pairs -> equal slack, name-ordered
    Design d = load("design d\nport in clk\n"
                    "ff a1 FDRE clk=clk d=x1 q=x1\n"
                    "ff a2 FDRE clk=clk d=x2 q=x2\n",
                    builtin_fpga(), "create_clock -period 3 [get_ports clk]\n");
    auto reports = setup_check(d.g, d.cs, {});
    ASSERT_EQ(reports.size(), 2u);
    auto top1 = top_paths(reports, 1);
    ASSERT_EQ(top1.size(), 1u);
    EXPECT_EQ(top1[0].launch, "a1");
    auto top9 = top_paths(reports, 9);
    EXPECT_EQ(top9.size(), 2u);
    EXPECT_EQ(top9[0].launch, "a1");
    EXPECT_EQ(top9[1].launch, "a2");
    EXPECT_THROW(top_paths(reports, 0), Error);
}

TEST(Derate, ScalesMaxDelaysOnly)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto base = setup_check(d.g, d.cs, {});

    TimingGraph same = apply_derate(d.g, 1.0);
    auto unchanged = setup_check(same, d.cs, {});
    ASSERT_EQ(base.size(), unchanged.size());
    for (size_t i = 0; i < base.size(); ++i)
        EXPECT_EQ(base[i].slack, unchanged[i].slack);

    TimingGraph slower = apply_derate(d.g, 1.2);
    auto derated = setup_check(slower, d.cs, {});
    EXPECT_NEAR(find_pair(derated, "r1", "r2").arrival, 2.82, 1e-9);
    // hold arrivals are untouched
    auto hold_base = hold_check(d.g, d.cs, {});
    auto hold_der = hold_check(slower, d.cs, {});
    EXPECT_EQ(find_pair(hold_base, "r1", "r2").arrival,
              find_pair(hold_der, "r1", "r2").arrival);

    EXPECT_THROW(apply_derate(d.g, 0.0), Error);
}

// ---------------------------------------------------------------------------
// properties
// ---------------------------------------------------------------------------

TEST(StaProperties, OracleEquivalenceOnRandomDesigns)
{
    std::mt19937_64 rng(0xB0A710ADu);
    for (int trial = 0; trial < 200; ++trial) {
        auto rd = make_random_design(rng);
        Design d = load(rd.tnl, parse_library(rd.tlib),
                        "create_clock -period 50 [get_ports clk]\n");
        // exact floating-point equality under fixed reduction order
        EXPECT_NO_THROW(testsupport::check_oracle_equivalence(d))
            << "trial " << trial << "\n" << rd.tnl;
    }
}

TEST(StaProperties, PeriodShiftMovesSlackByNDelta)
{
    std::string tlib = "library L\nff FF setup=0.18 hold=0 cq=0\n"
                       "comb D3 delay=3.0 inputs=1\n";
    Design d = load("design d\nport in clk\n"
                    "ff A FF clk=clk d=qb q=qa\n"
                    "gate s D3 in=qa out=w\n"
                    "ff B FF clk=clk d=w q=qb\n",
                    parse_library(tlib),
                    "create_clock -period 4.0 [get_ports clk]\n"
                    "set_multicycle_path -setup 2 -from A -to B\n");
    auto base = setup_check(d.g, d.cs, {});
    ConstraintSet shifted = d.cs;
    double delta = 0.25;
    shifted.clocks[0].period_ns += delta;
    auto moved = setup_check(d.g, shifted, {});
    ASSERT_EQ(base.size(), moved.size());
    for (size_t i = 0; i < base.size(); ++i) {
        ASSERT_EQ(base[i].launch, moved[i].launch);
        EXPECT_NEAR(moved[i].slack - base[i].slack, base[i].multicycle * delta, 1e-9);
    }
}

TEST(StaProperties, DelayIncreaseNeverHelpsSetup)
{
    std::string base_lib = "library L\nff FF setup=0.1 hold=0.05 cq=0.2\n"
                           "comb C delay=0.5 inputs=2\n";
    std::string bumped_lib = "library L\nff FF setup=0.1 hold=0.05 cq=0.2\n"
                             "comb C delay=0.9 inputs=2\n";
    std::string tnl = "design d\nport in clk\n"
                      "ff a FF clk=clk d=w2 q=qa\n"
                      "ff b FF clk=clk d=w1 q=qb\n"
                      "gate g1 C in=qa,qb out=w1\n"
                      "gate g2 C in=w1,qa out=w2\n";
    std::string sdc = "create_clock -period 5 [get_ports clk]\n";
    Design d1 = load(tnl, parse_library(base_lib), sdc);
    Design d2 = load(tnl, parse_library(bumped_lib), sdc);
    auto r1 = setup_check(d1.g, d1.cs, {});
    auto r2 = setup_check(d2.g, d2.cs, {});
    std::map<std::pair<std::string, std::string>, double> s1;
    for (const auto &r : r1)
        s1[{r.launch, r.capture}] = r.slack;
    for (const auto &r : r2)
        EXPECT_LE(r.slack, s1.at({r.launch, r.capture}) + 1e-12);
}

TEST(StaProperties, SegmentSumsEqualArrival)
{
    for (const char *check : {"setup", "hold"}) {
        Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
        auto reports = std::string(check) == "setup" ? setup_check(d.g, d.cs, {})
                                                     : hold_check(d.g, d.cs, {});
        for (const auto &r : reports)
            EXPECT_NEAR(segment_sum(r), r.arrival, 1e-9) << r.launch << "->" << r.capture;
    }
}

// analyses are pure functions of (graph, constraints, skew); concurrent
// callers over shared inputs must agree with the sequential result
TEST(StaProperties, ConcurrentAnalysesAgree)
{
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto expected = setup_check(d.g, d.cs, {});
    std::vector<std::vector<PathReport>> got(8);
    {
        std::vector<std::thread> workers;
        for (auto &out : got)
            workers.emplace_back([&] { out = setup_check(d.g, d.cs, {}); });
        for (auto &w : workers)
            w.join();
    }
    for (const auto &reports : got) {
        ASSERT_EQ(reports.size(), expected.size());
        for (size_t i = 0; i < reports.size(); ++i) {
            EXPECT_EQ(reports[i].launch, expected[i].launch);
            EXPECT_EQ(reports[i].slack, expected[i].slack);
        }
    }
}

TEST(StaProperties, MinEqualsMaxMakesHoldMatchSetupArrival)
{
    // built-ins default min = max, so both propagations add identical values
    Design d = load_fixture("ref_fpga.tnl", builtin_fpga(), "ref_fpga.sdc");
    auto setup = setup_check(d.g, d.cs, {});
    auto hold = hold_check(d.g, d.cs, {});
    for (const auto &h : hold) {
        const PathReport &s = find_pair(setup, h.launch, h.capture);
        EXPECT_EQ(h.arrival, s.arrival);
    }
}
