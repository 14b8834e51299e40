// SPDX-License-Identifier: Apache-2.0
//
// End-to-end CLI checks through the installed binary: exit codes, flag
// handling, and JSON report shape (parsed with nlohmann::json).
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string &args)
{
    std::string cmd = std::string(TICL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    CliResult r;
    char buf[4096];
    size_t nread;
    while ((nread = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, nread);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fix(const std::string &name)
{
    return std::string(TICL_FIXTURES) + "/" + name;
}

std::string write_temp(const std::string &name, const std::string &content)
{
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::string fpga_args()
{
    return "--netlist " + fix("ref_fpga.tnl") + " --lib fpga --sdc " +
           fix("ref_fpga.sdc");
}

} // namespace

TEST(Cli, ReportTimingJsonSchema)
{
    CliResult r = run_cli("report-timing " + fpga_args() + " --format json");
    ASSERT_EQ(r.exit_code, 0);
    json doc = json::parse(r.out);
    ASSERT_TRUE(doc.contains("paths"));
    ASSERT_FALSE(doc["paths"].empty());
    for (const auto &p : doc["paths"]) {
        EXPECT_TRUE(p["clock"].is_string());
        EXPECT_TRUE(p["check"].is_string());
        EXPECT_TRUE(p["launch"].is_string());
        EXPECT_TRUE(p["capture"].is_string());
        EXPECT_TRUE(p["multicycle"].is_number_integer());
        EXPECT_TRUE(p["segments"].is_array());
        for (const auto &s : p["segments"]) {
            EXPECT_TRUE(s["label"].is_string());
            EXPECT_TRUE(s["ns"].is_number());
        }
        EXPECT_TRUE(p["arrival"].is_number());
        EXPECT_TRUE(p["required"].is_number());
        EXPECT_TRUE(p["slack"].is_number());
    }
}

TEST(Cli, TextAndJsonReportTheSameNumbers)
{
    CliResult text = run_cli("report-timing " + fpga_args() + " --check setup");
    CliResult js = run_cli("report-timing " + fpga_args() + " --check setup "
                           "--format json");
    ASSERT_EQ(text.exit_code, 0);
    ASSERT_EQ(js.exit_code, 0);
    json doc = json::parse(js.out);
    // every 3-decimal arrival/slack in the JSON shows up in the text report
    char buf[32];
    for (const auto &p : doc["paths"]) {
        std::snprintf(buf, sizeof buf, "%.3f", p["arrival"].get<double>());
        EXPECT_NE(text.out.find(buf), std::string::npos) << buf;
        std::snprintf(buf, sizeof buf, "%.3f", p["slack"].get<double>());
        EXPECT_NE(text.out.find(buf), std::string::npos) << buf;
    }
}

TEST(Cli, MaxPathsLimitsReport)
{
    CliResult r = run_cli("report-timing " + fpga_args() +
                          " --format json --max-paths 1");
    json doc = json::parse(r.out);
    EXPECT_EQ(doc["paths"].size(), 1u);
    // the worst (reference) path survives
    EXPECT_EQ(doc["paths"][0]["launch"], "r1");
}

TEST(Cli, DerateShiftsArrival)
{
    CliResult r = run_cli("report-timing " + fpga_args() +
                          " --check setup --format json --derate 1.2");
    json doc = json::parse(r.out);
    bool found = false;
    for (const auto &p : doc["paths"])
        if (p["launch"] == "r1" && p["capture"] == "r2") {
            EXPECT_NEAR(p["arrival"].get<double>(), 2.82, 1e-9);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, FmaxJsonAndEmptyDesign)
{
    CliResult r = run_cli("fmax " + fpga_args() + " --format json");
    ASSERT_EQ(r.exit_code, 0);
    json doc = json::parse(r.out);
    EXPECT_NEAR(doc["fmax_mhz"]["clk"].get<double>(), 395.3, 0.05);

    // a design with no constrained paths is an input error
    std::string tnl = write_temp("ticl_empty.tnl",
                                 "design empty\nport in clk\n"
                                 "gate b BUFG in=clk out=y\n");
    std::string sdc = write_temp("ticl_empty.sdc",
                                 "create_clock -period 2.0 [get_ports clk]\n");
    CliResult none = run_cli("fmax --netlist " + tnl + " --lib fpga --sdc " + sdc);
    EXPECT_EQ(none.exit_code, 2);
}

TEST(Cli, SkewScheduleRoundTrip)
{
    std::string base = "--netlist " + fix("skew_loop.tnl") + " --lib " +
                       fix("skew_loop.tlib") + " --sdc " + fix("skew_loop.sdc");
    CliResult sched = run_cli("skew-opt " + base + " --bound 5 --tol 0.001");
    ASSERT_EQ(sched.exit_code, 0);
    std::string sched_path = write_temp("ticl_sched.csv", sched.out);

    // the schedule passes a full re-check at its own period
    CliResult verify = run_cli("report-timing " + base + " --skew " + sched_path +
                               " --format json");
    EXPECT_EQ(verify.exit_code, 0);
    json doc = json::parse(verify.out);
    for (const auto &p : doc["paths"])
        EXPECT_GE(p["slack"].get<double>(), -0.001);
}

TEST(Cli, CdcTextReportCarriesMtbfParameters)
{
    CliResult r = run_cli("cdc --netlist " + fix("cdc_clean_2ff.tnl") +
                          " --lib fpga --sdc " + fix("cdc_clocks.sdc") +
                          " --fdata 1e6");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("mtbf"), std::string::npos);
    EXPECT_NE(r.out.find("tau"), std::string::npos); // parameter echo
    EXPECT_NE(r.out.find("FDRE"), std::string::npos);
}

TEST(Cli, CdcJsonSchema)
{
    CliResult r = run_cli("cdc --netlist " + fix("cdc_gray_bus.tnl") +
                          " --lib fpga --sdc " + fix("cdc_clocks.sdc") +
                          " --format json --fdata 1e6");
    json doc = json::parse(r.out);
    ASSERT_EQ(doc["crossings"].size(), 1u);
    const auto &c = doc["crossings"][0];
    for (const char *key :
         {"signal", "src_clock", "dst_clock", "class", "depth", "width", "mtbf_s",
          "mtbf_log10"})
        EXPECT_TRUE(c.contains(key)) << key;
    EXPECT_EQ(c["class"], "gray_bus");
    EXPECT_EQ(c["width"], 4);
    EXPECT_TRUE(doc.contains("mtbf_params"));
}

TEST(Cli, MtbfPassthrough)
{
    CliResult r = run_cli("mtbf --tres 0 --tau 2e-10 --tw 1e-10 --fdata 1e6 "
                          "--fclock 1e8 --format json");
    ASSERT_EQ(r.exit_code, 0);
    json doc = json::parse(r.out);
    EXPECT_NEAR(doc["mtbf_s"].get<double>(), 1e-4, 1e-10);

    CliResult bad = run_cli("mtbf --tres 0 --tau 0 --tw 1e-10 --fdata 1e6 "
                            "--fclock 1e8");
    EXPECT_EQ(bad.exit_code, 2);
}

TEST(Cli, GraySubcommands)
{
    EXPECT_EQ(run_cli("gray --to-gray 5 --width 3").out, "7\n");
    EXPECT_EQ(run_cli("gray --to-bin 7 --width 3").out, "5\n");
    EXPECT_EQ(run_cli("gray --to-gray 9 --width 3").exit_code, 2); // out of range

    std::string good = write_temp("ticl_gray_ok.txt", "0x0\n0b001\n3\n2\n");
    CliResult ok = run_cli("gray --check-file " + good + " --width 2");
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(ok.out, "ok\n");

    std::string bad = write_temp("ticl_gray_bad.txt", "0\n1\n2\n");
    CliResult violation = run_cli("gray --check-file " + bad + " --width 4");
    EXPECT_EQ(violation.exit_code, 1);
    EXPECT_NE(violation.out.find("index 1"), std::string::npos);
}

TEST(Cli, SimMtbfJsonAndEventLog)
{
    auto log_path = std::filesystem::temp_directory_path() / "ticl_events.csv";
    std::filesystem::remove(log_path);
    CliResult r = run_cli("sim-mtbf --tres 6e-10 --tau 2e-10 --tw 1e-10 "
                          "--fdata 1e6 --fclock 1e8 --seed 3 --min-events 500 "
                          "--event-log " + log_path.string());
    ASSERT_EQ(r.exit_code, 0);
    json doc = json::parse(r.out);
    EXPECT_EQ(doc["events"].get<uint64_t>(), 500u);
    EXPECT_TRUE(doc.contains("ci95_low_s"));
    EXPECT_TRUE(doc["params"].contains("tau_s"));

    std::ifstream log(log_path);
    ASSERT_TRUE(log.is_open());
    std::string header;
    std::getline(log, header);
    EXPECT_EQ(header, "event_time_s,resolved_s,failed");
    size_t lines = 0;
    std::string line;
    while (std::getline(log, line))
        ++lines;
    EXPECT_EQ(lines, 500u);
}

TEST(Cli, AdaptiveTraceCsv)
{
    CliResult r = run_cli("sim-mtbf --tres 0 --tau 1e-7 --tw 1e-10 --fdata 1e7 "
                          "--fclock 1e8 --seed 5 --adaptive --windows 10 "
                          "--reliability 7 --window 65536");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("window,depth,events\n", 0), 0u);
    size_t rows = std::count(r.out.begin(), r.out.end(), '\n');
    EXPECT_EQ(rows, 11u); // header + 10 windows
}

TEST(Cli, LenientDowngradesUnknownSdcCommands)
{
    std::string sdc = write_temp("ticl_lenient.sdc",
                                 "set_clock_groups -asynchronous\n"
                                 "create_clock -period 2.53 [get_ports clk]\n"
                                 "set_input_delay -clock clk 0.5 [get_ports din]\n"
                                 "set_output_delay -clock clk 0.8 [get_ports dout]\n");
    std::string strict = "report-timing --netlist " + fix("ref_fpga.tnl") +
                         " --lib fpga --sdc " + sdc;
    EXPECT_EQ(run_cli(strict).exit_code, 2);
    EXPECT_EQ(run_cli(strict + " --lenient").exit_code, 0);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run_cli("report-timing --lib fpga").exit_code, 2); // missing required
    EXPECT_EQ(run_cli("no-such-command").exit_code, 2);
    EXPECT_EQ(run_cli("report-timing " + fpga_args() + " --check sideways").exit_code,
              2);
    EXPECT_EQ(run_cli("gray --width 4").exit_code, 2); // no operation chosen
}
