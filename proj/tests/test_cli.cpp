#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#ifndef BEREZIN_CLI
#define BEREZIN_CLI "berezin-cli"
#endif

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    std::string cmd = std::string(BEREZIN_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("berezin_cli_test_" + name)).string();
}

}  // namespace

TEST(Cli, CheckWritesJsonAndPasses) {
    Result r = run("check m-bound --samples 2000");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j[0]["schema_version"], 1);
    EXPECT_EQ(j[0]["experiment"], "m-bound");
    EXPECT_EQ(j[0]["params"]["samples"], "2000");
    EXPECT_TRUE(j[0]["metadata"].contains("runtime_seconds"));
    EXPECT_FALSE(j[0]["rows"].empty());
}

TEST(Cli, KernelsWithFixedWeightAndSize) {
    Result r = run("check kernels --r 2.5 --n 20 --configs 20 --format csv");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind("experiment,row,", 0), 0u);
}

TEST(Cli, UnknownExperimentOrParameterIsAUsageError) {
    EXPECT_EQ(run("check no-such-thing").code, 2);
    EXPECT_EQ(run("check m-bound --bogus 3").code, 2);
    EXPECT_EQ(run("check m-bound --samples").code, 2);
    EXPECT_EQ(run("check dimension --r abc").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, FailingRowsGiveExitOne) {
    Result r = run("check dimension --r 4 --format csv");
    EXPECT_EQ(r.code, 0);
    // A tolerance nobody can meet.
    EXPECT_EQ(run("check reproducing --r 2 --tol 1e-30").code, 1);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    std::string cfg = temp_path("cfg.txt");
    {
        std::ofstream f(cfg);
        f << "# comment\nsamples = 500\nseed=7\n";
    }
    auto j = nlohmann::json::parse(run("check m-bound --config " + cfg).out);
    EXPECT_EQ(j[0]["params"]["samples"], "500");
    EXPECT_EQ(j[0]["params"]["seed"], "7");
    j = nlohmann::json::parse(run("check m-bound --config " + cfg + " --samples 600").out);
    EXPECT_EQ(j[0]["params"]["samples"], "600");
    {
        std::ofstream f(cfg);
        f << "unknown_key = 1\n";
    }
    EXPECT_EQ(run("check m-bound --config " + cfg).code, 2);
    std::filesystem::remove(cfg);
}

TEST(Cli, SweepProducesOneBlockPerValue) {
    Result r = run("sweep dimension --over r=2,4,7");
    ASSERT_EQ(r.code, 0);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    EXPECT_EQ(lines, 4);
    EXPECT_NE(r.out.find("\n7,dimension,"), std::string::npos);
}

TEST(Cli, ReportConvertsSavedJson) {
    std::string out = temp_path("report.json");
    ASSERT_EQ(run("check covolume --output " + out).code, 0);
    Result r = run("report --input " + out + " --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("covolume,area of the fundamental domain"), std::string::npos);
    std::filesystem::remove(out);
    EXPECT_EQ(run("report --input /nonexistent/file.json").code, 2);
}

TEST(Cli, CalibrateHaar) {
    Result r = run("calibrate haar");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["kappa"].get<double>(), 0.15915494309189535, 1e-6);
}
