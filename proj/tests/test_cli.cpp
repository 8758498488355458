#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "hcone/errors.hpp"

using namespace hcli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "hcone");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("hcone-test-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
    RunConfig cfg;
    load_config_text(cfg, "# comment\n\nnu = 3/2, 5/2\np = inf\nquad.tail_tol = 1e-8  # trailing\nmc_samples = 1e6\n",
                     "cfg");
    EXPECT_EQ(cfg.pair("nu", {}), (hcone::RExponent{hcone::Rational(3, 2), hcone::Rational(5, 2)}));
    EXPECT_EQ(cfg.count("mc_samples", 0), 1000000u);
    EXPECT_DOUBLE_EQ(cfg.quadrature().tail_tol, 1e-8);
    EXPECT_EQ(cfg.text("p", ""), "inf");
}

TEST(Config, ErrorsNameTheLine) {
    RunConfig cfg;
    try {
        load_config_text(cfg, "n = 3\nbogus = 1\n", "setup.cfg");
        FAIL() << "unknown key accepted";
    } catch (const hcone::ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("setup.cfg:2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_config_text(cfg, "n = three\n", "x"), hcone::ValidationError);
    EXPECT_THROW(load_config_text(cfg, "no equals sign\n", "x"), hcone::ValidationError);
    EXPECT_THROW(cfg.set("nu", "1"), hcone::ValidationError);
    RunConfig bad;
    bad.set("n", "2");
    EXPECT_THROW(bad.cone(), hcone::ValidationError);
}

TEST(Config, QuadratureBaseIsOverriddenOnlyBySetKeys) {
    RunConfig cfg;
    cfg.set("quad.step", "0.5");
    hcone::QuadratureSpec base;
    base.tol = 1e-3;
    hcone::QuadratureSpec q = cfg.quadrature(base);
    EXPECT_DOUBLE_EQ(q.step, 0.5);
    EXPECT_DOUBLE_EQ(q.tol, 1e-3);
}

TEST(Config, OutputDirectoryFromEnvironment) {
    ::setenv("HCONE_OUTPUT_DIR", "/tmp/somewhere", 1);
    EXPECT_EQ(default_output_dir(), "/tmp/somewhere");
    ::unsetenv("HCONE_OUTPUT_DIR");
    EXPECT_EQ(default_output_dir(), "hcone-out");
    RunConfig cfg;
    cfg.set("output_dir", "/tmp/elsewhere");
    EXPECT_EQ(cfg.output_dir(), "/tmp/elsewhere");
}

TEST(Cli, RegionsWritesAllFormats) {
    fs::path d = scratch("regions");
    CliRun r = run({"regions", "ps", "--nu", "1,2", "--output-dir", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(d / "regions-ps.json"));
    bool svg = false, csv = false;
    for (const auto& e : fs::directory_iterator(d)) {
        svg = svg || e.path().extension() == ".svg";
        csv = csv || e.path().extension() == ".csv";
    }
    EXPECT_TRUE(svg && csv);
    Json j = Json::parse(slurp(d / "regions-ps.json"));
    EXPECT_EQ(j["q_intervals"][0]["q_lo"], "8/7");
    EXPECT_EQ(j["q_intervals"][0]["q_hi"], "8");
}

TEST(Cli, FormatsRestrictOutputs) {
    fs::path d = scratch("formats");
    CliRun r = run({"regions", "fig4", "--formats", "json", "--output-dir", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& e : fs::directory_iterator(d)) EXPECT_EQ(e.path().extension(), ".json");
}

TEST(Cli, FlagsOverrideConfigFile) {
    fs::path d = scratch("override");
    {
        std::ofstream cfg(d / "run.cfg");
        cfg << "nu = 1, 3\np = 2\noutput_dir = " << d.string() << "\n";
    }
    CliRun r = run({"regions", "ps", "--config", (d / "run.cfg").string(), "--nu", "1,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(slurp(d / "regions-ps.json"));
    EXPECT_EQ(j["nu"][1], "2");
}

TEST(Cli, ExitCodes) {
    fs::path d = scratch("codes");
    // Inadmissible parameters name the violated threshold.
    CliRun bad = run({"regions", "lorentz", "--nu", "2,0", "--output-dir", d.string()});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("ν₂ > 0"), std::string::npos) << bad.err;
    EXPECT_EQ(run({"verify", "nonsense"}).code, 1);
    EXPECT_EQ(run({"regions", "ps", "--no-such-flag", "1"}).code, 1);
    // A quadrature tolerance no refinement can meet.
    CliRun nc = run({"verify", "gamma", "--quad-tol", "1e-18", "--points", "1", "--output-dir", d.string()});
    EXPECT_EQ(nc.code, 2) << nc.out << nc.err;
    EXPECT_NE(nc.out.find("NON-CONVERGENCE"), std::string::npos);
}

TEST(Cli, ResultsAreByteIdenticalAcrossRuns) {
    fs::path a = scratch("det-a"), b = scratch("det-b");
    for (const fs::path& d : {a, b}) {
        ASSERT_EQ(run({"regions", "figures", "--output-dir", d.string()}).code, 0);
        ASSERT_EQ(run({"lattice", "--lattice-candidates", "300", "--audit-samples", "200", "--output-dir", d.string()}).code,
                  0);
        ASSERT_EQ(run({"kernel-eval", "--output-dir", d.string()}).code, 0);
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
    }
    EXPECT_GT(files, 10);
}

TEST(Cli, SvgTimestampIsOptIn) {
    fs::path d = scratch("stamp");
    ASSERT_EQ(run({"regions", "fig5", "--formats", "svg", "--output-dir", d.string()}).code, 0);
    for (const auto& e : fs::directory_iterator(d))
        EXPECT_EQ(slurp(e.path()).find("<!-- generated"), std::string::npos);
    fs::path s = scratch("stamp-on");
    ASSERT_EQ(run({"regions", "fig5", "--formats", "svg", "--svg-timestamp", "--output-dir", s.string()}).code, 0);
    for (const auto& e : fs::directory_iterator(s))
        EXPECT_NE(slurp(e.path()).find("<!-- generated"), std::string::npos);
}

TEST(Cli, KernelEvalOnTheSiegelDomain) {
    fs::path d = scratch("kernel");
    CliRun r = run({"kernel-eval", "--domain", "ps", "--output-dir", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(slurp(d / "kernel-eval.json"));
    // B(ζ0, ζ0) = d_ν at the base point.
    EXPECT_NEAR(j["value"][0].get<double>(), j["d_nu"].get<double>(), 1e-12);
    EXPECT_NEAR(j["value"][1].get<double>(), 0.0, 1e-15);
    CliRun out = run({"kernel-eval", "--z", "0,1,0,0,0,-1", "--output-dir", d.string()});
    EXPECT_EQ(out.code, 1);
}
