#include "esgport/cli.hpp"
#include "esgport/csv.hpp"
#include "esgport/ratings.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;

namespace esgport::cli {
namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "esgport");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const fs::path kData = ESGPORT_TEST_DATA;

TEST(Cli, CorrOnFixtureHasUnitDiagonal) {
    const auto dir = testkit::make_temp_dir("cli-corr");
    const auto r = invoke({"corr", "--panel", (kData / "panel_small.csv").string(), "-o", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = csv::read_file(dir / "corr.csv");
    ASSERT_EQ(t.rows.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(csv::parse_double(t.rows[i][i + 1]), 1.0, 1e-12);
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_EQ(t.rows[i][j + 1], t.rows[j][i + 1]);
        }
    }
    EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
}

TEST(Cli, DmvExampleFromConfig) {
    const auto dir = testkit::make_temp_dir("cli-dmv");
    const auto r = invoke({"dmv", "-c", (kData / "dmv_example.ini").string(), "-o", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = csv::read_file(dir / "dmv.csv");
    ASSERT_EQ(t.rows.size(), 3u);
    const auto w = t.column("w");
    EXPECT_EQ(t.rows[0][0], "U");
    EXPECT_NEAR(csv::parse_double(t.rows[0][w]), 0.888889, 1e-6);
    EXPECT_NEAR(csv::parse_double(t.rows[1][w]), 0.75, 1e-12);
    EXPECT_NEAR(csv::parse_double(t.rows[2][w]), 1.0, 1e-12);
}

TEST(Cli, FlagsOverrideConfigValues) {
    const auto dir = testkit::make_temp_dir("cli-set");
    const auto r = invoke({"dmv", "-c", (kData / "dmv_example.ini").string(), "-o", dir.string(), "--set",
                           "profiles.types=I", "--set", "profiles.gamma=4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = csv::read_file(dir / "dmv.csv");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_NEAR(csv::parse_double(t.rows[0][t.column("w")]), 0.06 / (4 * 0.04), 1e-12);
}

TEST(Cli, MissingInputNamesThePath) {
    const auto dir = testkit::make_temp_dir("cli-missing");
    const auto r = invoke({"corr", "--panel", "/no/such/panel.csv", "-o", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("code=FileNotFound"), std::string::npos);
    EXPECT_NE(r.err.find("/no/such/panel.csv"), std::string::npos);
}

TEST(Cli, ExitCodesByCategory) {
    const auto dir = testkit::make_temp_dir("cli-codes");
    EXPECT_EQ(invoke({"bogus"}).code, 1);
    EXPECT_EQ(invoke({"synth", "-o", dir.string()}).code, 1);  // stochastic without a seed
    const auto bad = dir / "bad.csv";
    testkit::spit(bad, "firm,a,b\nx,1,zz\n");
    const auto r = invoke({"corr", "--panel", bad.string(), "-o", dir.string()});
    EXPECT_EQ(r.code, 2) << r.err;
    EXPECT_NE(r.err.find("error=data"), std::string::npos);
    const auto r3 = invoke({"dmv", "-o", dir.string(), "--set", "market.mu_M=0.06", "--set", "market.sigma2_M=0.04",
                            "--set", "profiles.types=U", "--set", "market.sigma2_g=0", "--set", "profiles.b=0",
                            "--set", "profiles.gamma=0"});
    EXPECT_NE(r3.code, 0);
}

TEST(Cli, SynthAndBacktestAreByteReproducible) {
    const auto a = testkit::make_temp_dir("cli-rep-a");
    const auto b = testkit::make_temp_dir("cli-rep-b");
    for (const auto& d : {a, b}) {
        const auto s = invoke({"synth", "--seed", "11", "--n-firms", "8", "--n-assets", "4", "--n-bars", "1100", "-o",
                               (d / "syn").string()});
        ASSERT_EQ(s.code, 0) << s.err;
        const auto r = invoke({"backtest", "--seed", "11", "--panel", (d / "syn" / "esg.csv").string(), "--prices",
                               (d / "syn" / "portfolio.csv").string(), "--optimizer", "cem", "--iterations", "10",
                               "--set", "schedule.train_months=24", "--set", "schedule.test_months=12", "--set",
                               "schedule.stride_months=12", "-o", (d / "bt").string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    for (const char* f : {"syn/esg.csv", "syn/prices/F0001.csv", "bt/report.csv", "bt/ranks.csv", "bt/weights.csv"}) {
        EXPECT_EQ(testkit::slurp(a / f), testkit::slurp(b / f)) << f;
    }
    const auto manifest = testkit::slurp(a / "bt" / "manifest.txt");
    EXPECT_NE(manifest.find("command=backtest"), std::string::npos);
    EXPECT_NE(manifest.find("seed=11"), std::string::npos);
    EXPECT_NE(manifest.find("config_hash="), std::string::npos);
    EXPECT_NE(manifest.find("input.input.panel="), std::string::npos);
    EXPECT_NE(manifest.find("output.report.csv=fnv1a64="), std::string::npos);
}

TEST(Cli, HarmonizeMapsLetterGrades) {
    const auto dir = testkit::make_temp_dir("cli-harm");
    const auto r = invoke({"harmonize", "--panel", (kData / "panel_small.csv").string(), "-o", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto p = ratings::read_panel_csv(dir / "panel.csv");
    const auto msci = *p.rater_index("MSCI");
    EXPECT_EQ(p.values()(3, msci), ratings::harmonize_msci(ratings::LetterGrade::AAA));
}

TEST(Cli, BinaryExitStatus) {
    const std::string cmd = std::string(ESGPORT_CLI_PATH) + " corr --panel /no/such/file.csv -o " +
                            testkit::make_temp_dir("cli-bin").string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    ASSERT_NE(status, -1);
    EXPECT_EQ(WEXITSTATUS(status), 1);
}

}  // namespace
}  // namespace esgport::cli
