#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include "oracles.hpp"
#include "subconv/cli.hpp"

using namespace subconv;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"subconv"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("subconv_test_" + name);
}

}  // namespace

// --- simulate ---------------------------------------------------------------------

TEST(CliSimulate, Sp3ThreeHundredSteps) {
    const auto r = run({"simulate", "--model", "sp3", "--k", "3", "--init", "1,1,1", "--steps", "300"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    EXPECT_EQ(header, "n,x");
    ASSERT_EQ(rows.size(), 303u);
    const auto ref = oracle::sp3(3, 300);
    for (std::size_t n = 0; n < rows.size(); ++n) {
        EXPECT_EQ(rows[n][0], static_cast<double>(n));
        EXPECT_NEAR(rows[n][1], ref[n], 1e-12 * std::max(1.0, ref[n]));
    }
}

TEST(CliSimulate, ZeroInitialRows) {
    const auto r = run({"simulate", "--model", "sp3", "--k", "3", "--init", "0,0,0", "--steps", "10"});
    ASSERT_EQ(r.code, kExitOk);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 13u);
    for (const auto& row : rows) EXPECT_EQ(row[1], 0.0);
}

TEST(CliSimulate, AdultJuvenileTwoSteps) {
    const auto r = run({"simulate", "--model", "adult-juvenile", "--s", "0.8", "--t", "1", "--r", "2",
                        "--lambda", "2", "--init", "1,1", "--steps", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    EXPECT_EQ(header, "n,x,y");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2][1], 0.8);
    EXPECT_NEAR(rows[2][2], 0.64 * std::exp(0.2), 1e-15);
}

TEST(CliSimulate, JsonRoundTripThroughConfig) {
    const auto first = run({"simulate", "--model", "sp3", "--k", "2", "--init", "0.7,1.1,0.4", "--steps", "150",
                            "--format", "json"});
    ASSERT_EQ(first.code, kExitOk) << first.err;
    const auto path = temp_file("roundtrip.json");
    {
        std::ofstream f(path);
        f << first.out;
    }
    const std::string p = path.string();
    const auto second = run({"simulate", "--config", p.c_str(), "--format", "json"});
    ASSERT_EQ(second.code, kExitOk) << second.err;
    const auto j1 = json::parse(first.out);
    const auto j2 = json::parse(second.out);
    EXPECT_EQ(j1.at("terms"), j2.at("terms"));
    EXPECT_EQ(j1.at("terms").size(), 153u);

    // planar systems round-trip as well
    const auto a = run({"simulate", "--model", "adult-juvenile", "--init", "0.3,2", "--steps", "40", "--format", "json"});
    ASSERT_EQ(a.code, kExitOk);
    {
        std::ofstream f(path);
        f << a.out;
    }
    const auto b = run({"simulate", "--config", p.c_str(), "--format", "json"});
    ASSERT_EQ(b.code, kExitOk) << b.err;
    EXPECT_EQ(json::parse(a.out).at("y"), json::parse(b.out).at("y"));
    std::filesystem::remove(path);
}

TEST(CliSimulate, ConfigErrors) {
    EXPECT_EQ(run({"simulate", "--model", "nope"}).code, kExitConfig);
    EXPECT_EQ(run({"simulate", "--model", "sp3", "--bogus", "1"}).code, kExitConfig);
    EXPECT_EQ(run({"simulate", "--model", "sp3", "--init", "1,1"}).code, kExitConfig);
    EXPECT_EQ(run({"simulate", "--model", "sp3", "--lambda", "2"}).code, kExitConfig);
    EXPECT_EQ(run({"simulate", "--model", "sp3", "--k", "7"}).code, kExitConfig);
    EXPECT_EQ(run({"simulate", "--config", "/nonexistent/file.json"}).code, kExitConfig);
    EXPECT_EQ(run({}).code, kExitConfig);

    const auto path = temp_file("unknown_key.json");
    {
        std::ofstream f(path);
        f << R"({"schema": 1, "equation": {"model": "sp3", "params": {"k": 3}}, "initial": [1,1,1], "colour": 1})";
    }
    const std::string p = path.string();
    const auto r = run({"simulate", "--config", p.c_str()});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(CliSimulate, NumericalBlowUpGivesPartialOutput) {
    const auto r = run({"simulate", "--model", "ricker", "--lambda", "40", "--a", "30", "--b", "0.001",
                        "--init", "50", "--steps", "20"});
    EXPECT_EQ(r.code, kExitNumerical);
    EXPECT_FALSE(r.err.empty());
    EXPECT_GE(parse_csv(r.out).size(), 1u);
}

// --- analyze --------------------------------------------------------------------------

TEST(CliAnalyze, Sp3LagTwo) {
    const auto r = run({"--json", "analyze", "--model", "sp3", "--k", "2", "--steps", "200"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("crossing_index"), 25);
    EXPECT_EQ(j.at("stride"), 2);
    EXPECT_TRUE(j.at("chain_verified").get<bool>());
}

TEST(CliAnalyze, Sp3LagOne) {
    const auto r = run({"--json", "analyze", "--model", "sp3", "--k", "1", "--steps", "100"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(json::parse(r.out).at("full_convergence_from"), 14);
    const auto rig = run({"--json", "analyze", "--model", "sp3", "--k", "1", "--steps", "100", "--bound", "rigorous"});
    ASSERT_EQ(rig.code, kExitOk) << rig.err;
    EXPECT_FALSE(json::parse(rig.out).at("informal_bound").get<bool>());
}

TEST(CliAnalyze, CompetitionGlobal) {
    const auto r = run({"--json", "analyze", "--model", "competition", "--r1", "1", "--a1", "1", "--delta1", "2",
                        "--init", "3.5,0.4", "--steps", "200"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("alpha"), "inf");
    EXPECT_EQ(j.at("full_convergence_from"), 0);
}

TEST(CliAnalyze, BatchIsSeededAndClean) {
    const auto a = run({"--json", "--seed", "5", "analyze", "--model", "sp3", "--k", "3", "--batch", "10", "--steps", "300"});
    const auto b = run({"--json", "--seed", "5", "analyze", "--model", "sp3", "--k", "3", "--batch", "10", "--steps", "300"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = json::parse(a.out);
    EXPECT_EQ(j.at("violated"), 0);
    EXPECT_EQ(j.at("runs").size(), 10u);
}

TEST(CliAnalyze, BoundFailureExitCode) {
    // c r <= 1 leaves the three-dimensional fold without a Ricker envelope
    const auto t = run({"analyze", "--model", "threed", "--c", "0.5"});
    EXPECT_EQ(t.code, kExitBound);
    EXPECT_NE(t.err.find("bounding function"), std::string::npos);
    EXPECT_EQ(run({"analyze", "--model", "ricker", "--lambda", "1", "--a", "1", "--b", "1"}).code, kExitConfig);
    const auto r = run({"analyze", "--model", "ricker", "--lambda", "2", "--k", "2", "--m", "2", "--a", "1",
                        "--b", "1,0", "--init", "1,1"});
    EXPECT_EQ(r.code, kExitConfig) << r.err;
}

TEST(CliAnalyze, WritesToOutFile) {
    const auto path = temp_file("report.json");
    const std::string p = path.string();
    const auto r = run({"--out", p.c_str(), "analyze", "--model", "sp3", "--k", "2", "--steps", "100"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ifstream f(path);
    const auto j = json::parse(f);
    EXPECT_EQ(j.at("crossing_index"), 25);
    std::filesystem::remove(path);
}

// --- threshold -------------------------------------------------------------------------

TEST(CliThreshold, RickerPair) {
    const auto r = run({"--json", "threshold", "--model", "ricker", "--lambda", "1.5", "--a", "1.5", "--b", "0.9"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("condition_holds").get<bool>());
    EXPECT_EQ(j.at("fixed_points").at("kind"), "pair");
    EXPECT_NEAR(j.at("fixed_points").at("u_star").get<double>(), oracle::kSp3AlphaK3, 1e-12);
    EXPECT_NEAR(j.at("fixed_points").at("u_bar").get<double>(), oracle::kSp3UbarK3, 1e-12);
}

TEST(CliThreshold, RickerTangent) {
    const auto r = run({"--json", "threshold", "--model", "ricker", "--lambda", "2", "--a", "1", "--b", "1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("condition_equality").get<bool>());
    EXPECT_EQ(j.at("fixed_points").at("kind"), "tangent");
    const auto text = run({"threshold", "--model", "ricker", "--lambda", "2", "--a", "1", "--b", "1"});
    EXPECT_NE(text.out.find("tangent"), std::string::npos);
}

TEST(CliThreshold, Competition) {
    const auto r = run({"--json", "threshold", "--model", "competition", "--r1", "3", "--a1", "2", "--delta1", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(json::parse(r.out).at("threshold").at("alpha"), 1.0);
}

TEST(CliThreshold, InvalidParameters) {
    EXPECT_EQ(run({"threshold", "--model", "ricker", "--lambda", "0.5", "--a", "1", "--b", "1"}).code, kExitConfig);
    EXPECT_EQ(run({"threshold", "--model", "competition", "--r1", "-1"}).code, kExitConfig);
}

// --- fold -------------------------------------------------------------------------------

TEST(CliFold, AdultJuvenile) {
    const auto r = run({"--json", "fold", "--model", "adult-juvenile", "--s", "0.8", "--t", "1", "--r", "2",
                        "--lambda", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("consistency").at("pass").get<bool>());
    const auto& cf = j.at("closed_form").at("params");
    EXPECT_NEAR(cf.at("a").get<double>(), 2.0 + std::log(0.8), 1e-15);
    EXPECT_EQ(cf.at("b"), json::array({1.25, 1.0}));
    EXPECT_EQ(cf.at("k"), 2);
}

TEST(CliFold, ThreeD) {
    const auto r = run({"--json", "fold", "--model", "threed", "--steps", "50"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(json::parse(r.out).at("consistency").at("pass").get<bool>());
}

TEST(CliFold, MissingSigma) {
    const auto r = run({"fold", "--model", "competition"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("no solvability form"), std::string::npos);
}

TEST(CliFold, FoldedDescriptorSimulates) {
    const auto r = run({"simulate", "--model", "fold", "--init", "1,0.8", "--steps", "2"});
    // the fold model is built from a nested descriptor; via flags it needs a config
    EXPECT_NE(r.code, kExitOk);
    const auto path = temp_file("fold.json");
    {
        std::ofstream f(path);
        f << R"({"schema": 1, "equation": {"model": "fold", "params": {"system": {"model": "adult-juvenile",
               "params": {"s": 0.8, "t": 1, "r": 2, "lambda": 2}}}}, "initial": [1, 0.8], "steps": 2})";
    }
    const std::string p = path.string();
    const auto s = run({"simulate", "--config", p.c_str()});
    ASSERT_EQ(s.code, kExitOk) << s.err;
    const auto rows = parse_csv(s.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NEAR(rows[2][1], 0.8, 1e-15);
    std::filesystem::remove(path);
}

// --- models / binary --------------------------------------------------------------------

TEST(CliModels, ListsCatalog) {
    const auto r = run({"models"});
    ASSERT_EQ(r.code, kExitOk);
    for (const char* name : {"ricker", "sp3", "sigmoid-bh", "adult-juvenile", "competition", "threed"}) {
        EXPECT_NE(r.out.find(name), std::string::npos) << name;
    }
    const auto j = json::parse(run({"--json", "models"}).out);
    EXPECT_TRUE(j.is_array());
}

TEST(CliBinary, ExitCodeFromProcess) {
    const std::string cmd = std::string(SUBCONV_CLI_PATH) + " fold --model competition >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ASSERT_NE(status, -1);
    EXPECT_EQ(WEXITSTATUS(status), kExitConfig);
    const std::string ok = std::string(SUBCONV_CLI_PATH) + " models >/dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(ok.c_str())), kExitOk);
}
