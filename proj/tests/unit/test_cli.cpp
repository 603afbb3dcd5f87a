#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ewgame/cli.hpp"

namespace ewgame {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
    int code = 0;
    std::string out, err;
};

CliResult run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"ewgame"};
    storage.insert(storage.end(), args);
    std::vector<const char*> argv;
    for (const std::string& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("ewgame_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

private:
    fs::path path_;
};

TEST(Cli, ClassifyPrintsPrediction) {
    const CliResult r = run({"classify", "--game", "0,2,0,1", "--init", "0.5,0.5", "--eta", "0.5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("row"), "r1");
    EXPECT_EQ(j.at("expected_pair"), "(theta2,theta2)");
}

TEST(Cli, SimulateWritesArtifacts) {
    TempDir dir;
    const std::string cfg = dir.file("run.json", R"({"game":{"a":0,"b":2,"c":0,"d":1},
        "init":{"p1":[0.4,0.6],"p2":[0.7,0.3]},"eta":0.5,"horizon":10000})");
    const CliResult r = run({"simulate", "--config", cfg, "--out", (dir.path() / "out").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(fs::exists(dir.path() / "out" / "trajectory.csv"));
    std::ifstream in(dir.path() / "out" / "summary.json");
    const json summary = json::parse(in);
    EXPECT_EQ(summary.at("verdict").at("label"), "PureNE(theta2,theta2)");
    EXPECT_EQ(summary.at("agreement"), "Match");
}

TEST(Cli, MalformedConfigIsUsageError) {
    TempDir dir;
    const std::string cfg = dir.file("bad.json", R"({"game":{"a":0,"b":2},"eta":0.5})");
    const CliResult r = run({"simulate", "--config", cfg});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnknownFlagAndMissingInputsAreUsageErrors) {
    EXPECT_EQ(run({"classify", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"classify"}).code, kExitUsage);
    EXPECT_EQ(run({"simulate", "--game", "1,1,1,1", "--init", "0.5,0.5"}).code, kExitUsage);
    EXPECT_EQ(run({"simulate", "--game", "0,2,0,1", "--init", "0.5,0.5", "--eta", "nan"}).code, kExitUsage);
    EXPECT_EQ(run({"sweep", "--random", "--count", "3"}).code, kExitUsage);
    EXPECT_EQ(run({"bank"}).code, kExitUsage);
}

TEST(Cli, OscillateReportsTinyResidual) {
    const CliResult r = run({"oscillate", "--a", "1.0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LT(j.at("residual").get<double>(), 1e-9);
}

TEST(Cli, VerifyCeAgreesOnSimpleCase) {
    const CliResult r = run({"verify-ce", "--game", "0,1,1,0", "--nu", "0.25,0.25,0.25,0.25"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.dump().find("false"), std::string::npos) << j.dump();
}

TEST(Cli, SweepRandomSeededWritesReport) {
    TempDir dir;
    const CliResult r = run({"sweep", "--random", "--seed", "7", "--count", "20", "--horizon", "20000", "--out",
                             (dir.path() / "sweep").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(dir.path() / "sweep" / "report.json"));
    EXPECT_TRUE(fs::exists(dir.path() / "sweep" / "runs.csv"));
}

TEST(Cli, BankRunsFromConfig) {
    TempDir dir;
    const std::string cfg = dir.file("bank.json", R"({"dist":{"kind":"trunc_gauss","mu":0.3,"sigma":0.1},
        "gamma_l":0.4,"gamma_h":0.8,"horizon":50000})");
    const CliResult r = run({"bank", "--config", cfg, "--out", (dir.path() / "bank").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(dir.path() / "bank" / "bank.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "bank" / "bank.json"));
}

}  // namespace
}  // namespace ewgame
