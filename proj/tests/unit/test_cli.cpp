#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

// Runs the CLI in `dir`; stderr is folded into the captured output only when asked.
CliRun run(const std::string& args, const fs::path& dir, bool with_stderr = false, const std::string& env = "") {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" WAVESEL_CLI "' " + args +
                            (with_stderr ? " 2>&1" : " 2>/dev/null");
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("wavesel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenWritesRequestedRows) {
    const CliRun r = run("gen --signal wave --noise l1 --n 256 --seed 1 --out s.csv", dir_);
    ASSERT_EQ(r.code, 0);
    const std::string csv = slurp(dir_ / "s.csv");
    // metadata comment + header + one row per observation
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 258);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST_F(Cli, GoldenSampleAndSelection) {
    ASSERT_EQ(run("gen --signal doppler --noise h1 --n 32 --seed 9 --out s.csv", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "s.csv"), slurp(fs::path(WAVESEL_GOLDEN_DIR) / "doppler_h1_32_seed9.csv"));
    ASSERT_EQ(run("select --method all --in s.csv --truth doppler --out sel.json", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "sel.json"), slurp(fs::path(WAVESEL_GOLDEN_DIR) / "doppler_h1_32_seed9_select.json"));
}

TEST_F(Cli, SelectAllListsEveryMethodAndOracle) {
    ASSERT_EQ(run("gen --signal wave --noise l1 --n 256 --seed 1 --out s.csv", dir_).code, 0);
    ASSERT_EQ(run("select --method all --in s.csv --collection haar --truth wave --out sel.json", dir_).code, 0);
    const auto j = nlohmann::json::parse(slurp(dir_ / "sel.json"));
    EXPECT_EQ(j["schema"], "wavesel.selection/1");
    ASSERT_EQ(j["outcomes"].size(), 5u);
    std::vector<std::string> methods;
    for (const auto& o : j["outcomes"]) methods.push_back(o["method"]);
    EXPECT_EQ(methods, (std::vector<std::string>{"sh", "cp", "vfcv", "penvf", "oracle"}));
    ASSERT_EQ(run("select --method all --in s.csv --collection haar --out sel2.json", dir_).code, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "sel2.json"))["outcomes"].size(), 4u);
}

TEST_F(Cli, JsonSampleRoundTripsThroughFit) {
    ASSERT_EQ(run("gen --signal spikes --noise l2 --n 128 --seed 4 --out s.json", dir_).code, 0);
    ASSERT_EQ(run("gen --signal spikes --noise l2 --n 128 --seed 4 --out s.csv", dir_).code, 0);
    ASSERT_EQ(run("fit --in s.json --truth spikes --out a.csv", dir_).code, 0);
    ASSERT_EQ(run("fit --in s.csv --truth spikes --out b.csv", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
    const std::string csv = slurp(dir_ / "a.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "D,empirical_risk,bias,excess,total");
}

TEST_F(Cli, BenchTableIndependentOfJobs) {
    std::ofstream(dir_ / "cfg.json") << R"({"signals":["wave","spikes"],"noises":["l1"],"sizes":[256],"replications":12,"seed":3})";
    ASSERT_EQ(run("bench --config cfg.json --jobs 1 --out t1.csv", dir_).code, 0);
    ASSERT_EQ(run("bench --config cfg.json --jobs 8 --out t8.csv", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "t1.csv"), slurp(dir_ / "t8.csv"));
}

TEST_F(Cli, EverySubcommandIsByteDeterministic) {
    ASSERT_EQ(run("gen --signal heavisine --noise h1 --n 256 --seed 5 --out s.csv", dir_).code, 0);
    std::ofstream(dir_ / "cfg.json") << R"({"signals":["wave"],"noises":["h1"],"sizes":[256],"replications":6})";
    const std::vector<std::string> cmds = {
        "gen --signal heavisine --noise h1 --n 256 --seed 5 --out OUT",
        "fit --in s.csv --truth heavisine --dump-coefficients OUT.coef --out OUT",
        "select --in s.csv --truth heavisine --svg-risk OUT.r.svg --svg-path OUT.p.svg --out OUT",
        "certify --basis wavelet --dim 32 --out OUT",
        "conc --signal wave --noise h1 --n 256 --dim 8 --reps 20 --n-mc 20000 --seed 2 --jobs 2 --out OUT",
        "bench --config cfg.json --out OUT",
    };
    for (const auto& c : cmds) {
        std::string a = c, b = c;
        for (auto* s : {&a, &b}) {
            const std::string tag = s == &a ? "a" : "b";
            for (auto p = s->find("OUT"); p != std::string::npos; p = s->find("OUT", p)) s->replace(p, 3, tag);
        }
        ASSERT_EQ(run(a, dir_).code, 0) << a;
        ASSERT_EQ(run(b, dir_).code, 0) << b;
        EXPECT_EQ(slurp(dir_ / "a"), slurp(dir_ / "b")) << c;
        for (const char* ext : {".coef", ".r.svg", ".p.svg"})
            if (fs::exists(dir_ / ("a" + std::string(ext))))
                EXPECT_EQ(slurp(dir_ / ("a" + std::string(ext))), slurp(dir_ / ("b" + std::string(ext)))) << c;
    }
    ASSERT_EQ(run("plot --kind dimension-jump --in a --out p1.svg", dir_).code, 1);  // bench report, wrong kind
    ASSERT_EQ(run("select --in s.csv --out sel.json", dir_).code, 0);
    ASSERT_EQ(run("plot --kind dimension-jump --in sel.json --out p1.svg", dir_).code, 0);
    ASSERT_EQ(run("plot --kind dimension-jump --in sel.json --out p2.svg", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "p1.svg"), slurp(dir_ / "p2.svg"));
}

TEST_F(Cli, SeedFromEnvironment) {
    ASSERT_EQ(run("gen --n 16 --out a.csv", dir_, false, "WAVESEL_SEED=77").code, 0);
    ASSERT_EQ(run("gen --n 16 --seed 77 --out b.csv", dir_).code, 0);
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(Cli, FlagErrorsExitTwo) {
    EXPECT_EQ(run("gen --n notanumber", dir_).code, 2);
    EXPECT_EQ(run("select --method magic --in x.csv", dir_).code, 2);
    EXPECT_EQ(run("frobnicate", dir_).code, 2);
    EXPECT_EQ(run("", dir_).code, 2);
}

TEST_F(Cli, RuntimeErrorsExitOneWithJson) {
    const CliRun r = run("fit --in missing.csv", dir_, true);
    EXPECT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.contains("error"));
    EXPECT_TRUE(j.contains("message"));
    std::ofstream(dir_ / "c.json") << "{}";
    const CliRun k = run("plot --kind pie --in c.json --out x.svg", dir_, true);
    EXPECT_EQ(k.code, 1);
    EXPECT_EQ(nlohmann::json::parse(k.out)["error"], "unknown-kind");
}

TEST_F(Cli, PlotFromFitCoefficientDump) {
    ASSERT_EQ(run("gen --n 64 --seed 3 --out s.csv", dir_).code, 0);
    ASSERT_EQ(run("fit --in s.csv --dump-coefficients c.json --keep 16 --out f.csv", dir_).code, 0);
    ASSERT_EQ(run("plot --kind coefficients --in c.json --out c.svg", dir_).code, 0);
    EXPECT_NE(slurp(dir_ / "c.svg").find("<svg"), std::string::npos);
}
