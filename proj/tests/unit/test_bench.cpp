#include <gtest/gtest.h>

#include <cmath>

#include "wavesel/bench.hpp"
#include "wavesel/serialize.hpp"
#include "wavesel/rng.hpp"

using namespace wavesel;

namespace {

BenchConfig one_cell(const std::string& signal, const std::string& noise, std::size_t n, const std::string& method,
                     std::size_t reps = 300) {
    BenchConfig c;
    c.signals = {signal};
    c.noises = {noise};
    c.sizes = {n};
    c.methods = {method};
    c.replications = reps;
    return c;
}

double cell_mean(const BenchConfig& c) { return run_bench(c).cells.at(0).mean; }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(BenchConfig, JsonRoundTrip) {
    BenchConfig c;
    c.signals = {"wave"};
    c.replications = 12;
    c.outputs = {{"csv", "t.csv"}};
    const BenchConfig d = bench_config_from_json(bench_config_to_json(c));
    EXPECT_EQ(bench_config_to_json(c), bench_config_to_json(d));
}

TEST(BenchConfig, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(bench_config_from_json(R"({"replicatons": 5})"), std::invalid_argument);
    EXPECT_THROW(bench_config_from_json(R"({"schema": "other/1"})"), std::invalid_argument);
    BenchConfig c;
    c.replications = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = BenchConfig{};
    c.methods = {"aic"};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = BenchConfig{};
    c.sizes = {1000};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Bench, CellSeedsFollowLabelHash) {
    EXPECT_EQ(cell_seed(5, "wave", "l1", 1024, 3), mix_seed(mix_seed(5, hash_label("wave/l1/1024")), 3));
    EXPECT_NE(cell_seed(5, "wave", "l1", 1024, 3), cell_seed(5, "wave", "l2", 1024, 3));
}

TEST(Bench, ZeroNoiseMemberGivesUnitRatios) {
    // a signal inside every model: all losses vanish and 0/0 counts as 1
    BenchConfig c = one_cell("wave", "const:0", 256, "sh", 5);
    c.methods = {"sh", "cp", "vfcv", "penvf"};
    c.collection = "wavelet:haar";
    c.signals = {"wave"};
    const BenchReport r = run_bench(c);
    for (const auto& cell : r.cells) EXPECT_GE(cell.mean, 1.0);
}

TEST(Bench, IdenticalRunsAndJobsInvariance) {
    BenchConfig c = one_cell("doppler", "h1", 256, "sh", 20);
    c.methods = {"sh", "cp", "vfcv", "penvf"};
    c.keep_ratios = true;
    const BenchReport a = run_bench(c);
    c.jobs = 3;
    const BenchReport b = run_bench(c);
    for (const char* fmt : {"csv", "json", "markdown"}) EXPECT_EQ(emit_table(a, fmt), emit_table(b, fmt));
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].ratios, b.cells[i].ratios);
    EXPECT_EQ(bench_report_to_json(a), bench_report_to_json(b));
}

TEST(Bench, RatiosNeverBelowOne) {
    BenchConfig c = one_cell("spikes", "l2", 256, "sh", 30);
    c.methods = {"sh", "cp", "vfcv", "penvf"};
    c.keep_ratios = true;
    for (const auto& cell : run_bench(c).cells)
        for (double r : cell.ratios) EXPECT_GE(r, 1.0 - 1e-12);
}

TEST(EmitTable, EmptyAndSingleCell) {
    BenchReport empty;
    empty.config.signals.clear();
    const std::string md = emit_table(empty, "markdown");
    EXPECT_EQ(count_lines(md), 2u);
    EXPECT_NE(md.find("pen2F"), std::string::npos);
    EXPECT_EQ(count_lines(emit_table(empty, "csv")), 1u);

    BenchReport one;
    one.config = one_cell("wave", "l1", 256, "cp", 1);
    one.cells.push_back({"wave", "l1", 256, "cp", 1.0314, 0.0021, 300, 0, false, {}});
    const std::string csv = emit_table(one, "csv");
    EXPECT_EQ(count_lines(csv), 2u);
    EXPECT_NE(csv.find("1.031 ± 0.002"), std::string::npos);
    EXPECT_THROW(emit_table(one, "xlsx"), std::invalid_argument);
}

TEST(EmitTable, FullLowNoiseSuiteRowCount) {
    BenchReport r;
    r.config.noises = {"l1", "l2"};
    for (const auto& s : r.config.signals)
        for (const auto& no : r.config.noises)
            for (std::size_t n : r.config.sizes)
                for (const auto& m : r.config.methods) r.cells.push_back({s, no, n, m, 1.0, 0.0, 1, 0, false, {}});
    // header + separator + 4 signals x 2 scenarios x 3 sizes
    EXPECT_EQ(count_lines(emit_table(r, "markdown")), 2u + 24u);
}

TEST(EmitTable, MarkdownBoldsRowMinimum) {
    BenchReport r;
    r.config = one_cell("wave", "l1", 256, "sh", 1);
    r.config.methods = {"sh", "cp"};
    r.cells.push_back({"wave", "l1", 256, "sh", 1.2, 0.01, 1, 0, false, {}});
    r.cells.push_back({"wave", "l1", 256, "cp", 1.1, 0.01, 1, 0, false, {}});
    const std::string md = emit_table(r, "markdown");
    EXPECT_NE(md.find("**1.100 ± 0.010**"), std::string::npos);
    EXPECT_EQ(md.find("**1.200"), std::string::npos);
}

// Trend targets at desk scale (N = 300, tolerance 0.15).
TEST(PaperTrend, SpikesL1N4096Sh) { EXPECT_NEAR(cell_mean(one_cell("spikes", "l1", 4096, "sh")), 1.008, 0.15); }
TEST(PaperTrend, WaveL1N1024Cp) { EXPECT_NEAR(cell_mean(one_cell("wave", "l1", 1024, "cp")), 1.031, 0.15); }
TEST(PaperTrend, HeaviSineH1N4096Vfcv) { EXPECT_NEAR(cell_mean(one_cell("heavisine", "h1", 4096, "vfcv")), 1.081, 0.15); }
TEST(PaperTrend, DopplerL1N1024PenVf) { EXPECT_NEAR(cell_mean(one_cell("doppler", "l1", 1024, "penvf")), 1.013, 0.15); }
TEST(PaperTrend, WaveL2N4096Vfcv) { EXPECT_NEAR(cell_mean(one_cell("wave", "l2", 4096, "vfcv")), 1.015, 0.15); }
