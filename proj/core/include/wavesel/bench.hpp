#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavesel {

inline constexpr const char* kBenchConfigSchema = "wavesel.bench-config/1";
inline constexpr const char* kBenchReportSchema = "wavesel.bench-report/1";

struct BenchConfig {
    std::vector<std::string> signals{"wave", "heavisine", "doppler", "spikes"};
    std::vector<std::string> noises{"l1", "l2"};
    std::vector<std::size_t> sizes{256, 1024, 4096};
    std::vector<std::string> methods{"sh", "cp", "vfcv", "penvf"};
    std::size_t replications = 300;
    std::uint64_t seed = 20120101;
    std::size_t jobs = 1;
    std::size_t folds = 2;
    std::string collection = "wavelet:db8";
    std::string loss = "design";
    bool keep_ratios = false;
    /// Optional output paths by format ("csv", "json", "markdown").
    std::vector<std::pair<std::string, std::string>> outputs;

    /// Throws std::invalid_argument on an invalid configuration.
    void validate() const;
};

BenchConfig bench_config_from_json(const std::string& text);
std::string bench_config_to_json(const BenchConfig& config);

struct BenchCell {
    std::string signal;
    std::string noise;
    std::size_t n = 0;
    std::string method;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;     // replications used
    std::size_t failures = 0;  // replications dropped
    bool flagged = false;      // more than 5% failures
    std::vector<double> ratios;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchCell> cells;
    /// First failure message per (signal, noise, n), for diagnosis.
    std::vector<std::string> failure_notes;
};

/// Seed of replication r of a cell: mix(mix(base, hash("signal/noise/n")), r).
std::uint64_t cell_seed(std::uint64_t base, const std::string& signal, const std::string& noise, std::size_t n,
                        std::size_t replication);

/// Replications run in parallel up to config.jobs; results are reduced in
/// replication order, so the report does not depend on jobs.
BenchReport run_bench(const BenchConfig& config);

/// Column label of a method: SH, Cp, {V}FCV, pen{V}F.
std::string method_label(const std::string& method, std::size_t folds = 2);

/// Rows = signal x noise x n in config order, columns in the order SH, Cp,
/// VFCV, penVF. Cells read "mean ± se" with 3 decimals; markdown bolds the
/// smallest mean of each row.
std::string emit_table(const BenchReport& report, const std::string& format);

}  // namespace wavesel
