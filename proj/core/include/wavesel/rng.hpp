#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wavesel {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of replication `index` under `base`:
///   mix(base, index) = splitmix64(splitmix64(base) ^ (index + 0x9E3779B97F4A7C15)).
/// Streams derived this way do not depend on the order in which
/// replications are scheduled.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// FNV-1a over a label; lets a bench cell derive its own seed family.
std::uint64_t hash_label(std::string_view label) noexcept;

/// mt19937_64 with explicitly defined uniform and normal transforms, so a
/// seed gives the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on the open interval (0, 1), 53 bits.
    double uniform() noexcept;

    /// Standard normal via Box-Muller, pairs cached.
    double normal() noexcept;

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace wavesel
