#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wavesel {

/// Regression function s* on [0, 1].
struct TestSignal {
    std::string name;
    std::function<double(double)> eval;
    std::string smoothness_note;
};

/// Heteroscedastic noise level sigma(x) >= 0 on [0, 1].
struct NoiseScenario {
    std::string name;
    std::function<double(double)> sigma;
};

struct SampleMeta {
    std::string signal;
    std::string noise;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// n design/response pairs with the design sorted strictly increasing.
struct RegressionSample {
    std::vector<double> x;
    std::vector<double> y;
    SampleMeta meta;

    std::size_t size() const noexcept { return x.size(); }
};

// Built-in test functions.
TestSignal wave();
TestSignal heavisine();
TestSignal doppler();
TestSignal spikes();
/// s* == 0, used by the pure-noise experiments.
TestSignal zero_signal();
TestSignal custom_signal(std::string name, std::function<double(double)> f);

// Built-in noise scenarios: l1 = 0.01, l2 = 0.02x, h1 = 0.05, h2 = 0.1x.
NoiseScenario noise_l1();
NoiseScenario noise_l2();
NoiseScenario noise_h1();
NoiseScenario noise_h2();
NoiseScenario constant_noise(double sigma);
NoiseScenario custom_noise(std::string name, std::function<double(double)> sigma);

/// Case-insensitive lookup of a built-in ("wave", "heavisine", "doppler",
/// "spikes", "zero"). Throws std::invalid_argument on unknown names.
TestSignal signal_by_name(const std::string& name);
/// "l1", "l2", "h1", "h2", or "const:<sigma>".
NoiseScenario noise_by_name(const std::string& name);

std::vector<std::string> builtin_signal_names();
std::vector<std::string> builtin_noise_names();

/// s*(x); throws std::domain_error if x is outside [0, 1].
double eval_signal(const TestSignal& signal, double x);

/// Y = s*(X) + sigma(X) eps with X ~ U[0,1], eps ~ N(0,1), sorted by X.
/// A pure function of its arguments. Requires n >= 2.
RegressionSample generate(const TestSignal& signal, const NoiseScenario& noise, std::size_t n,
                          std::uint64_t seed);

/// Sample on the midpoint grid x_i = (i + 1/2)/n with y_i = values[i].
RegressionSample equispaced_sample(std::span<const double> values);

}  // namespace wavesel
