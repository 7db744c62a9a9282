#include "wavesel/signals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "wavesel/rng.hpp"

namespace wavesel {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

TestSignal wave() {
    return {"wave", [](double x) { return 0.5 + 0.2 * std::cos(4 * kPi * x) + 0.1 * std::cos(24 * kPi * x); },
            "analytic, two cosine frequencies"};
}

TestSignal heavisine() {
    return {"heavisine",
            [](double x) { return 4.0 * std::sin(4 * kPi * x) - sgn(x - 0.3) - sgn(0.72 - x); },
            "smooth with jumps at 0.3 and 0.72"};
}

TestSignal doppler() {
    return {"doppler",
            [](double x) { return std::sqrt(x * (1.0 - x)) * std::sin(2 * kPi * 1.05 / (x + 0.05)); },
            "frequency increasing toward 0"};
}

TestSignal spikes() {
    static constexpr std::array<double, 5> h{2.25, 2.25, 2.25, 2.25, 2.25};
    static constexpr std::array<double, 5> t{0.2, 0.35, 0.48, 0.6, 0.8};
    static constexpr std::array<double, 5> w{0.03, 0.015, 0.008, 0.005, 0.012};
    return {"spikes",
            [](double x) {
                double s = 0.0;
                for (std::size_t k = 0; k < h.size(); ++k) {
                    const double u = (x - t[k]) / w[k];
                    s += h[k] * std::exp(-0.5 * u * u);
                }
                return s;
            },
            "five narrow Gaussian bumps"};
}

TestSignal zero_signal() {
    return {"zero", [](double) { return 0.0; }, "identically zero"};
}

TestSignal custom_signal(std::string name, std::function<double(double)> f) {
    return {std::move(name), std::move(f), "user supplied"};
}

NoiseScenario noise_l1() { return {"l1", [](double) { return 0.01; }}; }
NoiseScenario noise_l2() { return {"l2", [](double x) { return 0.02 * x; }}; }
NoiseScenario noise_h1() { return {"h1", [](double) { return 0.05; }}; }
NoiseScenario noise_h2() { return {"h2", [](double x) { return 0.1 * x; }}; }

NoiseScenario constant_noise(double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("constant_noise: sigma must be >= 0");
    char buf[64];
    std::snprintf(buf, sizeof buf, "const:%.17g", sigma);
    return {buf, [sigma](double) { return sigma; }};
}

NoiseScenario custom_noise(std::string name, std::function<double(double)> sigma) {
    return {std::move(name), std::move(sigma)};
}

TestSignal signal_by_name(const std::string& name) {
    const std::string key = lower(name);
    if (key == "wave") return wave();
    if (key == "heavisine") return heavisine();
    if (key == "doppler") return doppler();
    if (key == "spikes") return spikes();
    if (key == "zero") return zero_signal();
    throw std::invalid_argument("unknown signal '" + name + "'");
}

NoiseScenario noise_by_name(const std::string& name) {
    const std::string key = lower(name);
    if (key == "l1") return noise_l1();
    if (key == "l2") return noise_l2();
    if (key == "h1") return noise_h1();
    if (key == "h2") return noise_h2();
    if (key.rfind("const:", 0) == 0) {
        std::size_t used = 0;
        const double s = std::stod(key.substr(6), &used);
        if (used != key.size() - 6) throw std::invalid_argument("bad noise '" + name + "'");
        return constant_noise(s);
    }
    throw std::invalid_argument("unknown noise scenario '" + name + "'");
}

std::vector<std::string> builtin_signal_names() { return {"wave", "heavisine", "doppler", "spikes"}; }
std::vector<std::string> builtin_noise_names() { return {"l1", "l2", "h1", "h2"}; }

double eval_signal(const TestSignal& signal, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eval_signal: x outside [0, 1]");
    return signal.eval(x);
}

RegressionSample generate(const TestSignal& signal, const NoiseScenario& noise, std::size_t n,
                          std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate: n must be >= 2");
    Rng rng(seed);
    std::vector<double> x(n), eps(n);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : eps) v = rng.normal();

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = signal.eval(x[i]) + noise.sigma(x[i]) * eps[i];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    RegressionSample s;
    s.x.resize(n);
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x[i] = x[order[i]];
        s.y[i] = y[order[i]];
    }
    // Ties have probability zero; nudge by one ulp to keep the design strictly increasing.
    for (std::size_t i = 1; i < n; ++i)
        if (s.x[i] <= s.x[i - 1]) s.x[i] = std::nextafter(s.x[i - 1], 2.0);

    s.meta = {signal.name, noise.name, n, seed};
    return s;
}

RegressionSample equispaced_sample(std::span<const double> values) {
    RegressionSample s;
    const std::size_t n = values.size();
    s.x.resize(n);
    s.y.assign(values.begin(), values.end());
    for (std::size_t i = 0; i < n; ++i) s.x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    s.meta = {"custom", "none", n, 0};
    return s;
}

}  // namespace wavesel
