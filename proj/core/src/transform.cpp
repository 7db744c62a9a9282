#include "wavesel/transform.hpp"

#include <cmath>
#include <string>

namespace wavesel {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw NotPowerOfTwoError("length " + std::to_string(n) + " is not a power of two");
    int p = 0;
    while ((std::size_t{1} << p) < n) ++p;
    return p;
}

std::vector<double> CoefficientTree::flatten() const {
    std::vector<double> out(approx);
    for (const auto& d : detail) out.insert(out.end(), d.begin(), d.end());
    return out;
}

CoefficientTree CoefficientTree::unflatten(std::span<const double> c) {
    const int p = log2_exact(c.size());
    CoefficientTree t;
    t.n = c.size();
    t.approx = {c[0]};
    for (int j = 0; j < p; ++j) {
        const std::size_t off = std::size_t{1} << j;
        t.detail.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(off),
                              c.begin() + static_cast<std::ptrdiff_t>(2 * off));
    }
    return t;
}

CoefficientTree analyze(std::span<const double> values, const OrthoFilter& filter) {
    const int p = log2_exact(values.size());
    if (p < 1) throw NotPowerOfTwoError("analyze: need at least 2 values");
    const auto h = filter.lowpass();
    const auto g = filter.highpass();
    const std::size_t L = filter.length();

    CoefficientTree t;
    t.n = values.size();
    t.detail.resize(static_cast<std::size_t>(p));
    std::vector<double> a(values.begin(), values.end());
    for (int j = p - 1; j >= 0; --j) {
        const std::size_t N = a.size();
        const std::size_t half = N / 2;
        std::vector<double> lo(half, 0.0), hi(half, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            double sl = 0.0, sh = 0.0;
            for (std::size_t m = 0; m < L; ++m) {
                const double v = a[(2 * k + m) % N];
                sl += h[m] * v;
                sh += g[m] * v;
            }
            lo[k] = sl;
            hi[k] = sh;
        }
        t.detail[static_cast<std::size_t>(j)] = std::move(hi);
        a = std::move(lo);
    }
    t.approx = std::move(a);
    return t;
}

std::vector<double> synthesize(const CoefficientTree& tree, const OrthoFilter& filter) {
    if (tree.approx.size() != 1) throw std::invalid_argument("synthesize: approx must hold one coefficient");
    for (std::size_t j = 0; j < tree.detail.size(); ++j)
        if (tree.detail[j].size() != (std::size_t{1} << j))
            throw std::invalid_argument("synthesize: detail level " + std::to_string(j) + " has wrong length");
    if (tree.n != (std::size_t{1} << tree.detail.size()))
        throw std::invalid_argument("synthesize: n does not match the number of levels");
    const auto h = filter.lowpass();
    const auto g = filter.highpass();
    const std::size_t L = filter.length();

    std::vector<double> a = tree.approx;
    for (const auto& d : tree.detail) {
        const std::size_t half = a.size();
        const std::size_t N = 2 * half;
        std::vector<double> up(N, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            const double ak = a[k], dk = d[k];
            if (ak == 0.0 && dk == 0.0) continue;
            for (std::size_t m = 0; m < L; ++m) up[(2 * k + m) % N] += h[m] * ak + g[m] * dk;
        }
        a = std::move(up);
    }
    return a;
}

CoefficientTree truncate(const CoefficientTree& tree, std::size_t dimension) {
    const int keep = log2_exact(dimension);
    if (dimension > tree.n) throw std::invalid_argument("truncate: dimension exceeds tree size");
    CoefficientTree t = tree;
    for (std::size_t j = static_cast<std::size_t>(keep); j < t.detail.size(); ++j)
        std::fill(t.detail[j].begin(), t.detail[j].end(), 0.0);
    return t;
}

OrderedPyramid::OrderedPyramid(std::span<const double> y, const OrthoFilter& filter)
    : filter_(filter), tree_(analyze(y, filter)) {}

std::vector<double> OrderedPyramid::beta(std::size_t dimension) const {
    if (dimension > tree_.n) throw std::invalid_argument("dimension exceeds n");
    log2_exact(dimension);
    std::vector<double> flat = tree_.flatten();
    flat.resize(dimension);
    const double s = 1.0 / std::sqrt(static_cast<double>(tree_.n));
    for (double& b : flat) b *= s;
    return flat;
}

std::vector<double> OrderedPyramid::fitted(std::size_t dimension) const {
    if (dimension > tree_.n) throw std::invalid_argument("dimension exceeds n");
    return synthesize(truncate(tree_, dimension), filter_);
}

OrderedFit ordered_design_fit(const RegressionSample& sample, const Model& model, const OrthoFilter& filter) {
    if (model.family().kind != FamilyKind::PeriodizedWavelet)
        throw std::invalid_argument("ordered_design_fit: model is not a periodized wavelet model");
    if (model.family().filter_id != filter.id())
        throw std::invalid_argument("ordered_design_fit: model filter '" + model.family().filter_id +
                                    "' differs from '" + filter.id() + "'");
    const std::size_t n = sample.size();
    const std::size_t D = model.dimension();
    if (D > n) throw std::invalid_argument("ordered_design_fit: dimension exceeds n");
    OrderedPyramid pyr(sample.y, filter);
    OrderedFit fit;
    fit.beta = pyr.beta(D);
    fit.fitted = pyr.fitted(D);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += (sample.y[i] - fit.fitted[i]) * (sample.y[i] - fit.fitted[i]);
    fit.empirical_risk = r / static_cast<double>(n);
    return fit;
}

}  // namespace wavesel
