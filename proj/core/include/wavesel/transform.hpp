#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavesel/basis.hpp"
#include "wavesel/filters.hpp"
#include "wavesel/signals.hpp"

namespace wavesel {

/// Periodized discrete wavelet decomposition of a length-n vector down to a
/// single approximation coefficient. detail[j] has 2^j entries.
struct CoefficientTree {
    std::vector<double> approx;
    std::vector<std::vector<double>> detail;
    std::size_t n = 0;

    /// Coefficients in model atom order: approx, detail[0], detail[1], ...
    std::vector<double> flatten() const;
    static CoefficientTree unflatten(std::span<const double> coefficients);
};

class NotPowerOfTwoError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

bool is_power_of_two(std::size_t n) noexcept;
/// log2 of a power of two.
int log2_exact(std::size_t n);

/// O(n L) pyramid analysis with indices taken modulo each level's length.
CoefficientTree analyze(std::span<const double> values, const OrthoFilter& filter);

/// Inverse (adjoint) of analyze. Throws std::invalid_argument on a
/// malformed tree.
std::vector<double> synthesize(const CoefficientTree& tree, const OrthoFilter& filter);

/// Keeps the first `dimension` coefficients (a power of two) and zeroes the
/// remaining detail levels.
CoefficientTree truncate(const CoefficientTree& tree, std::size_t dimension);

/// Rank-ordered wavelet fit of one response vector at every dimension.
/// The responses are treated as samples at x_i = i/n, the ordered-data
/// approximation for random design.
class OrderedPyramid {
public:
    OrderedPyramid(std::span<const double> y, const OrthoFilter& filter);

    std::size_t size() const noexcept { return tree_.n; }
    const CoefficientTree& tree() const noexcept { return tree_; }

    /// Function-space coefficients (discrete coefficients / sqrt(n)) of the
    /// first `dimension` atoms.
    std::vector<double> beta(std::size_t dimension) const;
    /// Fitted values at the design points.
    std::vector<double> fitted(std::size_t dimension) const;

private:
    OrthoFilter filter_;
    CoefficientTree tree_;
};

struct OrderedFit {
    std::vector<double> beta;
    std::vector<double> fitted;
    double empirical_risk = 0.0;
};

/// Ordered-data projection fit of a periodized wavelet model. Requires n to
/// be a power of two and D_m <= n; throws std::invalid_argument otherwise.
OrderedFit ordered_design_fit(const RegressionSample& sample, const Model& model, const OrthoFilter& filter);

}  // namespace wavesel
