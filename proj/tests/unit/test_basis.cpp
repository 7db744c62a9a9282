#include <gtest/gtest.h>

#include <boost/math/filters/daubechies.hpp>
#include <cmath>
#include <numeric>

#include "wavesel/basis.hpp"
#include "wavesel/filters.hpp"
#include "wavesel/quadrature.hpp"
#include "wavesel/rng.hpp"

using namespace wavesel;

namespace {

double max_identity_defect(const std::vector<double>& G, std::size_t D) {
    double worst = 0.0;
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) worst = std::max(worst, std::abs(G[a * D + b] - (a == b ? 1.0 : 0.0)));
    return worst;
}

// Inverse CDF of the density 0.5 + x on [0, 1].
double draw_linear_density(Rng& r) { return -0.5 + std::sqrt(0.25 + 2.0 * r.uniform()); }

}  // namespace

TEST(Filters, Db8MatchesBoostTable) {
    const auto ref = boost::math::filters::daubechies_scaling_filter<double, 8>();
    const OrthoFilter f = daubechies_filter(8);
    ASSERT_EQ(f.length(), ref.size());
    // Boost stores the filter normalized to sum sqrt(2); the tap order may be reversed.
    double fwd = 0.0, rev = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        fwd = std::max(fwd, std::abs(f.lowpass()[k] - ref[k]));
        rev = std::max(rev, std::abs(f.lowpass()[k] - ref[ref.size() - 1 - k]));
    }
    EXPECT_LT(std::min(fwd, rev), 1e-12);
}

TEST(Filters, EveryDaubechiesFilterIsOrthonormal) {
    for (int p : {1, 2, 4, 8}) {
        const OrthoFilter f = daubechies_filter(p);
        EXPECT_EQ(f.length(), static_cast<std::size_t>(2 * p));
        EXPECT_LT(OrthoFilter::orthonormality_defect(f.lowpass()), 1e-12) << "db" << p;
        const auto h = f.lowpass();
        EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), std::sqrt(2.0), 1e-12);
    }
}

TEST(Filters, InvalidFilterRejected) {
    EXPECT_THROW(OrthoFilter("bad", {0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(filter_by_name("sym4"), std::invalid_argument);
    EXPECT_EQ(filter_by_name("db1").length(), 2u);
}

TEST(Filters, ScalingFunctionIntegerValuesSumToOne) {
    const WaveletTables t(daubechies_filter(4), 10);
    const auto v = t.phi_integer_values();
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 1.0, 1e-12);
}

TEST(HaarBasis, UniformAtomValues) {
    const Model m = build_haar_uniform(3);
    EXPECT_EQ(m.dimension(), 16u);
    // level 2, first position: index 1 + 1 + 2 = 4, support [0, 1/4]
    EXPECT_DOUBLE_EQ(m.eval(4, 0.05), 2.0);
    EXPECT_DOUBLE_EQ(m.eval(4, 0.2), -2.0);
    EXPECT_DOUBLE_EQ(m.eval(4, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(m.eval(0, 0.77), 1.0);
}

TEST(HaarBasis, WeightedUniformEqualsStandard) {
    const Model a = build_haar_uniform(4);
    const Model b = build_haar_weighted(4, [](double) { return 1.0; }, 1.0);
    for (double x : {0.01, 0.13, 0.5001, 0.77, 0.99})
        for (std::size_t k = 0; k < a.dimension(); ++k) EXPECT_NEAR(a.eval(k, x), b.eval(k, x), 1e-9);
}

TEST(HaarBasis, QuadratureGramIsIdentity) {
    const Model m = build_haar_weighted(5, [](double x) { return 0.5 + x; }, 0.5);
    EXPECT_LT(max_identity_defect(quadrature_gram(m), m.dimension()), 1e-6);
}

TEST(HaarBasis, MonteCarloGramUniform) {
    const Model m = build_haar_uniform(3);
    Rng r(1);
    std::vector<double> x(100000);
    for (auto& v : x) v = r.uniform();
    EXPECT_LT(max_identity_defect(empirical_gram(m, x), 16), 0.02);
}

TEST(HaarBasis, MonteCarloGramWeightedAtRootNRate) {
    const Model m = build_haar_weighted(3, [](double x) { return 0.5 + x; }, 0.5);
    // Average the worst entry over a few seeds; quadrupling n should roughly halve it.
    auto defect = [&](std::size_t n) {
        double acc = 0.0;
        for (std::uint64_t s = 0; s < 8; ++s) {
            Rng r(mix_seed(99, s));
            std::vector<double> x(n);
            for (auto& v : x) v = draw_linear_density(r);
            acc += max_identity_defect(empirical_gram(m, x), m.dimension());
        }
        return acc / 8.0;
    };
    const double d1 = defect(20000), d4 = defect(80000);
    EXPECT_LT(d1, 0.08);
    EXPECT_GT(d1 / d4, 1.4);
    EXPECT_LT(d1 / d4, 2.9);
}

TEST(HaarBasis, WeightedSupNormBound) {
    const double c_min = 0.5;
    const Model m = build_haar_weighted(6, [](double x) { return 0.5 + x; }, c_min);
    for (const Atom& a : m.atoms()) {
        if (a.scale < 0) continue;
        const double A = std::pow(2.0, a.scale);
        EXPECT_LE(a.sup_norm, std::sqrt(2.0 / c_min * A) + 1e-12);
    }
}

TEST(HaarBasis, DegenerateDensityRejected) {
    EXPECT_THROW(build_haar_weighted(3, [](double x) { return 2.0 * x; }, 0.5), std::invalid_argument);
    EXPECT_THROW(build_haar_weighted(3, [](double) { return 2.0; }, 1.0), std::invalid_argument);
}

TEST(WaveletBasis, HaarFilterCoincidesWithHaarAtoms) {
    const Model a = build_periodized_wavelet(haar_filter(), 3);
    const Model b = build_haar_uniform(3);
    for (double x : {0.03, 0.2, 0.41, 0.66, 0.97})
        for (std::size_t k = 0; k < a.dimension(); ++k) EXPECT_NEAR(std::abs(a.eval(k, x)), std::abs(b.eval(k, x)), 1e-9);
}

TEST(WaveletBasis, Db8QuadratureGramIsIdentity) {
    const Model m = build_periodized_wavelet(daubechies_filter(8), 5);
    EXPECT_EQ(m.dimension(), 64u);
    EXPECT_LT(max_identity_defect(quadrature_gram(m), m.dimension()), 1e-6);
}

TEST(WaveletBasis, DimensionFromLevel) {
    EXPECT_EQ(build_periodized_wavelet(daubechies_filter(4), 4).dimension(), 32u);
    EXPECT_EQ(build_periodized_wavelet(daubechies_filter(8), 0).dimension(), 2u);
}

TEST(WaveletBasis, SupNormsBoundGridValues) {
    const Model m = build_periodized_wavelet(daubechies_filter(8), 4);
    const auto vals = atom_grid_matrix(m);
    const std::size_t D = m.dimension();
    for (std::size_t k = 0; k < D; ++k) {
        double mx = 0.0;
        for (std::size_t i = 0; i < kGridSize; ++i) mx = std::max(mx, std::abs(vals[i * D + k]));
        EXPECT_LE(mx, m.atoms()[k].sup_norm + 1e-12);
        EXPECT_GE(mx, 0.95 * m.atoms()[k].sup_norm);
    }
}

TEST(WaveletBasis, RawCoefficientsValidated) {
    const std::vector<double> bad{0.7, 0.7, 0.1};
    EXPECT_THROW(build_periodized_wavelet(std::span<const double>(bad), 3), std::invalid_argument);
}

TEST(PiecewisePoly, HistogramNormalization) {
    const Model m = build_regular_piecewise_poly(4, 0);
    EXPECT_EQ(m.dimension(), 4u);
    EXPECT_DOUBLE_EQ(m.eval(1, 0.3), 2.0);
    EXPECT_DOUBLE_EQ(m.eval(1, 0.6), 0.0);
    EXPECT_EQ(build_regular_piecewise_poly(4, 1).dimension(), 8u);
}

TEST(PiecewisePoly, NonDyadicNorms) {
    const std::vector<double> b{0.0, 0.5, 0.75, 1.0};
    const Model m = build_piecewise_poly(b, 0);
    EXPECT_NEAR(m.atoms()[0].sup_norm, 1.0 / std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(m.atoms()[1].sup_norm, 1.0 / std::sqrt(0.25), 1e-12);
    EXPECT_NEAR(m.atoms()[2].sup_norm, 1.0 / std::sqrt(0.25), 1e-12);
    EXPECT_LT(max_identity_defect(quadrature_gram(m), 3), 1e-6);
}

TEST(PiecewisePoly, HigherDegreeIsOrthonormal) {
    const std::vector<double> b{0.0, 0.25, 0.5, 1.0};
    const Model m = build_piecewise_poly(b, 3);
    EXPECT_EQ(m.dimension(), 12u);
    EXPECT_LT(max_identity_defect(quadrature_gram(m), m.dimension()), 1e-6);
}

TEST(PiecewisePoly, ZeroLengthCellRejected) {
    const std::vector<double> b{0.0, 0.5, 0.5, 1.0};
    EXPECT_THROW(build_piecewise_poly(b, 0), LowerRegularityError);
}

TEST(Quadrature, SimpsonIntegratesPolynomialsExactly) {
    EXPECT_NEAR(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 1.0), 0.25, 1e-12);
    EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI), 2.0, 1e-9);
    EXPECT_EQ(quadrature_grid().size(), kGridSize);
}
