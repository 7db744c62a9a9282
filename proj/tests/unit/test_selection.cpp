#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "frozen_oracles.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/signals.hpp"

using namespace wavesel;

namespace {

// A collection with only empirical risks filled in, as the penalty-based selectors need.
FittedCollection trace_only(std::span<const std::size_t> dims, std::span<const double> risks, std::size_t n) {
    FittedCollection fc;
    fc.x.resize(n);
    fc.y.resize(n);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        ModelFit m;
        m.dimension = dims[i];
        m.empirical_risk = risks[i];
        fc.models.push_back(m);
    }
    return fc;
}

std::vector<double> shapes_of(std::span<const std::size_t> dims, double n) {
    std::vector<double> s;
    for (auto d : dims) s.push_back(static_cast<double>(d) / n);
    return s;
}

}  // namespace

TEST(PenaltyPath, MatchesExactRationalReference) {
    const auto& dims = oracle::kPathDims;
    const auto shapes = shapes_of(dims, oracle::kPathN);
    const auto path = penalty_path(dims, shapes, oracle::kPathRisks);
    ASSERT_EQ(path.size(), std::size(oracle::kPathSel));
    for (std::size_t t = 0; t < path.size(); ++t) {
        EXPECT_EQ(path[t].dimension, oracle::kPathSel[t]);
        EXPECT_NEAR(path[t].alpha_lo, oracle::kPathLo[t], 1e-12);
        if (oracle::kPathHi[t] < 1e300) EXPECT_NEAR(path[t].alpha_hi, oracle::kPathHi[t], 1e-12);
        else EXPECT_TRUE(std::isinf(path[t].alpha_hi));
    }
    const auto jump = dimension_jump(path);
    ASSERT_TRUE(jump);
    EXPECT_NEAR(jump->alpha, oracle::kJumpAlpha, 1e-12);
    EXPECT_EQ(jump->from_dimension, oracle::kJumpFrom);
    EXPECT_EQ(jump->to_dimension, oracle::kJumpTo);
}

TEST(PenaltyPath, EqualsDenseGridOnRandomFixtures) {
    Rng r(2024);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t M = 2 + static_cast<std::size_t>(r.uniform() * 9);
        std::vector<std::size_t> dims;
        std::vector<double> risks;
        double risk = 1.0;
        for (std::size_t i = 0; i < M; ++i) {
            dims.push_back(std::size_t{1} << (i + 1));
            risk -= r.uniform() * 0.1;
            risks.push_back(risk);
        }
        const auto shapes = shapes_of(dims, 4096);
        const auto path = penalty_path(dims, shapes, risks);
        std::vector<double> alphas;
        for (int k = 0; k < 4000; ++k) alphas.push_back(std::pow(10.0, -4.0 + 8.0 * k / 3999.0));
        const auto grid = penalty_path_grid(shapes, risks, alphas);
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            // exact breakpoints are where both sides tie; skip probes within rounding of one
            bool near_break = false;
            for (const auto& s : path) near_break |= std::abs(alphas[k] - s.alpha_hi) < 1e-9 * (1 + s.alpha_hi);
            if (near_break) continue;
            ASSERT_EQ(path_lookup(path, alphas[k]), grid[k]) << "rep " << rep << " alpha " << alphas[k];
        }
    }
}

TEST(PenaltyPath, TwoModelBreakpoint) {
    const std::size_t dims[] = {4, 16};
    const double risks[] = {0.5, 0.2};
    const double n = 64;
    const auto path = penalty_path(dims, shapes_of(dims, n), risks);
    ASSERT_EQ(path.size(), 2u);
    EXPECT_NEAR(path[0].alpha_hi, (0.5 - 0.2) / ((16 - 4) / n), 1e-12);
    EXPECT_EQ(path[0].dimension, 16u);
    EXPECT_EQ(path[1].dimension, 4u);
}

TEST(PenaltyPath, EqualRisksPickSmaller) {
    const std::size_t dims[] = {4, 16};
    const double risks[] = {0.3, 0.3};
    const auto path = penalty_path(dims, shapes_of(dims, 64), risks);
    ASSERT_EQ(path.size(), 1u);
    EXPECT_EQ(path[0].dimension, 4u);
    EXPECT_FALSE(dimension_jump(path));
}

TEST(PenaltyPath, RejectsNonIncreasingShapes) {
    const std::size_t dims[] = {4, 4};
    const double shapes[] = {0.1, 0.1}, risks[] = {1, 0.5};
    EXPECT_THROW(penalty_path(dims, shapes, risks), std::invalid_argument);
}

TEST(DimensionJump, CliffFixture) {
    // risks flat over large models then steep: the jump sits where the cliff starts
    const std::size_t dims[] = {2, 4, 8, 16, 32, 64, 128, 256};
    const double n = 512;
    std::vector<double> risks;
    for (auto d : dims) risks.push_back(d <= 8 ? 1.0 / static_cast<double>(d) : 0.01 * (1 - d / n));
    const auto path = penalty_path(dims, shapes_of(dims, n), risks);
    const auto jump = dimension_jump(path);
    ASSERT_TRUE(jump);
    EXPECT_EQ(jump->from_dimension, 256u);
    EXPECT_EQ(jump->to_dimension, 16u);
    EXPECT_NEAR(jump->alpha, 0.01, 1e-12);
    EXPECT_FALSE(jump->warning);
}

TEST(Selectors, CpAndShOnFixture) {
    const FittedCollection fc = trace_only(oracle::kPathDims, oracle::kPathRisks, oracle::kPathN);
    const SelectionOutcome cp = select_cp(fc);
    EXPECT_NEAR(*cp.diagnostics.sigma2, oracle::kCpSigma2, 1e-15);
    EXPECT_EQ(cp.chosen_dimension, oracle::kCpChoice);
    const SelectionOutcome sh = select_sh(fc);
    EXPECT_NEAR(*sh.diagnostics.alpha_min, oracle::kJumpAlpha, 1e-12);
    EXPECT_EQ(sh.chosen_dimension, oracle::kShChoice);
    EXPECT_EQ(sh.trace.size(), std::size(oracle::kPathDims));
}

TEST(Selectors, CpNeedsHalfDimensionModel) {
    const std::size_t dims[] = {2, 4, 8};
    const double risks[] = {0.3, 0.2, 0.1};
    EXPECT_THROW(select_cp(trace_only(dims, risks, 64)), MissingModelError);
}

TEST(Selectors, ShInvariantUnderShapeRescaling) {
    const FittedCollection fc = trace_only(oracle::kPathDims, oracle::kPathRisks, oracle::kPathN);
    const SelectionOutcome a = select_sh(fc, 1.0);
    for (double c : {0.01, 0.5, 3.0, 1000.0}) {
        const SelectionOutcome b = select_sh(fc, c);
        EXPECT_EQ(a.chosen_dimension, b.chosen_dimension);
        EXPECT_NEAR(*b.diagnostics.alpha_min * c, *a.diagnostics.alpha_min, 1e-12);
    }
}

TEST(Selectors, VfcvAndPenVfMatchReference) {
    FittedCollection fc;
    fc.y.assign(std::begin(oracle::kVfY), std::end(oracle::kVfY));
    fc.x.resize(8);
    for (std::size_t i = 0; i < 8; ++i) fc.x[i] = (i + 0.5) / 8.0;
    fc.folds = FoldScheme::interleaved(8, 2);
    for (std::size_t m = 0; m < 2; ++m) {
        ModelFit mf;
        mf.dimension = m == 0 ? 2 : 4;
        mf.empirical_risk = 0.1;
        for (std::size_t j = 0; j < 2; ++j)
            mf.fold_predictions.emplace_back(oracle::kVfPred + (m * 2 + j) * 8, oracle::kVfPred + (m * 2 + j + 1) * 8);
        fc.models.push_back(mf);
    }
    const auto crit = vfcv_criterion(fc);
    const auto pen = penvf_penalty(fc);
    for (std::size_t m = 0; m < 2; ++m) {
        EXPECT_NEAR(crit[m], oracle::kVfcv[m], 1e-14);
        EXPECT_NEAR(pen[m], oracle::kPenVf[m], 1e-14);
    }
}

TEST(Selectors, VfcvShiftInvariance) {
    const RegressionSample s = generate(wave(), noise_h1(), 256, 5);
    const FittedCollection fc = fit_collection(s, make_collection("wavelet", 256), FoldScheme::interleaved(256, 2));
    const SelectionOutcome o = select_vfcv(fc);
    auto crit = vfcv_criterion(fc);
    for (double c : {-1.0, 0.3, 17.0}) {
        std::vector<double> shifted(crit);
        for (auto& v : shifted) v += c;
        EXPECT_EQ(argmin_smaller(shifted), o.chosen_index);
    }
}

TEST(Selectors, DuplicatedFoldsGiveEmpiricalRisk) {
    const RegressionSample s = generate(doppler(), noise_l1(), 128, 6);
    FittedCollection fc = fit_collection(s, make_collection("haar", std::vector<std::size_t>{2, 4, 8}),
                                         FoldScheme::interleaved(128, 2));
    // the whole sample serves as both folds and the training fits are the full fits
    std::vector<std::size_t> all(128);
    std::iota(all.begin(), all.end(), std::size_t{0});
    fc.folds.blocks = {all, all};
    for (auto& m : fc.models) m.fold_predictions = {m.fitted, m.fitted};
    const auto crit = vfcv_criterion(fc);
    for (std::size_t m = 0; m < crit.size(); ++m) EXPECT_NEAR(crit[m], fc.models[m].empirical_risk, 1e-15);
    EXPECT_EQ(select_vfcv(fc).chosen_dimension, 8u);
}

TEST(Selectors, OracleTiesAndSingleModel) {
    const TestSignal step = custom_signal("step", [](double x) { return x < 0.5 ? 1.0 : 0.0; });
    const RegressionSample s = generate(step, constant_noise(0.0), 256, 3);
    const FittedCollection fc =
        fit_collection(s, make_collection("haar", 256), FoldScheme::interleaved(256, 2), &step, LossMeasure::Design);
    EXPECT_EQ(oracle_select(fc).chosen_dimension, 2u);
    const FittedCollection one =
        fit_collection(s, make_collection("haar", std::vector<std::size_t>{8}), FoldScheme::interleaved(256, 2), &step);
    EXPECT_EQ(oracle_select(one).chosen_dimension, 8u);
    EXPECT_THROW(oracle_select(fit_collection(s, make_collection("haar", 256), FoldScheme::interleaved(256, 2))),
                 std::invalid_argument);
}

TEST(Selectors, CpZeroNoiseMemberSelectsSmallestAdequate) {
    const TestSignal step = custom_signal("step", [](double x) { return x < 0.25 ? 1.0 : 0.0; });
    // equispaced so the rank order puts the jump exactly at a quarter
    std::vector<double> v(256);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_signal(step, (i + 0.5) / 256.0);
    const RegressionSample s = equispaced_sample(v);
    const FittedCollection fc = fit_collection(s, make_collection("wavelet:haar", 256), FoldScheme::interleaved(256, 2));
    const SelectionOutcome cp = select_cp(fc);
    EXPECT_NEAR(*cp.diagnostics.sigma2, 0.0, 1e-20);
    EXPECT_EQ(cp.chosen_dimension, 4u);
}

TEST(Selectors, CpVarianceEstimateIsUnbiasedUnderPureNoise) {
    const double sigma = 0.05;
    std::vector<double> est;
    for (std::uint64_t r = 0; r < 500; ++r) {
        const RegressionSample s = generate(zero_signal(), constant_noise(sigma), 256, mix_seed(77, r));
        const FittedCollection fc =
            fit_collection(s, make_collection("wavelet", std::vector<std::size_t>{2, 128}), FoldScheme::interleaved(256, 2));
        est.push_back(*select_cp(fc).diagnostics.sigma2);
    }
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / est.size();
    double v = 0.0;
    for (double e : est) v += (e - mean) * (e - mean);
    const double se = std::sqrt(v / (est.size() - 1) / est.size());
    EXPECT_LT(std::abs(mean - sigma * sigma), 3 * se);
}

TEST(Selectors, UnderPenalizedSlopeExplodes) {
    int big = 0;
    for (std::uint64_t r = 0; r < 30; ++r) {
        const RegressionSample s = generate(zero_signal(), constant_noise(0.05), 1024, mix_seed(31, r));
        const FittedCollection fc = fit_collection(s, make_collection("wavelet", 1024), FoldScheme::interleaved(1024, 2));
        const SelectionOutcome o = select_slope(fc, 0.5);
        big += o.chosen_dimension >= 256;
    }
    EXPECT_GE(big, 27);
}

TEST(FitCollection, ErmMinimalityAndNestedRisks) {
    for (const char* coll : {"wavelet", "haar", "histogram", "wavelet:db4"}) {
        const RegressionSample s = generate(heavisine(), noise_h1(), 512, 12);
        const FittedCollection fc = fit_collection(s, make_collection(coll, 512), FoldScheme::interleaved(512, 2));
        double prev = INFINITY;
        Rng r(1);
        for (const auto& m : fc.models) {
            if (!m.ok) continue;
            EXPECT_LE(m.empirical_risk, prev + 1e-12) << coll;
            prev = m.empirical_risk;
            // moving the fit in the direction of the residual cannot lower the empirical risk
            for (int t = 0; t < 3; ++t) {
                const double eps = 1e-3 * (r.uniform() - 0.5);
                double perturbed = 0.0;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    const double f = m.fitted[i] + eps;
                    perturbed += (s.y[i] - f) * (s.y[i] - f);
                }
                EXPECT_GE(perturbed / s.size(), m.empirical_risk - 1e-15);
            }
        }
    }
}

TEST(FitCollection, FoldsAndRoutes) {
    const FoldScheme f = FoldScheme::interleaved(10, 2);
    EXPECT_EQ(f.blocks[0], (std::vector<std::size_t>{1, 3, 5, 7, 9}));
    EXPECT_THROW(FoldScheme::interleaved(10, 1), FoldDegeneracyError);
    EXPECT_THROW(FoldScheme::interleaved(3, 5), FoldDegeneracyError);
    FoldScheme bad = f;
    bad.blocks[1].clear();
    EXPECT_THROW(bad.validate(10), FoldDegeneracyError);

    const RegressionSample s = generate(wave(), noise_l1(), 256, 2);
    EXPECT_EQ(fit_collection(s, make_collection("wavelet", 256), FoldScheme::interleaved(256, 2)).route, Route::Ordered);
    EXPECT_EQ(fit_collection(s, make_collection("haar", 256), FoldScheme::interleaved(256, 2)).route, Route::Gram);
    const RegressionSample odd = generate(wave(), noise_l1(), 200, 2);
    const FittedCollection fc = fit_collection(odd, make_collection("wavelet", std::vector<std::size_t>{2, 4, 8}),
                                               FoldScheme::interleaved(200, 3));
    EXPECT_EQ(fc.route, Route::Gram);
    for (const auto& m : fc.models) EXPECT_TRUE(m.ok);
}

TEST(FitCollection, CollectionSpecs) {
    EXPECT_EQ(make_collection("wavelet", 64).dims, (std::vector<std::size_t>{2, 4, 8, 16, 32}));
    EXPECT_EQ(make_collection("db8", 64).name, "wavelet:db8");
    EXPECT_THROW(make_collection("spline", 64), std::invalid_argument);
    EXPECT_THROW(make_collection("haar", std::vector<std::size_t>{2, 6}), std::invalid_argument);
    EXPECT_EQ(loss_measure_from_string("grid"), LossMeasure::Grid);
    EXPECT_THROW(loss_measure_from_string("l1"), std::invalid_argument);
}

TEST(Interpolation, LinearWithConstantEnds) {
    const std::vector<double> xs{0.2, 0.4}, fs{1.0, 3.0}, q{0.0, 0.3, 0.4, 0.9};
    const auto v = interpolate_linear(xs, fs, q);
    const double want[] = {1.0, 2.0, 3.0, 3.0};
    ASSERT_EQ(v.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(v[i], want[i], 1e-14);
}

TEST(OracleDimension, WaveLowNoiseStaysBelowHalf) {
    int below = 0;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const RegressionSample s = generate(wave(), noise_l1(), 1024, mix_seed(5, r));
        const TestSignal w = wave();
        const FittedCollection fc = fit_collection(s, make_collection("wavelet", 1024), FoldScheme::interleaved(1024, 2), &w);
        below += oracle_select(fc).chosen_dimension < 512;
    }
    EXPECT_GE(below, 15);
}
