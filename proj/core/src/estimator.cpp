#include "wavesel/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wavesel/quadrature.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/transform.hpp"

namespace wavesel {

std::string to_string(FitMethod method) {
    return method == FitMethod::PyramidFast ? "pyramid_fast" : "gram_exact";
}

bool is_equispaced_midpoints(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - (static_cast<double>(i) + 0.5) / n) > 1e-12) return false;
    return !x.empty();
}

namespace {

bool pyramid_applies(const RegressionSample& sample, const Model& model) {
    const auto& fam = model.family();
    // uniform Haar is the same basis whichever builder made it
    const bool haar = fam.kind == FamilyKind::PeriodizedWavelet ? fam.filter_id == "haar" || fam.filter_id == "db1"
                                                                : fam.kind == FamilyKind::HaarWeighted && fam.uniform_density;
    if (!haar) return false;
    return is_power_of_two(sample.size()) && model.dimension() <= sample.size() && is_equispaced_midpoints(sample.x);
}

double mean_sq_residual(std::span<const double> y, std::span<const double> f) {
    double r = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) r += (y[i] - f[i]) * (y[i] - f[i]);
    return r / static_cast<double>(y.size());
}

}  // namespace

FitResult fit_gram(std::span<const double> x, std::span<const double> y, const Model& model) {
    const std::size_t n = x.size();
    const std::size_t D = model.dimension();
    if (y.size() != n) throw std::invalid_argument("fit_gram: x and y differ in length");
    if (n < D) throw SingularDesignError("fit_gram: fewer observations than dimensions");

    // Atoms are localized, so accumulate only the nonzero block per point.
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D));
    std::vector<double> v(D);
    std::vector<std::size_t> nz;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.eval_all(x[i], v);
        nz.clear();
        for (std::size_t k = 0; k < D; ++k)
            if (v[k] != 0.0) nz.push_back(k);
        for (std::size_t a : nz) {
            rhs(static_cast<Eigen::Index>(a)) += v[a] * y[i];
            rows[i].emplace_back(a, v[a]);
            for (std::size_t b : nz)
                if (b <= a) G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += v[a] * v[b];
        }
    }
    G = G.selfadjointView<Eigen::Lower>();
    G /= static_cast<double>(n);
    rhs /= static_cast<double>(n);

    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw SingularDesignError("fit_gram: empirical Gram matrix is singular");
    const double rc = llt.rcond();
    if (!(rc * kMaxCondition >= 1.0))
        throw SingularDesignError("fit_gram: empirical Gram matrix is ill-conditioned (rcond " + std::to_string(rc) + ")");
    Eigen::VectorXd beta = llt.solve(rhs);

    FitResult fit;
    fit.dimension = D;
    fit.method = FitMethod::GramExact;
    fit.beta.assign(beta.data(), beta.data() + D);
    fit.fitted.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& [k, val] : rows[i]) s += beta(static_cast<Eigen::Index>(k)) * val;
        fit.fitted[i] = s;
    }
    fit.empirical_risk = mean_sq_residual(y, fit.fitted);
    return fit;
}

FitResult fit_ls(const RegressionSample& sample, const Model& model) {
    if (sample.size() < model.dimension())
        throw SingularDesignError("fit_ls: fewer observations than dimensions");
    if (pyramid_applies(sample, model)) {
        OrderedPyramid pyr(sample.y, haar_filter());
        FitResult fit;
        fit.dimension = model.dimension();
        fit.method = FitMethod::PyramidFast;
        fit.beta = pyr.beta(model.dimension());
        fit.fitted = pyr.fitted(model.dimension());
        fit.empirical_risk = mean_sq_residual(sample.y, fit.fitted);
        return fit;
    }
    return fit_gram(sample.x, sample.y, model);
}

TruthProjection project_truth(const TestSignal& signal, const Model& model) {
    const auto& grid = quadrature_grid();
    const std::size_t M = grid.size();
    const std::size_t D = model.dimension();
    TruthProjection t;
    t.dimension = D;
    t.phi_grid = atom_grid_matrix(model);
    t.s_grid.resize(M);
    for (std::size_t i = 0; i < M; ++i) t.s_grid[i] = eval_signal(signal, grid[i]);
    t.beta.assign(D, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        const double w = t.s_grid[i] * model.density(grid[i]);
        const double* row = t.phi_grid.data() + i * D;
        for (std::size_t k = 0; k < D; ++k) t.beta[k] += w * row[k];
    }
    for (double& b : t.beta) b /= static_cast<double>(M);
    t.sm_grid.resize(M);
    double bias = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double* row = t.phi_grid.data() + i * D;
        double s = 0.0;
        for (std::size_t k = 0; k < D; ++k) s += t.beta[k] * row[k];
        t.sm_grid[i] = s;
        bias += (t.s_grid[i] - s) * (t.s_grid[i] - s) * model.density(grid[i]);
    }
    t.bias = bias / static_cast<double>(M);
    return t;
}

std::vector<double> project_truth_pyramid(const TestSignal& signal, const Model& model, const OrthoFilter& filter) {
    const auto& grid = quadrature_grid();
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) s[i] = eval_signal(signal, grid[i]);
    OrderedPyramid pyr(s, filter);
    return pyr.beta(model.dimension());
}

RiskReport excess_risks(const RegressionSample& sample, const Model& model, const TruthProjection& truth,
                        const FitResult& fit) {
    const std::size_t D = model.dimension();
    const std::size_t M = truth.s_grid.size();
    const auto& grid = quadrature_grid();
    RiskReport r;
    r.bias = truth.bias;
    for (std::size_t k = 0; k < D; ++k) r.excess += (fit.beta[k] - truth.beta[k]) * (fit.beta[k] - truth.beta[k]);
    double total = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double* row = truth.phi_grid.data() + i * D;
        double s = 0.0;
        for (std::size_t k = 0; k < D; ++k) s += fit.beta[k] * row[k];
        total += (s - truth.s_grid[i]) * (s - truth.s_grid[i]) * model.density(grid[i]);
        sup = std::max(sup, std::abs(s - truth.sm_grid[i]));
    }
    r.total = total / static_cast<double>(M);
    r.sup_dev = sup;
    double gamma_sm = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double e = sample.y[i] - model.eval_combination(truth.beta, sample.x[i]);
        gamma_sm += e * e;
    }
    r.empirical_excess = gamma_sm / static_cast<double>(sample.size()) - fit.empirical_risk;
    r.epsilon_n = epsilon_n(sample.size(), D);
    return r;
}

RiskReport excess_risks(const RegressionSample& sample, const Model& model, const TestSignal& signal) {
    const FitResult fit = fit_ls(sample, model);
    return excess_risks(sample, model, project_truth(signal, model), fit);
}

CmEstimate compute_Cm(const TestSignal& signal, const NoiseScenario& noise, const Model& model,
                      const TruthProjection& truth, std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 10000) throw std::invalid_argument("compute_Cm: n_mc must be >= 10^4");
    constexpr std::size_t kBatches = 20;
    const std::size_t D = model.dimension();
    Rng rng(seed);
    std::vector<double> v(D);
    std::vector<double> s1(D, 0.0), s2(D, 0.0), b1(D), b2(D);
    std::vector<double> batch_values;
    const std::size_t per_batch = n_mc / kBatches;
    std::size_t used = 0;
    for (std::size_t b = 0; b < kBatches; ++b) {
        std::fill(b1.begin(), b1.end(), 0.0);
        std::fill(b2.begin(), b2.end(), 0.0);
        const std::size_t cnt = (b + 1 == kBatches) ? n_mc - used : per_batch;
        for (std::size_t i = 0; i < cnt; ++i) {
            const double x = rng.uniform();
            const double y = eval_signal(signal, x) + noise.sigma(x) * rng.normal();
            model.eval_all(x, v);
            double sm = 0.0;
            for (std::size_t k = 0; k < D; ++k) sm += truth.beta[k] * v[k];
            const double res = y - sm;
            for (std::size_t k = 0; k < D; ++k) {
                const double z = res * v[k];
                b1[k] += z;
                b2[k] += z * z;
            }
        }
        used += cnt;
        double cb = 0.0;
        const double c = static_cast<double>(cnt);
        for (std::size_t k = 0; k < D; ++k) {
            cb += (b2[k] - b1[k] * b1[k] / c) / (c - 1.0);
            s1[k] += b1[k];
            s2[k] += b2[k];
        }
        batch_values.push_back(cb);
    }
    CmEstimate est;
    est.n_mc = n_mc;
    const double N = static_cast<double>(n_mc);
    for (std::size_t k = 0; k < D; ++k) est.value += (s2[k] - s1[k] * s1[k] / N) / (N - 1.0);
    double mean = 0.0;
    for (double c : batch_values) mean += c;
    mean /= kBatches;
    double var = 0.0;
    for (double c : batch_values) var += (c - mean) * (c - mean);
    var /= (kBatches - 1);
    est.std_error = std::sqrt(var / kBatches);
    return est;
}

CmEstimate compute_Cm(const TestSignal& signal, const NoiseScenario& noise, const Model& model, std::size_t n_mc,
                      std::uint64_t seed) {
    return compute_Cm(signal, noise, model, project_truth(signal, model), n_mc, seed);
}

double epsilon_n(std::size_t n, std::size_t dimension, double L0) {
    const double ln = std::log(static_cast<double>(n));
    const double D = static_cast<double>(dimension);
    return L0 * std::max(std::pow(ln / D, 0.25), std::pow(D * ln / static_cast<double>(n), 0.25));
}

}  // namespace wavesel
