#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesel/basis.hpp"
#include "wavesel/signals.hpp"

namespace wavesel {

enum class FitMethod { GramExact, PyramidFast };
std::string to_string(FitMethod method);

/// Least-squares estimator on one model.
struct FitResult {
    std::size_t dimension = 0;
    std::vector<double> beta;
    std::vector<double> fitted;  // values at the design points
    double empirical_risk = 0.0;
    FitMethod method = FitMethod::GramExact;
};

/// Empirical Gram matrix singular or too ill-conditioned (reciprocal
/// condition estimate below 1e-12); the model is unusable for the sample.
class SingularDesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kMaxCondition = 1e12;

/// Minimizes the empirical squared loss over the model. Two-tap periodized
/// models on an equispaced midpoint design with n a power of two go through
/// the pyramid; everything else solves the normal equations.
FitResult fit_ls(const RegressionSample& sample, const Model& model);
FitResult fit_gram(std::span<const double> x, std::span<const double> y, const Model& model);

/// True if x_i = (i + 1/2)/n up to 1e-12.
bool is_equispaced_midpoints(std::span<const double> x);

/// Projection s_m of the truth onto a model under its reference measure,
/// with the quantities reused across replications.
struct TruthProjection {
    std::vector<double> beta;     // coefficients of s_m
    std::vector<double> phi_grid; // atom values on the 2^14 grid, row-major (point, atom)
    std::vector<double> s_grid;   // s* on the grid
    std::vector<double> sm_grid;  // s_m on the grid
    double bias = 0.0;            // l(s*, s_m)
    std::size_t dimension = 0;
};

TruthProjection project_truth(const TestSignal& signal, const Model& model);

/// Same projection through the pyramid: s* sampled on the 2^14 midpoint
/// grid, analyzed, truncated to the model and rescaled by 2^-7.
std::vector<double> project_truth_pyramid(const TestSignal& signal, const Model& model, const OrthoFilter& filter);

struct RiskReport {
    double bias = 0.0;              // l(s*, s_m)
    double excess = 0.0;            // l(s_m, s^_m) by Parseval
    double total = 0.0;             // l(s*, s^_m) on the grid
    double empirical_excess = 0.0;  // P_n(gamma(s_m) - gamma(s^_m))
    double C_m = std::numeric_limits<double>::quiet_NaN();
    double epsilon_n = 0.0;
    double sup_dev = 0.0;           // sup |s^_m - s_m| on the grid
};

RiskReport excess_risks(const RegressionSample& sample, const Model& model, const TruthProjection& truth,
                        const FitResult& fit);
RiskReport excess_risks(const RegressionSample& sample, const Model& model, const TestSignal& signal);

struct CmEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_mc = 0;
};

/// C_m = sum_k Var((Y - s_m(X)) phi_k(X)) under uniform design, by Monte
/// Carlo with a 20-batch standard error. Requires n_mc >= 10^4.
CmEstimate compute_Cm(const TestSignal& signal, const NoiseScenario& noise, const Model& model,
                      std::size_t n_mc = 100000, std::uint64_t seed = 0);
CmEstimate compute_Cm(const TestSignal& signal, const NoiseScenario& noise, const Model& model,
                      const TruthProjection& truth, std::size_t n_mc, std::uint64_t seed);

/// eps_n = L0 max{(ln n / D)^{1/4}, (D ln n / n)^{1/4}}.
double epsilon_n(std::size_t n, std::size_t dimension, double L0 = 1.0);

}  // namespace wavesel
