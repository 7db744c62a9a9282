#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesel/basis.hpp"
#include "wavesel/signals.hpp"

namespace wavesel {

struct ConcentrationReport {
    std::string model;
    std::size_t dimension = 0;
    std::size_t n = 0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    double C_m = 0.0;
    double C_m_std_error = 0.0;
    double epsilon = 0.0;
    /// n l(s_m, s^_m) / C_m and n l_emp(s^_m, s_m) / C_m, one per usable replication.
    std::vector<double> ratio_true;
    std::vector<double> ratio_emp;
    double mean_true = 0.0, std_true = 0.0;
    double mean_emp = 0.0, std_emp = 0.0;
    double coverage_true = 0.0;       // fraction of ratio_true in (1 - eps, 1 + eps)
    double coverage_emp = 0.0;        // fraction of ratio_emp in (1 - eps, 1 + eps)
    double coverage_true_eps2 = 0.0;  // same with eps^2
    double coverage_emp_eps2 = 0.0;
    std::size_t degenerate = 0;       // singular fits, excluded
    std::vector<std::string> warnings;
};

/// N replications of fit + excess-risk accounting on fresh samples.
/// Replication r uses seed mix(seed, r); C_m uses mix(seed, N).
ConcentrationReport run_concentration(const TestSignal& signal, const NoiseScenario& noise, const Model& model,
                                      std::size_t n, std::size_t N, std::uint64_t seed, std::size_t jobs = 1,
                                      std::size_t n_mc = 100000);

class SolverDisagreementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RepOracleOptions {
    std::size_t grid_points = 1000;
    std::size_t directions = 10000;
    std::uint64_t seed = 0;
    /// Largest tolerated gap between the Lagrangian and random-direction
    /// solvers (absolute below 1, relative above).
    double solver_tolerance = 1e-3;
};

/// Brute-force check of the representation of the excess risks as the
/// argmax / max of C -> Gamma_n(C) on a tiny model.
struct RepOracleResult {
    std::size_t dimension = 0;
    std::size_t n = 0;
    std::vector<double> C_grid;
    std::vector<double> gamma;         // Lagrangian solver, sphere
    std::vector<double> gamma_random;  // random directions, sphere
    std::vector<double> gamma_ball;    // ball version
    double excess = 0.0;               // l(s_m, s^_m)
    double empirical_excess = 0.0;     // l_emp(s^_m, s_m)
    double max_gamma = 0.0;            // grid max of gamma
    double argmax_C = 0.0;
    std::size_t argmax_index = 0;
    double max_ball = 0.0;
    double argmax_ball_C = 0.0;
    double solver_gap = 0.0;
    double sup_dev = 0.0;
    /// Random-direction solver restricted to ||s - s_m||_inf <= R0.
    double R0 = 0.0;
    double max_truncated = 0.0;
    double argmax_truncated_C = 0.0;
    bool max_matches = false;      // |max_gamma - empirical_excess| <= 1e-4
    bool argmax_contains = false;  // excess within one grid step of the argmax
};

/// Requires D <= 3 and n <= 64. Throws SolverDisagreementError when the two
/// solvers differ by more than the tolerance.
RepOracleResult rep_formula_oracle(const RegressionSample& sample, const Model& model, const TestSignal& signal,
                                   const RepOracleOptions& options = {});

/// Closed form for D = 1: Gamma(C) = 2 sqrt(C) |b| - a C, maximized at
/// C* = b^2 / a^2 with value b^2 / a.
struct ScalarRep {
    double a = 0.0, b = 0.0;
    double C_star = 0.0, max_value = 0.0;
    double gamma(double C) const;
};
ScalarRep scalar_representation(const RegressionSample& sample, const Model& model, const TestSignal& signal);

enum class Functional { SupNorm, Zero };

struct FunctionalRepResult {
    double F_hat = 0.0;        // F(s^_m)
    double argmin_C = 0.0;
    double min_value = 0.0;    // min over the grid of inf_{F(s)=C} P_n gamma(s)
    double risk_hat = 0.0;     // P_n gamma(s^_m)
    std::vector<double> C_grid;
    std::vector<double> level_inf;
    bool pass = false;
};

/// Checks F(s^_m) in argmin_C inf_{F(s) = C} P_n gamma(s) for F(s) =
/// ||s - s_m||_inf by scanning C and minimizing over each level set.
FunctionalRepResult functional_rep_check(const RegressionSample& sample, const Model& model,
                                         const TestSignal& signal, Functional functional = Functional::SupNorm,
                                         std::size_t grid_points = 400, std::size_t directions = 4096,
                                         std::uint64_t seed = 0);

}  // namespace wavesel
