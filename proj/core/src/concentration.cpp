#include "wavesel/concentration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wavesel/estimator.hpp"
#include "wavesel/parallel.hpp"
#include "wavesel/quadrature.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return;
    for (double x : v) sd += (x - mean) * (x - mean);
    sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

double coverage(const std::vector<double>& v, double eps) {
    if (v.empty()) return 0.0;
    std::size_t c = 0;
    for (double x : v)
        if (x > 1.0 - eps && x < 1.0 + eps) ++c;
    return static_cast<double>(c) / static_cast<double>(v.size());
}

}  // namespace

ConcentrationReport run_concentration(const TestSignal& signal, const NoiseScenario& noise, const Model& model,
                                      std::size_t n, std::size_t N, std::uint64_t seed, std::size_t jobs,
                                      std::size_t n_mc) {
    if (N < 1) throw std::invalid_argument("run_concentration: N must be >= 1");
    ConcentrationReport rep;
    rep.model = model.family().describe();
    rep.dimension = model.dimension();
    rep.n = n;
    rep.replications = N;
    rep.seed = seed;
    rep.epsilon = epsilon_n(n, model.dimension());

    const double ln = std::log(static_cast<double>(n));
    const double D = static_cast<double>(model.dimension());
    if (D < ln * ln || D > static_cast<double>(n) / (ln * ln)) {
        std::ostringstream os;
        os << "dimension " << model.dimension() << " outside [(ln n)^2, n/(ln n)^2] = [" << ln * ln << ", "
           << static_cast<double>(n) / (ln * ln) << "]";
        rep.warnings.push_back(os.str());
    }
    if (N < 100) rep.warnings.push_back("fewer than 100 replications");

    const TruthProjection truth = project_truth(signal, model);
    const CmEstimate cm = compute_Cm(signal, noise, model, truth, n_mc, mix_seed(seed, N));
    rep.C_m = cm.value;
    rep.C_m_std_error = cm.std_error;

    std::vector<double> rt(N), re(N);
    std::vector<char> ok(N, 0);
    parallel_for(N, jobs, [&](std::size_t r) {
        const RegressionSample s = generate(signal, noise, n, mix_seed(seed, r));
        try {
            const FitResult fit = fit_ls(s, model);
            const RiskReport risk = excess_risks(s, model, truth, fit);
            rt[r] = static_cast<double>(n) * risk.excess / cm.value;
            re[r] = static_cast<double>(n) * risk.empirical_excess / cm.value;
            ok[r] = std::isfinite(rt[r]) && std::isfinite(re[r]) ? 1 : 0;
        } catch (const SingularDesignError&) {
            ok[r] = 0;
        }
    });
    for (std::size_t r = 0; r < N; ++r) {
        if (ok[r]) {
            rep.ratio_true.push_back(rt[r]);
            rep.ratio_emp.push_back(re[r]);
        } else {
            ++rep.degenerate;
        }
    }
    mean_std(rep.ratio_true, rep.mean_true, rep.std_true);
    mean_std(rep.ratio_emp, rep.mean_emp, rep.std_emp);
    const double e = rep.epsilon;
    rep.coverage_true = coverage(rep.ratio_true, e);
    rep.coverage_emp = coverage(rep.ratio_emp, e);
    rep.coverage_true_eps2 = coverage(rep.ratio_true, e * e);
    rep.coverage_emp_eps2 = coverage(rep.ratio_emp, e * e);
    return rep;
}

// ------------------------------------------------ representation oracle ----

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Quadratic picture of a tiny model: s = s_m + sum_k t_k phi_k,
/// P_n(gamma(s_m) - gamma(s)) = 2 t.g - t'Gt, l(s_m, s) = t'Ht.
struct Tiny {
    std::size_t D = 0, n = 0;
    MatrixXd G, H, Hm12, A;
    VectorXd g, b, beta, t_hat;
    double excess = 0.0, emp_excess = 0.0, sup_dev = 0.0;
    double risk_sm = 0.0;  // P_n gamma(s_m)
    Eigen::SelfAdjointEigenSolver<MatrixXd> eigA;
};

Tiny setup(const RegressionSample& sample, const Model& model, const TestSignal& signal) {
    const std::size_t D = model.dimension();
    const std::size_t n = sample.size();
    if (D > 3) throw std::invalid_argument("representation checks need D <= 3");
    if (n > 64) throw std::invalid_argument("representation checks need n <= 64");
    Tiny t;
    t.D = D;
    t.n = n;
    const auto& grid = quadrature_grid();
    const std::size_t M = grid.size();
    const std::vector<double> pg = atom_grid_matrix(model);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Phi(pg.data(), M, D);
    VectorXd s(M), w(M);
    for (std::size_t i = 0; i < M; ++i) {
        s(i) = eval_signal(signal, grid[i]);
        w(i) = model.density(grid[i]) / static_cast<double>(M);
    }
    t.H = Phi.transpose() * w.asDiagonal() * Phi;
    const VectorXd c = Phi.transpose() * w.asDiagonal() * s;
    // Exact projection in the quadrature measure, so P(phi (Y - s_m)) = 0.
    t.beta = t.H.ldlt().solve(c);

    MatrixXd X(n, D);
    std::vector<double> v(D);
    for (std::size_t i = 0; i < n; ++i) {
        model.eval_all(sample.x[i], v);
        for (std::size_t k = 0; k < D; ++k) X(i, k) = v[k];
    }
    const VectorXd y = Eigen::Map<const VectorXd>(sample.y.data(), n);
    const VectorXd res = y - X * t.beta;
    t.G = X.transpose() * X / static_cast<double>(n);
    t.g = X.transpose() * res / static_cast<double>(n);
    Eigen::LLT<MatrixXd> llt(t.G);
    if (llt.info() != Eigen::Success || llt.rcond() * kMaxCondition < 1.0)
        throw SingularDesignError("representation check: empirical Gram matrix is singular");
    t.t_hat = llt.solve(t.g);
    t.excess = t.t_hat.dot(t.H * t.t_hat);
    const VectorXd res_hat = res - X * t.t_hat;
    t.risk_sm = res.squaredNorm() / static_cast<double>(n);
    t.emp_excess = t.risk_sm - res_hat.squaredNorm() / static_cast<double>(n);
    const VectorXd dev = Phi * t.t_hat;
    t.sup_dev = dev.cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<MatrixXd> eh(t.H);
    t.Hm12 = eh.eigenvectors() * eh.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
             eh.eigenvectors().transpose();
    t.A = t.Hm12 * t.G * t.Hm12;
    t.b = t.Hm12 * t.g;
    t.eigA.compute(t.A);
    return t;
}

/// sup over ||w||^2 = C of 2 w.b - w'Aw via the secular equation.
double lagrangian_gamma(const Tiny& t, double C) {
    const VectorXd lam = t.eigA.eigenvalues();
    const VectorXd bp = t.eigA.eigenvectors().transpose() * t.b;
    const std::size_t D = t.D;
    auto value = [&](const VectorXd& wp) { return 2.0 * wp.dot(bp) - wp.dot(lam.cwiseProduct(wp)); };
    const double l1 = lam(0);
    const double bn = bp.norm();
    // Hard case: no weight on the bottom eigenspace and C beyond what mu -> -l1 reaches.
    const double scale = std::max(1.0, std::abs(l1));
    bool hard = true;
    for (std::size_t i = 0; i < D; ++i)
        if (lam(i) - l1 <= 1e-12 * scale && std::abs(bp(i)) > 1e-14 * std::max(1.0, bn)) hard = false;
    if (hard) {
        VectorXd wp = VectorXd::Zero(D);
        double used = 0.0;
        for (std::size_t i = 0; i < D; ++i)
            if (lam(i) - l1 > 1e-12 * scale) {
                wp(i) = bp(i) / (lam(i) - l1);
                used += wp(i) * wp(i);
            }
        if (used <= C) {
            wp(0) = std::sqrt(C - used);
            return value(wp);
        }
    }
    auto norm2 = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < D; ++i) s += bp(i) * bp(i) / ((lam(i) + mu) * (lam(i) + mu));
        return s;
    };
    double lo = -l1, hi = -l1 + bn / std::sqrt(C) + 1.0;
    while (norm2(hi) > C) hi = -l1 + 2.0 * (hi + l1);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (norm2(mid) > C) lo = mid; else hi = mid;
    }
    VectorXd wp(D);
    for (std::size_t i = 0; i < D; ++i) wp(i) = bp(i) / (lam(i) + hi);
    // Project back onto the sphere to remove the bisection residue.
    const double nn = wp.norm();
    if (nn > 0.0) wp *= std::sqrt(C) / nn;
    return value(wp);
}

std::vector<VectorXd> make_directions(std::size_t D, std::size_t count, std::uint64_t seed) {
    std::vector<VectorXd> dirs;
    if (D == 1) {
        dirs.push_back(VectorXd::Constant(1, 1.0));
        dirs.push_back(VectorXd::Constant(1, -1.0));
        return dirs;
    }
    if (D == 2) {
        for (std::size_t i = 0; i < count; ++i) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
            VectorXd u(2);
            u << std::cos(th), std::sin(th);
            dirs.push_back(u);
        }
        return dirs;
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        VectorXd u(D);
        for (std::size_t k = 0; k < D; ++k) u(k) = rng.normal();
        dirs.push_back(u / u.norm());
    }
    return dirs;
}

/// Local hill climb on the unit sphere from u, maximizing f.
template <class F>
VectorXd refine_direction(VectorXd u, F&& f, int iterations = 48) {
    const Eigen::Index D = u.size();
    if (D == 1) return u;
    double best = f(u);
    double step = 0.05;
    for (int it = 0; it < iterations; ++it) {
        bool improved = false;
        for (Eigen::Index k = 0; k < D; ++k)
            for (double sgn : {1.0, -1.0}) {
                VectorXd c = u;
                c(k) += sgn * step;
                c /= c.norm();
                const double v = f(c);
                if (v > best) {
                    best = v;
                    u = c;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }
    return u;
}

/// Sup-norm of sum_k c_k phi_k on a 1024-point midpoint grid.
struct CoarseNorm {
    std::vector<double> rows;
    std::size_t D = 0;
    CoarseNorm(const Model& model, std::size_t points) : D(model.dimension()) {
        rows.resize(points * D);
        for (std::size_t i = 0; i < points; ++i)
            model.eval_all((static_cast<double>(i) + 0.5) / static_cast<double>(points),
                           std::span<double>(rows.data() + i * D, D));
    }
    double operator()(const VectorXd& c) const {
        double m = 0.0;
        const std::size_t P = rows.size() / D;
        for (std::size_t i = 0; i < P; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < D; ++k) s += c(static_cast<Eigen::Index>(k)) * rows[i * D + k];
            m = std::max(m, std::abs(s));
        }
        return m;
    }
};

bool within_one_step(const std::vector<double>& grid, std::size_t idx, double value) {
    const double lo = idx == 0 ? 0.0 : grid[idx - 1];
    const double hi = idx + 1 < grid.size() ? grid[idx + 1] : grid.back();
    return value >= lo && value <= hi;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    const double r = std::log(hi / lo);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo * std::exp(r * static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

}  // namespace

double ScalarRep::gamma(double C) const { return 2.0 * std::sqrt(C) * std::abs(b) - a * C; }

ScalarRep scalar_representation(const RegressionSample& sample, const Model& model, const TestSignal& signal) {
    if (model.dimension() != 1) throw std::invalid_argument("scalar_representation: D must be 1");
    const Tiny t = setup(sample, model, signal);
    ScalarRep r;
    r.a = t.A(0, 0);
    r.b = t.b(0);
    r.C_star = r.b * r.b / (r.a * r.a);
    r.max_value = r.b * r.b / r.a;
    return r;
}

RepOracleResult rep_formula_oracle(const RegressionSample& sample, const Model& model, const TestSignal& signal,
                                   const RepOracleOptions& opt) {
    const Tiny t = setup(sample, model, signal);
    RepOracleResult out;
    out.dimension = t.D;
    out.n = t.n;
    out.excess = t.excess;
    out.empirical_excess = t.emp_excess;
    out.sup_dev = t.sup_dev;

    const double lam_min = t.eigA.eigenvalues()(0);
    const double upper = std::max(10.0 * std::max(t.emp_excess, 0.0) / std::min(1.0, lam_min), 1e-6);
    out.C_grid = geometric_grid(1e-8, upper, std::max<std::size_t>(opt.grid_points, 2));
    const std::size_t K = out.C_grid.size();

    out.gamma.resize(K);
    for (std::size_t k = 0; k < K; ++k) out.gamma[k] = lagrangian_gamma(t, out.C_grid[k]);

    // Independent solver: random directions plus local polishing.
    const auto dirs = make_directions(t.D, opt.directions, opt.seed);
    std::vector<double> ub(dirs.size()), uau(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        ub[d] = dirs[d].dot(t.b);
        uau[d] = dirs[d].dot(t.A * dirs[d]);
    }
    const CoarseNorm norm(model, 1024);
    std::vector<double> dir_norm(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) dir_norm[d] = norm(t.Hm12 * dirs[d]);
    out.R0 = 2.0 * t.sup_dev;

    out.gamma_random.resize(K);
    std::vector<double> gamma_trunc(K, -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < K; ++k) {
        const double C = out.C_grid[k];
        const double sc = std::sqrt(C);
        std::size_t best = 0, best_t = dirs.size();
        double bv = -std::numeric_limits<double>::infinity(), bt = bv;
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const double v = 2.0 * sc * ub[d] - C * uau[d];
            if (v > bv) {
                bv = v;
                best = d;
            }
            if (sc * dir_norm[d] <= out.R0 && v > bt) {
                bt = v;
                best_t = d;
            }
        }
        auto f = [&](const VectorXd& u) { return 2.0 * sc * u.dot(t.b) - C * u.dot(t.A * u); };
        const VectorXd u = refine_direction(dirs[best], f);
        out.gamma_random[k] = std::max(bv, f(u));
        if (sc * norm(t.Hm12 * u) <= out.R0) {
            gamma_trunc[k] = out.gamma_random[k];
        } else if (best_t < dirs.size()) {
            auto ft = [&](const VectorXd& c) {
                return sc * norm(t.Hm12 * c) <= out.R0 ? f(c) : -std::numeric_limits<double>::infinity();
            };
            gamma_trunc[k] = std::max(bt, ft(refine_direction(dirs[best_t], ft, 24)));
        }
    }

    for (std::size_t k = 0; k < K; ++k) {
        const double a = out.gamma[k], b = out.gamma_random[k];
        out.solver_gap = std::max(out.solver_gap, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    if (out.solver_gap > opt.solver_tolerance) {
        std::ostringstream os;
        os << "Lagrangian and random-direction solvers differ by " << out.solver_gap;
        throw SolverDisagreementError(os.str());
    }

    out.argmax_index = static_cast<std::size_t>(std::max_element(out.gamma.begin(), out.gamma.end()) - out.gamma.begin());
    out.max_gamma = out.gamma[out.argmax_index];
    out.argmax_C = out.C_grid[out.argmax_index];

    // Ball: sup over l(s_m, s) <= C of the same process, minus C.
    out.gamma_ball.resize(K);
    double run = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
        run = std::max(run, out.gamma[k] + out.C_grid[k]);
        out.gamma_ball[k] = run - out.C_grid[k];
    }
    const std::size_t ab =
        static_cast<std::size_t>(std::max_element(out.gamma_ball.begin(), out.gamma_ball.end()) - out.gamma_ball.begin());
    out.max_ball = out.gamma_ball[ab];
    out.argmax_ball_C = out.C_grid[ab];

    const std::size_t at =
        static_cast<std::size_t>(std::max_element(gamma_trunc.begin(), gamma_trunc.end()) - gamma_trunc.begin());
    out.max_truncated = gamma_trunc[at];
    out.argmax_truncated_C = out.C_grid[at];

    out.max_matches = std::abs(out.max_gamma - out.empirical_excess) <= 1e-4;
    out.argmax_contains = within_one_step(out.C_grid, out.argmax_index, out.excess);
    return out;
}

FunctionalRepResult functional_rep_check(const RegressionSample& sample, const Model& model,
                                         const TestSignal& signal, Functional functional, std::size_t grid_points,
                                         std::size_t directions, std::uint64_t seed) {
    const Tiny t = setup(sample, model, signal);
    FunctionalRepResult out;
    out.risk_hat = t.risk_sm - t.emp_excess;
    if (functional == Functional::Zero) {
        // One level set holding every s; the identity is vacuous.
        out.C_grid = {0.0};
        out.level_inf = {out.risk_hat};
        out.min_value = out.risk_hat;
        out.pass = true;
        return out;
    }
    const CoarseNorm norm(model, 4096);
    out.F_hat = norm(t.t_hat);
    if (out.F_hat == 0.0) {
        out.C_grid = {0.0};
        out.level_inf = {t.risk_sm};
        out.min_value = t.risk_sm;
        out.pass = true;
        return out;
    }
    out.C_grid = geometric_grid(out.F_hat * 1e-3, out.F_hat * 10.0, std::max<std::size_t>(grid_points, 2));
    const std::size_t K = out.C_grid.size();
    const auto dirs = make_directions(t.D, directions, seed);
    std::vector<double> a(dirs.size()), c(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const double N = norm(dirs[d]);
        a[d] = dirs[d].dot(t.g) / N;
        c[d] = dirs[d].dot(t.G * dirs[d]) / (N * N);
    }
    // P_n gamma(s_m + tau u/N(u)) = P_n gamma(s_m) - 2 tau a_u + tau^2 c_u.
    out.level_inf.assign(K, 0.0);
    std::vector<std::size_t> best_dir(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double C = out.C_grid[k];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const double v = -2.0 * C * a[d] + C * C * c[d];
            if (v < best) {
                best = v;
                best_dir[k] = d;
            }
        }
        out.level_inf[k] = t.risk_sm + best;
    }
    // Polish the level-set minima around the coarse argmin.
    const std::size_t coarse =
        static_cast<std::size_t>(std::min_element(out.level_inf.begin(), out.level_inf.end()) - out.level_inf.begin());
    const std::size_t lo = coarse >= 10 ? coarse - 10 : 0;
    const std::size_t hi = std::min(K, coarse + 11);
    for (std::size_t k = lo; k < hi; ++k) {
        const double C = out.C_grid[k];
        auto f = [&](const VectorXd& u) {
            const double N = norm(u);
            const VectorXd s = C * u / N;
            return 2.0 * s.dot(t.g) - s.dot(t.G * s);
        };
        const VectorXd u = refine_direction(dirs[best_dir[k]], f, 32);
        out.level_inf[k] = std::min(out.level_inf[k], t.risk_sm - f(u));
    }
    const std::size_t am =
        static_cast<std::size_t>(std::min_element(out.level_inf.begin(), out.level_inf.end()) - out.level_inf.begin());
    out.argmin_C = out.C_grid[am];
    out.min_value = out.level_inf[am];
    out.pass = within_one_step(out.C_grid, am, out.F_hat) && std::abs(out.min_value - out.risk_hat) <= 1e-4;
    return out;
}

}  // namespace wavesel
