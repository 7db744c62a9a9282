#include "wavesel/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavesel/quadrature.hpp"

namespace wavesel {

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::HaarWeighted: return "haar-weighted";
        case FamilyKind::PeriodizedWavelet: return "periodized-wavelet";
        case FamilyKind::PiecewisePoly: return "piecewise-poly";
    }
    return "unknown";
}

std::string BasisFamily::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == FamilyKind::PeriodizedWavelet) os << '(' << filter_id << ')';
    if (kind == FamilyKind::PiecewisePoly) os << "(cells=" << (partition.empty() ? 0 : partition.size() - 1) << ",r=" << degree << ')';
    if (kind == FamilyKind::HaarWeighted) os << "(c_min=" << c_min << ')';
    return os.str();
}

void detail::BasisEvaluator::eval_all(double x, std::span<double> out) const {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval(k, x);
}

Model::Model(BasisFamily family, std::vector<Atom> atoms, std::shared_ptr<const detail::BasisEvaluator> evaluator,
             std::function<double(double)> density, int level)
    : family_(std::move(family)),
      atoms_(std::move(atoms)),
      evaluator_(std::move(evaluator)),
      density_(std::move(density)),
      level_(level) {}

double Model::eval_combination(std::span<const double> beta, double x) const {
    std::vector<double> v(dimension());
    eval_all(x, v);
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += beta[k] * v[k];
    return s;
}

namespace {

// Flattened multiresolution index: 0 is the constant, then level j occupies
// [2^j, 2^{j+1}).
std::pair<int, int> level_position(std::size_t k) {
    int j = 0;
    while ((std::size_t{2} << j) <= k) ++j;
    return {j, static_cast<int>(k - (std::size_t{1} << j))};
}

double sup_over_support(const detail::BasisEvaluator& ev, std::size_t k, const std::vector<Interval>& support) {
    const auto& grid = quadrature_grid();
    const double M = static_cast<double>(kGridSize);
    double best = 0.0;
    for (const auto& piece : support) {
        const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor(piece.lo * M - 1.0)));
        const auto i1 = std::min(kGridSize, static_cast<std::size_t>(std::ceil(piece.hi * M + 1.0)));
        for (std::size_t i = i0; i < i1; ++i) best = std::max(best, std::abs(ev.eval(k, grid[i])));
        for (double e : {piece.lo, piece.hi, std::nextafter(piece.lo, 1.0), std::nextafter(piece.hi, 0.0)})
            if (e >= 0.0 && e <= 1.0) best = std::max(best, std::abs(ev.eval(k, e)));
    }
    return best;
}

// ---------------------------------------------------------------- Haar ----

struct HaarCell {
    double a, mid, b;
    double left, right;  // values on [a, mid] and (mid, b]
};

class HaarWeightedEvaluator final : public detail::BasisEvaluator {
public:
    HaarWeightedEvaluator(int j_max, std::vector<HaarCell> cells) : j_max_(j_max), cells_(std::move(cells)) {}

    double eval(std::size_t k, double x) const override {
        if (!(x >= 0.0 && x <= 1.0)) return 0.0;
        if (k == 0) return 1.0;
        const HaarCell& c = cells_[k - 1];
        if (x >= c.a && x <= c.mid) return c.left;
        if (x > c.mid && x <= c.b) return c.right;
        return 0.0;
    }

    void eval_all(double x, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        if (!(x >= 0.0 && x <= 1.0)) return;
        out[0] = 1.0;
        for (int j = 0; j <= j_max_; ++j) {
            const std::size_t n = std::size_t{1} << j;
            auto c = static_cast<std::size_t>(x * static_cast<double>(n));
            if (c >= n) c = n - 1;
            const std::size_t base = n;  // flattened offset of level j
            out[base + c] = eval(base + c, x);
            if (c > 0) out[base + c - 1] = eval(base + c - 1, x);
        }
    }

private:
    int j_max_;
    std::vector<HaarCell> cells_;
};

// ------------------------------------------------------------ wavelets ----

class WaveletEvaluator final : public detail::BasisEvaluator {
public:
    WaveletEvaluator(std::shared_ptr<const WaveletTables> tables, int j_max)
        : tables_(std::move(tables)), j_max_(j_max) {}

    double eval(std::size_t k, double x) const override {
        if (!(x >= 0.0 && x <= 1.0)) return 0.0;
        if (k == 0) return 1.0;
        const auto [j, pos] = level_position(k);
        const double N = std::ldexp(1.0, j);
        const double L1 = tables_->support_length();
        const double u = N * x - pos;
        // psi^per(u) = sum_p psi(u + p N) over copies meeting [0, L-1)
        double acc = 0.0;
        for (double p = std::ceil(-u / N); u + p * N < L1; p += 1.0) acc += tables_->psi(u + p * N);
        return std::sqrt(N) * acc;
    }

    void eval_all(double x, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        if (!(x >= 0.0 && x <= 1.0)) return;
        out[0] = 1.0;
        const double L1 = tables_->support_length();
        for (int j = 0; j <= j_max_; ++j) {
            const std::size_t n = std::size_t{1} << j;
            const double N = static_cast<double>(n);
            if (N <= L1) {
                for (std::size_t pos = 0; pos < n; ++pos) out[n + pos] = eval(n + pos, x);
                continue;
            }
            const double u = N * x;
            const double fl = std::floor(u);
            const double frac = u - fl;
            const double scale = std::sqrt(N);
            const auto base = static_cast<long long>(fl);
            for (int t = 0; static_cast<double>(t) + frac < L1; ++t) {
                long long pos = (base - t) % static_cast<long long>(n);
                if (pos < 0) pos += static_cast<long long>(n);
                out[n + static_cast<std::size_t>(pos)] = scale * tables_->psi(frac + t);
            }
        }
    }

private:
    std::shared_ptr<const WaveletTables> tables_;
    int j_max_;
};

// ---------------------------------------------------- piecewise polynomials ----

double legendre(int d, double t) {
    if (d == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int m = 1; m < d; ++m) {
        const double p2 = ((2.0 * m + 1.0) * t * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

class PiecewisePolyEvaluator final : public detail::BasisEvaluator {
public:
    PiecewisePolyEvaluator(std::vector<double> bounds, int degree) : b_(std::move(bounds)), r_(degree) {}

    std::size_t cell_of(double x) const {
        if (!(x >= b_.front() && x <= b_.back())) return npos;
        auto it = std::upper_bound(b_.begin(), b_.end(), x);
        std::size_t c = static_cast<std::size_t>(it - b_.begin());
        c = c == 0 ? 0 : c - 1;
        return std::min(c, b_.size() - 2);
    }

    double value(std::size_t c, int d, double x) const {
        const double len = b_[c + 1] - b_[c];
        const double t = 2.0 * (x - b_[c]) / len - 1.0;
        return std::sqrt((2.0 * d + 1.0) / len) * legendre(d, t);
    }

    double eval(std::size_t k, double x) const override {
        const std::size_t c = k / static_cast<std::size_t>(r_ + 1);
        const int d = static_cast<int>(k % static_cast<std::size_t>(r_ + 1));
        if (cell_of(x) != c) return 0.0;
        return value(c, d, x);
    }

    void eval_all(double x, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        const std::size_t c = cell_of(x);
        if (c == npos) return;
        for (int d = 0; d <= r_; ++d) out[c * static_cast<std::size_t>(r_ + 1) + static_cast<std::size_t>(d)] = value(c, d, x);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<double> b_;
    int r_;
};

std::vector<Interval> wrapped_support(double lo, double length) {
    if (length >= 1.0) return {{0.0, 1.0}};
    const double hi = lo + length;
    if (hi <= 1.0) return {{lo, hi}};
    return {{lo, 1.0}, {0.0, hi - 1.0}};
}

}  // namespace

Model build_haar_weighted(int j_max, const std::function<double(double)>& density, double c_min) {
    if (j_max < 0) throw std::invalid_argument("build_haar_weighted: j_max must be >= 0");
    if (j_max > 24) throw std::invalid_argument("build_haar_weighted: j_max too large");
    if (!(c_min > 0.0)) throw std::invalid_argument("build_haar_weighted: c_min must be > 0");
    for (double x : quadrature_grid())
        if (density(x) < c_min - 1e-12)
            throw std::invalid_argument("build_haar_weighted: density falls below c_min");
    const double mass = adaptive_simpson(density, 0.0, 1.0, 1e-10);
    if (std::abs(mass - 1.0) > 1e-6) throw std::invalid_argument("build_haar_weighted: density does not integrate to 1");

    std::vector<HaarCell> cells;
    std::vector<Atom> atoms;
    atoms.push_back({-1, 0, {{0.0, 1.0}}, 1.0});
    for (int j = 0; j <= j_max; ++j) {
        const int n = 1 << j;
        const double w = 1.0 / n;
        for (int k = 0; k < n; ++k) {
            const double a = k * w, b = (k + 1) * w, mid = a + 0.5 * w;
            const double pm = adaptive_simpson(density, a, mid, 1e-10);
            const double pp = adaptive_simpson(density, mid, b, 1e-10);
            if (pm < 1e-12 || pp < 1e-12) {
                std::ostringstream os;
                os << "build_haar_weighted: degenerate half-cell at (j,k)=(" << j << ',' << k << ")";
                throw DegenerateCellError(os.str());
            }
            const double norm = std::sqrt(pp * pp * pm + pm * pm * pp);
            HaarCell c{a, mid, b, pp / norm, -pm / norm};
            cells.push_back(c);
            atoms.push_back({j, k, {{a, b}}, std::max(std::abs(c.left), std::abs(c.right))});
        }
    }
    BasisFamily fam;
    fam.kind = FamilyKind::HaarWeighted;
    fam.c_min = c_min;
    fam.uniform_density = false;
    auto ev = std::make_shared<HaarWeightedEvaluator>(j_max, std::move(cells));
    return Model(fam, std::move(atoms), ev, density, j_max);
}

Model build_haar_uniform(int j_max) {
    if (j_max < 0 || j_max > 24) throw std::invalid_argument("build_haar_uniform: j_max out of range");
    std::vector<HaarCell> cells;
    std::vector<Atom> atoms;
    atoms.push_back({-1, 0, {{0.0, 1.0}}, 1.0});
    for (int j = 0; j <= j_max; ++j) {
        const int n = 1 << j;
        const double w = 1.0 / n, v = std::sqrt(static_cast<double>(n));
        for (int k = 0; k < n; ++k) {
            cells.push_back({k * w, k * w + 0.5 * w, (k + 1) * w, v, -v});
            atoms.push_back({j, k, {{k * w, (k + 1) * w}}, v});
        }
    }
    BasisFamily fam;
    fam.kind = FamilyKind::HaarWeighted;
    fam.c_min = 1.0;
    fam.uniform_density = true;
    return Model(fam, std::move(atoms), std::make_shared<HaarWeightedEvaluator>(j_max, std::move(cells)),
                 [](double) { return 1.0; }, j_max);
}

Model build_periodized_wavelet(const OrthoFilter& filter, int j_max) {
    if (j_max < 0) throw std::invalid_argument("build_periodized_wavelet: j_max must be >= 0");
    if (j_max > 20) throw std::invalid_argument("build_periodized_wavelet: j_max too large");
    auto tables = WaveletTables::cached(filter);
    auto ev = std::make_shared<WaveletEvaluator>(tables, j_max);
    const double L1 = tables->support_length();

    std::vector<Atom> atoms;
    atoms.push_back({-1, 0, {{0.0, 1.0}}, 1.0});
    for (int j = 0; j <= j_max; ++j) {
        const int n = 1 << j;
        const double len = L1 / n;
        const std::size_t first = atoms.size();
        for (int k = 0; k < n; ++k) atoms.push_back({j, k, wrapped_support(static_cast<double>(k) / n, len), 0.0});
        // Atoms of one level are grid-shifts of each other.
        const double s = sup_over_support(*ev, first, atoms[first].support);
        for (std::size_t a = first; a < atoms.size(); ++a) atoms[a].sup_norm = s;
    }
    BasisFamily fam;
    fam.kind = FamilyKind::PeriodizedWavelet;
    fam.filter_id = filter.id();
    return Model(fam, std::move(atoms), ev, [](double) { return 1.0; }, j_max);
}

Model build_periodized_wavelet(std::span<const double> scaling_coefficients, int j_max) {
    return build_periodized_wavelet(OrthoFilter("custom", {scaling_coefficients.begin(), scaling_coefficients.end()}),
                                    j_max);
}

Model build_piecewise_poly(std::span<const double> boundaries, int degree) {
    if (degree < 0) throw std::invalid_argument("build_piecewise_poly: degree must be >= 0");
    if (boundaries.size() < 2) throw std::invalid_argument("build_piecewise_poly: need at least one cell");
    if (std::abs(boundaries.front()) > 1e-12 || std::abs(boundaries.back() - 1.0) > 1e-12)
        throw std::invalid_argument("build_piecewise_poly: partition must cover [0, 1]");
    for (std::size_t c = 0; c + 1 < boundaries.size(); ++c) {
        if (!(boundaries[c + 1] - boundaries[c] > 1e-12)) {
            std::ostringstream os;
            os << "build_piecewise_poly: lower-regularity violated, cell " << c << " = [" << boundaries[c] << ", "
               << boundaries[c + 1] << "] has no mass";
            throw LowerRegularityError(os.str(), c);
        }
    }
    std::vector<double> b(boundaries.begin(), boundaries.end());
    b.front() = 0.0;
    b.back() = 1.0;
    auto ev = std::make_shared<PiecewisePolyEvaluator>(b, degree);
    std::vector<Atom> atoms;
    for (std::size_t c = 0; c + 1 < b.size(); ++c)
        for (int d = 0; d <= degree; ++d) {
            const double len = b[c + 1] - b[c];
            // |P_d| peaks at the cell ends.
            atoms.push_back({0, static_cast<int>(atoms.size()), {{b[c], b[c + 1]}}, std::sqrt((2.0 * d + 1.0) / len)});
        }
    BasisFamily fam;
    fam.kind = FamilyKind::PiecewisePoly;
    fam.partition = b;
    fam.degree = degree;
    return Model(fam, std::move(atoms), ev, [](double) { return 1.0; }, static_cast<int>(b.size() - 1));
}

Model build_regular_piecewise_poly(std::size_t cells, int degree) {
    if (cells == 0) throw std::invalid_argument("build_regular_piecewise_poly: cells must be >= 1");
    std::vector<double> b(cells + 1);
    for (std::size_t c = 0; c <= cells; ++c) b[c] = static_cast<double>(c) / static_cast<double>(cells);
    return build_piecewise_poly(b, degree);
}

std::vector<double> atom_grid_matrix(const Model& model) {
    const auto& grid = quadrature_grid();
    const std::size_t D = model.dimension();
    std::vector<double> out(grid.size() * D);
    for (std::size_t i = 0; i < grid.size(); ++i) model.eval_all(grid[i], std::span<double>(out.data() + i * D, D));
    return out;
}

namespace {

// Golub-Welsch nodes and weights on [0, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(m);
    weights.resize(m);
    for (int k = 0; k < m; ++k) {
        nodes[k] = 0.5 * (es.eigenvalues()(k) + 1.0);
        const double v = es.eigenvectors()(0, k);
        weights[k] = v * v;
    }
}

// Polynomial pieces are smooth inside cells, so a per-cell Gauss rule beats
// the midpoint grid by many orders.
std::vector<double> piecewise_poly_gram(const Model& model) {
    const auto& fam = model.family();
    const std::size_t D = model.dimension();
    const int m = fam.degree + 1 + (fam.uniform_density ? 0 : 16);
    std::vector<double> t, w;
    gauss_legendre(m, t, w);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(D, D);
    Eigen::VectorXd v(D);
    for (std::size_t c = 0; c + 1 < fam.partition.size(); ++c) {
        const double a = fam.partition[c], len = fam.partition[c + 1] - a;
        for (int k = 0; k < m; ++k) {
            const double x = a + len * t[k];
            model.eval_all(x, std::span<double>(v.data(), D));
            G.noalias() += (len * w[k] * model.density(x)) * v * v.transpose();
        }
    }
    std::vector<double> out(D * D);
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) out[a * D + b] = G(a, b);
    return out;
}

}  // namespace

std::vector<double> quadrature_gram(const Model& model) {
    if (model.family().kind == FamilyKind::PiecewisePoly) return piecewise_poly_gram(model);
    const auto& grid = quadrature_grid();
    const std::size_t D = model.dimension();
    const std::size_t M = grid.size();
    std::vector<double> vals = atom_grid_matrix(model);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Phi(vals.data(), M, D);
    Eigen::VectorXd w(M);
    for (std::size_t i = 0; i < M; ++i) w(i) = model.density(grid[i]) / static_cast<double>(M);
    Eigen::MatrixXd G = Phi.transpose() * w.asDiagonal() * Phi;
    std::vector<double> out(D * D);
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) out[a * D + b] = G(a, b);
    return out;
}

std::vector<double> empirical_gram(const Model& model, std::span<const double> x) {
    const std::size_t D = model.dimension();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(D, D);
    Eigen::VectorXd v(D);
    for (double xi : x) {
        model.eval_all(xi, std::span<double>(v.data(), D));
        G.selfadjointView<Eigen::Lower>().rankUpdate(v);
    }
    G = G.selfadjointView<Eigen::Lower>();
    G /= static_cast<double>(x.size());
    std::vector<double> out(D * D);
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) out[a * D + b] = G(a, b);
    return out;
}

}  // namespace wavesel
