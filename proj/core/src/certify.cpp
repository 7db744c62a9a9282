#include "wavesel/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavesel/quadrature.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

SlbProposal auto_proposal(const Model& model) {
    SlbProposal p;
    const auto atoms = model.atoms();
    if (model.family().kind == FamilyKind::PiecewisePoly) {
        p.A = {static_cast<double>(model.dimension())};
        p.scale_of_atom.assign(atoms.size(), 0);
        return p;
    }
    int max_scale = -1;
    for (const auto& a : atoms) max_scale = std::max(max_scale, a.scale);
    p.A.push_back(1.0);
    for (int j = 0; j <= max_scale; ++j) p.A.push_back(std::ldexp(1.0, j));
    for (const auto& a : atoms) p.scale_of_atom.push_back(static_cast<std::size_t>(a.scale + 1));
    return p;
}

bool SlbCertificate::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SlbCheck& c) { return c.pass; });
}

bool supports_overlap(const Atom& a, const Atom& b) {
    for (const auto& p : a.support)
        for (const auto& q : b.support)
            if (p.lo < q.hi && q.lo < p.hi) return true;
    return false;
}

std::vector<std::vector<std::size_t>> overlap_counts(const Model& model, const std::vector<std::size_t>& partition,
                                                     std::size_t scales) {
    const auto atoms = model.atoms();
    std::vector<std::vector<std::size_t>> counts(atoms.size(), std::vector<std::size_t>(scales, 0));
    for (std::size_t k = 0; k < atoms.size(); ++k)
        for (std::size_t l = 0; l < atoms.size(); ++l)
            if (supports_overlap(atoms[k], atoms[l])) ++counts[k][partition[l]];
    return counts;
}

std::vector<std::vector<std::size_t>> overlap_counts_bruteforce(const Model& model,
                                                                const std::vector<std::size_t>& partition,
                                                                std::size_t scales) {
    const std::size_t D = model.dimension();
    const std::vector<double> g = atom_grid_matrix(model);
    const std::size_t M = g.size() / D;
    std::vector<std::vector<std::size_t>> counts(D, std::vector<std::size_t>(scales, 0));
    std::vector<char> seen(D * D, 0);
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < M; ++i) {
        nz.clear();
        for (std::size_t k = 0; k < D; ++k)
            if (g[i * D + k] != 0.0) nz.push_back(k);
        for (std::size_t a : nz)
            for (std::size_t b : nz) seen[a * D + b] = 1;
    }
    for (std::size_t k = 0; k < D; ++k)
        for (std::size_t l = 0; l < D; ++l)
            if (seen[k * D + l]) ++counts[k][partition[l]];
    return counts;
}

namespace {

std::optional<double> family_r_m(const Model& model) {
    const auto& fam = model.family();
    if (fam.kind == FamilyKind::HaarWeighted) return std::max(std::sqrt(2.0) + 1.0, std::sqrt(2.0 / fam.c_min));
    if (fam.kind == FamilyKind::PiecewisePoly && fam.degree == 0) {
        double min_len = 1.0;
        for (std::size_t c = 0; c + 1 < fam.partition.size(); ++c)
            min_len = std::min(min_len, fam.partition[c + 1] - fam.partition[c]);
        return std::max(1.0, 1.0 / std::sqrt(static_cast<double>(model.dimension()) * min_len));
    }
    return std::nullopt;
}

std::optional<double> family_A_c(const Model& model) {
    const auto& fam = model.family();
    if (fam.kind == FamilyKind::HaarWeighted) return 1.0;
    if (fam.kind == FamilyKind::PiecewisePoly && fam.degree == 0) return static_cast<double>(fam.degree + 1);
    return std::nullopt;
}

bool leq(double lhs, double rhs) { return lhs <= rhs * (1.0 + kSlbTolerance) + kSlbTolerance; }

}  // namespace

SlbCertificate certify_slb(const Model& model, const SlbProposal& proposal) {
    const auto atoms = model.atoms();
    const std::size_t D = atoms.size();
    const std::size_t b = proposal.A.size();
    if (b == 0) throw std::invalid_argument("certify_slb: empty A vector");
    if (proposal.scale_of_atom.size() != D) throw std::invalid_argument("certify_slb: partition size differs from D");
    for (std::size_t s : proposal.scale_of_atom)
        if (s >= b) throw std::invalid_argument("certify_slb: partition refers to a missing scale");
    for (double a : proposal.A)
        if (!(a > 0.0)) throw std::invalid_argument("certify_slb: A entries must be positive");

    SlbCertificate c;
    c.b_m = b;
    c.A = proposal.A;
    c.partition = proposal.scale_of_atom;
    c.dimension = D;
    const double sqrtD = std::sqrt(static_cast<double>(D));

    // Measured minimal r_m: from def_Ai and from loc_plus.
    double sum_sqrt = 0.0;
    for (double a : c.A) sum_sqrt += std::sqrt(a);
    double rm = sum_sqrt / sqrtD;
    for (std::size_t k = 0; k < D; ++k) rm = std::max(rm, atoms[k].sup_norm / std::sqrt(c.A[c.partition[k]]));
    c.r_m_min = rm;

    const auto counts = overlap_counts(model, c.partition, b);
    c.overlap.assign(b, std::vector<std::size_t>(b, 0));
    for (std::size_t k = 0; k < D; ++k)
        for (std::size_t j = 0; j < b; ++j)
            c.overlap[c.partition[k]][j] = std::max(c.overlap[c.partition[k]][j], counts[k][j]);
    double ac = 0.0;
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            ac = std::max(ac, static_cast<double>(c.overlap[i][j]) / std::max(c.A[j] / c.A[i], 1.0));
    c.A_c_min = ac;

    if (proposal.r_m) {
        c.r_m = *proposal.r_m;
        c.r_m_source = "proposal";
    } else if (auto f = family_r_m(model)) {
        c.r_m = *f;
        c.r_m_source = "family";
    } else {
        c.r_m = c.r_m_min;
        c.r_m_source = "measured";
    }
    if (proposal.A_c) {
        c.A_c = *proposal.A_c;
        c.A_c_source = "proposal";
    } else if (auto f = family_A_c(model)) {
        c.A_c = *f;
        c.A_c_source = "family";
    } else {
        c.A_c = c.A_c_min;
        c.A_c_source = "measured";
    }

    {
        double slack = c.A[0] - 1.0;
        for (std::size_t i = 1; i < b; ++i) slack = std::min(slack, c.A[i] - c.A[i - 1]);
        c.checks.push_back({"A_order", slack >= -kSlbTolerance, slack});
    }
    {
        const double rhs = c.r_m * sqrtD;
        c.checks.push_back({"def_Ai", leq(sum_sqrt, rhs), rhs - sum_sqrt});
    }
    {
        bool ok = true;
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < D; ++k) {
            const double rhs = c.r_m * std::sqrt(c.A[c.partition[k]]);
            ok = ok && leq(atoms[k].sup_norm, rhs);
            slack = std::min(slack, rhs - atoms[k].sup_norm);
        }
        c.checks.push_back({"loc_plus", ok, slack});
    }
    {
        bool ok = true;
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j) {
                const double rhs = c.A_c * std::max(c.A[j] / c.A[i], 1.0);
                const double lhs = static_cast<double>(c.overlap[i][j]);
                ok = ok && leq(lhs, rhs);
                slack = std::min(slack, rhs - lhs);
            }
        c.checks.push_back({"card_overlap", ok, slack});
    }
    return c;
}

SlbCertificate certify_slb(const Model& model) { return certify_slb(model, auto_proposal(model)); }

double localized_ratio(const Model& model, const SlbCertificate& cert, const std::vector<double>& beta,
                       const std::vector<double>& grid_matrix) {
    const std::size_t D = model.dimension();
    double bmax = 0.0;
    for (double v : beta) bmax = std::max(bmax, std::abs(v));
    if (bmax == 0.0) return 0.0;
    const std::size_t M = grid_matrix.size() / D;
    double sup = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double* row = grid_matrix.data() + i * D;
        double s = 0.0;
        for (std::size_t k = 0; k < D; ++k) s += beta[k] * row[k];
        sup = std::max(sup, std::abs(s));
    }
    return sup / (cert.A_c * cert.r_m * cert.r_m * std::sqrt(static_cast<double>(D)) * bmax);
}

LocalizedBound localized_bound_check(const Model& model, const SlbCertificate& cert, std::size_t trials,
                                     std::uint64_t seed) {
    const std::vector<double> g = atom_grid_matrix(model);
    Rng rng(seed);
    LocalizedBound out;
    std::vector<double> beta(model.dimension());
    for (std::size_t t = 0; t < trials; ++t) {
        for (double& b : beta) b = rng.normal();
        out.max_ratio = std::max(out.max_ratio, localized_ratio(model, cert, beta, g));
    }
    out.trials = trials;
    return out;
}

}  // namespace wavesel
