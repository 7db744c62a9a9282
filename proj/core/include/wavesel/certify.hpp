#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavesel/basis.hpp"

namespace wavesel {

/// Scale assignment to certify: A_1 <= ... <= A_b and the scale index of
/// each atom. r_m / A_c are optional claims; missing ones fall back to the
/// family's closed form or to the measured minimum.
struct SlbProposal {
    std::vector<double> A;
    std::vector<std::size_t> scale_of_atom;
    std::optional<double> r_m;
    std::optional<double> A_c;
};

/// Per-resolution-level assignment for wavelets and Haar (A = 1 for the
/// constant, 2^j for level j); one scale with A_1 = D otherwise.
SlbProposal auto_proposal(const Model& model);

struct SlbCheck {
    std::string name;  // "A_order", "def_Ai", "loc_plus", "card_overlap"
    bool pass = false;
    /// Smallest margin of the inequality (right side minus left side).
    double slack = 0.0;
};

struct SlbCertificate {
    std::size_t b_m = 0;
    std::vector<double> A;
    std::vector<std::size_t> partition;
    double r_m = 0.0;
    double A_c = 0.0;
    /// Smallest r_m and A_c for which the inequalities hold with this A and partition.
    double r_m_min = 0.0;
    double A_c_min = 0.0;
    std::string r_m_source;  // "proposal", "family", "measured"
    std::string A_c_source;
    std::vector<SlbCheck> checks;
    /// overlap[i][j] = max over atoms k of scale i of card(Pi_{j|k}).
    std::vector<std::vector<std::size_t>> overlap;
    std::size_t dimension = 0;

    bool pass() const;
};

/// Relative tolerance used when comparing the measured sides.
inline constexpr double kSlbTolerance = 1e-9;

/// Evaluates the strong-localization inequalities. Failures are reported
/// in the certificate, never thrown; malformed proposals throw
/// std::invalid_argument.
SlbCertificate certify_slb(const Model& model, const SlbProposal& proposal);
SlbCertificate certify_slb(const Model& model);

/// True when two recorded supports share an open set.
bool supports_overlap(const Atom& a, const Atom& b);

/// card(Pi_{j|k}) for every atom k and scale j from recorded supports.
std::vector<std::vector<std::size_t>> overlap_counts(const Model& model, const std::vector<std::size_t>& partition,
                                                     std::size_t scales);
/// Same counts from nonzero patterns on the 2^14 grid.
std::vector<std::vector<std::size_t>> overlap_counts_bruteforce(const Model& model,
                                                                const std::vector<std::size_t>& partition,
                                                                std::size_t scales);

struct LocalizedBound {
    double max_ratio = 0.0;
    std::size_t trials = 0;
};

/// sup_x |sum_k beta_k phi_k(x)| / (A_c r_m^2 sqrt(D) max_k |beta_k|), with
/// the sup taken on the 2^14 grid; 0 for beta = 0.
double localized_ratio(const Model& model, const SlbCertificate& cert, const std::vector<double>& beta,
                       const std::vector<double>& grid_matrix);

/// Largest ratio over `trials` standard Gaussian coefficient vectors.
LocalizedBound localized_bound_check(const Model& model, const SlbCertificate& cert, std::size_t trials,
                                     std::uint64_t seed);

}  // namespace wavesel
