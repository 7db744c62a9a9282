#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wavesel {

/// Orthonormal scaling filter h with sum h = sqrt(2) and
/// sum_k h_k h_{k+2m} = delta_{m0}. The wavelet filter is
/// g_k = (-1)^k h_{L-1-k}.
class OrthoFilter {
public:
    /// Throws std::invalid_argument when the orthonormality conditions fail
    /// by more than `tol`.
    OrthoFilter(std::string id, std::vector<double> h, double tol = 1e-12);

    const std::string& id() const noexcept { return id_; }
    std::span<const double> lowpass() const noexcept { return h_; }
    std::span<const double> highpass() const noexcept { return g_; }
    std::size_t length() const noexcept { return h_.size(); }

    /// Largest violation of the two conditions; 0 for an exact filter.
    static double orthonormality_defect(std::span<const double> h);

private:
    std::string id_;
    std::vector<double> h_;
    std::vector<double> g_;
};

OrthoFilter haar_filter();
/// Daubechies extremal-phase filters by number of vanishing moments.
OrthoFilter daubechies_filter(int vanishing_moments);
/// "haar", "db1".."db8" (dbN = N vanishing moments, 2N taps).
OrthoFilter filter_by_name(const std::string& name);

/// Scaling function phi and wavelet psi of a filter, tabulated at the
/// dyadic points i / 2^resolution of their support [0, L-1].
/// Integer values come from the eigenvector of the two-scale matrix,
/// finer points from the refinement relation, so tabulated values are exact
/// up to rounding. Off-grid arguments are interpolated linearly (piecewise
/// constant for the 2-tap Haar filter).
class WaveletTables {
public:
    WaveletTables(const OrthoFilter& filter, int resolution);

    double phi(double x) const noexcept { return lookup(phi_, x); }
    double psi(double x) const noexcept { return lookup(psi_, x); }
    double support_length() const noexcept { return support_; }
    int resolution() const noexcept { return resolution_; }
    std::span<const double> phi_table() const noexcept { return phi_; }
    std::span<const double> psi_table() const noexcept { return psi_; }
    /// phi at the integers 0..L-1.
    std::vector<double> phi_integer_values() const;

    /// Shared immutable tables per filter id (resolution 15).
    static std::shared_ptr<const WaveletTables> cached(const OrthoFilter& filter);

private:
    double lookup(const std::vector<double>& table, double x) const noexcept;

    int resolution_;
    double scale_;
    double support_;
    bool piecewise_constant_;
    std::vector<double> phi_;
    std::vector<double> psi_;
};

}  // namespace wavesel
