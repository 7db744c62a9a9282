#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesel/filters.hpp"

namespace wavesel {

enum class FamilyKind { HaarWeighted, PeriodizedWavelet, PiecewisePoly };

std::string to_string(FamilyKind kind);

/// Descriptor of the family a model's basis belongs to and of the
/// reference design law it is orthonormal under.
struct BasisFamily {
    FamilyKind kind = FamilyKind::PeriodizedWavelet;
    std::string filter_id;           // PeriodizedWavelet
    std::vector<double> partition;   // PiecewisePoly cell boundaries, 0 = b_0 < ... < b_K = 1
    int degree = 0;                  // PiecewisePoly maximal degree r
    double c_min = 1.0;              // lower bound of the design density (1 for Lebesgue)
    bool uniform_density = true;     // reference measure is Lebesgue on [0,1]

    std::string describe() const;
};

/// Open interval (lo, hi) contained in [0, 1].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// One basis function with its bookkeeping: resolution level (-1 for the
/// constant/father atom, 0 for every histogram/polynomial atom), position
/// within the level, support pieces and sup-norm.
struct Atom {
    int scale = 0;
    int index = 0;
    std::vector<Interval> support;
    double sup_norm = 0.0;
};

/// Thrown when a weighted Haar cell carries (numerically) no design mass.
class DegenerateCellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a partition violates lower regularity (a cell of zero mass).
class LowerRegularityError : public std::invalid_argument {
public:
    LowerRegularityError(const std::string& what, std::size_t cell)
        : std::invalid_argument(what), cell_(cell) {}
    std::size_t cell() const noexcept { return cell_; }

private:
    std::size_t cell_;
};

namespace detail {
class BasisEvaluator {
public:
    virtual ~BasisEvaluator() = default;
    virtual double eval(std::size_t k, double x) const = 0;
    virtual void eval_all(double x, std::span<double> out) const;
};
}  // namespace detail

/// A finite-dimensional linear model with an orthonormal basis under its
/// reference measure. Immutable; copies share state.
class Model {
public:
    Model(BasisFamily family, std::vector<Atom> atoms, std::shared_ptr<const detail::BasisEvaluator> evaluator,
          std::function<double(double)> density, int level);

    const BasisFamily& family() const noexcept { return family_; }
    std::size_t dimension() const noexcept { return atoms_.size(); }
    /// Finest resolution level j_max (wavelet/Haar) or cell count (piecewise).
    int level() const noexcept { return level_; }
    std::span<const Atom> atoms() const noexcept { return atoms_; }

    double eval(std::size_t k, double x) const { return evaluator_->eval(k, x); }
    void eval_all(double x, std::span<double> out) const { evaluator_->eval_all(x, out); }
    double eval_combination(std::span<const double> beta, double x) const;

    /// Design density of the reference measure (1 on [0,1] for Lebesgue).
    double density(double x) const { return density_(x); }

private:
    BasisFamily family_;
    std::vector<Atom> atoms_;
    std::shared_ptr<const detail::BasisEvaluator> evaluator_;
    std::function<double(double)> density_;
    int level_;
};

/// Haar basis {psi_-1 = 1} U {psi_{j,k}: 0 <= j <= j_max}, orthonormal under
/// the design law with the given density (>= c_min > 0, integrating to 1).
/// Half-cell masses use adaptive Simpson to 1e-10. D = 2^{j_max+1}.
Model build_haar_weighted(int j_max, const std::function<double(double)>& density, double c_min);
Model build_haar_uniform(int j_max);

/// Periodized wavelets on [0,1]: the constant plus psi^per_{j,k},
/// 0 <= j <= j_max. D = 2^{j_max+1}.
Model build_periodized_wavelet(const OrthoFilter& filter, int j_max);
/// Same with raw scaling coefficients; invalid filters throw std::invalid_argument.
Model build_periodized_wavelet(std::span<const double> scaling_coefficients, int j_max);

/// Per-cell orthonormal Legendre polynomials up to degree r under Lebesgue
/// measure. D = (r+1) * (#cells). r = 0 gives histograms.
Model build_piecewise_poly(std::span<const double> boundaries, int degree);
/// Regular partition into `cells` equal cells.
Model build_regular_piecewise_poly(std::size_t cells, int degree);

/// Atom values on the quadrature grid, row-major (grid point, atom).
std::vector<double> atom_grid_matrix(const Model& model);

/// Gram matrix of the basis under its reference measure: the 2^14 midpoint
/// grid, or a per-cell Gauss rule for piecewise polynomials.
std::vector<double> quadrature_gram(const Model& model);

/// Gram matrix under the empirical measure of the given design points.
std::vector<double> empirical_gram(const Model& model, std::span<const double> x);

}  // namespace wavesel
