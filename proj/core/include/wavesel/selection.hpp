#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesel/basis.hpp"
#include "wavesel/estimator.hpp"
#include "wavesel/filters.hpp"
#include "wavesel/signals.hpp"

namespace wavesel {

/// How models of a collection are fitted. Ordered: rank-ordered pyramid
/// (n a power of two). Gram: least squares on the actual design.
enum class Route { Ordered, Gram };
enum class CollectionKind { Wavelet, Haar, Histogram };

/// Nested models with dimensions 2^j, j = 1..log2(n)-1.
struct ModelCollection {
    std::string name;
    CollectionKind kind = CollectionKind::Wavelet;
    OrthoFilter filter = daubechies_filter(8);
    std::vector<std::size_t> dims;

    /// Model of the given dimension (a power of two).
    Model model(std::size_t dimension) const;
};

/// "wavelet" (db8), "wavelet:<filter>", "haar" or "histogram".
ModelCollection make_collection(const std::string& spec, std::size_t n);
/// Same family with explicit dimensions.
ModelCollection make_collection(const std::string& spec, std::vector<std::size_t> dims);

class FoldDegeneracyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MissingModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Blocks of 0-based indices into the sorted sample. Observation with
/// 1-based rank r goes to block (r mod V); for V = 2, blocks[0] holds the
/// even ranks and blocks[1] the odd ranks.
struct FoldScheme {
    std::size_t V = 2;
    std::vector<std::vector<std::size_t>> blocks;

    static FoldScheme interleaved(std::size_t n, std::size_t V);
    /// Throws FoldDegeneracyError on an empty block or out-of-range index.
    void validate(std::size_t n) const;
};

/// Design: mean squared error at the design points. Grid: L2 on the 2^14
/// grid of the estimator as evaluated (ordered route: interpolated fitted
/// values). Function: L2 of sum_k beta_k phi_k, by Parseval against the
/// fine-grid wavelet coefficients of s* (ordered route), equal to Grid on
/// the Gram route.
enum class LossMeasure { Design, Grid, Function };
std::string to_string(LossMeasure m);
LossMeasure loss_measure_from_string(const std::string& s);

/// One model fitted on the full sample and on every training fold.
struct ModelFit {
    std::size_t dimension = 0;
    bool ok = true;
    std::string failure;
    double empirical_risk = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> beta;
    std::vector<double> fitted;
    /// fold_predictions[j][i]: estimator trained without block j, at x_i.
    std::vector<std::vector<double>> fold_predictions;
    /// l(s*, s^_m) under the chosen loss measure, when the truth is known.
    std::optional<double> true_loss;
    FitMethod method = FitMethod::GramExact;
};

struct FittedCollection {
    std::vector<double> x;
    std::vector<double> y;
    FoldScheme folds;
    Route route = Route::Gram;
    std::vector<ModelFit> models;

    std::size_t n() const noexcept { return x.size(); }
    /// Indices of models usable by every method.
    std::vector<std::size_t> usable() const;
};

/// Piecewise-linear interpolation through (xs, fs), xs increasing, with
/// constant extrapolation.
std::vector<double> interpolate_linear(std::span<const double> xs, std::span<const double> fs,
                                       std::span<const double> xq);

/// Fits every model on the sample and on each training fold. Models whose
/// fit fails anywhere are marked !ok and ignored by every selector.
FittedCollection fit_collection(const RegressionSample& sample, const ModelCollection& collection,
                                const FoldScheme& folds, const TestSignal* truth = nullptr,
                                LossMeasure loss = LossMeasure::Design);

struct TraceEntry {
    std::size_t dimension = 0;
    double criterion = 0.0;
    double penalty = 0.0;
    double empirical_risk = 0.0;
};

/// Selected dimension on alpha in [alpha_lo, alpha_hi).
struct PathSegment {
    double alpha_lo = 0.0;
    double alpha_hi = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    std::size_t dimension = 0;
};

struct DimensionJump {
    double alpha = 0.0;
    std::size_t from_dimension = 0;
    std::size_t to_dimension = 0;
    /// from/to; a ratio below 2 raises the no-jump warning.
    double ratio = 0.0;
    bool warning = false;
};

struct SelectionDiagnostics {
    std::optional<double> alpha_min;
    std::vector<PathSegment> path;
    std::optional<DimensionJump> jump;
    std::optional<double> sigma2;
    /// fold_risks[m][j]: held-out risk of model m on block j.
    std::vector<std::vector<double>> fold_risks;
    std::vector<std::size_t> excluded_dimensions;
    std::vector<std::string> warnings;
};

struct SelectionOutcome {
    std::string method;
    std::size_t chosen_dimension = 0;
    std::size_t chosen_index = 0;  // position in the trace
    std::vector<TraceEntry> trace;
    SelectionDiagnostics diagnostics;
    /// Set when the method could not run on this collection (chosen_dimension is then 0).
    std::string failure;
};

/// First index of the minimum; with increasing dimensions this breaks ties
/// toward the smaller model. Values within rel_tol times the criterion's
/// spread of the minimum count as ties.
std::size_t argmin_smaller(std::span<const double> criterion, double rel_tol = 0.0);

/// Tie tolerance used by every selector, so rounding noise between models that
/// fit equally well (zero noise) does not pick the larger one.
inline constexpr double kSelectionTieTolerance = 1e-12;

/// Exact regularization path of alpha -> argmin_m {risk_m + alpha shape_m}
/// for alpha >= 0, via the lower convex hull. shapes must be increasing.
std::vector<PathSegment> penalty_path(std::span<const std::size_t> dims, std::span<const double> shapes,
                                      std::span<const double> risks);
/// Brute-force selection (trace index) for each alpha.
std::vector<std::size_t> penalty_path_grid(std::span<const double> shapes, std::span<const double> risks,
                                           std::span<const double> alphas);
/// Trace index selected at alpha on an exact path.
std::size_t path_lookup(std::span<const PathSegment> path, double alpha);

/// Largest absolute drop in selected dimension between consecutive
/// segments; ties go to the larger alpha. Nullopt for a one-segment path.
std::optional<DimensionJump> dimension_jump(std::span<const PathSegment> path);

SelectionOutcome oracle_select(const FittedCollection& fc);
/// pen = multiplier * alpha_min * shape_scale * D/n, alpha_min from the
/// dimension jump of the same shape.
SelectionOutcome select_slope(const FittedCollection& fc, double multiplier, double shape_scale = 1.0);
/// Slope heuristics: select_slope with multiplier 2.
SelectionOutcome select_sh(const FittedCollection& fc, double shape_scale = 1.0);
SelectionOutcome select_cp(const FittedCollection& fc);
SelectionOutcome select_vfcv(const FittedCollection& fc);
SelectionOutcome select_penvf(const FittedCollection& fc);

/// "oracle", "sh", "cp", "vfcv", "penvf".
SelectionOutcome select_by_method(const FittedCollection& fc, const std::string& method);
std::vector<std::string> selection_methods();

/// Raw criteria on the usable models.
std::vector<double> vfcv_criterion(const FittedCollection& fc);
std::vector<double> penvf_penalty(const FittedCollection& fc);

}  // namespace wavesel
