#include "wavesel/selection.hpp"

#include <algorithm>
#include <cmath>

#include "wavesel/quadrature.hpp"
#include "wavesel/transform.hpp"

namespace wavesel {

Model ModelCollection::model(std::size_t dimension) const {
    const int p = log2_exact(dimension);
    switch (kind) {
        case CollectionKind::Wavelet:
            if (p < 1) throw std::invalid_argument("wavelet collection: dimension must be >= 2");
            return build_periodized_wavelet(filter, p - 1);
        case CollectionKind::Haar:
            if (p < 1) throw std::invalid_argument("haar collection: dimension must be >= 2");
            return build_haar_uniform(p - 1);
        case CollectionKind::Histogram: return build_regular_piecewise_poly(dimension, 0);
    }
    throw std::logic_error("unreachable");
}

ModelCollection make_collection(const std::string& spec, std::vector<std::size_t> dims) {
    ModelCollection c;
    c.name = spec;
    if (spec == "wavelet" || spec == "db8") {
        c.kind = CollectionKind::Wavelet;
        c.filter = daubechies_filter(8);
        c.name = "wavelet:db8";
    } else if (spec.rfind("wavelet:", 0) == 0) {
        c.kind = CollectionKind::Wavelet;
        c.filter = filter_by_name(spec.substr(8));
    } else if (spec == "haar") {
        c.kind = CollectionKind::Haar;
    } else if (spec == "histogram") {
        c.kind = CollectionKind::Histogram;
    } else {
        throw std::invalid_argument("unknown collection '" + spec + "'");
    }
    if (dims.empty()) throw std::invalid_argument("collection needs at least one model");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        log2_exact(dims[i]);
        if (i > 0 && dims[i] <= dims[i - 1]) throw std::invalid_argument("collection dimensions must increase");
    }
    c.dims = std::move(dims);
    return c;
}

ModelCollection make_collection(const std::string& spec, std::size_t n) {
    std::vector<std::size_t> dims;
    for (std::size_t d = 2; d <= n / 2; d *= 2) dims.push_back(d);
    if (dims.empty()) throw std::invalid_argument("collection needs n >= 4");
    return make_collection(spec, std::move(dims));
}

FoldScheme FoldScheme::interleaved(std::size_t n, std::size_t V) {
    if (V < 2) throw FoldDegeneracyError("V must be >= 2");
    if (V > n) throw FoldDegeneracyError("V exceeds the sample size");
    FoldScheme f;
    f.V = V;
    f.blocks.resize(V);
    for (std::size_t i = 0; i < n; ++i) f.blocks[(i + 1) % V].push_back(i);
    return f;
}

void FoldScheme::validate(std::size_t n) const {
    if (V < 2 || blocks.size() != V) throw FoldDegeneracyError("fold scheme: need V >= 2 blocks");
    for (std::size_t j = 0; j < V; ++j) {
        if (blocks[j].empty()) throw FoldDegeneracyError("fold " + std::to_string(j) + " is empty");
        for (std::size_t i : blocks[j])
            if (i >= n) throw FoldDegeneracyError("fold index out of range");
    }
}

std::string to_string(LossMeasure m) {
    switch (m) {
        case LossMeasure::Design: return "design";
        case LossMeasure::Grid: return "grid";
        case LossMeasure::Function: return "function";
    }
    return "design";
}

LossMeasure loss_measure_from_string(const std::string& s) {
    if (s == "design") return LossMeasure::Design;
    if (s == "grid") return LossMeasure::Grid;
    if (s == "function") return LossMeasure::Function;
    throw std::invalid_argument("unknown loss measure '" + s + "'");
}

std::vector<std::size_t> FittedCollection::usable() const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < models.size(); ++m)
        if (models[m].ok) out.push_back(m);
    return out;
}

std::vector<double> interpolate_linear(std::span<const double> xs, std::span<const double> fs,
                                       std::span<const double> xq) {
    std::vector<double> out(xq.size());
    if (xs.empty()) throw std::invalid_argument("interpolate_linear: no nodes");
    for (std::size_t q = 0; q < xq.size(); ++q) {
        const double x = xq[q];
        if (x <= xs.front()) {
            out[q] = fs.front();
        } else if (x >= xs.back()) {
            out[q] = fs.back();
        } else {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t b = static_cast<std::size_t>(it - xs.begin());
            const std::size_t a = b - 1;
            const double t = (x - xs[a]) / (xs[b] - xs[a]);
            out[q] = fs[a] + t * (fs[b] - fs[a]);
        }
    }
    return out;
}

namespace {

double mse(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

std::vector<double> eval_on(const Model& model, std::span<const double> beta, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = model.eval_combination(beta, xs[i]);
    return out;
}

struct FoldData {
    std::vector<std::size_t> train;
    std::vector<double> x, y;
    std::optional<OrderedPyramid> pyramid;
};

}  // namespace

FittedCollection fit_collection(const RegressionSample& sample, const ModelCollection& collection,
                                const FoldScheme& folds, const TestSignal* truth, LossMeasure loss) {
    const std::size_t n = sample.size();
    folds.validate(n);
    FittedCollection fc;
    fc.x = sample.x;
    fc.y = sample.y;
    fc.folds = folds;
    const bool ordered = collection.kind == CollectionKind::Wavelet && is_power_of_two(n);
    fc.route = ordered ? Route::Ordered : Route::Gram;

    std::optional<OrderedPyramid> full;
    if (ordered) full.emplace(sample.y, collection.filter);

    std::vector<FoldData> fd(folds.V);
    for (std::size_t j = 0; j < folds.V; ++j) {
        std::vector<char> held(n, 0);
        for (std::size_t i : folds.blocks[j]) held[i] = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (!held[i]) {
                fd[j].train.push_back(i);
                fd[j].x.push_back(sample.x[i]);
                fd[j].y.push_back(sample.y[i]);
            }
        if (fd[j].train.empty()) throw FoldDegeneracyError("a training fold is empty");
        if (collection.kind == CollectionKind::Wavelet && is_power_of_two(fd[j].train.size()) &&
            fd[j].train.size() >= 2)
            fd[j].pyramid.emplace(fd[j].y, collection.filter);
    }

    std::vector<double> s_design;
    if (truth) {
        s_design.resize(n);
        for (std::size_t i = 0; i < n; ++i) s_design[i] = eval_signal(*truth, sample.x[i]);
    }
    const auto& grid = quadrature_grid();
    std::vector<double> s_grid;
    // Fine-grid coefficients of s* for the Parseval loss.
    std::vector<double> s_coef;
    double s_norm2 = 0.0;
    if (truth && loss == LossMeasure::Function && ordered) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = eval_signal(*truth, grid[i]);
        s_coef = OrderedPyramid(v, collection.filter).beta(grid.size());
        for (double c : s_coef) s_norm2 += c * c;
    }
    if (truth && (loss == LossMeasure::Grid || (loss == LossMeasure::Function && !ordered))) {
        s_grid.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) s_grid[i] = eval_signal(*truth, grid[i]);
    }

    for (std::size_t D : collection.dims) {
        ModelFit mf;
        mf.dimension = D;
        try {
            std::optional<Model> model;
            auto get_model = [&]() -> const Model& {
                if (!model) model.emplace(collection.model(D));
                return *model;
            };
            if (ordered) {
                if (D > n) throw SingularDesignError("dimension exceeds n");
                mf.beta = full->beta(D);
                mf.fitted = full->fitted(D);
                mf.method = FitMethod::PyramidFast;
            } else {
                FitResult fr = fit_gram(sample.x, sample.y, get_model());
                mf.beta = std::move(fr.beta);
                mf.fitted = std::move(fr.fitted);
                mf.method = FitMethod::GramExact;
            }
            mf.empirical_risk = mse(sample.y, mf.fitted);

            for (std::size_t j = 0; j < folds.V; ++j) {
                const FoldData& f = fd[j];
                std::vector<double> pred;
                if (f.pyramid) {
                    if (D > f.train.size()) throw SingularDesignError("dimension exceeds training fold size");
                    const std::vector<double> ft = f.pyramid->fitted(D);
                    pred = interpolate_linear(f.x, ft, sample.x);
                    for (std::size_t t = 0; t < f.train.size(); ++t) pred[f.train[t]] = ft[t];
                } else {
                    const FitResult fr = fit_gram(f.x, f.y, get_model());
                    pred = eval_on(get_model(), fr.beta, sample.x);
                }
                mf.fold_predictions.push_back(std::move(pred));
            }

            if (truth) {
                if (loss == LossMeasure::Design) {
                    mf.true_loss = mse(mf.fitted, s_design);
                } else if (loss == LossMeasure::Function && ordered) {
                    double acc = s_norm2;
                    for (std::size_t k = 0; k < D; ++k)
                        acc += (mf.beta[k] - s_coef[k]) * (mf.beta[k] - s_coef[k]) - s_coef[k] * s_coef[k];
                    mf.true_loss = std::max(acc, 0.0);
                } else {
                    const std::vector<double> est =
                        ordered ? interpolate_linear(sample.x, mf.fitted, grid) : eval_on(get_model(), mf.beta, grid);
                    mf.true_loss = mse(est, s_grid);
                }
            }
        } catch (const SingularDesignError& e) {
            mf.ok = false;
            mf.failure = e.what();
        }
        fc.models.push_back(std::move(mf));
    }
    return fc;
}

std::size_t argmin_smaller(std::span<const double> criterion, double rel_tol) {
    if (criterion.empty()) throw std::invalid_argument("argmin over an empty trace");
    std::size_t best = 0;
    for (std::size_t i = 1; i < criterion.size(); ++i)
        if (criterion[i] < criterion[best]) best = i;
    if (rel_tol <= 0.0) return best;
    const auto [lo, hi] = std::minmax_element(criterion.begin(), criterion.end());
    const double tol = rel_tol * (*hi - *lo);
    if (!std::isfinite(tol)) return best;
    for (std::size_t i = 0; i < best; ++i)
        if (criterion[i] <= criterion[best] + tol) return i;
    return best;
}

std::vector<PathSegment> penalty_path(std::span<const std::size_t> dims, std::span<const double> shapes,
                                      std::span<const double> risks) {
    const std::size_t M = risks.size();
    if (M == 0 || shapes.size() != M || dims.size() != M) throw std::invalid_argument("penalty_path: bad trace");
    for (std::size_t i = 1; i < M; ++i)
        if (!(shapes[i] > shapes[i - 1])) throw std::invalid_argument("penalty_path: shapes must increase");
    std::vector<PathSegment> path;
    std::size_t cur = argmin_smaller(risks);
    double alpha = 0.0;
    for (;;) {
        // Next model to take over: smallest crossing alpha, and among
        // simultaneous crossings the smallest shape (it wins right after).
        // Crossings equal up to rounding count as simultaneous.
        std::optional<std::size_t> next;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cur; ++i) {
            const double a = std::max(alpha, (risks[i] - risks[cur]) / (shapes[cur] - shapes[i]));
            if (!next ? a < best : a < best - 1e-12 * std::abs(best)) {
                best = a;
                next = i;
            }
        }
        path.push_back({alpha, next ? best : std::numeric_limits<double>::infinity(), cur, dims[cur]});
        if (!next) break;
        cur = *next;
        alpha = best;
    }
    // Drop zero-length segments left by exact collinearity.
    std::vector<PathSegment> out;
    for (const auto& s : path)
        if (s.alpha_hi > s.alpha_lo) out.push_back(s);
    for (std::size_t i = 1; i < out.size(); ++i) out[i].alpha_lo = out[i - 1].alpha_hi;
    if (!out.empty()) out.front().alpha_lo = 0.0;
    return out;
}

std::vector<std::size_t> penalty_path_grid(std::span<const double> shapes, std::span<const double> risks,
                                           std::span<const double> alphas) {
    std::vector<std::size_t> out;
    std::vector<double> crit(risks.size());
    for (double a : alphas) {
        for (std::size_t i = 0; i < risks.size(); ++i) crit[i] = risks[i] + a * shapes[i];
        out.push_back(argmin_smaller(crit));
    }
    return out;
}

std::size_t path_lookup(std::span<const PathSegment> path, double alpha) {
    for (const auto& s : path)
        if (alpha < s.alpha_hi) return s.index;
    return path.back().index;
}

std::optional<DimensionJump> dimension_jump(std::span<const PathSegment> path) {
    if (path.size() < 2) return std::nullopt;
    DimensionJump best;
    std::size_t best_drop = 0;
    bool found = false;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
        const std::size_t drop = path[t].dimension - path[t + 1].dimension;
        if (!found || drop >= best_drop) {
            found = true;
            best_drop = drop;
            best.alpha = path[t + 1].alpha_lo;
            best.from_dimension = path[t].dimension;
            best.to_dimension = path[t + 1].dimension;
        }
    }
    best.ratio = static_cast<double>(best.from_dimension) / static_cast<double>(best.to_dimension);
    best.warning = best.ratio < 2.0;
    return best;
}

namespace {

struct Usable {
    std::vector<std::size_t> idx;
    std::vector<std::size_t> dims;
    std::vector<double> risks;
};

Usable gather(const FittedCollection& fc, SelectionDiagnostics& diag) {
    Usable u;
    for (std::size_t m = 0; m < fc.models.size(); ++m) {
        if (fc.models[m].ok) {
            u.idx.push_back(m);
            u.dims.push_back(fc.models[m].dimension);
            u.risks.push_back(fc.models[m].empirical_risk);
        } else {
            diag.excluded_dimensions.push_back(fc.models[m].dimension);
        }
    }
    if (u.idx.empty()) throw MissingModelError("no usable model in the collection");
    return u;
}

SelectionOutcome finish(std::string method, const Usable& u, std::vector<double> crit, std::vector<double> pen,
                        SelectionDiagnostics diag) {
    SelectionOutcome out;
    out.method = std::move(method);
    for (std::size_t i = 0; i < u.idx.size(); ++i) out.trace.push_back({u.dims[i], crit[i], pen[i], u.risks[i]});
    out.chosen_index = argmin_smaller(crit, kSelectionTieTolerance);
    out.chosen_dimension = u.dims[out.chosen_index];
    out.diagnostics = std::move(diag);
    return out;
}

std::vector<double> held_out_risks(const FittedCollection& fc, const ModelFit& mf, std::vector<double>* all_risk) {
    std::vector<double> out;
    for (std::size_t j = 0; j < fc.folds.V; ++j) {
        const auto& pred = mf.fold_predictions.at(j);
        double s = 0.0;
        for (std::size_t i : fc.folds.blocks[j]) s += (fc.y[i] - pred[i]) * (fc.y[i] - pred[i]);
        out.push_back(s / static_cast<double>(fc.folds.blocks[j].size()));
        if (all_risk) {
            double a = 0.0;
            for (std::size_t i = 0; i < fc.n(); ++i) a += (fc.y[i] - pred[i]) * (fc.y[i] - pred[i]);
            all_risk->push_back(a / static_cast<double>(fc.n()));
        }
    }
    return out;
}

}  // namespace

SelectionOutcome oracle_select(const FittedCollection& fc) {
    SelectionDiagnostics diag;
    const Usable u = gather(fc, diag);
    std::vector<double> crit;
    for (std::size_t m : u.idx) {
        if (!fc.models[m].true_loss) throw std::invalid_argument("oracle selection needs the true regression function");
        crit.push_back(*fc.models[m].true_loss);
    }
    return finish("oracle", u, std::move(crit), std::vector<double>(u.idx.size(), 0.0), std::move(diag));
}

SelectionOutcome select_slope(const FittedCollection& fc, double multiplier, double shape_scale) {
    if (!(shape_scale > 0.0)) throw std::invalid_argument("shape scale must be positive");
    SelectionDiagnostics diag;
    const Usable u = gather(fc, diag);
    if (u.idx.size() < 3) throw MissingModelError("slope heuristics needs at least 3 usable models");
    const double n = static_cast<double>(fc.n());
    std::vector<double> shapes;
    for (std::size_t D : u.dims) shapes.push_back(shape_scale * static_cast<double>(D) / n);
    diag.path = penalty_path(u.dims, shapes, u.risks);
    diag.jump = dimension_jump(diag.path);
    double alpha = 0.0;
    if (diag.jump) {
        alpha = diag.jump->alpha;
        if (diag.jump->warning) diag.warnings.push_back("no clear dimension jump (largest drop ratio below 2)");
    } else {
        diag.warnings.push_back("penalty path has a single segment; no dimension jump");
    }
    diag.alpha_min = alpha;
    std::vector<double> crit, pen;
    for (std::size_t i = 0; i < u.idx.size(); ++i) {
        pen.push_back(multiplier * alpha * shapes[i]);
        crit.push_back(u.risks[i] + pen.back());
    }
    return finish(multiplier == 2.0 ? "sh" : "slope", u, std::move(crit), std::move(pen), std::move(diag));
}

SelectionOutcome select_sh(const FittedCollection& fc, double shape_scale) {
    SelectionOutcome o = select_slope(fc, 2.0, shape_scale);
    o.method = "sh";
    return o;
}

SelectionOutcome select_cp(const FittedCollection& fc) {
    SelectionDiagnostics diag;
    const Usable u = gather(fc, diag);
    const std::size_t n = fc.n();
    const std::size_t half = n / 2;
    std::optional<double> r_half;
    for (std::size_t i = 0; i < u.idx.size(); ++i)
        if (u.dims[i] == half) r_half = u.risks[i];
    if (!r_half) throw MissingModelError("Mallows' Cp needs a usable model of dimension n/2");
    const double sigma2 = static_cast<double>(n) * *r_half / static_cast<double>(n - half);
    diag.sigma2 = sigma2;
    std::vector<double> crit, pen;
    for (std::size_t i = 0; i < u.idx.size(); ++i) {
        pen.push_back(2.0 * sigma2 * static_cast<double>(u.dims[i]) / static_cast<double>(n));
        crit.push_back(u.risks[i] + pen.back());
    }
    return finish("cp", u, std::move(crit), std::move(pen), std::move(diag));
}

std::vector<double> vfcv_criterion(const FittedCollection& fc) {
    std::vector<double> crit;
    for (std::size_t m : fc.usable()) {
        const auto r = held_out_risks(fc, fc.models[m], nullptr);
        double s = 0.0;
        for (double v : r) s += v;
        crit.push_back(s / static_cast<double>(fc.folds.V));
    }
    return crit;
}

std::vector<double> penvf_penalty(const FittedCollection& fc) {
    std::vector<double> pen;
    const double V = static_cast<double>(fc.folds.V);
    const double n = static_cast<double>(fc.n());
    for (std::size_t m : fc.usable()) {
        std::vector<double> all;
        const auto held = held_out_risks(fc, fc.models[m], &all);
        double s = 0.0;
        for (std::size_t j = 0; j < fc.folds.V; ++j) {
            // Training-sample risk recovered from the full and held-out sums.
            const double nj = static_cast<double>(fc.folds.blocks[j].size());
            const double train = (all[j] * n - held[j] * nj) / (n - nj);
            s += all[j] - train;
        }
        pen.push_back((V - 1.0) / V * s);
    }
    return pen;
}

SelectionOutcome select_vfcv(const FittedCollection& fc) {
    SelectionDiagnostics diag;
    const Usable u = gather(fc, diag);
    for (std::size_t m : u.idx) diag.fold_risks.push_back(held_out_risks(fc, fc.models[m], nullptr));
    std::vector<double> crit = vfcv_criterion(fc);
    std::vector<double> pen(crit.size());
    for (std::size_t i = 0; i < crit.size(); ++i) pen[i] = crit[i] - u.risks[i];
    return finish("vfcv", u, std::move(crit), std::move(pen), std::move(diag));
}

SelectionOutcome select_penvf(const FittedCollection& fc) {
    SelectionDiagnostics diag;
    const Usable u = gather(fc, diag);
    for (std::size_t m : u.idx) diag.fold_risks.push_back(held_out_risks(fc, fc.models[m], nullptr));
    std::vector<double> pen = penvf_penalty(fc);
    std::vector<double> crit(pen.size());
    for (std::size_t i = 0; i < pen.size(); ++i) crit[i] = u.risks[i] + pen[i];
    return finish("penvf", u, std::move(crit), std::move(pen), std::move(diag));
}

SelectionOutcome select_by_method(const FittedCollection& fc, const std::string& method) {
    if (method == "oracle") return oracle_select(fc);
    if (method == "sh") return select_sh(fc);
    if (method == "cp") return select_cp(fc);
    if (method == "vfcv") return select_vfcv(fc);
    if (method == "penvf") return select_penvf(fc);
    throw std::invalid_argument("unknown selection method '" + method + "'");
}

std::vector<std::string> selection_methods() { return {"sh", "cp", "vfcv", "penvf"}; }

}  // namespace wavesel
