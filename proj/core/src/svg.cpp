#include "wavesel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wavesel {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

// Maps data coordinates (possibly log10) to the plotting frame.
struct Frame {
    double x0, x1, y0, y1;
    bool logx = false, logy = false;

    double tx(double v) const { return logx ? std::log10(v) : v; }
    double ty(double v) const { return logy ? std::log10(v) : v; }
    double px(double v) const { return kLeft + (tx(v) - x0) / (x1 - x0) * (kW - kLeft - kRight); }
    double py(double v) const { return kH - kBottom - (ty(v) - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

// Range in transformed units, padded so that a single point still has a frame.
std::pair<double, double> span_of(const std::vector<double>& v, bool log) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v) {
        if (log && !(x > 0)) continue;
        if (!std::isfinite(x)) continue;
        const double t = log ? std::log10(x) : x;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        const double pad = log ? 0.5 : std::max(std::abs(lo) * 0.1, 0.5);
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

void axes(SvgWriter& w, const Frame& f, const std::string& xlabel, const std::string& ylabel, const std::string& title) {
    const double bx = kLeft, by = kH - kBottom, tx = kW - kRight, ty = kTop;
    w.line(bx, by, tx, by, "axis");
    w.line(bx, by, bx, ty, "axis");
    // five ticks per axis; on a log axis ticks sit at integer decades when there are enough of them
    auto ticks = [](double lo, double hi, bool log) {
        std::vector<double> t;
        if (log && hi - lo >= 2) {
            for (double d = std::ceil(lo); d <= hi; d += std::max(1.0, std::floor((hi - lo) / 5))) t.push_back(d);
        } else {
            for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
        }
        return t;
    };
    for (double t : ticks(f.x0, f.x1, f.logx)) {
        const double x = kLeft + (t - f.x0) / (f.x1 - f.x0) * (kW - kLeft - kRight);
        w.line(x, by, x, by + 5, "tick");
        w.text(x, by + 18, tick_label(f.logx ? std::pow(10.0, t) : t));
    }
    for (double t : ticks(f.y0, f.y1, f.logy)) {
        const double y = kH - kBottom - (t - f.y0) / (f.y1 - f.y0) * (kH - kTop - kBottom);
        w.line(bx - 5, y, bx, y, "tick");
        w.text(bx - 8, y + 4, tick_label(f.logy ? std::pow(10.0, t) : t), "end");
    }
    w.text((bx + tx) / 2, kH - 12, xlabel);
    w.text(16, (by + ty) / 2, ylabel, "middle");
    w.text(kW / 2, 18, title, "middle", 13);
}

}  // namespace

PlotKind plot_kind_from_string(const std::string& s) {
    if (s == "risk-curve") return PlotKind::RiskCurve;
    if (s == "dimension-jump") return PlotKind::DimensionJump;
    if (s == "coefficients") return PlotKind::Coefficients;
    if (s == "ratio-histogram") return PlotKind::RatioHistogram;
    throw UnknownPlotKindError("unknown plot kind '" + s +
                               "' (expected risk-curve, dimension-jump, coefficients or ratio-histogram)");
}

std::string to_string(PlotKind k) {
    switch (k) {
        case PlotKind::RiskCurve: return "risk-curve";
        case PlotKind::DimensionJump: return "dimension-jump";
        case PlotKind::Coefficients: return "coefficients";
        case PlotKind::RatioHistogram: return "ratio-histogram";
    }
    return "";
}

SvgWriter::SvgWriter(double width, double height) : width_(width), height_(height) {}

void SvgWriter::line(double x1, double y1, double x2, double y2, const std::string& cls, const std::string& stroke,
                     double width) {
    body_ += "<line class=\"" + cls + "\" x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
             "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgWriter::rect(double x, double y, double w, double h, const std::string& cls, const std::string& fill) {
    body_ += "<rect class=\"" + cls + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
             "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& cls, const std::string& fill) {
    body_ += "<circle class=\"" + cls + "\" cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& cls,
                         const std::string& stroke) {
    if (pts.empty()) return;
    std::string p;
    for (const auto& [x, y] : pts) {
        if (!p.empty()) p += ' ';
        p += fmt(x) + "," + fmt(y);
    }
    body_ += "<polyline class=\"" + cls + "\" points=\"" + p + "\" fill=\"none\" stroke=\"" + stroke +
             "\" stroke-width=\"1.5\"/>\n";
}

void SvgWriter::text(double x, double y, const std::string& s, const std::string& anchor, double size) {
    body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
             fmt(size) + "\">" + escape(s) + "</text>\n";
}

std::string SvgWriter::finish() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
           "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\" font-family=\"sans-serif\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) + "\" fill=\"#fff\"/>\n" +
           body_ + "</svg>\n";
}

std::string plot_risk_curve(const SelectionOutcome& o) {
    std::vector<double> xs, ys;
    for (const auto& t : o.trace) {
        xs.push_back(static_cast<double>(t.dimension));
        ys.push_back(t.criterion);
        ys.push_back(t.empirical_risk);
    }
    Frame f{};
    f.logx = f.logy = true;
    std::tie(f.x0, f.x1) = span_of(xs, true);
    std::tie(f.y0, f.y1) = span_of(ys, true);
    SvgWriter w(kW, kH);
    axes(w, f, "dimension", "risk", o.method.empty() ? "risk curve" : o.method + " criterion");
    std::vector<std::pair<double, double>> crit, emp;
    for (const auto& t : o.trace) {
        const double d = static_cast<double>(t.dimension);
        if (!(d > 0)) continue;
        if (t.criterion > 0 && std::isfinite(t.criterion)) crit.emplace_back(f.px(d), f.py(t.criterion));
        if (t.empirical_risk > 0 && std::isfinite(t.empirical_risk)) emp.emplace_back(f.px(d), f.py(t.empirical_risk));
    }
    w.polyline(emp, "empirical", "#888");
    w.polyline(crit, "criterion", "#1f4e9c");
    for (const auto& t : o.trace)
        if (t.dimension == o.chosen_dimension && t.criterion > 0 && std::isfinite(t.criterion))
            w.circle(f.px(static_cast<double>(t.dimension)), f.py(t.criterion), 4, "chosen", "#c0392b");
    return w.finish();
}

std::string plot_dimension_jump(const SelectionOutcome& o) {
    const auto& path = o.diagnostics.path;
    std::vector<double> xs{0.0}, ys;
    for (const auto& s : path) {
        xs.push_back(s.alpha_lo);
        if (std::isfinite(s.alpha_hi)) xs.push_back(s.alpha_hi);
        ys.push_back(static_cast<double>(s.dimension));
    }
    if (o.diagnostics.jump) xs.push_back(o.diagnostics.jump->alpha);
    Frame f{};
    f.logy = true;
    // the last segment runs to infinity; show a quarter of the finite range past its start
    double xmax = 0;
    for (double x : xs) xmax = std::max(xmax, x);
    if (xmax <= 0) xmax = 1;
    f.x0 = 0;
    f.x1 = 1.25 * xmax;
    std::tie(f.y0, f.y1) = span_of(ys, true);
    SvgWriter w(kW, kH);
    axes(w, f, "penalty constant", "selected dimension", "dimension jump");
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto& s = path[i];
        const double a = std::min(s.alpha_lo, f.x1), b = std::isfinite(s.alpha_hi) ? std::min(s.alpha_hi, f.x1) : f.x1;
        const double y = f.py(static_cast<double>(std::max<std::size_t>(s.dimension, 1)));
        w.line(f.px(a), y, f.px(b), y, "step", "#1f4e9c", 2);
        if (i + 1 < path.size() && std::isfinite(s.alpha_hi)) {
            const double y2 = f.py(static_cast<double>(std::max<std::size_t>(path[i + 1].dimension, 1)));
            w.line(f.px(b), y, f.px(b), y2, "riser", "#1f4e9c", 1);
        }
    }
    if (o.diagnostics.jump) {
        const double x = f.px(o.diagnostics.jump->alpha);
        w.line(x, kTop, x, kH - kBottom, "alpha-hat", "#c0392b", 1.5);
        w.text(x + 4, kTop + 12, "alpha_min = " + tick_label(o.diagnostics.jump->alpha), "start");
    }
    return w.finish();
}

std::string plot_coefficients(const CoefficientTree& tree, std::size_t kept_dimension) {
    const std::size_t levels = tree.detail.size();
    double amax = 0;
    for (double a : tree.approx) amax = std::max(amax, std::abs(a));
    for (const auto& lv : tree.detail)
        for (double a : lv) amax = std::max(amax, std::abs(a));
    if (amax <= 0) amax = 1;

    Frame f{};
    f.x0 = 0;
    f.x1 = 1;
    f.y0 = -1;
    f.y1 = static_cast<double>(levels);
    SvgWriter w(kW, kH);
    axes(w, f, "position", "level", "wavelet coefficients");
    const double row = (kH - kTop - kBottom) / (static_cast<double>(levels) + 1);
    // Rows bottom-up: approximation first, then levels coarse to fine.
    auto draw_row = [&](const std::vector<double>& c, double level, bool kept, const std::string& cls) {
        const double base = f.py(level);
        const std::string colour = kept ? "#1f4e9c" : "#bbbbbb";
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double x = f.px((static_cast<double>(k) + 0.5) / static_cast<double>(c.size()));
            const double h = 0.45 * row * c[k] / amax;
            w.line(x, base, x, base - h, cls, colour, 1);
        }
    };
    draw_row(tree.approx, -0.5, kept_dimension >= tree.approx.size(), "coef-approx");
    std::size_t dim = tree.approx.size();
    for (std::size_t j = 0; j < levels; ++j) {
        dim += tree.detail[j].size();
        draw_row(tree.detail[j], static_cast<double>(j) + 0.5, dim <= kept_dimension, "coef");
    }
    return w.finish();
}

std::string plot_ratio_histogram(const std::vector<double>& ratios, const std::string& title) {
    std::vector<double> v;
    for (double r : ratios)
        if (std::isfinite(r)) v.push_back(r);
    const std::size_t bins = v.empty() ? 1 : std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(v.size())))), 1, 50);
    double lo = 0, hi = 2;
    if (!v.empty()) {
        lo = *std::min_element(v.begin(), v.end());
        hi = *std::max_element(v.begin(), v.end());
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double r : v) {
        auto b = static_cast<std::size_t>((r - lo) / (hi - lo) * static_cast<double>(bins));
        counts[std::min(b, bins - 1)]++;
    }
    const std::size_t cmax = counts.empty() ? 1 : std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end()));
    Frame f{lo, hi, 0, static_cast<double>(cmax) * 1.05};
    SvgWriter w(kW, kH);
    axes(w, f, "ratio", "count", title);
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        const double a = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
        const double c = lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins);
        const double top = f.py(static_cast<double>(counts[b]));
        w.rect(f.px(a), top, f.px(c) - f.px(a), f.py(0) - top, "bar", "#1f4e9c");
    }
    if (lo < 1 && hi > 1) w.line(f.px(1), kTop, f.px(1), kH - kBottom, "unit", "#c0392b", 1);
    return w.finish();
}

}  // namespace wavesel
