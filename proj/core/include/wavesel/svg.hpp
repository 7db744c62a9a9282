#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wavesel/selection.hpp"
#include "wavesel/transform.hpp"

namespace wavesel {

enum class PlotKind { RiskCurve, DimensionJump, Coefficients, RatioHistogram };

class UnknownPlotKindError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

PlotKind plot_kind_from_string(const std::string& s);
std::string to_string(PlotKind k);

/// Criterion and empirical risk against dimension, log-log. Non-positive values are skipped.
std::string plot_risk_curve(const SelectionOutcome& outcome);

/// Selected dimension as a function of the penalty constant. Each path segment is one
/// <line class="step">, consecutive segments are joined by a <line class="riser">, and
/// the jump location is drawn as <line class="alpha-hat">.
std::string plot_dimension_jump(const SelectionOutcome& outcome);

/// One stem per coefficient, one row per level; levels past the kept dimension are grey.
std::string plot_coefficients(const CoefficientTree& tree, std::size_t kept_dimension);

std::string plot_ratio_histogram(const std::vector<double>& ratios, const std::string& title);

/// Tiny SVG writer; numbers are written with fixed precision so output is byte-stable.
class SvgWriter {
public:
    SvgWriter(double width, double height);
    void line(double x1, double y1, double x2, double y2, const std::string& cls, const std::string& stroke = "#000",
              double width = 1.0);
    void rect(double x, double y, double w, double h, const std::string& cls, const std::string& fill);
    void circle(double cx, double cy, double r, const std::string& cls, const std::string& fill);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& cls, const std::string& stroke);
    void text(double x, double y, const std::string& s, const std::string& anchor = "middle", double size = 11.0);
    std::string finish();

private:
    std::string body_;
    double width_, height_;
};

}  // namespace wavesel
