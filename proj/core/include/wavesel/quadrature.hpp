#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wavesel {

/// Size of the fixed grid used for true-measure integrals and sup-norms.
inline constexpr std::size_t kGridSize = std::size_t{1} << 14;

/// Midpoint grid (i + 1/2) / kGridSize, i = 0..kGridSize-1.
const std::vector<double>& quadrature_grid();

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                        int max_depth = 48);

}  // namespace wavesel
