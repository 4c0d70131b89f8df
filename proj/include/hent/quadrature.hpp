#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hent {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration over
/// [breakpoints.front(), breakpoints.back()]; every consecutive pair of
/// breakpoints seeds one initial panel. The panel with the largest error
/// estimate is bisected until the summed estimate is <= abs_tol.
/// Throws NumericalError if max_intervals is reached first.
QuadratureResult integrate_gk15(const std::function<double(double)>& f,
                                std::span<const double> breakpoints, double abs_tol,
                                std::size_t max_intervals = 200000);

}  // namespace hent
