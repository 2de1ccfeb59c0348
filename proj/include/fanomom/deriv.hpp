#pragma once

#include <functional>

namespace fanomom {

/// Result of a Richardson-extrapolated derivative: the extrapolated value and
/// the tableau's internal discrepancy, a usable error estimate.
struct DerivResult {
    double value;
    double error_estimate;
};

/// Single symmetric finite-difference stencil for d^k f / dx^k, k = 1..5.
/// Truncation error is O(h^2) for every k (symmetric stencils cancel the odd
/// powers), which is what makes Richardson extrapolation in h^2 applicable.
double central_stencil(const std::function<double(double)>& f, double x,
                       int order, double h);

/// Neville-tableau Richardson extrapolation of the central stencil over the
/// step sequence h0, h0/ratio, h0/ratio^2, ...  Returns the tableau entry with
/// the smallest internal discrepancy; stops early if the error grows, which
/// signals that rounding noise has taken over.
DerivResult richardson_derivative(const std::function<double(double)>& f,
                                  double x, int order, double h0,
                                  int levels = 4, double ratio = 1.6);

}  // namespace fanomom
