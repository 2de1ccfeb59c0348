#pragma once

#include <functional>
#include <vector>

namespace fanomom {

/// Nodes/weights of a quadrature rule instantiated on concrete intervals.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;

    template <class F>
    double apply(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

/// 16-point Gauss-Legendre on [a, b].  Exact through degree 31; for analytic
/// integrands a composite rule over a few hundred segments reaches machine
/// accuracy.
double gauss16(const std::function<double(double)>& f, double a, double b);

/// Composite 16-point Gauss-Legendre over consecutive breakpoints.
double gauss16_composite(const std::function<double(double)>& f,
                         const std::vector<double>& breaks);

/// Materialized composite rule (for kernels that reuse the same nodes many
/// times, e.g. the fiber integrals of a t-grid sweep).
QuadRule gauss16_rule(const std::vector<double>& breaks);

/// Uniform breakpoints a = b_0 < ... < b_n = b.
std::vector<double> uniform_breaks(double a, double b, int n);

/// Breakpoints geometrically clustered toward `end` (0 = left, 1 = right):
/// segment widths grow away from the clustered end by `ratio`.
std::vector<double> clustered_breaks(double a, double b, int n, int end,
                                     double ratio = 1.12);

/// tanh-sinh (double-exponential) quadrature on (a, b); handles integrable
/// endpoint singularities such as x^{-gamma}.  Levels are refined until the
/// last refinement changes the result by less than rel_tol (QuadratureFailure
/// if max_level is exhausted without convergence).
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_level = 12);

}  // namespace fanomom
