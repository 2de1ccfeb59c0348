#include "fanomom/quad.hpp"

#include <cmath>
#include <stdexcept>

#include "fanomom/errors.hpp"

namespace fanomom {

namespace {

/// 16-point Gauss-Legendre abscissas/weights on [-1, 1] (positive half;
/// the rule is symmetric).  Values frozen from an independent high-precision
/// Newton solve of the Legendre roots.
constexpr int kGaussHalf = 8;
constexpr double kGaussX[kGaussHalf] = {
    0.0950125098376374401853,  //
    0.2816035507792589132305,  //
    0.4580167776572273863424,  //
    0.6178762444026437484467,  //
    0.7554044083550030338951,  //
    0.8656312023878317438805,  //
    0.9445750230732325760780,  //
    0.9894009349916499325962,
};
constexpr double kGaussW[kGaussHalf] = {
    0.1894506104550684962854,  //
    0.1826034150449235888667,  //
    0.1691565193950025381893,  //
    0.1495959888165767320815,  //
    0.1246289712555338720525,  //
    0.0951585116824927848099,  //
    0.0622535239386478928628,  //
    0.0271524594117540948518,
};

}  // namespace

double gauss16(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGaussHalf; ++i) {
        const double dx = half * kGaussX[i];
        s += kGaussW[i] * (f(mid - dx) + f(mid + dx));
    }
    return s * half;
}

double gauss16_composite(const std::function<double(double)>& f,
                         const std::vector<double>& breaks) {
    if (breaks.size() < 2)
        throw Error(ErrorCode::BadInput, "composite rule needs >= 2 breakpoints");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += gauss16(f, breaks[i], breaks[i + 1]);
    return s;
}

QuadRule gauss16_rule(const std::vector<double>& breaks) {
    if (breaks.size() < 2)
        throw Error(ErrorCode::BadInput, "composite rule needs >= 2 breakpoints");
    QuadRule r;
    const std::size_t nseg = breaks.size() - 1;
    r.x.reserve(nseg * 2 * kGaussHalf);
    r.w.reserve(nseg * 2 * kGaussHalf);
    for (std::size_t i = 0; i < nseg; ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        const double half = 0.5 * (breaks[i + 1] - breaks[i]);
        // Emit node pairs inner-to-outer; order only affects rounding, and a
        // fixed order keeps results bit-identical run to run.
        for (int j = 0; j < kGaussHalf; ++j) {
            const double dx = half * kGaussX[j];
            r.x.push_back(mid - dx);
            r.w.push_back(half * kGaussW[j]);
            r.x.push_back(mid + dx);
            r.w.push_back(half * kGaussW[j]);
        }
    }
    return r;
}

std::vector<double> uniform_breaks(double a, double b, int n) {
    if (!(a < b) || n < 1)
        throw Error(ErrorCode::BadInput, "uniform_breaks: need a < b, n >= 1");
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * (static_cast<double>(i) / n);
    v.back() = b;
    return v;
}

std::vector<double> clustered_breaks(double a, double b, int n, int end,
                                     double ratio) {
    if (!(a < b) || n < 1 || ratio <= 1.0)
        throw Error(ErrorCode::BadInput, "clustered_breaks: bad arguments");
    // Widths w, w*ratio, ..., scaled so they sum to b - a.
    std::vector<double> widths(static_cast<std::size_t>(n));
    double total = 0.0, w = 1.0;
    for (int i = 0; i < n; ++i, w *= ratio) {
        widths[static_cast<std::size_t>(i)] = w;
        total += w;
    }
    const double scale = (b - a) / total;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n) + 1);
    v.push_back(a);
    for (int i = 0; i < n; ++i) {
        const std::size_t k =
            (end == 0) ? static_cast<std::size_t>(i)
                       : static_cast<std::size_t>(n - 1 - i);
        v.push_back(v.back() + widths[k] * scale);
    }
    v.back() = b;
    return v;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_level) {
    if (!(a < b)) throw Error(ErrorCode::BadInput, "tanh_sinh: need a < b");
    const double half = 0.5 * (b - a);
    // x = mid + half * tanh((pi/2) sinh(u)); truncate |u| where the weight
    // underflows relative to the working precision.
    const double umax = 6.5;
    auto eval = [&](double u, double& x, double& wt) {
        const double su = std::sinh(u);
        const double cu = std::cosh(u);
        const double t = M_PI_2 * su;
        const double sech = 1.0 / std::cosh(t);
        // Distance to the near endpoint, kept positive even where tanh
        // saturates: 1 - tanh|t| = 2 e^{-2|t|} / (1 + e^{-2|t|}).  Evaluating
        // through the distance keeps integrable endpoint singularities
        // finite; the negative exponential never overflows.
        const double e2 = std::exp(-2.0 * std::abs(t));
        const double d = 2.0 * e2 / (1.0 + e2);
        x = u >= 0.0 ? b - half * d : a + half * d;
        wt = half * M_PI_2 * cu * sech * sech;
    };
    double h = 1.0;
    double x, wt;
    eval(0.0, x, wt);
    double sum = wt * f(x);
    for (int k = 1;; ++k) {
        const double u = h * k;
        if (u > umax) break;
        eval(u, x, wt);
        if (wt > 0.0 && x > a && x < b) sum += wt * f(x);
        eval(-u, x, wt);
        if (wt > 0.0 && x > a && x < b) sum += wt * f(x);
    }
    double result = h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        // Add the new (odd-index) nodes of the refined lattice.
        double add = 0.0;
        for (int k = 1;; k += 2) {
            const double u = h * k;
            if (u > umax) break;
            eval(u, x, wt);
            if (wt > 0.0 && x > a && x < b) add += wt * f(x);
            eval(-u, x, wt);
            if (wt > 0.0 && x > a && x < b) add += wt * f(x);
        }
        const double refined = 0.5 * result + h * add;
        const double err = std::abs(refined - result);
        result = refined;
        if (err <= rel_tol * (std::abs(refined) + 1e-300)) return result;
    }
    throw Error(ErrorCode::QuadratureFailure,
                "tanh_sinh: no convergence within level budget");
}

}  // namespace fanomom
