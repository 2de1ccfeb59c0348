#include "fanomom/deriv.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fanomom/errors.hpp"

namespace fanomom {

double central_stencil(const std::function<double(double)>& f, double x,
                       int order, double h) {
    if (h <= 0.0) throw Error(ErrorCode::BadInput, "central_stencil: h <= 0");
    switch (order) {
        case 1:
            return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2:
            return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) -
                    f(x - 2 * h)) /
                   (2.0 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) -
                    4.0 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        case 5:
            return (f(x + 3 * h) - 4.0 * f(x + 2 * h) + 5.0 * f(x + h) -
                    5.0 * f(x - h) + 4.0 * f(x - 2 * h) - f(x - 3 * h)) /
                   (2.0 * h * h * h * h * h);
        default:
            throw Error(ErrorCode::BadInput,
                        "central_stencil: order must be 1..5");
    }
}

DerivResult richardson_derivative(const std::function<double(double)>& f,
                                  double x, int order, double h0, int levels,
                                  double ratio) {
    if (h0 <= 0.0 || levels < 1 || ratio <= 1.0)
        throw Error(ErrorCode::BadInput, "richardson_derivative: bad arguments");
    const double r2 = ratio * ratio;
    // tab[i][j]: i-th step size, extrapolation order j (in powers of h^2).
    std::vector<std::vector<double>> tab(
        static_cast<std::size_t>(levels),
        std::vector<double>(static_cast<std::size_t>(levels), 0.0));
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_err = std::numeric_limits<double>::infinity();
    double h = h0;
    for (int i = 0; i < levels; ++i) {
        const auto si = static_cast<std::size_t>(i);
        tab[si][0] = central_stencil(f, x, order, h);
        double fac = r2;
        for (int j = 1; j <= i; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            tab[si][sj] =
                (tab[si][sj - 1] * fac - tab[si - 1][sj - 1]) / (fac - 1.0);
            fac *= r2;
            // Discrepancy against both parents bounds the extrapolation error.
            const double err =
                std::max(std::abs(tab[si][sj] - tab[si][sj - 1]),
                         std::abs(tab[si][sj] - tab[si - 1][sj - 1]));
            if (err <= best_err) {
                best_err = err;
                best = tab[si][sj];
            }
        }
        if (i > 0 &&
            std::abs(tab[si][si] - tab[si - 1][si - 1]) > 2.0 * best_err &&
            std::isfinite(best))
            break;  // rounding noise dominates; further refinement hurts
        h /= ratio;
    }
    if (!std::isfinite(best)) {
        // Single-level call: no tableau discrepancy available.
        best = tab[0][0];
        best_err = std::numeric_limits<double>::quiet_NaN();
    }
    return {best, best_err};
}

}  // namespace fanomom
