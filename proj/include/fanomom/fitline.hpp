#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fanomom/errors.hpp"

namespace fanomom {

/// A line y = slope * x + intercept.
struct LineFit {
    double slope;
    double intercept;

    double at(double x) const { return slope * x + intercept; }
};

/// Deterministic upper support line of a point cloud: the slope is taken from
/// the upper-convex-hull edge whose x-range contains the mean abscissa (a
/// discrete "tangent at the mean"), and the intercept is then lifted to the
/// smallest value with y_i <= slope * x_i + intercept for every point.  Unlike
/// least squares this produces a genuine one-sided bound, and unlike an LP fit
/// it has no tie-breaking ambiguity.
inline LineFit upper_support_fit(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2)
        throw Error(ErrorCode::BadInput, "upper_support_fit: need >= 2 points");
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i].first == pts[i + 1].first)
            throw Error(ErrorCode::BadInput,
                        "upper_support_fit: duplicate abscissa");
    // Monotone-chain upper hull, left to right.
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // Keep b only if it is strictly above chord a->p.
            const double cross = (b.first - a.first) * (p.second - a.second) -
                                 (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    double mean_x = 0.0;
    for (const auto& p : pts) mean_x += p.first;
    mean_x /= static_cast<double>(pts.size());
    // Hull edge whose x-range contains the mean abscissa.
    std::size_t e = 0;
    while (e + 2 < hull.size() && hull[e + 1].first < mean_x) ++e;
    double slope;
    if (hull.size() == 1) {
        slope = 0.0;
    } else {
        slope = (hull[e + 1].second - hull[e].second) /
                (hull[e + 1].first - hull[e].first);
    }
    double intercept = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts)
        intercept = std::max(intercept, p.second - slope * p.first);
    return {slope, intercept};
}

/// Ordinary least-squares line through a point cloud (>= 2 distinct
/// abscissae).  Used where a slope is the quantity of interest, e.g. fitting
/// a pole order or a blow-up exponent from log-log samples.
inline LineFit least_squares_fit(
    const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2)
        throw Error(ErrorCode::BadInput, "least_squares_fit: need >= 2 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p.first;
        sy += p.second;
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.first - mx) * (p.first - mx);
        sxy += (p.first - mx) * (p.second - my);
    }
    if (sxx <= 0.0)
        throw Error(ErrorCode::BadInput,
                    "least_squares_fit: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

/// Largest violation max_i (y_i - line(x_i)); <= 0 when the line dominates.
inline double max_residual_above(
    const std::vector<std::pair<double, double>>& pts, const LineFit& line) {
    double r = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) r = std::max(r, p.second - line.at(p.first));
    return r;
}

}  // namespace fanomom
