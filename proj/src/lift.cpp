#include "fanomom/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanomom/deriv.hpp"
#include "fanomom/errors.hpp"
#include "fanomom/quad.hpp"

namespace fanomom {

namespace {

/// Mass the fiber weight e^{-r^2} r dr accumulates below radius e^{tau/2}:
/// F(tau) = (1 - e^{-e^tau})/2, increasing from 0 to 1/2.
double fiber_mass(double tau) {
    if (tau > 36.0) return 0.5;  // e^{-e^tau} underflows past here
    return -std::expm1(-std::exp(tau)) * 0.5;
}

/// Precomputed s-quadrature of the fiber integral: V(t) reduces to one sweep
/// of F evaluations against fixed weights w_k rho0(s_k), plus the exact
/// off-window reference masses attached at the boundary values of phi.
struct FiberCache {
    std::vector<double> phi;
    std::vector<double> wrho;
    double mass_lo, mass_hi;
    double phi_lo, phi_hi;

    explicit FiberCache(const RadialPotential& u) {
        const ModelGeometry& g = u.geometry();
        const auto& s = g.grid();
        const double h = s[1] - s[0];
        const std::size_t stride = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(0.2 / h)));
        std::vector<double> breaks;
        for (std::size_t i = 0; i < s.size(); i += stride)
            breaks.push_back(s[i]);
        if (breaks.back() != s.back()) breaks.push_back(s.back());
        const QuadRule rule = gauss16_rule(breaks);
        phi.resize(rule.x.size());
        wrho.resize(rule.x.size());
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
            phi[k] = u.phi(rule.x[k]);
            wrho[k] = rule.w[k] * g.rho0(rule.x[k]);
        }
        mass_lo = g.rho0_mass_below(g.s_min());
        mass_hi = g.rho0_mass_above(g.s_max());
        phi_lo = u.phi(g.s_min());
        phi_hi = u.phi(g.s_max());
    }

    double V(double t) const {
        double v = mass_lo * fiber_mass(t - phi_lo) +
                   mass_hi * fiber_mass(t - phi_hi);
        for (std::size_t k = 0; k < phi.size(); ++k)
            v += wrho[k] * fiber_mass(t - phi[k]);
        return v;
    }
};

void require_normalized(const RadialPotential& u) {
    const auto& phi = u.phi_samples();
    if (*std::max_element(phi.begin(), phi.end()) > 1e-10)
        throw Error(ErrorCode::BadInput,
                    "lift requires a normalized potential (sup phi <= 0)");
}

}  // namespace

TGrid TGrid::auto_for(const RadialPotential& u) {
    const auto& phi = u.phi_samples();
    const double min_phi = *std::min_element(phi.begin(), phi.end());
    TGrid g{};
    g.t_min = min_phi - 16.0;
    g.t_max = 25.0;
    const double span = g.t_max - g.t_min;
    g.nodes = static_cast<int>(
        std::clamp(std::ceil(span / 0.08) + 1.0, 4000.0, 16000.0));
    return g;
}

double lift_profile(const RadialPotential& u, double t) {
    return FiberCache(u).V(t);
}

GridMeasure nu0(const RadialPotential& u, const TGrid& grid) {
    require_normalized(u);
    if (!(grid.t_min < grid.t_max) || grid.nodes < 16)
        throw Error(ErrorCode::BadInput, "bad t-window for the lift profile");
    const FiberCache cache(u);
    const std::vector<double> t =
        uniform_breaks(grid.t_min, grid.t_max, grid.nodes - 1);
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = cache.V(t[i]);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (v[i + 1] < v[i] - 1e-12)
            throw Error(ErrorCode::GridTooCoarse,
                        "lift profile fails monotonicity near t = " +
                            std::to_string(t[i]));
    return GridMeasure(t, std::move(v));
}

double G0(double gamma) {
    if (gamma < 0.0 || gamma >= 1.0)
        throw Error(ErrorCode::DomainError, "G0 requires gamma in [0, 1)");
    return 2.0 * gamma * std::exp(-std::lgamma(1.0 - gamma));
}

double C_gamma(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw Error(ErrorCode::DomainError, "C_gamma requires gamma in (0, 1)");
    // Split both integrals at the kink of |log x|.  On (0,1) substitute
    // y = x^{1-gamma}, which absorbs the x^{-gamma} singularity entirely:
    // the integrands become bounded for every gamma in (0,1).  The upper
    // cutoff 45 is far beyond the e^{-x} scale.
    const double m = 1.0 / (1.0 - gamma);
    const auto core = [m](double y) { return std::exp(-std::pow(y, m)); };
    const auto num_hi = [gamma](double x) {
        return std::exp(-x) * std::log(x) * std::pow(x, -gamma);
    };
    const auto den_hi = [gamma](double x) {
        return std::exp(-x) * std::pow(x, -gamma);
    };
    const double numerator =
        m * m * tanh_sinh([&](double y) { return -std::log(y) * core(y); },
                          0.0, 1.0, 1e-12) +
        tanh_sinh(num_hi, 1.0, 45.0, 1e-12);
    const double denominator = m * tanh_sinh(core, 0.0, 1.0, 1e-12) +
                               tanh_sinh(den_hi, 1.0, 45.0, 1e-12);
    const double exact = std::exp(std::lgamma(1.0 - gamma));
    if (std::abs(denominator - exact) > 1e-10 * exact)
        throw Error(ErrorCode::QuadratureFailure,
                    "C_gamma denominator fails the Gamma cross-check");
    return numerator / denominator;
}

LiftReport verify_factorization(const RadialPotential& u, double gamma,
                                double tol) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw Error(ErrorCode::DomainError,
                    "factorization requires gamma in (0, 1)");
    require_normalized(u);
    const ZetaResult z = zeta_eval(u, gamma);
    if (z.divergent)
        throw Error(ErrorCode::DivergentZeta,
                    "zeta diverges at this rate; no factorization to check");

    const FiberCache cache(u);
    const TGrid grid = TGrid::auto_for(u);
    const int nseg =
        static_cast<int>(std::ceil((grid.t_max - grid.t_min) / 0.4));
    const QuadRule rule =
        gauss16_rule(uniform_breaks(grid.t_min, grid.t_max, nseg));
    double lap = 0.0, mom = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        const double t = rule.x[k];
        const double w = rule.w[k] * std::exp(-gamma * t) * cache.V(t);
        lap += w;
        mom += std::abs(t) * w;
    }
    // Off-window completions: V = V(t_min) e^{t - t_min} below the window to
    // relative accuracy e^{-16}, and V = 1/2 exactly (in doubles) above it.
    const double v_lo = cache.V(grid.t_min);
    const double a = 1.0 - gamma;
    const double lap_left = v_lo * std::exp(-gamma * grid.t_min) / a;
    const double lap_right = std::exp(-gamma * grid.t_max) / (2.0 * gamma);
    const double mom_left = v_lo * std::exp(-gamma * grid.t_min) *
                            (1.0 - a * grid.t_min) / (a * a);
    const double mom_right = 0.5 * std::exp(-gamma * grid.t_max) *
                             (grid.t_max + 1.0 / gamma) / gamma;
    const double lap_full = lap + lap_left + lap_right;
    const double mom_full = mom + mom_left + mom_right;

    LiftReport rep{};
    rep.gamma = gamma;
    rep.lhs = z.value;
    rep.rhs = G0(gamma) * lap_full;
    rep.rel_error = std::abs(rep.lhs - rep.rhs) / std::abs(rep.lhs);
    rep.nu0_logconcave = nu0(u, grid).is_log_concave();
    rep.first_moment_lhs = mom_full / lap_full;

    // g(gamma) = d log Z / dgamma; step sizes keep every evaluation strictly
    // inside (0, 1) and below the zeta pole when the left slope creates one.
    const ModelGeometry& geom = u.geometry();
    double pole_margin = std::numeric_limits<double>::infinity();
    const double a_left = u.phi_prime_samples().front();
    if (geom.kind() == ModelKind::Ball && a_left > 0.0)
        pole_margin = geom.dim() / a_left - gamma;
    const double h0 = std::min(
        {0.02, 0.2 * gamma, 0.2 * (1.0 - gamma), 0.2 * pole_margin});
    const double g_val =
        richardson_derivative(
            [&](double g) { return std::log(zeta_eval(u, g).value); }, gamma,
            1, h0, 3, 2.0)
            .value;
    rep.first_moment_rhs = g_val + 1.0 / gamma + C_gamma(gamma);
    rep.success = rep.rel_error <= tol &&
                  rep.first_moment_lhs <= rep.first_moment_rhs + tol;
    return rep;
}

ChiReport chi_check(const std::vector<double>& v_grid) {
    if (v_grid.size() < 3)
        throw Error(ErrorCode::BadInput, "chi grid needs at least 3 nodes");
    for (std::size_t i = 0; i + 1 < v_grid.size(); ++i)
        if (!(v_grid[i] < v_grid[i + 1]))
            throw Error(ErrorCode::BadInput, "chi grid must be increasing");
    // chi(v) = -log int_{s<-v} e^{-(e^s - s)} ds = -log(-expm1(-e^{-v})).
    const auto chi = [](double v) {
        return -std::log(-std::expm1(-std::exp(-v)));
    };
    std::vector<double> val(v_grid.size());
    for (std::size_t i = 0; i < v_grid.size(); ++i) val[i] = chi(v_grid[i]);
    ChiReport rep{};
    rep.min_second_difference = std::numeric_limits<double>::infinity();
    rep.min_slope = std::numeric_limits<double>::infinity();
    rep.max_slope = -std::numeric_limits<double>::infinity();
    double prev_slope = 0.0;
    for (std::size_t i = 0; i + 1 < v_grid.size(); ++i) {
        const double hl = v_grid[i + 1] - v_grid[i];
        const double slope = (val[i + 1] - val[i]) / hl;
        rep.min_slope = std::min(rep.min_slope, slope);
        rep.max_slope = std::max(rep.max_slope, slope);
        if (i > 0) {
            const double hr = v_grid[i] - v_grid[i - 1];
            rep.min_second_difference =
                std::min(rep.min_second_difference,
                         2.0 * (slope - prev_slope) / (hl + hr));
        }
        prev_slope = slope;
    }
    rep.slope_at_end = prev_slope;
    return rep;
}

}  // namespace fanomom
