#pragma once

#include <vector>

#include "fanomom/grid_measure.hpp"
#include "fanomom/radial_model.hpp"

namespace fanomom {

/// Uniform t-grid specification for the lifted distribution profile.
struct TGrid {
    double t_min;
    double t_max;
    int nodes;

    /// Window adapted to a normalized potential: the profile V equals its
    /// limit 1/2 to double precision beyond t = 25, and decays at exact
    /// exponential rate 1 below (min phi) - 16, so both off-window tails of
    /// any Laplace integral complete analytically.  Node count targets a
    /// spacing of 0.08, clamped to [4000, 16000].
    static TGrid auto_for(const RadialPotential& u);
};

/// Profile of the lifted volume: V(t) = int F(t - phi(s)) rho0(s) ds with
/// F(tau) = (1 - e^{-e^tau})/2, the mass the fiber weight e^{-r^2} r dr
/// accumulates below radius e^{tau/2}.  V is the distribution function of the
/// lifted potential's sublevel volumes; the lifted measure nu0 carries V
/// itself as a density.
double lift_profile(const RadialPotential& u, double t);

/// The measure nu0 = V(t) dt on the given grid.  Requires sup phi <= 0
/// (normalized potential); V is checked to be nondecreasing within 1e-12,
/// violations certify the grid as too coarse.
GridMeasure nu0(const RadialPotential& u, const TGrid& grid);

/// Prefactor G0(gamma) = 2 gamma / Gamma(1 - gamma) for gamma in [0, 1).
double G0(double gamma);

/// Tilted-Gaussian log-moment constant
///   C_gamma = int e^{-x} |log x| x^{-gamma} dx / int e^{-x} x^{-gamma} dx
/// on (0, infinity) (the radial integrals after x = r^2), for gamma in (0,1).
/// The quadrature denominator is cross-checked against Gamma(1 - gamma).
double C_gamma(double gamma);

/// Both sides of the lift factorization and the first-moment bound at a
/// fixed rate: lhs = Z_u(gamma), rhs = G0(gamma) * int e^{-gamma t} V(t) dt,
/// plus int |t| dnu_gamma for the tilted normalized lift against
/// g(gamma) + 1/gamma + C_gamma where g = d log Z / dgamma.
struct LiftReport {
    double gamma;
    double lhs;
    double rhs;
    double rel_error;
    bool nu0_logconcave;
    double first_moment_lhs;
    double first_moment_rhs;
    bool success;
};

/// Runs the full lift pipeline at one rate.  Requires gamma in (0,1), a
/// normalized potential, and a finite zeta; success means
/// rel_error <= tol and first_moment_lhs <= first_moment_rhs + tol.
LiftReport verify_factorization(const RadialPotential& u, double gamma,
                                double tol);

/// Discrete report on chi(v) = -log int_{s < -v} e^{-(e^s - s)} ds
/// (closed form -log(-expm1(-e^{-v}))): convexity, slope range, and the
/// slope at the right end of the grid (which approaches 1).
struct ChiReport {
    double min_second_difference;
    double min_slope;
    double max_slope;
    double slope_at_end;
};
ChiReport chi_check(const std::vector<double>& v_grid);

}  // namespace fanomom
