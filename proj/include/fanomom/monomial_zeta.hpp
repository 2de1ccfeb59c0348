#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fanomom/radial_model.hpp"
#include "fanomom/rational.hpp"

namespace fanomom {

/// Monomial singularity data u = sum_i a_i log|z_i|^2 on the unit polydisk,
/// with normalized area measure per factor.  The exponents are kept as exact
/// rationals so the critical tilt c_u = 1/max(a_i) and the pole order (the
/// multiplicity of the maximal exponent) are computed without rounding.  An
/// empty exponent list is the zero potential (partition function identically
/// 1, no critical tilt).
class MonomialDivisor {
  public:
    MonomialDivisor() = default;
    explicit MonomialDivisor(std::vector<Rational> exponents);

    /// Comma-separated exponents, each an integer, fraction, or decimal
    /// literal ("3,1", "3/2,1", "0.5,2").
    static MonomialDivisor parse(const std::string& csv);

    const std::vector<Rational>& exponents() const { return exponents_; }
    int dim() const { return static_cast<int>(exponents_.size()); }

    /// Largest exponent (BadInput when empty).
    Rational max_exponent() const;

    /// Critical tilt 1/max(a_i) as an exact rational (BadInput when empty).
    Rational critical_tilt() const;

    /// Critical tilt as a double; +infinity for the zero potential.
    double critical_tilt_value() const;

    /// Multiplicity of the maximal exponent (0 for the zero potential).
    int pole_order() const;

  private:
    std::vector<Rational> exponents_;
};

/// Closed-form partition function prod_i 1/(1 - gamma a_i); returns the
/// +infinity sentinel at and beyond the critical tilt instead of throwing.
double monomial_zeta(const MonomialDivisor& d, double gamma);

/// Independent quadrature of the same quantity: each factor is integrated as
/// int_{-inf}^{0} e^{(1 - gamma a) s} ds in logarithmic coordinates
/// (s = log|z|^2) by a composite Gauss-Legendre rule with rate-adaptive
/// truncation, never using the closed form.  +infinity sentinel at and
/// beyond the critical tilt.
double monomial_zeta_quadrature(const MonomialDivisor& d, double gamma);

/// Exact derivatives d^k/dgamma^k of log Z for k = 1..order:
/// sum_i (k-1)! a_i^k / (1 - gamma a_i)^k.  DomainError at or beyond the
/// critical tilt; OrderUnsupported for order > 5 (shared table limit).
std::vector<double> log_derivatives(const MonomialDivisor& d, double gamma,
                                    int order);

/// Tabulated partition function along an increasing tilt grid, with its
/// log-derivative and (when known) the estimated critical tilt and pole
/// order.  Invariants: log Z convex along the grid and g nondecreasing.
struct ZetaProfile {
    std::vector<double> gammas;
    std::vector<double> Z;
    /// d log Z / dgamma at the same nodes.
    std::vector<double> g;
    /// Estimated critical tilt; +infinity when none is known.
    double c_u_hat = std::numeric_limits<double>::infinity();
    /// Estimated pole order; 0 when none is known.
    int m_hat = 0;
};

/// Checks the profile invariants: matching sizes (>= 3 nodes), strictly
/// increasing tilts, positive finite Z, log Z midpoint-convex (second divided
/// differences >= -1e-9) and g nondecreasing (within 1e-9).  Throws BadInput
/// or ConvexityViolated.
void validate_profile(const ZetaProfile& p);

/// Exact profile of a monomial divisor on a uniform tilt grid in [lo, hi]
/// with `count` nodes; hi must stay below the critical tilt.
ZetaProfile monomial_profile(const MonomialDivisor& d, double lo, double hi,
                             int count);

/// Profile from raw (gamma, Z) samples: g is filled by centered divided
/// differences (one-sided at the ends) and the invariants are checked.
ZetaProfile profile_from_samples(std::vector<double> gammas,
                                 std::vector<double> Z,
                                 double c_u_hat =
                                     std::numeric_limits<double>::infinity());

/// Derivatives 1..order of log Z at a grid node of the profile, by
/// Richardson-extrapolated central differences with strides 1, 2, 4 on the
/// uniform grid.  gamma must coincide with a grid node; NearPole when gamma
/// is within 10 grid steps of the profile's estimated critical tilt;
/// OrderUnsupported for order > 5.
std::vector<double> log_derivatives(const ZetaProfile& p, double gamma,
                                    int order);

/// Derivatives 1..order of a smooth log-partition evaluator at gamma, by
/// Richardson-extrapolated central differences with initial step h0.
std::vector<double> log_derivatives(const std::function<double(double)>& log_z,
                                    double gamma, int order, double h0,
                                    int levels = 3);

/// p-th moment <f^p> of the tilted law from the derivatives 1..p of log Z
/// (the cumulants of f) and the lower moments <f^j>, j < p, via the frozen
/// binomial recursion m_p = sum_k C(p-1, k-1) kappa_k m_{p-k}.
/// OrderUnsupported for p > 5 (table limit), BadInput for short inputs.
double bell_moment(const std::vector<double>& derivs,
                   const std::vector<double>& lower_moments, int p);

/// Moment int (-u)^p dmu under the normalized tilted measure
/// e^{-gamma u} rho0 ds / Z on the radial model, including the closed
/// extension tails beyond the sampling window.  Requires sup u <= 0;
/// DivergentZeta when the tilt integral diverges.
double radial_tilted_moment(const RadialPotential& u, double gamma, double p);

/// One sample of the dimension-free moment inequality: lhs is the p-th
/// moment root, m1 the first moment, and weight the tilt penalty
/// 1/gamma + 1/(1-gamma).  Downstream fitting looks for finite stable
/// (A_p, B_p) with lhs <= A_p m1 + B_p weight over a corpus.
struct MomentBoundSample {
    double lhs;
    double m1;
    double weight;
};

MomentBoundSample moment_bound_check(const RadialPotential& u, double gamma,
                                     double p);

/// Effective-openness check at one tilt: lhs is the exact log-derivative
/// g(gamma), rhs the lower-bound template (1/A)/(c_u - gamma)
/// - B (gamma^{-2} + (1 - c_u)^{-2}), and margin their difference.  The
/// integrated lower bound log Z >= -b (gamma^{-1} + gamma delta^{-2})
/// - (1/A) log(1/(c_u - gamma)) with delta = 1 - c_u and b = B is reported
/// as corollary_margin.  When the critical tilt is >= 1 the check does not
/// apply and a typed not-applicable record is returned instead (no
/// exception).
struct OpennessRecord {
    bool applicable = false;
    double c_u = std::numeric_limits<double>::infinity();
    double g = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double log_z = 0.0;
    double corollary_margin = 0.0;
};

OpennessRecord openness_bound_check(const MonomialDivisor& d, double gamma,
                                    double A = 16.0, double B = 1.0);

/// Constants of the integrated lower bound fitted over a family corpus:
/// 1/A_hat is the smallest clamped near-critical slope of log Z against
/// log(1/(c_u - gamma)) (clamped to [1/16, 1]), and b_hat the smallest
/// penalty coefficient making the bound hold on every sample.
struct CorollaryFit {
    double A_hat;
    double b_hat;
};

CorollaryFit fit_corollary_constants(const std::vector<MonomialDivisor>& corpus,
                                     int samples_per_family = 40);

/// Critical-tilt estimate from an opaque partition-function evaluator:
/// c_u_hat by bisection (to 1e-6) on the finite/divergent boundary, the pole
/// order by a least-squares slope of log Z against log(1/(c_u_hat - gamma))
/// over the last resolvable decade.  integer_accepted is set only when the
/// slope sits within 0.05 of a positive integer.
struct PoleEstimate {
    /// +infinity sentinel when no divergence was found in the interval.
    double c_u_hat;
    int m_hat = 0;
    double slope = 0.0;
    double slope_residual = 0.0;
    bool integer_accepted = false;
};

/// PoleNotBracketed when the evaluator already diverges at lo; the
/// +infinity sentinel (not an error) when it is still finite at hi.
PoleEstimate estimate_cu(const std::function<double(double)>& zeta, double lo,
                         double hi);

}  // namespace fanomom
