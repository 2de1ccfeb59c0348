#include "fanomom/monomial_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "fanomom/deriv.hpp"
#include "fanomom/errors.hpp"
#include "fanomom/fitline.hpp"
#include "fanomom/quad.hpp"

namespace fanomom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Symmetric finite-difference stencils for d^k/dx^k, k = 1..5, as
/// (offset, coefficient) pairs; divide by h^k after summing.  These mirror
/// the callable-based stencils used elsewhere so the grid and evaluator
/// derivative paths agree by construction.
struct StencilRow {
    int arm;
    int offsets[7];
    double coeffs[7];
    int len;
    double scale;
};

const StencilRow kStencils[5] = {
    {1, {-1, 1}, {-0.5, 0.5}, 2, 1.0},
    {1, {-1, 0, 1}, {1.0, -2.0, 1.0}, 3, 1.0},
    {2, {-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}, 4, 1.0},
    {2, {-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}, 5, 1.0},
    {3, {-3, -2, -1, 1, 2, 3}, {-0.5, 2.0, -2.5, 2.5, -2.0, 0.5}, 6, 1.0},
};

/// Pascal rows C(p-1, k-1) for p = 1..5: the frozen coefficient table of the
/// moment recursion m_p = sum_k C(p-1, k-1) kappa_k m_{p-k}.
const double kMomentCoeffs[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

double require_finite_tilt(const MonomialDivisor& d, double gamma,
                           const char* who) {
    const double c = d.critical_tilt_value();
    if (!(gamma < c)) {
        std::ostringstream os;
        os << who << ": tilt " << gamma
           << " is at or beyond the critical tilt " << c;
        throw Error(ErrorCode::DomainError, os.str());
    }
    return c;
}

/// int_{-inf}^{0} e^{rate s} ds by composite Gauss-Legendre with truncation
/// depth 50/rate (relative truncation error ~ 2e-22); the segment count keeps
/// rate * length ~ 0.1 so the per-segment error is far below double rounding.
double tail_exponential_quadrature(double rate) {
    const int segments = 512;
    const double depth = 50.0 / rate;
    const auto breaks = uniform_breaks(-depth, 0.0, segments);
    return gauss16_composite([rate](double s) { return std::exp(rate * s); },
                             breaks);
}

bool zeta_divergent(double z) { return !std::isfinite(z) || z > 1e12; }

}  // namespace

MonomialDivisor::MonomialDivisor(std::vector<Rational> exponents)
    : exponents_(std::move(exponents)) {
    for (const auto& a : exponents_)
        if (!(a > Rational(0)))
            throw Error(ErrorCode::BadInput,
                        "monomial exponents must be positive, got " + a.str());
}

MonomialDivisor MonomialDivisor::parse(const std::string& csv) {
    std::vector<Rational> a;
    std::string item;
    std::istringstream is(csv);
    while (std::getline(is, item, ',')) {
        // Trim surrounding blanks.
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw Error(ErrorCode::BadInput,
                        "empty exponent entry in '" + csv + "'");
        a.push_back(Rational::parse(item.substr(b, e - b + 1)));
    }
    if (a.empty())
        throw Error(ErrorCode::BadInput, "no exponents in '" + csv + "'");
    return MonomialDivisor(std::move(a));
}

Rational MonomialDivisor::max_exponent() const {
    if (exponents_.empty())
        throw Error(ErrorCode::BadInput,
                    "zero potential has no maximal exponent");
    return *std::max_element(exponents_.begin(), exponents_.end());
}

Rational MonomialDivisor::critical_tilt() const {
    return Rational(1) / max_exponent();
}

double MonomialDivisor::critical_tilt_value() const {
    if (exponents_.empty()) return kInf;
    return critical_tilt().to_double();
}

int MonomialDivisor::pole_order() const {
    if (exponents_.empty()) return 0;
    const Rational m = max_exponent();
    int count = 0;
    for (const auto& a : exponents_)
        if (a == m) ++count;
    return count;
}

double monomial_zeta(const MonomialDivisor& d, double gamma) {
    double z = 1.0;
    for (const auto& a : d.exponents()) {
        const double factor = 1.0 - gamma * a.to_double();
        if (factor <= 0.0) return kInf;
        z /= factor;
    }
    return z;
}

double monomial_zeta_quadrature(const MonomialDivisor& d, double gamma) {
    double z = 1.0;
    for (const auto& a : d.exponents()) {
        const double rate = 1.0 - gamma * a.to_double();
        if (rate <= 0.0) return kInf;
        z *= tail_exponential_quadrature(rate);
    }
    return z;
}

std::vector<double> log_derivatives(const MonomialDivisor& d, double gamma,
                                    int order) {
    if (order < 1)
        throw Error(ErrorCode::BadInput, "log_derivatives: order must be >= 1");
    if (order > 5)
        throw Error(ErrorCode::OrderUnsupported,
                    "log_derivatives: order > 5 is not supported");
    require_finite_tilt(d, gamma, "log_derivatives");
    // d^k/dgamma^k of -log(1 - gamma a) = (k-1)! a^k / (1 - gamma a)^k.
    std::vector<double> out(static_cast<std::size_t>(order), 0.0);
    for (const auto& ar : d.exponents()) {
        const double a = ar.to_double();
        const double q = a / (1.0 - gamma * a);
        double fact = 1.0;
        double qk = 1.0;
        for (int k = 1; k <= order; ++k) {
            qk *= q;
            if (k > 1) fact *= static_cast<double>(k - 1);
            out[static_cast<std::size_t>(k - 1)] += fact * qk;
        }
    }
    return out;
}

void validate_profile(const ZetaProfile& p) {
    const std::size_t n = p.gammas.size();
    if (n < 3 || p.Z.size() != n || p.g.size() != n)
        throw Error(ErrorCode::BadInput,
                    "zeta profile needs >= 3 matched (gamma, Z, g) nodes");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p.Z[i] > 0.0) || !std::isfinite(p.Z[i]))
            throw Error(ErrorCode::BadInput,
                        "zeta profile requires positive finite Z");
        if (i + 1 < n && !(p.gammas[i] < p.gammas[i + 1]))
            throw Error(ErrorCode::NonIncreasingNodes,
                        "zeta profile tilts must be strictly increasing");
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = p.gammas[i] - p.gammas[i - 1];
        const double hr = p.gammas[i + 1] - p.gammas[i];
        const double dl = (std::log(p.Z[i]) - std::log(p.Z[i - 1])) / hl;
        const double dr = (std::log(p.Z[i + 1]) - std::log(p.Z[i])) / hr;
        if (2.0 * (dr - dl) / (hl + hr) < -1e-9)
            throw Error(ErrorCode::ConvexityViolated,
                        "zeta profile: log Z is not convex along the grid");
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (p.g[i + 1] < p.g[i] - 1e-9)
            throw Error(ErrorCode::ConvexityViolated,
                        "zeta profile: g must be nondecreasing");
}

ZetaProfile monomial_profile(const MonomialDivisor& d, double lo, double hi,
                             int count) {
    if (!(lo < hi) || count < 3)
        throw Error(ErrorCode::BadInput,
                    "monomial_profile: need lo < hi and >= 3 nodes");
    const double c = d.critical_tilt_value();
    if (!(hi < c))
        throw Error(ErrorCode::BadInput,
                    "monomial_profile: grid must stay below the critical tilt");
    ZetaProfile p;
    p.c_u_hat = c;
    p.m_hat = d.pole_order();
    p.gammas.resize(static_cast<std::size_t>(count));
    p.Z.resize(static_cast<std::size_t>(count));
    p.g.resize(static_cast<std::size_t>(count));
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        const double gamma = (i + 1 == count) ? hi : lo + h * i;
        const auto si = static_cast<std::size_t>(i);
        p.gammas[si] = gamma;
        p.Z[si] = monomial_zeta(d, gamma);
        p.g[si] = log_derivatives(d, gamma, 1)[0];
    }
    validate_profile(p);
    return p;
}

ZetaProfile profile_from_samples(std::vector<double> gammas,
                                 std::vector<double> Z, double c_u_hat) {
    ZetaProfile p;
    p.gammas = std::move(gammas);
    p.Z = std::move(Z);
    p.c_u_hat = c_u_hat;
    const std::size_t n = p.gammas.size();
    if (n < 3 || p.Z.size() != n)
        throw Error(ErrorCode::BadInput,
                    "profile_from_samples: need >= 3 matched samples");
    p.g.resize(n);
    // Centered divided differences of log Z; simple chords at the two ends.
    // For convex data each interior value is a convex combination of the two
    // adjacent chord slopes, so monotonicity of g is inherited exactly.
    std::vector<double> lz(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p.Z[i] > 0.0) || !std::isfinite(p.Z[i]))
            throw Error(ErrorCode::BadInput,
                        "profile_from_samples: Z must be positive and finite");
        lz[i] = std::log(p.Z[i]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = p.gammas[i] - p.gammas[i - 1];
        const double hr = p.gammas[i + 1] - p.gammas[i];
        const double sl = (lz[i] - lz[i - 1]) / hl;
        const double sr = (lz[i + 1] - lz[i]) / hr;
        p.g[i] = (hr * sl + hl * sr) / (hl + hr);
    }
    p.g[0] = (lz[1] - lz[0]) / (p.gammas[1] - p.gammas[0]);
    p.g[n - 1] = (lz[n - 1] - lz[n - 2]) / (p.gammas[n - 1] - p.gammas[n - 2]);
    validate_profile(p);
    return p;
}

std::vector<double> log_derivatives(const ZetaProfile& p, double gamma,
                                    int order) {
    if (order < 1)
        throw Error(ErrorCode::BadInput, "log_derivatives: order must be >= 1");
    if (order > 5)
        throw Error(ErrorCode::OrderUnsupported,
                    "log_derivatives: order > 5 is not supported");
    validate_profile(p);
    const std::size_t n = p.gammas.size();
    const double h = p.gammas[1] - p.gammas[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((p.gammas[i + 1] - p.gammas[i]) - h) > 1e-9 * h)
            throw Error(ErrorCode::BadInput,
                        "log_derivatives: profile grid must be uniform");
    // Locate the node carrying gamma.
    std::size_t idx = n;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(p.gammas[i] - gamma) <= 1e-9 * std::max(1.0, h)) {
            idx = i;
            break;
        }
    if (idx == n)
        throw Error(ErrorCode::BadInput,
                    "log_derivatives: tilt must coincide with a grid node");
    if (std::isfinite(p.c_u_hat) && gamma > p.c_u_hat - 10.0 * h)
        throw Error(ErrorCode::NearPole,
                    "log_derivatives: tilt within 10 grid steps of the "
                    "estimated critical tilt");
    std::vector<double> lz(n);
    for (std::size_t i = 0; i < n; ++i) lz[i] = std::log(p.Z[i]);
    std::vector<double> out(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k) {
        const StencilRow& row = kStencils[k - 1];
        // Strides 1, 2, 4 as far as the grid allows; Neville in (stride h)^2.
        std::vector<double> vals;
        for (int stride : {1, 2, 4}) {
            const long reach = static_cast<long>(row.arm) * stride;
            const long i0 = static_cast<long>(idx);
            if (i0 - reach < 0 || i0 + reach >= static_cast<long>(n)) break;
            double s = 0.0;
            for (int j = 0; j < row.len; ++j)
                s += row.coeffs[j] *
                     lz[static_cast<std::size_t>(i0 + row.offsets[j] * stride)];
            vals.push_back(s / std::pow(h * stride, k));
        }
        if (vals.empty())
            throw Error(ErrorCode::BadInput,
                        "log_derivatives: stencil does not fit in the grid");
        while (vals.size() > 1) {
            // One Neville sweep: step ratio is 2, so the h^2 weight is 4.
            std::vector<double> next(vals.size() - 1);
            double fac = 4.0;
            for (std::size_t j = 0; j + 1 < vals.size(); ++j)
                next[j] = (fac * vals[j] - vals[j + 1]) / (fac - 1.0);
            vals = std::move(next);
        }
        out[static_cast<std::size_t>(k - 1)] = vals[0];
    }
    return out;
}

std::vector<double> log_derivatives(const std::function<double(double)>& log_z,
                                    double gamma, int order, double h0,
                                    int levels) {
    if (order < 1)
        throw Error(ErrorCode::BadInput, "log_derivatives: order must be >= 1");
    if (order > 5)
        throw Error(ErrorCode::OrderUnsupported,
                    "log_derivatives: order > 5 is not supported");
    std::vector<double> out(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k)
        out[static_cast<std::size_t>(k - 1)] =
            richardson_derivative(log_z, gamma, k, h0, levels, 2.0).value;
    return out;
}

double bell_moment(const std::vector<double>& derivs,
                   const std::vector<double>& lower_moments, int p) {
    if (p < 1) throw Error(ErrorCode::BadInput, "bell_moment: p must be >= 1");
    if (p > 5)
        throw Error(ErrorCode::OrderUnsupported,
                    "bell_moment: p > 5 exceeds the frozen coefficient table");
    if (derivs.size() < static_cast<std::size_t>(p))
        throw Error(ErrorCode::BadInput,
                    "bell_moment: need log-partition derivatives up to order p");
    if (lower_moments.size() + 1 < static_cast<std::size_t>(p))
        throw Error(ErrorCode::BadInput,
                    "bell_moment: need lower moments up to order p-1");
    double m = 0.0;
    for (int k = 1; k <= p; ++k) {
        const double kappa = derivs[static_cast<std::size_t>(k - 1)];
        const double lower =
            (p - k == 0) ? 1.0 : lower_moments[static_cast<std::size_t>(p - k - 1)];
        m += kMomentCoeffs[p - 1][k - 1] * kappa * lower;
    }
    return m;
}

double radial_tilted_moment(const RadialPotential& u, double gamma, double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error(ErrorCode::DomainError,
                    "radial_tilted_moment: need p >= 1");
    const auto& phi = u.phi_samples();
    const double max_phi = *std::max_element(phi.begin(), phi.end());
    if (max_phi > 1e-10)
        throw Error(ErrorCode::BadInput,
                    "radial_tilted_moment: potential must satisfy sup u <= 0");
    const ZetaResult zr = zeta_eval(u, gamma);
    if (zr.divergent)
        throw Error(ErrorCode::DivergentZeta,
                    "radial_tilted_moment: tilt integral diverges");
    const ModelGeometry& g = u.geometry();
    const auto& s = g.grid();
    // (-phi)^p e^{-gamma phi} rho0 over the sampling window.  Slightly
    // positive phi (within the normalization tolerance) is clamped so
    // fractional powers stay real.
    const auto weighted = [&](double x) {
        const double ph = u.phi(x);
        const double base = std::max(0.0, -ph);
        return std::pow(base, p) * std::exp(-gamma * ph) * g.rho0(x);
    };
    double num = gauss16_composite(weighted, s);
    // Window tails: phi continues along its end slopes (that is exactly how
    // phi() extrapolates), rho0 keeps its exact closed form, and the decay
    // rates from the tilt evaluation bound the truncation depth.  Two fixed-
    // point rounds size the depth so the remainder, including the polynomial
    // factor, drops below ~1e-13 of the retained part.
    const auto tail_depth = [&p](double rate, double c0, double slope) {
        double depth = 40.0 / rate;
        for (int it = 0; it < 2; ++it)
            depth = (34.0 + p * std::log1p(std::abs(c0) + std::abs(slope) * depth)) /
                    rate;
        return depth;
    };
    {
        const double depth =
            tail_depth(zr.left_rate, u.phi(g.s_min()), u.phi_prime(g.s_min()));
        const auto breaks = uniform_breaks(g.s_min() - depth, g.s_min(), 600);
        num += gauss16_composite(weighted, breaks);
    }
    if (g.kind() == ModelKind::Proj) {
        const double depth =
            tail_depth(zr.right_rate, u.phi(g.s_max()), u.phi_prime(g.s_max()));
        const auto breaks = uniform_breaks(g.s_max(), g.s_max() + depth, 600);
        num += gauss16_composite(weighted, breaks);
    }
    return num / zr.value;
}

MomentBoundSample moment_bound_check(const RadialPotential& u, double gamma,
                                     double p) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw Error(ErrorCode::DomainError,
                    "moment_bound_check: tilt must lie in (0, 1)");
    MomentBoundSample r{};
    r.weight = 1.0 / gamma + 1.0 / (1.0 - gamma);
    r.m1 = radial_tilted_moment(u, gamma, 1.0);
    r.lhs = std::pow(radial_tilted_moment(u, gamma, p), 1.0 / p);
    return r;
}

OpennessRecord openness_bound_check(const MonomialDivisor& d, double gamma,
                                    double A, double B) {
    if (!(A > 0.0) || !(B >= 0.0))
        throw Error(ErrorCode::BadInput,
                    "openness_bound_check: need A > 0 and B >= 0");
    OpennessRecord r;
    r.c_u = d.critical_tilt_value();
    if (!(r.c_u < 1.0)) {
        r.applicable = false;  // typed not-applicable result, not an error
        return r;
    }
    if (!(gamma > 0.0) || !(gamma < r.c_u))
        throw Error(ErrorCode::DomainError,
                    "openness_bound_check: tilt must lie in (0, critical)");
    r.applicable = true;
    r.g = log_derivatives(d, gamma, 1)[0];
    r.rhs = (1.0 / A) / (r.c_u - gamma) -
            B * (1.0 / (gamma * gamma) +
                 1.0 / ((1.0 - r.c_u) * (1.0 - r.c_u)));
    r.margin = r.g - r.rhs;
    r.log_z = std::log(monomial_zeta(d, gamma));
    const double delta = 1.0 - r.c_u;
    const double penalty = 1.0 / gamma + gamma / (delta * delta);
    r.corollary_margin =
        r.log_z + B * penalty + (1.0 / A) * std::log(r.c_u - gamma);
    return r;
}

CorollaryFit fit_corollary_constants(const std::vector<MonomialDivisor>& corpus,
                                     int samples_per_family) {
    if (samples_per_family < 4)
        throw Error(ErrorCode::BadInput,
                    "fit_corollary_constants: need >= 4 samples per family");
    double min_slope = kInf;
    struct Sample {
        double excess_per_log;  // log(1/(c_u - gamma)) / penalty
        double log_z_per_penalty;
        double penalty;
        double log_dist;
        double log_z;
    };
    std::vector<Sample> samples;
    for (const auto& d : corpus) {
        const double c = d.critical_tilt_value();
        if (!(c < 1.0)) continue;  // bound does not apply; skip
        // Near-critical slope of log Z against log(1/(c - gamma)), measured
        // one decade out from the critical tilt.
        const double d1 = 1e-4, d2 = 1e-3;
        const double slope =
            (std::log(monomial_zeta(d, c - d1)) -
             std::log(monomial_zeta(d, c - d2))) /
            (std::log(1.0 / d1) - std::log(1.0 / d2));
        min_slope = std::min(min_slope, slope);
        const double delta = 1.0 - c;
        // Distances log-spaced from 1e-4 below the critical tilt out to 90%
        // of the finite range.
        const double lo = std::log(1e-4), hi = std::log(0.9 * c);
        for (int j = 0; j < samples_per_family; ++j) {
            const double t =
                static_cast<double>(j) / (samples_per_family - 1);
            const double dist = std::exp(lo + (hi - lo) * t);
            const double gamma = c - dist;
            if (!(gamma > 0.0)) continue;
            Sample s{};
            s.log_dist = std::log(1.0 / dist);
            s.log_z = std::log(monomial_zeta(d, gamma));
            s.penalty = 1.0 / gamma + gamma / (delta * delta);
            samples.push_back(s);
        }
    }
    if (!std::isfinite(min_slope) || samples.empty())
        throw Error(ErrorCode::BadInput,
                    "fit_corollary_constants: corpus has no family with "
                    "critical tilt below 1");
    const double inv_a = std::clamp(min_slope, 1.0 / 16.0, 1.0);
    double b = 0.0;
    for (const auto& s : samples)
        b = std::max(b, (inv_a * s.log_dist - s.log_z) / s.penalty);
    return {1.0 / inv_a, b};
}

PoleEstimate estimate_cu(const std::function<double(double)>& zeta, double lo,
                         double hi) {
    if (!(lo < hi))
        throw Error(ErrorCode::BadInput, "estimate_cu: need lo < hi");
    if (zeta_divergent(zeta(lo)))
        throw Error(ErrorCode::PoleNotBracketed,
                    "estimate_cu: already divergent at the interval start");
    PoleEstimate r;
    if (!zeta_divergent(zeta(hi))) {
        r.c_u_hat = kInf;  // no divergence found in the interval
        return r;
    }
    double a = lo, b = hi;
    while (b - a > 1e-6) {
        const double mid = 0.5 * (a + b);
        (zeta_divergent(zeta(mid)) ? b : a) = mid;
    }
    r.c_u_hat = 0.5 * (a + b);
    // Pole order: least-squares slope of log Z against log(1/(c - gamma))
    // over the last decade that the bisection accuracy resolves cleanly.
    std::vector<std::pair<double, double>> pts;
    const double lo_d = 1e-4, hi_d = 1e-3;
    const int count = 12;
    for (int j = 0; j < count; ++j) {
        const double t = static_cast<double>(j) / (count - 1);
        const double dist = lo_d * std::pow(hi_d / lo_d, t);
        const double z = zeta(r.c_u_hat - dist);
        if (zeta_divergent(z) || !(z > 0.0)) continue;
        pts.emplace_back(std::log(1.0 / dist), std::log(z));
    }
    if (pts.size() >= 4) {
        const LineFit fit = least_squares_fit(pts);
        r.slope = fit.slope;
        const double rounded = std::round(fit.slope);
        r.slope_residual = std::abs(fit.slope - rounded);
        if (r.slope_residual < 0.05 && rounded >= 1.0) {
            r.m_hat = static_cast<int>(rounded);
            r.integer_accepted = true;
        }
    }
    return r;
}

}  // namespace fanomom
