#include "fanomom/radial_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanomom/deriv.hpp"
#include "fanomom/errors.hpp"
#include "fanomom/quad.hpp"

namespace fanomom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConvexTol = 1e-10;

double sigmoid(double s) {
    // e^s / (1 + e^s), stable on both sides.
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

}  // namespace

ModelGeometry::ModelGeometry(ModelKind k, int n, double lo, double hi,
                             int segments)
    : kind_(k), n_(n) {
    if (n < 1) throw Error(ErrorCode::BadInput, "dimension must be >= 1");
    if (!(lo < hi) || segments < 8)
        throw Error(ErrorCode::BadInput, "bad s-window or segment count");
    s_ = uniform_breaks(lo, hi, segments);
}

ModelGeometry ModelGeometry::ball(int n, double s_min, int segments) {
    if (!(s_min < 0.0))
        throw Error(ErrorCode::BadInput, "ball window must start below 0");
    return ModelGeometry(ModelKind::Ball, n, s_min, 0.0, segments);
}

ModelGeometry ModelGeometry::proj(int n, double s_min, double s_max,
                                  int segments) {
    return ModelGeometry(ModelKind::Proj, n, s_min, s_max, segments);
}

double ModelGeometry::h0(double s) const {
    if (kind_ == ModelKind::Ball) return 0.0;
    // log(1 + e^s) without overflow for large s.
    return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

double ModelGeometry::h0_prime(double s) const {
    return kind_ == ModelKind::Ball ? 0.0 : sigmoid(s);
}

double ModelGeometry::rho0(double s) const {
    if (kind_ == ModelKind::Ball) return n_ * std::exp(n_ * s);
    const double sg = sigmoid(s);
    return n_ * std::pow(sg, n_) * (1.0 - sg);
}

double ModelGeometry::rho0_mass_below(double s) const {
    if (kind_ == ModelKind::Ball) return std::exp(n_ * std::min(s, 0.0));
    return std::pow(sigmoid(s), n_);
}

double ModelGeometry::rho0_mass_above(double s) const {
    if (kind_ == ModelKind::Ball) return s >= 0.0 ? 0.0 : 1.0 - std::exp(n_ * s);
    return 1.0 - std::pow(sigmoid(s), n_);
}

double ModelGeometry::reference_mass() const {
    const double inner =
        gauss16_composite([this](double s) { return rho0(s); }, s_);
    return inner + rho0_mass_below(s_.front()) + rho0_mass_above(s_.back());
}

RadialPotential::RadialPotential(ModelGeometry geometry,
                                 std::function<double(double)> phi,
                                 std::function<double(double)> phi_prime)
    : geom_(std::make_shared<ModelGeometry>(std::move(geometry))),
      phi_fn_(std::move(phi)),
      phip_fn_(std::move(phi_prime)) {
    if (!phi_fn_) throw Error(ErrorCode::BadInput, "null potential callable");
    sample_and_validate();
}

RadialPotential::RadialPotential(ModelGeometry geometry,
                                 std::vector<double> phi_samples,
                                 std::vector<double> phi_prime_samples)
    : geom_(std::make_shared<ModelGeometry>(std::move(geometry))),
      phi_(std::move(phi_samples)),
      phip_(std::move(phi_prime_samples)) {
    if (phi_.size() != geom_->grid().size() || phip_.size() != phi_.size())
        throw Error(ErrorCode::BadInput,
                    "potential samples must match the geometry grid");
    sample_and_validate();
}

void RadialPotential::sample_and_validate() {
    const auto& s = geom_->grid();
    if (phi_fn_) {
        phi_.resize(s.size());
        phip_.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            phi_[i] = phi_fn_(s[i]);
            phip_[i] = phip_fn_
                           ? phip_fn_(s[i])
                           : richardson_derivative(phi_fn_, s[i], 1, 1e-3, 4, 2.0)
                                 .value;
        }
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!std::isfinite(phi_[i]) || !std::isfinite(phip_[i]))
            throw Error(ErrorCode::BadInput, "non-finite potential sample");
    // Admissibility: h = h0 + phi convex with nondecreasing derivative,
    // kind-specific derivative range.
    const int n = geom_->dim();
    (void)n;
    double prev_slope = -kInf;
    double prev_hp = -kInf;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double hp = geom_->h0_prime(s[i]) + phip_[i];
        if (hp < prev_hp - kConvexTol)
            throw Error(ErrorCode::ConvexityViolated,
                        "h' decreases near s = " + std::to_string(s[i]));
        prev_hp = hp;
        if (geom_->kind() == ModelKind::Proj) {
            if (hp < -1e-9 || hp > 1.0 + 1e-9)
                throw Error(ErrorCode::ConvexityViolated,
                            "h' leaves [0,1] near s = " + std::to_string(s[i]));
        } else if (phip_[i] < -1e-9) {
            throw Error(ErrorCode::ConvexityViolated,
                        "phi' negative near s = " + std::to_string(s[i]));
        }
        if (i + 1 < s.size()) {
            const double slope = (geom_->h0(s[i + 1]) + phi_[i + 1] -
                                  geom_->h0(s[i]) - phi_[i]) /
                                 (s[i + 1] - s[i]);
            if (slope < prev_slope - kConvexTol)
                throw Error(ErrorCode::ConvexityViolated,
                            "h loses convexity near s = " + std::to_string(s[i]));
            prev_slope = slope;
        }
    }
}

double RadialPotential::phi(double s) const {
    const auto& x = geom_->grid();
    if (s <= x.front()) return phi_.front() + phip_.front() * (s - x.front());
    if (s >= x.back()) return phi_.back() + phip_.back() * (s - x.back());
    if (phi_fn_) return phi_fn_(s);
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (s - x[i - 1]) / (x[i] - x[i - 1]);
    return phi_[i - 1] + (phi_[i] - phi_[i - 1]) * w;
}

double RadialPotential::phi_prime(double s) const {
    const auto& x = geom_->grid();
    if (s <= x.front()) return phip_.front();
    if (s >= x.back()) return phip_.back();
    if (phip_fn_) return phip_fn_(s);
    // Off-node fallback for callables without a supplied derivative: a single
    // central difference (the node samples got the full extrapolated version).
    if (phi_fn_) return central_stencil(phi_fn_, s, 1, 1e-4);
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (s - x[i - 1]) / (x[i] - x[i - 1]);
    return phip_[i - 1] + (phip_[i] - phip_[i - 1]) * w;
}

bool RadialPotential::is_normalized() const {
    const double top = *std::max_element(phi_.begin(), phi_.end());
    return std::abs(top) <= 1e-10;
}

RadialPotential RadialPotential::shifted(double c) const {
    RadialPotential out(*this);
    if (out.phi_fn_) {
        const auto base = out.phi_fn_;
        out.phi_fn_ = [base, c](double s) { return base(s) + c; };
    }
    for (double& v : out.phi_) v += c;
    return out;
}

RadialPotential RadialPotential::normalized() const {
    return shifted(-*std::max_element(phi_.begin(), phi_.end()));
}

namespace {

/// Distribution function F_j(s) = h'(s)^j h0'(s)^{n-j} of a mixed measure;
/// clamps h' at 0 against rounding at the far tail.
double mixed_distribution(const RadialPotential& u, int j, double s) {
    const ModelGeometry& g = u.geometry();
    if (j == 0) return std::pow(g.h0_prime(s), g.dim());
    const double hp = std::max(u.h_prime(s), 0.0);
    return std::pow(hp, j) * std::pow(g.h0_prime(s), g.dim() - j);
}

/// int w dmu_j over the represented window, where mu_j is the mixed measure
/// dF_j plus the boundary atom F_j(s_min) at s_min.  By parts this equals
/// w(s_max) F_j(s_max) - int F_j(s) w'(s) ds, which needs no differentiation
/// of F_j, so callable potentials are integrated to quadrature accuracy.
double integrate_mixed(const RadialPotential& u, int j,
                       const std::function<double(double)>& w,
                       const std::function<double(double)>& wprime) {
    const auto& s = u.geometry().grid();
    const double boundary = w(s.back()) * mixed_distribution(u, j, s.back());
    const double main = gauss16_composite(
        [&](double x) { return mixed_distribution(u, j, x) * wprime(x); }, s);
    return boundary - main;
}

}  // namespace

GridMeasure mixed_pushforward(const RadialPotential& u, int j) {
    const ModelGeometry& g = u.geometry();
    if (j < 0 || j > g.dim())
        throw Error(ErrorCode::BadInput, "mixed index out of range");
    const auto& s = g.grid();
    const std::size_t N = s.size();
    const double h = s[1] - s[0];
    std::vector<double> F(N);
    for (std::size_t i = 0; i < N; ++i) F[i] = mixed_distribution(u, j, s[i]);
    std::vector<double> d(N, 0.0);
    // Interior: fourth-order central differences of the distribution
    // function; edges fall back to second order (their weight in the mass is
    // negligible and the scale below restores exact total mass).
    for (std::size_t i = 2; i + 2 < N; ++i)
        d[i] = (-F[i + 2] + 8.0 * F[i + 1] - 8.0 * F[i - 1] + F[i - 2]) /
               (12.0 * h);
    if (N >= 3) {
        d[0] = (-3.0 * F[0] + 4.0 * F[1] - F[2]) / (2.0 * h);
        d[1] = (F[2] - F[0]) / (2.0 * h);
        d[N - 2] = (F[N - 1] - F[N - 3]) / (2.0 * h);
        d[N - 1] = (3.0 * F[N - 1] - 4.0 * F[N - 2] + F[N - 3]) / (2.0 * h);
    }
    for (double& v : d) v = std::max(v, 0.0);
    // Scale so the represented density mass is exactly F(s_max) - F(s_min).
    const double target = F.back() - F.front();
    double trapz = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i)
        trapz += 0.5 * (d[i] + d[i + 1]) * (s[i + 1] - s[i]);
    if (target > 0.0 && trapz > 0.0) {
        const double scale = target / trapz;
        for (double& v : d) v *= scale;
    } else {
        std::fill(d.begin(), d.end(), 0.0);
    }
    std::vector<Atom> atoms;
    if (F.front() > 0.0) atoms.push_back({s.front(), F.front()});
    return GridMeasure(s, std::move(d), std::move(atoms));
}

GridMeasure ma_pushforward(const RadialPotential& u) {
    return mixed_pushforward(u, u.geometry().dim());
}

ZetaResult zeta_eval(const RadialPotential& u, double gamma) {
    if (gamma < 0.0)
        throw Error(ErrorCode::DomainError, "zeta rate must be >= 0");
    const ModelGeometry& g = u.geometry();
    const int n = g.dim();
    const double a_left = u.phi_prime_samples().front();
    const double a_right = u.phi_prime_samples().back();
    ZetaResult r{};
    r.left_rate = n - gamma * a_left;
    r.right_rate =
        g.kind() == ModelKind::Proj ? 1.0 + gamma * a_right : kInf;
    if (r.left_rate <= 1e-12 || r.right_rate <= 1e-12) {
        r.value = kInf;
        r.divergent = true;
        return r;
    }
    const auto& s = g.grid();
    const double main = gauss16_composite(
        [&](double x) { return std::exp(-gamma * u.phi(x)) * g.rho0(x); }, s);
    // Tail completions: the integrand is exponential with the certified rates
    // once phi is linearized along its boundary slopes.
    const double left_tail = n * std::exp(-gamma * u.phi(s.front())) *
                             std::exp(n * s.front()) / r.left_rate;
    const double right_tail =
        g.kind() == ModelKind::Proj
            ? n * std::exp(-gamma * u.phi(s.back())) * std::exp(-s.back()) /
                  r.right_rate
            : 0.0;
    r.value = main + left_tail + right_tail;
    r.divergent = false;
    return r;
}

TwistedRicciReport twisted_ricci(const RadialPotential& u, double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw Error(ErrorCode::DomainError, "twist parameter must lie in (0,1)");
    const ModelGeometry& g = u.geometry();
    const ZetaResult z = zeta_eval(u, gamma);
    if (z.divergent)
        throw Error(ErrorCode::DivergentZeta,
                    "tilted reference volume diverges at this rate");
    const GridMeasure ma = ma_pushforward(u);
    const auto& s = g.grid();
    const auto& d = ma.density();
    const double max_d = *std::max_element(d.begin(), d.end());
    // Nodes whose density estimate sits this far above the differencing noise
    // floor carry the log-ratio to ~1e-7; extrema are taken there, while the
    // profile itself keeps every positive-density node.
    const double reliable = 1e-5 * max_d;
    TwistedRicciReport rep{};
    rep.support_mismatch = false;
    rep.sup = -kInf;
    rep.inf = kInf;
    double stray_mass = 0.0;
    const double log_z = std::log(z.value);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (d[i] > 0.0) {
            const double rho = -gamma * u.phi(s[i]) + std::log(g.rho0(s[i])) -
                               log_z - std::log(d[i]);
            rep.s.push_back(s[i]);
            rep.rho.push_back(rho);
            if (d[i] >= reliable) {
                rep.sup = std::max(rep.sup, rho);
                rep.inf = std::min(rep.inf, rho);
            }
        } else {
            // Tilted reference mass sitting where the MA measure vanishes.
            const double mu =
                std::exp(-gamma * u.phi(s[i])) * g.rho0(s[i]) / z.value;
            const double w =
                (i == 0 ? s[1] - s[0]
                        : (i + 1 == s.size() ? s[i] - s[i - 1]
                                             : 0.5 * (s[i + 1] - s[i - 1])));
            stray_mass += mu * w;
        }
    }
    for (const Atom& a : ma.atoms())
        if (a.mass > 1e-8) rep.support_mismatch = true;
    if (stray_mass > 1e-10) rep.support_mismatch = true;
    if (!(rep.sup > -kInf)) rep.support_mismatch = true;
    if (rep.support_mismatch) rep.sup = kInf;
    return rep;
}

double energy(const RadialPotential& u) {
    const int n = u.geometry().dim();
    const auto w = [&](double x) { return u.phi(x); };
    const auto wp = [&](double x) { return u.phi_prime(x); };
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) sum += integrate_mixed(u, j, w, wp);
    return sum / (n + 1);
}

DpProxy dp_proxy(const RadialPotential& u, double p) {
    if (!(p >= 1.0))
        throw Error(ErrorCode::DomainError, "proxy order must be >= 1");
    const auto w = [&](double x) { return std::pow(std::abs(u.phi(x)), p); };
    const auto wp = [&](double x) {
        const double v = u.phi(x);
        if (v == 0.0) return 0.0;
        return p * std::pow(std::abs(v), p - 1.0) * (v > 0.0 ? 1.0 : -1.0) *
               u.phi_prime(x);
    };
    const int n = u.geometry().dim();
    const double against_ma = std::max(integrate_mixed(u, n, w, wp), 0.0);
    const double against_ref = std::max(integrate_mixed(u, 0, w, wp), 0.0);
    DpProxy out{};
    out.against_ma = std::pow(against_ma, 1.0 / p);
    out.against_reference = std::pow(against_ref, 1.0 / p);
    out.combined = std::pow(against_ma + against_ref, 1.0 / p);
    return out;
}

double ding(const RadialPotential& u, double t) {
    if (t < 0.0 || t > 1.0)
        throw Error(ErrorCode::DomainError, "Ding parameter outside [0, 1]");
    const double e = energy(u);
    if (t == 0.0) {
        const ModelGeometry& g = u.geometry();
        const double mean_phi = gauss16_composite(
            [&](double x) { return u.phi(x) * g.rho0(x); }, g.grid());
        return -e + mean_phi;
    }
    const ZetaResult z = zeta_eval(u, t);
    if (z.divergent)
        throw Error(ErrorCode::DivergentZeta,
                    "tilted reference volume diverges at this rate");
    return -e - std::log(z.value) / t;
}

}  // namespace fanomom
