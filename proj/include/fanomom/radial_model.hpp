#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fanomom/grid_measure.hpp"

namespace fanomom {

enum class ModelKind { Ball, Proj };

/// One of the two exactly computable rotation-invariant model geometries,
/// reduced to the variable s = log|z|^2:
///  - Ball(n): the unit ball in C^n with flat reference; s ranges over
///    (-infty, 0], reference potential profile h0 = 0, reference volume
///    density rho0(s) = n e^{ns}.
///  - Proj(n): projective n-space with the standard rotation-invariant
///    reference metric; s ranges over R, h0(s) = log(1+e^s), and rho0 is the
///    pushforward of the normalized volume, n sigma^n (1-sigma) with
///    sigma = e^s/(1+e^s).
/// Both references are normalized to unit total volume; the parts of that
/// volume beyond the stored s-window have exact closed forms, exposed as tail
/// masses so integrals can be completed analytically.
class ModelGeometry {
  public:
    static ModelGeometry ball(int n, double s_min = -40.0, int segments = 20000);
    static ModelGeometry proj(int n, double s_min = -40.0, double s_max = 40.0,
                              int segments = 40000);

    ModelKind kind() const { return kind_; }
    int dim() const { return n_; }
    const std::vector<double>& grid() const { return s_; }
    double s_min() const { return s_.front(); }
    double s_max() const { return s_.back(); }

    double h0(double s) const;
    double h0_prime(double s) const;
    double rho0(double s) const;

    /// Exact mass of rho0 below s (Ball: e^{ns}; Proj: sigma(s)^n).
    double rho0_mass_below(double s) const;
    /// Exact mass of rho0 above s (Ball: 0 past the boundary; Proj:
    /// 1 - sigma(s)^n).
    double rho0_mass_above(double s) const;
    /// Grid quadrature of rho0 plus the exact off-window tails; equals 1 to
    /// near machine precision by construction.
    double reference_mass() const;

  private:
    ModelGeometry(ModelKind k, int n, double lo, double hi, int segments);

    ModelKind kind_;
    int n_;
    std::vector<double> s_;
};

/// A rotation-invariant potential phi(s) on a model geometry, together with
/// its derivative samples.  The full Kahler potential profile is
/// h(s) = h0(s) + phi(s); admissibility means h is convex and nondecreasing
/// (for Proj additionally h' in [0,1], for Ball phi' >= 0), checked on
/// construction to a discrete tolerance of 1e-10.
///
/// Potentials built from callables keep them and evaluate exactly at
/// arbitrary s (quadrature nodes included); potentials built from samples
/// interpolate linearly.
class RadialPotential {
  public:
    /// From callables.  phi_prime may be empty, in which case it is obtained
    /// by Richardson-extrapolated central differences of phi.
    RadialPotential(ModelGeometry geometry, std::function<double(double)> phi,
                    std::function<double(double)> phi_prime = nullptr);

    /// From samples on the geometry grid (same length), e.g. solver output or
    /// a loaded CSV.
    RadialPotential(ModelGeometry geometry, std::vector<double> phi_samples,
                    std::vector<double> phi_prime_samples);

    const ModelGeometry& geometry() const { return *geom_; }
    const std::vector<double>& phi_samples() const { return phi_; }
    const std::vector<double>& phi_prime_samples() const { return phip_; }

    double phi(double s) const;
    double phi_prime(double s) const;
    double h(double s) const { return geom_->h0(s) + phi(s); }
    double h_prime(double s) const { return geom_->h0_prime(s) + phi_prime(s); }

    /// True when sup phi = 0 within 1e-10 on the grid.
    bool is_normalized() const;
    /// The same potential shifted so that sup phi = 0.
    RadialPotential normalized() const;
    /// The potential shifted by the constant c (phi + c).
    RadialPotential shifted(double c) const;

    bool has_exact_phi() const { return static_cast<bool>(phi_fn_); }

  private:
    void sample_and_validate();

    std::shared_ptr<const ModelGeometry> geom_;
    std::function<double(double)> phi_fn_;
    std::function<double(double)> phip_fn_;
    std::vector<double> phi_;
    std::vector<double> phip_;
};

/// Pushforward to the s-axis of the normalized Monge-Ampere measure of u:
/// density d(h'(s)^n)/ds on the grid (fourth-order differences, scaled so the
/// represented mass is exactly h'(s_max)^n - h'(s_min)^n) plus an atom at
/// s_min carrying the residual h'(s_min)^n.  For Proj the total approaches 1
/// on an adequate window; for Ball it equals h'(0)^n, the mass the potential
/// pulls into the open ball.
GridMeasure ma_pushforward(const RadialPotential& u);

/// Mixed pushforward d(h'^j h0'^{n-j})/ds with the analogous boundary atom;
/// j = n is ma_pushforward, j = 0 the reference.
GridMeasure mixed_pushforward(const RadialPotential& u, int j);

/// Value of int e^{-gamma phi} rho0 ds with exact tail completion, or the
/// +infinity sentinel when a tilted tail rate turns nonpositive (the
/// certificate fields say which).
struct ZetaResult {
    double value;
    bool divergent;
    /// Exponential decay rates of the tilted integrand at the two window ends
    /// (left: n - gamma*phi'(s_min); right, Proj only: 1 + gamma*phi'(s_max));
    /// divergence means a rate <= 0.
    double left_rate;
    double right_rate;
};
ZetaResult zeta_eval(const RadialPotential& u, double gamma);

/// Twisted Ricci profile rho(s) = log(e^{-gamma phi} rho0 / (Z * ma_density))
/// for gamma in (0,1), reported on every node where the MA density is
/// positive; sup/inf are certified over the nodes whose density estimate
/// stands far enough above the differencing noise floor to resolve the
/// log-ratio.  support_mismatch is set (and sup becomes +infinity) when the
/// Monge-Ampere measure puts no density where the tilted reference has mass,
/// e.g. when it degenerates onto the boundary atom.
struct TwistedRicciReport {
    std::vector<double> s;
    std::vector<double> rho;
    double sup;
    double inf;
    bool support_mismatch;
};
TwistedRicciReport twisted_ricci(const RadialPotential& u, double gamma);

/// Monge-Ampere energy through its mixed-measure expansion,
/// (1/(n+1)) sum_j int phi d(h'^j h0'^{n-j}); zero at the reference and equal
/// to c on the constant potential c (Proj).
double energy(const RadialPotential& u);

/// The three distance-proxy integrals of order p: against the potential's own
/// Monge-Ampere measure, against the reference Monge-Ampere measure (zero
/// mass for Ball, whose reference form is flat), and against their sum.
/// Each is reported as a p-th root.
struct DpProxy {
    double combined;
    double against_ma;
    double against_reference;
};
DpProxy dp_proxy(const RadialPotential& u, double p);

/// Twisted Ding value -energy(u) - t^{-1} log Z_u(t); at t = 0 the limit
/// -energy(u) + int phi rho0 ds.  Throws DivergentZeta when Z_u(t) is the
/// divergence sentinel.
double ding(const RadialPotential& u, double t);

}  // namespace fanomom
