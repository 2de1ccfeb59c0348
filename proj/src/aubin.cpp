#include "fanomom/aubin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fanomom/errors.hpp"
#include "fanomom/fitline.hpp"

namespace fanomom {

namespace {

double logcosh(double x) {
    const double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

void check_params(const SolverParams& p) {
    if (p.segments < 100)
        throw Error(ErrorCode::BadInput, "solver: need >= 100 grid segments");
    if (!(p.s_min < -10.0))
        throw Error(ErrorCode::BadInput, "solver: s_min must lie below -10");
    if (!(p.s_max > 10.0))
        throw Error(ErrorCode::BadInput, "solver: s_max must lie above 10");
    if (!(p.tolerance > 0.0) || p.max_iterations < 1)
        throw Error(ErrorCode::BadInput, "solver: bad tolerance/iterations");
}

/// Fourth-order first derivative of uniformly spaced samples: five-point
/// central stencils inside, one-sided five-point stencils at the two edge
/// pairs.
std::vector<double> derivative4(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const auto one_sided = [&](std::size_t i, int dir) {
        const double s = static_cast<double>(dir);
        return s *
               (-25.0 * f[i] + 48.0 * f[i + dir] - 36.0 * f[i + 2 * dir] +
                16.0 * f[i + 3 * dir] - 3.0 * f[i + 4 * dir]) /
               (12.0 * h);
    };
    d[0] = one_sided(0, 1);
    d[1] = one_sided(1, 1);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) /
               (12.0 * h);
    d[n - 2] = one_sided(n - 2, -1);
    d[n - 1] = one_sided(n - 1, -1);
    return d;
}

/// Cumulative integral of uniformly spaced samples with the Euler-Maclaurin
/// endpoint correction int_a^x f = T(x) - h^2/12 (f'(x) - f'(a)), which
/// removes the O(h^2) error a plain running trapezoid carries at interior
/// stopping points (the correction uses second-order difference slopes, so
/// the remainder is O(h^4)).
std::vector<double> cumulative_em(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    std::vector<double> fp(n);
    fp[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) fp[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    fp[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i < n; ++i) {
        acc += 0.5 * h * (f[i - 1] + f[i]);
        out[i] = acc - h * h / 12.0 * (fp[i] - fp[0]);
    }
    return out;
}

struct BallShot {
    std::vector<double> phi;
    std::vector<double> v;  // phi'^n
};

/// One Runge-Kutta sweep of the coupled system phi' = v^{1/n},
/// v' = c e^{-gamma phi + n s} from the deep left node, seeded with the
/// asymptotic flux v = (c/n) e^{ns} of the flat left tail.
BallShot integrate_ball(int n, double gamma, double c,
                        const std::vector<double>& s) {
    const std::size_t m = s.size();
    const double h = (s.back() - s.front()) / static_cast<double>(m - 1);
    const double inv = 1.0 / n;
    BallShot out;
    out.phi.resize(m);
    out.v.resize(m);
    out.phi[0] = 0.0;
    out.v[0] = c / n * std::exp(n * s.front());
    const auto fv = [&](double ss, double ph) {
        return c * std::exp(-gamma * ph + n * ss);
    };
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double ss = s[i], ph = out.phi[i], vv = out.v[i];
        const double k1p = std::pow(vv, inv), k1v = fv(ss, ph);
        const double p2 = ph + 0.5 * h * k1p, v2 = vv + 0.5 * h * k1v;
        const double k2p = std::pow(v2, inv), k2v = fv(ss + 0.5 * h, p2);
        const double p3 = ph + 0.5 * h * k2p, v3 = vv + 0.5 * h * k2v;
        const double k3p = std::pow(v3, inv), k3v = fv(ss + 0.5 * h, p3);
        const double p4 = ph + h * k3p, v4 = vv + h * k3v;
        const double k4p = std::pow(v4, inv), k4v = fv(ss + h, p4);
        out.phi[i + 1] = ph + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        out.v[i + 1] = vv + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return out;
}

/// Least squares for a small generic regressor matrix via normal equations
/// and Gaussian elimination with partial pivoting.  Returns the minimal
/// sensible answer (all-zero coefficients) through `degenerate` when the
/// normal matrix is numerically singular, which happens exactly when the
/// data is identically zero or the regressors are dependent.
std::vector<double> solve_least_squares(
    const std::vector<std::vector<double>>& cols,
    const std::vector<double>& y, bool* degenerate = nullptr) {
    const std::size_t k = cols.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < y.size(); ++r)
                a[i][j] += cols[i][r] * cols[j][r];
        for (std::size_t r = 0; r < y.size(); ++r) a[i][k] += cols[i][r] * y[r];
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::fabs(a[i][i]));
    if (degenerate) *degenerate = false;
    std::vector<double> x(k, 0.0);
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (std::fabs(a[col][col]) <= 1e-13 * std::max(scale, 1e-300)) {
            if (degenerate) *degenerate = true;
            return x;  // minimal-norm zero solution
        }
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t j = col; j <= k; ++j) a[r][j] -= f * a[col][j];
        }
    }
    for (std::size_t i = k; i-- > 0;) {
        double acc = a[i][k];
        for (std::size_t j = i + 1; j < k; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Pointwise relative defect of a solved flux equation d(flux)/ds = rhs:
/// fourth-order differences of the integrated flux against the right side,
/// maximized over the nodes where the right side stands above 1e-5 of its
/// sup -- the same band the twisted-Ricci report certifies.  Below that band
/// the differences of an O(1) flux drown the tiny true values in rounding
/// noise, so a "relative defect" there would measure arithmetic, not the
/// solution.
double band_relative_defect(const std::vector<double>& flux,
                            const std::vector<double>& rhs, double h) {
    const std::vector<double> d = derivative4(flux, h);
    double rsup = 0.0;
    for (double v : rhs) rsup = std::max(rsup, v);
    const double band = 1e-5 * rsup;
    double worst = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (rhs[i] >= band)
            worst = std::max(worst, std::fabs(d[i] - rhs[i]) / rhs[i]);
    return worst;
}

/// Fixed comparison potential for the Ding monotonicity check: phi(s) =
/// sigma(s)/2, admissible on the projective geometry (h' stays in (0,1)).
RadialPotential fixed_comparison(const ModelGeometry& geom) {
    return RadialPotential(
        geom, [](double s) { return 0.5 * sigmoid(s); },
        [](double s) {
            const double sg = sigmoid(s);
            return 0.5 * sg * (1.0 - sg);
        });
}

std::vector<HarnackDingRow> survey_rows(int n, double p,
                                        const std::vector<double>& t_grid,
                                        const SolverParams& params) {
    std::vector<HarnackDingRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > 0.0) || t >= 1.0)
            throw Error(ErrorCode::BadInput,
                        "harnack_and_ding_report: t must lie in (0,1) "
                        "(the envelope weight 1/(1-t) degenerates at 1)");
        AubinSolution sol = solve_proj(n, t, params);
        const ModelGeometry& geom = sol.potential.geometry();
        const std::vector<double>& s = geom.grid();
        const std::vector<double>& phi = sol.potential.phi_samples();
        const double h = s[1] - s[0];
        // Right side e^{-t phi} rho0 is the solution's own normalized
        // Monge-Ampere density; integrate |phi|^p against it.
        double mass = 0.0, mom = 0.0, sup = -1e300;
        std::vector<double> w(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            w[i] = std::exp(-t * phi[i]) * geom.rho0(s[i]);
            sup = std::max(sup, phi[i]);
        }
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double seg = 0.5 * h;
            mass += seg * (w[i] + w[i + 1]);
            mom += seg * (std::pow(std::fabs(phi[i]), p) * w[i] +
                          std::pow(std::fabs(phi[i + 1]), p) * w[i + 1]);
        }
        const TwistedRicciReport tw = twisted_ricci(sol.potential, t);
        HarnackDingRow row;
        row.t = t;
        row.sup_u = sup;
        row.lhs = std::pow(mom / mass, 1.0 / p);
        row.x1 = (n + 1.0) * sup;
        row.x2 = 1.0 / t + 1.0 / (1.0 - t);
        row.twisted_gap = tw.support_mismatch ? 1e300 : tw.sup - tw.inf;
        row.residual = sol.residual;
        row.energy = energy(sol.potential);
        row.ding_fixed = ding(fixed_comparison(geom), t);
        rows.push_back(row);
    }
    return rows;
}

void envelope_fit(const std::vector<HarnackDingRow>& rows, double* a,
                  double* b, bool* degenerate) {
    std::vector<double> x1, x2, y;
    for (const auto& r : rows) {
        x1.push_back(r.x1);
        x2.push_back(r.x2);
        y.push_back(r.lhs);
    }
    double ynorm = 0.0;
    for (double v : y) ynorm = std::max(ynorm, std::fabs(v));
    if (ynorm < 1e-8) {
        // Stationary path: the data is zero to solver precision and any
        // envelope fits; report the minimal-norm coefficients.
        *a = 0.0;
        *b = 0.0;
        *degenerate = true;
        return;
    }
    const std::vector<double> c = solve_least_squares({x1, x2}, y, degenerate);
    *a = c[0];
    *b = c[1];
}

}  // namespace

double ball1_exact_constant(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 2.0))
        throw Error(ErrorCode::DomainError,
                    "ball1 closed form: gamma must lie in (0, 2)");
    return 0.5 * (2.0 - gamma);
}

double ball1_exact_potential(double gamma, double s) {
    if (!(gamma > 0.0) || !(gamma < 2.0))
        throw Error(ErrorCode::DomainError,
                    "ball1 closed form: gamma must lie in (0, 2)");
    if (s > 0.0)
        throw Error(ErrorCode::DomainError,
                    "ball1 closed form: s must lie in (-inf, 0]");
    const double s1 = std::log((2.0 - gamma) / gamma);
    return (s + 2.0 * logcosh(0.5 * (s - s1)) - 2.0 * logcosh(0.5 * s1)) /
           gamma;
}

AubinSolution solve_ball(int n, double gamma, const SolverParams& params) {
    if (n < 1) throw Error(ErrorCode::BadInput, "solve_ball: need n >= 1");
    check_params(params);
    if (!(gamma > 0.0) || !(gamma < n + 1.0))
        throw Error(ErrorCode::DomainError,
                    "solve_ball: gamma must lie in (0, n+1); the rotation-"
                    "invariant family degenerates at n+1");
    ModelGeometry geom = ModelGeometry::ball(n, params.s_min, params.segments);
    const std::vector<double>& s = geom.grid();
    const double h = s[1] - s[0];

    // Secant iteration on F(log c) = log of the shot mass phi'(0)^n; the
    // first step is the relaxation-0.5 update, after which secant steps take
    // over.
    double lc0 = std::log(static_cast<double>(n));
    BallShot shot = integrate_ball(n, gamma, std::exp(lc0), s);
    double f0 = std::log(shot.v.back());
    double lc1 = lc0 - 0.5 * f0;
    int used = 0;
    bool converged = std::fabs(f0) < params.tolerance;
    if (!converged) {
        for (int it = 0; it < params.max_iterations; ++it) {
            shot = integrate_ball(n, gamma, std::exp(lc1), s);
            const double f1 = std::log(shot.v.back());
            used = it + 1;
            if (std::fabs(f1) < params.tolerance) {
                converged = true;
                break;
            }
            double step = 0.0;
            if (f1 != f0) step = f1 * (lc1 - lc0) / (f1 - f0);
            lc0 = lc1;
            f0 = f1;
            lc1 -= step;
        }
    } else {
        lc1 = lc0;
    }
    if (!converged)
        throw Error(ErrorCode::NoConvergence,
                    "solve_ball: shooting constant did not converge for "
                    "gamma = " +
                        std::to_string(gamma) + " (distance to critical " +
                        std::to_string(n + 1.0 - gamma) +
                        "); refine the grid or relax the tolerance");

    // Shift so phi(0) = 0; the constant absorbs the shift.
    const double shift = shot.phi.back();
    std::vector<double> phi = std::move(shot.phi);
    for (double& x : phi) x -= shift;
    const double c_gamma = std::exp(lc1) * std::exp(-gamma * shift);

    std::vector<double> rhs(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        rhs[i] = c_gamma * std::exp(-gamma * phi[i] + n * s[i]);
    const double residual = band_relative_defect(shot.v, rhs, h);

    std::vector<double> phip(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        phip[i] = std::pow(shot.v[i], 1.0 / n);

    RadialPotential potential(std::move(geom), std::move(phi),
                              std::move(phip));
    AubinSolution out{std::move(potential),
                      gamma,
                      c_gamma,
                      residual,
                      std::fabs(shot.v.back() - shot.v.front() - 1.0),
                      used,
                      "boundary-zero"};
    return out;
}

AubinSolution solve_proj(int n, double t, const SolverParams& params) {
    if (n < 1) throw Error(ErrorCode::BadInput, "solve_proj: need n >= 1");
    check_params(params);
    if (!(t > 0.0) || t > 1.0)
        throw Error(ErrorCode::DomainError,
                    "solve_proj: t must lie in (0, 1]");
    ModelGeometry geom = ModelGeometry::proj(n, params.s_min, params.s_max,
                                             2 * params.segments);
    const std::vector<double>& s = geom.grid();
    const std::size_t m = s.size();
    const double h = s[1] - s[0];

    std::vector<double> rho(m), h0p(m);
    for (std::size_t i = 0; i < m; ++i) {
        rho[i] = geom.rho0(s[i]);
        h0p[i] = geom.h0_prime(s[i]);
    }

    std::vector<double> phi(m, 0.0);
    if (params.initial_bump != 0.0)
        for (std::size_t i = 0; i < m; ++i)
            phi[i] = params.initial_bump * sigmoid(s[i]);

    std::vector<double> w(m), g(m), hp(m), cdf;
    int used = 0;
    double change = 1e300;
    for (int it = 0; it < params.max_iterations; ++it) {
        used = it + 1;
        for (std::size_t i = 0; i < m; ++i)
            w[i] = std::exp(-t * phi[i]) * rho[i];
        cdf = cumulative_em(w, h);
        const double left = std::exp(-t * phi.front()) *
                            geom.rho0_mass_below(s.front());
        const double z = left + cdf.back() +
                         std::exp(-t * phi.back()) *
                             geom.rho0_mass_above(s.back());
        for (std::size_t i = 0; i < m; ++i) {
            const double gmass = std::clamp((left + cdf[i]) / z, 0.0, 1.0);
            hp[i] = std::pow(gmass, 1.0 / n);
            g[i] = hp[i] - h0p[i];
        }
        std::vector<double> raw = cumulative_em(g, h);
        // Additive gauge: shift so the tilted reference integral is 1
        // (trapezoid of e^{-t raw} rho0 plus exact tails; endpoint slopes of
        // the integrand vanish, so no correction term is needed).
        double total = 0.0;
        std::vector<double> wr(m);
        for (std::size_t i = 0; i < m; ++i)
            wr[i] = std::exp(-t * raw[i]) * rho[i];
        for (std::size_t i = 0; i + 1 < m; ++i)
            total += 0.5 * h * (wr[i] + wr[i + 1]);
        total += std::exp(-t * raw.front()) * geom.rho0_mass_below(s.front()) +
                 std::exp(-t * raw.back()) * geom.rho0_mass_above(s.back());
        const double delta = std::log(total) / t;
        change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double next = raw[i] + delta;
            change = std::max(change, std::fabs(next - phi[i]));
            phi[i] += 0.5 * (next - phi[i]);
        }
        if (change < params.tolerance) {
            phi = std::move(raw);
            for (double& x : phi) x += delta;
            break;
        }
    }
    if (!(change < params.tolerance))
        throw Error(ErrorCode::NoConvergence,
                    "solve_proj: fixed point did not converge for t = " +
                        std::to_string(t) + " (last change " +
                        std::to_string(change) + ")");

    // Final diagnostics against the converged potential.
    for (std::size_t i = 0; i < m; ++i)
        w[i] = std::exp(-t * phi[i]) * rho[i];
    cdf = cumulative_em(w, h);
    const double left = std::exp(-t * phi.front()) *
                        geom.rho0_mass_below(s.front());
    double z = left + cdf.back() +
               std::exp(-t * phi.back()) * geom.rho0_mass_above(s.back());
    std::vector<double> gmass(m), phip(m);
    for (std::size_t i = 0; i < m; ++i) {
        gmass[i] = std::clamp((left + cdf[i]) / z, 0.0, 1.0);
        phip[i] = std::pow(gmass[i], 1.0 / n) - h0p[i];
    }
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = w[i] / z;
    const double residual = band_relative_defect(gmass, rhs, h);
    RadialPotential potential(std::move(geom), std::move(phi),
                              std::move(phip));
    AubinSolution out{std::move(potential),
                      t,
                      1.0 / z,
                      residual,
                      std::fabs(z - 1.0),
                      used,
                      "exp-integral-one"};
    return out;
}

double measure_energy(const AubinSolution& sol) {
    const ModelGeometry& geom = sol.potential.geometry();
    const std::vector<double>& s = geom.grid();
    const std::vector<double>& phi = sol.potential.phi_samples();
    const int n = geom.dim();
    const double h = s[1] - s[0];
    // The normalized Monge-Ampere density equals the solved right side.
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const auto dens = [&](std::size_t j) {
            if (geom.kind() == ModelKind::Ball)
                return sol.constant *
                       std::exp(-sol.parameter * phi[j] + n * s[j]);
            return sol.constant *
                   std::exp(-sol.parameter * phi[j]) * geom.rho0(s[j]);
        };
        acc += 0.5 * h * ((-phi[i]) * dens(i) + (-phi[i + 1]) * dens(i + 1));
    }
    return n / (n + 1.0) * acc;
}

SlopeFit blowup_slope(int n, const std::vector<double>& gammas,
                      const SolverParams& params, Exec exec) {
    if (gammas.size() < 5)
        throw Error(ErrorCode::BadInput,
                    "blowup_slope: need at least 5 gamma samples for the "
                    "four-term fit");
    const std::size_t m = gammas.size();
    std::vector<double> energies(m, 0.0), residuals(m, 0.0);
    std::vector<int> codes(m, -1);
    std::vector<std::string> messages(m);
    for_indexed(m, exec, [&](std::size_t i) {
        try {
            const AubinSolution sol = solve_ball(n, gammas[i], params);
            energies[i] = measure_energy(sol);
            residuals[i] = sol.residual;
        } catch (const Error& e) {
            codes[i] = static_cast<int>(e.code());
            messages[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < m; ++i)
        if (codes[i] >= 0)
            throw Error(static_cast<ErrorCode>(codes[i]), messages[i]);

    std::vector<double> x(m), ones(m, 1.0), xe(m), e(m);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::log(1.0 / (n + 1.0 - gammas[i]));
        xe[i] = x[i] * std::exp(-x[i]);
        e[i] = std::exp(-x[i]);
        pts.push_back({x[i], energies[i]});
    }
    bool degenerate = false;
    const std::vector<double> coef =
        solve_least_squares({x, ones, xe, e}, energies, &degenerate);
    if (degenerate)
        throw Error(ErrorCode::BadInput,
                    "blowup_slope: gamma samples too clustered for the "
                    "four-term fit");
    double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
    for (double v : energies) mean += v;
    mean /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double pred =
            coef[0] * x[i] + coef[1] + coef[2] * xe[i] + coef[3] * e[i];
        ss_res += (energies[i] - pred) * (energies[i] - pred);
        ss_tot += (energies[i] - mean) * (energies[i] - mean);
    }
    SlopeFit fit;
    fit.gammas = gammas;
    fit.energies = std::move(energies);
    fit.residuals = std::move(residuals);
    fit.slope = coef[0];
    fit.intercept = coef[1];
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.plain_slope = least_squares_fit(pts).slope;
    return fit;
}

HarnackDingReport harnack_and_ding_report(int n, double p,
                                          const std::vector<double>& t_grid,
                                          const SolverParams& params) {
    if (!(p >= 1.0))
        throw Error(ErrorCode::DomainError,
                    "harnack_and_ding_report: need p >= 1");
    if (t_grid.size() < 2)
        throw Error(ErrorCode::BadInput,
                    "harnack_and_ding_report: need >= 2 grid values");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw Error(ErrorCode::BadInput,
                        "harnack_and_ding_report: t grid must increase");

    HarnackDingReport rep;
    rep.p = p;
    rep.rows = survey_rows(n, p, t_grid, params);
    envelope_fit(rep.rows, &rep.a_p, &rep.b_p, &rep.degenerate_fit);

    // Stability probe: refit with grid midpoints added.
    std::vector<double> refined;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        refined.push_back(t_grid[i]);
        if (i + 1 < t_grid.size())
            refined.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
    }
    const std::vector<HarnackDingRow> dense = survey_rows(n, p, refined, params);
    bool deg2 = false;
    envelope_fit(dense, &rep.a_p_refined, &rep.b_p_refined, &deg2);
    rep.degenerate_fit = rep.degenerate_fit || deg2;

    rep.max_violation = -1e300;
    for (const auto& r : rep.rows)
        rep.max_violation =
            std::max(rep.max_violation,
                     r.lhs - (rep.a_p * r.x1 + rep.b_p * r.x2));
    rep.ding_nonincreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].ding_fixed > rep.rows[i - 1].ding_fixed + 1e-10)
            rep.ding_nonincreasing = false;
    rep.energy_dominated = true;
    for (const auto& r : rep.rows)
        if (-r.energy > 1e-8) rep.energy_dominated = false;
    return rep;
}

}  // namespace fanomom
