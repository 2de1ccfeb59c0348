#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "fanomom/aubin.hpp"
#include "fanomom/errors.hpp"
#include "fanomom/parallel.hpp"
#include "fanomom/radial_model.hpp"

using namespace fanomom;

namespace {

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

template <typename F>
std::optional<ErrorCode> thrown_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

TEST_CASE("ball solutions match the closed form in dimension one") {
    // The n = 1 equation linearizes under w = -gamma phi + s + log c into
    // w'' = -gamma e^w, whose sech^2 solutions give phi and the constant
    // (2 - gamma)/2 in closed form.  The solver knows nothing of this.
    CHECK(ball1_exact_constant(1.0) == 0.5);
    CHECK(ball1_exact_potential(0.7, 0.0) == 0.0);

    const std::vector<double> gammas = {0.5, 1.0, 1.5, 1.9};
    const std::vector<double> frozen_energy = {0.301456455, 0.386294278,
                                               0.565594946, 1.133369672};
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        const double g = gammas[k];
        AubinSolution sol = solve_ball(1, g);
        CHECK(sol.parameter == g);
        CHECK(sol.normalization == "boundary-zero");
        CHECK(sol.iterations >= 1);
        CHECK(rel_err(sol.constant, ball1_exact_constant(g)) < 1e-11);

        const std::vector<double>& s = sol.potential.geometry().grid();
        const std::vector<double>& phi = sol.potential.phi_samples();
        double phierr = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            phierr = std::max(phierr,
                              std::fabs(phi[i] - ball1_exact_potential(g, s[i])));
        CHECK(phierr < 1e-10);

        CHECK(sol.residual < 1e-10);
        CHECK(sol.mass_defect < 1e-11);
        CHECK(rel_err(measure_energy(sol), frozen_energy[k]) < 1e-6);
    }
}

TEST_CASE("ball solutions obey sign, boundary, and admissibility bounds") {
    AubinSolution sol = solve_ball(2, 2.5);
    const std::vector<double>& phi = sol.potential.phi_samples();
    const std::vector<double>& phip = sol.potential.phi_prime_samples();

    // phi <= 0 with equality exactly at the boundary s = 0, and the flux
    // phi'^n climbs from 0 to the unit boundary mass.
    double mx = -1e300;
    for (double v : phi) mx = std::max(mx, v);
    CHECK(mx == 0.0);
    CHECK(phi.back() == 0.0);
    for (double v : phip) CHECK(v >= 0.0);
    CHECK(std::fabs(phip.back() - 1.0) < 1e-10);

    CHECK(sol.residual < 1e-10);
    CHECK(sol.mass_defect < 1e-12);
    CHECK(rel_err(measure_energy(sol), 0.704106834) < 1e-6);
}

TEST_CASE("ball energies grow along the gamma family") {
    const std::vector<double> gammas = {1.0, 1.4, 1.8, 1.95};
    const std::vector<double> frozen = {0.386294278, 0.514257914, 0.865793251,
                                        1.427418512};
    double prev = -1e300;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        AubinSolution sol = solve_ball(1, gammas[k]);
        const double e = measure_energy(sol);
        CHECK(rel_err(e, frozen[k]) < 1e-6);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("solver inputs are validated") {
    CHECK(thrown_code([] { solve_ball(0, 1.0); }) == ErrorCode::BadInput);
    CHECK(thrown_code([] { solve_ball(1, 0.0); }) == ErrorCode::DomainError);
    CHECK(thrown_code([] { solve_ball(1, 2.0); }) == ErrorCode::DomainError);
    CHECK(thrown_code([] { solve_ball(1, 2.2); }) == ErrorCode::DomainError);
    CHECK(thrown_code([] { solve_ball(2, 3.5); }) == ErrorCode::DomainError);

    SolverParams coarse;
    coarse.segments = 50;
    CHECK(thrown_code([&] { solve_ball(1, 1.0, coarse); }) ==
          ErrorCode::BadInput);
    SolverParams shallow;
    shallow.s_min = -5.0;
    CHECK(thrown_code([&] { solve_ball(1, 1.0, shallow); }) ==
          ErrorCode::BadInput);
    SolverParams notol;
    notol.tolerance = 0.0;
    CHECK(thrown_code([&] { solve_ball(1, 1.0, notol); }) ==
          ErrorCode::BadInput);

    // Starving the outer iteration must surface as a convergence failure,
    // never as a quietly bad solution.
    SolverParams starved;
    starved.max_iterations = 3;
    CHECK(thrown_code([&] { solve_ball(1, 1.9, starved); }) ==
          ErrorCode::NoConvergence);

    CHECK(thrown_code([] { solve_proj(0, 0.5); }) == ErrorCode::BadInput);
    CHECK(thrown_code([] { solve_proj(1, 0.0); }) == ErrorCode::DomainError);
    CHECK(thrown_code([] { solve_proj(1, 1.2); }) == ErrorCode::DomainError);

    CHECK(thrown_code([] { ball1_exact_constant(2.0); }) ==
          ErrorCode::DomainError);
    CHECK(thrown_code([] { ball1_exact_potential(0.0, -1.0); }) ==
          ErrorCode::DomainError);
}

TEST_CASE("blowup slope in dimension one lands on one half") {
    std::vector<double> gs;
    for (int i = 0; i < 25; ++i) gs.push_back(1.8 + 0.19 * i / 24.0);
    SlopeFit fit = blowup_slope(1, gs);

    CHECK(std::fabs(fit.slope - 0.5) < 0.05 * 0.5);
    CHECK(std::fabs(fit.slope - 0.497013) < 5e-5);
    CHECK(fit.r2 > 0.9999);
    // Over this window the curve is still visibly bent toward the asymptote
    // from below, so the uncorrected line must undershoot the corrected one.
    CHECK(fit.plain_slope < fit.slope);
    CHECK(std::fabs(fit.plain_slope - 0.430679) < 5e-5);

    REQUIRE(fit.gammas.size() == gs.size());
    REQUIRE(fit.energies.size() == gs.size());
    REQUIRE(fit.residuals.size() == gs.size());
    for (double r : fit.residuals) CHECK(r < 1e-7);

    // The recorded energies are the per-point solves, first point included.
    AubinSolution first = solve_ball(1, gs.front());
    CHECK(fit.energies.front() == measure_energy(first));
}

TEST_CASE("blowup slope in dimension two lands on two thirds") {
    std::vector<double> gs;
    for (int i = 0; i < 20; ++i) gs.push_back(2.7 + 0.285 * i / 19.0);
    SlopeFit fit = blowup_slope(2, gs);

    CHECK(std::fabs(fit.slope - 2.0 / 3.0) < 0.08 * 2.0 / 3.0);
    CHECK(std::fabs(fit.slope - 0.659929) < 5e-5);
    CHECK(fit.r2 > 0.9999);
    CHECK(fit.plain_slope < fit.slope);
    for (double r : fit.residuals) CHECK(r < 1e-7);
}

TEST_CASE("slope fit validates its gamma family") {
    CHECK(thrown_code([] {
              blowup_slope(1, {1.8, 1.85, 1.9, 1.95});
          }) == ErrorCode::BadInput);
    // A gamma at or beyond the critical value fails inside the parallel
    // region; the error must cross the policy boundary intact.
    CHECK(thrown_code([] {
              blowup_slope(1, {1.0, 1.2, 1.4, 1.6, 2.5});
          }) == ErrorCode::DomainError);
}

TEST_CASE("projective path is stationary at the reference metric") {
    // The reference volume form satisfies its own equation at every t, so
    // the solved potential is the zero potential up to arithmetic; its sup
    // cannot sit below zero because the normalization pins the tilted
    // integral at 1 (Jensen).
    for (double t : {1.0, 0.5, 0.2}) {
        AubinSolution sol = solve_proj(1, t);
        CHECK(sol.normalization == "exp-integral-one");
        CHECK(sol.parameter == t);
        const std::vector<double>& phi = sol.potential.phi_samples();
        CHECK(max_abs(phi) < 1e-8);
        double sup = -1e300;
        for (double v : phi) sup = std::max(sup, v);
        CHECK(sup > -1e-10);
        CHECK(sol.residual < 1e-7);
        CHECK(sol.mass_defect < 1e-12);
        CHECK(std::fabs(sol.constant - 1.0) < 1e-10);
    }
    AubinSolution sol2 = solve_proj(2, 0.6);
    CHECK(max_abs(sol2.potential.phi_samples()) < 1e-8);
}

TEST_CASE("projective solver contracts from a displaced start") {
    AubinSolution near = solve_proj(1, 0.7);
    SolverParams bumped;
    bumped.initial_bump = 0.5;
    AubinSolution far = solve_proj(1, 0.7, bumped);
    CHECK(max_abs(far.potential.phi_samples()) < 1e-8);
    // Contraction from a distance costs extra sweeps but ends at the same
    // fixed point.
    CHECK(far.iterations > near.iterations);
    CHECK(far.residual < 1e-7);
}

TEST_CASE("twisted profile stays within ten residuals along the path") {
    for (double t : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        AubinSolution sol = solve_proj(1, t);
        TwistedRicciReport tw = twisted_ricci(sol.potential, t);
        CHECK_FALSE(tw.support_mismatch);
        const double gap = tw.sup - tw.inf;
        CHECK(gap >= 0.0);
        CHECK(sol.residual < 1e-7);
        // Residual and twisted profile are measured over the same certified
        // band, so the profile of an exact solution can wander from its
        // constant only by a small multiple of the defect noise.
        CHECK(gap <= 10.0 * sol.residual);
    }
}

TEST_CASE("path survey fits a degenerate envelope and a monotone Ding family") {
    const std::vector<double> grid = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    HarnackDingReport rep = harnack_and_ding_report(1, 2.0, grid);

    CHECK(rep.p == 2.0);
    REQUIRE(rep.rows.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const HarnackDingRow& r = rep.rows[i];
        CHECK(r.t == grid[i]);
        CHECK(std::fabs(r.x2 - (1.0 / r.t + 1.0 / (1.0 - r.t))) < 1e-12);
        // Stationary path: the weak-Harnack data degenerates to zero.
        CHECK(std::fabs(r.lhs) < 1e-10);
        CHECK(std::fabs(r.sup_u) < 1e-10);
        CHECK(r.twisted_gap <= 10.0 * r.residual);
    }

    // Zero data admits the minimal-norm envelope (0, 0), flagged as such,
    // and adding midpoints cannot move it.
    CHECK(rep.degenerate_fit);
    CHECK(rep.a_p == 0.0);
    CHECK(rep.b_p == 0.0);
    CHECK(rep.a_p_refined == rep.a_p);
    CHECK(rep.b_p_refined == rep.b_p);
    CHECK(rep.max_violation < 1e-10);

    CHECK(rep.ding_nonincreasing);
    CHECK(rep.energy_dominated);
    // The fixed-potential Ding family is strictly decreasing in t (power
    // mean inequality); endpoints frozen from a converged run.
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        CHECK(rep.rows[i + 1].ding_fixed < rep.rows[i].ding_fixed);
    CHECK(std::fabs(rep.rows.front().ding_fixed - 0.018750173584) < 1e-9);
    CHECK(std::fabs(rep.rows.back().ding_fixed - 0.011474102987) < 1e-9);

    CHECK(thrown_code([&] { harnack_and_ding_report(1, 0.5, grid); }) ==
          ErrorCode::DomainError);
    CHECK(thrown_code([] {
              harnack_and_ding_report(1, 2.0, {0.5});
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              harnack_and_ding_report(1, 2.0, {0.5, 0.4});
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              harnack_and_ding_report(1, 2.0, {0.5, 1.0});
          }) == ErrorCode::BadInput);
}

TEST_CASE("slope fit is identical across execution policies") {
    std::vector<double> gs;
    for (int i = 0; i < 6; ++i) gs.push_back(1.5 + 0.4 * i / 5.0);
    SolverParams p;
    p.segments = 4000;
    SlopeFit serial = blowup_slope(1, gs, p, Exec::Serial);
    SlopeFit openmp = blowup_slope(1, gs, p, Exec::OpenMP);
    CHECK(serial.slope == openmp.slope);
    CHECK(serial.intercept == openmp.intercept);
    CHECK(serial.r2 == openmp.r2);
    CHECK(serial.plain_slope == openmp.plain_slope);
    REQUIRE(serial.energies.size() == openmp.energies.size());
    for (std::size_t i = 0; i < serial.energies.size(); ++i) {
        CHECK(serial.energies[i] == openmp.energies[i]);
        CHECK(serial.residuals[i] == openmp.residuals[i]);
    }
}
