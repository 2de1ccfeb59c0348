#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fanomom/errors.hpp"
#include "fanomom/grid_measure.hpp"

using namespace fanomom;

namespace {

/// Uniform density 1 on [0,1], exactly piecewise linear.
GridMeasure uniform01() { return GridMeasure({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}); }

/// Exponential density e^{-t} sampled on a fine uniform grid over [0, hi].
GridMeasure exponential_grid(double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n)), f(x.size());
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = hi * i / (n - 1.0);
        f[static_cast<std::size_t>(i)] =
            std::exp(-x[static_cast<std::size_t>(i)]);
    }
    return GridMeasure(std::move(x), std::move(f));
}

/// Standard Gaussian density on [-8, 8]; decays into both grid boundaries.
GridMeasure gaussian_grid(int n = 4001) {
    std::vector<double> x(static_cast<std::size_t>(n)), f(x.size());
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = -8.0 + 16.0 * i / (n - 1.0);
        f[static_cast<std::size_t>(i)] =
            std::exp(-0.5 * x[static_cast<std::size_t>(i)] *
                     x[static_cast<std::size_t>(i)]);
    }
    return GridMeasure(std::move(x), std::move(f));
}

}  // namespace

TEST_CASE("construction validates shape") {
    CHECK_THROWS_AS(GridMeasure({0.0}, {1.0}), Error);
    CHECK_THROWS_AS(GridMeasure({0.0, 0.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(GridMeasure({1.0, 0.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(GridMeasure({0.0, 1.0}, {1.0, -1.0}), Error);
    CHECK_THROWS_AS(GridMeasure({0.0, 1.0}, {1.0}), Error);
    try {
        GridMeasure({1.0, 0.0}, {1.0, 1.0});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonIncreasingNodes);
        CHECK(e.is_config_error());
    }
}

TEST_CASE("mass and mean of simple shapes") {
    const GridMeasure u = uniform01();
    CHECK(u.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.mean() == doctest::Approx(0.5).epsilon(1e-15));

    // Triangle 0 -> 1 -> 0 on [0,2]: mass 1, mean 1.
    const GridMeasure tri({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    CHECK(tri.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tri.mean() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("absolute moments match closed forms on exactly-PL data") {
    const GridMeasure u = uniform01();
    // E|X|^p = 1/(p+1).
    CHECK(u.moment_abs(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.moment_abs(3.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u.moment_abs(3.5) == doctest::Approx(1.0 / 4.5).epsilon(1e-14));
    // E|X - 1/2|^p = (1/2)^p / (p+1).
    CHECK(u.moment_abs(2.0, 0.5) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(u.moment_abs(1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));

    const GridMeasure tri({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    // E|X-1|^p = 2 int_0^1 u^p (1-u) du = 2 (1/(p+1) - 1/(p+2)).
    CHECK(tri.moment_abs(2.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(tri.moment_abs(1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(u.moment_abs(0.5), Error);
}

TEST_CASE("moments of a sampled exponential converge at the PL rate") {
    const GridMeasure e = exponential_grid(40.0, 100001);
    // E X^p = p!; PL sampling error is O(h^2) relative.
    CHECK(e.moment_abs(1.0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(e.moment_abs(2.0) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(e.moment_abs(4.0) == doctest::Approx(24.0).epsilon(1e-7));
}

TEST_CASE("laplace transform is exact on PL data and handles small rates") {
    const GridMeasure u = uniform01();
    const double g = 0.7;
    CHECK(u.laplace(g) == doctest::Approx(-std::expm1(-g) / g).epsilon(1e-15));
    // Tiny rate: series branch; int_0^1 e^{-gt} dt ~ 1 - g/2.
    CHECK(u.laplace(1e-8) == doctest::Approx(1.0 - 0.5e-8).epsilon(1e-14));
    CHECK(u.laplace(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.laplace(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    // Negative rate (growing weight) still integrates exactly.
    CHECK(u.laplace(-1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));

    const GridMeasure e = exponential_grid(40.0, 100001);
    CHECK(e.laplace(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("atoms contribute exactly") {
    const GridMeasure m = GridMeasure::atoms_only({{1.0, 0.5}, {0.0, 0.5}});
    CHECK(m.total_mass() == doctest::Approx(1.0));
    CHECK(m.mean() == doctest::Approx(0.5));
    CHECK(m.moment_abs(2.0) == doctest::Approx(0.5));
    CHECK(m.laplace(2.0) == doctest::Approx(0.5 * (1.0 + std::exp(-2.0))));
    // Atoms come back sorted by location.
    CHECK(m.atoms().front().location == 0.0);

    // Single atom at -2: normalized third absolute moment is 8.
    CHECK(GridMeasure::atoms_only({{-2.0, 0.7}}).moment_abs(3.0) ==
          doctest::Approx(8.0));

    const GridMeasure mixed({0.0, 1.0}, {1.0, 1.0}, {{2.0, 1.0}});
    CHECK(mixed.total_mass() == doctest::Approx(2.0));
    CHECK(mixed.moment_abs(1.0) == doctest::Approx(0.5 * (0.5 + 2.0)));
}

TEST_CASE("tilt normalizes, composes, and closes the exponential family") {
    const GridMeasure e = exponential_grid(40.0, 100001);
    const GridMeasure t = e.tilt(1.0);
    CHECK(t.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    // Rate-1 exponential tilted by 1 is the rate-2 exponential: mean 1/2.
    CHECK(t.mean() == doctest::Approx(0.5).epsilon(1e-7));

    // tilt(m, 0) is m normalized.
    const GridMeasure u2({0.0, 1.0}, {2.0, 2.0});
    const GridMeasure u2n = u2.tilt(0.0);
    CHECK(u2n.density()[0] == doctest::Approx(1.0).epsilon(1e-15));

    // Composition: tilt(tilt(m,a),b) == tilt(m,a+b) node-wise within 1e-12.
    const GridMeasure m = gaussian_grid(2001);
    const GridMeasure ab = m.tilt(0.4).tilt(0.35);
    const GridMeasure once = m.tilt(0.75);
    for (std::size_t i = 0; i < m.nodes().size(); i += 97)
        CHECK(ab.density()[i] == doctest::Approx(once.density()[i]).epsilon(1e-12));

    const GridMeasure a = GridMeasure::atoms_only({{1.0, 2.0}, {0.0, 2.0}});
    const GridMeasure at = a.tilt(1.0);
    CHECK(at.total_mass() == doctest::Approx(1.0));
    CHECK(at.atoms()[1].mass ==
          doctest::Approx(std::exp(-1.0) / (1.0 + std::exp(-1.0))));
}

TEST_CASE("tilt preserves log-concavity exactly") {
    const GridMeasure m = random_log_concave(11);
    const auto before = m.log_concavity_report(1e-9);
    const auto after = m.tilt(0.8).log_concavity_report(1e-9);
    CHECK(before.flag);
    CHECK(after.flag);
    // A linear shift of log-density leaves second differences unchanged.
    CHECK(after.worst_violation ==
          doctest::Approx(before.worst_violation).epsilon(1e-6));
}

TEST_CASE("tail certification flags growth toward a boundary") {
    const GridMeasure u = uniform01();
    // t^2 grows toward the right endpoint which carries ~27% of the moment.
    CHECK_THROWS_AS(u.moment_abs(2.0, 0.0, true), Error);
    try {
        u.moment_abs(2.0, 0.0, true);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivergentMoment);
        CHECK(!e.is_config_error());
    }
    // The moment weight vanishes into the exponential's left endpoint and the
    // right tail has decayed below the share tolerance: certification passes.
    const GridMeasure e = exponential_grid(50.0, 20001);
    CHECK(e.moment_abs(1.0, 0.0, true) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(e.moment_abs(4.0, 0.0, true) == doctest::Approx(24.0).epsilon(1e-6));
    // Truncate the same density at t = 4: the fourth-moment integrand peaks
    // right at the cut, so the tail is provably not resolved.
    CHECK_THROWS_AS(exponential_grid(4.0, 2001).moment_abs(4.0, 0.0, true),
                    Error);

    // Two-sided decay: Gaussian tilts certify while the rate stays resolved.
    const GridMeasure g = gaussian_grid();
    CHECK(g.laplace(1.0, true) ==
          doctest::Approx(std::sqrt(2.0 * M_PI) * std::exp(0.5)).epsilon(1e-5));
    // A rate far beyond the resolved window explodes toward the left edge.
    CHECK_THROWS_AS(g.laplace(12.0, true), Error);
    CHECK_THROWS_AS(g.tilt(12.0, true), Error);
}

TEST_CASE("norm ratios against closed forms") {
    const GridMeasure u = uniform01();
    // Uncentered: (1/3)^{1/2} / (1/2).
    CHECK(u.norm_ratio(2.0, 1.0, false) ==
          doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
    // Centered: (1/12)^{1/2} / (1/4).
    CHECK(u.norm_ratio(2.0, 1.0, true) ==
          doctest::Approx(std::sqrt(1.0 / 12.0) * 4.0).epsilon(1e-14));
    // Exponential, uncentered: (p!)^{1/p}.
    const GridMeasure e = exponential_grid(40.0, 100001);
    CHECK(e.norm_ratio(2.0, 1.0, false) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
    CHECK(e.norm_ratio(4.0, 1.0, false) ==
          doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-7));
}

TEST_CASE("norm ratio is nondecreasing in p") {
    const GridMeasure m = random_log_concave(5);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 5.0}) {
        const double r = m.norm_ratio(p, 1.0, true);
        CHECK(r >= prev - 1e-12);
        prev = r;
    }
}

TEST_CASE("log laplace is convex in the rate") {
    const GridMeasure m = random_log_concave(17);
    const double lo = -0.8, hi = 0.8;
    std::vector<double> vals;
    for (int i = 0; i <= 32; ++i)
        vals.push_back(std::log(m.laplace(lo + (hi - lo) * i / 32.0)));
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        CHECK(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] >= -1e-9);
}

TEST_CASE("first moment of tilt equals the log-laplace derivative") {
    const GridMeasure e = exponential_grid(40.0, 200001);
    const double g = 0.6, h = 1e-5;
    const double lhs = e.tilt(g).moment_abs(1.0);
    const double rhs =
        -(std::log(e.laplace(g + h)) - std::log(e.laplace(g - h))) / (2.0 * h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("wasserstein distance on known pairs") {
    const GridMeasure u = uniform01();
    const GridMeasure shifted({0.3, 1.3}, {1.0, 1.0});
    CHECK(u.wasserstein1(shifted) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(u.wasserstein1(u) == doctest::Approx(0.0));

    const GridMeasure mid = GridMeasure::atoms_only({{0.5, 1.0}});
    CHECK(u.wasserstein1(mid) == doctest::Approx(0.25).epsilon(1e-14));

    const GridMeasure d0 = GridMeasure::atoms_only({{0.0, 1.0}});
    const GridMeasure d1 = GridMeasure::atoms_only({{1.0, 3.0}});  // renormalized
    CHECK(d0.wasserstein1(d1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("log-concavity detection") {
    // Gaussian: log f = -t^2, concave.
    std::vector<double> x, f;
    for (int i = -200; i <= 200; ++i) {
        x.push_back(0.03 * i);
        f.push_back(std::exp(-x.back() * x.back()));
    }
    CHECK(GridMeasure(x, f).is_log_concave());

    // Convex log-density e^{+t^2} on [-1,1].
    std::vector<double> xc, fc;
    for (int i = -100; i <= 100; ++i) {
        xc.push_back(0.01 * i);
        fc.push_back(std::exp(xc.back() * xc.back()));
    }
    const auto convex_report = GridMeasure(xc, fc).log_concavity_report();
    CHECK(!convex_report.flag);
    CHECK(convex_report.worst_violation > 0.0);

    // Bimodal mixture: log-concavity fails between the modes.
    std::vector<double> g;
    for (double t : x)
        g.push_back(std::exp(-t * t) + std::exp(-(t - 4.0) * (t - 4.0)));
    const auto bimodal = GridMeasure(x, g).log_concavity_report();
    CHECK(!bimodal.flag);
    CHECK(bimodal.location > 0.0);  // violation sits between the modes
    CHECK(bimodal.location < 4.0);

    CHECK(uniform01().is_log_concave());

    // Binomial masses C(6,k): log-concave sequence on a lattice.
    CHECK(GridMeasure::atoms_only(
              {{0, 1}, {1, 6}, {2, 15}, {3, 20}, {4, 15}, {5, 6}, {6, 1}})
              .is_log_concave());
    CHECK(!GridMeasure::atoms_only({{0, 1}, {1, 0.1}, {2, 1}}).is_log_concave());
    CHECK_THROWS_AS(
        GridMeasure::atoms_only({{0, 1}, {1, 1}, {3, 1}}).is_log_concave(),
        Error);
    CHECK_THROWS_AS(
        GridMeasure({0.0, 1.0}, {1.0, 1.0}, {{0.5, 1.0}}).is_log_concave(),
        Error);
    CHECK_THROWS_AS(GridMeasure::atoms_only({{0.0, 1.0}}).is_log_concave(),
                    Error);
}

TEST_CASE("random log-concave measures are log-concave and reproducible") {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 1234567ULL}) {
        const GridMeasure m = random_log_concave(seed);
        CHECK(m.is_log_concave(1e-10));
        CHECK(m.total_mass() > 0.0);
        const GridMeasure again = random_log_concave(seed);
        CHECK(m.nodes() == again.nodes());
        CHECK(m.density() == again.density());
    }
    // Distinct seeds give distinct draws.
    CHECK(random_log_concave(1).nodes() != random_log_concave(2).nodes());
}

TEST_CASE("centered second-moment ratio stays below 2 on a seed sweep") {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const double r = random_log_concave(seed, 1201).norm_ratio(2.0, 1.0, true);
        worst = std::max(worst, r);
        CHECK(r <= 2.0);
    }
    CHECK(worst > 1.0);  // sanity: the bound is not vacuous
}

TEST_CASE("csv round trip is bit exact") {
    const GridMeasure m({-1.5, 0.0, 2.25}, {0.125, 1.0 / 3.0, 0.5},
                        {{0.75, 1e-3}, {-0.25, 0.125}});
    std::stringstream ss;
    m.write_csv(ss, {"config: demo"});
    const GridMeasure back = GridMeasure::read_csv(ss);
    CHECK(back.nodes() == m.nodes());
    CHECK(back.density() == m.density());
    REQUIRE(back.atoms().size() == m.atoms().size());
    for (std::size_t i = 0; i < m.atoms().size(); ++i) {
        CHECK(back.atoms()[i].location == m.atoms()[i].location);
        CHECK(back.atoms()[i].mass == m.atoms()[i].mass);
    }
    std::stringstream empty("# nothing\n");
    CHECK_THROWS_AS(GridMeasure::read_csv(empty), Error);
}

TEST_CASE("batched norm ratios agree between serial and parallel") {
    std::vector<GridMeasure> batch;
    for (std::uint64_t s = 1; s <= 16; ++s)
        batch.push_back(random_log_concave(s, 801));
    const auto serial = norm_ratios(batch, 3.0, 1.0, true, Exec::Serial);
    const auto parallel = norm_ratios(batch, 3.0, 1.0, true, Exec::OpenMP);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(serial[i] == parallel[i]);  // bit-identical by construction
}
