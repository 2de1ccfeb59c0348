#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "fanomom/dh_measure.hpp"
#include "fanomom/errors.hpp"

using namespace fanomom;

namespace {

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

template <class F>
std::optional<ErrorCode> thrown_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

AffineMap coordinate(int dim, int axis) {
    AffineMap m;
    m.coeffs.assign(dim, Rational(0));
    m.coeffs[axis] = Rational(1);
    m.constant = Rational(0);
    return m;
}

AffineMap coordinate_sum(int dim) {
    AffineMap m;
    m.coeffs.assign(dim, Rational(1));
    m.constant = Rational(0);
    return m;
}

}  // namespace

TEST_CASE("affine maps and bodies validate their inputs") {
    const AffineMap f{{Rational(2), Rational(-1)}, Rational(1, 2)};
    CHECK(f({Rational(1, 2), Rational(3)}) == Rational(-3, 2));
    CHECK(f.value({0.5, 3.0}) == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(thrown_code([&] { f({Rational(1)}); }) == ErrorCode::BadInput);

    CHECK(thrown_code([] { ConvexBody(0, {{}}); }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              ConvexBody(2, {{Rational(0)}});
          }) == ErrorCode::BadInput);
    // No interior: a single point on the line, collinear points in the plane.
    CHECK(thrown_code([] {
              ConvexBody(1, {{Rational(3)}, {Rational(3)}});
          }) == ErrorCode::DegenerateBody);
    CHECK(thrown_code([] {
              ConvexBody(2, {{Rational(0), Rational(0)},
                             {Rational(1), Rational(1)},
                             {Rational(2), Rational(2)}});
          }) == ErrorCode::DegenerateBody);
    // Dimension >= 3 needs a simplex presentation or the cube preset.
    CHECK(thrown_code([] {
              ConvexBody(3, {{Rational(0), Rational(0), Rational(0)},
                             {Rational(1), Rational(0), Rational(0)},
                             {Rational(0), Rational(1), Rational(0)},
                             {Rational(0), Rational(0), Rational(1)},
                             {Rational(1), Rational(1), Rational(1)}});
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              ConvexBody(3, {{Rational(0), Rational(0), Rational(0)},
                             {Rational(1), Rational(0), Rational(0)},
                             {Rational(0), Rational(1), Rational(0)},
                             {Rational(1), Rational(1), Rational(0)}});
          }) == ErrorCode::DegenerateBody);
    CHECK(thrown_code([] { ConvexBody::cube(7); }) == ErrorCode::BadInput);

    CHECK(thrown_code([] {
              ToricTestConfig(ConvexBody::segment(), {});
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              ToricTestConfig(ConvexBody::segment(),
                              {{{Rational(1), Rational(0)}, Rational(0)}});
          }) == ErrorCode::BadInput);
    // Nonnegativity is checked exactly at the vertices.
    CHECK(thrown_code([] {
              ToricTestConfig(
                  ConvexBody::segment(),
                  {{{Rational(1)}, Rational(0)},
                   {{Rational(1)}, Rational(-1, 2)}},
                  true);
          }) == ErrorCode::BadInput);
    CHECK(!thrown_code([] {
        ToricTestConfig(ConvexBody::segment(),
                        {{{Rational(1)}, Rational(0)},
                         {{Rational(-1)}, Rational(1)}},
                        true);
    }));
}

TEST_CASE("bodies report exact volume, hull, and facets") {
    const ConvexBody seg = ConvexBody::segment();
    CHECK(seg.volume() == Rational(1));
    CHECK(seg.vertices().size() == 2);

    // Hull extraction drops duplicates and interior points and orders the
    // boundary; the volume is the exact fan sum.
    const ConvexBody square(2, {{Rational(1), Rational(1)},
                                {Rational(0), Rational(0)},
                                {Rational(1), Rational(0)},
                                {Rational(0), Rational(1)},
                                {Rational(1), Rational(0)},
                                {Rational(1, 2), Rational(1, 2)}});
    CHECK(square.volume() == Rational(1));
    CHECK(square.vertices().size() == 4);
    CHECK(square.facets().size() == 4);
    CHECK(square.contains({Rational(1, 3), Rational(2, 3)}));
    CHECK(square.contains({Rational(1), Rational(1)}));
    CHECK(!square.contains({Rational(1), Rational(13, 12)}));

    CHECK(ConvexBody::simplex(2).volume() == Rational(1, 2));
    CHECK(ConvexBody::simplex(3).volume() == Rational(1, 6));
    CHECK(ConvexBody::simplex(4).volume() == Rational(1, 24));
    CHECK(ConvexBody::cube(3).volume() == Rational(1));
    CHECK(ConvexBody::cube(3).simplices().size() == 6);

    const ConvexBody s3 = ConvexBody::simplex(3);
    CHECK(s3.facets().size() == 4);
    CHECK(s3.contains({Rational(1, 4), Rational(1, 4), Rational(1, 4)}));
    CHECK(!s3.contains({Rational(1, 2), Rational(1, 2), Rational(1, 4)}));
    const ConvexBody c3 = ConvexBody::cube(3);
    CHECK(c3.contains({Rational(1, 2), Rational(0), Rational(1)}));
    CHECK(!c3.contains({Rational(1, 2), Rational(0), Rational(5, 4)}));
}

TEST_CASE("pushforward of a segment is uniform") {
    const GridMeasure u =
        okounkov_pushforward(ConvexBody::segment(), coordinate(1, 0), 100);
    REQUIRE(u.has_density());
    for (double d : u.density()) CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.nodes().front() == 0.0);
    CHECK(u.nodes().back() == 1.0);
    CHECK(u.is_log_concave(1e-8));

    // Affine rescaling: 2x + 3 sends [0,1] to [3,5] with density 1/2.
    const GridMeasure v = okounkov_pushforward(
        ConvexBody::segment(), {{Rational(2)}, Rational(3)}, 100);
    CHECK(v.nodes().front() == 3.0);
    CHECK(v.nodes().back() == 5.0);
    for (double d : v.density()) CHECK(d == doctest::Approx(0.5).epsilon(1e-14));

    // A functional that is constant on the body pushes to a point mass.
    const GridMeasure dirac = okounkov_pushforward(
        ConvexBody::segment(), {{Rational(0)}, Rational(7, 2)}, 100);
    CHECK(!dirac.has_density());
    REQUIRE(dirac.atoms().size() == 1);
    CHECK(dirac.atoms()[0].location == 3.5);
    CHECK(dirac.atoms()[0].mass == 1.0);

    CHECK(thrown_code([] {
              okounkov_pushforward(ConvexBody::segment(), coordinate(1, 0), 50);
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              okounkov_pushforward(ConvexBody::segment(), coordinate(2, 0),
                                   100);
          }) == ErrorCode::BadInput);
}

TEST_CASE("simplex and cube pushforwards match closed forms") {
    // 2-simplex under x: the slab length shrinks linearly, density 2(1-t).
    const GridMeasure tri =
        okounkov_pushforward(ConvexBody::simplex(2), coordinate(2, 0), 100);
    for (std::size_t i = 0; i < tri.nodes().size(); ++i)
        CHECK(std::fabs(tri.density()[i] - 2.0 * (1.0 - tri.nodes()[i])) <
              1e-13);
    CHECK(tri.is_log_concave(1e-8));
    CHECK(tri.total_mass() == doctest::Approx(1.0).epsilon(1e-13));

    // Unit square under x + y: the sum of two uniforms, symmetric triangular
    // density on [0,2].
    const GridMeasure sq =
        okounkov_pushforward(ConvexBody::cube(2), coordinate_sum(2), 100);
    for (std::size_t i = 0; i < sq.nodes().size(); ++i)
        CHECK(std::fabs(sq.density()[i] -
                        (1.0 - std::fabs(1.0 - sq.nodes()[i]))) < 1e-13);
    CHECK(sq.is_log_concave(1e-8));

    // 3-simplex under x: density 3(1-t)^2, evaluated exactly at the nodes.
    const GridMeasure s3 =
        okounkov_pushforward(ConvexBody::simplex(3), coordinate(3, 0), 200);
    for (std::size_t i = 0; i < s3.nodes().size(); ++i) {
        const double t = s3.nodes()[i];
        CHECK(std::fabs(s3.density()[i] - 3.0 * (1.0 - t) * (1.0 - t)) <
              1e-12);
    }
    CHECK(s3.is_log_concave(1e-8));

    // Cube under x + y + z: the three-fold uniform convolution.
    const GridMeasure c3 =
        okounkov_pushforward(ConvexBody::cube(3), coordinate_sum(3), 200);
    const auto convolved = [](double t) {
        if (t < 1.0) return 0.5 * t * t;
        if (t < 2.0) return 0.5 * (-2.0 * t * t + 6.0 * t - 3.0);
        return 0.5 * (3.0 - t) * (3.0 - t);
    };
    for (std::size_t i = 0; i < c3.nodes().size(); ++i)
        CHECK(std::fabs(c3.density()[i] - convolved(c3.nodes()[i])) < 1e-12);
    CHECK(c3.is_log_concave(1e-8));
}

TEST_CASE("pushforwards of random bodies are log-concave") {
    int polygons = 0;
    for (std::uint64_t seed = 1; seed <= 14; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> coord(0, 16);
        std::uniform_int_distribution<int> slope(-8, 8);
        std::vector<RationalPoint> pts;
        for (int i = 0; i < 6; ++i)
            pts.push_back({Rational(coord(rng), 8), Rational(coord(rng), 8)});
        const int a = slope(rng);
        const int b = slope(rng);
        if (a == 0 && b == 0) continue;
        try {
            const ConvexBody body(2, std::move(pts));
            const GridMeasure push = okounkov_pushforward(
                body, {{Rational(a, 4), Rational(b, 4)}, Rational(0)}, 300);
            if (!push.has_density()) continue;  // functional constant on body
            CHECK(push.is_log_concave(1e-8));
            ++polygons;
        } catch (const Error& e) {
            // Degenerate draws (collinear points) are skipped, not failures.
            CHECK(e.code() == ErrorCode::DegenerateBody);
        }
    }
    CHECK(polygons >= 8);

    int simplices = 0;
    for (std::uint64_t seed = 31; seed <= 40; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> coord(-8, 8);
        std::uniform_int_distribution<int> slope(-4, 4);
        std::vector<RationalPoint> pts;
        for (int i = 0; i < 4; ++i)
            pts.push_back({Rational(coord(rng), 4), Rational(coord(rng), 4),
                           Rational(coord(rng), 4)});
        const int a = slope(rng), b = slope(rng), c = slope(rng);
        if (a == 0 && b == 0 && c == 0) continue;
        try {
            const ConvexBody body(3, std::move(pts));
            const GridMeasure push = okounkov_pushforward(
                body,
                {{Rational(a, 2), Rational(b, 2), Rational(c, 2)},
                 Rational(0)},
                300);
            if (!push.has_density()) continue;
            CHECK(push.is_log_concave(1e-8));
            ++simplices;
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateBody);
        }
    }
    CHECK(simplices >= 6);
}

TEST_CASE("linear segment family: weights, limit, and convergence") {
    const ToricTestConfig cfg(ConvexBody::segment(),
                              {{{Rational(1)}, Rational(0)}}, true);
    const WeightLevel w10 = toric_weights(cfg, 10);
    CHECK(w10.count == 11);
    REQUIRE(w10.weights.size() == 11);
    for (int i = 0; i <= 10; ++i) CHECK(w10.weights[i] == i);
    REQUIRE(w10.empirical.atoms().size() == 11);
    CHECK(w10.empirical.atoms()[3].location ==
          doctest::Approx(0.3).epsilon(1e-15));
    CHECK(w10.empirical.atoms()[3].mass ==
          doctest::Approx(1.0 / 11).epsilon(1e-15));
    CHECK(w10.empirical.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(w10.limit.has_value());

    // The distance from the equispaced empirical measure to its uniform limit
    // has the closed form (2k+1)/(6k(k+1)), well inside 2/k.
    for (long long k : {10LL, 20LL, 40LL, 80LL}) {
        const WeightLevel wl = toric_weights(cfg, k);
        const double dist = wl.empirical.wasserstein1(*wl.limit);
        const double closed =
            (2.0 * k + 1.0) / (6.0 * k * (k + 1.0));
        CHECK(std::fabs(dist - closed) < 1e-14);
        CHECK(dist <= 2.0 / k);
    }

    // The constant function degenerates to the trivial configuration: every
    // weight zero, all norms zero.
    const ToricTestConfig trivial(ConvexBody::segment(),
                                  {{{Rational(0)}, Rational(0)}}, true);
    const WeightLevel tz = toric_weights(trivial, 10);
    for (long long w : tz.weights) CHECK(w == 0);
    REQUIRE(tz.empirical.atoms().size() == 1);
    CHECK(tz.empirical.atoms()[0].location == 0.0);
    REQUIRE(tz.limit.has_value());
    REQUIRE(tz.limit->atoms().size() == 1);
    CHECK(tz.limit->atoms()[0].location == 0.0);
    const NormRecord nrm = measure_norms(tz.empirical, 2.0);
    CHECK(nrm.uncentered == 0.0);
    CHECK(nrm.centered == 0.0);
    CHECK(nrm.barycenter == 0.0);

    // A level too small for the dilated body to catch lattice points.
    const ConvexBody thin(1, {{Rational(1, 3)}, {Rational(2, 3)}});
    const ToricTestConfig thin_cfg(thin, {{{Rational(1)}, Rational(0)}});
    CHECK(thrown_code([&] { toric_weights(thin_cfg, 1); }) ==
          ErrorCode::InsufficientSupport);
    CHECK(thrown_code([&] { toric_weights(cfg, 0); }) == ErrorCode::BadInput);
}

TEST_CASE("piecewise functions drop the limit but keep weights") {
    const ToricTestConfig tent(
        ConvexBody::segment(),
        {{{Rational(1)}, Rational(0)}, {{Rational(-1)}, Rational(1)}}, true);
    CHECK(!tent.affine_on_body().has_value());
    const WeightLevel w = toric_weights(tent, 10);
    CHECK(w.count == 11);
    const std::vector<long long> want = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5};
    CHECK(w.weights == want);
    CHECK(!w.limit.has_value());
    CHECK(w.empirical.total_mass() == doctest::Approx(1.0).epsilon(1e-14));

    // A two-piece presentation where one piece dominates everywhere still
    // recognizes the function as affine.
    const ToricTestConfig shadowed(
        ConvexBody::segment(),
        {{{Rational(1)}, Rational(0)}, {{Rational(1)}, Rational(2)}}, true);
    REQUIRE(shadowed.affine_on_body().has_value());
    CHECK(shadowed.affine_on_body()->constant == Rational(0));

    // Triangle under min(x, y): kink along the diagonal, weights exact.
    const ToricTestConfig corner(
        ConvexBody::simplex(2),
        {coordinate(2, 0), coordinate(2, 1)}, true);
    const WeightLevel cw = toric_weights(corner, 4);
    CHECK(cw.count == 15);
    long long total = 0;
    for (long long x : cw.weights) total += x;
    // min(i, j) summed over i + j <= 4: the interior points (1,1), (1,2),
    // (1,3), (2,1), (2,2), (3,1) contribute 1 + 1 + 1 + 1 + 2 + 1 = 7.
    CHECK(total == 7);
    CHECK(!cw.limit.has_value());
}

TEST_CASE("weight enumeration rejects non-integral weights") {
    // Constant term 1/3: level 10 leaves a remainder, level 9 clears it.
    const ToricTestConfig shift(ConvexBody::segment(),
                                {{{Rational(1)}, Rational(1, 3)}}, true);
    CHECK(thrown_code([&] { toric_weights(shift, 10); }) ==
          ErrorCode::NonIntegralWeights);
    const WeightLevel ok = toric_weights(shift, 9);
    CHECK(ok.weights.front() == 3);
    CHECK(ok.weights.back() == 12);

    // Fractional slope 1/2 fails at odd lattice points for every level.
    const ToricTestConfig half(ConvexBody::segment(),
                               {{{Rational(1, 2)}, Rational(0)}}, true);
    CHECK(thrown_code([&] { toric_weights(half, 10); }) ==
          ErrorCode::NonIntegralWeights);
}

TEST_CASE("norm records on closed-form measures") {
    const GridMeasure uniform({0.0, 1.0}, {1.0, 1.0});
    const NormRecord p1 = measure_norms(uniform, 1.0);
    CHECK(rel_err(p1.uncentered, 0.5) < 1e-14);
    CHECK(rel_err(p1.barycenter, 0.5) < 1e-14);
    CHECK(rel_err(p1.centered, 0.25) < 1e-14);
    const NormRecord p2 = measure_norms(uniform, 2.0);
    CHECK(rel_err(p2.centered, 1.0 / std::sqrt(12.0)) < 1e-14);
    CHECK(rel_err(p2.uncentered, 1.0 / std::sqrt(3.0)) < 1e-14);

    CHECK(thrown_code([&] { measure_norms(uniform, 0.5); }) ==
          ErrorCode::DomainError);
}

TEST_CASE("reverse Hoelder report: dimensional bound families") {
    const std::vector<double> ps = {1.0, 2.0, 4.0, 8.0};

    // Uniform on [0,1]: tail 1 - t, concave; ratios (1/(p+1))^(1/p) / (1/2).
    // (Enough nodes for the log-concavity scan to have interior points.)
    std::vector<double> un, ud;
    for (int i = 0; i <= 10; ++i) {
        un.push_back(i / 10.0);
        ud.push_back(1.0);
    }
    const GridMeasure uniform(un, ud);
    const ReverseHolderReport ru = reverse_holder_report(uniform, 1, ps);
    CHECK(ru.support_nonnegative);
    CHECK(ru.tail_root_concave);
    CHECK(ru.tail_root_defect < 1e-10);
    REQUIRE(ru.log_concave.has_value());
    CHECK(*ru.log_concave);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double p = ps[i];
        const double want = std::pow(1.0 / (p + 1.0), 1.0 / p) / 0.5;
        CHECK(rel_err(ru.rows[i].ratio, want) < 1e-12);
        CHECK(ru.rows[i].within_dimension_bound);
        CHECK(ru.rows[i].within_envelope);
    }
    CHECK(rel_err(ru.rows[2].ratio, std::pow(0.2, 0.25) * 2.0) < 1e-12);

    // Triangular 2(1-t) (the 2-simplex slab pushforward): tail (1-t)^2 with
    // concave square root; moments 2/((p+1)(p+2)).
    const GridMeasure tri =
        okounkov_pushforward(ConvexBody::simplex(2), coordinate(2, 0), 200);
    const ReverseHolderReport rt = reverse_holder_report(tri, 2, ps);
    CHECK(rt.support_nonnegative);
    CHECK(rt.tail_root_concave);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double p = ps[i];
        const double want =
            std::pow(2.0 / ((p + 1.0) * (p + 2.0)), 1.0 / p) * 3.0;
        CHECK(rel_err(rt.rows[i].ratio, want) < 1e-10);
        CHECK(rt.rows[i].within_dimension_bound);
    }

    // Square under x + y, a genuinely two-dimensional slab example.
    const GridMeasure sq =
        okounkov_pushforward(ConvexBody::cube(2), coordinate_sum(2), 200);
    const ReverseHolderReport rs = reverse_holder_report(sq, 2, ps);
    CHECK(rs.support_nonnegative);
    CHECK(rs.tail_root_concave);
    for (const auto& row : rs.rows) CHECK(row.within_dimension_bound);

    // The equispaced empirical measures of the linear family satisfy the
    // discrete version exactly: the right tail at the atoms is linear.
    const ToricTestConfig cfg(ConvexBody::segment(),
                              {{{Rational(1)}, Rational(0)}}, true);
    for (long long k : {10LL, 40LL, 80LL}) {
        const WeightLevel wl = toric_weights(cfg, k);
        const ReverseHolderReport re =
            reverse_holder_report(wl.empirical, 1, ps);
        CHECK(re.support_nonnegative);
        CHECK(re.tail_root_concave);
        CHECK(re.tail_root_defect < 1e-10);
        for (const auto& row : re.rows) CHECK(row.within_dimension_bound);
    }
}

TEST_CASE("reverse Hoelder report: hypotheses and degenerate cases") {
    // Negative support is reported; the ratio columns still compute.
    const GridMeasure sym({-1.0, 1.0}, {0.5, 0.5});
    const ReverseHolderReport rs =
        reverse_holder_report(sym, 1, {2.0, 4.0});
    CHECK(!rs.support_nonnegative);
    CHECK(rs.rows[0].ratio > 1.0);

    // Mixed density plus atoms: no log-concavity verdict, everything else
    // reported.
    const GridMeasure mixed({0.0, 1.0}, {1.0, 1.0}, {{0.5, 0.5}});
    const ReverseHolderReport rm = reverse_holder_report(mixed, 1, {2.0});
    CHECK(!rm.log_concave.has_value());
    CHECK(rm.support_nonnegative);

    // Non-concave tail root: two well separated blocks of equal mass fail
    // the concavity scan (convex kink where the flat stretch begins).
    const GridMeasure bimodal({0.0, 0.1, 0.45, 0.55, 0.9, 1.0},
                              {5.0, 5.0, 0.0, 0.0, 5.0, 5.0});
    const ReverseHolderReport rb = reverse_holder_report(bimodal, 1, {2.0});
    CHECK(rb.tail_root_defect > 1e-3);
    CHECK(!rb.tail_root_concave);

    CHECK(thrown_code([&] { reverse_holder_report(sym, 0, {2.0}); }) ==
          ErrorCode::BadInput);
    CHECK(thrown_code([&] { reverse_holder_report(sym, 1, {}); }) ==
          ErrorCode::BadInput);
    CHECK(thrown_code([&] { reverse_holder_report(sym, 1, {0.5}); }) ==
          ErrorCode::DomainError);

    CHECK(rel_err(kahane_khinchin_envelope(2.0), 2.0) < 1e-14);
    CHECK(dimension_ratio_bound(2) == 3.0);
}

TEST_CASE("vanishing-order weights: hand-checked small levels") {
    // Degree-2 sections in the plane: six monomials, graded by vanishing
    // order 0, 1, 2 at the fixed point with multiplicities 1, 2, 3; cap at
    // level * eps = 1.
    const NormalConeReport h2 = normal_cone_weights(2, Rational(1, 2), 2, 8.0);
    CHECK(h2.data.count == 6);
    const std::vector<long long> want2 = {0, 1, 1, 1, 1, 1};
    CHECK(h2.data.weights == want2);
    REQUIRE(h2.data.empirical.atoms().size() == 2);
    CHECK(h2.data.empirical.atoms()[0].location == 0.0);
    CHECK(rel_err(h2.data.empirical.atoms()[0].mass, 1.0 / 6.0) < 1e-15);
    CHECK(h2.data.empirical.atoms()[1].location == 0.5);
    CHECK(rel_err(h2.data.empirical.atoms()[1].mass, 5.0 / 6.0) < 1e-15);

    // Degree 3, cap 1: orders 0..3 have multiplicities 1, 2, 3, 4.
    const NormalConeReport h3 = normal_cone_weights(2, Rational(1, 3), 3, 8.0);
    CHECK(h3.data.count == 10);
    REQUIRE(h3.data.empirical.atoms().size() == 2);
    CHECK(rel_err(h3.data.empirical.atoms()[0].mass, 0.1) < 1e-15);
    CHECK(rel_err(h3.data.empirical.atoms()[1].mass, 0.9) < 1e-15);
    CHECK(h3.data.empirical.atoms()[1].location ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // Dimension 3 total count: C(k + 3, 3).
    const NormalConeReport h4 = normal_cone_weights(3, Rational(1, 5), 5, 8.0);
    CHECK(h4.data.count == 56);

    CHECK(thrown_code([] {
              normal_cone_weights(1, Rational(1, 10), 60, 8.0);
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              normal_cone_weights(2, Rational(1, 7), 60, 8.0);
          }) == ErrorCode::NonIntegralWeights);
    CHECK(thrown_code([] {
              normal_cone_weights(2, Rational(3, 2), 60, 8.0);
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([] {
              normal_cone_weights(2, Rational(1, 10), 60, 1.5);
          }) == ErrorCode::BadInput);
}

TEST_CASE("normal-cone example fails log-concavity with climbing ratios") {
    const NormalConeReport rep =
        normal_cone_weights(2, Rational(1, 10), 60, 8.0);
    CHECK(rep.data.count == 1891);
    CHECK(rep.critical_exponent == 2.0);

    // The cap piles most of the mass onto the top atom, which destroys
    // log-concavity of the weight sequence.
    CHECK(!rep.log_concave);
    CHECK(rep.log_concavity_defect > 1e3);

    REQUIRE(rep.p_list.size() == 4);
    REQUIRE(rep.centered_ratios.size() == 4);
    for (std::size_t i = 1; i < rep.centered_ratios.size(); ++i)
        CHECK(rep.centered_ratios[i] > rep.centered_ratios[i - 1]);
    CHECK(rep.growth_factor >= 1.25);

    // Regression values for this level (not external constants).
    CHECK(rel_err(rep.centered_ratios[0], 5.4734426422) < 1e-9);
    CHECK(rel_err(rep.centered_ratios[1], 12.7891688931) < 1e-9);
    CHECK(rel_err(rep.centered_ratios[2], 20.0952089371) < 1e-9);
    CHECK(rel_err(rep.centered_ratios[3], 42.0707239364) < 1e-9);

    // The two structural hypotheses split: the right tail of the empirical
    // measure is concave (the uncentered dimensional bound holds), while
    // log-concavity is what fails -- the centered ratios are the ones that
    // climb without a uniform constant.
    const ReverseHolderReport rh =
        reverse_holder_report(rep.data.empirical, 2, {1.0, 2.0, 4.0, 8.0});
    CHECK(rh.support_nonnegative);
    CHECK(rh.tail_root_concave);
    REQUIRE(rh.log_concave.has_value());
    CHECK(!*rh.log_concave);
    for (const auto& row : rh.rows) CHECK(row.within_dimension_bound);

    // The p = 4 over p = 2 spread widens with the level toward the limit
    // spread (regression trend, qualitative).
    double prev = 0.0;
    for (long long k : {20LL, 40LL, 80LL}) {
        const NormalConeReport r =
            normal_cone_weights(2, Rational(1, 10), k, 8.0);
        const double spread = r.centered_ratios[2] / r.centered_ratios[0];
        CHECK(spread > prev);
        prev = spread;
    }
}

TEST_CASE("normal-cone empirical converges to the capped radial limit") {
    // The limit measure integrates exactly: centered first norm against the
    // hand-computed closed form for density 2t on [0, eps] plus the pile
    // 1 - eps^2 at eps, with barycenter eps - eps^3/3.
    const auto closed_l1 = [](double e) {
        const double c = e - e * e * e / 3.0;
        return (2.0 / 3.0) * c * c * c + (2.0 / 3.0) * e * e * e -
               c * e * e + (1.0 - e * e) * e * e * e / 3.0;
    };
    const NormalConeReport rep =
        normal_cone_weights(2, Rational(1, 10), 60, 8.0);
    REQUIRE(rep.data.limit.has_value());
    const NormRecord lim = measure_norms(*rep.data.limit, 1.0);
    CHECK(rel_err(lim.centered, closed_l1(0.1)) < 1e-10);
    CHECK(rel_err(lim.barycenter, 0.1 - 0.001 / 3.0) < 1e-12);

    // Empirical-to-limit transport distance shrinks like 1/k.
    double prev = 1e9;
    for (long long k : {20LL, 40LL, 80LL}) {
        const NormalConeReport r =
            normal_cone_weights(2, Rational(1, 10), k, 8.0);
        const double d = r.data.empirical.wasserstein1(*r.data.limit);
        CHECK(d < prev);
        CHECK(d * k < 0.02);
        prev = d;
    }

    // Shrinking the exceptional weight scales the centered first norm like
    // eps^(n+1): the exact limit values for eps = 1/10 and 1/20 sit in the
    // ratio predicted by the closed form.
    const NormalConeReport ra =
        normal_cone_weights(2, Rational(1, 20), 80, 8.0);
    const NormRecord la = measure_norms(*ra.data.limit, 1.0);
    CHECK(rel_err(la.centered, closed_l1(0.05)) < 1e-10);
    CHECK(rel_err(closed_l1(0.1) / closed_l1(0.05), 8.0) < 0.01);

    // eps = 0 collapses to the trivial configuration.
    const NormalConeReport r0 = normal_cone_weights(2, Rational(0), 40, 8.0);
    REQUIRE(r0.data.empirical.atoms().size() == 1);
    CHECK(r0.data.empirical.atoms()[0].location == 0.0);
    const NormRecord n0 = measure_norms(r0.data.empirical, 2.0);
    CHECK(n0.uncentered == 0.0);
    CHECK(n0.centered == 0.0);
    CHECK(r0.centered_ratios.empty());
    CHECK(r0.growth_factor == 0.0);
    CHECK(r0.log_concave);
}

TEST_CASE("enumeration is independent of the execution policy") {
    const ToricTestConfig tent(
        ConvexBody::simplex(2),
        {coordinate(2, 0), coordinate(2, 1)}, true);
    const WeightLevel a = toric_weights(tent, 24, 400, Exec::Serial);
    const WeightLevel b = toric_weights(tent, 24, 400, Exec::OpenMP);
    CHECK(a.weights == b.weights);
    REQUIRE(a.empirical.atoms().size() == b.empirical.atoms().size());
    for (std::size_t i = 0; i < a.empirical.atoms().size(); ++i) {
        CHECK(a.empirical.atoms()[i].location ==
              b.empirical.atoms()[i].location);
        CHECK(a.empirical.atoms()[i].mass == b.empirical.atoms()[i].mass);
    }

    const GridMeasure pa = okounkov_pushforward(
        ConvexBody::cube(3), coordinate_sum(3), 300, Exec::Serial);
    const GridMeasure pb = okounkov_pushforward(
        ConvexBody::cube(3), coordinate_sum(3), 300, Exec::OpenMP);
    REQUIRE(pa.nodes().size() == pb.nodes().size());
    for (std::size_t i = 0; i < pa.nodes().size(); ++i) {
        CHECK(pa.nodes()[i] == pb.nodes()[i]);
        CHECK(pa.density()[i] == pb.density()[i]);
    }
}
