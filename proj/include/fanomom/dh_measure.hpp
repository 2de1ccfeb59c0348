#pragma once

#include <optional>
#include <vector>

#include "fanomom/grid_measure.hpp"
#include "fanomom/parallel.hpp"
#include "fanomom/rational.hpp"

namespace fanomom {

/// A point with exact rational coordinates.
using RationalPoint = std::vector<Rational>;

/// Affine map x -> coeffs . x + constant with exact rational data.
struct AffineMap {
    std::vector<Rational> coeffs;
    Rational constant;

    Rational operator()(const RationalPoint& x) const;
    double value(const std::vector<double>& x) const;
};

/// Full-dimensional convex body presented by a list of rational points whose
/// convex hull it is.  Construction computes an exact simplicial
/// decomposition, the supporting halfspaces, and the rational volume.
///
/// Dimensions 1 and 2 accept arbitrary point lists (the hull is extracted
/// exactly); in dimension >= 3 the body must be a simplex (n + 1 affinely
/// independent points) or come from the cube() preset, which carries its own
/// standard triangulation.
class ConvexBody {
  public:
    /// a . x <= b, with exact rational data.
    struct HalfSpace {
        std::vector<Rational> normal;
        Rational offset;
    };

    ConvexBody(int dimension, std::vector<RationalPoint> points);

    /// The segment [0,1] on the line.
    static ConvexBody segment();
    /// Standard simplex { x >= 0, sum x_i <= 1 } in the given dimension.
    static ConvexBody simplex(int dimension);
    /// Unit cube [0,1]^n; supported up to dimension 6 (its decomposition has
    /// n! simplices).
    static ConvexBody cube(int dimension);

    int dimension() const { return dim_; }
    /// Hull vertices after exact deduplication (dimensions 1-2: extreme
    /// points in hull order; dimension >= 3: the given simplex vertices or
    /// the cube's 2^n corners).
    const std::vector<RationalPoint>& vertices() const { return vertices_; }
    /// Partition into nondegenerate simplices, each a list of dimension + 1
    /// vertex indices.
    const std::vector<std::vector<int>>& simplices() const { return simplices_; }
    /// Supporting halfspaces; a point lies in the body iff it satisfies all.
    const std::vector<HalfSpace>& facets() const { return facets_; }
    /// Exact Lebesgue volume (sum of simplex determinants / n!).
    const Rational& volume() const { return volume_; }
    bool contains(const RationalPoint& x) const;

  private:
    ConvexBody() = default;

    int dim_ = 0;
    std::vector<RationalPoint> vertices_;
    std::vector<std::vector<int>> simplices_;
    std::vector<HalfSpace> facets_;
    Rational volume_;
};

/// Concave piecewise-linear function on a convex body, presented as the
/// minimum of finitely many affine maps with rational coefficients.  This is
/// the combinatorial datum of a toric test configuration: its level-k weight
/// measures come from pure lattice enumeration, and their weak limit is the
/// pushforward of the normalized Lebesgue measure on the body.
class ToricTestConfig {
  public:
    /// With require_nonnegative set, f must be >= 0 on the body; since f is
    /// concave it suffices to check the hull vertices, which is done exactly.
    ToricTestConfig(ConvexBody body, std::vector<AffineMap> pieces,
                    bool require_nonnegative = false);

    const ConvexBody& body() const { return body_; }
    const std::vector<AffineMap>& pieces() const { return pieces_; }

    /// min over pieces, exact.
    Rational operator()(const RationalPoint& x) const;

    /// When a single piece attains the minimum at every hull vertex the
    /// function is affine on the whole body (the excess of any piece is
    /// convex, so vanishing at the vertices forces it to vanish on the hull);
    /// returns that piece, or nothing if the function genuinely kinks.
    std::optional<AffineMap> affine_on_body() const;

  private:
    ConvexBody body_;
    std::vector<AffineMap> pieces_;
};

/// Level-k weight enumeration of a toric test configuration: the multiset of
/// integer weights k f(m/k) over lattice points m of the k-fold dilated body,
/// the empirical probability measure of the rescaled weights, and (when the
/// function is affine on the body) the exact weak limit.
struct WeightLevel {
    long long level;
    /// Sorted ascending, one entry per lattice point.
    std::vector<long long> weights;
    long long count;
    /// (1/N) sum of point masses at weight/level; total mass 1.
    GridMeasure empirical;
    /// Pushforward limit when the function is affine on the body; otherwise
    /// empty (the limit of a kinked function is not a single affine
    /// pushforward and is not computed here).
    std::optional<GridMeasure> limit;
};

/// Pushforward of the normalized Lebesgue measure on the body under an affine
/// functional.  Per simplex of the decomposition the pushforward density is
/// the spline with knots at the vertex values (degree dimension - 1), and the
/// total density is the volume-weighted sum.  In dimensions 1 and 2 the
/// density is piecewise linear with kinks exactly at the knots, all of which
/// are grid nodes, so the returned measure is exact (total mass 1 up to
/// rounding); in higher dimension the exact spline is evaluated pointwise on
/// the node grid, so the piecewise-linear total mass differs from 1 by the
/// sampling error (all downstream moment routines normalize internally).
/// The grid joins all knots with `resolution` equal steps across the value
/// range (resolution >= 100).  A functional that is constant on the body
/// yields a single point mass.
GridMeasure okounkov_pushforward(const ConvexBody& body,
                                 const AffineMap& functional, int resolution,
                                 Exec exec = Exec::OpenMP);

/// Enumerates the lattice points of the k-fold dilation of the body, assigns
/// each the exact weight k f(m/k), and packages the results as a WeightLevel.
/// Weights must be integers; a lattice point whose weight has a nontrivial
/// denominator (the level fails to clear the denominators of f) throws
/// NonIntegralWeights.  `resolution` is passed through to the limit
/// pushforward when the function is affine on the body.  Enumeration runs
/// parallel over slabs of the outermost coordinate, and the per-slab results
/// are merged in slab order, so the output is independent of the execution
/// policy and thread count.
WeightLevel toric_weights(const ToricTestConfig& config, long long level,
                          int resolution = 400, Exec exec = Exec::OpenMP);

/// L^p data of a measure (normalized to probability): uncentered norm
/// (int |t|^p)^(1/p), barycenter c = int t, and centered norm
/// (int |t-c|^p)^(1/p).  All three are closed-form segment/atom sums.
struct NormRecord {
    double uncentered;
    double centered;
    double barycenter;
};
NormRecord measure_norms(const GridMeasure& m, double p);

/// The dimensional reverse Hoelder constant n + 1.
double dimension_ratio_bound(int n);

/// Reference envelope for reverse Hoelder ratios of log-concave laws: the
/// exponential law's (p!)^(1/p) rescaled so that p = 2 calibrates to the
/// centered second-moment constant 2, i.e. sqrt(2) (p!)^(1/p).  Recorded for
/// reporting; it is a calibration curve, not a proved sharp constant.
double kahane_khinchin_envelope(double p);

/// One sweep entry of reverse_holder_report.
struct ReverseHolderRow {
    double p;
    /// (int |t|^p)^(1/p) / int |t|, uncentered.
    double ratio;
    /// (int |t-c|^p)^(1/p) / int |t-c|, centered at the barycenter.
    double ratio_centered;
    /// ratio <= n + 1 (meaningful under nonnegative support with concave
    /// n-th-root tails; the hypotheses are reported alongside).
    bool within_dimension_bound;
    /// ratio_centered <= kahane_khinchin_envelope(p).
    bool within_envelope;
};

/// Reverse Hoelder sweep: per-p norm ratios with the two structural
/// hypotheses under which each bound is expected -- nonnegative support plus
/// concavity of the n-th root of the right tail for the dimensional bound,
/// log-concavity for the envelope.  The tail check evaluates
/// T(x) = mass((x, infty)) at the natural grid (density nodes and atom
/// locations) and reports the worst positive second divided difference of
/// T^(1/n); log-concavity is left empty when the representation admits no
/// verdict (mixed density plus atoms, or fewer than three support points).
struct ReverseHolderReport {
    bool support_nonnegative;
    double tail_root_defect;
    bool tail_root_concave;
    std::optional<bool> log_concave;
    std::vector<ReverseHolderRow> rows;
};
ReverseHolderReport reverse_holder_report(const GridMeasure& m, int n,
                                          const std::vector<double>& p_list);

/// Weight measure of the degeneration of projective n-space obtained by
/// blowing up a torus-fixed point with exceptional weight eps, at level k.
/// Sections of degree k are graded by their order of vanishing j at the
/// point; the graded piece has dimension C(j + n - 1, n - 1) (monomials of
/// vanishing order exactly j) and every section in it carries weight
/// min(j, k eps): vanishing to order j buys j twists, but the exceptional
/// multiplier caps the usable amount at k eps.  The report carries the
/// log-concavity verdict of the empirical measure (the cap piles mass on the
/// top atom, which breaks log-concavity), centered norm ratios across p, and
/// their growth; the limit measure is the radial density n t^(n-1) on
/// [0, eps] capped by an atom of mass 1 - eps^n at eps.
struct NormalConeReport {
    WeightLevel data;
    /// Verdict of the empirical lattice measure (expected false for
    /// 0 < eps < 1); degenerate piles with fewer than three atoms count as
    /// trivially log-concave.
    bool log_concave;
    /// Worst positive second divided difference of the log mass sequence.
    double log_concavity_defect;
    /// The p sweep {2, 3, 4, 8} truncated at p_max.
    std::vector<double> p_list;
    /// Centered ratios (int |t-c|^p)^(1/p) / int |t-c| of the empirical
    /// measure; empty when the centered first moment vanishes (eps = 0).
    std::vector<double> centered_ratios;
    /// Last ratio over first ratio (0 when ratios are empty).
    double growth_factor;
    /// n / (n - 1), the exponent past which no uniform reverse Hoelder
    /// constant exists for this family.
    double critical_exponent;
};
NormalConeReport normal_cone_weights(int n, const Rational& eps, long long k,
                                     double p_max);

}  // namespace fanomom
