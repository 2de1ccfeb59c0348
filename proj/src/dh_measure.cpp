#include "fanomom/dh_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "fanomom/errors.hpp"

namespace fanomom {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && (a < 0) != (b < 0)) --q;
    return q;
}

std::int64_t floor_rational(const Rational& r) {
    return floor_div(r.num(), r.den());
}

std::int64_t ceil_rational(const Rational& r) {
    return -floor_div(-r.num(), r.den());
}

/// Determinant by fraction-free-enough Gaussian elimination (exact rational
/// pivots; row swaps tracked by sign).
Rational determinant(Matrix m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == Rational(0)) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == Rational(0)) continue;
            const Rational f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c)
                m[r][c] = m[r][c] - f * m[col][c];
        }
    }
    return det;
}

/// A nonzero solution of the (n-1) x n homogeneous system M a = 0 (rank
/// n - 1 assumed, which holds for the edge matrix of an affinely independent
/// point set).
std::vector<Rational> nullspace_vector(Matrix m, int n) {
    const int rows = static_cast<int>(m.size());
    std::vector<int> pivot_col(rows, -1);
    int row = 0;
    for (int col = 0; col < n && row < rows; ++col) {
        int piv = row;
        while (piv < rows && m[piv][col] == Rational(0)) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[row]);
        for (int r = row + 1; r < rows; ++r) {
            if (m[r][col] == Rational(0)) continue;
            const Rational f = m[r][col] / m[row][col];
            for (int c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[row][c];
        }
        pivot_col[row] = col;
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (int r = 0; r < row; ++r) is_pivot[pivot_col[r]] = true;
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    if (free_col < 0)
        throw Error(ErrorCode::DegenerateBody,
                    "facet system has full rank; points are not affinely "
                    "independent");
    std::vector<Rational> a(n, Rational(0));
    a[free_col] = Rational(1);
    for (int r = row - 1; r >= 0; --r) {
        const int pc = pivot_col[r];
        Rational s(0);
        for (int c = pc + 1; c < n; ++c) s = s + m[r][c] * a[c];
        a[pc] = -s / m[r][pc];
    }
    return a;
}

Rational dot(const std::vector<Rational>& a, const RationalPoint& x) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * x[i];
    return s;
}

/// Cross product (a - o) x (b - o) in the plane.
Rational cross(const RationalPoint& o, const RationalPoint& a,
               const RationalPoint& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool lex_less(const RationalPoint& a, const RationalPoint& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

/// Counterclockwise convex hull (monotone chain) with exact predicates;
/// collinear interior points are dropped.
std::vector<RationalPoint> convex_hull_2d(std::vector<RationalPoint> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.size();
    if (m < 3) return pts;
    std::vector<RationalPoint> hull(2 * m);
    std::size_t h = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (h >= 2 && !(Rational(0) < cross(hull[h - 2], hull[h - 1], pts[i])))
            --h;
        hull[h++] = pts[i];
    }
    for (std::size_t i = m - 1, lower = h + 1; i-- > 0;) {
        while (h >= lower && !(Rational(0) < cross(hull[h - 2], hull[h - 1], pts[i])))
            --h;
        hull[h++] = pts[i];
    }
    hull.resize(h - 1);
    return hull;
}

/// Spline density with the given sorted knots (the pushforward of the
/// uniform measure on a simplex whose vertex values are the knots),
/// normalized to unit mass.  The two-knot base case is the uniform density on
/// the half-open knot interval -- half-open so that a point on a shared knot
/// is counted by exactly one base interval; each level of the recursion
/// convexly blends the two (k-1)-knot splines.  Degenerate sub-ranges (zero
/// knot span) would be point masses, but they always enter multiplied by a
/// factor vanishing exactly at their location, so treating them as zero gives
/// the correct density everywhere.
double mspline_rec(const std::vector<double>& y, int lo, int hi, double t) {
    const double span = y[hi] - y[lo];
    if (!(span > 0.0)) return 0.0;
    if (t < y[lo] || t >= y[hi]) return 0.0;
    const int k = hi - lo;
    if (k == 1) return 1.0 / span;
    return k / ((k - 1.0) * span) *
           ((t - y[lo]) * mspline_rec(y, lo, hi - 1, t) +
            (y[hi] - t) * mspline_rec(y, lo + 1, hi, t));
}

/// Spline value with the supremum of the support evaluated as a left limit
/// (by knot reflection, which is exact), so that node values always carry the
/// inside value of the density -- the convention under which the trapezoid
/// rule over the node grid reproduces the mass exactly in the piecewise
/// linear cases.
double mspline(const std::vector<double>& y, double t) {
    if (t == y.back()) {
        std::vector<double> yr(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            yr[i] = -y[y.size() - 1 - i];
        return mspline_rec(yr, 0, static_cast<int>(yr.size()) - 1, -t);
    }
    return mspline_rec(y, 0, static_cast<int>(y.size()) - 1, t);
}

/// C(top, pick) by the stepwise-exact product formula; the running value is
/// integral after every division.
long long binomial(long long top, int pick) {
    if (pick < 0 || pick > top) return 0;
    if (pick > top - pick) pick = static_cast<int>(top - pick);
    long long r = 1;
    for (int i = 1; i <= pick; ++i) {
        if (r > std::numeric_limits<long long>::max() / (top - pick + i))
            throw Error(ErrorCode::BadInput,
                        "binomial coefficient overflows 64 bits");
        r = r * (top - pick + i) / i;
    }
    return r;
}

/// mass((x, infty)) of the normalized measure: suffix of the trapezoid
/// segment masses (with an interpolated partial segment) plus atoms strictly
/// to the right.
struct TailEvaluator {
    explicit TailEvaluator(const GridMeasure& m) : m_(m) {
        const auto& nodes = m.nodes();
        const auto& dens = m.density();
        suffix_.assign(nodes.size(), 0.0);
        for (std::size_t i = nodes.size(); i-- > 1;)
            suffix_[i - 1] = suffix_[i] + 0.5 * (dens[i - 1] + dens[i]) *
                                              (nodes[i] - nodes[i - 1]);
        total_ = m.total_mass();
    }

    double operator()(double x) const {
        const auto& nodes = m_.nodes();
        const auto& dens = m_.density();
        double t = 0.0;
        if (!nodes.empty()) {
            if (x < nodes.front()) {
                t += suffix_[0];
            } else if (x < nodes.back()) {
                const auto it =
                    std::upper_bound(nodes.begin(), nodes.end(), x);
                const std::size_t i = static_cast<std::size_t>(
                    it - nodes.begin() - 1);
                const double h = nodes[i + 1] - nodes[i];
                const double dx =
                    dens[i] + (dens[i + 1] - dens[i]) * (x - nodes[i]) / h;
                t += 0.5 * (dx + dens[i + 1]) * (nodes[i + 1] - x) +
                     suffix_[i + 1];
            }
        }
        for (const Atom& a : m_.atoms())
            if (a.location > x) t += a.mass;
        return t / total_;
    }

  private:
    const GridMeasure& m_;
    std::vector<double> suffix_;
    double total_ = 1.0;
};

}  // namespace

Rational AffineMap::operator()(const RationalPoint& x) const {
    if (x.size() != coeffs.size())
        throw Error(ErrorCode::BadInput,
                    "affine map applied to a point of the wrong dimension");
    return dot(coeffs, x) + constant;
}

double AffineMap::value(const std::vector<double>& x) const {
    if (x.size() != coeffs.size())
        throw Error(ErrorCode::BadInput,
                    "affine map applied to a point of the wrong dimension");
    double s = constant.to_double();
    for (std::size_t i = 0; i < x.size(); ++i)
        s += coeffs[i].to_double() * x[i];
    return s;
}

ConvexBody::ConvexBody(int dimension, std::vector<RationalPoint> points) {
    if (dimension < 1)
        throw Error(ErrorCode::BadInput, "body dimension must be positive");
    if (points.empty())
        throw Error(ErrorCode::BadInput, "body needs at least one point");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != dimension)
            throw Error(ErrorCode::BadInput,
                        "body point has the wrong dimension");
    dim_ = dimension;
    std::sort(points.begin(), points.end(), lex_less);
    points.erase(std::unique(points.begin(), points.end()), points.end());

    if (dim_ == 1) {
        const Rational lo = points.front()[0];
        const Rational hi = points.back()[0];
        if (!(lo < hi))
            throw Error(ErrorCode::DegenerateBody,
                        "segment body has no interior");
        vertices_ = {{lo}, {hi}};
        simplices_ = {{0, 1}};
        facets_ = {{{Rational(1)}, hi}, {{Rational(-1)}, -lo}};
        volume_ = hi - lo;
        return;
    }

    if (dim_ == 2) {
        vertices_ = convex_hull_2d(std::move(points));
        const int m = static_cast<int>(vertices_.size());
        if (m < 3)
            throw Error(ErrorCode::DegenerateBody,
                        "planar body has no interior");
        volume_ = Rational(0);
        for (int i = 1; i + 1 < m; ++i) {
            simplices_.push_back({0, i, i + 1});
            // Fan triangles of a ccw hull have positive orientation.
            volume_ = volume_ +
                      cross(vertices_[0], vertices_[i], vertices_[i + 1]) /
                          Rational(2);
        }
        for (int i = 0; i < m; ++i) {
            const RationalPoint& p = vertices_[i];
            const RationalPoint& q = vertices_[(i + 1) % m];
            // Outward normal of a ccw edge: rotate the edge vector clockwise.
            std::vector<Rational> nrm = {q[1] - p[1], p[0] - q[0]};
            facets_.push_back({nrm, dot(nrm, p)});
        }
        return;
    }

    if (static_cast<int>(points.size()) != dim_ + 1)
        throw Error(ErrorCode::BadInput,
                    "bodies of dimension >= 3 must be simplices (n + 1 "
                    "affinely independent points); boxes come from the cube "
                    "preset");
    vertices_ = std::move(points);
    Matrix edges(dim_, std::vector<Rational>(dim_));
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            edges[r][c] = vertices_[r + 1][c] - vertices_[0][c];
    Rational det = determinant(edges);
    if (det == Rational(0))
        throw Error(ErrorCode::DegenerateBody,
                    "simplex body has affinely dependent vertices");
    if (det < Rational(0)) det = -det;
    Rational fact(1);
    for (int i = 2; i <= dim_; ++i) fact = fact * Rational(i);
    volume_ = det / fact;
    std::vector<int> all(dim_ + 1);
    std::iota(all.begin(), all.end(), 0);
    simplices_ = {all};
    // One facet per omitted vertex: the hyperplane through the remaining n
    // points, oriented so the omitted vertex satisfies the inequality.
    for (int skip = 0; skip <= dim_; ++skip) {
        std::vector<const RationalPoint*> face;
        for (int i = 0; i <= dim_; ++i)
            if (i != skip) face.push_back(&vertices_[i]);
        Matrix m(dim_ - 1, std::vector<Rational>(dim_));
        for (int r = 0; r + 1 < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                m[r][c] = (*face[r + 1])[c] - (*face[0])[c];
        std::vector<Rational> nrm = nullspace_vector(std::move(m), dim_);
        Rational off = dot(nrm, *face[0]);
        if (dot(nrm, vertices_[skip]) > off) {
            for (auto& v : nrm) v = -v;
            off = -off;
        }
        facets_.push_back({std::move(nrm), off});
    }
}

ConvexBody ConvexBody::segment() {
    return ConvexBody(1, {{Rational(0)}, {Rational(1)}});
}

ConvexBody ConvexBody::simplex(int dimension) {
    if (dimension < 1)
        throw Error(ErrorCode::BadInput, "body dimension must be positive");
    std::vector<RationalPoint> pts;
    pts.push_back(RationalPoint(dimension, Rational(0)));
    for (int i = 0; i < dimension; ++i) {
        RationalPoint e(dimension, Rational(0));
        e[i] = Rational(1);
        pts.push_back(std::move(e));
    }
    return ConvexBody(dimension, std::move(pts));
}

ConvexBody ConvexBody::cube(int dimension) {
    if (dimension < 1)
        throw Error(ErrorCode::BadInput, "body dimension must be positive");
    if (dimension <= 2) {
        std::vector<RationalPoint> pts;
        for (int mask = 0; mask < (1 << dimension); ++mask) {
            RationalPoint p(dimension);
            for (int i = 0; i < dimension; ++i)
                p[i] = Rational((mask >> i) & 1);
            pts.push_back(std::move(p));
        }
        return ConvexBody(dimension, std::move(pts));
    }
    if (dimension > 6)
        throw Error(ErrorCode::BadInput,
                    "cube preset supported up to dimension 6");
    ConvexBody b;
    b.dim_ = dimension;
    for (int mask = 0; mask < (1 << dimension); ++mask) {
        RationalPoint p(dimension);
        for (int i = 0; i < dimension; ++i) p[i] = Rational((mask >> i) & 1);
        b.vertices_.push_back(std::move(p));
    }
    // Chain triangulation: one simplex per coordinate order, walking from the
    // origin corner to the far corner one unit step at a time.
    std::vector<int> perm(dimension);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int> simp = {0};
        int mask = 0;
        for (int step : perm) {
            mask |= 1 << step;
            simp.push_back(mask);
        }
        b.simplices_.push_back(std::move(simp));
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int i = 0; i < dimension; ++i) {
        std::vector<Rational> up(dimension, Rational(0));
        up[i] = Rational(1);
        std::vector<Rational> down(dimension, Rational(0));
        down[i] = Rational(-1);
        b.facets_.push_back({std::move(up), Rational(1)});
        b.facets_.push_back({std::move(down), Rational(0)});
    }
    b.volume_ = Rational(1);
    return b;
}

bool ConvexBody::contains(const RationalPoint& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw Error(ErrorCode::BadInput,
                    "containment query has the wrong dimension");
    for (const HalfSpace& h : facets_)
        if (h.offset < dot(h.normal, x)) return false;
    return true;
}

ToricTestConfig::ToricTestConfig(ConvexBody body, std::vector<AffineMap> pieces,
                                 bool require_nonnegative)
    : body_(std::move(body)), pieces_(std::move(pieces)) {
    if (pieces_.empty())
        throw Error(ErrorCode::BadInput,
                    "piecewise-linear function needs at least one piece");
    for (const AffineMap& p : pieces_)
        if (static_cast<int>(p.coeffs.size()) != body_.dimension())
            throw Error(ErrorCode::BadInput,
                        "piece dimension does not match the body");
    if (require_nonnegative) {
        for (const RationalPoint& v : body_.vertices())
            if ((*this)(v) < Rational(0))
                throw Error(ErrorCode::BadInput,
                            "nonnegativity flag set but the function is "
                            "negative at a vertex");
    }
}

Rational ToricTestConfig::operator()(const RationalPoint& x) const {
    Rational best = pieces_[0](x);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        const Rational v = pieces_[i](x);
        if (v < best) best = v;
    }
    return best;
}

std::optional<AffineMap> ToricTestConfig::affine_on_body() const {
    for (const AffineMap& piece : pieces_) {
        bool everywhere = true;
        for (const RationalPoint& v : body_.vertices())
            if (piece(v) != (*this)(v)) {
                everywhere = false;
                break;
            }
        if (everywhere) return piece;
    }
    return std::nullopt;
}

GridMeasure okounkov_pushforward(const ConvexBody& body,
                                 const AffineMap& functional, int resolution,
                                 Exec exec) {
    if (resolution < 100)
        throw Error(ErrorCode::BadInput, "resolution must be at least 100");
    if (static_cast<int>(functional.coeffs.size()) != body.dimension())
        throw Error(ErrorCode::BadInput,
                    "functional dimension does not match the body");

    // Exact knot values at every vertex, and per-simplex sorted knots with
    // volume weights.
    std::vector<Rational> exact_values;
    for (const RationalPoint& v : body.vertices())
        exact_values.push_back(functional(v));
    std::vector<std::vector<double>> knots;
    std::vector<double> weight;
    const int n = body.dimension();
    for (const auto& simp : body.simplices()) {
        std::vector<double> y;
        for (int idx : simp) y.push_back(exact_values[idx].to_double());
        std::sort(y.begin(), y.end());
        knots.push_back(std::move(y));
        if (n == 1) {
            weight.push_back(
                ((body.vertices()[simp[1]][0] - body.vertices()[simp[0]][0]) /
                 body.volume())
                    .to_double());
        } else if (n == 2) {
            const auto& v = body.vertices();
            weight.push_back((cross(v[simp[0]], v[simp[1]], v[simp[2]]) /
                              Rational(2) / body.volume())
                                 .to_double());
        } else {
            Matrix edges(n, std::vector<Rational>(n));
            const auto& v = body.vertices();
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    edges[r][c] = v[simp[r + 1]][c] - v[simp[0]][c];
            Rational det = determinant(std::move(edges));
            if (det < Rational(0)) det = -det;
            Rational fact(1);
            for (int i = 2; i <= n; ++i) fact = fact * Rational(i);
            weight.push_back((det / fact / body.volume()).to_double());
        }
    }

    std::sort(exact_values.begin(), exact_values.end());
    exact_values.erase(std::unique(exact_values.begin(), exact_values.end()),
                       exact_values.end());
    std::vector<double> knot_nodes;
    for (const Rational& r : exact_values) knot_nodes.push_back(r.to_double());
    knot_nodes.erase(std::unique(knot_nodes.begin(), knot_nodes.end()),
                     knot_nodes.end());
    if (knot_nodes.size() == 1)
        return GridMeasure::atoms_only({{knot_nodes.front(), 1.0}});

    const double lo = knot_nodes.front();
    const double hi = knot_nodes.back();
    const double span = hi - lo;
    // Keep every knot (the density kinks there) and fill with equal steps,
    // skipping fill points that would crowd a knot.
    const double min_sep = 0.25 * span / resolution;
    std::vector<double> nodes = knot_nodes;
    for (int i = 0; i <= resolution; ++i) {
        const double x = lo + span * i / resolution;
        const auto it =
            std::lower_bound(knot_nodes.begin(), knot_nodes.end(), x);
        double nearest = std::numeric_limits<double>::infinity();
        if (it != knot_nodes.end()) nearest = *it - x;
        if (it != knot_nodes.begin())
            nearest = std::min(nearest, x - *(it - 1));
        if (nearest >= min_sep) nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> dens = map_indexed(
        nodes.size(), exec, [&](std::size_t i) {
            double s = 0.0;
            for (std::size_t j = 0; j < knots.size(); ++j)
                s += weight[j] * mspline(knots[j], nodes[i]);
            return s;
        });
    return GridMeasure(std::move(nodes), std::move(dens));
}

WeightLevel toric_weights(const ToricTestConfig& config, long long level,
                          int resolution, Exec exec) {
    if (level < 1)
        throw Error(ErrorCode::BadInput, "level must be positive");
    const ConvexBody& body = config.body();
    const int n = body.dimension();
    const Rational k(level);

    std::vector<std::int64_t> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        Rational mn = body.vertices()[0][i], mx = mn;
        for (const RationalPoint& v : body.vertices()) {
            if (v[i] < mn) mn = v[i];
            if (mx < v[i]) mx = v[i];
        }
        lo[i] = ceil_rational(k * mn);
        hi[i] = floor_rational(k * mx);
    }
    for (int i = 0; i < n; ++i)
        if (lo[i] > hi[i])
            throw Error(ErrorCode::InsufficientSupport,
                        "the dilated body contains no lattice points");

    const std::size_t slabs = static_cast<std::size_t>(hi[0] - lo[0] + 1);
    std::vector<std::vector<long long>> slot(slabs);
    std::vector<std::string> slab_error(slabs);
    std::vector<int> slab_code(slabs, -1);
    for_indexed(slabs, exec, [&](std::size_t si) {
        try {
            std::vector<std::int64_t> m(n);
            m[0] = lo[0] + static_cast<std::int64_t>(si);
            std::vector<long long>& out = slot[si];
            // Odometer over the remaining coordinates of the bounding box;
            // exact membership and weight checks per lattice point.
            std::vector<std::int64_t> cur(n);
            for (int i = 1; i < n; ++i) cur[i] = lo[i];
            while (true) {
                for (int i = 1; i < n; ++i) m[i] = cur[i];
                RationalPoint x(n);
                for (int i = 0; i < n; ++i) x[i] = Rational(m[i]) / k;
                if (body.contains(x)) {
                    Rational w(0);
                    bool first = true;
                    for (const AffineMap& piece : config.pieces()) {
                        Rational v = piece.constant * k;
                        for (int i = 0; i < n; ++i)
                            v = v + piece.coeffs[i] * Rational(m[i]);
                        if (first || v < w) w = v;
                        first = false;
                    }
                    if (w.den() != 1)
                        throw Error(
                            ErrorCode::NonIntegralWeights,
                            "weight " + w.str() +
                                " is not an integer at a lattice point; the "
                                "level does not clear the denominators");
                    out.push_back(w.num());
                }
                int i = n - 1;
                for (; i >= 1; --i) {
                    if (cur[i] < hi[i]) {
                        ++cur[i];
                        for (int j = i + 1; j < n; ++j) cur[j] = lo[j];
                        break;
                    }
                }
                if (i < 1) break;
            }
        } catch (const Error& e) {
            slab_code[si] = static_cast<int>(e.code());
            slab_error[si] = e.what();
        }
    });
    for (std::size_t si = 0; si < slabs; ++si)
        if (slab_code[si] >= 0)
            throw Error(static_cast<ErrorCode>(slab_code[si]),
                        slab_error[si]);

    std::vector<long long> weights;
    for (const auto& s : slot)
        weights.insert(weights.end(), s.begin(), s.end());
    std::sort(weights.begin(), weights.end());
    const long long count = static_cast<long long>(weights.size());
    if (count == 0)
        throw Error(ErrorCode::InsufficientSupport,
                    "the dilated body contains no lattice points");

    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < weights.size();) {
        std::size_t j = i;
        while (j < weights.size() && weights[j] == weights[i]) ++j;
        atoms.push_back({static_cast<double>(weights[i]) / level,
                         static_cast<double>(j - i) / count});
        i = j;
    }
    GridMeasure empirical = GridMeasure::atoms_only(std::move(atoms));

    std::optional<GridMeasure> limit;
    if (auto piece = config.affine_on_body())
        limit = okounkov_pushforward(body, *piece, resolution, exec);

    return WeightLevel{level, std::move(weights), count, std::move(empirical),
                       std::move(limit)};
}

NormRecord measure_norms(const GridMeasure& m, double p) {
    if (!(p >= 1.0))
        throw Error(ErrorCode::DomainError, "norm exponent must be >= 1");
    if (!(m.total_mass() > 0.0))
        throw Error(ErrorCode::DomainError, "measure has no mass");
    const double c = m.mean();
    return NormRecord{std::pow(m.moment_abs(p, 0.0), 1.0 / p),
                      std::pow(m.moment_abs(p, c), 1.0 / p), c};
}

double dimension_ratio_bound(int n) {
    if (n < 1)
        throw Error(ErrorCode::BadInput, "dimension must be positive");
    return n + 1.0;
}

double kahane_khinchin_envelope(double p) {
    if (!(p >= 1.0))
        throw Error(ErrorCode::DomainError, "envelope exponent must be >= 1");
    return std::sqrt(2.0) * std::exp(std::lgamma(p + 1.0) / p);
}

ReverseHolderReport reverse_holder_report(const GridMeasure& m, int n,
                                          const std::vector<double>& p_list) {
    if (n < 1)
        throw Error(ErrorCode::BadInput, "dimension must be positive");
    if (p_list.empty())
        throw Error(ErrorCode::BadInput, "empty exponent list");
    for (double p : p_list)
        if (!(p >= 1.0))
            throw Error(ErrorCode::DomainError, "norm exponent must be >= 1");
    if (!(m.total_mass() > 0.0))
        throw Error(ErrorCode::DomainError, "measure has no mass");

    ReverseHolderReport rep;

    // Infimum of the support: first node whose adjacent segment carries
    // density, and every atom.
    double smin = std::numeric_limits<double>::infinity();
    const auto& nodes = m.nodes();
    const auto& dens = m.density();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (dens[i] > 0.0 || dens[i + 1] > 0.0) {
            smin = nodes[i];
            break;
        }
    for (const Atom& a : m.atoms())
        if (a.mass > 0.0) smin = std::min(smin, a.location);
    rep.support_nonnegative = smin >= -1e-12;

    // Tail-root concavity on the natural grid.
    std::vector<double> grid = nodes;
    for (const Atom& a : m.atoms()) grid.push_back(a.location);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const TailEvaluator tail(m);
    std::vector<double> root(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        root[i] = std::pow(tail(grid[i]), 1.0 / n);
    double defect = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double h1 = grid[i] - grid[i - 1];
        const double h2 = grid[i + 1] - grid[i];
        const double dd = ((root[i + 1] - root[i]) / h2 -
                           (root[i] - root[i - 1]) / h1) /
                          (0.5 * (h1 + h2));
        defect = std::max(defect, dd);
    }
    rep.tail_root_defect = defect;
    rep.tail_root_concave = defect <= 1e-8;

    try {
        rep.log_concave = m.log_concavity_report(1e-8).flag;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MixedRepresentation ||
            e.code() == ErrorCode::InsufficientSupport ||
            e.code() == ErrorCode::BadInput)
            rep.log_concave = std::nullopt;
        else
            throw;
    }

    const double l1u = m.moment_abs(1.0, 0.0);
    const double c = m.mean();
    const double l1c = m.moment_abs(1.0, c);
    for (double p : p_list) {
        const double up = std::pow(m.moment_abs(p, 0.0), 1.0 / p);
        const double cp = std::pow(m.moment_abs(p, c), 1.0 / p);
        ReverseHolderRow row;
        row.p = p;
        row.ratio = l1u > 0.0 ? up / l1u : 0.0;
        row.ratio_centered = l1c > 0.0 ? cp / l1c : 0.0;
        row.within_dimension_bound =
            row.ratio <= dimension_ratio_bound(n) + 1e-9;
        row.within_envelope =
            row.ratio_centered <= kahane_khinchin_envelope(p) + 1e-9;
        rep.rows.push_back(row);
    }
    return rep;
}

NormalConeReport normal_cone_weights(int n, const Rational& eps, long long k,
                                     double p_max) {
    if (n < 2)
        throw Error(ErrorCode::BadInput,
                    "the normal-cone family needs dimension >= 2");
    if (k < 1) throw Error(ErrorCode::BadInput, "level must be positive");
    if (eps < Rational(0) || Rational(1) < eps)
        throw Error(ErrorCode::BadInput,
                    "exceptional weight must lie in [0, 1]");
    if (!(p_max >= 2.0))
        throw Error(ErrorCode::BadInput, "the exponent sweep needs p_max >= 2");
    const Rational ke = Rational(k) * eps;
    if (ke.den() != 1)
        throw Error(ErrorCode::NonIntegralWeights,
                    "level times exceptional weight must be an integer; got " +
                        ke.str());
    const long long cap = ke.num();

    // Sections graded by vanishing order j carry weight min(j, k eps) with
    // multiplicity C(j + n - 1, n - 1).
    std::vector<long long> weights;
    long long count = 0;
    for (long long j = 0; j <= k; ++j)
        count += binomial(j + n - 1, n - 1);
    weights.reserve(static_cast<std::size_t>(count));
    for (long long j = 0; j <= k; ++j) {
        const long long mult = binomial(j + n - 1, n - 1);
        const long long w = std::min(j, cap);
        for (long long t = 0; t < mult; ++t) weights.push_back(w);
    }

    std::vector<Atom> atoms;
    long long below = 0;
    for (long long j = 0; j < cap; ++j) {
        const long long mult = binomial(j + n - 1, n - 1);
        atoms.push_back({static_cast<double>(j) / k,
                         static_cast<double>(mult) / count});
        below += mult;
    }
    atoms.push_back({static_cast<double>(cap) / k,
                     static_cast<double>(count - below) / count});
    GridMeasure empirical = GridMeasure::atoms_only(std::move(atoms));

    const double eps_d = eps.to_double();
    std::optional<GridMeasure> limit;
    if (cap == 0) {
        limit = GridMeasure::atoms_only({{0.0, 1.0}});
    } else {
        // Radial density n t^(n-1) on [0, eps] plus the pile the cap sweeps
        // onto eps; the density part is rescaled so it carries exactly eps^n.
        const int nn = 201;
        std::vector<double> tn(nn), dn(nn);
        for (int i = 0; i < nn; ++i) {
            tn[i] = eps_d * i / (nn - 1);
            dn[i] = n * std::pow(tn[i], n - 1);
        }
        GridMeasure raw(tn, dn);
        const double target = std::pow(eps_d, n);
        const double scale = target / raw.total_mass();
        for (double& d : dn) d *= scale;
        std::vector<Atom> top;
        if (1.0 - target > 1e-15) top.push_back({eps_d, 1.0 - target});
        limit = GridMeasure(std::move(tn), std::move(dn), std::move(top));
    }

    NormalConeReport rep{
        WeightLevel{k, std::move(weights), count, std::move(empirical),
                    std::move(limit)},
        true, 0.0, {}, {}, 0.0, n / (n - 1.0)};

    if (cap >= 2) {
        const auto lc = rep.data.empirical.log_concavity_report(1e-8);
        rep.log_concave = lc.flag;
        rep.log_concavity_defect = std::max(lc.worst_violation, 0.0);
    }

    for (double p : {2.0, 3.0, 4.0, 8.0})
        if (p <= p_max + 1e-12) rep.p_list.push_back(p);
    const NormRecord base = measure_norms(rep.data.empirical, 1.0);
    if (base.centered > 0.0) {
        for (double p : rep.p_list)
            rep.centered_ratios.push_back(
                rep.data.empirical.norm_ratio(p, 1.0, true));
        rep.growth_factor = rep.centered_ratios.back() /
                            rep.centered_ratios.front();
    }
    return rep;
}

}  // namespace fanomom
