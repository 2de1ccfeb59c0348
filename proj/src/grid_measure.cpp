#include "fanomom/grid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "fanomom/errors.hpp"
#include "fanomom/io.hpp"

namespace fanomom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fraction of the support span treated as the "outermost" slice when
/// certifying that an integral is not boundary-dominated.
constexpr double kTailWindowFraction = 0.1;
/// A certified integral may draw at most this fraction of its value from an
/// outermost slice toward which the integrand grows.
constexpr double kTailShareTol = 1e-10;

/// A(u) = int_0^1 e^{-ux} dx and B(u) = int_0^1 x e^{-ux} dx, with series
/// fallbacks near u = 0 where the closed forms lose digits to cancellation.
double coef_a(double u) {
    if (std::abs(u) < 1e-4)
        return 1.0 + u * (-0.5 + u * (1.0 / 6.0 - u / 24.0));
    return -std::expm1(-u) / u;
}
double coef_b(double u) {
    if (std::abs(u) < 1e-4)
        return 0.5 + u * (-1.0 / 3.0 + u * (0.125 - u / 30.0));
    return (1.0 - (1.0 + u) * std::exp(-u)) / (u * u);
}

/// int_a^b |t - c|^p * (linear density through (a,fa),(b,fb)) dt, exact.
double abs_moment_segment(double a, double b, double fa, double fb, double c,
                          double p) {
    const double ua = a - c, ub = b - c;
    const double beta = (fb - fa) / (b - a);
    const double alpha = fa - beta * ua;  // density as alpha + beta*(t - c)
    // int_{u0}^{u1} (al + be*u) u^p du on 0 <= u0 <= u1.
    const auto positive_side = [p](double u0, double u1, double al, double be) {
        return al * (std::pow(u1, p + 1) - std::pow(u0, p + 1)) / (p + 1) +
               be * (std::pow(u1, p + 2) - std::pow(u0, p + 2)) / (p + 2);
    };
    if (ua >= 0.0) return positive_side(ua, ub, alpha, beta);
    if (ub <= 0.0) return positive_side(-ub, -ua, alpha, -beta);
    return positive_side(0.0, ub, alpha, beta) +
           positive_side(0.0, -ua, alpha, -beta);
}

/// Piecewise-linear interpolation of the density; 0 outside the node range.
double pl_density_at(const std::vector<double>& x, const std::vector<double>& f,
                     double t) {
    if (x.empty() || t < x.front() || t > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) i = 1;
    if (i == x.size()) i = x.size() - 1;
    const double a = x[i - 1], b = x[i];
    return f[i - 1] + (f[i] - f[i - 1]) * (t - a) / (b - a);
}

struct SupportHull {
    double lo;
    double hi;
};

SupportHull support_hull(const std::vector<double>& nodes,
                         const std::vector<Atom>& atoms) {
    double lo = kInf, hi = -kInf;
    if (!nodes.empty()) {
        lo = nodes.front();
        hi = nodes.back();
    }
    if (!atoms.empty()) {
        lo = std::min(lo, atoms.front().location);
        hi = std::max(hi, atoms.back().location);
    }
    return {lo, hi};
}

/// Accumulates seg(a,b,fa,fb) over density segments clipped to [lo, hi]
/// (densities interpolated at the clip points, exact for linear pieces) plus
/// at(loc,mass) over atoms inside [lo, hi].
template <class SegFn, class AtomFn>
double accumulate_clipped(const std::vector<double>& nodes,
                          const std::vector<double>& density,
                          const std::vector<Atom>& atoms, double lo, double hi,
                          SegFn&& seg, AtomFn&& at) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i], b = nodes[i + 1];
        if (b <= lo || a >= hi) continue;
        double fa = density[i], fb = density[i + 1];
        const double slope = (fb - fa) / (b - a);
        if (a < lo) {
            fa += slope * (lo - a);
            a = lo;
        }
        if (b > hi) {
            fb += slope * (hi - b);
            b = hi;
        }
        if (b > a) s += seg(a, b, fa, fb);
    }
    for (const Atom& atom : atoms)
        if (atom.location >= lo && atom.location <= hi)
            s += at(atom.location, atom.mass);
    return s;
}

/// Divergence heuristic shared by moment_abs and laplace.  A boundary slice is
/// suspicious when the integrand weight*density *grows* toward that boundary
/// (the discrete signature of an integral whose continuum version diverges, or
/// of a grid truncated before its tail has decayed).  A growing boundary slice
/// is tolerated only while its contribution stays below kTailShareTol of the
/// total: compact supports with interior-vanishing integrands (e.g. the t^p
/// weight at t = 0) pass, truncated non-decayed tails fail.
template <class SegFn, class AtomFn, class WeightFn>
void certify_boundaries(const std::vector<double>& nodes,
                        const std::vector<double>& density,
                        const std::vector<Atom>& atoms, double total,
                        SegFn&& seg, AtomFn&& at, WeightFn&& wf, ErrorCode code,
                        const char* what) {
    const SupportHull hull = support_hull(nodes, atoms);
    const double w = kTailWindowFraction * (hull.hi - hull.lo);
    if (!(w > 0.0) || !(total > 0.0)) return;
    const auto integrand = [&](double t) {
        return wf(t) * pl_density_at(nodes, density, t);
    };
    const auto atom_at_edge = [&](double edge) {
        for (const Atom& a : atoms)
            if (a.mass > 0.0 && std::abs(a.location - edge) <= 0.1 * w)
                return true;
        return false;
    };
    const auto check_end = [&](double edge, double inner) {
        const double share =
            accumulate_clipped(nodes, density, atoms, std::min(edge, inner),
                               std::max(edge, inner), seg, at);
        if (share <= kTailShareTol * total) return;
        const bool grows = integrand(edge) >= integrand(inner) * (1.0 - 1e-12) ||
                           atom_at_edge(edge);
        if (grows) throw Error(code, what);
    };
    check_end(hull.lo, hull.lo + w);
    check_end(hull.hi, hull.hi - w);
}

/// Primitive of the quadratic A u^2 + B u + C.
double quad_primitive(double A, double B, double C, double u) {
    return ((A / 3.0 * u + B / 2.0) * u + C) * u;
}

/// int_0^h |A u^2 + B u + C| du, splitting at real roots inside (0, h).
double integrate_abs_quadratic(double A, double B, double C, double h) {
    double roots[2];
    int nroots = 0;
    if (A != 0.0) {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            // Stable pairing: avoid cancellation in the smaller root.
            const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
            const double r1 = q / A;
            const double r2 = (q != 0.0) ? C / q : r1;
            roots[nroots++] = r1;
            if (r2 != r1) roots[nroots++] = r2;
        }
    } else if (B != 0.0) {
        roots[nroots++] = -C / B;
    }
    std::sort(roots, roots + nroots);
    double cuts[4] = {0.0, h, h, h};
    int ncuts = 1;
    for (int i = 0; i < nroots; ++i)
        if (roots[i] > 0.0 && roots[i] < h) cuts[ncuts++] = roots[i];
    cuts[ncuts++] = h;
    double total = 0.0;
    for (int i = 0; i + 1 < ncuts; ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const double sign = ((A * mid + B) * mid + C) >= 0.0 ? 1.0 : -1.0;
        total +=
            sign * (quad_primitive(A, B, C, hi) - quad_primitive(A, B, C, lo));
    }
    return total;
}

}  // namespace

double laplace_segment(double a, double b, double fa, double fb, double gamma) {
    const double h = b - a;
    const double u = gamma * h;
    return h * std::exp(-gamma * a) * (fa * coef_a(u) + (fb - fa) * coef_b(u));
}

GridMeasure::GridMeasure(std::vector<double> nodes, std::vector<double> density,
                         std::vector<Atom> atoms)
    : nodes_(std::move(nodes)),
      density_(std::move(density)),
      atoms_(std::move(atoms)) {
    if (nodes_.size() < 2)
        throw Error(ErrorCode::BadInput, "grid measure needs >= 2 nodes");
    if (nodes_.size() != density_.size())
        throw Error(ErrorCode::BadInput, "nodes/density length mismatch");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1]))
            throw Error(ErrorCode::NonIncreasingNodes,
                        "nodes must be strictly increasing");
    for (double d : density_)
        if (!(d >= 0.0) || !std::isfinite(d))
            throw Error(ErrorCode::NegativeMass,
                        "density values must be finite and >= 0");
    for (const Atom& a : atoms_)
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass) ||
            !std::isfinite(a.location))
            throw Error(ErrorCode::NegativeMass,
                        "atom masses must be finite and >= 0");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) {
        return x.location < y.location;
    });
}

GridMeasure GridMeasure::atoms_only(std::vector<Atom> atoms) {
    if (atoms.empty())
        throw Error(ErrorCode::BadInput, "atomic measure needs >= 1 atom");
    GridMeasure m;
    m.atoms_ = std::move(atoms);
    for (const Atom& a : m.atoms_)
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass) ||
            !std::isfinite(a.location))
            throw Error(ErrorCode::NegativeMass,
                        "atom masses must be finite and >= 0");
    std::sort(m.atoms_.begin(), m.atoms_.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    return m;
}

double GridMeasure::total_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        s += 0.5 * (density_[i] + density_[i + 1]) * (nodes_[i + 1] - nodes_[i]);
    for (const Atom& a : atoms_) s += a.mass;
    return s;
}

double GridMeasure::mean() const {
    const double mass = total_mass();
    if (!(mass > 0.0))
        throw Error(ErrorCode::InsufficientSupport, "measure has zero mass");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        const double a = nodes_[i], b = nodes_[i + 1];
        const double fa = density_[i], fb = density_[i + 1];
        // int_a^b t * linear dt = (b-a) * (fa*(2a+b) + fb*(a+2b)) / 6.
        s += (b - a) * (fa * (2.0 * a + b) + fb * (a + 2.0 * b)) / 6.0;
    }
    for (const Atom& a : atoms_) s += a.mass * a.location;
    return s / mass;
}

double GridMeasure::moment_abs(double p, double c, bool certify_tails) const {
    if (!(p >= 1.0))
        throw Error(ErrorCode::BadInput, "moment order must be >= 1");
    const double mass = total_mass();
    if (!(mass > 0.0))
        throw Error(ErrorCode::InsufficientSupport, "measure has zero mass");
    const auto seg = [&](double a, double b, double fa, double fb) {
        return abs_moment_segment(a, b, fa, fb, c, p);
    };
    const auto at = [&](double loc, double m) {
        return m * std::pow(std::abs(loc - c), p);
    };
    const double total =
        accumulate_clipped(nodes_, density_, atoms_, -kInf, kInf, seg, at);
    if (certify_tails)
        certify_boundaries(
            nodes_, density_, atoms_, total, seg, at,
            [&](double t) { return std::pow(std::abs(t - c), p); },
            ErrorCode::DivergentMoment,
            "moment weight grows toward a support boundary that carries "
            "non-negligible contribution; widen the grid");
    return total / mass;
}

double GridMeasure::laplace(double gamma, bool certify_tails) const {
    const auto seg = [&](double a, double b, double fa, double fb) {
        return laplace_segment(a, b, fa, fb, gamma);
    };
    const auto at = [&](double loc, double m) {
        return m * std::exp(-gamma * loc);
    };
    const double total =
        accumulate_clipped(nodes_, density_, atoms_, -kInf, kInf, seg, at);
    if (certify_tails)
        certify_boundaries(
            nodes_, density_, atoms_, total, seg, at,
            [&](double t) { return std::exp(-gamma * t); },
            ErrorCode::DivergentTilt,
            "exponentially tilted integrand grows toward a grid boundary; "
            "the transform likely diverges at this rate");
    return total;
}

GridMeasure GridMeasure::tilt(double gamma, bool certify_tails) const {
    if (certify_tails) laplace(gamma, true);  // throws DivergentTilt on growth
    std::vector<Atom> tilted_atoms;
    tilted_atoms.reserve(atoms_.size());
    for (const Atom& a : atoms_)
        tilted_atoms.push_back(
            {a.location, a.mass * std::exp(-gamma * a.location)});
    GridMeasure out = [&] {
        if (nodes_.empty()) return atoms_only(std::move(tilted_atoms));
        std::vector<double> d(density_.size());
        for (std::size_t i = 0; i < density_.size(); ++i)
            d[i] = density_[i] * std::exp(-gamma * nodes_[i]);
        return GridMeasure(nodes_, std::move(d), std::move(tilted_atoms));
    }();
    const double mass = out.total_mass();
    if (!(mass > 0.0))
        throw Error(ErrorCode::InsufficientSupport,
                    "tilted measure has zero mass");
    for (double& d : out.density_) d /= mass;
    for (Atom& a : out.atoms_) a.mass /= mass;
    return out;
}

double GridMeasure::norm_ratio(double p, double q, bool centered) const {
    const double c = centered ? mean() : 0.0;
    const double mp = moment_abs(p, c);
    const double mq = moment_abs(q, c);
    if (!(mq > 0.0))
        throw Error(ErrorCode::ZeroFirstMoment,
                    "denominator moment vanishes; ratio undefined");
    return std::pow(mp, 1.0 / p) / std::pow(mq, 1.0 / q);
}

namespace {

/// Normalized-measure CDF evaluation for the Wasserstein integral.
struct CdfEval {
    const GridMeasure* m;
    double inv_mass;
    std::vector<double> prefix;  // integral of density up to each node

    explicit CdfEval(const GridMeasure& gm) : m(&gm) {
        const double mass = gm.total_mass();
        if (!(mass > 0.0))
            throw Error(ErrorCode::InsufficientSupport, "measure has zero mass");
        inv_mass = 1.0 / mass;
        const auto& x = gm.nodes();
        const auto& f = gm.density();
        prefix.assign(x.size(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            prefix[i + 1] =
                prefix[i] + 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
    }

    /// Density limit from above; 0 at and beyond the last node.
    double density_right(double t) const {
        const auto& x = m->nodes();
        if (x.empty()) return 0.0;
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        if (i == 0 || i == x.size()) return 0.0;
        const double a = x[i - 1], b = x[i];
        const double fa = m->density()[i - 1], fb = m->density()[i];
        return (fa + (fb - fa) * (t - a) / (b - a)) * inv_mass;
    }

    /// Density limit from below; 0 at and before the first node.
    double density_left(double t) const {
        const auto& x = m->nodes();
        if (x.empty()) return 0.0;
        const auto it = std::lower_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        if (i == 0 || i == x.size()) return 0.0;
        const double a = x[i - 1], b = x[i];
        const double fa = m->density()[i - 1], fb = m->density()[i];
        return (fa + (fb - fa) * (t - a) / (b - a)) * inv_mass;
    }

    /// Right-continuous CDF of the normalized measure.
    double cdf(double t) const {
        double s = 0.0;
        const auto& x = m->nodes();
        if (!x.empty() && t >= x.front()) {
            if (t >= x.back()) {
                s += prefix.back();
            } else {
                const auto it = std::upper_bound(x.begin(), x.end(), t);
                std::size_t i = static_cast<std::size_t>(it - x.begin());
                if (i == 0) i = 1;
                const double a = x[i - 1];
                const double fa = m->density()[i - 1];
                const double ft = pl_density_at(x, m->density(), t);
                s += prefix[i - 1] + 0.5 * (fa + ft) * (t - a);
            }
        }
        for (const Atom& atom : m->atoms()) {
            if (atom.location > t) break;
            s += atom.mass;
        }
        return s * inv_mass;
    }
};

}  // namespace

double GridMeasure::wasserstein1(const GridMeasure& other) const {
    CdfEval F(*this), G(other);
    std::vector<double> brk;
    brk.reserve(nodes_.size() + other.nodes_.size() + atoms_.size() +
                other.atoms_.size());
    brk.insert(brk.end(), nodes_.begin(), nodes_.end());
    brk.insert(brk.end(), other.nodes_.begin(), other.nodes_.end());
    for (const Atom& a : atoms_) brk.push_back(a.location);
    for (const Atom& a : other.atoms_) brk.push_back(a.location);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    if (brk.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double a = brk[i], b = brk[i + 1];
        const double h = b - a;
        // On (a, b) both densities are linear and there are no atoms, so the
        // CDF difference is the quadratic Au^2 + Bu + C in u = t - a; the
        // relevant density values are the one-sided limits into the interval.
        const double C = F.cdf(a) - G.cdf(a);
        const double fa = F.density_right(a) - G.density_right(a);
        const double fb = F.density_left(b) - G.density_left(b);
        const double B = fa;
        const double A = 0.5 * (fb - fa) / h;
        total += integrate_abs_quadratic(A, B, C, h);
    }
    return total;
}

GridMeasure::LogConcavityReport GridMeasure::log_concavity_report(
    double tol) const {
    if (!nodes_.empty() && !atoms_.empty())
        throw Error(ErrorCode::MixedRepresentation,
                    "log-concavity test needs a pure density or a pure "
                    "lattice measure, not both parts at once");
    // Collect (position, log value) over the contiguous positive part; an
    // interior zero fails outright (the support of a log-concave density is
    // an interval).
    std::vector<double> pos, logv;
    double gap_location = 0.0;
    bool interior_gap = false;
    if (nodes_.empty()) {
        // Lattice case: masses must sit equally spaced, where log-concavity
        // of the mass sequence is the natural notion.
        for (std::size_t i = 2; i < atoms_.size(); ++i) {
            const double d0 = atoms_[1].location - atoms_[0].location;
            const double d = atoms_[i].location - atoms_[i - 1].location;
            if (std::abs(d - d0) > 1e-9 * std::max(1.0, std::abs(d0)))
                throw Error(ErrorCode::BadInput,
                            "lattice log-concavity requires equally spaced "
                            "atom locations");
        }
        std::size_t first = atoms_.size(), last = 0;
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i].mass > 0.0) {
                first = std::min(first, i);
                last = std::max(last, i);
            }
        if (first > last || last - first < 2)
            throw Error(ErrorCode::InsufficientSupport,
                        "log-concavity needs >= 3 positive entries");
        for (std::size_t i = first; i <= last; ++i) {
            if (!(atoms_[i].mass > 0.0)) {
                interior_gap = true;
                gap_location = atoms_[i].location;
                break;
            }
            pos.push_back(atoms_[i].location);
            logv.push_back(std::log(atoms_[i].mass));
        }
    } else {
        std::size_t first = nodes_.size(), last = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (density_[i] > 0.0) {
                first = std::min(first, i);
                last = std::max(last, i);
            }
        if (first > last || last - first < 2)
            throw Error(ErrorCode::InsufficientSupport,
                        "log-concavity needs >= 3 positive entries");
        for (std::size_t i = first; i <= last; ++i) {
            if (!(density_[i] > 0.0)) {
                interior_gap = true;
                gap_location = nodes_[i];
                break;
            }
            pos.push_back(nodes_[i]);
            logv.push_back(std::log(density_[i]));
        }
    }
    if (interior_gap)
        return {false, std::numeric_limits<double>::infinity(), gap_location};
    double worst = -std::numeric_limits<double>::infinity();
    double where = pos.front();
    for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
        const double hl = pos[i] - pos[i - 1];
        const double hr = pos[i + 1] - pos[i];
        // Second divided difference: estimates (log f)'' at the node, so the
        // tolerance bounds curvature independently of grid resolution.
        const double dd =
            2.0 * ((logv[i + 1] - logv[i]) / hr - (logv[i] - logv[i - 1]) / hl) /
            (hl + hr);
        if (dd > worst) {
            worst = dd;
            where = pos[i];
        }
    }
    return {worst <= tol, worst, where};
}

void GridMeasure::write_csv(std::ostream& os,
                            const std::vector<std::string>& comments) const {
    for (const std::string& c : comments) {
        if (!c.empty() && c[0] == '#')
            os << c << '\n';
        else
            os << "# " << c << '\n';
    }
    if (!atoms_.empty()) {
        os << "# atoms: ";
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i) os << ';';
            os << '(' << fmt17(atoms_[i].location) << ','
               << fmt17(atoms_[i].mass) << ')';
        }
        os << '\n';
    }
    os << "t,density\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        os << fmt17(nodes_[i]) << ',' << fmt17(density_[i]) << '\n';
}

GridMeasure GridMeasure::read_csv(std::istream& is) {
    std::vector<double> nodes, density;
    std::vector<Atom> atoms;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# atoms:";
            if (line.compare(0, key.size(), key) == 0) {
                std::stringstream ss(line.substr(key.size()));
                std::string entry;
                while (std::getline(ss, entry, ';')) {
                    const auto l = entry.find('(');
                    const auto c = entry.find(',', l);
                    const auto r = entry.find(')', c);
                    if (l == std::string::npos || c == std::string::npos ||
                        r == std::string::npos)
                        throw Error(ErrorCode::BadInput,
                                    "malformed atoms comment in CSV");
                    atoms.push_back(
                        {parse_double(entry.substr(l + 1, c - l - 1)),
                         parse_double(entry.substr(c + 1, r - c - 1))});
                }
            }
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() == 2 && fields[0] == "t" && fields[1] == "density")
            continue;  // header
        if (fields.size() != 2)
            throw Error(ErrorCode::BadInput,
                        "expected 't,density' rows in measure CSV");
        nodes.push_back(parse_double(fields[0]));
        density.push_back(parse_double(fields[1]));
    }
    if (nodes.empty()) {
        if (atoms.empty())
            throw Error(ErrorCode::BadInput, "measure CSV holds no data");
        return atoms_only(std::move(atoms));
    }
    return GridMeasure(std::move(nodes), std::move(density), std::move(atoms));
}

std::vector<double> norm_ratios(const std::vector<GridMeasure>& batch, double p,
                                double q, bool centered, Exec exec) {
    return map_indexed(batch.size(), exec, [&](std::size_t i) {
        return batch[i].norm_ratio(p, q, centered);
    });
}

GridMeasure random_log_concave(std::uint64_t seed, int n) {
    if (n < 8)
        throw Error(ErrorCode::BadInput, "random_log_concave: n too small");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto uniform = [&](double a, double b) {
        return a + (b - a) * u01(rng);
    };
    // Piecewise-linear concave log-density: slopes strictly decrease from a
    // positive start to below a negative target, each segment of random width.
    const double slope_end = -uniform(0.5, 2.5);
    double slope = uniform(0.5, 2.5);
    std::vector<double> xs{0.0}, ys{0.0}, slopes;
    while (slope > slope_end && slopes.size() < 40) {
        const double w = uniform(0.3, 1.5);
        slopes.push_back(slope);
        xs.push_back(xs.back() + w);
        ys.push_back(ys.back() + slope * w);
        slope -= uniform(0.05, 1.2);
    }
    slopes.push_back(std::min(slope, slope_end));
    // Shift so the peak value is 0, then find where the log-density reaches
    // -46 on each side (extending along the end slopes when needed).
    const double peak = *std::max_element(ys.begin(), ys.end());
    for (double& y : ys) y -= peak;
    const double sl_left = slopes.front();  // > 0: rise toward the peak
    const double sl_right = slopes.back();  // < 0: decay past the peak
    double x_left;
    if (ys.front() >= -46.0) {
        x_left = xs.front() - (ys.front() + 46.0) / sl_left;
    } else {
        std::size_t j = 1;
        while (ys[j] < -46.0) ++j;
        x_left = xs[j - 1] + (-46.0 - ys[j - 1]) / slopes[j - 1];
    }
    double x_right;
    if (ys.back() >= -46.0) {
        x_right = xs.back() + (-46.0 - ys.back()) / sl_right;
    } else {
        std::size_t j = static_cast<std::size_t>(
            std::max_element(ys.begin(), ys.end()) - ys.begin());
        while (ys[j] >= -46.0) ++j;  // first knot past the peak below -46
        x_right = xs[j - 1] + (-46.0 - ys[j - 1]) / slopes[j - 1];
    }
    const auto log_density = [&](double x) {
        if (x <= xs.front()) return ys.front() + sl_left * (x - xs.front());
        if (x >= xs.back()) return ys.back() + sl_right * (x - xs.back());
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        return ys[i - 1] + slopes[i - 1] * (x - xs[i - 1]);
    };
    std::vector<double> grid(static_cast<std::size_t>(n)), dens(grid.size());
    for (int i = 0; i < n; ++i) {
        const double x =
            x_left + (x_right - x_left) * (static_cast<double>(i) / (n - 1));
        grid[static_cast<std::size_t>(i)] = x;
        dens[static_cast<std::size_t>(i)] = std::exp(log_density(x));
    }
    return GridMeasure(std::move(grid), std::move(dens));
}

}  // namespace fanomom
