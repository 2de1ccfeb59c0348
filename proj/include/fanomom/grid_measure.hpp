#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fanomom/parallel.hpp"

namespace fanomom {

/// A point mass.
struct Atom {
    double location;
    double mass;
};

/// A finite positive measure on the line, represented as a piecewise-linear
/// density between strictly increasing nodes plus a finite list of atoms.
/// All moment/transform routines integrate the linear segments in closed form,
/// so results carry no quadrature error beyond the representation itself.
class GridMeasure {
  public:
    /// Piecewise-linear density: nodes strictly increasing, density >= 0,
    /// matching lengths (>= 2 nodes).  Atoms optional.
    GridMeasure(std::vector<double> nodes, std::vector<double> density,
                std::vector<Atom> atoms = {});

    /// Pure atomic measure (no density part).
    static GridMeasure atoms_only(std::vector<Atom> atoms);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& density() const { return density_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    bool has_density() const { return !nodes_.empty(); }

    /// Total mass: closed-form trapezoid over segments plus atom masses.
    double total_mass() const;

    /// Mean of the normalized measure.
    double mean() const;

    /// p-th absolute moment about c of the *normalized* measure,
    /// (1/mass) * int |t - c|^p dmu(t), for real p >= 1.  Closed form per
    /// segment (power-function antiderivatives, segments split at t = c), so
    /// no refinement near t = c or in the tails is ever needed.
    ///
    /// With certify_tails set, first checks that the outermost tenth of the
    /// support at each end contributes a negligible fraction of the total
    /// p-th moment, and throws DivergentMoment otherwise.  That certificate
    /// is meaningful for measures with decaying tails and deliberately not
    /// applied by default: compactly supported measures with mass near the
    /// boundary (e.g. uniform on [0,1]) fail it while having perfectly finite
    /// moments.
    double moment_abs(double p, double c = 0.0, bool certify_tails = false) const;

    /// Laplace transform int e^{-gamma t} dmu(t), exact per segment.  With
    /// certify_tails set, throws DivergentTilt when the outermost slices
    /// contribute non-negligibly (the discrete proxy for gamma beyond the
    /// abscissa of convergence).
    double laplace(double gamma, bool certify_tails = false) const;

    /// Exponential tilt: the probability measure proportional to
    /// e^{-gamma t} dmu(t), with the density part re-sampled on the same nodes
    /// (a linear shift of log-density, so log-concavity is preserved exactly)
    /// and atoms reweighted exactly.  certify_tails as in laplace().
    GridMeasure tilt(double gamma, bool certify_tails = false) const;

    /// Ratio (E|X - c|^p)^{1/p} / (E|X - c|^q)^{1/q} for the normalized
    /// measure, with c the mean when centered, else 0.
    double norm_ratio(double p, double q, bool centered) const;

    /// L1 distance between the distribution functions of *this and other,
    /// both normalized: the 1-Wasserstein distance.  Exact: both CDFs are
    /// piecewise quadratic on the merged breakpoint set, and each piece is
    /// integrated in closed form after splitting at sign changes of the
    /// (quadratic) difference.
    double wasserstein1(const GridMeasure& other) const;

    /// Outcome of the log-concavity test: the largest second divided
    /// difference of the log-density (a positive value means convexity, i.e. a
    /// violation) and the node where it occurs.
    struct LogConcavityReport {
        bool flag;
        double worst_violation;
        double location;
    };

    /// Tests the nodal density for log-concavity: second divided differences
    /// of log(density) at interior positive-density nodes must be <= tol
    /// (divided differences estimate (log f)'', so the test is
    /// grid-invariant), and the positive-density region must be one interval.
    /// On a pure lattice measure (equally spaced atoms, no density) the same
    /// test runs on the log of the mass sequence.  Throws MixedRepresentation
    /// when atoms and density coexist, InsufficientSupport below 3 positive
    /// entries.
    LogConcavityReport log_concavity_report(double tol = 1e-9) const;

    /// Convenience wrapper: log_concavity_report(tol).flag.
    bool is_log_concave(double tol = 1e-9) const {
        return log_concavity_report(tol).flag;
    }

    /// Writes "t,density" lines (17 significant digits) preceded by any
    /// comment lines supplied, plus an atoms comment when atoms are present.
    void write_csv(std::ostream& os,
                   const std::vector<std::string>& comments = {}) const;

    /// Reads the format produced by write_csv.  Comment lines (leading '#')
    /// other than the atoms line are ignored.
    static GridMeasure read_csv(std::istream& is);

  private:
    GridMeasure() = default;

    std::vector<double> nodes_;    // strictly increasing, empty if atoms-only
    std::vector<double> density_;  // same length as nodes_
    std::vector<Atom> atoms_;      // sorted by location
};

/// int_a^b e^{-gamma t} * (linear through (a,fa),(b,fb)) dt, evaluated in a
/// cancellation-safe form (series near gamma*(b-a) = 0).  Exposed for reuse by
/// transform code that integrates e^{-gamma t} against other PL data.
double laplace_segment(double a, double b, double fa, double fb, double gamma);

/// Ratios (E|X|^p)^{1/p} / (E|X|^q)^{1/q} (uncentered) or centered at the
/// mean, for a batch of measures; parallelizes over the batch.
std::vector<double> norm_ratios(const std::vector<GridMeasure>& batch, double p,
                                double q, bool centered,
                                Exec exec = Exec::OpenMP);

/// Deterministic random log-concave test measure: a piecewise-linear concave
/// log-density with strictly decreasing slopes is drawn from `seed`, extended
/// until it has decayed by ~20 e-foldings on both sides, and sampled on a
/// uniform grid of `n` nodes.  Since log-density stays piecewise linear under
/// this construction, the result is exactly log-concave (up to rounding).
GridMeasure random_log_concave(std::uint64_t seed, int n = 2001);

}  // namespace fanomom
