#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fanomom {

/// Outcome of one acceptance criterion: a headline measurement against its
/// bound (direction given by cmp), plus secondary gates folded into passed
/// and described in detail.
struct CriterionResult {
    std::string name;
    bool passed;
    /// Headline measured value (NaN when the criterion threw).
    double measured;
    /// Headline bound after tolerance scaling.
    double bound;
    /// "<=" or ">=": the sense in which measured must relate to bound.
    std::string cmp;
    /// Secondary measurements, timings, and failure reasons.
    std::string detail;
};

struct AcceptanceOptions {
    /// Smaller sweeps sized for an interactive run; the full profile is the
    /// release gate.
    bool quick = false;
    /// Multiplies every "<=" headline bound and divides every ">=" one;
    /// values far below 1 force failures on purpose (a self-test that the
    /// harness actually compares).
    double tolerance_scale = 1.0;
};

/// Runs the full acceptance battery in a fixed order, invoking on_result
/// after each criterion (for streaming progress lines) and returning all
/// results.  Criteria never throw: an exception inside one marks it failed
/// with the message in detail.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = nullptr);

}  // namespace fanomom
