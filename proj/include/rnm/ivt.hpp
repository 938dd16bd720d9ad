#pragma once

// Stratified intermediate value solver for continuous local functions
// L0 -> L0. On an atomic space a local function acts atom by atom, so it is
// carried as one scalar map per atom.

#include <cstdint>
#include <functional>
#include <vector>

#include "rnm/measure.hpp"

namespace rnm {

using ScalarMap = std::function<double(double)>;

class LocalFunction {
public:
    LocalFunction() = default;
    /// One map per atom, in atom order.
    LocalFunction(SpacePtr space, std::vector<ScalarMap> maps);
    /// The same map on every atom.
    static LocalFunction uniform(SpacePtr space, ScalarMap map);

    const SpacePtr& space() const noexcept { return space_; }
    const ScalarMap& at(std::size_t atom) const { return maps_.at(atom); }

    L0Real operator()(const L0Real& x) const;

    /// -f, used to flip orientation.
    LocalFunction negated() const;

private:
    SpacePtr space_;
    std::vector<ScalarMap> maps_;
};

/// Any map L0 -> L0; need not be local. locality_audit accepts these so a
/// non-local double can be exercised.
using L0Map = std::function<L0Real(const L0Real&)>;

inline constexpr int kIvtMaxIterations = 200;

/// eta in [y1, y2] with |f(eta) - xi| <= tol atomwise, by per-atom bisection
/// with orientation chosen from the sign of f(y2) - f(y1).
///
/// Throws PreconditionError when y1 > y2, xi lies outside
/// [f(y1) ^ f(y2), f(y1) v f(y2)] at some atom, or tol <= 0; ConvergenceError
/// when the residual is still above tol after kIvtMaxIterations halvings.
L0Real solve_ivt(const LocalFunction& f, const L0Real& y1, const L0Real& y2, const L0Real& xi, double tol);

struct LocalityReport {
    int trials = 0;
    std::uint64_t seed = 0;
    /// max over trials of d(I_A f(x), I_A f(I_A x)).
    double max_deviation = 0.0;
    int violating_trials = 0;

    bool local() const noexcept { return max_deviation <= 1e-12; }
};

/// Random x (standard normal per atom) and random events A (each atom kept
/// with probability 1/2).
LocalityReport locality_audit(const L0Map& f, const SpacePtr& space, int trials, std::uint64_t seed);
LocalityReport locality_audit(const LocalFunction& f, int trials, std::uint64_t seed);

}  // namespace rnm
