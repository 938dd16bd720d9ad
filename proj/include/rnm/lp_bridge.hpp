#pragma once

// The Banach space L^p(S) derived from a random normed module, with norm
// (E ||x||^p)^(1/p), and empirical audits of its uniform convexity.

#include <cstdint>
#include <string>

#include "rnm/convexity.hpp"
#include "rnm/module.hpp"

namespace rnm {

/// Requires 1 < p < inf.
double lp_norm(const ModuleElement& x, double p);

struct LpModulusEstimate {
    double estimate = 1.0;
    /// Same search with every budget doubled.
    double doubled_budget_estimate = 1.0;
    double budget_delta = 0.0;
};

/// Least 1 - ||(x+y)/2||_p over evaluated pairs on the unit sphere of
/// L^p(S) with ||x - y||_p >= eps. An upper bound on the modulus of
/// convexity; coordinate planes (including every plane inside a single
/// fiber) are always searched.
LpModulusEstimate lp_modulus_estimate(const RnModuleSpec& spec, double p, double eps, const SearchConfig& cfg);

struct ConvexityBatch {
    /// 1 - worst ratio ||(x+y)/2||^p / ((||x||^p + ||y||^p)/2).
    double delta_p = 0.0;
    double worst_ratio = 0.0;
    std::string worst_atom;
    long samples_accepted = 0;
    long samples_rejected = 0;
};

struct UniformConvexityReport {
    double p = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    int samples = 0;
    /// Samples satisfying ||x||, ||y|| <= 1 and ||x - y|| >= eps on D.
    ConvexityBatch bounded;
    /// Same batch under an independent seed stream.
    ConvexityBatch bounded_check;
    /// Samples satisfying ||x - y|| >= eps (||x|| v ||y||) on D.
    ConvexityBatch relative;
    /// |delta_p - delta_p'| / max(delta_p, delta_p') across the two streams.
    double stability_delta = 0.0;

    double delta_p() const noexcept { return bounded.delta_p; }
    bool passed() const noexcept;
};

/// Samples random (x, y, D) with D inside B_xy and reports the empirical
/// constant delta_p(eps) of the inequality
/// ||(x+y)/2||^p <= (1 - delta_p) (||x||^p + ||y||^p)/2 on D.
/// Throws PreconditionError when a fiber is not uniformly convex or the
/// ranges are violated, and Error when no sample is accepted.
UniformConvexityReport uniform_convexity_audit(const RnModuleSpec& spec, double p, double eps, int samples,
                                               std::uint64_t seed);

}  // namespace rnm
