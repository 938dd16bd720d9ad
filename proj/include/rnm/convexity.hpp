#pragma once

// Modulus of random convexity in its four variants, the Euclidean closed
// form, and the constructions that turn gap and norm conditions into
// explicit element pairs.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rnm/module.hpp"

namespace rnm {

enum class ModulusVariant {
    GeqSphere,  ///< unit-sphere pairs, gap >= eps
    EqSphere,   ///< unit-sphere pairs, gap == eps
    GeqBall,    ///< unit-ball pairs, gap >= eps
    EqBall,     ///< unit-ball pairs, gap == eps
};

const char* to_string(ModulusVariant v);
/// Accepts the CLI names def | eq | ball | ball-eq. Throws PreconditionError.
ModulusVariant parse_variant(const std::string& name);

struct ModulusQuery {
    EventSet domain;
    L0Real eps;
    ModulusVariant variant = ModulusVariant::GeqSphere;
};

struct SearchConfig {
    int grid_points = 2048;
    int random_restarts = 64;
    int refine_iters = 200;
    std::uint64_t seed = 0;

    /// Throws PreconditionError unless every budget is positive.
    void validate() const;
    SearchConfig doubled() const;
};

struct ModulusResult {
    /// Estimate on the query domain, zero elsewhere.
    L0Real estimate;
    /// Atoms whose feasible set was empty; their value is 1 by convention.
    EventSet empty_feasible;
    std::vector<std::string> diagnostics;
};

/// Atomwise estimate of the fiber modulus on D: the least 1 - ||(x+y)/2||
/// over evaluated feasible pairs (an upper bound on the infimum). Fibers of
/// dimension one are enumerated exactly: the only sphere pairs with positive
/// gap are antipodal, giving 1; ball variants are not defined off the
/// quasi-rank >= 2 stratum and report the sphere value there.
ModulusResult modulus_estimate(const RnModuleSpec& spec, const ModulusQuery& q, const SearchConfig& cfg);

/// Classical fiber-level estimate for one normed space of dimension `dim`.
struct FiberModulus {
    double value = 1.0;
    bool empty_feasible = false;
    bool sphere_fallback = false;
};
FiberModulus fiber_modulus(const FiberNorm& norm, int dim, double eps, ModulusVariant variant,
                           const SearchConfig& cfg);

/// 1 - sqrt(1 - eps^2/4), the modulus of any inner-product space of
/// dimension >= 2. Requires 0 < eps <= 2.
double euclid_modulus_oracle(double eps);

struct RotatedPair {
    ModuleElement u;
    ModuleElement v;
    /// Rotation angle found by the intermediate value solve (zero off E).
    L0Real angle;
};

/// ||u|| = ||v|| = I_E and u - v = I_E(x - y). Requires ||x|| = I_{A_xy},
/// ||y|| <= 1, E nonempty, E subset of A_xy and x, y independent on E.
RotatedPair rotate_pair(const ModuleElement& x, const ModuleElement& y, const EventSet& e);

struct GapPair {
    ModuleElement v;
    L0Real angle;
};

/// v with ||v|| = I_D and ||x - v|| = eps * I_D. Requires ||x|| = ||y|| = I_D,
/// independence on D and 0 < eps <= 2 on D.
GapPair prescribe_gap(const ModuleElement& x, const ModuleElement& y, const EventSet& d, const L0Real& eps);

struct EqualizedPair {
    ModuleElement u;
    ModuleElement v;
    /// Atoms handled by rotation of an independent pair, by lifting a
    /// dependent pair, and by keeping x, y (||y|| = 1).
    EventSet rotated;
    EventSet lifted;
    EventSet kept;
};

/// ||u|| = ||v|| = I_{A_xy}, u - v = I_{A_xy}(x - y) and
/// ||u + v|| >= I_{A_xy}||x + y||. Requires P(A_xy) > 0, A_xy within G(S),
/// ||x|| = I_{A_xy} and ||y|| <= 1.
EqualizedPair equalize_pair(const ModuleElement& x, const ModuleElement& y);

struct HalfBoundEntry {
    double eps = 0.0;
    /// Largest estimate over G(S).
    double max_estimate = 0.0;
    bool holds = false;
};

struct HalfBoundReport {
    std::vector<HalfBoundEntry> entries;
    bool passed() const noexcept;
};

/// Checks modulus_estimate(G(S), eps, GeqSphere) <= eps/2 + 1e-6 for every
/// eps of the grid.
HalfBoundReport halfbound_check(const RnModuleSpec& spec, const std::vector<double>& eps_grid,
                                const SearchConfig& cfg);

}  // namespace rnm
