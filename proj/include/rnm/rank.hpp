#pragma once

// L0-independence of element pairs, the independent-part decomposition, the
// quasi-rank >= 2 stratum G(S), and the companion construction.

#include "rnm/module.hpp"

namespace rnm {

/// Relative threshold on the largest 2x2 minor.
inline constexpr double kRankTolerance = 1e-10;

/// Fiberwise linear independence of two vectors.
bool fibers_independent(std::span<const double> a, std::span<const double> b);

/// True iff x(w), y(w) are linearly independent at every atom w of E.
/// Throws PreconditionError for an empty E.
bool is_independent(const ModuleElement& x, const ModuleElement& y, const EventSet& e);

struct IndependencePart {
    /// Atoms of A_xy where x, y are dependent.
    EventSet dependent;
    /// Coefficients with xi*x + eta*y = 0 on `dependent`, zero elsewhere.
    L0Real xi;
    L0Real eta;
};

/// Requires P(A_xy) > 0. On the dependent stratum y = gamma*x and the
/// coefficients are xi = gamma, eta = -1.
IndependencePart independent_part(const ModuleElement& x, const ModuleElement& y);

/// Atoms with fiber dimension >= 2.
EventSet grand_stratum(const RnModuleSpec& spec);

/// Unit vector (in `norm`) independent of `u`, built by Gram-Schmidt from
/// the first standard basis vector not collinear with u and oriented so that
/// the first nonzero 2x2 minor of [u, v] is positive. Requires u.size() >= 2
/// and u != 0.
Vec companion_fiber(std::span<const double> u, const FiberNorm& norm);

/// v with ||v|| = I_{G(S)}, independent of u on G(S). Requires
/// ||u|| = I_{G(S)} (within 1e-12) and P(G(S)) > 0.
ModuleElement companion(const ModuleElement& u);

}  // namespace rnm
