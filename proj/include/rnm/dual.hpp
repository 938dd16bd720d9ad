#pragma once

// Random conjugate space: a.s. bounded random linear functionals, realized as
// one dual vector per atom acting by the Euclidean pairing.

#include <cstdint>
#include <optional>

#include "rnm/module.hpp"

namespace rnm {

class RandomFunctional {
public:
    RandomFunctional() = default;
    explicit RandomFunctional(ModuleElement coefficients) : coeffs_(std::move(coefficients)) {}

    static RandomFunctional zero(SpecPtr spec) { return RandomFunctional(ModuleElement::zero(std::move(spec))); }

    const ModuleElement& coefficients() const noexcept { return coeffs_; }
    const SpecPtr& spec() const noexcept { return coeffs_.spec(); }
    const Vec& operator[](std::size_t atom) const { return coeffs_[atom]; }

private:
    ModuleElement coeffs_;
};

L0Real eval_functional(const RandomFunctional& f, const ModuleElement& x);

/// Atomwise dual norm (Holder conjugate exponent of each fiber norm).
L0Real dual_norm(const RandomFunctional& f);

/// g with g(x) = ||x|| and ||g||* = I_{A_x}, vanishing off A_x.
RandomFunctional norm_attaining(const ModuleElement& x);

struct SupFormulaReport {
    int samples = 0;
    std::uint64_t seed = 0;
    L0Real dual_norm;
    /// Atomwise max of |f(x)| over the sampled unit-sphere elements.
    L0Real sampled_sup;
    /// Same, after injecting the norming direction of f.
    L0Real sampled_sup_with_witness;
    bool inequality_holds = false;
    bool attained = false;

    L0Real element_norm;
    /// Atomwise max of g(x) over sampled unit functionals g.
    L0Real bidual_sampled_sup;
    L0Real bidual_sup_with_witness;
    bool bidual_inequality_holds = false;
    bool bidual_attained = false;

    bool passed() const noexcept {
        return inequality_holds && attained && bidual_inequality_holds && bidual_attained;
    }
};

/// Samples the sup formula for the dual norm and, for the element `x`
/// (defaults to the element with the same coordinates as f), the bidual
/// formula ||x|| = sup{g(x) : g in S*(1)}.
SupFormulaReport sup_formula_check(const RandomFunctional& f, int samples, std::uint64_t seed,
                                   const std::optional<ModuleElement>& x = std::nullopt);

}  // namespace rnm
