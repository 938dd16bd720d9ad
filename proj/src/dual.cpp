#include "rnm/dual.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rnm/errors.hpp"

namespace rnm {

L0Real eval_functional(const RandomFunctional& f, const ModuleElement& x) {
    require_same_spec(f.spec(), x.spec());
    std::vector<double> v(x.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = 0; k < x[i].size(); ++k) v[i] += f[i][k] * x[i][k];
    return L0Real(x.space(), std::move(v));
}

L0Real dual_norm(const RandomFunctional& f) {
    std::vector<double> v(f.coefficients().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.spec()->norm(i).dual_norm(f[i]);
    return L0Real(f.spec()->space(), std::move(v));
}

RandomFunctional norm_attaining(const ModuleElement& x) {
    ModuleElement g = ModuleElement::zero(x.spec());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = x.spec()->norm(i).norming_functional(x[i]);
    return RandomFunctional(std::move(g));
}

namespace {

// Gaussian direction per atom, normalized by `scale_norm` on each fiber.
template <class NormOf>
ModuleElement random_unit(const SpecPtr& spec, std::mt19937_64& rng, NormOf norm_of) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ModuleElement x = ModuleElement::zero(spec);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].empty()) continue;
        double n = 0.0;
        while (n == 0.0) {
            for (auto& c : x[i]) c = gauss(rng);
            n = norm_of(i, x[i]);
        }
        for (auto& c : x[i]) c /= n;
    }
    return x;
}

void absorb_max(L0Real& acc, const L0Real& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], v[i]);
}

}  // namespace

SupFormulaReport sup_formula_check(const RandomFunctional& f, int samples, std::uint64_t seed,
                                   const std::optional<ModuleElement>& x_opt) {
    if (samples < 1) throw PreconditionError("sup formula check needs at least one sample");
    const SpecPtr& spec = f.spec();
    const ModuleElement x = x_opt ? *x_opt : f.coefficients();
    require_same_spec(spec, x.spec());

    std::mt19937_64 rng(seed);
    SupFormulaReport r;
    r.samples = samples;
    r.seed = seed;
    r.dual_norm = dual_norm(f);
    r.sampled_sup = L0Real::zero(spec->space());
    r.element_norm = random_norm(x);
    r.bidual_sampled_sup = L0Real::constant(spec->space(), -HUGE_VAL);

    const auto primal = [&](std::size_t i, const Vec& v) { return spec->norm(i).norm(v); };
    const auto dual = [&](std::size_t i, const Vec& v) { return spec->norm(i).dual_norm(v); };
    for (int s = 0; s < samples; ++s) {
        absorb_max(r.sampled_sup, eval_functional(f, random_unit(spec, rng, primal)).abs());
        absorb_max(r.bidual_sampled_sup, eval_functional(RandomFunctional(random_unit(spec, rng, dual)), x));
    }
    // Zero-dimensional fibers contribute no functionals; their sup is 0.
    for (std::size_t i = 0; i < spec->size(); ++i)
        if (spec->dim(i) == 0) r.bidual_sampled_sup[i] = 0.0;

    ModuleElement witness = ModuleElement::zero(spec);
    for (std::size_t i = 0; i < witness.size(); ++i) witness[i] = spec->norm(i).norming_direction(f[i]);
    r.sampled_sup_with_witness = r.sampled_sup;
    absorb_max(r.sampled_sup_with_witness, eval_functional(f, witness).abs());
    r.bidual_sup_with_witness = r.bidual_sampled_sup;
    absorb_max(r.bidual_sup_with_witness, eval_functional(norm_attaining(x), x));

    constexpr double tol = 1e-12;
    r.inequality_holds = true;
    r.attained = true;
    r.bidual_inequality_holds = true;
    r.bidual_attained = true;
    for (std::size_t i = 0; i < spec->size(); ++i) {
        const double scale_f = std::max(1.0, r.dual_norm[i]);
        const double scale_x = std::max(1.0, r.element_norm[i]);
        if (r.sampled_sup_with_witness[i] > r.dual_norm[i] + tol * scale_f) r.inequality_holds = false;
        if (std::abs(r.sampled_sup_with_witness[i] - r.dual_norm[i]) > 1e-9 * scale_f) r.attained = false;
        if (r.bidual_sup_with_witness[i] > r.element_norm[i] + tol * scale_x) r.bidual_inequality_holds = false;
        if (std::abs(r.bidual_sup_with_witness[i] - r.element_norm[i]) > 1e-9 * scale_x) r.bidual_attained = false;
    }
    return r;
}

}  // namespace rnm
