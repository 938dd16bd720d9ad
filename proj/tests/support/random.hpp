#pragma once

// Seeded generators for spaces, specs and elements used across test files.

#include <random>
#include <string>
#include <vector>

#include "rnm/module.hpp"
#include "rnm/rank.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

inline rnm::SpacePtr space(Rng& rng, int min_atoms, int max_atoms) {
    const int n = uniform_int(rng, min_atoms, max_atoms);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) total += x = uniform(rng, 0.1, 1.0);
    std::vector<rnm::FiniteProbSpace::Atom> atoms;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = i + 1 == n ? 1.0 - acc : w[static_cast<std::size_t>(i)] / total;
        acc += wi;
        atoms.push_back({"t" + std::to_string(i), wi});
    }
    return rnm::FiniteProbSpace::create(std::move(atoms), 1e-9);
}

inline rnm::FiberNorm norm(Rng& rng, bool allow_l1) {
    static const double ps[] = {1.5, 3.0, 4.0, 1.0};
    const int k = uniform_int(rng, 0, allow_l1 ? 4 : 3);
    return k == 0 ? rnm::FiberNorm::euclid() : rnm::FiberNorm::pnorm(ps[k - 1]);
}

inline rnm::SpecPtr spec(Rng& rng, int min_dim, int max_dim, bool allow_l1, int min_atoms = 2, int max_atoms = 5) {
    auto s = space(rng, min_atoms, max_atoms);
    std::vector<rnm::RnModuleSpec::Fiber> fibers;
    for (std::size_t i = 0; i < s->size(); ++i) fibers.push_back({uniform_int(rng, min_dim, max_dim), norm(rng, allow_l1)});
    return rnm::RnModuleSpec::create(s, std::move(fibers));
}

inline rnm::Vec gaussian(Rng& rng, int dim) {
    std::normal_distribution<double> g;
    rnm::Vec v(static_cast<std::size_t>(dim));
    for (auto& c : v) c = g(rng);
    return v;
}

inline rnm::Vec scaled(const rnm::FiberNorm& n, rnm::Vec v, double r) {
    const double s = n.norm(v);
    for (auto& c : v) c *= r / s;
    return v;
}

inline rnm::ModuleElement element(const rnm::SpecPtr& spec, Rng& rng, double scale = 1.0) {
    rnm::ModuleElement x = rnm::ModuleElement::zero(spec);
    for (std::size_t i = 0; i < spec->size(); ++i) {
        x[i] = gaussian(rng, spec->dim(i));
        for (auto& c : x[i]) c *= scale;
    }
    return x;
}

/// Unit vectors on the atoms of `on`, zero elsewhere.
inline rnm::ModuleElement unit(const rnm::SpecPtr& spec, const rnm::EventSet& on, Rng& rng) {
    rnm::ModuleElement x = rnm::ModuleElement::zero(spec);
    for (std::size_t i : on.indices()) x[i] = scaled(spec->norm(i), gaussian(rng, spec->dim(i)), 1.0);
    return x;
}

/// Norm in [lo, hi] and independent of x on every atom of `on`.
inline rnm::ModuleElement independent_of(const rnm::ModuleElement& x, const rnm::EventSet& on, Rng& rng, double lo,
                                         double hi) {
    const auto& spec = x.spec();
    rnm::ModuleElement y = rnm::ModuleElement::zero(spec);
    for (std::size_t i : on.indices()) {
        do {
            y[i] = scaled(spec->norm(i), gaussian(rng, spec->dim(i)), uniform(rng, lo, hi));
        } while (!rnm::fibers_independent(x[i], y[i]));
    }
    return y;
}

inline rnm::EventSet subset(const rnm::EventSet& e, Rng& rng, bool nonempty = true) {
    auto idx = e.indices();
    std::vector<bool> m(e.space()->size(), false);
    for (std::size_t i : idx) m[i] = uniform(rng, 0.0, 1.0) < 0.5;
    if (nonempty && !idx.empty()) m[idx[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(idx.size()) - 1))]] = true;
    return rnm::EventSet(e.space(), std::move(m));
}

}  // namespace testgen
