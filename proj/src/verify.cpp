#include "rnm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "rnm/convexity.hpp"
#include "rnm/dual.hpp"
#include "rnm/errors.hpp"
#include "rnm/lp_bridge.hpp"
#include "rnm/measure.hpp"
#include "rnm/module.hpp"
#include "rnm/rank.hpp"

namespace rnm::verify {

namespace {

using Rng = std::mt19937_64;

struct Check {
    std::string name;
    double tolerance = 0.0;
    long trials = 0;
    long failures = 0;
    double max_error = 0.0;

    void record(double error) {
        ++trials;
        if (std::isnan(error)) error = INFINITY;
        max_error = std::max(max_error, error);
        if (error > tolerance) ++failures;
    }
    void record(bool ok) { record(ok ? 0.0 : 1.0); }

    io::Json json() const {
        return io::Json{{"name", name},         {"passed", failures == 0}, {"trials", trials},
                        {"failures", failures}, {"max_error", max_error},  {"tolerance", tolerance}};
    }
};

struct Suite {
    std::string name;
    std::string statement;
    std::function<void(Rng&, std::vector<Check>&, io::Json&)> body;
};

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

SpacePtr random_space(Rng& rng, int min_atoms, int max_atoms) {
    const int n = uniform_int(rng, min_atoms, max_atoms);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) total += x = uniform(rng, 0.2, 1.0);
    std::vector<FiniteProbSpace::Atom> atoms;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = i + 1 == n ? 1.0 - acc : w[static_cast<std::size_t>(i)] / total;
        acc += wi;
        atoms.push_back({"w" + std::to_string(i), wi});
    }
    return FiniteProbSpace::create(std::move(atoms), 1e-9);
}

FiberNorm random_norm_kind(Rng& rng, bool allow_l1) {
    switch (uniform_int(rng, 0, allow_l1 ? 3 : 2)) {
        case 0: return FiberNorm::euclid();
        case 1: return FiberNorm::pnorm(1.5);
        case 2: return FiberNorm::pnorm(3.0);
        default: return FiberNorm::pnorm(1.0);
    }
}

SpecPtr random_spec(Rng& rng, int min_dim, int max_dim, bool allow_l1) {
    SpacePtr space = random_space(rng, 2, 5);
    std::vector<RnModuleSpec::Fiber> fibers;
    for (std::size_t i = 0; i < space->size(); ++i)
        fibers.push_back({uniform_int(rng, min_dim, max_dim), random_norm_kind(rng, allow_l1)});
    return RnModuleSpec::create(space, std::move(fibers));
}

Vec gaussian(Rng& rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(static_cast<std::size_t>(dim));
    for (auto& c : v) c = g(rng);
    return v;
}

Vec scaled_to(const FiberNorm& n, Vec v, double r) {
    const double s = n.norm(v);
    for (auto& c : v) c *= r / s;
    return v;
}

// Unit vector on the atoms of `on`, zero elsewhere.
ModuleElement random_unit(const SpecPtr& spec, const EventSet& on, Rng& rng) {
    ModuleElement x = ModuleElement::zero(spec);
    for (std::size_t i : on.indices()) x[i] = scaled_to(spec->norm(i), gaussian(rng, spec->dim(i)), 1.0);
    return x;
}

// Vector of norm at most one independent of x on every atom of `on`.
ModuleElement random_independent(const ModuleElement& x, const EventSet& on, Rng& rng, bool unit) {
    const SpecPtr& spec = x.spec();
    ModuleElement y = ModuleElement::zero(spec);
    for (std::size_t i : on.indices()) {
        do {
            y[i] = scaled_to(spec->norm(i), gaussian(rng, spec->dim(i)), unit ? 1.0 : uniform(rng, 0.2, 1.0));
        } while (!fibers_independent(x[i], y[i]));
    }
    return y;
}

double max_norm_error(const ModuleElement& x, const L0Real& target) {
    return max_abs_diff(random_norm(x), target);
}

EventSet random_nonempty_subset(const EventSet& e, Rng& rng) {
    auto idx = e.indices();
    std::vector<bool> m(e.space()->size(), false);
    for (std::size_t i : idx) m[i] = uniform(rng, 0.0, 1.0) < 0.6;
    m[idx[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(idx.size()) - 1))]] = true;
    return EventSet(e.space(), std::move(m));
}

// ------------------------------------------------------------------- suites

void variant_agreement(Rng& rng, std::vector<Check>& checks, io::Json& extra) {
    auto space = FiniteProbSpace::uniform({"e2", "e3", "p15", "p3"});
    auto spec = RnModuleSpec::create(space, {{2, FiberNorm::euclid()},
                                             {3, FiberNorm::euclid()},
                                             {2, FiberNorm::pnorm(1.5)},
                                             {2, FiberNorm::pnorm(3.0)}});
    Check agree{"variants agree atomwise", 5e-3};
    SearchConfig cfg;
    cfg.seed = rng();
    io::Json rows = io::Json::array();
    for (int k = 0; k < 3; ++k) {
        const double eps = uniform(rng, 0.1, 2.0);
        const L0Real e = L0Real::constant(space, eps);
        std::vector<L0Real> est;
        for (auto v : {ModulusVariant::GeqSphere, ModulusVariant::EqSphere, ModulusVariant::GeqBall,
                       ModulusVariant::EqBall})
            est.push_back(modulus_estimate(*spec, {EventSet::all(space), e, v}, cfg).estimate);
        for (std::size_t i = 0; i < space->size(); ++i) {
            double lo = est[0][i], hi = est[0][i];
            for (const auto& x : est) {
                lo = std::min(lo, x[i]);
                hi = std::max(hi, x[i]);
            }
            agree.record(hi - lo);
        }
        rows.push_back(io::Json{{"eps", eps}, {"estimate", io::to_json(est[0])["values"]}});
    }
    checks.push_back(agree);
    extra["estimates"] = rows;
}

void rotation(Rng& rng, std::vector<Check>& checks, io::Json&) {
    Check norms{"||u|| = ||v|| = I_E", 1e-9}, diff{"u - v = I_E (x - y)", 1e-9};
    for (int t = 0; t < 50; ++t) {
        auto spec = random_spec(rng, 2, 3, false);
        const EventSet all = EventSet::all(spec->space());
        const ModuleElement x = random_unit(spec, all, rng);
        const ModuleElement y = random_independent(x, all, rng, false);
        const EventSet e = random_nonempty_subset(all, rng);
        const RotatedPair r = rotate_pair(x, y, e);
        const L0Real ie = indicator(e);
        norms.record(std::max(max_norm_error(r.u, ie), max_norm_error(r.v, ie)));
        diff.record(max_abs_diff(r.u - r.v, restrict_to(e, x - y)));
    }
    checks.push_back(norms);
    checks.push_back(diff);
}

void gap(Rng& rng, std::vector<Check>& checks, io::Json&) {
    Check norm{"||v|| = I_D", 1e-9}, dist{"||x - v|| = eps I_D", 1e-9};
    for (int t = 0; t < 50; ++t) {
        auto spec = random_spec(rng, 2, 3, false);
        const EventSet all = EventSet::all(spec->space());
        const EventSet d = random_nonempty_subset(all, rng);
        const ModuleElement x = random_unit(spec, d, rng);
        const ModuleElement y = random_independent(x, d, rng, true);
        std::vector<double> eps(spec->size());
        for (auto& e : eps) e = uniform(rng, 0.01, 2.0);
        const L0Real ev(spec->space(), eps);
        const GapPair g = prescribe_gap(x, y, d, ev);
        const L0Real id = indicator(d);
        norm.record(max_norm_error(g.v, id));
        dist.record(max_abs_diff(random_norm(x - g.v), ev * id));
    }
    checks.push_back(norm);
    checks.push_back(dist);
}

void half_bound(Rng& rng, std::vector<Check>& checks, io::Json& extra) {
    auto spec = random_spec(rng, 1, 3, true);
    if (grand_stratum(*spec).empty()) {
        auto f = spec->fiber(0);
        std::vector<RnModuleSpec::Fiber> fibers;
        for (std::size_t i = 0; i < spec->size(); ++i) fibers.push_back(spec->fiber(i));
        fibers[0] = {2, f.norm};
        spec = RnModuleSpec::create(spec->space(), std::move(fibers));
    }
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k) grid.push_back(uniform(rng, 0.01, 2.0));
    SearchConfig cfg;
    cfg.seed = rng();
    const HalfBoundReport r = halfbound_check(*spec, grid, cfg);
    Check c{"estimate <= eps/2 on G(S)", 1e-6};
    io::Json rows = io::Json::array();
    for (const auto& e : r.entries) {
        c.record(std::max(0.0, e.max_estimate - e.eps / 2.0));
        rows.push_back(io::Json{{"eps", e.eps}, {"max_estimate", e.max_estimate}});
    }
    checks.push_back(c);
    extra["spec"] = io::to_json(*spec);
    extra["entries"] = rows;
}

void equalization(Rng& rng, std::vector<Check>& checks, io::Json&) {
    Check norms{"||u|| = ||v|| = I_A", 1e-9}, diff{"u - v = I_A (x - y)", 1e-9},
        sum{"||u + v|| >= ||x + y||", 1e-9};
    long dependent = 0;
    for (int t = 0; t < 50; ++t) {
        auto spec = random_spec(rng, 2, 3, false);
        const EventSet all = EventSet::all(spec->space());
        const ModuleElement x = random_unit(spec, all, rng);
        ModuleElement y = random_independent(x, all, rng, false);
        for (std::size_t i = 0; i < spec->size(); ++i) {
            const int mode = uniform_int(rng, 0, 3);
            if (mode == 0) {
                const double g = (uniform_int(rng, 0, 1) ? 1.0 : -1.0) * uniform(rng, 0.05, 1.0);
                for (std::size_t k = 0; k < y[i].size(); ++k) y[i][k] = g * x[i][k];
                ++dependent;
            } else if (mode == 1) {
                y[i] = scaled_to(spec->norm(i), y[i], 1.0);
            }
        }
        const EqualizedPair r = equalize_pair(x, y);
        const L0Real one = L0Real::constant(spec->space(), 1.0);
        norms.record(std::max(max_norm_error(r.u, one), max_norm_error(r.v, one)));
        diff.record(max_abs_diff(r.u - r.v, x - y));
        const L0Real gain = random_norm(r.u + r.v) - random_norm(x + y);
        double worst = 0.0;
        for (std::size_t i = 0; i < gain.size(); ++i) worst = std::max(worst, -gain[i]);
        sum.record(worst);
    }
    checks.push_back(norms);
    checks.push_back(diff);
    checks.push_back(sum);
}

void lp_audit(Rng& rng, std::vector<Check>& checks, io::Json& extra) {
    auto space = random_space(rng, 2, 4);
    auto spec = RnModuleSpec::uniform(space, 2, FiberNorm::euclid());
    const UniformConvexityReport r = uniform_convexity_audit(*spec, 2.0, 1.0, 20000, rng());
    Check range{"0 < delta_p < 1 on both batches", 0.0}, stable{"seed streams agree within 25%", 0.0};
    range.record(r.bounded.delta_p > 0.0 && r.bounded.delta_p < 1.0 && r.relative.delta_p > 0.0 &&
                 r.relative.delta_p < 1.0);
    stable.record(r.stability_delta < 0.25);
    checks.push_back(range);
    checks.push_back(stable);
    extra["delta_p"] = r.bounded.delta_p;
    extra["relative_delta_p"] = r.relative.delta_p;
    extra["stability_delta"] = r.stability_delta;
    extra["samples_accepted"] = r.bounded.samples_accepted;
}

void dimension_one(Rng& rng, std::vector<Check>& checks, io::Json&) {
    auto space = random_space(rng, 2, 5);
    std::vector<RnModuleSpec::Fiber> fibers;
    for (std::size_t i = 0; i < space->size(); ++i)
        fibers.push_back({i == 0 ? 2 : uniform_int(rng, 1, 2), random_norm_kind(rng, true)});
    fibers[1].dim = 1;
    auto spec = RnModuleSpec::create(space, std::move(fibers));
    std::vector<bool> m(space->size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = spec->dim(i) == 1;
    const EventSet ones(space, m);
    Check geq{"dimension-one atoms have modulus 1", 0.0}, flagged{"equality variant flags empty feasible set", 0.0};
    SearchConfig cfg;
    cfg.seed = rng();
    for (int k = 0; k < 10; ++k) {
        const double eps = k == 0 ? 2.0 : uniform(rng, 0.01, 2.0);
        const L0Real e = L0Real::constant(space, eps);
        for (auto v : {ModulusVariant::GeqSphere, ModulusVariant::GeqBall}) {
            const auto r = modulus_estimate(*spec, {ones, e, v}, cfg);
            for (std::size_t i : ones.indices()) geq.record(std::abs(r.estimate[i] - 1.0));
        }
        const auto r = modulus_estimate(*spec, {ones, e, ModulusVariant::EqSphere}, cfg);
        flagged.record(eps == 2.0 ? r.empty_feasible.empty() : r.empty_feasible == ones);
    }
    checks.push_back(geq);
    checks.push_back(flagged);
}

void norming(Rng& rng, std::vector<Check>& checks, io::Json&) {
    Check value{"g(x) = ||x||", 1e-12}, dual{"||g||* = I_{A_x}", 1e-12}, bound{"|f(x)| <= ||f||* ||x||", 1e-12},
        sup{"sampled sup formula attains the dual norm", 0.0};
    for (int t = 0; t < 50; ++t) {
        auto spec = random_spec(rng, 1, 4, true);
        const EventSet all = EventSet::all(spec->space());
        ModuleElement x = random_unit(spec, all, rng);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = uniform(rng, 0.0, 3.0);
            for (auto& c : x[i]) c *= r < 0.3 ? 0.0 : r;
        }
        const RandomFunctional g = norm_attaining(x);
        value.record(max_abs_diff(eval_functional(g, x), random_norm(x)));
        dual.record(max_abs_diff(dual_norm(g), indicator(supports(x).a_x)));
        const RandomFunctional f(random_unit(spec, all, rng) * uniform(rng, 0.1, 4.0));
        const ModuleElement z = random_unit(spec, all, rng) * uniform(rng, 0.1, 4.0);
        const L0Real lhs = eval_functional(f, z).abs();
        const L0Real rhs = dual_norm(f) * random_norm(z);
        double worst = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, lhs[i] - rhs[i]);
        bound.record(worst);
        if (t < 10) sup.record(sup_formula_check(f, 200, rng(), z).passed());
    }
    checks.push_back(value);
    checks.push_back(dual);
    checks.push_back(bound);
    checks.push_back(sup);
}

void axioms(Rng& rng, std::vector<Check>& checks, io::Json&) {
    Check positive{"||x|| >= 0 and ||x|| = 0 iff x = 0", 0.0}, homogeneous{"||xi x|| = |xi| ||x||", 1e-12},
        triangle{"||x + y|| <= ||x|| + ||y||", 1e-12}, metric{"Ky Fan triangle inequality", 1e-12};
    for (int t = 0; t < 200; ++t) {
        auto spec = random_spec(rng, 0, 4, true);
        const SpacePtr& space = spec->space();
        const EventSet all = EventSet::all(space);
        ModuleElement x = random_unit(spec, all, rng), y = random_unit(spec, all, rng),
                      z = random_unit(spec, all, rng);
        std::vector<double> xi(space->size());
        for (std::size_t i = 0; i < xi.size(); ++i) {
            xi[i] = uniform(rng, -3.0, 3.0);
            const double r = uniform(rng, 0.0, 2.0);
            for (auto& c : x[i]) c *= r < 0.2 ? 0.0 : r;
        }
        const L0Real nx = random_norm(x);
        bool ok = true;
        for (std::size_t i = 0; i < nx.size(); ++i) {
            const bool zero = std::all_of(x[i].begin(), x[i].end(), [](double c) { return c == 0.0; });
            if (nx[i] < 0.0 || (nx[i] == 0.0) != zero) ok = false;
        }
        positive.record(ok);
        const L0Real l(space, xi);
        const L0Real lhs = random_norm(module_scale(l, x));
        const L0Real rhs = l.abs() * nx;
        double rel = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            rel = std::max(rel, std::abs(lhs[i] - rhs[i]) / std::max(1.0, rhs[i]));
        homogeneous.record(rel);
        const L0Real s = random_norm(x + y) - nx - random_norm(y);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, s[i]);
        triangle.record(worst);
        metric.record(std::max(0.0, module_distance(x, z) - module_distance(x, y) - module_distance(y, z)));
    }
    checks.push_back(positive);
    checks.push_back(homogeneous);
    checks.push_back(triangle);
    checks.push_back(metric);
}

const std::vector<Suite>& suites() {
    static const std::vector<Suite> s = {
        {"thm12", "the four variants of the modulus of random convexity coincide on the quasi-rank >= 2 stratum",
         variant_agreement},
        {"lem31", "an independent pair can be rotated onto the unit sphere keeping its difference", rotation},
        {"lem32", "any gap eps in (0,2] is realized by a unit element built from an independent pair", gap},
        {"lem33", "the modulus of random convexity is at most eps/2 on the quasi-rank >= 2 stratum", half_bound},
        {"prop31", "a pair with ||x|| = 1, ||y|| <= 1 can be equalized onto the unit sphere without shrinking ||x+y||",
         equalization},
        {"prop32", "uniformly convex fibers give L^p(S) a positive convexity constant delta_p(eps) in (0,1)",
         lp_audit},
        {"cor21", "the modulus equals 1 off the quasi-rank >= 2 stratum", dimension_one},
        {"hb", "every element is normed by a functional of dual norm I_{A_x}; the dual norm is a sampled supremum",
         norming},
        {"axioms", "random norm axioms and the Ky Fan metric on random normed modules", axioms},
    };
    return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : suites()) n.push_back(s.name);
        return n;
    }();
    return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
    for (const auto& s : suites()) {
        if (s.name != name) continue;
        Rng rng(seed);
        std::vector<Check> checks;
        io::Json extra = io::Json::object();
        s.body(rng, checks, extra);
        bool passed = true;
        io::Json cj = io::Json::array();
        for (const auto& c : checks) {
            passed = passed && c.failures == 0;
            cj.push_back(c.json());
        }
        io::Json report{{"suite", s.name}, {"statement", s.statement}, {"seed", seed}, {"passed", passed},
                        {"checks", cj}};
        for (auto it = extra.begin(); it != extra.end(); ++it) report[it.key()] = it.value();
        return {std::move(report), passed};
    }
    throw PreconditionError("unknown suite '" + name + "'");
}

}  // namespace rnm::verify
