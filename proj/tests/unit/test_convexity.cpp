#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "random.hpp"
#include "rnm/convexity.hpp"
#include "rnm/errors.hpp"

using namespace rnm;

namespace {

constexpr ModulusVariant kVariants[] = {ModulusVariant::GeqSphere, ModulusVariant::EqSphere,
                                        ModulusVariant::GeqBall, ModulusVariant::EqBall};

SpecPtr single(int dim, FiberNorm n = FiberNorm::euclid()) {
    return RnModuleSpec::uniform(FiniteProbSpace::uniform({"a"}), dim, n);
}

double estimate(const SpecPtr& spec, double eps, ModulusVariant v, const SearchConfig& cfg = {}) {
    const ModulusQuery q{spec->support(), L0Real::constant(spec->space(), eps), v};
    return modulus_estimate(*spec, q, cfg).estimate[0];
}

}  // namespace

TEST(Variant, NamesRoundTrip) {
    for (auto v : kVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_THROW(parse_variant("geq"), PreconditionError);
}

TEST(EuclidOracle, Examples) {
    EXPECT_NEAR(euclid_modulus_oracle(1.0), 0.1339746, 1e-7);
    EXPECT_EQ(euclid_modulus_oracle(2.0), 1.0);
    EXPECT_NEAR(euclid_modulus_oracle(0.01), 1.25e-5, 1e-7);
    EXPECT_NEAR(euclid_modulus_oracle(1.0), oracle::angle_grid_modulus(oracle::planar_pnorm(2.0), 1.0, 3000), 1e-3);
    EXPECT_THROW(euclid_modulus_oracle(0.0), PreconditionError);
}

TEST(Modulus, EuclideanExamples) {
    auto spec = single(2);
    EXPECT_NEAR(estimate(spec, 1.0, ModulusVariant::GeqSphere), 1.0 - std::sqrt(3.0) / 2.0, 1e-3);
    EXPECT_EQ(estimate(spec, 2.0, ModulusVariant::GeqSphere), 1.0);
}

TEST(Modulus, MatchesParallelogramLawInTheEuclideanPlane) {
    auto spec = single(2);
    for (int k = 1; k <= 20; ++k) {
        const double eps = 0.1 * k;
        EXPECT_NEAR(estimate(spec, eps, ModulusVariant::GeqSphere), oracle::inner_product_modulus(eps), 1e-3) << eps;
    }
}

TEST(Modulus, MatchesBruteForceAngleGridForPNorms) {
    for (double p : {1.5, 3.0, 4.0}) {
        auto spec = single(2, FiberNorm::pnorm(p));
        for (double eps : {0.5, 1.0, 1.5}) {
            const double grid = oracle::angle_grid_modulus(oracle::planar_pnorm(p), eps, 1200);
            const double est = estimate(spec, eps, ModulusVariant::GeqSphere);
            // The grid only sees coarse pairs, so it bounds the estimate from above.
            EXPECT_LE(est, grid + 1e-9) << "p=" << p << " eps=" << eps;
            EXPECT_NEAR(est, grid, 5e-3) << "p=" << p << " eps=" << eps;
        }
    }
}

TEST(Modulus, OneNormHasFlatFaces) {
    auto spec = single(2, FiberNorm::pnorm(1.0));
    for (double eps : {0.5, 1.0, 2.0}) EXPECT_LT(estimate(spec, eps, ModulusVariant::GeqSphere), 1e-9);
}

TEST(Modulus, DimensionOneAtoms) {
    auto s = FiniteProbSpace::create({{"a", 0.5}, {"b", 0.5}});
    auto spec = RnModuleSpec::create(s, {{2, FiberNorm::euclid()}, {1, FiberNorm::pnorm(3.0)}});
    const EventSet b = EventSet::of(s, {"b"});
    testgen::Rng rng(51);
    for (int k = 0; k < 10; ++k) {
        const double eps = k == 0 ? 2.0 : testgen::uniform(rng, 1e-3, 2.0);
        const L0Real e = L0Real::constant(s, eps);
        for (auto v : {ModulusVariant::GeqSphere, ModulusVariant::GeqBall}) {
            const ModulusResult r = modulus_estimate(*spec, {b, e, v}, {});
            EXPECT_EQ(r.estimate[1], 1.0);
            EXPECT_EQ(r.estimate[0], 0.0);
            EXPECT_TRUE(r.empty_feasible.empty());
        }
        const ModulusResult eq = modulus_estimate(*spec, {b, e, ModulusVariant::EqSphere}, {});
        EXPECT_EQ(eq.estimate[1], 1.0);
        if (eps < 2.0) {
            EXPECT_EQ(eq.empty_feasible, b);
            ASSERT_FALSE(eq.diagnostics.empty());
            EXPECT_NE(eq.diagnostics[0].find("empty feasible set"), std::string::npos);
        }
    }
}

TEST(Modulus, VariantsAgreeOnTheQuasiRankTwoStratum) {
    struct Case {
        int dim;
        FiberNorm norm;
    };
    const Case cases[] = {{2, FiberNorm::euclid()}, {3, FiberNorm::euclid()}, {2, FiberNorm::pnorm(1.5)},
                          {2, FiberNorm::pnorm(3.0)}, {2, FiberNorm::pnorm(4.0)}, {3, FiberNorm::pnorm(3.0)}};
    for (const auto& c : cases) {
        auto spec = single(c.dim, c.norm);
        for (double eps : {0.25, 0.5, 1.0, 1.5, 2.0}) {
            const double base = estimate(spec, eps, ModulusVariant::GeqSphere);
            for (auto v : kVariants)
                EXPECT_NEAR(estimate(spec, eps, v), base, 5e-3)
                    << "dim=" << c.dim << " p=" << c.norm.p() << " eps=" << eps << " variant=" << to_string(v);
        }
    }
}

TEST(Modulus, LocalInTheDomain) {
    testgen::Rng rng(52);
    for (int t = 0; t < 5; ++t) {
        auto spec = testgen::spec(rng, 1, 3, true);
        const EventSet h = spec->support();
        const EventSet g = testgen::subset(h, rng);
        std::vector<double> ev(spec->size());
        for (auto& e : ev) e = testgen::uniform(rng, 0.1, 2.0);
        const L0Real eps(spec->space(), ev);
        SearchConfig cfg;
        cfg.grid_points = 256;
        const L0Real whole = modulus_estimate(*spec, {h, eps, ModulusVariant::GeqSphere}, cfg).estimate;
        const L0Real part = modulus_estimate(*spec, {g, eps, ModulusVariant::GeqSphere}, cfg).estimate;
        EXPECT_EQ(indicator(g) * whole, part);
    }
}

TEST(Modulus, MonotoneInEpsAsAnEstimator) {
    for (double p : {1.5, 2.0, 3.0}) {
        auto spec = single(2, FiberNorm::pnorm(p));
        double prev = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const double v = estimate(spec, 0.2 * k, ModulusVariant::GeqSphere);
            EXPECT_GE(v, prev - 1e-9);
            prev = v;
        }
    }
}

TEST(Modulus, AgreesWithDirectSearchOverModuleElements) {
    // Random pairs of whole elements on a two-atom space, never split by atom:
    // each pair with gap >= eps on both atoms bounds the stratified infimum
    // from above, atom by atom.
    auto s = FiniteProbSpace::create({{"a", 0.4}, {"b", 0.6}});
    auto spec = RnModuleSpec::create(s, {{2, FiberNorm::euclid()}, {2, FiberNorm::pnorm(3.0)}});
    const double eps = 1.0;
    const L0Real est =
        modulus_estimate(*spec, {EventSet::all(s), L0Real::constant(s, eps), ModulusVariant::GeqSphere}, {}).estimate;
    testgen::Rng rng(53);
    std::vector<double> best(2, 1.0);
    for (int t = 0; t < 400000; ++t) {
        const ModuleElement x = testgen::unit(spec, EventSet::all(s), rng);
        const ModuleElement y = testgen::unit(spec, EventSet::all(s), rng);
        const L0Real gap = random_norm(x - y);
        if (gap[0] < eps || gap[1] < eps) continue;
        const L0Real val = L0Real::constant(s, 1.0) - random_norm((x + y) * 0.5);
        for (std::size_t i = 0; i < 2; ++i) best[i] = std::min(best[i], val[i]);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LE(est[i], best[i] + 1e-9);
        EXPECT_NEAR(est[i], best[i], 5e-3);
    }
}

TEST(Modulus, Preconditions) {
    auto s = FiniteProbSpace::create({{"a", 0.5}, {"b", 0.5}});
    auto spec = RnModuleSpec::create(s, {{2, FiberNorm::euclid()}, {0, FiberNorm::euclid()}});
    const L0Real one = L0Real::constant(s, 1.0);
    EXPECT_THROW(modulus_estimate(*spec, {EventSet::none(s), one, ModulusVariant::GeqSphere}, {}), PreconditionError);
    EXPECT_THROW(modulus_estimate(*spec, {EventSet::all(s), one, ModulusVariant::GeqSphere}, {}), PreconditionError);
    EXPECT_THROW(modulus_estimate(*spec, {EventSet::of(s, {"a"}), L0Real::constant(s, 2.5), ModulusVariant::GeqSphere},
                                  {}),
                 PreconditionError);
    SearchConfig bad;
    bad.grid_points = 0;
    EXPECT_THROW(modulus_estimate(*spec, {EventSet::of(s, {"a"}), one, ModulusVariant::GeqSphere}, bad),
                 PreconditionError);
}

TEST(RotatePair, Examples) {
    auto spec = single(2);
    const EventSet a = EventSet::all(spec->space());
    const RotatedPair r = rotate_pair(ModuleElement(spec, {{1, 0}}), ModuleElement(spec, {{0, 1}}), a);
    EXPECT_NEAR(r.angle[0], 0.0, 1e-9);
    EXPECT_LE(max_abs_diff(r.u, ModuleElement(spec, {{1, 0}})), 1e-9);
    EXPECT_LE(max_abs_diff(r.v, ModuleElement(spec, {{0, 1}})), 1e-9);

    const ModuleElement x(spec, {{1, 0}}), y(spec, {{0, 0.5}});
    const RotatedPair q = rotate_pair(x, y, a);
    EXPECT_NEAR(random_norm(q.u)[0], 1.0, 1e-9);
    EXPECT_NEAR(random_norm(q.v)[0], 1.0, 1e-9);
    EXPECT_LE(max_abs_diff(q.u - q.v, x - y), 1e-12);
    EXPECT_EQ(*sphere_membership(q.u), a);
}

TEST(RotatePair, RandomIndependentPairs) {
    testgen::Rng rng(54);
    for (int t = 0; t < 200; ++t) {
        auto spec = testgen::spec(rng, 2, 4, true);
        const EventSet all = EventSet::all(spec->space());
        const ModuleElement x = testgen::unit(spec, all, rng);
        const ModuleElement y = testgen::independent_of(x, all, rng, 0.05, 1.0);
        const EventSet e = testgen::subset(all, rng);
        const RotatedPair r = rotate_pair(x, y, e);
        EXPECT_LE(max_abs_diff(random_norm(r.u), indicator(e)), 1e-9);
        EXPECT_LE(max_abs_diff(random_norm(r.v), indicator(e)), 1e-9);
        EXPECT_LE(max_abs_diff(r.u - r.v, restrict_to(e, x - y)), 1e-9);
    }
}

TEST(RotatePair, Preconditions) {
    auto spec = single(2);
    const EventSet a = EventSet::all(spec->space());
    EXPECT_THROW(rotate_pair(ModuleElement(spec, {{2, 0}}), ModuleElement(spec, {{0, 1}}), a), PreconditionError);
    EXPECT_THROW(rotate_pair(ModuleElement(spec, {{1, 0}}), ModuleElement(spec, {{0.5, 0}}), a), PreconditionError);
    EXPECT_THROW(rotate_pair(ModuleElement(spec, {{1, 0}}), ModuleElement(spec, {{0, 2}}), a), PreconditionError);
}

TEST(PrescribeGap, Examples) {
    auto spec = single(2);
    const EventSet a = EventSet::all(spec->space());
    const ModuleElement x(spec, {{1, 0}}), y(spec, {{0, 1}});
    const GapPair g1 = prescribe_gap(x, y, a, L0Real::constant(spec->space(), 1.0));
    EXPECT_NEAR(g1.angle[0], std::numbers::pi / 3, 1e-9);
    EXPECT_NEAR(g1.v[0][0], 0.5, 1e-9);
    EXPECT_NEAR(g1.v[0][1], -std::sqrt(3.0) / 2, 1e-9);
    const GapPair g2 = prescribe_gap(x, y, a, L0Real::constant(spec->space(), 2.0));
    EXPECT_NEAR(g2.angle[0], std::numbers::pi, 1e-9);
    EXPECT_LE(max_abs_diff(g2.v, -x), 1e-9);
    const GapPair g3 = prescribe_gap(x, y, a, L0Real::constant(spec->space(), 0.1));
    EXPECT_NEAR(g3.angle[0], 2 * std::asin(0.05), 1e-9);
    EXPECT_NEAR(random_norm(x - g3.v)[0], 0.1, 1e-9);
}

TEST(PrescribeGap, RandomIndependentPairs) {
    testgen::Rng rng(55);
    for (int t = 0; t < 200; ++t) {
        auto spec = testgen::spec(rng, 2, 4, true);
        const EventSet d = testgen::subset(EventSet::all(spec->space()), rng);
        const ModuleElement x = testgen::unit(spec, d, rng);
        const ModuleElement y = testgen::independent_of(x, d, rng, 1.0, 1.0);
        std::vector<double> ev(spec->size());
        for (auto& e : ev) e = testgen::uniform(rng, 1e-3, 2.0);
        const L0Real eps(spec->space(), ev);
        const GapPair g = prescribe_gap(x, y, d, eps);
        EXPECT_LE(max_abs_diff(random_norm(g.v), indicator(d)), 1e-9);
        EXPECT_LE(max_abs_diff(random_norm(x - g.v), eps * indicator(d)), 1e-9);
    }
}

TEST(EqualizePair, Examples) {
    auto spec = single(2);
    const ModuleElement x(spec, {{1, 0}}), y(spec, {{0.5, 0}});
    const EqualizedPair r = equalize_pair(x, y);
    const double s = std::sqrt(1.0 - 1.0 / 16.0);
    EXPECT_LE(max_abs_diff(r.u, ModuleElement(spec, {{0.25, s}})), 1e-9);
    EXPECT_LE(max_abs_diff(r.v, ModuleElement(spec, {{-0.25, s}})), 1e-9);
    EXPECT_NEAR(random_norm(r.u + r.v)[0], 2 * s, 1e-9);
    EXPECT_FALSE(r.lifted.empty());

    const ModuleElement y2(spec, {{0, 1}});
    const EqualizedPair k = equalize_pair(x, y2);
    EXPECT_EQ(k.u, x);
    EXPECT_EQ(k.v, y2);
    EXPECT_NEAR(random_norm(k.u + k.v)[0], std::sqrt(2.0), 1e-15);
}

TEST(EqualizePair, RandomMixedPairs) {
    testgen::Rng rng(56);
    for (int t = 0; t < 200; ++t) {
        auto spec = testgen::spec(rng, 2, 4, true);
        const EventSet all = EventSet::all(spec->space());
        const ModuleElement x = testgen::unit(spec, all, rng);
        ModuleElement y = testgen::independent_of(x, all, rng, 0.05, 1.0);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const int mode = testgen::uniform_int(rng, 0, 3);
            if (mode == 0) {
                const double g = (testgen::uniform_int(rng, 0, 1) ? 1 : -1) * testgen::uniform(rng, 0.05, 0.999);
                for (std::size_t k = 0; k < y[i].size(); ++k) y[i][k] = g * x[i][k];
            } else if (mode == 1) {
                y[i] = testgen::scaled(spec->norm(i), y[i], 1.0);
            }
        }
        const EqualizedPair r = equalize_pair(x, y);
        EXPECT_EQ(*sphere_membership(r.u), all);
        EXPECT_LE(max_abs_diff(random_norm(r.u), L0Real::constant(spec->space(), 1)), 1e-9);
        EXPECT_LE(max_abs_diff(random_norm(r.v), L0Real::constant(spec->space(), 1)), 1e-9);
        EXPECT_LE(max_abs_diff(r.u - r.v, x - y), 1e-9);
        const L0Real gain = random_norm(r.u + r.v) - random_norm(x + y);
        for (std::size_t i = 0; i < gain.size(); ++i) EXPECT_GE(gain[i], -1e-9);
    }
}

TEST(EqualizePair, RejectsDimensionOneAtoms) {
    auto s = FiniteProbSpace::create({{"a", 0.5}, {"b", 0.5}});
    auto spec = RnModuleSpec::create(s, {{2, FiberNorm::euclid()}, {1, FiberNorm::euclid()}});
    EXPECT_THROW(equalize_pair(ModuleElement(spec, {{1, 0}, {1}}), ModuleElement(spec, {{0, 0.5}, {0.5}})),
                 PreconditionError);
}

TEST(HalfBound, Examples) {
    auto spec = single(2);
    const HalfBoundReport r = halfbound_check(*spec, {1.0, 2.0, 0.2}, {});
    ASSERT_EQ(r.entries.size(), 3u);
    EXPECT_NEAR(r.entries[0].max_estimate, 0.134, 1e-3);
    EXPECT_EQ(r.entries[1].max_estimate, 1.0);
    EXPECT_NEAR(r.entries[2].max_estimate, 1 - std::sqrt(0.99), 1e-3);
    EXPECT_TRUE(r.passed());
    EXPECT_THROW(halfbound_check(*single(1), {1.0}, {}), PreconditionError);
}
