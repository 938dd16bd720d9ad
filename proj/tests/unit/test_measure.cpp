#include <gtest/gtest.h>

#include <random>

#include "random.hpp"
#include "rnm/errors.hpp"
#include "rnm/measure.hpp"

using namespace rnm;

namespace {

SpacePtr ab() { return FiniteProbSpace::create({{"a", 0.5}, {"b", 0.5}}); }

L0Real real(const SpacePtr& s, std::vector<double> v) { return L0Real(s, std::move(v)); }

}  // namespace

TEST(Space, RejectsBadWeightsAndIds) {
    EXPECT_THROW(FiniteProbSpace::create({{"a", 0.4}, {"b", 0.5}}), SchemaError);
    EXPECT_THROW(FiniteProbSpace::create({{"a", 0.5}, {"a", 0.5}}), SchemaError);
    EXPECT_THROW(FiniteProbSpace::create({{"a", 1.0}, {"b", 0.0}}), SchemaError);
    EXPECT_THROW(FiniteProbSpace::create({}), SchemaError);
    EXPECT_THROW(FiniteProbSpace::create({{"", 1.0}}), SchemaError);
    EXPECT_NO_THROW(FiniteProbSpace::create({{"a", 0.3}, {"b", 0.7 + 1e-10}}, 1e-9));
}

TEST(Space, LooksUpAtoms) {
    auto s = ab();
    EXPECT_EQ(s->index_of("b"), 1u);
    EXPECT_FALSE(s->find("c"));
    EXPECT_THROW(s->index_of("c"), SchemaError);
    EXPECT_THROW(EventSet::of(s, {"c"}), SchemaError);
}

TEST(Event, Algebra) {
    auto s = FiniteProbSpace::uniform({"a", "b", "c", "d"});
    const EventSet e = EventSet::of(s, {"a", "b"});
    const EventSet f = EventSet::of(s, {"b", "c"});
    EXPECT_EQ((e & f).ids(), std::vector<std::string>{"b"});
    EXPECT_EQ((e | f).count(), 3u);
    EXPECT_EQ((e - f).ids(), std::vector<std::string>{"a"});
    EXPECT_EQ(e.complement(), EventSet::of(s, {"c", "d"}));
    EXPECT_DOUBLE_EQ(e.weight(), 0.5);
    EXPECT_TRUE((e & f).subset_of(e));
    EXPECT_TRUE(e.disjoint(e.complement()));
    EXPECT_TRUE(EventSet::none(s).empty());
}

TEST(Event, MixingSpacesIsAnError) {
    auto s = ab();
    auto t = FiniteProbSpace::create({{"a", 0.5}, {"c", 0.5}});
    EXPECT_THROW(EventSet::all(s) & EventSet::all(t), PreconditionError);
    EXPECT_THROW(L0Real::zero(s) + L0Real::zero(t), PreconditionError);
}

TEST(Indicator, Examples) {
    auto s = ab();
    EXPECT_EQ(indicator(EventSet::of(s, {"a"})), real(s, {1, 0}));
    EXPECT_EQ(indicator(EventSet::none(s)), real(s, {0, 0}));
    EXPECT_EQ(indicator(EventSet::all(s)), real(s, {1, 1}));
}

TEST(LatticeExtrema, Examples) {
    auto s = ab();
    const std::vector<L0Real> fam{real(s, {1, 3}), real(s, {2, 0})};
    EXPECT_EQ(lattice_extrema(fam, Extremum::Sup), real(s, {2, 3}));
    EXPECT_EQ(lattice_extrema(fam, Extremum::Inf), real(s, {1, 0}));
    const std::vector<L0Real> one{real(s, {5, 5})};
    EXPECT_EQ(lattice_extrema(one, Extremum::Sup), real(s, {5, 5}));
    EXPECT_THROW(lattice_extrema(std::vector<L0Real>{}, Extremum::Sup), PreconditionError);
}

TEST(StrataPos, Examples) {
    auto s = ab();
    EXPECT_EQ(strata_pos(real(s, {0.5, 0})).ids(), std::vector<std::string>{"a"});
    EXPECT_TRUE(strata_pos(real(s, {0, 0})).empty());
    EXPECT_EQ(strata_pos(real(s, {2, -1})).ids(), std::vector<std::string>{"a"});
}

TEST(KyFan, Examples) {
    auto s = ab();
    EXPECT_DOUBLE_EQ(kyfan_distance(real(s, {0, 0}), real(s, {2, 0.5})), 0.75);
    EXPECT_DOUBLE_EQ(kyfan_distance(real(s, {3, -1}), real(s, {3, -1})), 0.0);
    EXPECT_DOUBLE_EQ(kyfan_distance(real(s, {0.2, 0.2}), real(s, {0, 0})), 0.2);
}

TEST(LeqOn, Examples) {
    auto s = ab();
    const L0Real xi = real(s, {1, 5}), eta = real(s, {2, 0});
    EXPECT_TRUE(leq_on(xi, eta, EventSet::of(s, {"a"})));
    EXPECT_FALSE(leq_on(xi, eta, EventSet::all(s)));
    EXPECT_TRUE(leq_on(eta, xi, EventSet::none(s)));
    EXPECT_FALSE(leq(xi, eta));
}

TEST(LatticeLaws, RandomFamilies) {
    testgen::Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        auto s = testgen::space(rng, 1, 6);
        auto draw = [&] {
            std::vector<double> v(s->size());
            for (auto& x : v) x = testgen::uniform(rng, -5, 5);
            return L0Real(s, v);
        };
        const L0Real x = draw(), y = draw(), z = draw();
        EXPECT_EQ(sup(x, y), sup(y, x));
        EXPECT_EQ(inf(x, y), inf(y, x));
        EXPECT_EQ(sup(sup(x, y), z), sup(x, sup(y, z)));
        EXPECT_EQ(inf(inf(x, y), z), inf(x, inf(y, z)));
        EXPECT_EQ(sup(x, x), x);
        EXPECT_EQ(inf(x, x), x);
        EXPECT_LE(max_abs_diff(sup(x, y) + inf(x, y), x + y), 1e-12);
    }
}

TEST(KyFan, MetricLaws) {
    testgen::Rng rng(12);
    for (int t = 0; t < 1000; ++t) {
        auto s = testgen::space(rng, 1, 6);
        auto draw = [&] {
            std::vector<double> v(s->size());
            for (auto& x : v) x = testgen::uniform(rng, -2, 2);
            return L0Real(s, v);
        };
        const L0Real x = draw(), y = draw(), z = draw();
        EXPECT_LE(kyfan_distance(x, z), kyfan_distance(x, y) + kyfan_distance(y, z) + 1e-12);
        EXPECT_DOUBLE_EQ(kyfan_distance(x, y), kyfan_distance(y, x));
        EXPECT_GE(kyfan_distance(x, y), 0.0);
        EXPECT_LE(kyfan_distance(x, y), 1.0);
    }
}

TEST(IndicatorAlgebra, MatchesSetOperations) {
    testgen::Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        auto s = testgen::space(rng, 1, 6);
        const EventSet e = testgen::subset(EventSet::all(s), rng, false);
        const EventSet f = testgen::subset(EventSet::all(s), rng, false);
        EXPECT_EQ(indicator(e & f), indicator(e) * indicator(f));
        EXPECT_EQ(indicator(e | f), sup(indicator(e), indicator(f)));
    }
}

TEST(KyFan, WitnessesConvergenceInProbability) {
    auto s = FiniteProbSpace::create({{"a", 0.2}, {"b", 0.3}, {"c", 0.5}});
    const L0Real xi = real(s, {1, -2, 0.5});
    const L0Real eta = real(s, {30, -4, 0.0});
    double prev = 2.0;
    for (int n = 1; n <= 200; ++n) {
        const double d = kyfan_distance(xi + eta * (1.0 / n), xi);
        EXPECT_LE(d, prev);
        prev = d;
    }
    EXPECT_LT(prev, 0.05);
}
