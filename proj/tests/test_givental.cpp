#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace qdm;
using qdm::test::load;

TEST(EulerRatio, ZeroDegreeIsOne) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        EXPECT_EQ(euler_ratio(v.ring, v.m, CurveClass::zero(v.m.rows())), lh_one(v.ring));
    }
}

TEST(EulerRatio, ProjectiveLineDegreeOne) {
    const auto p1 = load("p1");
    LaurentH expected = LaurentH::constant(p1.ring.one(), -2);
    expected.add(-3, Rational(-2) * p1.ring.omega(0));
    EXPECT_EQ(euler_ratio(p1.ring, p1.m, CurveClass({1})), expected);
}

TEST(EulerRatio, MultiplyBackOracle) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        for (const auto& d : enumerate_degrees(v.gens, v.m, 8)) {
            const LaurentH r = euler_ratio(v.ring, v.m, d);
            const auto [den, num] = qdm::test::defining_products(v, d);
            EXPECT_EQ(lh_multiply(v.ring, r, den), num) << name;
        }
    }
}

TEST(EulerRatio, ProjectiveSpacePureHbarPart) {
    for (int n = 1; n <= 3; ++n) {
        const auto pn = qdm::test::projective_space(n);
        for (long d = 0; d <= 5; ++d) {
            const LaurentH r = euler_ratio(pn.ring, pn.m, CurveClass({d}));
            const Rational expected = 1 / pow_rational(factorial(d), n + 1);
            const int e = static_cast<int>(-d * (n + 1));
            EXPECT_EQ(r.at(e, pn.ring.dim())[0], expected);
            EXPECT_EQ(r.max_exponent(), e);
        }
    }
}

TEST(EulerRatio, SignModes) {
    const auto f1 = load("f1");
    CurveClass exceptional;
    for (const auto& g : f1.gens)
        for (long a : pairing_vector(f1.m, g))
            if (a < 0) exceptional = g;
    ASSERT_FALSE(exceptional.d.empty());
    EXPECT_THROW(euler_ratio(f1.ring, f1.m, exceptional, SignMode::strict_positive), NegativePairingError);
    const LaurentH r = euler_ratio(f1.ring, f1.m, exceptional);
    // One numerator factor alpha_2 (nu = 0), two inverted factors (alpha + hbar).
    EXPECT_EQ(r.max_exponent(), -2);

    const FanData f2 = parse_fan(R"({"rays": [[1,0],[0,1],[-1,2],[0,-1]], "max_cones": [[0,1],[1,2],[2,3],[0,3]]})");
    const ChargeMatrix m = charge_matrix(f2);
    const CohomRing ring = build_ring(f2, m);
    for (const auto& g : mori_generators(f2, m)) {
        if (c1_degree(m, g) > 0) continue;
        EXPECT_THROW(euler_ratio(ring, m, g), NonFanoError);
        EXPECT_NO_THROW(euler_ratio(ring, m, g, SignMode::general));
    }
}

TEST(BuildF, Examples) {
    const auto p2 = load("p2");
    const auto f = build_F(p2.ring, p2.m, p2.gens, 3);
    ASSERT_EQ(f.terms.size(), 2u);
    EXPECT_EQ(f.terms.at(CurveClass({0})).value, lh_one(p2.ring));
    // R_1 (w + h)^3 == 1.
    LaurentH cube = lh_one(p2.ring);
    for (int i = 0; i < 3; ++i) cube = lh_multiply(p2.ring, cube, lh_linear(p2.ring, p2.ring.omega(0), 1));
    EXPECT_EQ(lh_multiply(p2.ring, f.terms.at(CurveClass({1})).value, cube), lh_one(p2.ring));

    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        const auto f0 = build_F(v.ring, v.m, v.gens, 0);
        ASSERT_EQ(f0.terms.size(), 1u);
        EXPECT_EQ(f0.terms.begin()->second.value, lh_one(v.ring));
        EXPECT_TRUE(f0.prefactor);
    }

    const auto pp = load("p1xp1");
    const auto fpp = build_F(pp.ring, pp.m, pp.gens, 2);
    EXPECT_EQ(fpp.terms.size(), 3u);
    LaurentH square = lh_multiply(pp.ring, lh_linear(pp.ring, pp.ring.omega(0), 1), lh_linear(pp.ring, pp.ring.omega(0), 1));
    EXPECT_EQ(fpp.terms.at(CurveClass({1, 0})).value, lh_invert(pp.ring, square));
}

TEST(BuildF, Homogeneity) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        const auto f = build_F(v.ring, v.m, v.gens, 8);
        for (const auto& [d, e] : f.terms) EXPECT_EQ(homogeneity_violations(v.ring, f.c1(d), e.value), 0u) << name;
    }
}

TEST(Component, ProjectiveSpaceClosedForm) {
    for (int n = 1; n <= 3; ++n) {
        const auto pn = qdm::test::projective_space(n);
        const auto f = build_F(pn.ring, pn.m, pn.gens, 4 * (n + 1));
        const auto f0 = component(pn.ring, f, 0, n);
        for (long d = 0; d <= 4; ++d) {
            const auto& coeffs = f0.at(CurveClass({d}));
            ASSERT_EQ(coeffs.size(), 1u);
            const auto& [key, value] = *coeffs.begin();
            EXPECT_EQ(key.logs, IntVec{0});
            EXPECT_EQ(key.hbar, -d * (n + 1));
            EXPECT_EQ(value, 1 / pow_rational(factorial(d), n + 1));
        }
    }
}

TEST(Component, PointDualAtDegreeZero) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        const auto f = build_F(v.ring, v.m, v.gens, 4);
        const auto c = component(v.ring, f, 0, v.ring.top_degree());
        const auto& q0 = c.at(CurveClass::zero(v.m.rows()));
        ASSERT_EQ(q0.size(), 1u);
        EXPECT_EQ(q0.begin()->second, 1);
        EXPECT_EQ(q0.begin()->first.hbar, 0);
    }
}

TEST(Component, ProjectiveLineLogTerm) {
    const auto p1 = load("p1");
    const auto f = build_F(p1.ring, p1.m, p1.gens, 2);
    const auto f1 = component(p1.ring, f, 1, 1);
    const auto& q0 = f1.at(CurveClass({0}));
    ASSERT_EQ(q0.size(), 1u);
    EXPECT_EQ(q0.begin()->first, (LogKey{{1}, -1}));
    EXPECT_EQ(q0.begin()->second, 1);
    // log_order 0 drops the L term.
    EXPECT_TRUE(component(p1.ring, f, 1, 0).at(CurveClass({0})).empty());
    EXPECT_THROW(component(p1.ring, f, 2, 1), Error);
}
