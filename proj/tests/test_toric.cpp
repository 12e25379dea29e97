#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace qdm;
using qdm::test::load;

TEST(ParseFan, SmallestFans) {
    const FanData p1 = parse_fan(R"({"rays": [[1], [-1]], "max_cones": [[0], [1]]})");
    EXPECT_EQ(p1.num_rays(), 2u);
    EXPECT_EQ(p1.picard_rank(), 1u);
    const FanData p2 = parse_fan(R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[0,2]]})");
    EXPECT_EQ(p2.num_rays(), 3u);
    EXPECT_EQ(p2.picard_rank(), 1u);
}

TEST(ParseFan, Errors) {
    auto fails = [](const std::string& text, const std::string& fragment) {
        try {
            parse_fan(text);
        } catch (const FanError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
            return;
        }
        ADD_FAILURE() << "accepted: " << text;
    };
    fails(R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1,2]]})", "wrong ray count");
    fails(R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2])", "malformed");
    fails(R"({"rays": [[2,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[0,2]]})", "not primitive");
    // P(1,1,2)-like fan: cone {1,2} has determinant 2.
    fails(R"({"rays": [[1,0],[0,1],[-1,-2]], "max_cones": [[0,1],[1,2],[0,2]]})", "unimodular");
    // Incomplete: a cone missing.
    fails(R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2]]})", "wall shared by 1");
    fails(R"({"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,5],[0,2]]})", "out of range");
    fails(R"({"max_cones": [[0]]})", "needs");
}

TEST(ChargeMatrix, Examples) {
    EXPECT_EQ(load("p1").m.m, (IntMat{{1, 1}}));
    EXPECT_EQ(load("p2").m.m, (IntMat{{1, 1, 1}}));
    EXPECT_EQ(load("p1xp1").m.m, (IntMat{{1, 1, 0, 0}, {0, 0, 1, 1}}));
}

TEST(ChargeMatrix, RowsAreRelations) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        EXPECT_EQ(v.m.rows(), v.fan.picard_rank()) << name;
        EXPECT_EQ(linalg::rank(linalg::to_rational(v.m.m)), v.m.rows()) << name;
        for (const auto& row : v.m.m)
            for (std::size_t r = 0; r < v.fan.dimension(); ++r) {
                long s = 0;
                for (std::size_t k = 0; k < v.fan.num_rays(); ++k) s += row[k] * v.fan.rays[k][r];
                EXPECT_EQ(s, 0) << name;
            }
    }
}

TEST(ChargeMatrix, SuppliedNefBasis) {
    // P^1 x P^1 with the rulings listed in the other order.
    const FanData swapped = parse_fan(R"({"rays": [[1,0],[-1,0],[0,1],[0,-1]],
        "max_cones": [[0,2],[0,3],[1,2],[1,3]], "nef_basis": [["0","0","1","0"], ["1/1","0","0","0"]]})");
    EXPECT_EQ(charge_matrix(swapped).m, (IntMat{{0, 0, 1, 1}, {1, 1, 0, 0}}));

    const FanData twice = parse_fan(R"({"rays": [[1,0],[-1,0],[0,1],[0,-1]],
        "max_cones": [[0,2],[0,3],[1,2],[1,3]], "nef_basis": [["2","0","0","0"], ["0","0","1","0"]]})");
    EXPECT_THROW(charge_matrix(twice), NefBasisError);

    // On F_1 the exceptional divisor D_2 is not nef.
    const FanData not_nef = parse_fan(R"({"rays": [[1,0],[0,1],[-1,1],[0,-1]],
        "max_cones": [[0,1],[1,2],[2,3],[0,3]], "nef_basis": [["0","1","0","0"], ["1","0","0","0"]]})");
    EXPECT_THROW(charge_matrix(not_nef), NefBasisError);
}

TEST(ChargeMatrix, NonSimplicialNefConeNeedsExplicitBasis) {
    // Hexagon: P^2 blown up in three points, six (-1)-curves, Picard rank 4.
    const FanData dp6 = parse_fan(R"({"rays": [[1,0],[1,1],[0,1],[-1,0],[-1,-1],[0,-1]],
        "max_cones": [[0,1],[1,2],[2,3],[3,4],[4,5],[0,5]]})");
    EXPECT_THROW(charge_matrix(dp6), NefBasisError);
}

TEST(Pairing, Examples) {
    const auto p2 = load("p2");
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(pairing(p2.m, CurveClass({1}), k), 1);
    const auto pp = load("p1xp1");
    EXPECT_EQ(pairing_vector(pp.m, CurveClass({1, 0})), (IntVec{1, 1, 0, 0}));
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        for (std::size_t k = 0; k < v.m.cols(); ++k) EXPECT_EQ(pairing(v.m, CurveClass::zero(v.m.rows()), k), 0);
    }
}

TEST(Pairing, Bilinear) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> dist(-5, 5);
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        for (int t = 0; t < 20; ++t) {
            IntVec a(v.m.rows()), b(v.m.rows());
            for (auto& x : a) x = dist(rng);
            for (auto& x : b) x = dist(rng);
            for (std::size_t k = 0; k < v.m.cols(); ++k)
                EXPECT_EQ(pairing(v.m, CurveClass(a) + CurveClass(b), k),
                          pairing(v.m, CurveClass(a), k) + pairing(v.m, CurveClass(b), k));
        }
    }
}

TEST(MoriGenerators, Examples) {
    EXPECT_EQ(load("p2").gens, (std::vector<CurveClass>{CurveClass({1})}));
    EXPECT_EQ(load("p1xp1").gens, (std::vector<CurveClass>{CurveClass({0, 1}), CurveClass({1, 0})}));
    const auto f1 = load("f1");
    ASSERT_EQ(f1.gens.size(), 2u);
    // Fiber meets the two sections D_2, D_4; the exceptional curve D_2 meets
    // D_1, D_3 once and itself with -1. The third wall class is their sum.
    std::set<IntVec> pairings;
    for (const auto& g : f1.gens) pairings.insert(pairing_vector(f1.m, g));
    EXPECT_EQ(pairings, (std::set<IntVec>{{0, 1, 0, 1}, {1, -1, 1, 0}}));
    EXPECT_EQ(load("dp7").gens.size(), 3u);
}

TEST(MoriGenerators, NefCoordinatesNonnegative) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        for (const auto& g : v.gens)
            for (long x : g.d) EXPECT_GE(x, 0) << name;
    }
}

TEST(EnumerateDegrees, Examples) {
    const auto p2 = load("p2");
    EXPECT_EQ(enumerate_degrees(p2.gens, p2.m, 6),
              (std::vector<CurveClass>{CurveClass({0}), CurveClass({1}), CurveClass({2})}));
    const auto pp = load("p1xp1");
    EXPECT_EQ(enumerate_degrees(pp.gens, pp.m, 2),
              (std::vector<CurveClass>{CurveClass({0, 0}), CurveClass({0, 1}), CurveClass({1, 0})}));
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        EXPECT_EQ(enumerate_degrees(v.gens, v.m, 0), (std::vector<CurveClass>{CurveClass::zero(v.m.rows())}));
    }
    EXPECT_THROW(enumerate_degrees(p2.gens, p2.m, -1), Error);
}

// Oracle: nonnegative integer combinations of the wall classes, generated by
// breadth-first growth. In the corpus every Mori cone is unimodular, so this
// reaches every lattice point.
TEST(EnumerateDegrees, MatchesGeneratorCombinations) {
    for (const auto& name : qdm::test::corpus()) {
        const auto v = load(name);
        const long bound = 8;
        std::set<CurveClass> reach{CurveClass::zero(v.m.rows())};
        std::vector<CurveClass> frontier(reach.begin(), reach.end());
        while (!frontier.empty()) {
            std::vector<CurveClass> next;
            for (const auto& d : frontier)
                for (const auto& g : v.gens) {
                    const CurveClass e = d + g;
                    if (c1_degree(v.m, e) <= bound && reach.insert(e).second) next.push_back(e);
                }
            frontier = std::move(next);
        }
        const auto got = enumerate_degrees(v.gens, v.m, bound);
        EXPECT_EQ(std::set<CurveClass>(got.begin(), got.end()), reach) << name;
        // Downward closed: peeling a generator off a retained class stays inside.
        const std::set<CurveClass> kept(got.begin(), got.end());
        for (const auto& d : got)
            for (const auto& g : v.gens)
                if (reach.count(d - g)) {
                    EXPECT_TRUE(kept.count(d - g));
                }
    }
}

TEST(EnumerateDegrees, NonFanoRejected) {
    // Hirzebruch F_2: the (-2)-curve has c_1-degree 0.
    const FanData f2 = parse_fan(R"({"rays": [[1,0],[0,1],[-1,2],[0,-1]], "max_cones": [[0,1],[1,2],[2,3],[0,3]]})");
    const ChargeMatrix m = charge_matrix(f2);
    const auto gens = mori_generators(f2, m);
    EXPECT_THROW(enumerate_degrees(gens, m, 4), NonFanoError);
    const auto capped = enumerate_degrees(gens, m, 2, true);
    EXPECT_FALSE(capped.empty());
    for (const auto& d : capped) EXPECT_LE(c1_degree(m, d), 2);
}
