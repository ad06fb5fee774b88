#include "fdisk/fields.hpp"
#include "fdisk/jets.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fdisk;

TEST_CASE("jets: coordinates and small lifts") {
    auto ps = PointSet::symbolic(2);
    JetEngine eng(ps);
    std::vector<std::string> names = {"x", "y"};
    Poly x = parse_base_poly("x", names);
    for (int k = -3; k <= 1; ++k)
        for (int i = 1; i <= 2; ++i) CHECK(eng.lift(x, BasisIndex{i, k}, 2) == JetPoly::var(JetVar{0, i, k}));
    CHECK(eng.lift(x, BasisIndex{1, 2}, 2).is_zero());

    auto p0 = PointSet::rational({Q(0)});
    JetEngine e0(p0);
    JetPoly sq = e0.lift(parse_base_poly("x^2", {"x"}), BasisIndex{1, -1}, 0);
    // b = b0 + b1 z: x_{1,-1} = b0, x_{1,-2} = b1
    std::map<std::uint32_t, ACoeff> vals = {{JetVar{0, 1, -1}.pack(), ACoeff(Q(3))}, {JetVar{0, 1, -2}.pack(), ACoeff(Q(5))}};
    CHECK(sq.evaluate(vals) == ACoeff(Q(9)));
    CHECK(sq == JetPoly::var(JetVar{0, 1, -1}) * JetPoly::var(JetVar{0, 1, -1}));
}

TEST_CASE("jets: normally ordered lifts do not depend on factor order") {
    auto ps = PointSet::symbolic(2);
    JetEngine eng(ps);
    for (int N : {0, 1, 2})
        for (int k = -3; k <= 3; ++k)
            for (int i = 1; i <= 2; ++i) {
                DiskFun g = DiskFun::dual_basis(ps, {i, k});
                CHECK(eng.lift_ordered({0, 1}, g, N) == eng.lift_ordered({1, 0}, g, N));
                std::vector<int> f = {0, 1, 2};
                JetPoly ref = eng.lift_ordered(f, g, N);
                while (std::next_permutation(f.begin(), f.end())) CHECK(eng.lift_ordered(f, g, N) == ref);
            }
}

TEST_CASE("jets: functoriality and the shift law") {
    std::mt19937 rng(5);
    std::vector<std::string> names = {"x", "y"};
    for (int n : {1, 2}) {
        JetEngine eng(PointSet::symbolic(n));
        for (const char* text : {"x^2", "x*y", "x^2*y", "x - 3*y + 1/2"}) {
            Poly p = parse_base_poly(text, names);
            auto rep = verify_functoriality(eng, p, 2, 50, -3, rng);
            INFO(text, " ", rep.counterexamples.dump());
            CHECK(rep.pass);
            CHECK(rep.checked == 50 * 3 * n);
        }
        for (const char* text : {"x^2", "x*y", "x^2*y"})
            for (int m : {1, 2}) {
                auto rep = verify_shift(eng, parse_base_poly(text, names), 2, m, 5, -2, rng);
                INFO(text, " m=", m, " ", rep.counterexamples.dump());
                CHECK(rep.pass);
            }
    }
}

TEST_CASE("jets: parser") {
    std::vector<std::string> names = {"x", "y"};
    Poly p = parse_base_poly("(x + y)^2 - 2*x*y", names);
    CHECK(p == Poly::var(0) * Poly::var(0) + Poly::var(1) * Poly::var(1));
    CHECK(parse_base_poly("1/2*x", names) == Poly::var(0) * Q(1, 2));
    CHECK_THROWS_AS(parse_base_poly("x + z", names), JetError);
    CHECK_THROWS_AS(parse_base_poly("x +", names), JetError);
}

TEST_CASE("jets: Kostant invariants") {
    const auto& sl2 = LieData::get("sl2");
    auto inv2 = kostant_invariants(sl2);
    REQUIRE(inv2.size() == 1);
    int e = sl2.index("e"), h = sl2.index("h"), f = sl2.index("f");
    CHECK(inv2[0] == Poly::var(e) * Poly::var(f) + Poly::var(h) * Poly::var(h) * Q(1, 4));
    CHECK(is_ad_invariant(sl2, inv2[0]));
    CHECK_FALSE(is_ad_invariant(sl2, Poly::var(e) * Poly::var(f)));
    const auto& sl3 = LieData::get("sl3");
    auto inv3 = kostant_invariants(sl3);
    REQUIRE(inv3.size() == 2);
    for (const auto& p : inv3) CHECK(is_ad_invariant(sl3, p));
    CHECK(inv3[0].total_degree() == 2);
    CHECK(inv3[1].total_degree() == 3);
}

TEST_CASE("jets: symbols of enveloping elements") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    auto alg = UAlgebra::make(g, Q(1), ps);
    UElem x = UElem::factor(alg, 3, Factor{0, 1, -1, 0});
    JetPoly sx = symbol(x);
    CHECK(sx == JetPoly::var(JetVar{0, 1, -1}, ps->S(1, 1)) + JetPoly::var(JetVar{0, 2, -1}, ps->S(1, 2)));
    UElem y = UElem::factor(alg, 3, Factor{2, 2, 1, 0});
    CHECK(symbol(u_mul(x, y)) == symbol(x) * symbol(y));
    CHECK(symbol(u_mul(y, x)) == symbol(x) * symbol(y));
}

TEST_CASE("jets: Sugawara symbol is the lifted Casimir") {
    const auto& g = LieData::get("sl2");
    Poly P = kostant_invariants(g)[0];
    for (int n : {1, 2}) {
        auto ps = PointSet::symbolic(n);
        JetEngine eng(ps);
        auto S = sugawara(PlainRealization::make(g, Q(-2), ps));
        for (int N : {1, 2})
            for (int k = -2; k <= 0; ++k)
                for (int j = 1; j <= n; ++j)
                    CHECK(symbol(S->evaluate(DiskFun::dual_basis(ps, {j, k}), N)) == eng.lift(P, BasisIndex{j, k}, N));
    }
}

TEST_CASE("jets: presentation of a hypersurface") {
    JetEngine eng(PointSet::symbolic(2));
    std::vector<std::string> names = {"x", "y"};
    auto pres = jet_presentation(eng, names, {parse_base_poly("x*y", names)}, -2);
    CHECK(pres.relations.size() == 4);
    CHECK(pres.jet_vars.size() == 8);
    auto j = pres.to_json(2);
    CHECK(j["relations"].size() == 4);
}
