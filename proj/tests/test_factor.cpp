#include "fdisk/factor.hpp"

#include <doctest.h>

using namespace fdisk;

namespace {

struct TwoPoints {
    PointSetPtr ps = PointSet::symbolic(2);
    Surjection merge = Surjection::make(ps, {0, 0});
    Decomposition split = Decomposition::make(ps, {{0}, {1}});
};

}  // namespace

TEST_CASE("factor: restriction of disk functions") {
    TwoPoints t;
    DiskFun f = DiskFun::point_factor(t.ps, 0, -1) * DiskFun::point_factor(t.ps, 1, -1);
    DiskFun r = restrict(t.merge, f);
    CHECK(r == DiskFun::point_factor(t.merge.target, 0, -2));
    CHECK(r.residue().is_zero());
    CHECK(f.residue().is_zero());
    // e_{1,k} -> e_{1,2k}, e_{2,k} -> 2 e_{1,2k+1}
    for (int k = -2; k <= 2; ++k) {
        CHECK(restrict(t.merge, DiskFun::basis(t.ps, {1, k})) == DiskFun::basis(t.merge.target, {1, 2 * k}));
        CHECK(restrict(t.merge, DiskFun::basis(t.ps, {2, k})) == DiskFun::basis(t.merge.target, {1, 2 * k + 1}) * ACoeff(2));
    }
    std::mt19937 rng(3);
    auto rep = restriction_properties(t.merge, 30, rng);
    CHECK(rep.pass);
    CHECK(rep.checked == 120);
    CHECK(t.merge.min_fibre() == 2);
    CHECK_THROWS_AS(Surjection::make(t.ps, {0, 2}), FactorError);
}

TEST_CASE("factor: expansion of disk functions") {
    TwoPoints t;
    DiskFun f = DiskFun::point_factor(t.ps, 0, -1) * DiskFun::point_factor(t.ps, 1, -1);
    int M = 4;
    auto e = expand(t.split, f, M);
    REQUIRE(e.parts.size() == 2);
    // geometric series around a_1
    const auto& c1 = t.split.comps[0];
    ACoeff inv = ACoeff::inv_difference(0, 1);
    DiskFun series(c1);
    for (int m = 0; m <= M; ++m) {
        ACoeff c = inv.pow(m + 1) * Q(m % 2 == 0 ? 1 : -1);
        series += DiskFun::point_factor(c1, 0, m) * c;
    }
    DiskFun comp1 = DiskFun::point_factor(c1, 0, -1) * series;
    CHECK(e.parts[0] == PhiTrunc(comp1, M));
    CHECK(e.parts[0].value() == comp1);
    CHECK(e.parts[0].value().residue() == inv);
    CHECK(e.parts[0].value().residue() + e.parts[1].value().residue() == f.residue());

    DiskFun reg = DiskFun::z(t.ps).pow(2) + DiskFun::constant(t.ps, 3);
    auto er = expand(t.split, reg, 3);
    CHECK(er.parts[0].value() == DiskFun(t.split.comps[0], reg.num()));
    CHECK(er.parts[1].value() == DiskFun(t.split.comps[1], reg.num()));
    CHECK_THROWS_AS(expand(t.split, DiskFun::point_factor(t.ps, 0, -3), 1), FactorError);

    std::mt19937 rng(4);
    auto rep = expansion_properties(t.split, 2, 15, rng);
    CHECK(rep.pass);
}

TEST_CASE("factor: bracket and products under both maps") {
    TwoPoints t;
    const auto& g = LieData::get("sl2");
    auto src = UAlgebra::make(g, Q(-2), t.ps);
    auto tgt = UAlgebra::make(g, Q(-2), t.merge.target);
    LoopElem x = LoopElem::generator(src, g.index("e"), DiskFun::point_factor(t.ps, 0, -1));
    LoopElem y = LoopElem::generator(src, g.index("f"), DiskFun::point_factor(t.ps, 0, 1));
    CHECK(restrict_loop(t.merge, loop_bracket(x, y), tgt) ==
          loop_bracket(restrict_loop(t.merge, x, tgt), restrict_loop(t.merge, y, tgt)));

    std::mt19937 rng(5);
    for (Q k : {Q(-2), Q(1)}) {
        auto r1 = restriction_algebra_properties(t.merge, g, k, 2, 6, rng);
        CHECK(r1.pass);
        auto r2 = expansion_algebra_properties(t.split, g, k, 2, 2, rng);
        CHECK(r2.pass);
        if (!r2.pass) MESSAGE(r2.to_json().dump());
    }
}

TEST_CASE("factor: generator n-products under restriction and expansion") {
    TwoPoints t;
    const auto& g = LieData::get("sl2");
    auto r = PlainRealization::make(g, Q(1), t.ps);
    auto E = Field::generator(r, g.index("e")), F = Field::generator(r, g.index("f")), H = Field::generator(r, g.index("h"));
    for (int m : {-1, 0, 1})
        for (auto [X, Y] : {std::pair{E, F}, std::pair{H, H}}) {
            auto P = Field::nprod(X, Y, m);
            auto rm = field_factorization_check(P, t.merge, 1, -1, 0);
            CHECK(rm.pass);
            if (!rm.pass) MESSAGE(rm.to_json().dump());
            auto rs = field_factorization_check(P, t.split, 1, -1, 0);
            CHECK(rs.pass);
            if (!rs.pass) MESSAGE(rs.to_json().dump());
        }
    auto U = Field::unity(r);
    CHECK(field_factorization_check(U, t.merge, 2, -2, 1).pass);
    CHECK(field_factorization_check(U, t.split, 2, -2, 1).pass);
}

TEST_CASE("factor: centre and oper dictionary commute with merge and split") {
    TwoPoints t;
    auto rep = main_diagram_check(t.merge, t.split, 2, -2, 0);
    CHECK(rep.pass);
    CHECK(rep.checked == 2 * 2 * 3);
    if (!rep.pass) MESSAGE(rep.to_json().dump());
}
