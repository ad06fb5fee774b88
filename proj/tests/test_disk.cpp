#include "oracles.hpp"

#include <doctest.h>

#include <climits>

using namespace fdisk;

namespace {
ACoeff a(int i) { return ACoeff::point(i); }
DiskFun pf(const PointSetPtr& ps, int i, int m) { return DiskFun::point_factor(ps, i, m); }
}  // namespace

TEST_CASE("disk: products and derivatives") {
    auto ps = PointSet::symbolic(2);
    CHECK(pf(ps, 0, -1).deriv() == pf(ps, 0, -2) * ACoeff(-1));
    CHECK(pf(ps, 0, 1) * pf(ps, 0, -1) == DiskFun::constant(ps, 1));
    CHECK(DiskFun::z_power(ps, 2).deriv() == DiskFun::z(ps) * ACoeff(2));
    auto other = PointSet::symbolic(3);
    CHECK_THROWS_AS(DiskFun::z(ps) * DiskFun::z(other), DiskError);
}

TEST_CASE("disk: residue examples") {
    auto ps = PointSet::symbolic(2);
    CHECK(pf(ps, 0, -1).residue() == ACoeff(1));
    CHECK(DiskFun::z_power(ps, 3).residue() == ACoeff(0));
    CHECK(pf(ps, 0, -1).deriv().residue() == ACoeff(0));
    DiskFun g = pf(ps, 0, -1) * pf(ps, 1, -1);
    CHECK(g.residue() == ACoeff(0));
    CHECK((DiskFun::z(ps) * g).residue() == ACoeff(1));
}

TEST_CASE("disk: residue agrees with sum of local residues") {
    std::mt19937 rng(3);
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int trial = 0; trial < 12; ++trial) {
            DiskFun f = oracle::random_diskfun(rng, ps, 3, 3);
            ACoeff r = f.residue();
            CHECK(r.is_poly());
            CHECK(r == oracle::local_residue_sum(f));
        }
    }
}

TEST_CASE("disk: residue kills regular functions and derivatives") {
    std::mt19937 rng(4);
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int trial = 0; trial < 15; ++trial) {
            CHECK(oracle::random_diskfun(rng, ps, 4, 0).residue() == ACoeff(0));
            CHECK(oracle::random_diskfun(rng, ps, 3, 3).deriv().residue() == ACoeff(0));
        }
    }
}

TEST_CASE("disk: residue matrix for two points") {
    auto ps = PointSet::symbolic(2);
    DiskFun phi_inv = DiskFun::phi_power(ps, -1);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            DiskFun g = DiskFun(ps, ps->e(i)) * DiskFun(ps, ps->e(j)) * phi_inv;
            ACoeff s = oracle::local_residue_sum(g);
            CHECK(s == ps->S(i, j));
            CHECK(s == ACoeff(i + j == 3 ? 2 : 0));
        }
    CHECK(DiskFun::dual_basis(ps, {1, 4}) == DiskFun::basis(ps, {2, 4}) * ACoeff(Q(1, 2)));
    CHECK(DiskFun::dual_basis(ps, {2, -2}) == DiskFun::basis(ps, {1, -2}) * ACoeff(Q(1, 2)));
    CHECK((DiskFun::dual_basis(ps, {1, -1}) * DiskFun::basis(ps, {1, 0})).residue() == ACoeff(1));
}

TEST_CASE("disk: anti-triangular residue matrix") {
    for (int n = 1; n <= 4; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i + j <= n) CHECK(ps->S(i, j).is_zero());
                if (i + j == n + 1) {
                    CHECK(ps->S(i, j).is_constant());
                    CHECK(!ps->S(i, j).is_zero());
                }
            }
    }
}

TEST_CASE("disk: dual basis biorthogonality") {
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = -3; k <= 3; ++k)
                    for (int l = -3; l <= 3; ++l) {
                        ACoeff r = (DiskFun::dual_basis(ps, {j, k}) * DiskFun::basis(ps, {i, l})).residue();
                        CHECK(r == ACoeff((k == -l - 1 && i == j) ? 1 : 0));
                    }
    }
}

TEST_CASE("disk: classical basis at the origin") {
    auto ps = PointSet::rational({Q(0)});
    for (int k = -4; k <= 4; ++k) {
        DiskFun zk = k >= 0 ? DiskFun::z_power(ps, k) : pf(ps, 0, k);
        CHECK(DiskFun::basis(ps, {1, k}) == zk);
        CHECK(DiskFun::dual_basis(ps, {1, k}) == zk);
    }
}

TEST_CASE("disk: basis expansion") {
    auto ps = PointSet::symbolic(2);
    auto c1 = DiskFun::constant(ps, 1).to_basis(-2, 3);
    REQUIRE(c1.size() == 1);
    CHECK(c1.begin()->first == BasisIndex{1, 0});
    auto c2 = DiskFun::phi_power(ps, 2).to_basis(0, 3);
    REQUIRE(c2.size() == 1);
    CHECK(c2.begin()->first == BasisIndex{1, 2});
    CHECK(c2.begin()->second == ACoeff(1));

    DiskFun f = pf(ps, 0, -1);
    auto byexp = f.to_basis(-1, 2);
    auto bypair = f.to_basis_pairing(-1, 2);
    CHECK(byexp.size() == bypair.size());
    for (const auto& [idx, c] : bypair) CHECK(byexp.at(idx) == c);
    DiskFun rest = f - DiskFun::from_basis(ps, bypair);
    CHECK(rest.valuation() >= 3);
    CHECK_THROWS_WITH_AS(f.to_basis(0, 2), "valuation -1 below window start 0", DiskError);
}

TEST_CASE("disk: pairing expansion matches finite expansion on random inputs") {
    std::mt19937 rng(8);
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int trial = 0; trial < 5; ++trial) {
            DiskFun f = oracle::random_diskfun(rng, ps, 4, 2);
            int v = f.valuation();
            if (v == INT_MAX) continue;
            auto e = f.to_basis(v, v + 3);
            auto p = f.to_basis_pairing(v, v + 3);
            CHECK(e.size() == p.size());
            for (const auto& [idx, c] : p) CHECK(e.at(idx) == c);
            CHECK(DiskFun::from_basis(ps, f.expand_basis()) == f);
        }
    }
}

TEST_CASE("disk: compose") {
    auto ps = PointSet::symbolic(2);
    DiskFun z = DiskFun::z(ps);
    DiskFun one = DiskFun::constant(ps, 1);
    CHECK(DiskFun::z_power(ps, 2).compose(z + one) == (z + one).pow(2));
    DiskFun psi = z * ACoeff(2) + DiskFun::constant(ps, a(0));
    DiskFun f = DiskFun::z_power(ps, 3);
    CHECK(f.compose(psi).deriv() == f.deriv().compose(psi) * psi.deriv());
    CHECK(f.compose(psi).deriv() == (psi.pow(2) * ACoeff(6)));

    // z -> z + (a1 - a2) moves the pole at a1 to a2
    DiskFun shift = z + DiskFun::constant(ps, a(0) - a(1));
    DiskFun g = pf(ps, 0, -1).compose(shift);
    CHECK(g == pf(ps, 1, -1));
    CHECK(g.den() == std::vector<int>{0, 1});

    CHECK_THROWS_AS(f.compose(z.pow(2)), DiskError);
}

TEST_CASE("disk: chain rule on random inputs") {
    std::mt19937 rng(21);
    auto ps = PointSet::symbolic(2);
    DiskFun z = DiskFun::z(ps);
    DiskFun phi = DiskFun::phi_power(ps, 1);
    for (int trial = 0; trial < 8; ++trial) {
        // psi = z + phi * q keeps every point fixed
        DiskFun q = oracle::random_diskfun(rng, ps, 1, 0, 0);
        DiskFun psi = z + phi * q;
        DiskFun f = oracle::random_diskfun(rng, ps, 2, 1, 0);
        DiskFun lhs, rhs;
        try {
            lhs = f.compose(psi).deriv();
        } catch (const DiskError&) {
            continue;
        }
        rhs = f.deriv().compose(psi) * psi.deriv();
        CHECK(lhs == rhs);
    }
}

TEST_CASE("disk: json round trip") {
    auto ps = PointSet::symbolic(3);
    std::mt19937 rng(2);
    for (int t = 0; t < 5; ++t) {
        DiskFun f = oracle::random_diskfun(rng, ps, 3, 2);
        CHECK(DiskFun::from_json(ps, f.to_json()) == f);
    }
}
