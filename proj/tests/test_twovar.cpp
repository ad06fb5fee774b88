#include "fdisk/twovar.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fdisk;

namespace {
ACoeff a(int i) { return ACoeff::point(i); }
}

TEST_CASE("twovar: h polynomial") {
    auto origin = PointSet::rational({Q(0)});
    CHECK(TwoVar::h_poly(origin) == TwoVar::constant(origin, 1));

    auto ps = PointSet::symbolic(2);
    DiskFun z = DiskFun::z(ps), one = DiskFun::constant(ps, 1);
    TwoVar expect = TwoVar::tensor(z, one) + TwoVar::tensor(one, z) - TwoVar::constant(ps, a(0) + a(1));
    CHECK(TwoVar::h_poly(ps) == expect);

    for (int n = 1; n <= 3; ++n) {
        auto p = PointSet::symbolic(n);
        DiskFun phi = DiskFun::phi_power(p, 1), u = DiskFun::constant(p, 1);
        CHECK(TwoVar::diagonal(p) * TwoVar::h_poly(p) == TwoVar::tensor(phi, u) - TwoVar::tensor(u, phi));
        CHECK(TwoVar::h_poly(p).swap() == TwoVar::h_poly(p));
    }
}

TEST_CASE("twovar: Taylor expansion examples") {
    auto ps = PointSet::symbolic(2);
    DiskFun z = DiskFun::z(ps), one = DiskFun::constant(ps, 1);
    TwoVar diag = TwoVar::diagonal(ps);
    TwoVar t = taylor(z.pow(2), 2);
    TwoVar expect = TwoVar::tensor(one, z.pow(2)) + diag * TwoVar::tensor(one, z * ACoeff(2)) + diag.pow(2);
    CHECK(t == expect);
    CHECK(taylor(z, 0) == TwoVar::tensor(one, z));
    CHECK(TwoVar::tensor(z, one) - taylor(z, 0) == diag);

    DiskFun f = DiskFun::point_factor(ps, 0, -1);
    TwoVar rem = TwoVar::tensor(f, one) - taylor(f, 2);
    CHECK(rem.divisible_by_diagonal(3));
    CHECK_FALSE(rem.divisible_by_diagonal(4));
    // the quotient is -(z-a1)^-1 (w-a1)^-3, from the geometric series in (z - w)
    TwoVar q = rem.divide_by_diagonal().divide_by_diagonal().divide_by_diagonal();
    CHECK(q == TwoVar::tensor(f, DiskFun::point_factor(ps, 0, -3)) * ACoeff(-1));
}

TEST_CASE("twovar: Taylor remainder divisibility on random inputs") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 1 + trial % 3;
        int N = trial % 5;
        auto ps = PointSet::symbolic(n);
        DiskFun f = oracle::random_diskfun(rng, ps, 3, 2, 1);
        TwoVar rem = TwoVar::tensor(f, DiskFun::constant(ps, 1)) - taylor(f, N);
        CHECK(rem.divisible_by_diagonal(N + 1));
    }
}

TEST_CASE("twovar: classical expansion at the origin") {
    auto ps = PointSet::rational({Q(0)});
    ExpansionSeries s(ps, Side::SECOND, -1, 2);
    DiskFun z = DiskFun::z(ps);
    TwoVar expect(ps);
    for (int j = 0; j <= 2; ++j) expect += TwoVar::tensor(z.pow(-j - 1), z.pow(j));
    CHECK(s.terms() == expect);
    CHECK(s.verify());
}

TEST_CASE("twovar: two-point SECOND expansion") {
    auto ps = PointSet::symbolic(2);
    ExpansionSeries s(ps, Side::SECOND, -1, 1);
    DiskFun one = DiskFun::constant(ps, 1);
    TwoVar h = TwoVar::h_poly(ps);
    TwoVar expect = h * (TwoVar::tensor(DiskFun::phi_power(ps, -1), one) +
                         TwoVar::tensor(DiskFun::phi_power(ps, -2), DiskFun::phi_power(ps, 1)));
    CHECK(s.terms() == expect);
    // telescoping: (z - w) * series = 1 - phi(w)^2 / phi(z)^2
    TwoVar prod = TwoVar::diagonal(ps) * s.terms();
    CHECK(prod == TwoVar::constant(ps, 1) - TwoVar::tensor(DiskFun::phi_power(ps, -2), DiskFun::phi_power(ps, 2)));
}

TEST_CASE("twovar: one-sided inverses") {
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int m = -1; m >= -3; --m)
            for (int M = 0; M <= 4; ++M)
                for (Side side : {Side::FIRST, Side::SECOND}) {
                    ExpansionSeries s(ps, side, m, M);
                    CHECK(s.verify());
                    TwoVar resid = TwoVar::diagonal(ps).pow(-m) * s.terms() - TwoVar::constant(ps, 1);
                    int level = side == Side::SECOND ? resid.phi_order_w() : resid.phi_order_z();
                    CHECK(level == M + 1);
                }
    }
}

TEST_CASE("twovar: FIRST and SECOND are exchanged by the swap up to sign") {
    auto ps = PointSet::symbolic(2);
    for (int m = -1; m >= -3; --m) {
        ExpansionSeries f(ps, Side::FIRST, m, 3), s(ps, Side::SECOND, m, 3);
        ACoeff sign((m % 2) ? -1 : 1);
        CHECK(f.terms() == s.terms().swap() * sign);
    }
}

TEST_CASE("twovar: residue in z against the SECOND kernel reproduces the function") {
    std::mt19937 rng(9);
    for (int n = 1; n <= 3; ++n) {
        auto ps = PointSet::symbolic(n);
        for (int trial = 0; trial < 4; ++trial) {
            DiskFun r = oracle::random_diskfun(rng, ps, 5, 0);
            DiskFun g = oracle::random_diskfun(rng, ps, 2, 2);
            int M = 5 / n + 1;
            ExpansionSeries s(ps, Side::SECOND, -1, M);
            DiskFun lhs = (TwoVar::tensor(r, g) * s.terms()).int_z();
            CHECK(lhs == r * g);
        }
    }
}
