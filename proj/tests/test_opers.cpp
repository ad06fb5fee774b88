#include "fdisk/opers.hpp"

#include <doctest.h>

using namespace fdisk;

namespace {

Connection<DiskFun> sl2_connection(const LieData& g, const DiskFun& psi, const DiskFun& alpha, const DiskFun& beta) {
    Connection<DiskFun> A{&g, std::vector<DiskFun>(3, DiskFun(psi.points()))};
    A.coeff[g.index("f")] = psi;
    A.coeff[g.index("h")] = alpha;
    A.coeff[g.index("e")] = beta;
    return A;
}

GaugeElem<DiskFun> exp_of(const LieData& g, const std::string& label, const DiskFun& u) {
    GaugeElem<DiskFun> b;
    GaugeFactor<DiskFun> f;
    f.a = g.index(label);
    f.u = u;
    b.factors.push_back(f);
    return b;
}

bool same(const Connection<DiskFun>& A, const Connection<DiskFun>& B) {
    for (std::size_t a = 0; a < A.coeff.size(); ++a)
        if (A.coeff[a] != B.coeff[a]) return false;
    return true;
}

// 2x2 oracle: M A M^-1 - M' M^-1 with the trace part removed.
Connection<DiskFun> gauge_by_matrix_sl2(const LieData& g, const GaugeElem<DiskFun>& b, const Connection<DiskFun>& A) {
    const auto& ps = A.coeff[0].points();
    auto M = gauge_matrix(g, b, A.coeff[0]);
    DiskFun det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    DiskFun id = det.inverse();
    RMatrix<DiskFun> Mi = {{M[1][1] * id, -M[0][1] * id}, {-M[1][0] * id, M[0][0] * id}};
    RMatrix<DiskFun> X(2, std::vector<DiskFun>(2, DiskFun(ps)));
    for (int a = 0; a < 3; ++a)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (g.matrix(a)[r][c] != 0) X[r][c] += A.coeff[a] * ACoeff(g.matrix(a)[r][c]);
    RMatrix<DiskFun> Y(2, std::vector<DiskFun>(2, DiskFun(ps)));
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t) Y[r][c] += M[r][s] * X[s][t] * Mi[t][c] - (s == t ? M[r][s].deriv() * Mi[s][c] : DiskFun(ps));
    DiskFun half_trace = (Y[0][0] + Y[1][1]) * ACoeff(Q(1, 2));
    Connection<DiskFun> out{&g, std::vector<DiskFun>(3, DiskFun(ps))};
    out.coeff[g.index("e")] = Y[0][1];
    out.coeff[g.index("f")] = Y[1][0];
    out.coeff[g.index("h")] = Y[0][0] - half_trace;
    return out;
}

}  // namespace

TEST_CASE("opers: nilpotent gauge on sl2 matches the closed form") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(11);
    for (int t = 0; t < 10; ++t) {
        auto c = random_canonical(g, ps, rng, 2);
        DiskFun alpha = random_canonical(g, ps, rng, 2).c[0], beta = c.c[0];
        DiskFun u = random_canonical(g, ps, rng, 1).c[0];
        auto A = sl2_connection(g, DiskFun::constant(ps, 1), alpha, beta);
        auto B = gauge(exp_of(g, "e", u), A);
        auto expect = sl2_connection(g, DiskFun::constant(ps, 1), alpha + u, beta - u * u - u * alpha * ACoeff(2) - u.deriv());
        CHECK(same(B, expect));
        CHECK(same(gauge(GaugeElem<DiskFun>{}, A), A));
    }
}

TEST_CASE("opers: gauge agrees with the matrix oracle and composes") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(12);
    for (int t = 0; t < 10; ++t) {
        auto b1 = random_gauge(g, ps, rng, 2), b2 = random_gauge(g, ps, rng, 1);
        auto c = random_canonical(g, ps, rng, 2);
        auto A = canonical_connection(c);
        A.coeff[g.index("h")] = random_canonical(g, ps, rng, 1).c[0];
        CHECK(same(gauge(b1, A), gauge_by_matrix_sl2(g, b1, A)));
        auto lhs = gauge(b1, gauge(b2, A));
        CHECK(same(lhs, gauge_by_matrix_sl2(g, compose(b1, b2), A)));
        CHECK(is_scalar_matrix(gauge_matrix(g, compose(inverse(b1), b1), A.coeff[0])));
    }
}

TEST_CASE("opers: sl2 canonical form") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(13);
    for (int t = 0; t < 10; ++t) {
        DiskFun alpha = random_canonical(g, ps, rng, 2).c[0], beta = random_canonical(g, ps, rng, 2).c[0];
        auto [c, b] = canonical_form(sl2_connection(g, DiskFun::constant(ps, 1), alpha, beta));
        CHECK(c.c[0] == beta + alpha * alpha + alpha.deriv());
        auto [c2, b2] = canonical_form(canonical_connection(c));
        CHECK(b2.factors.empty());
        CHECK(c2.c[0] == c.c[0]);
    }
    // psi f + alpha h + beta e with psi a unit: torus step first
    DiskFun psi = DiskFun::point_factor(ps, 0, 1) * DiskFun::point_factor(ps, 1, -2) * ACoeff(3);
    DiskFun alpha = DiskFun::point_factor(ps, 1, -1), beta = DiskFun::z(ps);
    auto A = sl2_connection(g, psi, alpha, beta);
    auto [c, b] = canonical_form(A);
    DiskFun a1 = alpha - psi.deriv() * psi.inverse() * ACoeff(Q(1, 2));
    CHECK(c.c[0] == psi * beta + a1 * a1 + a1.deriv());
    CHECK(same(gauge(b, A), canonical_connection(c)));
}

TEST_CASE("opers: gauge then reduce recovers the canonical data") {
    for (const char* name : {"sl2", "sl3"}) {
        const auto& g = LieData::get(name);
        auto ps = PointSet::symbolic(2);
        std::mt19937 rng(name[2] == '2' ? 21 : 31);
        int count = name[2] == '2' ? 20 : 10;
        for (int t = 0; t < count; ++t) {
            auto c = random_canonical(g, ps, rng, 2);
            auto b = random_gauge(g, ps, rng, 2);
            auto A = gauge(b, canonical_connection(c));
            auto [c2, b2] = canonical_form(A);
            for (std::size_t i = 0; i < c.c.size(); ++i) CHECK(c2.c[i] == c.c[i]);
            CHECK(same(gauge(b2, A), canonical_connection(c)));
            CHECK(is_scalar_matrix(gauge_matrix(g, compose(b2, b), A.coeff[0])));
        }
    }
}

TEST_CASE("opers: non-oper shapes are rejected") {
    const auto& g = LieData::get("sl3");
    auto ps = PointSet::symbolic(1);
    auto A = canonical_connection(CanonicalOper<DiskFun>{&g, {DiskFun(ps), DiskFun(ps)}});
    A.coeff[g.index("f3")] = DiskFun::constant(ps, 1);
    CHECK_THROWS_AS(canonical_form(A), OperError);
}

TEST_CASE("opers: truncated ring arithmetic") {
    auto ps = PointSet::symbolic(2);
    DiskFun u = DiskFun::constant(ps, 1) + DiskFun::phi_power(ps, 1) * DiskFun::z(ps);
    for (int p : {1, 2, 5}) {
        PhiTrunc w(inverse_mod_phi(u, p), p);
        CHECK(w * PhiTrunc::exact(u) == PhiTrunc::exact(DiskFun::constant(ps, 1)));
        CHECK((w * PhiTrunc::exact(u)).prec() == p);
    }
    PhiTrunc x(DiskFun::point_factor(ps, 0, -2), 3);
    CHECK(x.val_low() == -2);
    CHECK(x.deriv().prec() == 2);
    CHECK((x * x).prec() == 1);
    CHECK_THROWS_AS(PhiTrunc(DiskFun::z(ps), 3).inverse(), OperError);
}

TEST_CASE("opers: coordinate change") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = n == 1 ? PointSet::symbolic(1) : PointSet::rational({Q(0), Q(1)});
        std::mt19937 rng(40 + n);
        DiskFun z = DiskFun::z(ps);
        auto c = random_canonical(g, ps, rng, 2);
        auto same_c = coord_change(z, c, 4);
        CHECK(same_c[0] == PhiTrunc::exact(c.c[0]));

        CanonicalOper<DiskFun> zero{&g, {DiskFun(ps)}};
        for (int t = 0; t < 5; ++t) {
            DiskFun psi = random_coordinate_change(ps, rng);
            CHECK(coord_change(psi, zero, 4)[0] == schwarzian(psi, 4) * ACoeff(Q(-1, 2)));
        }
        for (int t = 0; t < 10; ++t) {
            DiskFun p1 = random_coordinate_change(ps, rng), p2 = random_coordinate_change(ps, rng);
            DiskFun p12 = p1.compose(p2);
            int prec = 3;
            CHECK(schwarzian(p12, prec) ==
                  schwarzian(p1, prec + 2).compose(p2) * PhiTrunc::exact(p2.deriv().pow(2)) + schwarzian(p2, prec));
            auto cc = random_canonical(g, ps, rng, 2);
            auto lhs = coord_change(p12, cc, prec);
            auto rhs = coord_change(g, p2, coord_change(p1, cc, prec + 2), prec);
            CHECK(lhs[0] == rhs[0]);
            CHECK(lhs[0].prec() == prec);
        }
    }
}

TEST_CASE("opers: coordinate change agrees with pullback and reduction") {
    for (const char* name : {"sl2", "sl3"}) {
        const auto& g = LieData::get(name);
        for (int n : {1, 2}) {
            auto ps = n == 1 ? PointSet::symbolic(1) : PointSet::rational({Q(-1), Q(2)});
            std::mt19937 rng(50 + n);
            int count = name[2] == '2' ? 10 : 3;
            for (int t = 0; t < count; ++t) {
                DiskFun psi = random_coordinate_change(ps, rng);
                auto c = random_canonical(g, ps, rng, 2);
                auto a = coord_change(psi, c, 3), b = pullback_reduce(psi, c, 3);
                for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
            }
        }
    }
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(59);
    const auto& g = LieData::get("sl2");
    auto c1 = random_canonical(g, ps, rng, 1);
    DiskFun psi = DiskFun::z(ps) + DiskFun::phi_power(ps, 2) * ACoeff(-1);
    CHECK(coord_change(psi, c1, 2)[0] == pullback_reduce(psi, c1, 2)[0]);

    CanonicalOper<DiskFun> c{&g, {DiskFun(ps)}};
    CHECK_THROWS_AS(coord_change(DiskFun::z(ps) + DiskFun::constant(ps, 1), c, 2), OperError);
    CHECK_THROWS_AS(coord_change(DiskFun::z(ps) + DiskFun::phi_power(ps, 1), c, 2), OperError);
}

TEST_CASE("opers: Der action on oper functions") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    DiskFun one = DiskFun::constant(ps, 1);
    DiskFun f = DiskFun::point_factor(ps, 0, -1) * DiskFun::point_factor(ps, 1, -2);
    auto L = der_action_oper(g, one, 0, f);
    CHECK(L.G[0] == f.deriv());
    CHECK(L.scalar.is_zero());

    DiskFun z3 = DiskFun::z(ps).pow(3), g1 = DiskFun::point_factor(ps, 0, -1);
    auto M = der_action_oper(g, z3, 0, g1);
    CHECK(M.G[0] == z3 * g1.deriv() - g1 * z3.deriv());
    CHECK(M.scalar == ACoeff(-3));

    const auto& g3 = LieData::get("sl3");
    auto P = der_action_oper(g3, z3, 1, g1);
    CHECK(P.G[1] == z3 * g1.deriv() - g1 * z3.deriv() * ACoeff(2));
    CHECK(P.G[0].is_zero());
    CHECK(P.scalar.is_zero());
}

TEST_CASE("opers: the dictionary is Der-equivariant on generators") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = PointSet::symbolic(n);
        auto S = sugawara(PlainRealization::make(g, g.critical_level(), ps));
        std::vector<DiskFun> hs;
        for (int d = 0; d <= 3; ++d) hs.push_back(DiskFun::z(ps).pow(d));
        std::vector<BasisIndex> window;
        for (int k = -2; k <= 0; ++k)
            for (int j = 1; j <= n; ++j) window.push_back({j, k});
        auto rep = der_equivariance_check(S, hs, window, 2);
        CHECK(rep.pass);
        CHECK(rep.checked == 4 * 3 * n);
        auto single = center_oper_dictionary(S, {{1, -1}}, 2);
        CHECK(single.size() == 1);
        CHECK(oper_to_center(single[0].oper, S, 2) == -single[0].center);
    }
}
