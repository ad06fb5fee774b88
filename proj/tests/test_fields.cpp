#include "fdisk/fields.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fdisk;

namespace {

UElem gen_value(const RealizationPtr& r, const GVec& x, const DiskFun& f, int N) {
    UElem out(r->target(), N);
    for (std::size_t a = 0; a < x.size(); ++a)
        if (x[a] != 0) out += r->generator(static_cast<int>(a), f, N) * ACoeff(x[a]);
    return out;
}

// Mode sums of the normally ordered product at one point a = 0, built from raw words.
UElem classical_nop(const UAlgebraPtr& alg, int x, int y, int n, int N) {
    UElem r(alg, N);
    for (int j = n - N; j <= -1; ++j) r += normal_order(alg, {Factor{x, 1, j, 0}, Factor{y, 1, n - 1 - j, 0}}, N);
    for (int j = 0; j < N; ++j) r += normal_order(alg, {Factor{y, 1, n - 1 - j, 0}, Factor{x, 1, j, 0}}, N);
    return r;
}

}  // namespace

TEST_CASE("fields: unity and low products of generators") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = PointSet::symbolic(n);
        Q level(3, 2);
        auto r = PlainRealization::make(g, level, ps);
        auto one = Field::unity(r);
        const int N = 2;
        for (int a = 0; a < g.dim(); ++a) {
            auto X = Field::generator(r, a);
            for (int b = 0; b < g.dim(); ++b) {
                auto Y = Field::generator(r, b);
                GVec br = g.bracket(g.basis_vector(a), g.basis_vector(b));
                for (const auto& f : basis_window(ps, -2, 1)) {
                    CHECK(Field::nprod(X, Y, 0)->evaluate(f, N) == gen_value(r, br, f, N));
                    CHECK(Field::nprod(X, Y, 1)->evaluate(f, N) ==
                          UElem::scalar(r->target(), N, f.residue() * ACoeff(level * g.form(a, b))));
                    CHECK(Field::nprod(X, Y, 2)->evaluate(f, N).is_zero());
                }
            }
            for (const auto& f : basis_window(ps, -2, 1)) {
                UElem xf = X->evaluate(f, N);
                CHECK(Field::nprod(one, X, -1)->evaluate(f, N) == xf);
                CHECK(Field::nprod(X, one, -1)->evaluate(f, N) == xf);
                CHECK(Field::nprod(X, one, -2)->evaluate(f, N) == Field::deriv(X)->evaluate(f, N));
            }
        }
    }
}

TEST_CASE("fields: classical normally ordered product at one point") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::rational({Q(0)});
    auto r = PlainRealization::make(g, Q(-2), ps);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            auto p = Field::nprod(Field::generator(r, a), Field::generator(r, b), -1);
            for (int N : {1, 3})
                for (int n = -3; n <= 2; ++n)
                    CHECK(p->evaluate(DiskFun::point_factor(ps, 0, n), N) == classical_nop(r->target(), a, b, n, N));
        }
}

TEST_CASE("fields: certificates bound vanishing and factor degrees") {
    const auto& g = LieData::get("sl2");
    int e = g.index("e"), h = g.index("h"), f = g.index("f");
    for (int n : {1, 2}) {
        auto ps = PointSet::symbolic(n);
        auto r = PlainRealization::make(g, Q(1), ps);
        auto E = Field::generator(r, e), H = Field::generator(r, h), F = Field::generator(r, f);
        std::vector<FieldPtr> fields = {
            Field::nprod(E, F, -1), Field::nprod(H, H, -2), Field::nprod(E, F, 0), Field::deriv(F),
            Field::kmul(DiskFun::phi_power(ps, -1), H), Field::nprod(Field::nprod(E, F, -1), H, -1),
            Field::nprod(E, Field::nprod(H, F, -1), 0)};
        for (const auto& X : fields)
            for (int N : {1, 2}) {
                int c = X->cert(N);
                for (int k = c; k <= c + 1; ++k)
                    for (int i = 1; i <= n; ++i) CHECK(X->evaluate(DiskFun::basis(ps, {i, k}), N).is_zero());
                for (int k = c - 3; k < c; ++k)
                    for (int i = 1; i <= n; ++i) {
                        UElem v = X->evaluate(DiskFun::basis(ps, {i, k}), N);
                        if (v.max_length() > 0) CHECK(v.min_degree() >= X->low(k, N));
                        CHECK(v.max_length() <= X->length());
                    }
            }
    }
}

TEST_CASE("fields: locality orders of generators") {
    const auto& g = LieData::get("sl2");
    int e = g.index("e"), h = g.index("h"), f = g.index("f");
    auto ps = PointSet::symbolic(2);
    auto r1 = PlainRealization::make(g, Q(1), ps);
    auto r0 = PlainRealization::make(g, Q(0), ps);
    auto loc = [&](const RealizationPtr& r, int a, int b) {
        return locality_order(*Field::generator(r, a), *Field::generator(r, b), 4, -1, 1, 2).order;
    };
    CHECK(loc(r1, e, f) == 2);
    CHECK(loc(r1, h, h) == 2);
    CHECK(loc(r1, e, e) == 0);
    CHECK(loc(r0, e, f) == 1);
    CHECK(loc(r0, h, h) == 0);
}

TEST_CASE("fields: Sugawara L data") {
    for (const char* name : {"sl2", "sl3"}) {
        const auto& g = LieData::get(name);
        for (Q k : {Q(1), Q(g.critical_level()), Q(5, 2)}) {
            auto d = sugawara_l_data(g, k);
            CHECK(d.l_minus1_is_translation);
            CHECK(d.l0_is_weight2);
            CHECK(d.l1_vanishes);
            CHECK(d.l2_is_scalar);
            CHECK(d.l2_scalar == k * g.dim() / 2);
        }
    }
}

TEST_CASE("fields: Sugawara is central exactly at the critical level") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = n == 1 ? PointSet::rational({Q(0)}) : PointSet::symbolic(2);
        auto crit = sugawara(PlainRealization::make(g, Q(-2), ps));
        auto rep = centrality_check(crit, 2, -2, 0);
        CHECK(rep.pass);
        CHECK(rep.checked == 3 * 3 * n * 3 * n);
        auto off = sugawara(PlainRealization::make(g, Q(1), ps));
        CHECK_FALSE(centrality_check(off, 2, -2, 0).pass);
    }
}

TEST_CASE("fields: Der action matches the derivation on values") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = PointSet::symbolic(n);
        for (Q k : {Q(-2), Q(1)}) {
            auto r = PlainRealization::make(g, k, ps);
            auto S = sugawara(r);
            auto X = Field::generator(r, g.index("e"));
            const int N = 2;
            for (int d = 0; d <= 2; ++d) {
                DiskFun hz = DiskFun::z_power(ps, d);
                auto dS = der_action(hz, S);
                auto dX = der_action(hz, X);
                for (const auto& f : basis_window(ps, -1, 0)) {
                    CHECK(dX->evaluate(f, N) == X->evaluate(hz * f.deriv(), N));
                    CHECK(dS->evaluate(f, N) == der_on_u(hz, S->evaluate(f, N + 1), N));
                }
            }
        }
    }
}

TEST_CASE("fields: commutator identity and Dong bound on generators") {
    const auto& g = LieData::get("sl2");
    int e = g.index("e"), h = g.index("h"), f = g.index("f");
    auto ps = PointSet::symbolic(2);
    auto r = PlainRealization::make(g, Q(-2), ps);
    auto E = Field::generator(r, e), H = Field::generator(r, h), F = Field::generator(r, f);
    for (int p = 0; p <= 2; ++p)
        for (int q = -1; q <= 1; ++q) {
            CHECK(borcherds_check(E, F, H, p, q, 2, -1, 0).pass);
            CHECK(borcherds_check(H, E, F, p, q, 2, -1, 0).pass);
        }
    for (int n : {-1, 0}) {
        auto rep = dong_check(E, F, H, n, 2, -1, 0);
        CHECK(rep.pass);
        CHECK(rep.checked == 1);
    }
}

TEST_CASE("fields: vertex axioms on sl2 generators at depth 2") {
    const auto& g = LieData::get("sl2");
    for (int n : {1, 2}) {
        auto ps = n == 1 ? PointSet::rational({Q(0)}) : PointSet::symbolic(2);
        auto r = PlainRealization::make(g, Q(1), ps);
        std::vector<FieldPtr> gens;
        for (int a = 0; a < g.dim(); ++a) gens.push_back(Field::generator(r, a));
        auto rep = vertex_axiom_check(gens, 2, 1, -1, 0);
        INFO(rep.to_json().dump());
        CHECK(rep.pass);
        for (const auto& [name, sec] : rep.sections) CHECK(sec.checked > 0);
    }
}

TEST_CASE("fields: unity and derivatives against locality") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    auto r = PlainRealization::make(g, Q(1), ps);
    auto E = Field::generator(r, g.index("e")), F = Field::generator(r, g.index("f"));
    CHECK(locality_order(*Field::unity(r), *E, 3, -1, 1, 2).order == 0);
    auto d = locality_order(*Field::deriv(E), *F, 4, -1, 1, 2);
    CHECK(d.found);
    CHECK(d.order <= 3);
}

TEST_CASE("fields: evaluation is consistent across truncations and linear") {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(2);
    auto r = PlainRealization::make(g, Q(-2), ps);
    auto S = sugawara(r);
    std::mt19937 rng(11);
    for (int t = 0; t < 4; ++t) {
        DiskFun f = oracle::random_diskfun(rng, ps, 2, 1, 1), h = oracle::random_diskfun(rng, ps, 2, 1, 1);
        CHECK(S->evaluate(f, 3).reduce(2) == S->evaluate(f, 2));
        CHECK(S->evaluate(f + h * ACoeff(3), 2) == S->evaluate(f, 2) + S->evaluate(h, 2) * ACoeff(3));
    }
    // the central family commutes pairwise
    for (const auto& f : basis_window(ps, -2, -1, true))
        for (const auto& h : basis_window(ps, -2, -1, true)) {
            UElem a = S->evaluate(f, 2), b = S->evaluate(h, 2);
            CHECK(left_multiply(*S, f, b) == left_multiply(*S, h, a));
        }
}
