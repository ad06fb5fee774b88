#include "fdisk/lie.hpp"

#include <doctest.h>

#include <map>

using namespace fdisk;

namespace {

// Kernel of ad(x) restricted to each principal degree, by rank counting.
std::map<int, int> kernel_dims_by_degree(const LieData& g, const GVec& x) {
    std::map<int, std::vector<int>> by_deg;
    for (int a = 0; a < g.dim(); ++a) by_deg[g.degree(a)].push_back(a);
    std::map<int, int> out;
    for (const auto& [d, idx] : by_deg) {
        QMatrix rows;
        for (int a : idx) rows.push_back(g.bracket(x, g.basis_vector(a)));
        int k = static_cast<int>(idx.size()) - mat_rank(rows);
        if (k) out[d] = k;
    }
    return out;
}

}  // namespace

TEST_CASE("lie: sl2 relations") {
    const auto& g = LieData::get("sl2");
    int e = g.index("e"), h = g.index("h"), f = g.index("f");
    CHECK(g.bracket(g.basis_vector(e), g.basis_vector(f)) == g.basis_vector(h));
    GVec two_e = g.basis_vector(e);
    two_e[e] = 2;
    CHECK(g.bracket(g.basis_vector(h), g.basis_vector(e)) == two_e);
    CHECK(g.dual_coxeter() == 2);
    CHECK(g.critical_level() == Q(-2));
}

TEST_CASE("lie: forms from traces") {
    for (const auto& name : LieData::shipped()) {
        const auto& g = LieData::get(name);
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) {
                QMatrix ab = mat_mul(g.matrix(a), g.matrix(b));
                Q tr;
                for (int i = 0; i < g.matrix_size(); ++i) tr += ab[i][i];
                CHECK(g.form(a, b) == tr);
                // ad trace computed from brackets of basis vectors
                Q adtr;
                for (int c = 0; c < g.dim(); ++c)
                    adtr += g.bracket(g.basis_vector(a), g.bracket(g.basis_vector(b), g.basis_vector(c)))[c];
                CHECK(g.killing(a, b) == adtr);
                CHECK(adtr == Q(2 * g.dual_coxeter()) * tr);
            }
    }
    const auto& sl2 = LieData::get("sl2");
    CHECK(sl2.form(sl2.index("e"), sl2.index("f")) == 1);
    CHECK(sl2.form(sl2.index("h"), sl2.index("h")) == 2);
    CHECK(sl2.killing(sl2.index("h"), sl2.index("h")) == 8);
}

TEST_CASE("lie: V^can from the kernel of ad(p_1)") {
    const auto& sl2 = LieData::get("sl2");
    CHECK(kernel_dims_by_degree(sl2, sl2.p_plus()) == std::map<int, int>{{1, 1}});
    CHECK(sl2.vcan_degrees() == std::vector<int>{1});
    CHECK(sl2.vcan()[0] == sl2.basis_vector(sl2.index("e")));
    const auto& sl3 = LieData::get("sl3");
    CHECK(kernel_dims_by_degree(sl3, sl3.p_plus()) == std::map<int, int>{{1, 1}, {2, 1}});
    CHECK(sl3.vcan_degrees() == std::vector<int>{1, 2});
}

TEST_CASE("lie: form inverse gives dual bases") {
    for (const auto& name : LieData::shipped()) {
        const auto& g = LieData::get(name);
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) {
                Q s;
                for (int c = 0; c < g.dim(); ++c) s += g.form_inverse(a, c) * g.form(c, b);
                CHECK(s == Q(a == b ? 1 : 0));
            }
    }
}

TEST_CASE("lie: matrix round trip and validation failures") {
    const auto& g = LieData::get("sl3");
    GVec x(g.dim());
    for (int a = 0; a < g.dim(); ++a) x[a] = Q(a + 1, 3);
    CHECK(g.from_matrix(g.to_matrix(x)) == x);

    auto j = g.to_json();
    j["killing"][0][2] = "7";
    CHECK_THROWS_AS(LieData::from_json(j), LieError);
    auto k = g.to_json();
    k["brackets"][0][2] = {{"e3", "2"}};
    CHECK_THROWS_AS(LieData::from_json(k), LieError);
    CHECK_THROWS_AS(LieData::get("g2"), LieError);
}
