#include "fdisk/opers.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <mutex>

namespace fdisk {

namespace {

ZPoly phi_pow(const PointSetPtr& ps, int k) { return zpoly::pow(ps->phi(), k); }

ZPoly mod_poly(const ZPoly& a, const ZPoly& m) {
    ZPoly q, r;
    zpoly::divmod_monic(a, m, q, r);
    return r;
}

// Write f = P / phi^K with P a polynomial; returns K.
int over_phi_power(const DiskFun& f, ZPoly& P) {
    const auto& ps = f.points();
    int K = f.pole_order();
    P = f.num();
    for (int i = 0; i < ps->size(); ++i)
        if (K > f.den()[i]) P = zpoly::mul(P, zpoly::pow(zpoly::linear(ps->value(i)), K - f.den()[i]));
    return K;
}

int sat_add(int a, int b) {
    if (a >= kExactPrec || b >= kExactPrec) return kExactPrec;
    return a + b;
}

}  // namespace

DiskFun reduce_phi(const DiskFun& f, int prec) {
    if (prec >= kExactPrec || f.is_zero()) return f;
    const auto& ps = f.points();
    ZPoly P;
    int K = over_phi_power(f, P);
    if (prec + K <= 0) return DiskFun(ps);
    ZPoly r = mod_poly(P, phi_pow(ps, prec + K));
    return DiskFun(ps, r, std::vector<int>(ps->size(), K));
}

DiskFun inverse_mod_phi(const DiskFun& u, int prec) {
    if (!u.is_regular()) throw OperError("inverse modulo phi needs a regular element");
    const auto& ps = u.points();
    int n = ps->size();
    std::vector<ACoeff> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = zpoly::eval(u.num(), ps->value(i));
    bool constant = true;
    for (int i = 1; i < n; ++i) constant = constant && vals[i] == vals[0];
    DiskFun w(ps);
    try {
        if (constant) {
            w = DiskFun::constant(ps, vals[0].invert());
        } else {
            // Lagrange interpolation of 1/u at the points.
            ZPoly acc;
            for (int i = 0; i < n; ++i) {
                ZPoly L{vals[i].invert()};
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    L = zpoly::mul(L, zpoly::scale(zpoly::linear(ps->value(j)), (ps->value(i) - ps->value(j)).invert()));
                }
                acc = zpoly::add(acc, L);
            }
            w = DiskFun(ps, acc);
        }
    } catch (const std::exception&) {
        throw OperError("element is not a unit modulo phi: " + u.to_string());
    }
    DiskFun two = DiskFun::constant(ps, 2);
    int have = 1;
    while (have < prec) {
        have = std::min(2 * have, prec);
        ZPoly m = phi_pow(ps, have);
        ZPoly uw = mod_poly(zpoly::mul(u.num(), w.num()), m);
        w = DiskFun(ps, mod_poly(zpoly::mul(w.num(), (two - DiskFun(ps, uw)).num()), m));
    }
    if (prec <= 0) return DiskFun(ps);
    return DiskFun(ps, mod_poly(w.num(), phi_pow(ps, prec)));
}

PhiTrunc::PhiTrunc(const DiskFun& f, int prec) : f_(reduce_phi(f, prec)), prec_(std::min(prec, kExactPrec)) {}

int PhiTrunc::val_low() const {
    if (f_.is_zero()) return prec_;
    const auto& ps = f_.points();
    ZPoly P;
    int K = over_phi_power(f_, P);
    int t = 0;
    const ZPoly& phi = ps->phi();
    while (true) {
        ZPoly q, r;
        zpoly::divmod_monic(P, phi, q, r);
        if (!r.empty()) break;
        P = std::move(q);
        ++t;
    }
    return std::min(t - K, prec_);
}

PhiTrunc PhiTrunc::operator+(const PhiTrunc& o) const { return PhiTrunc(f_ + o.f_, std::min(prec_, o.prec_)); }
PhiTrunc PhiTrunc::operator-(const PhiTrunc& o) const { return PhiTrunc(f_ - o.f_, std::min(prec_, o.prec_)); }

PhiTrunc PhiTrunc::operator*(const PhiTrunc& o) const {
    int p;
    if (exact() && o.exact())
        p = kExactPrec;
    else if (exact())
        p = o.prec_ + val_low();
    else if (o.exact())
        p = prec_ + o.val_low();
    else
        p = std::min(prec_ + o.val_low(), o.prec_ + val_low());
    return PhiTrunc(f_ * o.f_, p);
}

bool PhiTrunc::operator==(const PhiTrunc& o) const {
    return reduce_phi(f_ - o.f_, std::min(prec_, o.prec_)).is_zero();
}

PhiTrunc PhiTrunc::deriv() const { return PhiTrunc(f_.deriv(), exact() ? kExactPrec : prec_ - 1); }

PhiTrunc PhiTrunc::inverse() const {
    if (exact()) {
        if (f_.is_unit()) return PhiTrunc::exact(f_.inverse());
        throw OperError("exact inverse needs a unit of K: " + f_.to_string());
    }
    if (val_low() != 0 || f_.is_zero()) throw OperError("not a unit modulo phi: " + f_.to_string());
    return PhiTrunc(inverse_mod_phi(f_, prec_), prec_);
}

PhiTrunc PhiTrunc::compose(const DiskFun& psi) const { return compose_trunc(f_, psi, prec_); }

namespace {

void check_fixes_points(const DiskFun& psi) {
    if (!psi.is_regular()) throw OperError("coordinate change must be a polynomial in z");
    const auto& ps = psi.points();
    for (int i = 0; i < ps->size(); ++i)
        if (zpoly::eval(psi.num(), ps->value(i)) != ps->value(i))
            throw OperError("coordinate change must fix the point " + ps->label(i));
}

}  // namespace

PhiTrunc compose_trunc(const DiskFun& v, const DiskFun& psi, int prec) {
    check_fixes_points(psi);
    const auto& ps = v.points();
    DiskFun jac(ps, zpoly::deriv(psi.num()));
    (void)inverse_mod_phi(jac, 1);  // throws on a non-unit Jacobian
    DiskFun top(ps, zpoly::compose(v.num(), psi.num()));
    if (v.is_regular()) return PhiTrunc(top, prec);
    int P = v.pole_order();
    int q = sat_add(prec, P);
    DiskFun r = top;
    for (int i = 0; i < ps->size(); ++i) {
        int m = v.den()[i];
        if (!m) continue;
        ZPoly u;
        if (!zpoly::divide_linear(zpoly::sub(psi.num(), ZPoly{ps->value(i)}), ps->value(i), u))
            throw OperError("coordinate change must fix the point " + ps->label(i));
        DiskFun w = inverse_mod_phi(DiskFun(ps, u), q >= kExactPrec ? kExactPrec : q);
        r = reduce_phi(r * w.pow(m), q) * DiskFun::point_factor(ps, i, -m);
    }
    return PhiTrunc(r, prec);
}

PhiTrunc schwarzian(const DiskFun& psi, int prec) {
    check_fixes_points(psi);
    PhiTrunc d2 = PhiTrunc::exact(psi.deriv(2));
    PhiTrunc d3 = PhiTrunc::exact(psi.deriv(3));
    PhiTrunc inv(inverse_mod_phi(psi.deriv(), prec), prec);
    PhiTrunc r2 = d2 * inv;
    return d3 * inv - r2 * r2 * ACoeff(Q(3, 2));
}

// ---------------------------------------------------------------------------
// Generic gauge arithmetic.

namespace {

struct MatrixAux {
    QMatrix gram_inv;
};

const MatrixAux& aux(const LieData& g) {
    static std::mutex mu;
    static std::map<std::string, MatrixAux> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(g.name());
    if (it != cache.end()) return it->second;
    int d = g.dim();
    QMatrix G(d, std::vector<Q>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            QMatrix p = mat_mul(g.matrix(a), g.matrix(b));
            Q t = 0;
            for (int r = 0; r < g.matrix_size(); ++r) t += p[r][r];
            G[a][b] = t;
        }
    return cache.emplace(g.name(), MatrixAux{mat_inverse(G)}).first->second;
}

template <class R>
std::vector<R> coords_from_matrix(const LieData& g, const RMatrix<R>& X, const R& like) {
    const auto& gi = aux(g).gram_inv;
    int d = g.dim(), s = g.matrix_size();
    std::vector<R> tr(d, ring_const(like, 0));
    for (int b = 0; b < d; ++b)
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c) {
                const Q& m = g.matrix(b)[c][r];
                if (m != 0) tr[b] = tr[b] + X[r][c] * ACoeff(m);
            }
    std::vector<R> out(d, ring_const(like, 0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (gi[a][b] != 0) out[a] = out[a] + tr[b] * ACoeff(gi[a][b]);
    return out;
}

template <class R>
Connection<R> apply_factor(const LieData& g, const GaugeFactor<R>& f, const Connection<R>& A) {
    int d = g.dim(), s = g.matrix_size();
    const R& like = A.coeff.at(0);
    Connection<R> out{A.g, {}};
    if (f.torus) {
        std::vector<R> inv(s, ring_const(like, 0));
        for (int r = 0; r < s; ++r) inv[r] = ring_inverse(f.diag[r]);
        RMatrix<R> X(s, std::vector<R>(s, ring_const(like, 0)));
        for (int a = 0; a < d; ++a) {
            if (A.coeff[a].is_zero()) continue;
            for (int r = 0; r < s; ++r)
                for (int c = 0; c < s; ++c) {
                    const Q& m = g.matrix(a)[r][c];
                    if (m != 0) X[r][c] = X[r][c] + f.diag[r] * A.coeff[a] * inv[c] * ACoeff(m);
                }
        }
        // minus the trace-free part of (db) b^-1
        std::vector<R> log(s, ring_const(like, 0));
        R trace = ring_const(like, 0);
        for (int r = 0; r < s; ++r) {
            log[r] = f.diag[r].deriv() * inv[r];
            trace = trace + log[r];
        }
        for (int r = 0; r < s; ++r) X[r][r] = X[r][r] - log[r] + trace * ACoeff(Q(1, s));
        out.coeff = coords_from_matrix(g, X, like);
        return out;
    }
    // exp(u x_a): Ad = sum u^k ad^k / k!, and (db) b^-1 = u' x_a.
    out.coeff = A.coeff;
    std::vector<R> term = A.coeff;
    R upow = ring_const(like, 1);
    for (int k = 1;; ++k) {
        std::vector<R> next(d, ring_const(like, 0));
        bool any = false;
        for (int b = 0; b < d; ++b) {
            if (term[b].is_zero()) continue;
            for (const auto& [c, q] : g.bracket(f.a, b)) {
                next[c] = next[c] + term[b] * ACoeff(q / Q(k));
                any = true;
            }
        }
        if (!any) break;
        upow = upow * f.u;
        for (int c = 0; c < d; ++c)
            if (!next[c].is_zero()) out.coeff[c] = out.coeff[c] + upow * next[c];
        term = std::move(next);
    }
    out.coeff[f.a] = out.coeff[f.a] - f.u.deriv();
    return out;
}

template <class R>
GaugeFactor<R> invert_factor(const GaugeFactor<R>& f) {
    GaugeFactor<R> r = f;
    if (f.torus)
        for (auto& x : r.diag) x = ring_inverse(x);
    else
        r.u = -f.u;
    return r;
}

}  // namespace

template <class R>
Connection<R> gauge(const GaugeElem<R>& b, const Connection<R>& A) {
    Connection<R> cur = A;
    for (const auto& f : b.factors) cur = apply_factor(*A.g, f, cur);
    return cur;
}

template <class R>
GaugeElem<R> compose(const GaugeElem<R>& outer, const GaugeElem<R>& inner) {
    GaugeElem<R> r = inner;
    r.factors.insert(r.factors.end(), outer.factors.begin(), outer.factors.end());
    return r;
}

template <class R>
GaugeElem<R> inverse(const GaugeElem<R>& b) {
    GaugeElem<R> r;
    for (auto it = b.factors.rbegin(); it != b.factors.rend(); ++it) r.factors.push_back(invert_factor(*it));
    return r;
}

template <class R>
RMatrix<R> gauge_matrix(const LieData& g, const GaugeElem<R>& b, const R& like) {
    int s = g.matrix_size();
    auto identity = [&] {
        RMatrix<R> m(s, std::vector<R>(s, ring_const(like, 0)));
        for (int r = 0; r < s; ++r) m[r][r] = ring_const(like, 1);
        return m;
    };
    RMatrix<R> M = identity();
    for (const auto& f : b.factors) {
        RMatrix<R> F = identity();
        if (f.torus) {
            for (int r = 0; r < s; ++r) F[r][r] = f.diag[r];
        } else {
            QMatrix X = g.matrix(f.a), P = X;
            R upow = f.u;
            Q fact = 1;
            for (int k = 1; k <= s; ++k) {
                fact *= k;
                for (int r = 0; r < s; ++r)
                    for (int c = 0; c < s; ++c)
                        if (P[r][c] != 0) F[r][c] = F[r][c] + upow * ACoeff(P[r][c] / fact);
                P = mat_mul(P, X);
                upow = upow * f.u;
            }
        }
        RMatrix<R> N(s, std::vector<R>(s, ring_const(like, 0)));
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                for (int t = 0; t < s; ++t) N[r][c] = N[r][c] + F[r][t] * M[t][c];
        M = std::move(N);
    }
    return M;
}

template <class R>
bool is_scalar_matrix(const RMatrix<R>& m) {
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m.size(); ++c) {
            if (r != c && !m[r][c].is_zero()) return false;
            if (r == c && !(m[r][c] == m[0][0])) return false;
        }
    return true;
}

template <class R>
Connection<R> canonical_connection(const CanonicalOper<R>& c, const R& like) {
    const LieData& g = *c.g;
    Connection<R> A{c.g, std::vector<R>(g.dim(), ring_const(like, 0))};
    for (int a = 0; a < g.dim(); ++a)
        if (g.p_minus()[a] != 0) A.coeff[a] = ring_const(like, ACoeff(g.p_minus()[a]));
    for (std::size_t i = 0; i < c.c.size(); ++i)
        for (int a = 0; a < g.dim(); ++a)
            if (g.vcan()[i][a] != 0) A.coeff[a] = A.coeff[a] + c.c[i] * ACoeff(g.vcan()[i][a]);
    return A;
}

template <class R>
Connection<R> canonical_connection(const CanonicalOper<R>& c) {
    if (c.c.empty()) throw OperError("empty canonical oper");
    return canonical_connection(c, c.c[0]);
}

template <class R>
std::pair<CanonicalOper<R>, GaugeElem<R>> canonical_form(const Connection<R>& A0) {
    const LieData& g = *A0.g;
    int d = g.dim(), s = g.matrix_size();
    const R like = A0.coeff.at(0);
    for (int a = 0; a < d; ++a) {
        bool simple_f = std::find(g.simple_f().begin(), g.simple_f().end(), a) != g.simple_f().end();
        if (g.degree(a) < 0 && !simple_f && !A0.coeff[a].is_zero())
            throw OperError("connection has a component along " + g.label(a) + " outside the oper shape");
    }
    GaugeElem<R> b;
    Connection<R> A = A0;

    // Torus step: diag entries with d_s = d_r psi for f = E_{r,s}.
    std::vector<R> diag(s, ring_const(like, 0));
    std::vector<bool> set(s, false);
    diag[s - 1] = ring_const(like, 1);
    set[s - 1] = true;
    bool trivial = true;
    for (int pass = 0; pass < s; ++pass)
        for (int fi : g.simple_f()) {
            int rr = -1, cc = -1;
            for (int r = 0; r < s; ++r)
                for (int c = 0; c < s; ++c)
                    if (g.matrix(fi)[r][c] != 0) {
                        if (rr >= 0 || g.matrix(fi)[r][c] != 1) throw OperError("simple root vectors must be matrix units");
                        rr = r;
                        cc = c;
                    }
            if (set[rr] && !set[cc]) {
                const R& psi = A.coeff[fi];
                if (psi.is_zero()) throw OperError("coefficient of " + g.label(fi) + " is not a unit");
                if (!(psi == ring_const(like, 1))) trivial = false;
                diag[cc] = diag[rr] * psi;
                set[cc] = true;
            }
        }
    for (int r = 0; r < s; ++r)
        if (!set[r]) throw OperError("simple root vectors do not chain through the matrix realization");
    if (!trivial) {
        GaugeFactor<R> t;
        t.torus = true;
        t.diag = diag;
        t.u = ring_const(like, 0);
        b.factors.push_back(t);
        A = apply_factor(g, t, A);
    }

    // Nilpotent steps by degree.
    int maxdeg = 0;
    for (int a = 0; a < d; ++a) maxdeg = std::max(maxdeg, g.degree(a));
    CanonicalOper<R> out{&g, std::vector<R>(g.vcan().size(), ring_const(like, 0))};
    for (int j = 0; j <= maxdeg; ++j) {
        std::vector<int> rows, ucols, vcols;
        for (int a = 0; a < d; ++a) {
            if (g.degree(a) == j) rows.push_back(a);
            if (g.degree(a) == j + 1) ucols.push_back(a);
        }
        for (std::size_t i = 0; i < g.vcan().size(); ++i)
            if (g.vcan_degrees()[i] == j) vcols.push_back(static_cast<int>(i));
        std::size_t ncols = ucols.size() + vcols.size();
        if (ncols != rows.size()) throw OperError("degree " + std::to_string(j) + " system is not square");
        if (rows.empty()) continue;
        QMatrix M(rows.size(), std::vector<Q>(ncols));
        for (std::size_t c = 0; c < ucols.size(); ++c) {
            GVec br = g.bracket(g.basis_vector(ucols[c]), g.p_minus());
            for (std::size_t r = 0; r < rows.size(); ++r) M[r][c] = br[rows[r]];
        }
        for (std::size_t c = 0; c < vcols.size(); ++c)
            for (std::size_t r = 0; r < rows.size(); ++r) M[r][ucols.size() + c] = -g.vcan()[vcols[c]][rows[r]];
        QMatrix Mi = mat_inverse(M);
        std::vector<R> sol(ncols, ring_const(like, 0));
        for (std::size_t c = 0; c < ncols; ++c)
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (Mi[c][r] != 0) sol[c] = sol[c] - A.coeff[rows[r]] * ACoeff(Mi[c][r]);
        for (std::size_t c = 0; c < ucols.size(); ++c) {
            if (sol[c].is_zero()) continue;
            GaugeFactor<R> f;
            f.a = ucols[c];
            f.u = sol[c];
            b.factors.push_back(f);
            A = apply_factor(g, f, A);
        }
        for (std::size_t c = 0; c < vcols.size(); ++c) out.c[vcols[c]] = sol[ucols.size() + c];
    }
    return {out, b};
}

namespace {

int vcan_index_of_degree_one(const LieData& g) {
    for (std::size_t i = 0; i < g.vcan().size(); ++i)
        if (g.vcan_degrees()[i] == 1) {
            if (g.vcan()[i] != g.p_plus()) throw OperError("degree one canonical vector must be p_plus");
            return static_cast<int>(i);
        }
    throw OperError("no degree one canonical vector");
}

}  // namespace

std::vector<PhiTrunc> coord_change(const LieData& g, const DiskFun& psi, const std::vector<PhiTrunc>& c, int prec) {
    if (c.size() != g.vcan().size()) throw OperError("wrong number of canonical coefficients");
    check_fixes_points(psi);
    DiskFun jac = psi.deriv();
    (void)inverse_mod_phi(jac, 1);
    int one = vcan_index_of_degree_one(g);
    std::vector<PhiTrunc> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        int p = std::min(prec, c[i].prec());
        PhiTrunc v = compose_trunc(c[i].value(), psi, p);
        PhiTrunc r = v * PhiTrunc::exact(jac.pow(g.vcan_degrees()[i] + 1));
        if (static_cast<int>(i) == one) r = r - schwarzian(psi, p) * ACoeff(Q(1, 2));
        out.push_back(PhiTrunc(r.value(), std::min(r.prec(), prec)));
    }
    return out;
}

std::vector<PhiTrunc> coord_change(const DiskFun& psi, const CanonicalOper<DiskFun>& c, int prec) {
    std::vector<PhiTrunc> cc;
    for (const auto& x : c.c) cc.push_back(PhiTrunc::exact(x));
    return coord_change(*c.g, psi, cc, prec);
}

std::vector<PhiTrunc> pullback_reduce(const DiskFun& psi, const CanonicalOper<DiskFun>& c, int prec) {
    const LieData& g = *c.g;
    check_fixes_points(psi);
    // The torus step and each nilpotent degree differentiate once.
    int maxdeg = 0;
    for (int a = 0; a < g.dim(); ++a) maxdeg = std::max(maxdeg, g.degree(a));
    int work = prec + maxdeg + 2;
    PhiTrunc jac(psi.deriv(), work);
    CanonicalOper<PhiTrunc> pulled{&g, {}};
    for (const auto& x : c.c) pulled.c.push_back(compose_trunc(x, psi, work));
    Connection<PhiTrunc> A = canonical_connection(pulled, jac);
    for (auto& x : A.coeff) x = x * jac;
    auto [red, b] = canonical_form(A);
    std::vector<PhiTrunc> out;
    for (auto& x : red.c) {
        if (x.prec() < prec) throw OperError("precision loss in pullback reduction");
        out.push_back(PhiTrunc(x.value(), prec));
    }
    return out;
}

// ---------------------------------------------------------------------------

bool OperLinear::operator==(const OperLinear& o) const {
    if (G.size() != o.G.size() || scalar != o.scalar) return false;
    for (std::size_t i = 0; i < G.size(); ++i)
        if (G[i] != o.G[i]) return false;
    return true;
}

nlohmann::json OperLinear::to_json(int nvars) const {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < G.size(); ++i)
        if (!G[i].is_zero()) terms.push_back({{"v", i + 1}, {"g", G[i].to_json()}});
    return {{"terms", terms}, {"scalar", scalar.to_json(nvars)}};
}

OperLinear oper_generator(const LieData& g, PointSetPtr ps, int i, const DiskFun& f) {
    OperLinear L;
    L.G.assign(g.vcan().size(), DiskFun(ps));
    L.G.at(i) = f;
    return L;
}

OperLinear der_action_oper(const LieData& g, const DiskFun& h, int i, const DiskFun& f) {
    const auto& ps = f.points();
    OperLinear L = oper_generator(g, ps, i, DiskFun(ps));
    int dj = g.vcan_degrees().at(i);
    L.G[i] = h * f.deriv() - f * h.deriv() * ACoeff(dj);
    if (dj == 1) L.scalar = (h.deriv(3) * f).residue() * Q(-1, 2);
    return L;
}

ACoeff evaluate_linear(const OperLinear& L, const CanonicalOper<DiskFun>& c) {
    ACoeff r = L.scalar;
    for (std::size_t i = 0; i < L.G.size(); ++i)
        if (!L.G[i].is_zero()) r += (L.G[i] * c.c.at(i)).residue();
    return r;
}

UElem oper_to_center(const OperLinear& L, const FieldPtr& S, int N) {
    if (L.G.size() != 1) throw OperError("the dictionary is implemented for sl2");
    UElem out = UElem::scalar(S->algebra(), N, L.scalar);
    if (!L.G[0].is_zero()) out -= S->evaluate(L.G[0], N);
    return out;
}

std::vector<DictionaryEntry> center_oper_dictionary(const FieldPtr& S, const std::vector<BasisIndex>& window, int N) {
    const LieData& g = S->algebra()->lie();
    if (g.vcan().size() != 1) throw OperError("the dictionary is implemented for sl2");
    const auto& ps = S->points();
    std::vector<DictionaryEntry> out;
    for (const auto& idx : window) {
        DiskFun eps = DiskFun::dual_basis(ps, idx);
        out.push_back({idx, eps, S->evaluate(eps, N), oper_generator(g, ps, 0, eps)});
    }
    return out;
}

EquivarianceReport der_equivariance_check(const FieldPtr& S, const std::vector<DiskFun>& hs,
                                          const std::vector<BasisIndex>& window, int N) {
    const LieData& g = S->algebra()->lie();
    EquivarianceReport rep;
    for (const auto& e : center_oper_dictionary(S, window, N))
        for (const auto& h : hs) {
            UElem lhs = oper_to_center(der_action_oper(g, h, 0, e.eps), S, N);
            UElem rhs = der_on_u(h, oper_to_center(e.oper, S, N + 1), N);
            ++rep.checked;
            if (lhs != rhs) {
                rep.pass = false;
                if (rep.counterexamples.size() < 8)
                    rep.counterexamples.push_back({{"j", e.idx.i}, {"k", e.idx.k}, {"h", h.to_string()},
                                                   {"oper_side", lhs.to_string()}, {"center_side", rhs.to_string()}});
            }
        }
    return rep;
}

Connection<DiskFun> connection_from_json(const LieData& g, PointSetPtr ps, const nlohmann::json& j) {
    Connection<DiskFun> A{&g, std::vector<DiskFun>(g.dim(), DiskFun(ps))};
    auto read = [&](const nlohmann::json& m) {
        for (auto it = m.begin(); it != m.end(); ++it) {
            int a = g.index(it.key());
            A.coeff[a] = A.coeff[a] + DiskFun::from_json(ps, it.value());
        }
    };
    if (j.contains("coeff")) read(j.at("coeff"));
    if (j.contains("psi")) read(j.at("psi"));
    if (j.contains("v")) read(j.at("v"));
    if (j.contains("canonical")) {
        CanonicalOper<DiskFun> c{&g, std::vector<DiskFun>(g.vcan().size(), DiskFun(ps))};
        const auto& cj = j.at("canonical");
        for (std::size_t i = 0; i < cj.size() && i < c.c.size(); ++i) c.c[i] = DiskFun::from_json(ps, cj[i]);
        auto B = canonical_connection(c, DiskFun(ps));
        for (int a = 0; a < g.dim(); ++a) A.coeff[a] = A.coeff[a] + B.coeff[a];
    }
    return A;
}

nlohmann::json connection_to_json(const Connection<DiskFun>& A, int) {
    nlohmann::json out = nlohmann::json::object();
    for (int a = 0; a < A.g->dim(); ++a)
        if (!A.coeff[a].is_zero()) out[A.g->label(a)] = A.coeff[a].to_json();
    return out;
}

nlohmann::json canonical_to_json(const CanonicalOper<DiskFun>& c, int) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < c.c.size(); ++i)
        out.push_back({{"v", i + 1}, {"degree", c.g->vcan_degrees()[i]}, {"value", c.c[i].to_json()}});
    return out;
}

nlohmann::json trunc_to_json(const std::vector<PhiTrunc>& c, const LieData& g) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
        out.push_back({{"v", i + 1}, {"degree", g.vcan_degrees()[i]}, {"value", c[i].value().to_json()}, {"modulo_phi_power", c[i].prec()}});
    return out;
}

// ---------------------------------------------------------------------------

namespace {

DiskFun random_fun(PointSetPtr ps, std::mt19937& rng, int maxden) {
    std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), den(0, maxden);
    ZPoly num(deg(rng) + 1);
    for (auto& c : num) c = ACoeff(coef(rng));
    std::vector<int> d(ps->size());
    for (auto& x : d) x = den(rng);
    return DiskFun(ps, num, d);
}

DiskFun random_unit(PointSetPtr ps, std::mt19937& rng, int maxden) {
    static const long vals[] = {1, -1, 2, -2, 3};
    std::uniform_int_distribution<int> pick(0, 4), m(-maxden, maxden);
    DiskFun u = DiskFun::constant(ps, ACoeff(vals[pick(rng)]));
    for (int i = 0; i < ps->size(); ++i) u = u * DiskFun::point_factor(ps, i, m(rng));
    return u;
}

}  // namespace

GaugeElem<DiskFun> random_gauge(const LieData& g, PointSetPtr ps, std::mt19937& rng, int maxden) {
    GaugeElem<DiskFun> b;
    GaugeFactor<DiskFun> t;
    t.torus = true;
    for (int r = 0; r < g.matrix_size(); ++r)
        t.diag.push_back(r + 1 == g.matrix_size() ? DiskFun::constant(ps, 1) : random_unit(ps, rng, maxden));
    t.u = DiskFun(ps);
    b.factors.push_back(t);
    for (int a = 0; a < g.dim(); ++a) {
        if (g.degree(a) <= 0) continue;
        GaugeFactor<DiskFun> f;
        f.a = a;
        f.u = random_fun(ps, rng, maxden);
        if (!f.u.is_zero()) b.factors.push_back(f);
    }
    return b;
}

CanonicalOper<DiskFun> random_canonical(const LieData& g, PointSetPtr ps, std::mt19937& rng, int maxden) {
    CanonicalOper<DiskFun> c{&g, {}};
    for (std::size_t i = 0; i < g.vcan().size(); ++i) c.c.push_back(random_fun(ps, rng, maxden));
    return c;
}

DiskFun random_coordinate_change(PointSetPtr ps, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-2, 2);
    DiskFun q(ps, ZPoly{ACoeff(coef(rng)), ACoeff(coef(rng))});
    if (ps->size() == 1) {
        static const long scale[] = {1, 2, -1, 3};
        std::uniform_int_distribution<int> pick(0, 3);
        DiskFun t = DiskFun::z(ps) - DiskFun::constant(ps, ps->value(0));
        return DiskFun::constant(ps, ps->value(0)) + t * ACoeff(scale[pick(rng)]) + t * t * q;
    }
    return DiskFun::z(ps) + DiskFun::phi_power(ps, 2) * q;
}

template Connection<DiskFun> gauge(const GaugeElem<DiskFun>&, const Connection<DiskFun>&);
template Connection<PhiTrunc> gauge(const GaugeElem<PhiTrunc>&, const Connection<PhiTrunc>&);
template GaugeElem<DiskFun> compose(const GaugeElem<DiskFun>&, const GaugeElem<DiskFun>&);
template GaugeElem<DiskFun> inverse(const GaugeElem<DiskFun>&);
template RMatrix<DiskFun> gauge_matrix(const LieData&, const GaugeElem<DiskFun>&, const DiskFun&);
template bool is_scalar_matrix(const RMatrix<DiskFun>&);
template Connection<DiskFun> canonical_connection(const CanonicalOper<DiskFun>&);
template Connection<PhiTrunc> canonical_connection(const CanonicalOper<PhiTrunc>&);
template std::pair<CanonicalOper<DiskFun>, GaugeElem<DiskFun>> canonical_form(const Connection<DiskFun>&);
template std::pair<CanonicalOper<PhiTrunc>, GaugeElem<PhiTrunc>> canonical_form(const Connection<PhiTrunc>&);

}  // namespace fdisk
