#include "fdisk/fields.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace fdisk {

namespace {

constexpr int kNoFactors = INT_MAX / 4;

int combine_low(int lx, int Lx, int ly, int Ly) {
    if (lx >= kNoFactors) return ly;
    if (ly >= kNoFactors) return lx;
    return std::min({lx, ly, Lx * std::min(lx, 0) + Ly * std::min(ly, 0)});
}

int left_precision(int N, int len, int low) { return std::max(N, 1) + len * std::max(0, -low); }

void check_precision(int N1, const Field& x) {
    if (N1 > kMaxPrecision)
        throw FieldError("certificate shortfall: left operand " + x.describe() + " needs precision " +
                         std::to_string(N1) + " beyond " + std::to_string(kMaxPrecision));
}

}  // namespace

RealizationPtr PlainRealization::make(const LieData& g, Q level, PointSetPtr ps) {
    return std::make_shared<PlainRealization>(UAlgebra::make(g, std::move(level), std::move(ps)));
}

UElem PlainRealization::generator(int a, const DiskFun& f, int N) const {
    return UElem::from_loop(LoopElem::generator(target(), a, f), N);
}

FieldPtr Field::generator(RealizationPtr r, int a) {
    if (a < 0 || a >= r->target()->lie().dim()) throw FieldError("generator index out of range");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::GENERATOR;
    f->real_ = std::move(r);
    f->a_ = a;
    f->conf_ = ConformalData{Q(1), Q(0)};
    return f;
}

FieldPtr Field::unity(RealizationPtr r) {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::UNITY;
    f->real_ = std::move(r);
    f->conf_ = ConformalData{Q(0), Q(0)};
    return f;
}

FieldPtr Field::deriv(FieldPtr x) {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::DERIV;
    f->real_ = x->real_;
    f->kids_ = {std::move(x)};
    return f;
}

FieldPtr Field::nprod(FieldPtr x, FieldPtr y, int m) {
    if (x->real_ != y->real_) throw FieldError("n-product of fields with different realizations");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::NPROD;
    f->real_ = x->real_;
    f->m_ = m;
    f->kids_ = {std::move(x), std::move(y)};
    return f;
}

FieldPtr Field::kmul(const DiskFun& g, FieldPtr x) {
    if (!g.points()->same(*x->points())) throw FieldError("multiplier lives on different points");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::KMUL;
    f->real_ = x->real_;
    f->g_ = g;
    f->kids_ = {std::move(x)};
    return f;
}

FieldPtr Field::scalar(const ACoeff& c, FieldPtr x) {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::SCALAR;
    f->real_ = x->real_;
    f->c_ = c;
    f->kids_ = {std::move(x)};
    return f;
}

FieldPtr Field::sum(std::vector<FieldPtr> xs) {
    if (xs.empty()) throw FieldError("empty field sum");
    for (const auto& x : xs)
        if (x->real_ != xs[0]->real_) throw FieldError("sum of fields with different realizations");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::SUM;
    f->real_ = xs[0]->real_;
    f->kids_ = std::move(xs);
    return f;
}

FieldPtr Field::with_conformal(FieldPtr x, ConformalData d) {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = x->kind_;
    f->real_ = x->real_;
    f->a_ = x->a_;
    f->m_ = x->m_;
    f->g_ = x->g_;
    f->c_ = x->c_;
    f->kids_ = x->kids_;
    f->conf_ = std::move(d);
    return f;
}

int Field::length() const {
    switch (kind_) {
        case Kind::GENERATOR: return 1;
        case Kind::UNITY: return 0;
        case Kind::NPROD: return kids_[0]->length() + kids_[1]->length();
        case Kind::SUM: {
            int l = 0;
            for (const auto& k : kids_) l = std::max(l, k->length());
            return l;
        }
        default: return kids_[0]->length();
    }
}

int Field::cert(int N) const {
    switch (kind_) {
        case Kind::GENERATOR: return N;
        case Kind::UNITY: return 0;
        case Kind::DERIV: return kids_[0]->cert(N) + 1;
        case Kind::KMUL: return kids_[0]->cert(N) - g_.valuation();
        case Kind::SCALAR: return kids_[0]->cert(N);
        case Kind::SUM: {
            int c = INT_MIN;
            for (const auto& k : kids_) c = std::max(c, k->cert(N));
            return c;
        }
        case Kind::NPROD: {
            const Field& x = *kids_[0];
            const Field& y = *kids_[1];
            int N2 = left_precision(N, x.length(), x.low(0, N));
            if (m_ >= 0) return y.cert(N2);
            int r = -m_;
            return std::max(y.cert(N), x.cert(N) + r - 1 + y.cert(N2));
        }
    }
    return 0;
}

int Field::low(int v, int N) const {
    switch (kind_) {
        case Kind::GENERATOR: return v;
        case Kind::UNITY: return kNoFactors;
        case Kind::DERIV: return kids_[0]->low(v - 1, N);
        case Kind::KMUL: return kids_[0]->low(v + g_.valuation(), N);
        case Kind::SCALAR: return kids_[0]->low(v, N);
        case Kind::SUM: {
            int l = kNoFactors;
            for (const auto& k : kids_) l = std::min(l, k->low(v, N));
            return l;
        }
        case Kind::NPROD: {
            const Field& x = *kids_[0];
            const Field& y = *kids_[1];
            int Lx = x.length(), Ly = y.length();
            int N2 = left_precision(N, Lx, x.low(0, N));
            if (m_ >= 0) {
                int ly = y.low(v, N2);
                int lx = x.low(0, left_precision(N, Ly, ly));
                return combine_low(lx, Lx, ly, Ly);
            }
            int r = -m_;
            int out = kNoFactors;
            int JY = y.cert(N) - v;
            if (JY > 0) {
                int ly = y.low(v, N);
                int lx = x.low(-(JY - 1) - r, left_precision(N, Ly, ly));
                out = std::min(out, combine_low(lx, Lx, ly, Ly));
            }
            int JX = x.cert(N);
            if (JX > 0) {
                int lx = x.low(0, N);
                int ly = y.low(v - (JX - 1) - r, N2);
                out = std::min(out, combine_low(lx, Lx, ly, Ly));
            }
            return out;
        }
    }
    return kNoFactors;
}

std::string Field::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::GENERATOR: os << algebra()->lie().label(a_) << "^"; break;
        case Kind::UNITY: os << "1^"; break;
        case Kind::DERIV: os << "d(" << kids_[0]->describe() << ")"; break;
        case Kind::NPROD:
            os << "(" << kids_[0]->describe() << ")_(" << m_ << ")(" << kids_[1]->describe() << ")";
            break;
        case Kind::KMUL: os << "[" << g_.to_string() << "]*" << kids_[0]->describe(); break;
        case Kind::SCALAR: os << c_.to_string() << "*" << kids_[0]->describe(); break;
        case Kind::SUM:
            for (std::size_t i = 0; i < kids_.size(); ++i) os << (i ? " + " : "") << kids_[i]->describe();
            break;
    }
    return os.str();
}

std::size_t Field::memo_size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return memo_.size();
}

UElem Field::evaluate(const DiskFun& f, int N) const {
    if (!f.points()->same(*points())) throw FieldError("field evaluated on a function over other points");
    if (f.is_zero()) return UElem(algebra(), N);
    std::string key = f.key() + "#" + std::to_string(N);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    UElem r = eval_uncached(f, N);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(std::move(key), r);
    return r;
}

UElem left_multiply(const Field& x, const DiskFun& p, const UElem& b) {
    if (b.is_zero() || p.is_zero()) return UElem(b.algebra(), b.trunc());
    int N1 = left_precision(b.trunc(), b.max_length(), b.min_degree());
    check_precision(N1, x);
    UElem a = x.evaluate(p, N1);
    return u_mul(a, b);
}

UElem Field::eval_uncached(const DiskFun& f, int N) const {
    const PointSetPtr& ps = points();
    switch (kind_) {
        case Kind::GENERATOR: return real_->generator(a_, f, N);
        case Kind::UNITY: return UElem::scalar(algebra(), N, f.residue());
        case Kind::DERIV: return -kids_[0]->evaluate(f.deriv(), N);
        case Kind::KMUL: return kids_[0]->evaluate(g_ * f, N);
        case Kind::SCALAR: return kids_[0]->evaluate(f, N) * c_;
        case Kind::SUM: {
            UElem r(algebra(), N);
            for (const auto& k : kids_) r += k->evaluate(f, N);
            return r;
        }
        case Kind::NPROD: break;
    }
    const Field& x = *kids_[0];
    const Field& y = *kids_[1];
    UElem r(algebra(), N);
    if (m_ >= 0) return commutator_on(x, y, m_, DiskFun::constant(ps, 1), f, N);

    int v = f.valuation();
    int JY = y.cert(N) - v;
    if (JY > 0) {
        ExpansionSeries second(ps, Side::SECOND, m_, 0);
        for (int J = 0; J < JY; ++J)
            for (const auto& [p, q] : second.layer(J)) r += left_multiply(x, p, y.evaluate(q * f, N));
    }
    int JX = x.cert(N);
    if (JX > 0) {
        ExpansionSeries first(ps, Side::FIRST, m_, 0);
        for (int J = 0; J < JX; ++J)
            for (const auto& [p, q] : first.layer(J)) r -= left_multiply(y, q * f, x.evaluate(p, N));
    }
    return r;
}

UElem commutator_on(const Field& x, const Field& y, int M, const DiskFun& f, const DiskFun& g, int N) {
    const PointSetPtr& ps = x.points();
    UElem r(x.algebra(), N);
    for (int l = 0; l <= M; ++l) {
        ACoeff c(binomial(M, l) * ((M - l) % 2 ? Q(-1) : Q(1)));
        DiskFun p = DiskFun::z_power(ps, l) * f;
        DiskFun q = DiskFun::z_power(ps, M - l) * g;
        UElem xy = left_multiply(x, p, y.evaluate(q, N));
        UElem yx = left_multiply(y, q, x.evaluate(p, N));
        r += (xy - yx) * c;
    }
    return r;
}

std::vector<DiskFun> basis_window(const PointSetPtr& ps, int kmin, int kmax, bool dual) {
    std::vector<DiskFun> out;
    for (int k = kmin; k <= kmax; ++k)
        for (int i = 1; i <= ps->size(); ++i)
            out.push_back(dual ? DiskFun::dual_basis(ps, {i, k}) : DiskFun::basis(ps, {i, k}));
    return out;
}

LocalityCert locality_order(const Field& x, const Field& y, int max_order, int kmin, int kmax, int N) {
    LocalityCert out;
    auto window = basis_window(x.points(), kmin, kmax);
    for (int M = 0; M <= max_order; ++M) {
        out.max_checked = M;
        bool zero = true;
        for (const auto& f : window) {
            for (const auto& g : window)
                if (!commutator_on(x, y, M, f, g, N).is_zero()) {
                    zero = false;
                    break;
                }
            if (!zero) break;
        }
        if (zero) {
            out.found = true;
            out.order = M;
            return out;
        }
    }
    return out;
}

UElem der_on_u(const DiskFun& h, const UElem& u, int N) {
    const UAlgebraPtr& alg = u.algebra();
    UElem r(alg, N);
    for (const auto& [mono, c] : u.terms()) {
        std::vector<Factor> word;
        for (auto p : mono) word.push_back(Factor::unpack(p));
        for (std::size_t pos = 0; pos < word.size(); ++pos) {
            const Factor& x = word[pos];
            const PointSetPtr& ps = alg->points(x.comp);
            if (!h.points()->same(*ps)) throw FieldError("vector field lives on different points");
            DiskFun dx = h * DiskFun::basis(ps, {x.i, x.k}).deriv();
            for (const auto& [idx, e] : dx.expand_basis()) {
                std::vector<Factor> w2 = word;
                w2[pos] = Factor{x.a, idx.i, idx.k, x.comp};
                r += normal_order(alg, w2, N) * (c * e);
            }
        }
    }
    return r;
}

FieldPtr der_action(const DiskFun& h, const FieldPtr& x) {
    if (!x->conformal()) throw FieldError("der_action needs L_l data for " + x->describe());
    const ConformalData& d = *x->conformal();
    std::vector<FieldPtr> parts;
    parts.push_back(Field::scalar(ACoeff(-1), Field::kmul(h, Field::deriv(x))));
    if (d.weight != 0) parts.push_back(Field::scalar(ACoeff(-d.weight), Field::kmul(h.deriv(), x)));
    if (d.l2_scalar != 0)
        parts.push_back(Field::scalar(ACoeff(-d.l2_scalar / 6), Field::kmul(h.deriv(3), Field::unity(x->realization()))));
    return Field::sum(std::move(parts));
}

namespace {

FieldPtr sugawara_tree(const RealizationPtr& r) {
    const LieData& g = r->target()->lie();
    std::vector<FieldPtr> parts;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) {
            const Q& c = g.form_inverse(a, b);
            if (c == 0) continue;
            parts.push_back(Field::scalar(ACoeff(c / 2),
                                          Field::nprod(Field::generator(r, b), Field::generator(r, a), -1)));
        }
    return Field::sum(std::move(parts));
}

}  // namespace

SugawaraLData sugawara_l_data(const LieData& g, const Q& level) {
    auto ps = PointSet::rational({Q(0)});
    auto r = PlainRealization::make(g, level, ps);
    FieldPtr s = sugawara_tree(r);
    UElem state = s->evaluate(DiskFun::point_factor(ps, 0, -1), 0);
    UElem tstate = s->evaluate(DiskFun::point_factor(ps, 0, -2), 0);
    auto L = [&](int n) { return der_on_u(DiskFun::z_power(ps, n + 1) * ACoeff(-1), state, 0); };

    SugawaraLData out;
    out.l_minus1_is_translation = (L(-1) == tstate);
    out.l0_is_weight2 = (L(0) == state * ACoeff(2));
    out.l1_vanishes = L(1).is_zero();
    UElem l2 = L(2);
    ACoeff sc = l2.scalar_part();
    out.l2_is_scalar = (l2 == UElem::scalar(l2.algebra(), 0, sc)) && sc.is_constant();
    if (out.l2_is_scalar) out.l2_scalar = sc.constant_value();
    return out;
}

FieldPtr sugawara(RealizationPtr r) {
    SugawaraLData d = sugawara_l_data(r->target()->lie(), r->target()->level());
    FieldPtr s = sugawara_tree(r);
    if (!(d.l_minus1_is_translation && d.l0_is_weight2 && d.l1_vanishes && d.l2_is_scalar))
        throw FieldError("Sugawara vector failed its L_l checks");
    return Field::with_conformal(s, ConformalData{Q(2), d.l2_scalar});
}

CentralityReport centrality_check(const FieldPtr& s, int N, int kmin, int kmax) {
    CentralityReport rep;
    const UAlgebraPtr& alg = s->algebra();
    const PointSetPtr& ps = s->points();
    const LieData& g = alg->lie();
    for (int k = kmin; k <= kmax; ++k)
        for (int j = 1; j <= ps->size(); ++j) {
            DiskFun eps = DiskFun::dual_basis(ps, {j, k});
            for (int l = kmin; l <= kmax; ++l)
                for (int i = 1; i <= ps->size(); ++i)
                    for (int a = 0; a < g.dim(); ++a) {
                        UElem x = UElem::factor(alg, N, Factor{a, i, l, 0});
                        // [S(eps), x] = S(eps) x - x S(eps)
                        UElem sx = left_multiply(*s, eps, x);
                        UElem xs = u_mul(x, s->evaluate(eps, N));
                        UElem c = sx - xs;
                        ++rep.checked;
                        if (!c.is_zero()) {
                            ++rep.nonzero;
                            rep.pass = false;
                            if (rep.counterexamples.size() < 5)
                                rep.counterexamples.push_back({{"j", j},
                                                               {"k", k},
                                                               {"X", g.label(a)},
                                                               {"i", i},
                                                               {"l", l},
                                                               {"commutator", c.to_string()}});
                        }
                    }
        }
    return rep;
}

void IdentityReport::record(bool ok, nlohmann::json where) {
    ++checked;
    if (ok) return;
    pass = false;
    if (counterexamples.size() < 5) counterexamples.push_back(std::move(where));
}

IdentityReport borcherds_check(const FieldPtr& a, const FieldPtr& b, const FieldPtr& c, int p, int q, int N, int kmin,
                               int kmax) {
    if (p < 0) throw FieldError("commutator identity needs p >= 0");
    IdentityReport rep;
    FieldPtr lhs1 = Field::nprod(a, Field::nprod(b, c, q), p);
    FieldPtr lhs2 = Field::nprod(b, Field::nprod(a, c, p), q);
    std::vector<FieldPtr> rhs_parts;
    for (int j = 0; j <= p; ++j)
        rhs_parts.push_back(Field::scalar(ACoeff(binomial(p, j)), Field::nprod(Field::nprod(a, b, j), c, p + q - j)));
    FieldPtr rhs = Field::sum(std::move(rhs_parts));
    for (const auto& f : basis_window(a->points(), kmin, kmax)) {
        UElem l = lhs1->evaluate(f, N) - lhs2->evaluate(f, N);
        UElem r = rhs->evaluate(f, N);
        rep.record(l == r, {{"p", p}, {"q", q}, {"f", f.to_string()}, {"lhs", l.to_string()}, {"rhs", r.to_string()}});
    }
    return rep;
}

IdentityReport dong_check(const FieldPtr& a, const FieldPtr& b, const FieldPtr& c, int n, int N, int kmin, int kmax) {
    if (n < -1) throw FieldError("Dong bound is checked for n >= -1");
    IdentityReport rep;
    const int cap = 12;
    // pairwise orders are read on a wider window so that they are not underestimated
    int wmin = std::min(kmin, -1) - 1, wmax = std::max(kmax, 1) + 1;
    auto ab = locality_order(*a, *b, cap, wmin, wmax, N);
    auto ac = locality_order(*a, *c, cap, wmin, wmax, N);
    auto bc = locality_order(*b, *c, cap, wmin, wmax, N);
    if (!ab.found || !ac.found || !bc.found) {
        rep.record(false, {{"reason", "pairwise locality not reached"}, {"cap", cap}});
        return rep;
    }
    int bound = 3 * std::max({ab.order, ac.order, bc.order}) + (n < 0 ? 1 : 0);
    auto prod = locality_order(*Field::nprod(a, b, n), *c, bound, kmin, kmax, N);
    rep.record(prod.found, {{"n", n},
                            {"bound", bound},
                            {"pairwise", {ab.order, ac.order, bc.order}},
                            {"product", a->describe() + "_(" + std::to_string(n) + ")" + b->describe()},
                            {"against", c->describe()}});
    return rep;
}

nlohmann::json VertexReport::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, r] : sections)
        j[name] = {{"pass", r.pass}, {"checked", r.checked}, {"counterexamples", r.counterexamples}};
    return j;
}

VertexReport vertex_axiom_check(const std::vector<FieldPtr>& gens, int depth, int N, int kmin, int kmax) {
    if (gens.empty()) throw FieldError("vertex check needs generators");
    VertexReport rep;
    const RealizationPtr& real = gens[0]->realization();
    const PointSetPtr& ps = gens[0]->points();
    FieldPtr one = Field::unity(real);
    auto window = basis_window(ps, kmin, kmax);

    std::vector<FieldPtr> closure = gens;
    std::size_t begin = 0;
    for (int d = 2; d <= depth; ++d) {
        std::size_t end = closure.size();
        for (std::size_t x = begin; x < end; ++x)
            for (const auto& y : gens)
                for (int m : {-1, 0}) closure.push_back(Field::nprod(closure[x], y, m));
        begin = end;
    }

    auto same = [&](const FieldPtr& a, const FieldPtr& b, IdentityReport& r, const std::string& what) {
        for (const auto& f : window) {
            UElem u = a->evaluate(f, N), v = b->evaluate(f, N);
            r.record(u == v, {{"identity", what}, {"f", f.to_string()}, {"lhs", u.to_string()}, {"rhs", v.to_string()}});
        }
    };
    auto zero = [&](const FieldPtr& a, IdentityReport& r, const std::string& what) {
        for (const auto& f : window) {
            UElem u = a->evaluate(f, N);
            r.record(u.is_zero(), {{"identity", what}, {"f", f.to_string()}, {"value", u.to_string()}});
        }
    };

    auto& vac = rep.sections["vacuum"];
    auto& tr = rep.sections["translation"];
    auto& kl = rep.sections["k_linearity"];
    std::vector<DiskFun> mults = {DiskFun::z(ps), DiskFun::phi_power(ps, -1)};
    for (const auto& A : closure) {
        std::string a = A->describe();
        same(Field::nprod(one, A, -1), A, vac, "1_(-1)" + a + " = " + a);
        same(Field::nprod(A, one, -1), A, vac, a + "_(-1)1 = " + a);
        same(Field::nprod(A, one, -2), Field::deriv(A), vac, a + "_(-2)1 = d" + a);
        zero(Field::nprod(A, one, 0), vac, a + "_(0)1 = 0");
        zero(Field::deriv(one), vac, "d1 = 0");
        for (const auto& B : gens)
            for (int m : {-1, 0, 1}) {
                auto lhs = Field::deriv(Field::nprod(A, B, m));
                auto rhs = Field::sum({Field::nprod(Field::deriv(A), B, m), Field::nprod(A, Field::deriv(B), m)});
                same(lhs, rhs, tr, "d(" + a + "_(m)B) Leibniz, m = " + std::to_string(m));
                same(Field::nprod(Field::deriv(A), B, m), Field::scalar(ACoeff(-m), Field::nprod(A, B, m - 1)), tr,
                     "(d" + a + ")_(m)B = -m " + a + "_(m-1)B, m = " + std::to_string(m));
            }
        for (const auto& B : gens)
            for (const auto& g : mults)
                same(Field::nprod(A, Field::kmul(g, B), -1), Field::kmul(g, Field::nprod(A, B, -1)), kl,
                     a + "_(-1)(gB) = g(" + a + "_(-1)B)");
    }

    auto& sk = rep.sections["skew_symmetry"];
    auto& cm = rep.sections["commutator"];
    auto& dg = rep.sections["dong"];
    for (const auto& A : gens)
        for (const auto& B : gens) {
            auto loc = locality_order(*A, *B, 3, kmin, kmax, N);
            if (loc.found && loc.order == 0) same(Field::nprod(A, B, -1), Field::nprod(B, A, -1), sk, "commuting pair");
            for (const auto& C : gens) {
                for (int p = 0; p <= 1; ++p)
                    for (int q = -1; q <= 0; ++q) {
                        auto r = borcherds_check(A, B, C, p, q, N, kmin, kmax);
                        cm.checked += r.checked;
                        if (!r.pass) {
                            cm.pass = false;
                            for (auto& c : r.counterexamples)
                                if (cm.counterexamples.size() < 5) cm.counterexamples.push_back(c);
                        }
                    }
                for (int n : {-1, 0}) {
                    auto r = dong_check(A, B, C, n, N, kmin, kmax);
                    dg.checked += r.checked;
                    if (!r.pass) {
                        dg.pass = false;
                        for (auto& c : r.counterexamples)
                            if (dg.counterexamples.size() < 5) dg.counterexamples.push_back(c);
                    }
                }
            }
        }
    for (const auto& [name, r] : rep.sections) rep.pass = rep.pass && r.pass;
    return rep;
}

}  // namespace fdisk
