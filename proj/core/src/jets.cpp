#include "fdisk/jets.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <set>
#include <sstream>

namespace fdisk {

JetPoly JetPoly::constant(const ACoeff& c) {
    JetPoly p;
    p.add_term({}, c);
    return p;
}

JetPoly JetPoly::var(const JetVar& v, const ACoeff& c) {
    JetPoly p;
    p.add_term({v.pack()}, c);
    return p;
}

int JetPoly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
}

void JetPoly::add_term(const JetMonomial& m, const ACoeff& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

JetPoly JetPoly::operator+(const JetPoly& o) const {
    JetPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

JetPoly JetPoly::operator-(const JetPoly& o) const {
    JetPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

JetPoly JetPoly::operator*(const JetPoly& o) const {
    JetPoly r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            JetMonomial m;
            m.reserve(m1.size() + m2.size());
            std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
            r.add_term(m, c1 * c2);
        }
    return r;
}

JetPoly JetPoly::operator*(const ACoeff& c) const {
    JetPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, x] : terms_) r.add_term(m, x * c);
    return r;
}

bool JetPoly::operator==(const JetPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto a = terms_.begin();
    for (auto b = o.terms_.begin(); b != o.terms_.end(); ++a, ++b)
        if (a->first != b->first || a->second != b->second) return false;
    return true;
}

JetPoly JetPoly::truncate(int N) const {
    JetPoly r;
    for (const auto& [m, c] : terms_) {
        bool keep = true;
        for (auto v : m)
            if (JetVar::unpack(v).k >= N) keep = false;
        if (keep) r.terms_.emplace(m, c);
    }
    return r;
}

JetPoly JetPoly::shift(int s) const {
    JetPoly r;
    for (const auto& [m, c] : terms_) {
        JetMonomial m2;
        for (auto v : m) {
            JetVar x = JetVar::unpack(v);
            x.k += s;
            m2.push_back(x.pack());
        }
        std::sort(m2.begin(), m2.end());
        r.add_term(m2, c);
    }
    return r;
}

ACoeff JetPoly::evaluate(const std::map<std::uint32_t, ACoeff>& values) const {
    ACoeff r;
    for (const auto& [m, c] : terms_) {
        ACoeff t = c;
        for (auto v : m) {
            auto it = values.find(v);
            if (it == values.end()) {
                t = ACoeff();
                break;
            }
            t *= it->second;
        }
        r += t;
    }
    return r;
}

namespace {

std::string var_name(const JetVar& v, const std::vector<std::string>& names) {
    std::string base = v.j < static_cast<int>(names.size()) ? names[v.j] : "x" + std::to_string(v.j + 1);
    return base + "[" + std::to_string(v.i) + "," + std::to_string(v.k) + "]";
}

}  // namespace

std::string JetPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (auto v : m) os << "*" << var_name(JetVar::unpack(v), names);
    }
    return os.str();
}

nlohmann::json JetPoly::to_json(const std::vector<std::string>& names, int nvars) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [m, c] : terms_) {
        nlohmann::json vars = nlohmann::json::array();
        for (auto v : m) vars.push_back(var_name(JetVar::unpack(v), names));
        arr.push_back({{"coeff", c.to_json(nvars)}, {"vars", vars}});
    }
    return arr;
}

namespace {

class PolyParser {
public:
    PolyParser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

    Poly parse() {
        Poly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw JetError("polynomial parse error at " + std::to_string(pos_) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Poly expr() {
        Poly r;
        bool neg = eat('-');
        if (!neg) eat('+');
        Poly t = term();
        r = neg ? -t : t;
        for (;;) {
            if (eat('+')) r += term();
            else if (eat('-')) r -= term();
            else return r;
        }
    }
    Poly term() {
        Poly r = power();
        while (true) {
            if (eat('*')) r *= power();
            else if (eat('/')) {
                Poly d = power();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
                r = r * Q(1 / d.constant_term());
            } else return r;
        }
    }
    Poly power() {
        Poly b = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            b = b.pow(std::stoi(s_.substr(start, pos_ - start)));
        }
        return b;
    }
    Poly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Poly(Q(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto it = std::find(names_.begin(), names_.end(), name);
            if (it == names_.end()) fail("unknown variable " + name);
            return Poly::var(static_cast<int>(it - names_.begin()));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_base_poly(const std::string& text, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) > kMaxVars) throw JetError("too many base variables");
    return PolyParser(text, names).parse();
}

JetPoly JetEngine::coordinate(int j, const DiskFun& g, int N) const {
    JetPoly r;
    if (g.is_zero()) return r;
    int v = g.valuation();
    for (int m = -N; m <= -v - 1; ++m)
        for (int i = 1; i <= ps_->size(); ++i) {
            ACoeff c = (DiskFun::basis(ps_, {i, m}) * g).residue();
            if (!c.is_zero()) r += JetPoly::var(JetVar{j, i, -m - 1}, c);
        }
    return r;
}

JetPoly JetEngine::product(const std::vector<int>& f, std::size_t from, const DiskFun& g, int N) const {
    if (g.is_zero()) return JetPoly();
    if (from == f.size()) return JetPoly::constant(g.residue());
    if (from + 1 == f.size()) return coordinate(f[from], g, N);

    std::ostringstream key;
    for (std::size_t t = from; t < f.size(); ++t) key << f[t] << ",";
    key << "#" << N << "#" << g.key();
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key.str());
        if (it != memo_.end()) return it->second;
    }

    // x_(-1) Y with Y the product of the remaining factors; certificates are N and (d-1)N
    int cx = N, cy = N * static_cast<int>(f.size() - from - 1);
    int v = g.valuation();
    JetPoly r;
    if (cy - v > 0) {
        ExpansionSeries second(ps_, Side::SECOND, -1, 0);
        for (int J = 0; J < cy - v; ++J)
            for (const auto& [p, q] : second.layer(J)) r += coordinate(f[from], p, N) * product(f, from + 1, q * g, N);
    }
    if (cx > 0) {
        ExpansionSeries first(ps_, Side::FIRST, -1, 0);
        for (int J = 0; J < cx; ++J)
            for (const auto& [p, q] : first.layer(J)) r = r - product(f, from + 1, q * g, N) * coordinate(f[from], p, N);
    }
    r = r.truncate(N);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(key.str(), r);
    return r;
}

JetPoly JetEngine::lift_ordered(const std::vector<int>& factors, const DiskFun& g, int N) const {
    if (!g.points()->same(*ps_)) throw JetError("test function lives on other points");
    if (N < 0) throw JetError("jet truncation must be non-negative");
    return product(factors, 0, g, N);
}

JetPoly JetEngine::lift(const Poly& p, const DiskFun& g, int N) const {
    JetPoly r;
    for (const auto& [mono, c] : p.terms()) {
        std::vector<int> factors;
        for (int v = 0; v < kMaxVars; ++v)
            for (int e = 0; e < mono.exp(v); ++e) factors.push_back(v);
        r += lift_ordered(factors, g, N) * ACoeff(c);
    }
    return r;
}

JetPoly JetEngine::lift(const Poly& p, BasisIndex idx, int N) const {
    return lift(p, DiskFun::dual_basis(ps_, idx), N);
}

std::map<std::uint32_t, ACoeff> jet_coordinates(const std::vector<DiskFun>& point, int kmin, int kmax) {
    std::map<std::uint32_t, ACoeff> out;
    for (std::size_t j = 0; j < point.size(); ++j)
        for (const auto& [idx, c] : point[j].expand_basis()) {
            int k = -idx.k - 1;
            if (k < kmin || k > kmax) continue;
            out[JetVar{static_cast<int>(j), idx.i, k}.pack()] = c;
        }
    return out;
}

DiskFun eval_base_poly(const Poly& p, const std::vector<DiskFun>& point) {
    if (point.empty()) throw JetError("empty point");
    const PointSetPtr& ps = point[0].points();
    DiskFun r(ps);
    for (const auto& [mono, c] : p.terms()) {
        DiskFun t = DiskFun::constant(ps, ACoeff(c));
        for (int v = 0; v < kMaxVars; ++v) {
            int e = mono.exp(v);
            if (!e) continue;
            if (v >= static_cast<int>(point.size())) throw JetError("polynomial uses more coordinates than the point has");
            t *= point[v].pow(e);
        }
        r += t;
    }
    return r;
}

namespace {

DiskFun random_regular(std::mt19937& rng, const PointSetPtr& ps, int zdeg) {
    std::uniform_int_distribution<int> c(-3, 3), pick(0, 3);
    ZPoly num(zdeg + 1);
    for (auto& x : num) {
        x = ACoeff(c(rng));
        if (pick(rng) == 0 && ps->nvars() > 0) {
            std::uniform_int_distribution<int> var(0, ps->nvars() - 1);
            x += ACoeff::point(var(rng)) * Q(c(rng));
        }
    }
    return DiskFun(ps, num);
}

void note(FunctorialityReport& rep, bool ok, nlohmann::json where) {
    ++rep.checked;
    if (ok) return;
    rep.pass = false;
    if (rep.counterexamples.size() < 5) rep.counterexamples.push_back(std::move(where));
}

int homogeneous_degree(const Poly& p) {
    int d = -1;
    for (const auto& [m, c] : p.terms()) {
        int t = m.total();
        if (d >= 0 && t != d) throw JetError("shift law needs a homogeneous polynomial");
        d = t;
    }
    return d;
}

}  // namespace

FunctorialityReport verify_functoriality(const JetEngine& eng, const Poly& p, int nvars, int samples, int kmin,
                                         std::mt19937& rng) {
    FunctorialityReport rep;
    const PointSetPtr& ps = eng.points();
    std::vector<JetPoly> lifted;
    std::vector<BasisIndex> idx;
    for (int k = kmin; k <= -1; ++k)
        for (int j = 1; j <= ps->size(); ++j) {
            idx.push_back({j, k});
            lifted.push_back(eng.lift(p, BasisIndex{j, k}, 0));
        }
    for (int s = 0; s < samples; ++s) {
        std::vector<DiskFun> b;
        for (int v = 0; v < nvars; ++v) b.push_back(random_regular(rng, ps, ps->size() + 1));
        auto coords = jet_coordinates(b, INT_MIN / 2, INT_MAX / 2);
        DiskFun pb = eval_base_poly(p, b);
        for (std::size_t t = 0; t < idx.size(); ++t) {
            ACoeff lhs = lifted[t].evaluate(coords);
            ACoeff rhs = (pb * DiskFun::dual_basis(ps, idx[t])).residue();
            note(rep, lhs == rhs,
                 {{"sample", s}, {"j", idx[t].i}, {"k", idx[t].k}, {"lift", lhs.to_string()}, {"direct", rhs.to_string()}});
        }
    }
    return rep;
}

FunctorialityReport verify_shift(const JetEngine& eng, const Poly& p, int nvars, int m, int samples, int kmin,
                                 std::mt19937& rng) {
    if (m < 0) throw JetError("shift needs m >= 0");
    FunctorialityReport rep;
    const PointSetPtr& ps = eng.points();
    int d = homogeneous_degree(p);
    for (int s = 0; s < samples; ++s) {
        std::vector<DiskFun> r, b;
        for (int v = 0; v < nvars; ++v) {
            r.push_back(random_regular(rng, ps, ps->size() + 1));
            b.push_back(r.back() * DiskFun::phi_power(ps, -m));
        }
        auto cr = jet_coordinates(r, INT_MIN / 2, INT_MAX / 2);
        auto cb = jet_coordinates(b, INT_MIN / 2, INT_MAX / 2);
        for (int k = kmin; k <= -1; ++k)
            for (int j = 1; j <= ps->size(); ++j) {
                ACoeff lhs = eng.lift(p, BasisIndex{j, k}, 0).evaluate(cr);
                ACoeff rhs = eng.lift(p, BasisIndex{j, k + d * m}, m).evaluate(cb);
                note(rep, lhs == rhs,
                     {{"sample", s}, {"j", j}, {"k", k}, {"m", m}, {"R_side", lhs.to_string()}, {"K_side", rhs.to_string()}});
            }
    }
    return rep;
}

JetPoly symbol(const UElem& u) {
    const UAlgebraPtr& alg = u.algebra();
    if (alg->components() != 1) throw JetError("symbol is defined on one component");
    const PointSetPtr& ps = alg->points(0);
    int L = u.max_length();
    JetPoly r;
    for (const auto& [mono, c] : u.terms()) {
        if (static_cast<int>(mono.size()) != L) continue;
        JetPoly t = JetPoly::constant(c);
        for (auto p : mono) {
            Factor x = Factor::unpack(p);
            JetPoly lin;
            for (int j = 1; j <= ps->size(); ++j) lin += JetPoly::var(JetVar{x.a, j, x.k}, ps->S(x.i, j));
            t = t * lin;
        }
        r += t;
    }
    return r;
}

nlohmann::json JetPresentation::to_json(int nvars) const {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : jet_vars) vars.push_back(base_vars.at(v.j) + "[" + std::to_string(v.i) + "," + std::to_string(v.k) + "]");
    nlohmann::json rel = nlohmann::json::array();
    for (const auto& [where, p] : relations)
        rel.push_back({{"equation", where.first},
                       {"i", where.second.i},
                       {"k", where.second.k},
                       {"polynomial", p.to_string(base_vars)},
                       {"terms", p.to_json(base_vars, nvars)}});
    return {{"base_vars", base_vars}, {"jet_vars", vars}, {"relations", rel}};
}

JetPresentation jet_presentation(const JetEngine& eng, const std::vector<std::string>& base_vars,
                                 const std::vector<Poly>& equations, int kmin) {
    JetPresentation out;
    out.base_vars = base_vars;
    std::set<std::uint32_t> vars;
    for (std::size_t l = 0; l < equations.size(); ++l)
        for (int k = kmin; k <= -1; ++k)
            for (int i = 1; i <= eng.points()->size(); ++i) {
                JetPoly g = eng.lift(equations[l], BasisIndex{i, k}, 0);
                for (const auto& [m, c] : g.terms())
                    for (auto v : m) vars.insert(v);
                out.relations.push_back({{static_cast<int>(l), BasisIndex{i, k}}, g});
            }
    for (int j = 0; j < static_cast<int>(base_vars.size()); ++j)
        for (int k = kmin; k <= -1; ++k)
            for (int i = 1; i <= eng.points()->size(); ++i) vars.insert(JetVar{j, i, k}.pack());
    for (auto v : vars) out.jet_vars.push_back(JetVar::unpack(v));
    return out;
}

std::vector<Poly> kostant_invariants(const LieData& g) {
    int d = g.dim(), s = g.matrix_size();
    if (d > kMaxVars) throw JetError("Lie algebra too large for base polynomials");
    // M = sum_a x_a rho(J^a), J^a = sum_b kappa0^-1(a, b) x_b
    std::vector<std::vector<Poly>> M(s, std::vector<Poly>(s));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const Q& c = g.form_inverse(a, b);
            if (c == 0) continue;
            const QMatrix& mb = g.matrix(b);
            for (int r = 0; r < s; ++r)
                for (int t = 0; t < s; ++t)
                    if (mb[r][t] != 0) M[r][t] += Poly::var(a) * Q(c * mb[r][t]);
        }
    auto mul = [&](const std::vector<std::vector<Poly>>& A, const std::vector<std::vector<Poly>>& B) {
        std::vector<std::vector<Poly>> C(s, std::vector<Poly>(s));
        for (int r = 0; r < s; ++r)
            for (int t = 0; t < s; ++t)
                for (int u = 0; u < s; ++u) C[r][t] += A[r][u] * B[u][t];
        return C;
    };
    auto trace = [&](const std::vector<std::vector<Poly>>& A) {
        Poly t;
        for (int r = 0; r < s; ++r) t += A[r][r];
        return t;
    };
    std::vector<Poly> out;
    auto M2 = mul(M, M);
    out.push_back(trace(M2) * Q(1, 2));
    if (g.rank() >= 2) out.push_back(trace(mul(M2, M)) * Q(1, 3));
    return out;
}

bool is_ad_invariant(const LieData& g, const Poly& p) {
    for (int y = 0; y < g.dim(); ++y) {
        Poly acc;
        for (int a = 0; a < g.dim(); ++a) {
            Poly lin;
            for (const auto& [c, q] : g.bracket(y, a)) lin += Poly::var(c) * q;
            if (!lin.is_zero()) acc += p.derivative(a) * lin;
        }
        if (!acc.is_zero()) return false;
    }
    return true;
}

}  // namespace fdisk
