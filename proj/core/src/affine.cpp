#include "fdisk/affine.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace fdisk {

namespace {

void accumulate(TermMap& acc, const Monomial& m, const ACoeff& c) {
    if (c.is_zero()) return;
    auto it = acc.find(m);
    if (it == acc.end()) {
        acc.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
}

void accumulate(TermMap& acc, const TermMap& src, const ACoeff& c) {
    for (const auto& [m, v] : src) accumulate(acc, m, v * c);
}

void check_factor(const Factor& f) {
    if (f.k < -32768 || f.k > 32767 || f.comp < 0 || f.comp > 15 || f.i < 1 || f.i > 15 || f.a < 0 || f.a > 255)
        throw AffineError("factor out of packable range");
}

}  // namespace

UAlgebraPtr UAlgebra::make(const LieData& g, Q level, std::vector<PointSetPtr> comps) {
    if (comps.empty()) throw AffineError("at least one component is required");
    std::shared_ptr<UAlgebra> u(new UAlgebra());
    u->g_ = &g;
    u->level_ = std::move(level);
    u->comps_ = std::move(comps);
    return u;
}

bool UAlgebra::same(const UAlgebra& o) const {
    if (this == &o) return true;
    if (g_->name() != o.g_->name() || level_ != o.level_ || comps_.size() != o.comps_.size()) return false;
    for (std::size_t c = 0; c < comps_.size(); ++c)
        if (!comps_[c]->same(*o.comps_[c])) return false;
    return true;
}

void UAlgebra::bracket(const Factor& x, const Factor& y, std::vector<std::pair<Factor, ACoeff>>& out,
                       ACoeff& scalar) const {
    out.clear();
    scalar = ACoeff();
    if (x.comp != y.comp) return;
    const PointSet& ps = *comps_[x.comp];
    const auto& lb = g_->bracket(x.a, y.a);
    if (!lb.empty()) {
        for (const auto& pt : ps.product(x.i, y.i))
            for (const auto& [m, s] : lb) out.emplace_back(Factor{m, pt.m, x.k + y.k + pt.shift, x.comp}, pt.c * s);
    }
    const Q& kab = g_->form(x.a, y.a);
    if (kab != 0 && level_ != 0) {
        ACoeff c = ps.cocycle(x.i, x.k, y.i, y.k);
        if (!c.is_zero()) scalar = c * (level_ * kab);
    }
}

std::shared_ptr<const TermMap> UAlgebra::mul_factor(const Factor& x, const Monomial& m, int N) const {
    std::uint32_t px = x.pack();
    Key key{px, N, m};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    auto result = std::make_shared<TermMap>();
    if (m.empty()) {
        if (x.k < N) result->emplace(Monomial{px}, ACoeff(1));
    } else if (px <= m.front()) {
        Monomial r;
        r.reserve(m.size() + 1);
        r.push_back(px);
        r.insert(r.end(), m.begin(), m.end());
        result->emplace(std::move(r), ACoeff(1));
    } else {
        // x y1 rest = y1 (x rest) + [x, y1] rest
        Factor y1 = Factor::unpack(m.front());
        Monomial rest(m.begin() + 1, m.end());
        auto t1 = mul_factor(x, rest, N);
        for (const auto& [t, c] : *t1) accumulate(*result, *mul_factor(y1, t, N), c);
        std::vector<std::pair<Factor, ACoeff>> br;
        ACoeff s;
        bracket(x, y1, br, s);
        for (const auto& [z, c] : br) accumulate(*result, *mul_factor(z, rest, N), c);
        if (!s.is_zero()) accumulate(*result, rest, s);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(std::move(key), std::move(result)).first->second;
}

std::size_t UAlgebra::memo_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
}

void UAlgebra::clear_memo() const {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.clear();
}

// ---------------------------------------------------------------- LoopElem

LoopElem::LoopElem(UAlgebraPtr alg) : alg_(std::move(alg)) {
    for (int c = 0; c < alg_->components(); ++c) parts_.emplace_back(alg_->lie().dim(), DiskFun(alg_->points(c)));
}

LoopElem LoopElem::generator(UAlgebraPtr alg, int a, const DiskFun& f, int comp) {
    LoopElem r(std::move(alg));
    if (!f.points()->same(*r.alg_->points(comp))) throw AffineError("loop element on the wrong point set");
    r.parts_.at(comp).at(a) = f;
    return r;
}

LoopElem LoopElem::central(UAlgebraPtr alg, const ACoeff& c) {
    LoopElem r(std::move(alg));
    r.central_ = c;
    return r;
}

LoopElem LoopElem::operator+(const LoopElem& o) const {
    if (!alg_->same(*o.alg_)) throw AffineError("loop elements over different algebras");
    LoopElem r = *this;
    for (std::size_t c = 0; c < parts_.size(); ++c)
        for (std::size_t a = 0; a < parts_[c].size(); ++a) r.parts_[c][a] += o.parts_[c][a];
    r.central_ += o.central_;
    return r;
}

LoopElem LoopElem::operator*(const ACoeff& s) const {
    LoopElem r = *this;
    for (auto& comp : r.parts_)
        for (auto& f : comp) f = f * s;
    r.central_ *= s;
    return r;
}

LoopElem LoopElem::operator-(const LoopElem& o) const { return *this + o * ACoeff(-1); }

bool LoopElem::operator==(const LoopElem& o) const {
    if (!alg_->same(*o.alg_)) return false;
    for (std::size_t c = 0; c < parts_.size(); ++c)
        for (std::size_t a = 0; a < parts_[c].size(); ++a)
            if (parts_[c][a] != o.parts_[c][a]) return false;
    return central_ == o.central_;
}

std::string LoopElem::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t c = 0; c < parts_.size(); ++c)
        for (std::size_t a = 0; a < parts_[c].size(); ++a) {
            if (parts_[c][a].is_zero()) continue;
            os << (first ? "" : " + ") << alg_->lie().label(static_cast<int>(a));
            if (parts_.size() > 1) os << "[" << c << "]";
            os << "(x)" << parts_[c][a].to_string();
            first = false;
        }
    if (!central_.is_zero()) {
        os << (first ? "" : " + ") << "(" << central_.to_string() << ")*1";
        first = false;
    }
    return first ? "0" : os.str();
}

LoopElem loop_bracket(const LoopElem& x, const LoopElem& y) {
    if (!x.alg_->same(*y.alg_)) throw AffineError("loop elements over different algebras");
    const auto& alg = x.alg_;
    const LieData& g = alg->lie();
    LoopElem r(alg);
    for (int c = 0; c < alg->components(); ++c)
        for (int a = 0; a < g.dim(); ++a) {
            const DiskFun& f = x.parts_[c][a];
            if (f.is_zero()) continue;
            DiskFun df = f.deriv();
            for (int b = 0; b < g.dim(); ++b) {
                const DiskFun& h = y.parts_[c][b];
                if (h.is_zero()) continue;
                const auto& lb = g.bracket(a, b);
                if (!lb.empty()) {
                    DiskFun fh = f * h;
                    for (const auto& [m, s] : lb) r.parts_[c][m] += fh * ACoeff(s);
                }
                if (g.form(a, b) != 0 && alg->level() != 0)
                    r.central_ += (h * df).residue() * (alg->level() * g.form(a, b));
            }
        }
    return r;
}

// ---------------------------------------------------------------- UElem

UElem::UElem(UAlgebraPtr alg, int N) : alg_(std::move(alg)), N_(N) {}

UElem UElem::scalar(UAlgebraPtr alg, int N, const ACoeff& c) {
    UElem r(std::move(alg), N);
    r.add_term({}, c);
    return r;
}

UElem UElem::factor(UAlgebraPtr alg, int N, const Factor& f, const ACoeff& c) {
    check_factor(f);
    UElem r(std::move(alg), N);
    if (f.k < N) r.add_term({f.pack()}, c);
    return r;
}

UElem UElem::from_loop(const LoopElem& x, int N) {
    const auto& alg = x.algebra();
    UElem r(alg, N);
    for (int c = 0; c < alg->components(); ++c)
        for (int a = 0; a < alg->lie().dim(); ++a) {
            const DiskFun& f = x.part(c, a);
            if (f.is_zero()) continue;
            for (const auto& [idx, v] : f.expand_basis()) {
                if (idx.k >= N) continue;
                Factor fa{a, idx.i, idx.k, c};
                check_factor(fa);
                r.add_term({fa.pack()}, v);
            }
        }
    r.add_term({}, x.central_part());
    return r;
}

ACoeff UElem::scalar_part() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? ACoeff() : it->second;
}

int UElem::max_length() const {
    int L = 0;
    for (const auto& [m, c] : terms_) L = std::max(L, static_cast<int>(m.size()));
    return L;
}

int UElem::min_degree() const {
    int k = INT_MAX;
    for (const auto& [m, c] : terms_)
        if (!m.empty()) k = std::min(k, Factor::unpack(m.front()).k);
    return k == INT_MAX ? 0 : k;
}

void UElem::add_term(const Monomial& m, const ACoeff& c) { accumulate(terms_, m, c); }

void UElem::check_same(const UElem& o) const {
    if (!alg_ || !o.alg_ || !alg_->same(*o.alg_)) throw AffineError("enveloping elements over different algebras");
    if (N_ != o.N_)
        throw AffineError("enveloping elements at different truncations " + std::to_string(N_) + " and " +
                          std::to_string(o.N_));
}

UElem UElem::operator+(const UElem& o) const {
    UElem r = *this;
    r += o;
    return r;
}

UElem& UElem::operator+=(const UElem& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c);
    return *this;
}

UElem& UElem::operator-=(const UElem& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) accumulate(terms_, m, -c);
    return *this;
}

UElem UElem::operator-(const UElem& o) const {
    UElem r = *this;
    r -= o;
    return r;
}

UElem UElem::operator-() const { return *this * ACoeff(-1); }

UElem UElem::operator*(const ACoeff& c) const {
    UElem r(alg_, N_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.add_term(m, v * c);
    return r;
}

bool UElem::operator==(const UElem& o) const {
    check_same(o);
    if (terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (const auto& [m, c] : terms_) {
        if (m != it->first || c != it->second) return false;
        ++it;
    }
    return true;
}

UElem UElem::reduce(int M) const {
    if (M > N_) throw AffineError("cannot raise truncation from " + std::to_string(N_) + " to " + std::to_string(M));
    UElem r(alg_, M);
    for (const auto& [m, c] : terms_)
        if (m.empty() || Factor::unpack(m.back()).k < M) r.terms_.emplace(m, c);
    return r;
}

nlohmann::json UElem::to_json() const {
    const LieData& g = alg_->lie();
    int nv = alg_->points(0)->nvars();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : terms_) {
        nlohmann::json fs = nlohmann::json::array();
        for (auto p : m) {
            Factor f = Factor::unpack(p);
            nlohmann::json fj = {g.label(f.a), f.i, f.k};
            if (alg_->components() > 1) fj.push_back(f.comp);
            fs.push_back(fj);
        }
        terms.push_back({{"coeff", c.to_json(nv)}, {"factors", fs}});
    }
    nlohmann::json comps = nlohmann::json::array();
    for (int c = 0; c < alg_->components(); ++c) comps.push_back(alg_->points(c)->labels());
    return {{"lie", g.name()}, {"level", q_to_string(alg_->level())}, {"N", N_}, {"components", comps}, {"terms", terms}};
}

std::string UElem::to_string() const {
    if (terms_.empty()) return "0";
    const LieData& g = alg_->lie();
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        os << (first ? "" : " + ") << "(" << c.to_string() << ")";
        first = false;
        for (auto p : m) {
            Factor f = Factor::unpack(p);
            os << " " << g.label(f.a) << "[" << f.i << "," << f.k;
            if (alg_->components() > 1) os << ";" << f.comp;
            os << "]";
        }
    }
    return os.str();
}

UElem mul_factor(const Factor& x, const UElem& y) {
    check_factor(x);
    const auto& alg = y.algebra();
    UElem r(alg, y.trunc());
    for (const auto& [m, c] : y.terms())
        for (const auto& [t, v] : *alg->mul_factor(x, m, y.trunc())) r.add_term(t, v * c);
    return r;
}

UElem u_mul(const UElem& x, const UElem& y) {
    if (!x.algebra()->same(*y.algebra())) throw AffineError("enveloping elements over different algebras");
    UElem r(y.algebra(), y.trunc());
    for (const auto& [m, c] : x.terms()) {
        UElem t = y * c;
        for (auto it = m.rbegin(); it != m.rend(); ++it) t = mul_factor(Factor::unpack(*it), t);
        r += t;
    }
    return r;
}

UElem u_commutator(const UElem& x, const UElem& y) { return u_mul(x, y) - u_mul(y, x); }

UElem normal_order(UAlgebraPtr alg, const std::vector<Factor>& word, int N) {
    UElem t = UElem::scalar(alg, N, ACoeff(1));
    for (auto it = word.rbegin(); it != word.rend(); ++it) t = mul_factor(*it, t);
    return t;
}

}  // namespace fdisk
