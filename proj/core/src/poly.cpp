#include "fdisk/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fdisk {

Mono Mono::var(int v, int e) {
    if (v < 0 || v >= kMaxVars) throw std::out_of_range("variable index out of range");
    if (e < 0 || e > kMaxExp) throw std::overflow_error("exponent out of range");
    return Mono{static_cast<std::uint64_t>(e) << (8 * v)};
}

int Mono::total() const {
    int s = 0;
    for (int v = 0; v < kMaxVars; ++v) s += exp(v);
    return s;
}

Mono Mono::operator*(const Mono& o) const {
    // per-byte add with overflow detection
    std::uint64_t r = 0;
    for (int v = 0; v < kMaxVars; ++v) {
        int e = exp(v) + o.exp(v);
        if (e > kMaxExp) throw std::overflow_error("monomial exponent overflow");
        r |= static_cast<std::uint64_t>(e) << (8 * v);
    }
    return Mono{r};
}

bool Mono::divides(const Mono& o) const {
    for (int v = 0; v < kMaxVars; ++v)
        if (exp(v) > o.exp(v)) return false;
    return true;
}

Mono Mono::operator/(const Mono& o) const { return Mono{key - o.key}; }

Mono Mono::with(int v, int e) const {
    std::uint64_t mask = ~(static_cast<std::uint64_t>(0xff) << (8 * v));
    return Mono{(key & mask) | (static_cast<std::uint64_t>(e) << (8 * v))};
}

std::vector<int> Mono::degrees(int nvars) const {
    std::vector<int> d(nvars);
    for (int v = 0; v < nvars; ++v) d[v] = exp(v);
    return d;
}

Mono Mono::from_degrees(const std::vector<int>& d) {
    Mono m;
    for (std::size_t v = 0; v < d.size(); ++v)
        if (d[v]) m = m * Mono::var(static_cast<int>(v), d[v]);
    return m;
}

Poly::Poly(const Q& c) {
    if (c != 0) terms_.emplace_back(Mono{}, c);
}

Poly Poly::var(int v) { return monomial(Mono::var(v), Q(1)); }

Poly Poly::monomial(const Mono& m, const Q& c) {
    Poly p;
    if (c != 0) p.terms_.emplace_back(m, c);
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.key == 0); }

Q Poly::constant_term() const {
    if (!terms_.empty() && terms_[0].first.key == 0) return terms_[0].second;
    return Q(0);
}

Q Poly::coeff(const Mono& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Mono& x) { return t.first < x; });
    if (it != terms_.end() && it->first == m) return it->second;
    return Q(0);
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.first.total());
    return d;
}

int Poly::low_degree() const {
    if (terms_.empty()) return -1;
    int d = 1 << 20;
    for (const auto& t : terms_) d = std::min(d, t.first.total());
    return d;
}

int Poly::degree_in(int v) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& t : terms_) d = std::max(d, t.first.exp(v));
    return d;
}

int Poly::nvars_used() const {
    int n = 0;
    for (const auto& t : terms_)
        for (int v = 0; v < kMaxVars; ++v)
            if (t.first.exp(v)) n = std::max(n, v + 1);
    return n;
}

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms_.size();) {
        Mono m = terms_[r].first;
        Q c = terms_[r].second;
        std::size_t s = r + 1;
        while (s < terms_.size() && terms_[s].first == m) c += terms_[s++].second;
        if (c != 0) {
            terms_[w].first = m;
            terms_[w].second = c;
            ++w;
        }
        r = s;
    }
    terms_.resize(w);
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
            r.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Q c = terms_[i].second + o.terms_[j].second;
            if (c != 0) r.terms_.emplace_back(terms_[i].first, c);
            ++i;
            ++j;
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Q& c) const {
    if (c == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (terms_.empty() || o.terms_.empty()) return Poly();
    if (o.terms_.size() == 1 && o.terms_[0].first.key == 0) return *this * o.terms_[0].second;
    if (terms_.size() == 1 && terms_[0].first.key == 0) return o * terms_[0].second;
    Poly r;
    r.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) r.terms_.emplace_back(a.first * b.first, a.second * b.second);
    r.normalize();
    return r;
}

Poly& Poly::operator+=(const Poly& o) { return *this = *this + o; }
Poly& Poly::operator-=(const Poly& o) { return *this = *this - o; }
Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].first == o.terms_[i].first) || terms_[i].second != o.terms_[i].second) return false;
    return true;
}

Poly Poly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power of polynomial");
    Poly r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

Poly Poly::truncated(int D) const {
    Poly r;
    for (const auto& t : terms_)
        if (t.first.total() <= D) r.terms_.push_back(t);
    return r;
}

Poly Poly::mul_truncated(const Poly& o, int D) const {
    Poly r;
    for (const auto& a : terms_) {
        int da = a.first.total();
        if (da > D) continue;
        for (const auto& b : o.terms_)
            if (da + b.first.total() <= D) r.terms_.emplace_back(a.first * b.first, a.second * b.second);
    }
    r.normalize();
    return r;
}

Poly Poly::homogeneous_part(int d) const {
    Poly r;
    for (const auto& t : terms_)
        if (t.first.total() == d) r.terms_.push_back(t);
    return r;
}

Poly Poly::derivative(int v) const {
    Poly r;
    for (const auto& t : terms_) {
        int e = t.first.exp(v);
        if (e == 0) continue;
        r.terms_.emplace_back(t.first.with(v, e - 1), t.second * e);
    }
    r.normalize();
    return r;
}

std::vector<Poly> Poly::collect(int v) const {
    std::vector<Poly> out(std::max(0, degree_in(v) + 1));
    for (const auto& t : terms_) {
        int e = t.first.exp(v);
        out[e].terms_.emplace_back(t.first.with(v, 0), t.second);
    }
    for (auto& p : out) p.normalize();
    return out;
}

Poly Poly::substitute(int v, const Poly& p) const {
    auto parts = collect(v);
    Poly r;
    for (int d = static_cast<int>(parts.size()) - 1; d >= 0; --d) r = r * p + parts[d];
    return r;
}

Poly Poly::substitute_all(const std::vector<Poly>& images) const {
    Poly r;
    std::vector<std::vector<Poly>> powers(images.size());
    for (const auto& t : terms_) {
        Poly term(t.second);
        Mono rest = t.first;
        for (std::size_t v = 0; v < images.size(); ++v) {
            int e = t.first.exp(static_cast<int>(v));
            if (!e) continue;
            rest = rest.with(static_cast<int>(v), 0);
            auto& pw = powers[v];
            if (pw.empty()) pw.push_back(Poly(1));
            while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[v]);
            term *= pw[e];
        }
        r += term * Poly::monomial(rest, Q(1));
    }
    return r;
}

bool Poly::divide_by_difference(int i, int j, Poly& quotient) const {
    // Synthetic division in x_i with root x_i = x_j.
    auto c = collect(i);
    if (c.empty()) {
        quotient = Poly();
        return true;
    }
    Poly xj = Poly::var(j);
    int d = static_cast<int>(c.size()) - 1;
    std::vector<Poly> q(std::max(d, 0));
    Poly carry;
    for (int k = d; k >= 1; --k) {
        carry = c[k] + carry * xj;
        q[k - 1] = carry;
    }
    Poly rem = c[0] + carry * xj;
    if (!rem.is_zero()) return false;
    Poly xi = Poly::var(i);
    Poly r;
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) r = r * xi + q[k];
    quotient = r;
    return true;
}

std::string q_to_string(const Q& q) { return q.get_str(); }

Q q_from_string(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
    q.canonicalize();
    return q;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Q c = t.second;
        bool neg = c < 0;
        if (neg) c = -c;
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        bool unit = (c == 1);
        if (!unit || t.first.key == 0) os << c.get_str();
        bool need_star = !unit || t.first.key == 0;
        for (int v = 0; v < kMaxVars; ++v) {
            int e = t.first.exp(v);
            if (!e) continue;
            if (need_star) os << "*";
            need_star = true;
            if (v < static_cast<int>(names.size()))
                os << names[v];
            else
                os << "a" << (v + 1);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace fdisk
