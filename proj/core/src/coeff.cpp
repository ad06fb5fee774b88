#include "fdisk/coeff.hpp"

#include <sstream>

namespace fdisk {

int pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= kMaxPoints || i == j) throw CoeffError("invalid difference factor");
    return i * (2 * kMaxPoints - i - 1) / 2 + (j - i - 1);
}

namespace {

std::pair<int, int> pair_of(int idx) {
    for (int i = 0; i < kMaxPoints; ++i)
        for (int j = i + 1; j < kMaxPoints; ++j)
            if (pair_index(i, j) == idx) return {i, j};
    throw CoeffError("bad pair index");
}

Poly difference(int p) {
    auto [i, j] = pair_of(p);
    return Poly::var(i) - Poly::var(j);
}

}  // namespace

std::string mode_name(ACoeff::Mode m) {
    switch (m) {
        case ACoeff::Mode::POLY: return "POLY";
        case ACoeff::Mode::LOCALIZED: return "LOCALIZED";
        case ACoeff::Mode::TRUNCATED: return "TRUNCATED";
    }
    return "?";
}

ACoeff ACoeff::localized(Poly num, const std::array<int, kNumPairs>& den) {
    ACoeff r;
    r.mode_ = Mode::LOCALIZED;
    r.num_ = std::move(num);
    r.den_ = den;
    for (int m : den)
        if (m < 0) throw CoeffError("negative denominator multiplicity");
    r.canonicalize();
    return r;
}

ACoeff ACoeff::truncated(Poly p, int D) {
    if (D < 0) throw CoeffError("negative truncation degree");
    ACoeff r;
    r.mode_ = Mode::TRUNCATED;
    r.D_ = D;
    r.num_ = p.truncated(D);
    return r;
}

ACoeff ACoeff::inv_difference(int i, int j) {
    std::array<int, kNumPairs> den{};
    den[pair_index(i, j)] = 1;
    Poly num = (i < j) ? Poly(1) : Poly(-1);
    return localized(num, den);
}

bool ACoeff::has_denominator() const {
    if (mode_ != Mode::LOCALIZED) return false;
    for (int m : den_)
        if (m) return true;
    return false;
}

Q ACoeff::constant_value() const {
    if (!is_constant()) throw CoeffError("coefficient is not a rational constant: " + to_string());
    return num_.constant_term();
}

const Poly& ACoeff::as_poly() const {
    if (has_denominator()) throw CoeffError("coefficient has a denominator: " + to_string());
    return num_;
}

void ACoeff::canonicalize() {
    if (mode_ == Mode::TRUNCATED) {
        num_ = num_.truncated(D_);
        return;
    }
    if (mode_ != Mode::LOCALIZED) return;
    if (num_.is_zero()) {
        den_.fill(0);
        return;
    }
    for (int p = 0; p < kNumPairs; ++p) {
        if (!den_[p]) continue;
        auto [i, j] = pair_of(p);
        Poly q;
        while (den_[p] > 0 && num_.divide_by_difference(i, j, q)) {
            num_ = std::move(q);
            --den_[p];
        }
    }
}

void ACoeff::promote(ACoeff& x, ACoeff& y) {
    if (x.mode_ == y.mode_) {
        if (x.mode_ == Mode::TRUNCATED && x.D_ != y.D_) {
            int D = std::min(x.D_, y.D_);
            x = truncated(x.num_, D);
            y = truncated(y.num_, D);
        }
        return;
    }
    if ((x.mode_ == Mode::LOCALIZED && y.mode_ == Mode::TRUNCATED) ||
        (x.mode_ == Mode::TRUNCATED && y.mode_ == Mode::LOCALIZED))
        throw CoeffError("mode clash: LOCALIZED and TRUNCATED coefficients cannot be combined");
    if (x.mode_ == Mode::POLY) {
        if (y.mode_ == Mode::LOCALIZED) x = x.to_localized();
        else x = x.to_truncated(y.D_);
    } else {
        if (x.mode_ == Mode::LOCALIZED) y = y.to_localized();
        else y = y.to_truncated(x.D_);
    }
}

ACoeff ACoeff::to_truncated(int D) const {
    if (mode_ == Mode::LOCALIZED && has_denominator())
        throw CoeffError("mode clash: LOCALIZED value cannot be truncated implicitly");
    if (mode_ == Mode::TRUNCATED) return truncated(num_, std::min(D, D_));
    return truncated(num_, D);
}

ACoeff ACoeff::to_localized() const {
    if (mode_ == Mode::TRUNCATED) throw CoeffError("mode clash: TRUNCATED value cannot be localized");
    if (mode_ == Mode::LOCALIZED) return *this;
    ACoeff r = *this;
    r.mode_ = Mode::LOCALIZED;
    r.den_.fill(0);
    return r;
}

ACoeff ACoeff::operator-() const {
    ACoeff r = *this;
    r.num_ = -r.num_;
    return r;
}

ACoeff ACoeff::operator*(const Q& c) const {
    ACoeff r = *this;
    r.num_ = r.num_ * c;
    if (r.num_.is_zero()) r.den_.fill(0);
    return r;
}

ACoeff ACoeff::operator+(const ACoeff& o) const {
    if (o.is_zero() && o.mode_ == Mode::POLY) return *this;
    if (is_zero() && mode_ == Mode::POLY) return o;
    ACoeff x = *this, y = o;
    promote(x, y);
    if (x.mode_ == Mode::POLY) {
        x.num_ += y.num_;
        return x;
    }
    if (x.mode_ == Mode::TRUNCATED) {
        x.num_ += y.num_;
        return x;
    }
    if (x.num_.is_zero()) return y;
    if (y.num_.is_zero()) return x;
    std::array<int, kNumPairs> den{};
    Poly nx = x.num_, ny = y.num_;
    for (int p = 0; p < kNumPairs; ++p) {
        den[p] = std::max(x.den_[p], y.den_[p]);
        if (den[p] > x.den_[p]) nx *= difference(p).pow(den[p] - x.den_[p]);
        if (den[p] > y.den_[p]) ny *= difference(p).pow(den[p] - y.den_[p]);
    }
    return localized(nx + ny, den);
}

ACoeff ACoeff::operator-(const ACoeff& o) const { return *this + (-o); }

ACoeff ACoeff::operator*(const ACoeff& o) const {
    if (o.mode_ == Mode::POLY && o.num_.is_constant()) return *this * o.num_.constant_term();
    if (mode_ == Mode::POLY && num_.is_constant()) return o * num_.constant_term();
    ACoeff x = *this, y = o;
    promote(x, y);
    if (x.mode_ == Mode::POLY) {
        x.num_ *= y.num_;
        return x;
    }
    if (x.mode_ == Mode::TRUNCATED) {
        x.num_ = x.num_.mul_truncated(y.num_, x.D_);
        return x;
    }
    std::array<int, kNumPairs> den{};
    for (int p = 0; p < kNumPairs; ++p) den[p] = x.den_[p] + y.den_[p];
    return localized(x.num_ * y.num_, den);
}

ACoeff& ACoeff::operator+=(const ACoeff& o) { return *this = *this + o; }
ACoeff& ACoeff::operator-=(const ACoeff& o) { return *this = *this - o; }
ACoeff& ACoeff::operator*=(const ACoeff& o) { return *this = *this * o; }

bool ACoeff::operator==(const ACoeff& o) const {
    if (mode_ == o.mode_ && mode_ != Mode::TRUNCATED) return num_ == o.num_ && den_ == o.den_;
    ACoeff x = *this, y = o;
    promote(x, y);
    return x.num_ == y.num_ && x.den_ == y.den_;
}

ACoeff ACoeff::pow(int e) const {
    if (e < 0) return invert().pow(-e);
    ACoeff r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

ACoeff ACoeff::invert() const {
    if (mode_ == Mode::TRUNCATED) {
        Q c0 = num_.constant_term();
        if (c0 == 0) throw CoeffError("non-unit: truncated series has constant term 0");
        // x = c0 (1 + y), 1/x = (1/c0) sum (-y)^k
        Q ic = 1 / c0;
        Poly y = (num_ - Poly(c0)) * ic;
        Poly acc(1), term(1);
        for (int k = 1; k <= D_; ++k) {
            term = term.mul_truncated(-y, D_);
            if (term.is_zero()) break;
            acc += term;
        }
        return truncated(acc * ic, D_);
    }
    if (num_.is_zero()) throw CoeffError("non-unit: zero has no inverse");
    // Strip difference factors from the numerator; what remains must be a rational constant.
    Poly rest = num_;
    std::array<int, kNumPairs> stripped{};
    int nv = rest.nvars_used();
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j) {
            Poly q;
            while (!rest.is_constant() && rest.divide_by_difference(i, j, q)) {
                rest = std::move(q);
                ++stripped[pair_index(i, j)];
            }
        }
    if (!rest.is_constant())
        throw CoeffError("non-unit: coefficient " + to_string() + " has constant term " +
                         q_to_string(num_.constant_term()) + " and is not a unit");
    Q c = rest.constant_term();
    bool any = false;
    for (int m : stripped) any = any || m;
    if (!any && mode_ == Mode::POLY) return ACoeff(Q(1) / c);
    Poly inv_num(Q(1) / c);
    for (int p = 0; p < kNumPairs; ++p)
        if (mode_ == Mode::LOCALIZED && den_[p]) inv_num *= difference(p).pow(den_[p]);
    return localized(inv_num, stripped);
}

ACoeff ACoeff::substitute(const std::vector<Poly>& images) const {
    if (mode_ == Mode::TRUNCATED) return truncated(num_.substitute_all(images), D_);
    ACoeff r(num_.substitute_all(images));
    if (mode_ == Mode::POLY) return r;
    r = r.to_localized();
    ACoeff out = r;
    for (int p = 0; p < kNumPairs; ++p) {
        if (!den_[p]) continue;
        auto [i, j] = pair_of(p);
        Poly d = images.at(i) - images.at(j);
        ACoeff dinv = ACoeff(d).invert();
        out *= dinv.pow(den_[p]).to_localized();
    }
    return out;
}

std::string ACoeff::to_string() const {
    std::string s = num_.to_string();
    if (mode_ == Mode::LOCALIZED && has_denominator()) {
        std::ostringstream os;
        os << "(" << s << ")/(";
        bool first = true;
        for (int p = 0; p < kNumPairs; ++p) {
            if (!den_[p]) continue;
            auto [i, j] = pair_of(p);
            if (!first) os << "*";
            first = false;
            os << "(a" << i + 1 << "-a" << j + 1 << ")";
            if (den_[p] > 1) os << "^" << den_[p];
        }
        os << ")";
        return os.str();
    }
    if (mode_ == Mode::TRUNCATED) s += " + O(deg " + std::to_string(D_ + 1) + ")";
    return s;
}

nlohmann::json ACoeff::to_json(int nvars) const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : num_.terms()) terms.push_back({q_to_string(c), m.degrees(nvars)});
    nlohmann::json j = {{"mode", mode_name(mode_)}, {"terms", terms}};
    if (mode_ == Mode::LOCALIZED) {
        nlohmann::json den = nlohmann::json::array();
        for (int p = 0; p < kNumPairs; ++p)
            if (den_[p]) {
                auto [a, b] = pair_of(p);
                den.push_back({a, b, den_[p]});
            }
        j["den"] = den;
    }
    if (mode_ == Mode::TRUNCATED) j["D"] = D_;
    return j;
}

ACoeff ACoeff::from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return ACoeff(Q(j.get<long>()));
    if (j.is_string()) return ACoeff(q_from_string(j.get<std::string>()));
    Poly p;
    for (const auto& t : j.at("terms")) {
        Q c = q_from_string(t.at(0).get<std::string>());
        p += Poly::monomial(Mono::from_degrees(t.at(1).get<std::vector<int>>()), c);
    }
    std::string mode = j.value("mode", "POLY");
    if (mode == "POLY") return ACoeff(p);
    if (mode == "TRUNCATED") return truncated(p, j.at("D").get<int>());
    if (mode == "LOCALIZED") {
        std::array<int, kNumPairs> den{};
        if (j.contains("den"))
            for (const auto& d : j.at("den")) {
                int a = d.at(0).get<int>(), b = d.at(1).get<int>(), m = d.at(2).get<int>();
                den[pair_index(a, b)] += m;
                if (a > b && (m % 2)) p = -p;
            }
        return localized(p, den);
    }
    throw CoeffError("unknown coefficient mode: " + mode);
}

}  // namespace fdisk
