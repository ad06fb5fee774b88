#include "fdisk/twovar.hpp"

#include <climits>
#include <sstream>

namespace fdisk {

namespace {

using Rows = std::vector<ZPoly>;

void trim_rows(Rows& r) {
    for (auto& p : r) zpoly::trim(p);
    while (!r.empty() && r.back().empty()) r.pop_back();
}

Rows rows_add(const Rows& a, const Rows& b) {
    Rows r(std::max(a.size(), b.size()));
    for (std::size_t d = 0; d < r.size(); ++d) {
        if (d < a.size() && d < b.size()) r[d] = zpoly::add(a[d], b[d]);
        else r[d] = d < a.size() ? a[d] : b[d];
    }
    trim_rows(r);
    return r;
}

Rows rows_mul(const Rows& a, const Rows& b) {
    if (a.empty() || b.empty()) return {};
    Rows r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].empty()) r[i + j] = zpoly::add(r[i + j], zpoly::mul(a[i], b[j]));
    }
    trim_rows(r);
    return r;
}

Rows rows_scale(const Rows& a, const ZPoly& w) {
    Rows r(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) r[d] = zpoly::mul(a[d], w);
    trim_rows(r);
    return r;
}

// Multiply by a polynomial in z only.
Rows rows_mul_z(const Rows& a, const ZPoly& p) {
    Rows pz(p.size());
    for (std::size_t d = 0; d < p.size(); ++d) pz[d] = p[d].is_zero() ? ZPoly{} : ZPoly{p[d]};
    return rows_mul(a, pz);
}

// Synthetic division in z by (z - c) where c is a polynomial in w.
bool rows_divide_z(const Rows& a, const ZPoly& c, Rows& q) {
    if (a.empty()) {
        q.clear();
        return true;
    }
    q.assign(a.size() - 1, ZPoly{});
    ZPoly carry;
    for (std::size_t d = a.size(); d-- > 1;) {
        carry = zpoly::add(a[d], zpoly::mul(carry, c));
        q[d - 1] = carry;
    }
    ZPoly rem = zpoly::add(a[0], zpoly::mul(carry, c));
    if (!rem.empty()) return false;
    trim_rows(q);
    return true;
}

bool rows_divide_w(const Rows& a, const ACoeff& c, Rows& q) {
    q.assign(a.size(), ZPoly{});
    for (std::size_t d = 0; d < a.size(); ++d)
        if (!zpoly::divide_linear(a[d], c, q[d])) return false;
    return true;
}

int order_at_z(Rows a, const ACoeff& c) {
    if (a.empty()) return INT_MAX;
    int k = 0;
    Rows q;
    while (rows_divide_z(a, ZPoly{c}, q)) {
        a = std::move(q);
        ++k;
    }
    return k;
}

int order_at_w(Rows a, const ACoeff& c) {
    if (a.empty()) return INT_MAX;
    int k = 0;
    Rows q;
    while (rows_divide_w(a, c, q)) {
        a = std::move(q);
        ++k;
    }
    return k;
}

}  // namespace

Q binomial(long n, long k) {
    if (k < 0 || n < k) return Q(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Q(r);
}

const char* side_name(Side s) { return s == Side::FIRST ? "FIRST" : "SECOND"; }

TwoVar::TwoVar(PointSetPtr ps) : ps_(std::move(ps)), den_z_(ps_->size(), 0), den_w_(ps_->size(), 0) {}

TwoVar::TwoVar(PointSetPtr ps, std::vector<ZPoly> rows, std::vector<int> den_z, std::vector<int> den_w)
    : ps_(std::move(ps)), rows_(std::move(rows)), den_z_(std::move(den_z)), den_w_(std::move(den_w)) {
    den_z_.resize(ps_->size(), 0);
    den_w_.resize(ps_->size(), 0);
    canonicalize();
}

void TwoVar::canonicalize() {
    trim_rows(rows_);
    if (rows_.empty()) {
        std::fill(den_z_.begin(), den_z_.end(), 0);
        std::fill(den_w_.begin(), den_w_.end(), 0);
        return;
    }
    for (int i = 0; i < ps_->size(); ++i) {
        Rows q;
        while (den_z_[i] > 0 && rows_divide_z(rows_, ZPoly{ps_->value(i)}, q)) {
            rows_ = std::move(q);
            --den_z_[i];
        }
        while (den_w_[i] > 0 && rows_divide_w(rows_, ps_->value(i), q)) {
            rows_ = std::move(q);
            --den_w_[i];
        }
    }
}

void TwoVar::check_same(const TwoVar& o) const {
    if (!ps_ || !o.ps_ || !ps_->same(*o.ps_)) throw DiskError("mismatched point sets in two-variable arithmetic");
}

TwoVar TwoVar::tensor(const DiskFun& p, const DiskFun& q) {
    const auto& ps = p.points();
    if (!ps->same(*q.points())) throw DiskError("mismatched point sets in tensor");
    Rows r(p.num().size());
    for (std::size_t d = 0; d < r.size(); ++d) r[d] = zpoly::scale(q.num(), p.num()[d]);
    return TwoVar(ps, r, p.den(), q.den());
}

TwoVar TwoVar::constant(PointSetPtr ps, const ACoeff& c) {
    return TwoVar(ps, Rows{ZPoly{c}}, {}, {});
}

TwoVar TwoVar::diagonal(PointSetPtr ps) {
    return TwoVar(ps, Rows{ZPoly{ACoeff(), ACoeff(-1)}, ZPoly{ACoeff(1)}}, {}, {});
}

TwoVar TwoVar::h_poly(PointSetPtr ps) {
    const ZPoly& phi = ps->phi();
    Rows r(phi.size() > 1 ? phi.size() - 1 : 0);
    for (std::size_t s = 1; s < phi.size(); ++s)
        for (std::size_t t = 0; t < s; ++t) {
            ZPoly& row = r[t];
            std::size_t wd = s - 1 - t;
            if (row.size() <= wd) row.resize(wd + 1);
            row[wd] += phi[s];
        }
    return TwoVar(ps, r, {}, {});
}

TwoVar TwoVar::operator+(const TwoVar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    check_same(o);
    int n = ps_->size();
    std::vector<int> dz(n), dw(n);
    Rows a = rows_, b = o.rows_;
    for (int i = 0; i < n; ++i) {
        dz[i] = std::max(den_z_[i], o.den_z_[i]);
        dw[i] = std::max(den_w_[i], o.den_w_[i]);
        ZPoly l = zpoly::linear(ps_->value(i));
        if (dz[i] > den_z_[i]) a = rows_mul_z(a, zpoly::pow(l, dz[i] - den_z_[i]));
        if (dz[i] > o.den_z_[i]) b = rows_mul_z(b, zpoly::pow(l, dz[i] - o.den_z_[i]));
        if (dw[i] > den_w_[i]) a = rows_scale(a, zpoly::pow(l, dw[i] - den_w_[i]));
        if (dw[i] > o.den_w_[i]) b = rows_scale(b, zpoly::pow(l, dw[i] - o.den_w_[i]));
    }
    return TwoVar(ps_, rows_add(a, b), dz, dw);
}

TwoVar TwoVar::operator-() const { return *this * ACoeff(-1); }

TwoVar TwoVar::operator-(const TwoVar& o) const { return *this + (-o); }

TwoVar TwoVar::operator*(const TwoVar& o) const {
    if (is_zero()) return *this;
    if (o.is_zero()) return o;
    check_same(o);
    std::vector<int> dz(den_z_), dw(den_w_);
    for (std::size_t i = 0; i < dz.size(); ++i) {
        dz[i] += o.den_z_[i];
        dw[i] += o.den_w_[i];
    }
    return TwoVar(ps_, rows_mul(rows_, o.rows_), dz, dw);
}

TwoVar TwoVar::operator*(const ACoeff& c) const {
    if (c.is_zero()) return TwoVar(ps_);
    TwoVar r = *this;
    for (auto& row : r.rows_) row = zpoly::scale(row, c);
    return r;
}

bool TwoVar::operator==(const TwoVar& o) const {
    if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
    check_same(o);
    if (den_z_ != o.den_z_ || den_w_ != o.den_w_ || rows_.size() != o.rows_.size()) return false;
    for (std::size_t d = 0; d < rows_.size(); ++d)
        if (!zpoly::equal(rows_[d], o.rows_[d])) return false;
    return true;
}

TwoVar TwoVar::pow(int e) const {
    if (e < 0) throw DiskError("negative power of a two-variable element");
    TwoVar r = constant(ps_, ACoeff(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

TwoVar TwoVar::swap() const {
    std::size_t wmax = 0;
    for (const auto& row : rows_) wmax = std::max(wmax, row.size());
    Rows r(wmax, ZPoly(rows_.size()));
    for (std::size_t d = 0; d < rows_.size(); ++d)
        for (std::size_t e = 0; e < rows_[d].size(); ++e) r[e][d] = rows_[d][e];
    return TwoVar(ps_, r, den_w_, den_z_);
}

TwoVar TwoVar::divide_by_diagonal() const {
    // root z = w, i.e. c = w as a polynomial in w
    Rows q;
    if (!rows_divide_z(rows_, ZPoly{ACoeff(), ACoeff(1)}, q)) throw DiskError("not divisible by z - w");
    return TwoVar(ps_, q, den_z_, den_w_);
}

bool TwoVar::divisible_by_diagonal(int k) const {
    Rows a = rows_, q;
    for (int t = 0; t < k; ++t) {
        if (a.empty()) return true;
        if (!rows_divide_z(a, ZPoly{ACoeff(), ACoeff(1)}, q)) return false;
        a = std::move(q);
    }
    return true;
}

int TwoVar::phi_order_z() const {
    if (is_zero()) return INT_MAX;
    int best = INT_MAX;
    for (int i = 0; i < ps_->size(); ++i) best = std::min(best, order_at_z(rows_, ps_->value(i)) - den_z_[i]);
    return best;
}

int TwoVar::phi_order_w() const {
    if (is_zero()) return INT_MAX;
    int best = INT_MAX;
    for (int i = 0; i < ps_->size(); ++i) best = std::min(best, order_at_w(rows_, ps_->value(i)) - den_w_[i]);
    return best;
}

DiskFun TwoVar::int_z() const {
    DiskFun acc(ps_);
    DiskFun wden = DiskFun::constant(ps_, 1);
    std::vector<int> dw = den_w_;
    // residue_z(z^d / Dz) as a coefficient, times the w-polynomial row
    for (std::size_t d = 0; d < rows_.size(); ++d) {
        if (rows_[d].empty()) continue;
        ACoeff r = (DiskFun::z_power(ps_, static_cast<int>(d)) * DiskFun(ps_, ZPoly{ACoeff(1)}, den_z_)).residue();
        if (!r.is_zero()) acc += DiskFun(ps_, zpoly::scale(rows_[d], r), dw);
    }
    return acc;
}

std::vector<std::pair<DiskFun, DiskFun>> TwoVar::separable() const {
    std::vector<std::pair<DiskFun, DiskFun>> out;
    for (std::size_t d = 0; d < rows_.size(); ++d) {
        if (rows_[d].empty()) continue;
        ZPoly zd(d + 1);
        zd[d] = ACoeff(1);
        out.emplace_back(DiskFun(ps_, zd, den_z_), DiskFun(ps_, rows_[d], den_w_));
    }
    return out;
}

std::string TwoVar::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, q] : separable()) {
        os << (first ? "" : " + ") << p.to_string() << " (x) " << q.to_string();
        first = false;
    }
    return first ? "0" : os.str();
}

TwoVar taylor(const DiskFun& f, int N) {
    if (N < 0) throw DiskError("Taylor order must be nonnegative");
    const auto& ps = f.points();
    TwoVar diag = TwoVar::diagonal(ps), dpow = TwoVar::constant(ps, 1);
    TwoVar acc(ps);
    DiskFun fk = f;
    Q fact(1);
    DiskFun one = DiskFun::constant(ps, 1);
    for (int k = 0; k <= N; ++k) {
        if (k > 0) {
            fk = fk.deriv();
            fact *= k;
            dpow = dpow * diag;
        }
        acc += dpow * TwoVar::tensor(one, fk * ACoeff(Q(1) / fact));
    }
    return acc;
}

ExpansionSeries::ExpansionSeries(PointSetPtr ps, Side side, int m, int order)
    : ps_(std::move(ps)), side_(side), m_(m), order_(order) {
    if (m >= 0) throw DiskError("expansion power must be negative");
    if (order < 0) throw DiskError("expansion order must be nonnegative");
    int r = -m;
    TwoVar h = TwoVar::h_poly(ps_);
    if (side_ == Side::FIRST) h = -h;
    pre_ = h.pow(r).separable();
    terms_ = TwoVar(ps_);
    for (int J = 0; J <= order_; ++J)
        for (const auto& [p, q] : layer(J)) terms_ += TwoVar::tensor(p, q);
}

Q ExpansionSeries::layer_coefficient(int J) const { return binomial(J - m_ - 1, -m_ - 1); }

std::vector<std::pair<DiskFun, DiskFun>> ExpansionSeries::layer(int J) const {
    int r = -m_;
    DiskFun pos = DiskFun::phi_power(ps_, J), neg = DiskFun::phi_power(ps_, -J - r);
    ACoeff c(layer_coefficient(J));
    std::vector<std::pair<DiskFun, DiskFun>> out;
    for (const auto& [p, q] : pre_) {
        if (side_ == Side::SECOND) out.emplace_back(p * neg * c, q * pos);
        else out.emplace_back(p * pos * c, q * neg);
    }
    return out;
}

bool ExpansionSeries::verify() const {
    TwoVar resid = TwoVar::diagonal(ps_).pow(-m_) * terms_ - TwoVar::constant(ps_, 1);
    if (resid.is_zero()) return true;
    if (side_ == Side::SECOND) return resid.phi_order_w() >= order_ + 1;
    return resid.phi_order_z() >= order_ + 1;
}

}  // namespace fdisk
