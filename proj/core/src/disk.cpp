#include "fdisk/disk.hpp"

#include <climits>
#include <sstream>

namespace fdisk {

namespace zpoly {

void trim(ZPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size()) r[i] = a[i] + b[i];
        else if (i < a.size()) r[i] = a[i];
        else r[i] = b[i];
    }
    trim(r);
    return r;
}

ZPoly scale(const ZPoly& a, const ACoeff& c) {
    if (c.is_zero()) return {};
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    trim(r);
    return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) { return add(a, scale(b, ACoeff(-1))); }

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

ZPoly deriv(const ZPoly& a) {
    if (a.size() <= 1) return {};
    ZPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Q(static_cast<long>(i));
    trim(r);
    return r;
}

ZPoly pow(const ZPoly& a, int e) {
    ZPoly r{ACoeff(1)}, b = a;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

ZPoly linear(const ACoeff& c) {
    ZPoly r{-c, ACoeff(1)};
    return r;
}

ACoeff eval(const ZPoly& a, const ACoeff& x) {
    ACoeff r;
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

void divmod_monic(const ZPoly& a, const ZPoly& m, ZPoly& q, ZPoly& r) {
    std::size_t dm = m.size() - 1;
    r = a;
    if (r.size() <= dm) {
        q.clear();
        return;
    }
    q.assign(r.size() - dm, ACoeff());
    for (std::size_t i = r.size(); i-- > dm;) {
        ACoeff c = r[i];
        if (c.is_zero()) continue;
        q[i - dm] = c;
        for (std::size_t j = 0; j <= dm; ++j) r[i - dm + j] -= c * m[j];
    }
    r.resize(dm);
    trim(r);
    trim(q);
}

bool divide_linear(const ZPoly& a, const ACoeff& c, ZPoly& q) {
    if (a.empty()) {
        q.clear();
        return true;
    }
    q.assign(a.size() - 1, ACoeff());
    ACoeff carry;
    for (std::size_t i = a.size(); i-- > 1;) {
        carry = a[i] + carry * c;
        q[i - 1] = carry;
    }
    ACoeff rem = a[0] + carry * c;
    if (!rem.is_zero()) return false;
    trim(q);
    return true;
}

ZPoly compose(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    for (std::size_t i = a.size(); i-- > 0;) r = add(mul(r, b), ZPoly{a[i]});
    return r;
}

bool equal(const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace zpoly

// ---------------------------------------------------------------- PointSet

std::shared_ptr<const PointSet> PointSet::symbolic(int n) {
    if (n < 1 || n > kMaxPoints) throw DiskError("point count must be between 1 and " + std::to_string(kMaxPoints));
    std::vector<std::string> labels;
    std::vector<ACoeff> values;
    for (int i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i + 1));
        values.push_back(ACoeff::point(i));
    }
    return make(labels, values, n);
}

std::shared_ptr<const PointSet> PointSet::rational(const std::vector<Q>& vals) {
    std::vector<std::string> labels;
    std::vector<ACoeff> values;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        labels.push_back(std::to_string(i + 1));
        values.push_back(ACoeff(vals[i]));
    }
    return make(labels, values, 0);
}

std::shared_ptr<const PointSet> PointSet::make(std::vector<std::string> labels, std::vector<ACoeff> values,
                                               int nvars) {
    if (labels.empty() || labels.size() != values.size()) throw DiskError("point set needs matching labels and values");
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            if (labels[i] == labels[j]) throw DiskError("duplicate point label " + labels[i]);
            if (values[i] == values[j]) throw DiskError("points " + labels[i] + " and " + labels[j] + " coincide");
        }
    std::shared_ptr<PointSet> ps(new PointSet());
    ps->labels_ = std::move(labels);
    ps->values_ = std::move(values);
    ps->nvars_ = nvars;
    ps->build();
    return ps;
}

int PointSet::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    throw DiskError("unknown point label " + label);
}

bool PointSet::same(const PointSet& o) const {
    if (this == &o) return true;
    if (size() != o.size() || nvars_ != o.nvars_) return false;
    for (int i = 0; i < size(); ++i)
        if (labels_[i] != o.labels_[i] || values_[i] != o.values_[i]) return false;
    return true;
}

std::vector<ACoeff> PointSet::e_coordinates(const ZPoly& r) const {
    int n = size();
    if (static_cast<int>(r.size()) > n) throw DiskError("polynomial degree too large for e-coordinates");
    ZPoly rest = r;
    std::vector<ACoeff> c(n);
    for (int i = n; i >= 1; --i) {
        const ZPoly& ei = e_[i - 1];
        if (static_cast<int>(rest.size()) < i) continue;
        ACoeff lead = ei.back();  // rational binomial coefficient
        ACoeff ci = rest[i - 1] * lead.invert();
        c[i - 1] = ci;
        rest = zpoly::sub(rest, zpoly::scale(ei, ci));
    }
    if (!rest.empty()) throw DiskError("e-coordinate reduction failed");
    return c;
}

void PointSet::build() {
    int n = size();
    phi_ = ZPoly{ACoeff(1)};
    for (int i = 0; i < n; ++i) phi_ = zpoly::mul(phi_, zpoly::linear(values_[i]));
    // elementary symmetric polynomials in (z - a_j)
    std::vector<ZPoly> E(n + 1);
    E[0] = ZPoly{ACoeff(1)};
    for (int j = 0; j < n; ++j) {
        ZPoly lj = zpoly::linear(values_[j]);
        for (int m = j + 1; m >= 1; --m) E[m] = zpoly::add(E[m], zpoly::mul(lj, E[m - 1]));
    }
    e_.assign(E.begin(), E.begin() + n);

    auto residue_over_phi = [&](const ZPoly& num) {
        ZPoly q, r;
        zpoly::divmod_monic(num, phi_, q, r);
        return static_cast<int>(r.size()) >= n ? r[n - 1] : ACoeff();
    };
    S_.assign(n, std::vector<ACoeff>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S_[i][j] = residue_over_phi(zpoly::mul(e_[i], e_[j]));

    // S is anti-triangular with rational anti-diagonal; T = S J is lower triangular.
    std::vector<std::vector<ACoeff>> T(n, std::vector<ACoeff>(n)), X(n, std::vector<ACoeff>(n));
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) T[i][m] = S_[i][n - 1 - m];
    for (int i = 0; i < n; ++i) {
        for (int m = i + 1; m < n; ++m)
            if (!T[i][m].is_zero()) throw DiskError("residue matrix S is not anti-triangular");
        if (!T[i][i].is_constant() || T[i][i].is_zero()) throw DiskError("residue matrix S is singular");
    }
    for (int c = 0; c < n; ++c)
        for (int m = 0; m < n; ++m) {
            ACoeff acc = (m == c) ? ACoeff(1) : ACoeff();
            for (int p = 0; p < m; ++p) acc -= T[m][p] * X[p][c];
            X[m][c] = acc * T[m][m].invert();
        }
    lambda_.assign(n, std::vector<ACoeff>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) lambda_[r][c] = X[n - 1 - r][c];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ACoeff acc;
            for (int m = 0; m < n; ++m) acc += lambda_[i][m] * S_[m][j];
            if (acc != ACoeff(i == j ? 1 : 0)) throw DiskError("dual basis inversion check failed");
        }

    prod_.assign(n, std::vector<std::vector<ProductTerm>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ZPoly q, r;
            zpoly::divmod_monic(zpoly::mul(e_[i], e_[j]), phi_, q, r);
            auto c0 = e_coordinates(r);
            auto c1 = e_coordinates(q);
            for (int m = 0; m < n; ++m) {
                if (!c0[m].is_zero()) prod_[i][j].push_back({m + 1, 0, c0[m]});
                if (!c1[m].is_zero()) prod_[i][j].push_back({m + 1, 1, c1[m]});
            }
        }
}

ACoeff PointSet::cocycle(int i, int k, int j, int l) const {
    int s = k + l;
    if (s >= 1) return ACoeff();
    // residue(e_j e_i' phi^s) + k residue(e_i e_j phi' phi^(s-1)); depends on (i, j, s) and linearly on k
    std::tuple<int, int, int, int> ka{i, j, s, 0}, kb{i, j, s, 1};
    ACoeff A, B;
    {
        std::lock_guard<std::mutex> lock(memo_mu_);
        auto ia = cocycle_memo_.find(ka);
        auto ib = cocycle_memo_.find(kb);
        if (ia != cocycle_memo_.end() && ib != cocycle_memo_.end()) {
            A = ia->second;
            B = ib->second;
            return A + B * Q(k);
        }
    }
    auto self = std::shared_ptr<const PointSet>(std::shared_ptr<const PointSet>{}, this);
    DiskFun fa(self, zpoly::mul(e_[j - 1], zpoly::deriv(e_[i - 1])));
    DiskFun fb(self, zpoly::mul(zpoly::mul(e_[i - 1], e_[j - 1]), zpoly::deriv(phi_)));
    A = (fa * DiskFun::phi_power(self, s)).residue();
    B = (fb * DiskFun::phi_power(self, s - 1)).residue();
    {
        std::lock_guard<std::mutex> lock(memo_mu_);
        cocycle_memo_.emplace(ka, A);
        cocycle_memo_.emplace(kb, B);
    }
    return A + B * Q(k);
}

std::string PointSet::describe() const {
    std::ostringstream os;
    os << "{";
    for (int i = 0; i < size(); ++i) os << (i ? ", " : "") << labels_[i] << ": " << values_[i].to_string();
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------- DiskFun

DiskFun::DiskFun(PointSetPtr ps) : ps_(std::move(ps)), den_(ps_->size(), 0) {}

DiskFun::DiskFun(PointSetPtr ps, ZPoly num, std::vector<int> den) : ps_(std::move(ps)), num_(std::move(num)), den_(std::move(den)) {
    den_.resize(ps_->size(), 0);
    for (int m : den_)
        if (m < 0) throw DiskError("negative denominator multiplicity");
    canonicalize();
}

void DiskFun::canonicalize() {
    zpoly::trim(num_);
    if (num_.empty()) {
        std::fill(den_.begin(), den_.end(), 0);
        return;
    }
    for (int i = 0; i < ps_->size(); ++i) {
        ZPoly q;
        while (den_[i] > 0 && zpoly::divide_linear(num_, ps_->value(i), q)) {
            num_ = std::move(q);
            --den_[i];
        }
    }
}

void DiskFun::check_same(const DiskFun& o) const {
    if (!ps_ || !o.ps_ || !ps_->same(*o.ps_)) throw DiskError("mismatched point sets");
}

DiskFun DiskFun::constant(PointSetPtr ps, const ACoeff& c) { return DiskFun(ps, ZPoly{c}); }

DiskFun DiskFun::z(PointSetPtr ps) { return DiskFun(ps, ZPoly{ACoeff(), ACoeff(1)}); }

DiskFun DiskFun::z_power(PointSetPtr ps, int d) {
    if (d < 0) throw DiskError("z^" + std::to_string(d) + " is not a polynomial; use point_factor");
    ZPoly p(d + 1);
    p[d] = ACoeff(1);
    return DiskFun(ps, p);
}

DiskFun DiskFun::point_factor(PointSetPtr ps, int i, int m) {
    if (m >= 0) return DiskFun(ps, zpoly::pow(zpoly::linear(ps->value(i)), m));
    std::vector<int> den(ps->size(), 0);
    den[i] = -m;
    return DiskFun(ps, ZPoly{ACoeff(1)}, den);
}

DiskFun DiskFun::phi_power(PointSetPtr ps, int k) {
    if (k >= 0) return DiskFun(ps, zpoly::pow(ps->phi(), k));
    return DiskFun(ps, ZPoly{ACoeff(1)}, std::vector<int>(ps->size(), -k));
}

DiskFun DiskFun::basis(PointSetPtr ps, BasisIndex idx) {
    if (idx.i < 1 || idx.i > ps->size()) throw DiskError("basis index i out of range");
    return DiskFun(ps, ps->e(idx.i)) * phi_power(ps, idx.k);
}

DiskFun DiskFun::dual_basis(PointSetPtr ps, BasisIndex idx) {
    if (idx.i < 1 || idx.i > ps->size()) throw DiskError("basis index i out of range");
    ZPoly acc;
    for (int j = 1; j <= ps->size(); ++j) acc = zpoly::add(acc, zpoly::scale(ps->e(j), ps->lambda(idx.i, j)));
    return DiskFun(ps, acc) * phi_power(ps, idx.k);
}

bool DiskFun::is_regular() const {
    for (int m : den_)
        if (m) return false;
    return true;
}

int DiskFun::pole_order() const {
    int m = 0;
    for (int d : den_) m = std::max(m, d);
    return m;
}

DiskFun DiskFun::operator+(const DiskFun& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    check_same(o);
    std::vector<int> den(den_.size());
    ZPoly a = num_, b = o.num_;
    for (std::size_t i = 0; i < den.size(); ++i) {
        den[i] = std::max(den_[i], o.den_[i]);
        ZPoly li = zpoly::linear(ps_->value(static_cast<int>(i)));
        if (den[i] > den_[i]) a = zpoly::mul(a, zpoly::pow(li, den[i] - den_[i]));
        if (den[i] > o.den_[i]) b = zpoly::mul(b, zpoly::pow(li, den[i] - o.den_[i]));
    }
    return DiskFun(ps_, zpoly::add(a, b), den);
}

DiskFun DiskFun::operator-() const {
    DiskFun r = *this;
    r.num_ = zpoly::scale(num_, ACoeff(-1));
    return r;
}

DiskFun DiskFun::operator-(const DiskFun& o) const { return *this + (-o); }

DiskFun DiskFun::operator*(const DiskFun& o) const {
    if (is_zero()) return *this;
    if (o.is_zero()) return o;
    check_same(o);
    std::vector<int> den(den_.size());
    for (std::size_t i = 0; i < den.size(); ++i) den[i] = den_[i] + o.den_[i];
    return DiskFun(ps_, zpoly::mul(num_, o.num_), den);
}

DiskFun DiskFun::operator*(const ACoeff& c) const {
    DiskFun r = *this;
    r.num_ = zpoly::scale(num_, c);
    if (r.num_.empty()) std::fill(r.den_.begin(), r.den_.end(), 0);
    return r;
}

bool DiskFun::operator==(const DiskFun& o) const {
    if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
    check_same(o);
    return den_ == o.den_ && zpoly::equal(num_, o.num_);
}

bool DiskFun::equals_cross(const DiskFun& o) const {
    check_same(o);
    ZPoly a = num_, b = o.num_;
    for (std::size_t i = 0; i < den_.size(); ++i) {
        ZPoly li = zpoly::linear(ps_->value(static_cast<int>(i)));
        a = zpoly::mul(a, zpoly::pow(li, o.den_[i]));
        b = zpoly::mul(b, zpoly::pow(li, den_[i]));
    }
    return zpoly::equal(a, b);
}

DiskFun DiskFun::deriv() const {
    if (is_zero()) return *this;
    int n = ps_->size();
    ZPoly P{ACoeff(1)};
    for (int i = 0; i < n; ++i)
        if (den_[i]) P = zpoly::mul(P, zpoly::linear(ps_->value(i)));
    ZPoly acc = zpoly::mul(zpoly::deriv(num_), P);
    std::vector<int> den = den_;
    for (int i = 0; i < n; ++i) {
        if (!den_[i]) continue;
        ZPoly Pi{ACoeff(1)};
        for (int j = 0; j < n; ++j)
            if (j != i && den_[j]) Pi = zpoly::mul(Pi, zpoly::linear(ps_->value(j)));
        acc = zpoly::sub(acc, zpoly::scale(zpoly::mul(num_, Pi), ACoeff(den_[i])));
        ++den[i];
    }
    return DiskFun(ps_, acc, den);
}

DiskFun DiskFun::deriv(int times) const {
    DiskFun r = *this;
    for (int t = 0; t < times; ++t) r = r.deriv();
    return r;
}

DiskFun DiskFun::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    DiskFun r = constant(ps_, ACoeff(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool DiskFun::is_unit() const {
    try {
        (void)inverse();
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

DiskFun DiskFun::inverse() const {
    if (is_zero()) throw DiskError("zero is not invertible");
    ZPoly rest = num_;
    std::vector<int> mult(ps_->size(), 0);
    for (int i = 0; i < ps_->size(); ++i) {
        ZPoly q;
        while (rest.size() > 1 && zpoly::divide_linear(rest, ps_->value(i), q)) {
            rest = std::move(q);
            ++mult[i];
        }
    }
    if (rest.size() != 1) throw DiskError("not a unit of the dense subring: " + to_string());
    ACoeff c = rest[0].invert();
    DiskFun r = constant(ps_, c);
    for (int i = 0; i < ps_->size(); ++i) r = r * point_factor(ps_, i, den_[i] - mult[i]);
    return r;
}

ACoeff DiskFun::residue() const {
    if (is_zero()) return ACoeff();
    ZPoly D{ACoeff(1)};
    for (int i = 0; i < ps_->size(); ++i)
        if (den_[i]) D = zpoly::mul(D, zpoly::pow(zpoly::linear(ps_->value(i)), den_[i]));
    std::size_t d = D.size() - 1;
    if (d == 0) return ACoeff();
    ZPoly q, r;
    zpoly::divmod_monic(num_, D, q, r);
    return r.size() >= d ? r[d - 1] : ACoeff();
}

ACoeff DiskFun::eval(const ACoeff& x) const {
    ACoeff den(1);
    for (int i = 0; i < ps_->size(); ++i)
        if (den_[i]) den *= (x - ps_->value(i)).pow(den_[i]);
    return zpoly::eval(num_, x) * den.invert();
}

std::map<BasisIndex, ACoeff> DiskFun::expand_basis() const {
    std::map<BasisIndex, ACoeff> out;
    if (is_zero()) return out;
    int K = pole_order();
    ZPoly P = num_;
    for (int i = 0; i < ps_->size(); ++i)
        if (K > den_[i]) P = zpoly::mul(P, zpoly::pow(zpoly::linear(ps_->value(i)), K - den_[i]));
    int k = -K;
    const ZPoly& phi = ps_->phi();
    while (!P.empty()) {
        ZPoly q, r;
        zpoly::divmod_monic(P, phi, q, r);
        auto c = ps_->e_coordinates(r);
        for (int i = 0; i < ps_->size(); ++i)
            if (!c[i].is_zero()) out.emplace(BasisIndex{i + 1, k}, c[i]);
        P = std::move(q);
        ++k;
    }
    return out;
}

int DiskFun::valuation() const {
    auto b = expand_basis();
    if (b.empty()) return INT_MAX;
    int v = INT_MAX;
    for (const auto& [idx, c] : b) v = std::min(v, idx.k);
    return v;
}

std::map<BasisIndex, ACoeff> DiskFun::to_basis(int kmin, int kmax) const {
    auto b = expand_basis();
    std::map<BasisIndex, ACoeff> out;
    for (const auto& [idx, c] : b) {
        if (idx.k < kmin)
            throw DiskError("valuation " + std::to_string(idx.k) + " below window start " + std::to_string(kmin));
        if (idx.k <= kmax) out.emplace(idx, c);
    }
    return out;
}

std::map<BasisIndex, ACoeff> DiskFun::to_basis_pairing(int kmin, int kmax) const {
    std::map<BasisIndex, ACoeff> out;
    for (int k = kmin; k <= kmax; ++k)
        for (int i = 1; i <= ps_->size(); ++i) {
            ACoeff c = (*this * dual_basis(ps_, {i, -k - 1})).residue();
            if (!c.is_zero()) out.emplace(BasisIndex{i, k}, c);
        }
    return out;
}

DiskFun DiskFun::from_basis(PointSetPtr ps, const std::map<BasisIndex, ACoeff>& c) {
    DiskFun r(ps);
    for (const auto& [idx, v] : c) r += basis(ps, idx) * v;
    return r;
}

DiskFun DiskFun::compose(const DiskFun& psi) const {
    check_same(psi);
    if (!psi.is_regular()) throw DiskError("coordinate change must be a polynomial in z");
    ZPoly dpsi = zpoly::deriv(psi.num_);
    for (int i = 0; i < ps_->size(); ++i) {
        ACoeff j = zpoly::eval(dpsi, ps_->value(i));
        bool unit = !j.is_zero() && (j.mode() == ACoeff::Mode::LOCALIZED ? true : j.num().constant_term() != 0);
        if (!unit) throw DiskError("non-invertible Jacobian at point " + ps_->label(i) + ": " + j.to_string());
    }
    DiskFun r(ps_, zpoly::compose(num_, psi.num_));
    for (int i = 0; i < ps_->size(); ++i) {
        if (!den_[i]) continue;
        ZPoly g = zpoly::sub(psi.num_, ZPoly{ps_->value(i)});
        std::vector<int> mult(ps_->size(), 0);
        for (int j = 0; j < ps_->size(); ++j) {
            ZPoly q;
            while (g.size() > 1 && zpoly::divide_linear(g, ps_->value(j), q)) {
                g = std::move(q);
                ++mult[j];
            }
        }
        if (g.size() != 1)
            throw DiskError("composition leaves the dense subring: psi - a_" + ps_->label(i) + " has a factor away from the points");
        DiskFun inv = constant(ps_, g[0].invert().pow(den_[i]));
        for (int j = 0; j < ps_->size(); ++j) inv = inv * point_factor(ps_, j, -mult[j] * den_[i]);
        r = r * inv;
    }
    return r;
}

DiskFun DiskFun::transport(PointSetPtr target, const std::vector<Poly>& images, const std::vector<int>& point_map) const {
    ZPoly num(num_.size());
    for (std::size_t d = 0; d < num_.size(); ++d) num[d] = num_[d].substitute(images);
    std::vector<int> den(target->size(), 0);
    for (std::size_t i = 0; i < den_.size(); ++i) den[point_map.at(i)] += den_[i];
    return DiskFun(target, num, den);
}

std::string DiskFun::key() const {
    std::ostringstream os;
    for (const auto& c : num_) os << c.to_string() << ';';
    os << '|';
    for (int m : den_) os << m << ',';
    return os.str();
}

std::string DiskFun::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (std::size_t d = 0; d < num_.size(); ++d) {
        if (num_[d].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << num_[d].to_string() << ")";
        if (d == 1) os << "*z";
        if (d > 1) os << "*z^" << d;
    }
    os << ")";
    bool any = false;
    for (int i = 0; i < ps_->size(); ++i) {
        if (!den_[i]) continue;
        os << (any ? "*" : "/(");
        any = true;
        os << "(z-a" << ps_->label(i) << ")";
        if (den_[i] > 1) os << "^" << den_[i];
    }
    if (any) os << ")";
    return os.str();
}

nlohmann::json DiskFun::to_json() const {
    nlohmann::json num = nlohmann::json::array();
    int nv = ps_ ? ps_->nvars() : 0;
    for (std::size_t d = 0; d < num_.size(); ++d)
        if (!num_[d].is_zero()) num.push_back({num_[d].to_json(nv), d});
    nlohmann::json den = nlohmann::json::object();
    for (int i = 0; ps_ && i < ps_->size(); ++i)
        if (den_[i]) den[ps_->label(i)] = den_[i];
    return {{"num", num}, {"den", den}};
}

DiskFun DiskFun::from_json(PointSetPtr ps, const nlohmann::json& j) {
    ZPoly num;
    for (const auto& t : j.at("num")) {
        std::size_t d = t.at(1).get<std::size_t>();
        if (num.size() <= d) num.resize(d + 1);
        num[d] += ACoeff::from_json(t.at(0));
    }
    std::vector<int> den(ps->size(), 0);
    if (j.contains("den"))
        for (auto it = j.at("den").begin(); it != j.at("den").end(); ++it) den[ps->index_of(it.key())] = it.value().get<int>();
    return DiskFun(ps, num, den);
}

}  // namespace fdisk
