#pragma once

#include "fdisk/disk.hpp"

#include <utility>
#include <vector>

namespace fdisk {

// Element of A[z, w][phi(z)^-1, phi(w)^-1] stored as
// N(z, w) / (prod (z - a_i)^den_z[i] * prod (w - a_j)^den_w[j]).
// rows[d] is the coefficient of z^d, a polynomial in w.
class TwoVar {
public:
    TwoVar() = default;
    explicit TwoVar(PointSetPtr ps);
    TwoVar(PointSetPtr ps, std::vector<ZPoly> rows, std::vector<int> den_z, std::vector<int> den_w);

    static TwoVar tensor(const DiskFun& p, const DiskFun& q);  // p(z) q(w)
    static TwoVar constant(PointSetPtr ps, const ACoeff& c);
    static TwoVar diagonal(PointSetPtr ps);  // z - w
    static TwoVar h_poly(PointSetPtr ps);    // (phi(z) - phi(w)) / (z - w)

    const PointSetPtr& points() const { return ps_; }
    const std::vector<ZPoly>& rows() const { return rows_; }
    const std::vector<int>& den_z() const { return den_z_; }
    const std::vector<int>& den_w() const { return den_w_; }
    bool is_zero() const { return rows_.empty(); }

    TwoVar operator+(const TwoVar& o) const;
    TwoVar operator-(const TwoVar& o) const;
    TwoVar operator-() const;
    TwoVar operator*(const TwoVar& o) const;
    TwoVar operator*(const ACoeff& c) const;
    TwoVar& operator+=(const TwoVar& o) { return *this = *this + o; }
    bool operator==(const TwoVar& o) const;
    bool operator!=(const TwoVar& o) const { return !(*this == o); }
    TwoVar pow(int e) const;
    TwoVar swap() const;  // exchange z and w

    // (z - w)^k divides the numerator (denominators are coprime to z - w).
    bool divisible_by_diagonal(int k) const;
    // Quotient by (z - w); throws when not exact.
    TwoVar divide_by_diagonal() const;
    // Largest k with phi(z)^k (first) or phi(w)^k (second) dividing the element
    // inside K (x) R, resp. R (x) K; negative values mean poles.
    int phi_order_z() const;
    int phi_order_w() const;

    // Residue in z; result is a function of w.
    DiskFun int_z() const;
    // Separable terms: sum_r p_r(z) q_r(w).
    std::vector<std::pair<DiskFun, DiskFun>> separable() const;

    std::string to_string() const;

private:
    void canonicalize();
    void check_same(const TwoVar& o) const;

    PointSetPtr ps_;
    std::vector<ZPoly> rows_;
    std::vector<int> den_z_, den_w_;
};

// Taylor polynomial sum_{k <= N} (z - w)^k (d^k f)(w) / k!.
TwoVar taylor(const DiskFun& f, int N);

enum class Side { FIRST, SECOND };
const char* side_name(Side s);

// One-sided expansion of (z - w)^m, m < 0, with r = -m:
//   SECOND: h^r sum_J C(J+r-1, r-1) phi(w)^J phi(z)^(-J-r)
//   FIRST:  (-h)^r sum_J C(J+r-1, r-1) phi(z)^J phi(w)^(-J-r)
class ExpansionSeries {
public:
    ExpansionSeries(PointSetPtr ps, Side side, int m, int order);

    Side side() const { return side_; }
    int power() const { return m_; }
    int order() const { return order_; }
    // Separable terms of the J-th summand.
    std::vector<std::pair<DiskFun, DiskFun>> layer(int J) const;
    // h^r (resp. (-h)^r) as separable terms; layer J multiplies these by phi powers.
    const std::vector<std::pair<DiskFun, DiskFun>>& prefactor() const { return pre_; }
    Q layer_coefficient(int J) const;
    // Sum of the layers J = 0..order.
    const TwoVar& terms() const { return terms_; }
    // (z - w)^(-m) * terms - 1 lies in the side's filtration level order + 1.
    bool verify() const;

private:
    PointSetPtr ps_;
    Side side_;
    int m_, order_;
    std::vector<std::pair<DiskFun, DiskFun>> pre_;
    TwoVar terms_;
};

Q binomial(long n, long k);

}  // namespace fdisk
