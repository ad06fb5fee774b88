#pragma once

#include "fdisk/coeff.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace fdisk {

class DiskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense polynomial in z with coefficients in the point ring; index = z-degree.
using ZPoly = std::vector<ACoeff>;

namespace zpoly {
void trim(ZPoly& p);
ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly scale(const ZPoly& a, const ACoeff& c);
ZPoly deriv(const ZPoly& a);
ZPoly pow(const ZPoly& a, int e);
ZPoly linear(const ACoeff& c);  // z - c
ACoeff eval(const ZPoly& a, const ACoeff& x);
// Division by a monic polynomial.
void divmod_monic(const ZPoly& a, const ZPoly& m, ZPoly& q, ZPoly& r);
// Division by (z - c); returns false when the remainder is nonzero.
bool divide_linear(const ZPoly& a, const ACoeff& c, ZPoly& q);
ZPoly compose(const ZPoly& a, const ZPoly& b);
bool equal(const ZPoly& a, const ZPoly& b);
}  // namespace zpoly

struct BasisIndex {
    int i = 1;  // 1..n
    int k = 0;
    bool operator<(const BasisIndex& o) const { return k != o.k ? k < o.k : i < o.i; }
    bool operator==(const BasisIndex& o) const { return i == o.i && k == o.k; }
};

// A term of e_i e_j = sum c * e_{m, shift}, shift in {0, 1}.
struct ProductTerm {
    int m;
    int shift;
    ACoeff c;
};

// Ordered labelled points a_i with their values in the coefficient ring.
// Symbolic points use variable i; specialized points carry rational constants.
class PointSet {
public:
    static std::shared_ptr<const PointSet> symbolic(int n);
    static std::shared_ptr<const PointSet> make(std::vector<std::string> labels, std::vector<ACoeff> values,
                                                int nvars);
    static std::shared_ptr<const PointSet> rational(const std::vector<Q>& values);

    int size() const { return static_cast<int>(values_.size()); }
    int nvars() const { return nvars_; }
    const std::string& label(int i) const { return labels_.at(i); }
    int index_of(const std::string& label) const;
    const std::vector<std::string>& labels() const { return labels_; }
    const ACoeff& value(int i) const { return values_.at(i); }
    bool same(const PointSet& o) const;

    const ZPoly& phi() const { return phi_; }
    const ZPoly& e(int i) const { return e_.at(i - 1); }  // e_i, 1-based
    // S_ij = residue(e_i e_j / phi), 1-based
    const ACoeff& S(int i, int j) const { return S_.at(i - 1).at(j - 1); }
    const ACoeff& lambda(int i, int j) const { return lambda_.at(i - 1).at(j - 1); }
    const std::vector<ProductTerm>& product(int i, int j) const { return prod_.at(i - 1).at(j - 1); }
    // residue(e_{j,l} * d/dz e_{i,k})
    ACoeff cocycle(int i, int k, int j, int l) const;

    // Coordinates of a polynomial of degree < n in the e-basis (index 0 -> e_1).
    std::vector<ACoeff> e_coordinates(const ZPoly& r) const;

    std::string describe() const;

private:
    PointSet() = default;
    void build();

    std::vector<std::string> labels_;
    std::vector<ACoeff> values_;
    int nvars_ = 0;
    ZPoly phi_;
    std::vector<ZPoly> e_;
    std::vector<std::vector<ACoeff>> S_, lambda_;
    std::vector<std::vector<std::vector<ProductTerm>>> prod_;
    mutable std::mutex memo_mu_;
    mutable std::map<std::tuple<int, int, int, int>, ACoeff> cocycle_memo_;
};

using PointSetPtr = std::shared_ptr<const PointSet>;

// Element of A[z][prod (z - a_i)^-1]: numerator / prod (z - a_i)^den[i].
class DiskFun {
public:
    DiskFun() = default;
    explicit DiskFun(PointSetPtr ps);
    DiskFun(PointSetPtr ps, ZPoly num, std::vector<int> den = {});

    static DiskFun constant(PointSetPtr ps, const ACoeff& c);
    static DiskFun z(PointSetPtr ps);
    static DiskFun z_power(PointSetPtr ps, int d);
    // (z - a_i)^m for any integer m; i is 0-based
    static DiskFun point_factor(PointSetPtr ps, int i, int m);
    static DiskFun phi_power(PointSetPtr ps, int k);
    static DiskFun basis(PointSetPtr ps, BasisIndex idx);  // e_{i,k}
    static DiskFun dual_basis(PointSetPtr ps, BasisIndex idx);  // eps_{i,k}

    const PointSetPtr& points() const { return ps_; }
    const ZPoly& num() const { return num_; }
    const std::vector<int>& den() const { return den_; }
    bool is_zero() const { return num_.empty(); }
    bool is_regular() const;  // no denominators
    int pole_order() const;   // max den

    DiskFun operator+(const DiskFun& o) const;
    DiskFun operator-(const DiskFun& o) const;
    DiskFun operator-() const;
    DiskFun operator*(const DiskFun& o) const;
    DiskFun operator*(const ACoeff& c) const;
    DiskFun& operator+=(const DiskFun& o) { return *this = *this + o; }
    DiskFun& operator*=(const DiskFun& o) { return *this = *this * o; }
    bool operator==(const DiskFun& o) const;
    bool operator!=(const DiskFun& o) const { return !(*this == o); }
    bool equals_cross(const DiskFun& o) const;

    DiskFun deriv() const;
    DiskFun deriv(int times) const;
    DiskFun pow(int e) const;
    // Inverse of a unit c * prod (z - a_i)^m_i; throws otherwise.
    DiskFun inverse() const;
    bool is_unit() const;
    ACoeff residue() const;
    // Value at a coefficient point (must not be a pole).
    ACoeff eval(const ACoeff& x) const;

    // Finite expansion in the e_{i,k} basis.
    std::map<BasisIndex, ACoeff> expand_basis() const;
    int valuation() const;  // phi-adic; INT_MAX for zero
    std::map<BasisIndex, ACoeff> to_basis(int kmin, int kmax) const;
    // Coefficients via the residue pairing c_{i,k} = residue(f * eps_{i,-k-1}).
    std::map<BasisIndex, ACoeff> to_basis_pairing(int kmin, int kmax) const;
    static DiskFun from_basis(PointSetPtr ps, const std::map<BasisIndex, ACoeff>& c);

    // Substitution z -> psi(z) for a polynomial psi.
    DiskFun compose(const DiskFun& psi) const;
    // Substitute point parameters: coefficients a -> images; den is remapped by point_map.
    DiskFun transport(PointSetPtr target, const std::vector<Poly>& images, const std::vector<int>& point_map) const;

    std::string key() const;  // canonical string (memo key)
    std::string to_string() const;
    nlohmann::json to_json() const;
    static DiskFun from_json(PointSetPtr ps, const nlohmann::json& j);

private:
    void canonicalize();
    void check_same(const DiskFun& o) const;

    PointSetPtr ps_;
    ZPoly num_;
    std::vector<int> den_;
};

}  // namespace fdisk
