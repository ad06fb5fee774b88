#pragma once

#include "fdisk/affine.hpp"
#include "fdisk/fields.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fdisk {

class OperError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Element of K known modulo phi^prec R; prec >= kExactPrec means exact.
inline constexpr int kExactPrec = 1 << 28;

class PhiTrunc {
public:
    PhiTrunc() = default;
    PhiTrunc(const DiskFun& f, int prec);

    const DiskFun& value() const { return f_; }
    int prec() const { return prec_; }
    const PointSetPtr& points() const { return f_.points(); }
    // Lower bound for the valuation of the represented class.
    int val_low() const;
    bool is_zero() const { return f_.is_zero(); }
    bool exact() const { return prec_ >= kExactPrec; }
    static PhiTrunc exact(const DiskFun& f) { return PhiTrunc(f, kExactPrec); }
    // v o psi for a coordinate change psi fixing the points.
    PhiTrunc compose(const DiskFun& psi) const;

    PhiTrunc operator+(const PhiTrunc& o) const;
    PhiTrunc operator-(const PhiTrunc& o) const;
    PhiTrunc operator-() const { return PhiTrunc(-f_, prec_); }
    PhiTrunc operator*(const PhiTrunc& o) const;
    PhiTrunc operator*(const ACoeff& c) const { return PhiTrunc(f_ * c, prec_); }
    bool operator==(const PhiTrunc& o) const;  // equal modulo the smaller precision
    bool operator!=(const PhiTrunc& o) const { return !(*this == o); }
    PhiTrunc deriv() const;
    // Inverse of an element congruent to a nonzero rational constant modulo phi.
    PhiTrunc inverse() const;

private:
    DiskFun f_;
    int prec_ = 0;
};

// f modulo phi^prec R: basis terms e_{i,k} with k >= prec dropped.
DiskFun reduce_phi(const DiskFun& f, int prec);
// Inverse of a regular u with u = c (mod phi), c a nonzero rational, modulo phi^prec.
DiskFun inverse_mod_phi(const DiskFun& u, int prec);

inline DiskFun ring_const(const DiskFun& like, const ACoeff& c) { return DiskFun::constant(like.points(), c); }
inline PhiTrunc ring_const(const PhiTrunc& like, const ACoeff& c) {
    return PhiTrunc::exact(DiskFun::constant(like.points(), c));
}
inline DiskFun ring_inverse(const DiskFun& x) { return x.inverse(); }
inline PhiTrunc ring_inverse(const PhiTrunc& x) { return x.inverse(); }

// d + A dt with A = sum_a coeff[a] x_a.
template <class R>
struct Connection {
    const LieData* g = nullptr;
    std::vector<R> coeff;
};

template <class R>
struct GaugeFactor {
    bool torus = false;
    std::vector<R> diag;  // torus: diagonal entries in the defining representation
    int a = -1;           // nilpotent: exp(u x_a)
    R u;
};

// Ordered factors; the first factor acts first.
template <class R>
struct GaugeElem {
    std::vector<GaugeFactor<R>> factors;
};

template <class R>
using RMatrix = std::vector<std::vector<R>>;

// Matrix of b in the defining representation (the first factor is rightmost).
template <class R>
RMatrix<R> gauge_matrix(const LieData& g, const GaugeElem<R>& b, const R& like);
template <class R>
bool is_scalar_matrix(const RMatrix<R>& m);

template <class R>
Connection<R> gauge(const GaugeElem<R>& b, const Connection<R>& A);
template <class R>
GaugeElem<R> compose(const GaugeElem<R>& outer, const GaugeElem<R>& inner);  // outer * inner
template <class R>
GaugeElem<R> inverse(const GaugeElem<R>& b);

template <class R>
struct CanonicalOper {
    const LieData* g = nullptr;
    std::vector<R> c;  // coefficient of each V^can basis vector
};

template <class R>
Connection<R> canonical_connection(const CanonicalOper<R>& c);

// Unique b with b . A = p_-1 + sum c_i v_i; A must be sum psi_i f_i + (b-valued) with unit psi_i.
template <class R>
std::pair<CanonicalOper<R>, GaugeElem<R>> canonical_form(const Connection<R>& A);

// Coordinate change by a polynomial psi with psi(a_i) = a_i and psi' = const (mod phi);
// results are exact modulo phi^prec R.
std::vector<PhiTrunc> coord_change(const LieData& g, const DiskFun& psi, const std::vector<PhiTrunc>& c, int prec);
std::vector<PhiTrunc> coord_change(const DiskFun& psi, const CanonicalOper<DiskFun>& c, int prec);
// Pull back by psi, then reduce to canonical form (oracle for coord_change).
std::vector<PhiTrunc> pullback_reduce(const DiskFun& psi, const CanonicalOper<DiskFun>& c, int prec);
// v o psi modulo phi^prec.
PhiTrunc compose_trunc(const DiskFun& v, const DiskFun& psi, int prec);
// psi'''/psi' - 3/2 (psi''/psi')^2 modulo phi^prec.
PhiTrunc schwarzian(const DiskFun& psi, int prec);

// sum_i v_i^*(G_i) + scalar, with v_i^*(g) = residue(v_i-coefficient * g).
struct OperLinear {
    std::vector<DiskFun> G;
    ACoeff scalar;
    bool operator==(const OperLinear& o) const;
    nlohmann::json to_json(int nvars) const;
};

OperLinear oper_generator(const LieData& g, PointSetPtr ps, int i, const DiskFun& f);
// h d/dz . v_i^*(f)
OperLinear der_action_oper(const LieData& g, const DiskFun& h, int i, const DiskFun& f);
// Value of a linear functional on a canonical oper.
ACoeff evaluate_linear(const OperLinear& L, const CanonicalOper<DiskFun>& c);

// Generator dictionary v_1^*(g) -> -S(g), scalars -> scalars (sl2, critical level).
UElem oper_to_center(const OperLinear& L, const FieldPtr& S, int N);

struct DictionaryEntry {
    BasisIndex idx;
    DiskFun eps;
    UElem center;  // S(eps_{j,k}) modulo U_N
    OperLinear oper;  // v_1^*(eps_{j,k})
};
std::vector<DictionaryEntry> center_oper_dictionary(const FieldPtr& S, const std::vector<BasisIndex>& window, int N);

struct EquivarianceReport {
    bool pass = true;
    int checked = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
};
// For each entry and h: dictionary(h.v^*) == h.dictionary(v^*) modulo U_N.
EquivarianceReport der_equivariance_check(const FieldPtr& S, const std::vector<DiskFun>& hs,
                                          const std::vector<BasisIndex>& window, int N);

// JSON descriptions.
Connection<DiskFun> connection_from_json(const LieData& g, PointSetPtr ps, const nlohmann::json& j);
nlohmann::json connection_to_json(const Connection<DiskFun>& A, int nvars);
nlohmann::json canonical_to_json(const CanonicalOper<DiskFun>& c, int nvars);

nlohmann::json trunc_to_json(const std::vector<PhiTrunc>& c, const LieData& g);

// Random gauge elements and canonical opers for the round-trip checks.
GaugeElem<DiskFun> random_gauge(const LieData& g, PointSetPtr ps, std::mt19937& rng, int maxden);
CanonicalOper<DiskFun> random_canonical(const LieData& g, PointSetPtr ps, std::mt19937& rng, int maxden);
DiskFun random_coordinate_change(PointSetPtr ps, std::mt19937& rng);

}  // namespace fdisk
