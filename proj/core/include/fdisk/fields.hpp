#pragma once

#include "fdisk/affine.hpp"
#include "fdisk/twovar.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdisk {

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// How generator fields X^(f) land in an enveloping algebra.
class Realization {
public:
    Realization(PointSetPtr domain, UAlgebraPtr target) : domain_(std::move(domain)), target_(std::move(target)) {}
    virtual ~Realization() = default;
    virtual UElem generator(int a, const DiskFun& f, int N) const = 0;
    virtual std::string name() const = 0;

    const PointSetPtr& domain() const { return domain_; }
    const UAlgebraPtr& target() const { return target_; }

private:
    PointSetPtr domain_;
    UAlgebraPtr target_;
};

using RealizationPtr = std::shared_ptr<const Realization>;

// X^(f) = X (x) f in the algebra over the same points.
class PlainRealization : public Realization {
public:
    explicit PlainRealization(UAlgebraPtr alg) : Realization(alg->points(0), alg) {}
    static RealizationPtr make(const LieData& g, Q level, PointSetPtr ps);
    UElem generator(int a, const DiskFun& f, int N) const override;
    std::string name() const override { return "plain"; }
};

// L_l data for the quasi-conformal action: weight, and L_2 a = c * vacuum.
struct ConformalData {
    Q weight;
    Q l2_scalar;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    enum class Kind { GENERATOR, UNITY, DERIV, NPROD, KMUL, SCALAR, SUM };

    static FieldPtr generator(RealizationPtr r, int a);
    static FieldPtr unity(RealizationPtr r);
    static FieldPtr deriv(FieldPtr x);
    static FieldPtr nprod(FieldPtr x, FieldPtr y, int m);
    static FieldPtr kmul(const DiskFun& g, FieldPtr x);
    static FieldPtr scalar(const ACoeff& c, FieldPtr x);
    static FieldPtr sum(std::vector<FieldPtr> xs);
    // Same tree with attached L_l data.
    static FieldPtr with_conformal(FieldPtr x, ConformalData d);

    Kind kind() const { return kind_; }
    const RealizationPtr& realization() const { return real_; }
    const PointSetPtr& points() const { return real_->domain(); }
    const UAlgebraPtr& algebra() const { return real_->target(); }
    int lie_index() const { return a_; }
    int m() const { return m_; }
    const ACoeff& scalar_value() const { return c_; }
    const std::vector<FieldPtr>& children() const { return kids_; }
    const std::optional<ConformalData>& conformal() const { return conf_; }

    // Value on f in U / U_N.
    UElem evaluate(const DiskFun& f, int N) const;

    // Continuity certificate: evaluate vanishes on phi^M R whenever M >= cert(N).
    int cert(int N) const;
    // Lower bound on factor degrees of evaluate(f, N) when valuation(f) >= v.
    int low(int v, int N) const;
    // Bound on PBW length of values.
    int length() const;

    std::string describe() const;
    std::size_t memo_size() const;

private:
    Field() = default;
    UElem eval_uncached(const DiskFun& f, int N) const;

    Kind kind_ = Kind::UNITY;
    RealizationPtr real_;
    int a_ = -1;
    int m_ = 0;
    DiskFun g_;
    ACoeff c_;
    std::vector<FieldPtr> kids_;
    std::optional<ConformalData> conf_;

    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, UElem> memo_;
};

// Precision limit for left operands; larger requests are reported as certificate shortfalls.
inline constexpr int kMaxPrecision = 400;

// A * b in U / U_N, with A evaluated at the precision needed for the left factor.
UElem left_multiply(const Field& x, const DiskFun& p, const UElem& b);

// [X, Y]((z - w)^M f (x) g) in U / U_N.
UElem commutator_on(const Field& x, const Field& y, int M, const DiskFun& f, const DiskFun& g, int N);

struct LocalityCert {
    bool found = false;
    int order = -1;
    int max_checked = -1;
};

LocalityCert locality_order(const Field& x, const Field& y, int max_order, int kmin, int kmax, int N);

// Derivation h d/dz of the Lie algebra, extended to U and read modulo U_N; the
// input must be reduced modulo U_{N+1} or finer.
UElem der_on_u(const DiskFun& h, const UElem& u, int N);

// Quasi-conformal action of h d/dz on a field with L_l data
// (L_1 a = 0, L_2 a = c vacuum, L_l a = 0 for l > 2).
FieldPtr der_action(const DiskFun& h, const FieldPtr& x);

// S = 1/2 sum_a J^a_(-1) J_a with dual bases for the normalized form.
FieldPtr sugawara(RealizationPtr r);

// L_l S for l = -1..2 computed on the vacuum module at one point.
struct SugawaraLData {
    bool l_minus1_is_translation = false;
    bool l0_is_weight2 = false;
    bool l1_vanishes = false;
    bool l2_is_scalar = false;
    Q l2_scalar;
};
SugawaraLData sugawara_l_data(const LieData& g, const Q& level);

struct CentralityReport {
    bool pass = true;
    int checked = 0;
    int nonzero = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
};

// [S(eps_{j,k}), X (x) e_{i,l}] for j, i <= n, k, l in [kmin, kmax], every Lie basis X.
CentralityReport centrality_check(const FieldPtr& s, int N, int kmin, int kmax);

struct IdentityReport {
    bool pass = true;
    int checked = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
    void record(bool ok, nlohmann::json where);
};

// [A_(p), B_(q)] C = sum_j C(p, j) (A_(j) B)_(p+q-j) C on the basis window, p >= 0.
IdentityReport borcherds_check(const FieldPtr& a, const FieldPtr& b, const FieldPtr& c, int p, int q, int N, int kmin,
                               int kmax);

// Locality order of (A_(n) B, C), n >= -1, against 3 max(pairwise orders), plus one for n = -1.
IdentityReport dong_check(const FieldPtr& a, const FieldPtr& b, const FieldPtr& c, int n, int N, int kmin, int kmax);

struct VertexReport {
    bool pass = true;
    std::map<std::string, IdentityReport> sections;
    nlohmann::json to_json() const;
};

// Vacuum, translation, skew-symmetry of commuting pairs, K-linearity of the (-1)-product,
// the commutator formula and Dong's bound on the closure of the generators up to depth.
VertexReport vertex_axiom_check(const std::vector<FieldPtr>& generators, int depth, int N, int kmin, int kmax);

std::vector<DiskFun> basis_window(const PointSetPtr& ps, int kmin, int kmax, bool dual = false);

}  // namespace fdisk
