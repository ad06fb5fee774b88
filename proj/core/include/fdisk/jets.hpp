#pragma once

#include "fdisk/affine.hpp"
#include "fdisk/twovar.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdisk {

class JetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Jet coordinate x^j_{i,k}: the coefficient of e_{i,-k-1} in the j-th entry of a point.
struct JetVar {
    int j = 0;  // base coordinate, 0-based
    int i = 1;  // point, 1-based
    int k = 0;

    std::uint32_t pack() const {
        return (static_cast<std::uint32_t>(k + 32768) << 16) | (static_cast<std::uint32_t>(i) << 8) |
               static_cast<std::uint32_t>(j);
    }
    static JetVar unpack(std::uint32_t p) {
        return JetVar{static_cast<int>(p & 0xffu), static_cast<int>((p >> 8) & 0xffu),
                      static_cast<int>(p >> 16) - 32768};
    }
};

using JetMonomial = std::vector<std::uint32_t>;  // sorted packed variables, with repetition

class JetPoly {
public:
    JetPoly() = default;
    static JetPoly constant(const ACoeff& c);
    static JetPoly var(const JetVar& v, const ACoeff& c = ACoeff(1));

    const std::map<JetMonomial, ACoeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    void add_term(const JetMonomial& m, const ACoeff& c);
    JetPoly operator+(const JetPoly& o) const;
    JetPoly operator-(const JetPoly& o) const;
    JetPoly operator*(const JetPoly& o) const;
    JetPoly operator*(const ACoeff& c) const;
    JetPoly& operator+=(const JetPoly& o) { return *this = *this + o; }
    bool operator==(const JetPoly& o) const;
    bool operator!=(const JetPoly& o) const { return !(*this == o); }

    // Drop every monomial containing x_{i,k} with k >= N.
    JetPoly truncate(int N) const;
    // Reindex x_{i,k} -> x_{i,k+s}.
    JetPoly shift(int s) const;
    ACoeff evaluate(const std::map<std::uint32_t, ACoeff>& values) const;

    std::string to_string(const std::vector<std::string>& names) const;
    nlohmann::json to_json(const std::vector<std::string>& names, int nvars) const;

private:
    std::map<JetMonomial, ACoeff> terms_;
};

// Polynomial on the base affine space; variable v is the v-th coordinate.
Poly parse_base_poly(const std::string& text, const std::vector<std::string>& names);

// Commutative fields x^j_K(g) = residue(b^j g) with values modulo (x_{i,k} : k >= N).
class JetEngine {
public:
    explicit JetEngine(PointSetPtr ps) : ps_(std::move(ps)) {}
    const PointSetPtr& points() const { return ps_; }

    JetPoly coordinate(int j, const DiskFun& g, int N) const;
    // Normally ordered lift p_K(g); a monomial x^{j1}...x^{jd} is the iterated (-1)-product
    // in the given factor order.
    JetPoly lift(const Poly& p, const DiskFun& g, int N) const;
    JetPoly lift_ordered(const std::vector<int>& factors, const DiskFun& g, int N) const;
    // p_{j,k} = p_K(eps_{j,k})
    JetPoly lift(const Poly& p, BasisIndex idx, int N) const;

private:
    JetPoly product(const std::vector<int>& factors, std::size_t from, const DiskFun& g, int N) const;

    PointSetPtr ps_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, JetPoly> memo_;
};

// Values of all x^j_{i,k} with k in [kmin, kmax] at a point (b^1, ..., b^m).
std::map<std::uint32_t, ACoeff> jet_coordinates(const std::vector<DiskFun>& point, int kmin, int kmax);

// Evaluate a base polynomial on DiskFun entries.
DiskFun eval_base_poly(const Poly& p, const std::vector<DiskFun>& point);

struct FunctorialityReport {
    bool pass = true;
    int checked = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
};

// lift(p)_{j,k}(b) == residue(p(b) eps_{j,k}) on random R-points, j <= n, k in [kmin, -1].
FunctorialityReport verify_functoriality(const JetEngine& eng, const Poly& p, int nvars, int samples, int kmin,
                                         std::mt19937& rng);

// p_{j,k}(phi^m b) == p_{j,k+dm}(b) for homogeneous p of degree d and b in J^K_{>=m}.
FunctorialityReport verify_shift(const JetEngine& eng, const Poly& p, int nvars, int m, int samples, int kmin,
                                 std::mt19937& rng);

// Top PBW-degree part of u read in the jet coordinates; X (x) e_{i,k} -> sum_j S_ij x^X_{j,k}.
JetPoly symbol(const UElem& u);

// Relations g^l_{i,k}, k in [kmin, -1], of the R-jets of Spec A[x]/(g^l).
struct JetPresentation {
    std::vector<std::string> base_vars;
    std::vector<JetVar> jet_vars;
    std::vector<std::pair<std::pair<int, BasisIndex>, JetPoly>> relations;
    nlohmann::json to_json(int nvars) const;
};
JetPresentation jet_presentation(const JetEngine& eng, const std::vector<std::string>& base_vars,
                                 const std::vector<Poly>& equations, int kmin);

// Invariant polynomials on the coadjoint space: tr(M^d) / normalization with
// M = sum_a x_a rho(J^a); sl2: {quadratic}, sl3: {quadratic, cubic}.
std::vector<Poly> kostant_invariants(const LieData& g);
// ad_y as a derivation of S(g) kills p for every basis y.
bool is_ad_invariant(const LieData& g, const Poly& p);

}  // namespace fdisk
