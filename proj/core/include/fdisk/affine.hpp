#pragma once

#include "fdisk/disk.hpp"
#include "fdisk/lie.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace fdisk {

class AffineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One PBW letter X_a (x) e_{i,k} on component comp, packed so that integer
// order is the normal order: k, then comp, then i, then a.
struct Factor {
    int a = 0;
    int i = 1;
    int k = 0;
    int comp = 0;

    std::uint32_t pack() const {
        return (static_cast<std::uint32_t>(k + 32768) << 16) | (static_cast<std::uint32_t>(comp) << 12) |
               (static_cast<std::uint32_t>(i) << 8) | static_cast<std::uint32_t>(a);
    }
    static Factor unpack(std::uint32_t p) {
        return Factor{static_cast<int>(p & 0xffu), static_cast<int>((p >> 8) & 0xfu),
                      static_cast<int>(p >> 16) - 32768, static_cast<int>((p >> 12) & 0xfu)};
    }
};

using Monomial = std::vector<std::uint32_t>;  // packed factors, non-decreasing

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : m) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

using TermMap = std::map<Monomial, ACoeff>;

// The Lie algebra g (x) K_{I_1} + ... + g (x) K_{I_r} + A 1 at level k * kappa_0,
// with all components sharing the central element.
class UAlgebra {
public:
    static std::shared_ptr<const UAlgebra> make(const LieData& g, Q level, std::vector<PointSetPtr> comps);
    static std::shared_ptr<const UAlgebra> make(const LieData& g, Q level, PointSetPtr ps) {
        return make(g, std::move(level), std::vector<PointSetPtr>{std::move(ps)});
    }

    const LieData& lie() const { return *g_; }
    const Q& level() const { return level_; }
    int components() const { return static_cast<int>(comps_.size()); }
    const PointSetPtr& points(int comp = 0) const { return comps_.at(comp); }
    bool same(const UAlgebra& o) const;

    // [x, y] as single factors plus a scalar.
    void bracket(const Factor& x, const Factor& y, std::vector<std::pair<Factor, ACoeff>>& out, ACoeff& scalar) const;

    // x * m reduced to normal order modulo U_N; m must already be normal-ordered and reduced.
    std::shared_ptr<const TermMap> mul_factor(const Factor& x, const Monomial& m, int N) const;

    std::size_t memo_size() const;
    void clear_memo() const;

private:
    UAlgebra() = default;

    const LieData* g_ = nullptr;
    Q level_;
    std::vector<PointSetPtr> comps_;

    struct Key {
        std::uint32_t x;
        int N;
        Monomial m;
        bool operator==(const Key& o) const { return x == o.x && N == o.N && m == o.m; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return MonomialHash{}(k.m) ^ (static_cast<std::size_t>(k.x) * 0x9e3779b97f4a7c15ull) ^
                   (static_cast<std::size_t>(k.N) << 40);
        }
    };
    mutable std::mutex mu_;
    mutable std::unordered_map<Key, std::shared_ptr<const TermMap>, KeyHash> memo_;
};

using UAlgebraPtr = std::shared_ptr<const UAlgebra>;

// Element of g (x) K plus a central multiple; one DiskFun per component and Lie index.
class LoopElem {
public:
    LoopElem() = default;
    explicit LoopElem(UAlgebraPtr alg);
    static LoopElem generator(UAlgebraPtr alg, int a, const DiskFun& f, int comp = 0);
    static LoopElem central(UAlgebraPtr alg, const ACoeff& c);

    const UAlgebraPtr& algebra() const { return alg_; }
    const DiskFun& part(int comp, int a) const { return parts_.at(comp).at(a); }
    const ACoeff& central_part() const { return central_; }

    LoopElem operator+(const LoopElem& o) const;
    LoopElem operator-(const LoopElem& o) const;
    LoopElem operator*(const ACoeff& c) const;
    bool operator==(const LoopElem& o) const;

    std::string to_string() const;

private:
    UAlgebraPtr alg_;
    std::vector<std::vector<DiskFun>> parts_;
    ACoeff central_;
    friend LoopElem loop_bracket(const LoopElem&, const LoopElem&);
};

// [Xf, Yg] = [X,Y] fg + level kappa_0(X,Y) residue(g df)
LoopElem loop_bracket(const LoopElem& x, const LoopElem& y);

// Normal-ordered element of U / U_N.
class UElem {
public:
    UElem() = default;
    UElem(UAlgebraPtr alg, int N);
    static UElem scalar(UAlgebraPtr alg, int N, const ACoeff& c);
    static UElem factor(UAlgebraPtr alg, int N, const Factor& f, const ACoeff& c = ACoeff(1));
    // Image of X (x) f: basis expansion with all factors of degree >= N dropped.
    static UElem from_loop(const LoopElem& x, int N);

    const UAlgebraPtr& algebra() const { return alg_; }
    int trunc() const { return N_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    ACoeff scalar_part() const;
    int max_length() const;
    int min_degree() const;  // smallest k over all factors; 0 when there are none

    void add_term(const Monomial& m, const ACoeff& c);
    UElem operator+(const UElem& o) const;
    UElem operator-(const UElem& o) const;
    UElem operator-() const;
    UElem operator*(const ACoeff& c) const;
    UElem& operator+=(const UElem& o);
    UElem& operator-=(const UElem& o);
    bool operator==(const UElem& o) const;
    bool operator!=(const UElem& o) const { return !(*this == o); }

    // Re-read modulo U_M for M <= N.
    UElem reduce(int M) const;

    nlohmann::json to_json() const;
    std::string to_string() const;

private:
    void check_same(const UElem& o) const;
    UAlgebraPtr alg_;
    int N_ = 0;
    TermMap terms_;
};

// Product with the left operand's monomials read as exact elements of U.
UElem u_mul(const UElem& x, const UElem& y);
UElem u_commutator(const UElem& x, const UElem& y);
// Normal order a raw word of factors modulo U_N.
UElem normal_order(UAlgebraPtr alg, const std::vector<Factor>& word, int N);
// Left multiplication by one factor.
UElem mul_factor(const Factor& x, const UElem& y);

}  // namespace fdisk
