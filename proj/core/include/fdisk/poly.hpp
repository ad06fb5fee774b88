#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fdisk {

using Q = mpq_class;

// Exponent vectors are packed 8 bits per variable into a 64-bit key.
inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExp = 255;

struct Mono {
    std::uint64_t key = 0;

    static Mono var(int v, int e = 1);
    int exp(int v) const { return static_cast<int>((key >> (8 * v)) & 0xffu); }
    int total() const;
    Mono operator*(const Mono& o) const;
    bool divides(const Mono& o) const;
    Mono operator/(const Mono& o) const;  // requires divides
    Mono with(int v, int e) const;
    std::vector<int> degrees(int nvars) const;
    static Mono from_degrees(const std::vector<int>& d);
    bool operator==(const Mono& o) const { return key == o.key; }
    bool operator<(const Mono& o) const { return key < o.key; }
};

// Sparse multivariate polynomial over Q, terms sorted by packed key, no zero coefficients.
class Poly {
public:
    using Term = std::pair<Mono, Q>;

    Poly() = default;
    explicit Poly(const Q& c);
    Poly(long c) : Poly(Q(c)) {}
    static Poly var(int v);
    static Poly monomial(const Mono& m, const Q& c);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Q constant_term() const;
    Q coeff(const Mono& m) const;
    int total_degree() const;   // -1 for zero
    int low_degree() const;     // -1 for zero
    int degree_in(int v) const;
    int nvars_used() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Q& c) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(int e) const;
    Poly truncated(int D) const;                  // drop total degree > D
    Poly mul_truncated(const Poly& o, int D) const;
    Poly homogeneous_part(int d) const;
    Poly derivative(int v) const;
    // Substitute variable v by the polynomial p.
    Poly substitute(int v, const Poly& p) const;
    // Simultaneous substitution x_i -> images[i] for i < images.size().
    Poly substitute_all(const std::vector<Poly>& images) const;
    // Divide by (x_i - x_j); returns false if not divisible.
    bool divide_by_difference(int i, int j, Poly& quotient) const;
    // Coefficients as a polynomial in variable v: result[d] multiplies x_v^d.
    std::vector<Poly> collect(int v) const;

    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    void normalize();
    std::vector<Term> terms_;
};

std::string q_to_string(const Q& q);
Q q_from_string(const std::string& s);

}  // namespace fdisk
