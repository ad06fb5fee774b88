#pragma once

#include "fdisk/poly.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <stdexcept>
#include <string>

namespace fdisk {

// Point parameters a_1..a_n are polynomial variables 0..n-1.
inline constexpr int kMaxPoints = 6;
inline constexpr int kNumPairs = kMaxPoints * (kMaxPoints - 1) / 2;

int pair_index(int i, int j);  // i < j

class CoeffError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Element of Q[a], Q[a][(a_i - a_j)^-1] or Q[[a]] truncated by total degree.
class ACoeff {
public:
    enum class Mode { POLY, LOCALIZED, TRUNCATED };

    ACoeff() = default;
    ACoeff(long c) : num_(Q(c)) {}
    ACoeff(const Q& c) : num_(c) {}
    explicit ACoeff(Poly p) : num_(std::move(p)) {}

    static ACoeff point(int i) { return ACoeff(Poly::var(i)); }
    static ACoeff localized(Poly num, const std::array<int, kNumPairs>& den);
    static ACoeff truncated(Poly p, int D);
    // 1 / (a_i - a_j) in LOCALIZED mode
    static ACoeff inv_difference(int i, int j);

    Mode mode() const { return mode_; }
    const Poly& num() const { return num_; }
    const std::array<int, kNumPairs>& den() const { return den_; }
    int trunc_degree() const { return D_; }
    bool has_denominator() const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && !has_denominator(); }
    Q constant_value() const;  // requires is_constant
    bool is_poly() const { return mode_ == Mode::POLY || (mode_ == Mode::LOCALIZED && !has_denominator()); }
    // Underlying polynomial when no denominator remains.
    const Poly& as_poly() const;

    ACoeff operator+(const ACoeff& o) const;
    ACoeff operator-(const ACoeff& o) const;
    ACoeff operator-() const;
    ACoeff operator*(const ACoeff& o) const;
    ACoeff& operator+=(const ACoeff& o);
    ACoeff& operator-=(const ACoeff& o);
    ACoeff& operator*=(const ACoeff& o);
    ACoeff operator*(const Q& c) const;
    bool operator==(const ACoeff& o) const;
    bool operator!=(const ACoeff& o) const { return !(*this == o); }

    ACoeff invert() const;
    ACoeff pow(int e) const;

    // Substitute a_i -> images[i]; images are POLY coefficients.
    ACoeff substitute(const std::vector<Poly>& images) const;
    ACoeff to_truncated(int D) const;
    ACoeff to_localized() const;

    std::string to_string() const;
    nlohmann::json to_json(int nvars) const;
    static ACoeff from_json(const nlohmann::json& j);

private:
    void canonicalize();
    static void promote(ACoeff& x, ACoeff& y);

    Mode mode_ = Mode::POLY;
    Poly num_;
    std::array<int, kNumPairs> den_{};
    int D_ = 0;
};

std::string mode_name(ACoeff::Mode m);

}  // namespace fdisk
