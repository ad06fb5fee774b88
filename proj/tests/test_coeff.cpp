#include "oracles.hpp"

#include <doctest.h>

using namespace fdisk;

namespace {
ACoeff a(int i) { return ACoeff::point(i); }
}

TEST_CASE("coeff: polynomial identities") {
    CHECK((a(0) - a(1)) * (a(0) + a(1)) == a(0) * a(0) - a(1) * a(1));
    CHECK(ACoeff::inv_difference(0, 1) + ACoeff::inv_difference(1, 0) == ACoeff(0));
    CHECK((ACoeff::inv_difference(0, 1) * (a(0) - a(1))) == ACoeff(1));
}

TEST_CASE("coeff: truncated geometric series") {
    ACoeff x = ACoeff::truncated(Poly(1) - Poly::var(0), 2);
    ACoeff inv = x.invert();
    Poly expect = Poly(1) + Poly::var(0) + Poly::var(0).pow(2);
    CHECK(inv.num() == expect);
    CHECK(inv.mode() == ACoeff::Mode::TRUNCATED);
    CHECK(x * inv == ACoeff::truncated(Poly(1), 2));
}

TEST_CASE("coeff: invert") {
    CHECK(ACoeff(2).invert() == ACoeff(Q(1, 2)));
    ACoeff y = ACoeff::truncated(Poly(2) + Poly::var(0) - Poly::var(1), 1);
    Poly d = Poly::var(0) - Poly::var(1);
    CHECK(y.invert().num() == Poly(Q(1, 2)) - d * Q(1, 4));
    ACoeff l = (a(0) - a(1)).to_localized().invert();
    CHECK(l == ACoeff::inv_difference(0, 1));
    CHECK(l.has_denominator());
    CHECK_THROWS_AS(ACoeff::truncated(Poly::var(0), 3).invert(), CoeffError);
    try {
        (void)(a(0) + ACoeff(1)).invert();
        FAIL("expected a non-unit error");
    } catch (const CoeffError& e) {
        CHECK(std::string(e.what()).find("constant term 1") != std::string::npos);
    }
}

TEST_CASE("coeff: mode clash is explicit") {
    ACoeff t = ACoeff::truncated(Poly::var(0), 2);
    ACoeff l = ACoeff::inv_difference(0, 1);
    CHECK_THROWS_AS(t + l, CoeffError);
    CHECK_THROWS_AS(t * l, CoeffError);
    // POLY promotes to either side
    CHECK((a(0) + t).mode() == ACoeff::Mode::TRUNCATED);
    CHECK((a(0) * l).mode() == ACoeff::Mode::LOCALIZED);
}

TEST_CASE("coeff: ring axioms on random inputs") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        ACoeff x = oracle::random_poly_coeff(rng, 3, 2), y = oracle::random_poly_coeff(rng, 3, 2),
               z = oracle::random_poly_coeff(rng, 3, 2);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + y == y + x);
        CHECK(x - x == ACoeff(0));
        ACoeff lx = x.to_localized() * ACoeff::inv_difference(0, 2);
        ACoeff ly = y.to_localized() * ACoeff::inv_difference(1, 2).pow(2);
        CHECK((lx + ly) * z == lx * z + ly * z);
    }
}

TEST_CASE("coeff: truncated inverse is two-sided") {
    std::mt19937 rng(5);
    for (int D = 0; D <= 4; ++D)
        for (int trial = 0; trial < 5; ++trial) {
            ACoeff x = oracle::random_poly_coeff(rng, 2, 2);
            if (x.num().constant_term() == 0) x += ACoeff(1);
            ACoeff t = x.to_truncated(D);
            CHECK(t * t.invert() == ACoeff::truncated(Poly(1), D));
            CHECK(t.invert() * t == ACoeff::truncated(Poly(1), D));
        }
}

TEST_CASE("coeff: json round trip") {
    std::vector<ACoeff> xs = {ACoeff(Q(-7, 3)), a(0) * a(1) - a(2),
                              (a(0) + ACoeff(1)).to_localized() * ACoeff::inv_difference(1, 0).pow(3),
                              ACoeff::truncated(Poly::var(1).pow(2) + Poly(Q(1, 5)), 3)};
    for (const auto& x : xs) CHECK(ACoeff::from_json(x.to_json(3)) == x);
    nlohmann::json j = nlohmann::json::parse(R"({"mode": "LOCALIZED", "terms": [["1", [0, 0]]], "den": [[1, 0, 1]]})");
    CHECK(ACoeff::from_json(j) == ACoeff::inv_difference(1, 0));
}
