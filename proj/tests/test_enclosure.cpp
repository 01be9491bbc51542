#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rical/enclosure.hpp"

using rical::Enclosure;
using rical::Rational;

namespace {
const Rational kTol(1, 1000000000);

void check_contains(const Enclosure& e, double reference, double slack = 1e-12) {
    CHECK(e.lo.to_double() <= reference + slack);
    CHECK(e.hi.to_double() >= reference - slack);
}
}  // namespace

TEST_CASE("interval arithmetic endpoints") {
    Enclosure a(Rational(1, 2), Rational(3, 4));
    Enclosure b(Rational(-2), Rational(3));
    Enclosure s = a + b;
    CHECK(s.lo == Rational(-3, 2));
    CHECK(s.hi == Rational(15, 4));
    Enclosure p = a * b;
    CHECK(p.lo == Rational(-3, 2));
    CHECK(p.hi == Rational(9, 4));
    CHECK_THROWS_AS(a / b, std::domain_error);
    Enclosure q = a / Enclosure(Rational(2), Rational(4));
    CHECK(q.lo == Rational(1, 8));
    CHECK(q.hi == Rational(3, 8));
}

TEST_CASE("sqrt enclosures are sound, tight and exact on squares") {
    Enclosure r2 = rical::enc::sqrt(Rational(2), kTol);
    CHECK(r2.width() <= kTol);
    // frozen decimal bracket for sqrt(2) = 1.41421356237309504880...
    CHECK(r2.lo <= Rational::parse("1.414213562373095049"));
    CHECK(r2.hi >= Rational::parse("1.414213562373095048"));

    Enclosure ex = rical::enc::sqrt(Rational(4, 9), kTol);
    CHECK(ex.is_exact());
    CHECK(ex.lo == Rational(2, 3));
    CHECK(rical::enc::sqrt(Rational(0)).is_exact());
    CHECK_THROWS_AS(rical::enc::sqrt(Rational(-1)), std::domain_error);
}

TEST_CASE("nth roots and rational powers") {
    Enclosure c = rical::enc::root(Rational(2), 3, kTol);
    CHECK(c.width() <= kTol);
    check_contains(c, std::cbrt(2.0));

    CHECK(rical::enc::pow(Rational(8), Rational(2, 3), kTol).is_exact());
    CHECK(rical::enc::pow(Rational(8), Rational(2, 3), kTol).lo == Rational(4));
    CHECK(rical::enc::pow(Rational(1, 8), Rational(-1, 3), kTol).lo == Rational(2));

    Enclosure p = rical::enc::pow(Rational(5), Rational(3, 7), kTol);
    CHECK(p.width() <= kTol);
    check_contains(p, std::pow(5.0, 3.0 / 7.0));

    auto e1 = rical::enc::exact_pow(Rational(27, 8), Rational(2, 3));
    REQUIRE(e1.has_value());
    CHECK(*e1 == Rational(9, 4));
    CHECK_FALSE(rical::enc::exact_pow(Rational(2), Rational(1, 2)).has_value());
}

TEST_CASE("exp and log enclosures") {
    check_contains(rical::enc::exp(Rational(1), kTol), std::exp(1.0));
    check_contains(rical::enc::exp(Rational(-3, 2), kTol), std::exp(-1.5));
    check_contains(rical::enc::exp(Rational(10), kTol), std::exp(10.0), 1e-4);
    CHECK(rical::enc::exp(Rational(1), kTol).width() <= kTol);

    check_contains(rical::enc::log(Rational(2), kTol), std::log(2.0));
    check_contains(rical::enc::log(Rational(1, 7), kTol), std::log(1.0 / 7.0));
    check_contains(rical::enc::log(Rational(1000), kTol), std::log(1000.0));
    CHECK(rical::enc::log(Rational(2), kTol).width() <= kTol * Rational(4));
    CHECK_THROWS_AS(rical::enc::log(Rational(0)), std::domain_error);
}

TEST_CASE("monotone enclosure extensions") {
    Enclosure x(Rational(2), Rational(3));
    Enclosure y = rical::enc::pow(x, Rational(1, 2), kTol);
    CHECK(y.lo.to_double() <= std::sqrt(2.0));
    CHECK(y.hi.to_double() >= std::sqrt(3.0));
    Enclosure z = rical::enc::pow(x, Rational(-1, 2), kTol);
    CHECK(z.lo.to_double() <= 1.0 / std::sqrt(3.0) + 1e-12);
    CHECK(z.hi.to_double() >= 1.0 / std::sqrt(2.0) - 1e-12);
}
