#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "midlayer/errors.hpp"
#include "midlayer/rational.hpp"

using namespace midlayer;

TEST_CASE("parsing accepts p/q, integers, and exact decimals") {
  CHECK(Rat::parse("3/4") == Rat(3, 4));
  CHECK(Rat::parse("18") == Rat(18));
  CHECK(Rat::parse("-6/8") == Rat(-3, 4));
  CHECK(Rat::parse("0.25") == Rat(1, 4));
  CHECK(Rat::parse("1.5") == Rat(3, 2));
  CHECK(Rat::parse("-0.125") == Rat(-1, 8));
  CHECK_THROWS_AS(Rat::parse(""), parse_error);
  CHECK_THROWS_AS(Rat::parse("abc"), parse_error);
  CHECK_THROWS_AS(Rat::parse("1/0"), parse_error);
}

TEST_CASE("arithmetic is exact and canonical") {
  Rat a(1, 3), b(1, 6);
  CHECK((a + b) == Rat(1, 2));
  CHECK((a - b) == Rat(1, 6));
  CHECK((a * b) == Rat(1, 18));
  CHECK((a / b) == Rat(2));
  CHECK((-a).str() == "-1/3");
  CHECK(Rat(10, 28).str() == "5/14");
  CHECK(Rat(2).pow(10) == Rat(1024));
  CHECK(Rat(2).pow(-3) == Rat(1, 8));
  CHECK(Rat(1, 2).pow(0) == Rat(1));
  CHECK_THROWS_AS(Rat(0).pow(-1), parse_error);
  CHECK_THROWS_AS(Rat(1) / Rat(0), parse_error);
}

TEST_CASE("binomials and factorials") {
  CHECK(Rat::binom(19, 10) == Rat(92378));
  CHECK(Rat::binom(5, 3) == Rat(10));
  CHECK(Rat::binom(3, 7) == Rat(0));
  CHECK(Rat::factorial(6) == Rat(720));
}

TEST_CASE("log stays accurate far outside double range") {
  Rat big = Rat(2).pow(5000);
  CHECK(big.log() == doctest::Approx(5000 * std::log(2.0)).epsilon(1e-14));
  Rat tiny = Rat(1, 3).pow(4000);
  CHECK(tiny.log() == doctest::Approx(-4000 * std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(Rat(0).log(), parse_error);
  CHECK_THROWS_AS(Rat(-1).log(), parse_error);
}

TEST_CASE("exact scalar modes") {
  auto e = ExactScalar::from_rat(Rat(7, 4));
  CHECK(e.is_exact());
  CHECK(e.str() == "7/4");
  CHECK(e.log_abs() == doctest::Approx(std::log(1.75)));
  auto l = ExactScalar::from_log(-1, 2.5);
  CHECK(!l.is_exact());
  CHECK(l.sign() == -1);
  CHECK(l.to_double() == doctest::Approx(-std::exp(2.5)));
  CHECK_THROWS_AS(l.rat(), parse_error);
}
