#include <catch2/catch_amalgamated.hpp>

#include "kneadlab/numbers.hpp"
#include "kneadlab/symbols.hpp"

using namespace kneadlab;

TEST_CASE("rational parsing and printing") {
  REQUIRE(parse_rational("3/4") == Rational(3, 4));
  REQUIRE(parse_rational("-7/2") == Rational(-7, 2));
  REQUIRE(parse_rational("5") == Rational(5));
  REQUIRE(rational_str(Rational(6, 4)) == "3/2");
  REQUIRE_THROWS(parse_rational("1/0"));
  REQUIRE_THROWS(parse_rational("abc"));
}

TEST_CASE("logarithms of big integers") {
  Integer n = 1;
  for (int i = 0; i < 100; ++i) n *= 2;
  REQUIRE_THAT(log_integer(n), Catch::Matchers::WithinAbs(100.0 * std::log(2.0), 1e-9));
  REQUIRE_THAT(log_rational(Rational(9, 4)),
               Catch::Matchers::WithinAbs(2 * std::log(1.5), 1e-12));
}

TEST_CASE("golden ratio arithmetic is exact") {
  auto f = golden_field();
  Number phi = Number::generator(f);
  REQUIRE(phi * phi == phi + Number(1));
  REQUIRE(Number(1) / phi == phi - Number(1));
  REQUIRE(phi > Number(Rational(3, 2)));
  REQUIRE(phi < Number(Rational(5, 3)));
  REQUIRE_THAT(phi.to_double(), Catch::Matchers::WithinAbs(1.6180339887498949, 1e-15));
  // (phi^2 - phi - 1) normalises to the rational zero
  Number z = phi * phi - phi - Number(1);
  REQUIRE(z.is_rational());
  REQUIRE(z.sign() == 0);
}

TEST_CASE("sqrt2 field") {
  Number r2 = Number::generator(sqrt2_field());
  REQUIRE(r2 * r2 == Number(2));
  REQUIRE((Number(1) / r2) * Number(2) == r2);
  REQUIRE_THAT(r2.to_double(), Catch::Matchers::WithinAbs(1.4142135623730951, 1e-15));
}

TEST_CASE("mixed-field arithmetic is rejected") {
  Number phi = Number::generator(golden_field());
  Number r2 = Number::generator(sqrt2_field());
  REQUIRE_THROWS(phi + r2);
}

TEST_CASE("comparisons refine until decidable") {
  Number phi = Number::generator(golden_field());
  // fibonacci convergents straddle phi; exact comparison must sort them out
  REQUIRE(phi > Number(Rational(987, 610)));
  REQUIRE(phi < Number(Rational(1597, 987)));
  REQUIRE(phi * Number(Rational(610)) - Number(987) > Number(0));
}

TEST_CASE("symbol sequences") {
  auto s = SymbolSeq::periodic({0, 1}, {1, 0});
  REQUIRE(s.at(0) == 0);
  REQUIRE(s.at(1) == 1);
  REQUIRE(s.at(2) == 1);
  REQUIRE(s.at(3) == 0);
  REQUIRE(s.at(4) == 1);
  REQUIRE_FALSE(s.truncated);
  auto t = s.shifted(3);
  REQUIRE(t.head.empty());
  REQUIRE(t.at(0) == 0);
  REQUIRE(t.at(1) == 1);
  REQUIRE(seq_equal(t, SymbolSeq::periodic({}, {0, 1})));
  REQUIRE_FALSE(seq_equal(s, t));

  auto w = SymbolSeq::finite({2, 0, 1});
  REQUIRE(w.truncated);
  REQUIRE(w.known_length() == 3);
  REQUIRE_THROWS(w.at(3));
  REQUIRE(w.shifted(2).at(0) == 1);
}
