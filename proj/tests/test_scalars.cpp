#include "doctest.h"
#include "treecomp/extended.hpp"
#include "treecomp/rational.hpp"

using namespace treecomp;

TEST_CASE("rational arithmetic stays canonical") {
  Rational a(2, 10);
  CHECK(a.str() == "1/5");
  CHECK((a + a).str() == "2/5");
  CHECK((a * Rational(5)).str() == "1");
  CHECK((Rational(1) / Rational(3) + Rational(1) / Rational(6)).str() == "1/2");
  CHECK((-a).str() == "-1/5");
  CHECK(Rational(-7, -14).str() == "1/2");
}

TEST_CASE("rational parse handles fractions, integers and decimals") {
  CHECK(Rational::parse("0.2") == Rational(1, 5));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("1.5e2") == Rational(150));
  CHECK(Rational::parse(".5") == Rational(1, 2));
  CHECK(Rational::parse("2/6") == Rational(1, 3));
  CHECK(Rational::parse("-1/5") == Rational(-1, 5));
  CHECK(Rational::parse("1.25E-2") == Rational(1, 80));
  CHECK(Rational::parse("1.0D+1") == Rational(10));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("rational floor/ceil and double conversion") {
  CHECK(Rational(7, 2).floor_ll() == 3);
  CHECK(Rational(7, 2).ceil_ll() == 4);
  CHECK(Rational(-7, 2).floor_ll() == -4);
  CHECK(Rational(-7, 2).ceil_ll() == -3);
  CHECK(Rational(3).floor_ll() == 3);
  CHECK(Rational::from_double(0.25) == Rational(1, 4));
  CHECK(Rational::from_double(0.1) != Rational(1, 10));  // binary 0.1 is not 1/10
  CHECK(Rational(1, 5).is_integer() == false);
  CHECK(Rational(10, 5).is_integer());
}

TEST_CASE("extended values order totally") {
  const ExtValue ni = ExtValue::neg_inf();
  const ExtValue pi = ExtValue::pos_inf();
  const ExtValue a = ExtValue::of(Rational(-2, 5));
  const ExtValue b = ExtValue::of(Rational(0));
  CHECK(ni < a);
  CHECK(a < b);
  CHECK(b < pi);
  CHECK(ni < pi);
  CHECK(min(a, b) == a);
  CHECK(max(a, pi) == pi);
  CHECK(ExtValue::parse("-inf").is_neg_inf());
  CHECK(ExtValue::parse("inf").is_pos_inf());
  CHECK(ExtValue::parse("-2/5") == a);
  CHECK(a.str() == "-2/5");
  CHECK(pi.str() == "inf");
}

TEST_CASE("extended distance used by the gap ordering") {
  CHECK(abs_distance(ExtValue::of(Rational(3)), ExtValue::of(Rational(1))) ==
        ExtValue::of(Rational(2)));
  CHECK(abs_distance(ExtValue::pos_inf(), ExtValue::pos_inf()) == ExtValue::of(Rational(0)));
  CHECK(abs_distance(ExtValue::of(Rational(1)), ExtValue::pos_inf()).is_pos_inf());
}
