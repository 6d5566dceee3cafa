#include "doctest.h"
#include "loopexp/alexander.hpp"
#include "loopexp/expr.hpp"
#include "loopexp/hseries.hpp"
#include "loopexp/laurent.hpp"
#include "loopexp/rational.hpp"
#include "oracles.hpp"

using namespace loopexp;

TEST_CASE("rational arithmetic stays reduced") {
  Rational a(6, 4);
  CHECK(a.str() == "3/2");
  CHECK((a * Rational(2)).str() == "3");
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK(Rational::parse("-7/21").str() == "-1/3");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(rational_pow(Rational(2, 3), -2) == Rational(9, 4));
}

TEST_CASE("membership in Z") {
  LaurentPoly f = parse_laurent("1 + 2*(t + t^-1 - 2)");
  CHECK(is_in_Z(f));
  CHECK_FALSE(is_in_Z(LaurentPoly::t_power(1)));
  CHECK(is_in_Z(LaurentPoly::one()));
  // Symmetric and integral but f(1) = 3: not in Z.
  CHECK_FALSE(is_in_Z(parse_laurent("3")));
  // f(1) = 1 but half-integer coefficients: not in Z.
  CHECK_FALSE(is_in_Z(parse_laurent("1 + u/2")));
}

TEST_CASE("deg_Z via the u-basis rewrite") {
  for (long a : {1L, -3L, 7L}) {
    AlexanderPoly f = AlexanderPoly::genus1(a);
    CHECK(deg_Z(f) == 1);
    CHECK(f.u_coeffs().size() == 1);
    CHECK(f.u_coeffs()[0] == Rational(a));
  }
  CHECK(deg_Z(AlexanderPoly(LaurentPoly::one())) == 0);

  // t - 1 + t^-1 = 1 + u; cross-check by the polynomial division oracle.
  LaurentPoly g = parse_laurent("t - 1 + t^-1");
  CHECK(deg_Z(AlexanderPoly(g)) == 1);
  LaurentPoly q = (g - LaurentPoly::one()).divide_exact(LaurentPoly::u_poly());
  CHECK(q == LaurentPoly::one());

  CHECK_THROWS_AS(AlexanderPoly(LaurentPoly::t_power(1)), NotInZ);

  // deg 2 example: 1 - u + 3u^2.
  LaurentPoly h = parse_laurent("1 - u + 3*u^2");
  AlexanderPoly ah(h);
  CHECK(deg_Z(ah) == 2);
  CHECK(ah.u_coeffs()[0] == Rational(-1));
  CHECK(ah.u_coeffs()[1] == Rational(3));
}

TEST_CASE("exp substitution t = e^h") {
  SUBCASE("u = t + t^-1 - 2 -> h^2 + h^4/12") {
    HSeries s = LaurentPoly::u_poly().exp_substitute(4);
    HSeries expect = oracles::exp_oracle(1, 4) + oracles::exp_oracle(-1, 4);
    expect.set(0, expect.coeff(0) - Rational(2));
    CHECK(s == expect);
    CHECK(s.coeff(0) == Rational(0));
    CHECK(s.coeff(2) == Rational(1));
    CHECK(s.coeff(4) == Rational(1, 12));
  }
  SUBCASE("v = t - t^-1 -> 2h + h^3/3 + h^5/60") {
    HSeries s = LaurentPoly::v_poly().exp_substitute(5);
    CHECK(s.coeff(1) == Rational(2));
    CHECK(s.coeff(3) == Rational(1, 3));
    CHECK(s.coeff(5) == Rational(1, 60));
    CHECK(s == oracles::exp_oracle(1, 5) - oracles::exp_oracle(-1, 5));
  }
  SUBCASE("constants pass through") {
    CHECK(LaurentPoly::one().exp_substitute(3) == HSeries::constant(Rational(1), 3));
  }
  SUBCASE("ring morphism on random inputs") {
    oracles::Rng rng(42);
    for (int i = 0; i < 50; ++i) {
      LaurentPoly f = oracles::random_laurent(rng), g = oracles::random_laurent(rng);
      CHECK((f * g).exp_substitute(6) == f.exp_substitute(6) * g.exp_substitute(6));
      CHECK((f + g).exp_substitute(6) == f.exp_substitute(6) + g.exp_substitute(6));
    }
  }
  SUBCASE("members of Z expand even with constant term 1") {
    oracles::Rng rng(7);
    for (int i = 0; i < 30; ++i) {
      LaurentPoly f = LaurentPoly::one();
      LaurentPoly u = LaurentPoly::u_poly(), upow = u;
      for (int j = 1; j <= 3; ++j) {
        f += upow * Rational(rng.range(-4, 4));
        upow *= u;
      }
      HSeries s = f.exp_substitute(7);
      CHECK(s.coeff(0) == Rational(1));
      for (int k = 1; k <= 7; k += 2) CHECK(s.coeff(k) == Rational(0));
    }
  }
}

TEST_CASE("series inversion") {
  SUBCASE("1/Delta(e^h) for Delta = 1 + a u, against the geometric oracle") {
    for (long a : {1L, 2L, -3L}) {
      LaurentPoly delta = LaurentPoly::one() + LaurentPoly::u_poly() * Rational(a);
      HSeries s = delta.exp_substitute(4);
      HSeries inv = s.invert();
      // Oracle: 1/(1+x) = 1 - x + x^2 - ... with x = s - 1.
      HSeries x = s - HSeries::constant(Rational(1), 4);
      HSeries oracle = HSeries::constant(Rational(1), 4);
      HSeries pw = HSeries::constant(Rational(1), 4);
      for (int k = 1; k <= 4; ++k) {
        pw = pw * x;
        oracle = oracle + pw * Rational(k % 2 ? -1 : 1);
      }
      CHECK(inv == oracle);
      CHECK(inv.coeff(2) == Rational(-a));
      CHECK(inv.coeff(4) == Rational(a) * Rational(a) - Rational(a, 12));
      CHECK(s * inv == HSeries::constant(Rational(1), 4));
    }
  }
  SUBCASE("unit and geometric series") {
    CHECK(HSeries::constant(Rational(1), 3).invert() == HSeries::constant(Rational(1), 3));
    HSeries s(2, Rational(1));
    s.set(1, Rational(1));  // 1 + h
    HSeries inv = s.invert();
    CHECK(inv.coeff(0) == Rational(1));
    CHECK(inv.coeff(1) == Rational(-1));
    CHECK(inv.coeff(2) == Rational(1));
  }
  SUBCASE("NonUnit rejected") {
    HSeries s(3);  // zero constant term
    CHECK_THROWS_AS(s.invert(), std::domain_error);
  }
  SUBCASE("involution on random units") {
    oracles::Rng rng(11);
    for (int i = 0; i < 40; ++i) {
      HSeries s(5);
      s.set(0, Rational(rng.range(1, 5)));
      for (int k = 1; k <= 5; ++k) s.set(k, Rational(rng.range(-6, 6), rng.range(1, 3)));
      CHECK(s.invert().invert() == s);
    }
  }
}

TEST_CASE("laurent ring axioms on random inputs") {
  oracles::Rng rng(123);
  for (int i = 0; i < 60; ++i) {
    LaurentPoly a = oracles::random_laurent(rng), b = oracles::random_laurent(rng),
                c = oracles::random_laurent(rng);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("laurent exact division") {
  LaurentPoly u = LaurentPoly::u_poly();
  LaurentPoly p = u * u * Rational(3) + u;
  CHECK(p.divide_exact(u) == u * Rational(3) + LaurentPoly::one());
  CHECK_THROWS_AS((p + LaurentPoly::one()).divide_exact(u), std::domain_error);
}

TEST_CASE("expression parser") {
  CHECK(parse_laurent("1 + 2*(t + t^-1 - 2)") == LaurentPoly::one() + LaurentPoly::u_poly() * Rational(2));
  CHECK(parse_laurent("t^3 - t^-3") ==
        LaurentPoly::t_power(3) - LaurentPoly::t_power(-3));
  CHECK(parse_laurent("u") == LaurentPoly::u_poly());
  CHECK(parse_laurent("v") == LaurentPoly::v_poly());
  CHECK(parse_laurent(" -v / 2 ") == LaurentPoly::v_poly() * Rational(-1, 2));
  CHECK(parse_laurent("(t-1)*(t^-1-1)") == -LaurentPoly::u_poly());
  CHECK_THROWS_AS(parse_laurent("t +"), ParseError);
  CHECK_THROWS_AS(parse_laurent("(t"), ParseError);
  CHECK_THROWS_AS(parse_laurent("q"), ParseError);
  CHECK_THROWS_AS(parse_laurent("1/(t+1)"), ParseError);
}

TEST_CASE("json round trips") {
  oracles::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    LaurentPoly p = oracles::random_laurent(rng);
    CHECK(LaurentPoly::from_json(p.json()) == p);
  }
  HSeries s = LaurentPoly::u_poly().exp_substitute(5);
  CHECK(HSeries::from_json(s.json()) == s);
}

TEST_CASE("hseries exp/log round trip") {
  oracles::Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    HSeries s(6);
    for (int k = 1; k <= 6; ++k) s.set(k, Rational(rng.range(-4, 4), rng.range(1, 4)));
    CHECK(s.exp().log() == s);
  }
}
