#include "doctest.h"
#include "loopexp/aarhus.hpp"
#include "loopexp/shapes.hpp"
#include "loopexp/sl2.hpp"
#include "loopexp/spaces.hpp"
#include "oracles.hpp"
#include "pairing_oracle.hpp"

using namespace loopexp;

TEST_CASE("pairing basics") {
  SUBCASE("no marked legs passes through") {
    LinearCombo one;
    one.add(Diagram{}, Rational(1));
    LinearCombo c2;
    c2.add(shapes::theta(), Rational(3));
    LinearCombo out = pair_combos(one, c2, {"x"});
    CHECK(out.coeff_of(shapes::theta()) == Rational(3));
  }
  SUBCASE("strut against a two-legged wheel gives both gluings") {
    LinearCombo strut;
    strut.add(shapes::strut("x", "x"), Rational(1));
    LinearCombo wheel;
    wheel.add(shapes::wheel(2, "x"), Rational(1));
    LinearCombo out = pair_combos(strut, wheel, {"x"});
    // Both bijections close the wheel into the same 2-loop diagram.
    CHECK(out.size() == 1);
    CHECK(out.terms().begin()->second.coeff.abs() == Rational(2));
    CHECK(out.terms().begin()->second.diagram.loop_number() == 2);
    CHECK(out.terms().begin()->second.diagram.legs.empty());
  }
  SUBCASE("gluing both strut ends into one vertex dies by antisymmetry") {
    // Y-diagram with two x-legs on one vertex: both gluings give tadpoles.
    DiagramBuilder b;
    int v = b.add_vertex();
    int lx1 = b.add_free_leg("x"), lx2 = b.add_free_leg("x"), lh = b.add_free_leg("h");
    b.connect(End::v(v, 0), End::leg(lx1));
    b.connect(End::v(v, 1), End::leg(lx2));
    b.connect(End::v(v, 2), End::leg(lh));
    LinearCombo yd;
    yd.add(b.build(), Rational(1));
    LinearCombo strut;
    strut.add(shapes::strut("x", "x"), Rational(1));
    CHECK(pair_combos(strut, yd, {"x"}).is_zero());
  }
  SUBCASE("mismatched leg counts contribute zero") {
    LinearCombo strut;
    strut.add(shapes::strut("x", "x"), Rational(1));
    LinearCombo one_leg;
    one_leg.add(shapes::strut("x", "h"), Rational(1));
    CHECK(pair_combos(strut, one_leg, {"x"}).is_zero());
  }
  SUBCASE("closing a bare strut chain raises PPartViolation") {
    LinearCombo s1, s2;
    s1.add(shapes::strut("x", "x"), Rational(1));
    s2.add(shapes::strut("x", "x"), Rational(1));
    CHECK_THROWS_AS(pair_combos(s1, s2, {"x"}), PPartViolation);
  }
}

TEST_CASE("pairing is bilinear and respects degree bookkeeping") {
  LinearCombo strut;
  strut.add(shapes::strut("x", "x"), Rational(1));
  LinearCombo wheel;
  wheel.add(shapes::wheel(2, "x"), Rational(1));
  LinearCombo lhs = pair_combos(strut, wheel * Rational(5), {"x"});
  LinearCombo rhs = pair_combos(strut, wheel, {"x"}) * Rational(5);
  CHECK((lhs - rhs).is_zero());

  // degree(out) = deg(C1) + deg(C2) - glued pairs
  LinearCombo out = pair_combos(strut, wheel, {"x"});
  for (const auto& [code, term] : out.terms())
    CHECK(term.diagram.degree() ==
          shapes::strut("x", "x").degree() + shapes::wheel(2, "x").degree() - 2);
}

TEST_CASE("optimized pairing equals the brute-force oracle") {
  // Configurations with up to 6 marked legs per label, mixing two labels.
  std::vector<Diagram> lefts = {
      shapes::strut("x", "x"),
      disjoint_union(shapes::strut("x", "x"), shapes::strut("x", "x")),
      disjoint_union(shapes::strut("x", "y"), shapes::strut("x", "y")),
      disjoint_union(shapes::strut("x", "x"), shapes::strut("y", "y")),
  };
  std::vector<Diagram> rights = {
      shapes::wheel(2, "x"),
      shapes::wheel(4, "x"),
      shapes::bubble_chain(1, "x", "x"),
      disjoint_union(shapes::wheel(2, "x"), shapes::wheel(2, "y")),
      disjoint_union(shapes::bubble_chain(1, "x", "y"), shapes::wheel(2, "y")),
  };
  int compared = 0;
  for (const Diagram& l : lefts)
    for (const Diagram& r : rights) {
      LinearCombo cl, cr;
      cl.add(l, Rational(1));
      cr.add(r, Rational(1));
      LinearCombo fast, slow;
      bool fast_threw = false, slow_threw = false;
      try {
        fast = pair_combos(cl, cr, {"x", "y"});
      } catch (const PPartViolation&) {
        fast_threw = true;
      }
      try {
        slow = pairing_oracle::pair_oracle_combos(cl, cr, {"x", "y"});
      } catch (const PPartViolation&) {
        slow_threw = true;
      }
      CHECK(fast_threw == slow_threw);
      if (!fast_threw) {
        LinearCombo diff = fast - slow;
        CHECK(diff.is_zero());
      }
      ++compared;
    }
  CHECK(compared == 20);
}

TEST_CASE("labels ride through gluings") {
  LinearCombo strut;
  strut.add(shapes::labeled_strut("x", "x", SymbolicLabel::t_power(1)), Rational(1));
  LinearCombo chain;
  chain.add(shapes::bubble_chain(1, "x", "x"), Rational(1));
  LinearCombo out = pair_combos(strut, chain, {"x"});
  REQUIRE(!out.is_zero());
  for (const auto& [code, term] : out.terms()) {
    REQUIRE(term.diagram.labels.size() == 1);
    const auto& lab = term.diagram.labels.begin()->second;
    auto mono = std::get<SymbolicLabel>(lab.value).num.monomial();
    REQUIRE(mono.has_value());
    CHECK(std::abs(mono->first) == 1);  // t or t^-1 depending on the side
  }
}

TEST_CASE("aarhus integral basics on a surgery matrix") {
  TangleSampler sampler(3);
  EqLinkingMatrix m = build_surgery_matrix(sampler.sample(1));
  InverseOverDelta inv = invert_over_delta(m);
  GaussianPart g = GaussianPart::from_inverse(inv, 5);

  SUBCASE("empty P gives the constant 1") {
    LinearCombo p;
    p.add(Diagram{}, Rational(1));
    LinearCombo out = aarhus_integral(p, g, 5);
    CHECK(out.size() == 1);
    CHECK(out.coeff_of(Diagram{}) == Rational(1));
  }
  SUBCASE("scaling P scales the output") {
    LinearCombo p;
    p.add(shapes::bubble_chain(2, "x3", "x4"), Rational(1));
    LinearCombo a = aarhus_integral(p, g, 5);
    LinearCombo b = aarhus_integral(p * Rational(7), g, 5);
    LinearCombo diff = b - a * Rational(7);
    CHECK(diff.is_zero());
  }
  SUBCASE("P terms violating the P-part condition are rejected") {
    LinearCombo p;
    p.add(shapes::strut("x3", "x4"), Rational(1));
    CHECK_THROWS_AS(aarhus_integral(p, g, 5), PPartViolation);
  }
}

TEST_CASE("combo exp/log round trip") {
  oracles::Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    LinearCombo conn;
    conn.add(shapes::theta(), Rational(rng.range(-3, 3)));
    conn.add(shapes::strut("h", "h"), Rational(rng.range(-3, 3), rng.range(1, 3)));
    conn.add(shapes::wheel(2), Rational(rng.range(-2, 2)));
    LinearCombo exp = combo_exp(conn, 4);
    LinearCombo back = combo_log(exp, 4);
    LinearCombo diff = back - conn;
    // log(exp(x)) = x modulo degree > 4 terms
    diff = diff.filter([](const Diagram& d) { return d.degree() <= 4; });
    CHECK(diff.is_zero());
  }
  LinearCombo no_unit;
  no_unit.add(shapes::theta(), Rational(1));
  CHECK_THROWS_AS(combo_log(no_unit, 4), NonUnitConstant);
}

TEST_CASE("loop projection is idempotent and picks connected loops") {
  LinearCombo mix;
  mix.add(shapes::theta(), Rational(2));                                 // 2-loop conn
  mix.add(shapes::wheel(2), Rational(3));                                // 1-loop conn
  mix.add(disjoint_union(shapes::theta(), shapes::wheel(2)), Rational(5));  // disconnected
  LinearCombo p1 = loop_project(mix, 2);
  CHECK(p1.size() == 1);
  CHECK(p1.coeff_of(shapes::theta()) == Rational(2));
  LinearCombo p2 = loop_project(p1, 2);
  CHECK((p1 - p2).is_zero());
}

TEST_CASE("unknot normalization") {
  NuData nu = NuData::standard(6);
  LinearCombo unit;
  unit.add(Diagram{}, Rational(1));

  SUBCASE("sigma = 0 is the identity") {
    LinearCombo c;
    c.add(shapes::theta(), Rational(5));
    LinearCombo out = normalize_unknots(c, 0, 0, nu, 4);
    CHECK((out - c).is_zero());
  }
  SUBCASE("the exp(-+theta/16) factors cancel for sigma+ = sigma- = 1") {
    // At cutoff 1 the nu pairing is trivial, so the result must be exactly 1.
    LinearCombo out = normalize_unknots(unit, 1, 1, NuData::standard(1), 1);
    CHECK(out.size() == 1);
    CHECK(out.coeff_of(Diagram{}) == Rational(1));
    // One positive eigenvalue alone leaves +theta/16 at cutoff 1.
    LinearCombo plus = normalize_unknots(unit, 1, 0, NuData::standard(1), 1);
    CHECK(plus.coeff_of(shapes::theta()) == Rational(1, 16));
  }
  SUBCASE("multiplicative in the signature") {
    LinearCombo c;
    c.add(shapes::wheel(2), Rational(1));
    c.add(Diagram{}, Rational(1));
    LinearCombo once = normalize_unknots(normalize_unknots(c, 1, 0, nu, 4), 1, 1, nu, 4);
    LinearCombo both = normalize_unknots(c, 2, 1, nu, 4);
    CHECK((once - both).is_zero());
  }
  SUBCASE("insufficient nu data is reported") {
    CHECK_THROWS_AS(normalize_unknots(unit, 1, 0, NuData::standard(2), 6), InsufficientNu);
  }
}

TEST_CASE("clasper difference on genus-1 samples") {
  TangleSampler sampler(12);
  for (int trial = 0; trial < 3; ++trial) {
    EqLinkingMatrix m = build_surgery_matrix(sampler.sample(1));
    Diagram clasper = shapes::bubble_chain(2, "x3", "x4");
    ClasperDifference cd = clasper_difference(m, clasper, 5);
    CHECK(cd.r * Rational(2) == Rational((cd.r * Rational(2)).to_long()));  // half-integer *2
    CHECK(cd.leading_matches);
    CHECK(cd.leading_degree == 4);  // closed 2-chain plus two h-legs
    // the leading class is certified nonzero through sl2
    LinearCombo lead = cd.delta.filter(
        [&](const Diagram& d) { return d.degree() == cd.leading_degree; });
    CHECK(nonvanishing_certificate(lead));
  }
}

TEST_CASE("symbolic pipeline stays in the E0 label family") {
  TangleSampler sampler(31);
  EqLinkingMatrix m = build_surgery_matrix(sampler.sample(1));
  InverseOverDelta inv = invert_over_delta(m);
  GaussianPart g = GaussianPart::from_inverse_symbolic(inv);
  LinearCombo p;
  p.add(shapes::bubble_chain(2, "x3", "x4"), Rational(1));
  LinearCombo glued = aarhus_integral(p, g, 7, /*expand=*/false);
  LinearCombo projected = loop_project(glued, 3);
  CHECK(!projected.is_zero());
  ESpec e0{0, 3, m.genus + 2, inv.delta.poly()};
  CHECK(in_E(projected, e0));
}
