#include "loopexp/tables.hpp"

#include "loopexp/expr.hpp"
#include "loopexp/rewrite.hpp"
#include "loopexp/shapes.hpp"

namespace loopexp {

namespace {

SymbolicLabel u_over_delta() { return SymbolicLabel{LaurentPoly::u_poly(), 1}; }
SymbolicLabel v_over_delta() { return SymbolicLabel{LaurentPoly::v_poly(), 1}; }

const Basis& two_loop_basis() {
  static Basis basis = Basis::build(SpaceId::parse("Bn:2", 5));
  return basis;
}

// Writes c as an exact multiple of the reference class and returns the
// factor; NotInSpace when c is not proportional to it.
Rational coord_on(const Basis& basis, const LinearCombo& c, const Diagram& ref) {
  std::vector<Rational> x = basis.coords(c);
  LinearCombo rc;
  rc.add(ref, Rational(1));
  std::vector<Rational> y = basis.coords(rc);
  Rational ratio(0);
  for (size_t i = 0; i < y.size(); ++i)
    if (!y[i].is_zero()) {
      ratio = x[i] / y[i];
      break;
    }
  for (size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == ratio * y[i]))
      throw NotInSpace("combo is not proportional to the reference class");
  return ratio;
}

}  // namespace

Diagram theta1_shape() {
  return shapes::labeled_theta(u_over_delta(), std::nullopt, std::nullopt);
}

Diagram theta2_main_shape() {
  return shapes::labeled_theta(v_over_delta(), v_over_delta(), std::nullopt);
}

// The degree-5 reference class doubles as the correction figure: it has no
// degree-3 part and unit coefficient on itself, which is exactly what the
// (4a/3 - 1/3) correction of theta_2 requires.
Diagram theta2_correction_shape() { return shapes::theta_with_legs(2, 2, 0); }

Diagram two_loop_ref_deg3() { return shapes::theta_with_legs(2, 0, 0); }

Diagram two_loop_ref_deg5() { return shapes::theta_with_legs(2, 2, 0); }

TwoLoopGenus1 build_thetas(long a, int N) {
  TwoLoopGenus1 out;
  out.a = a;
  out.theta1.add(theta1_shape(), Rational(1));
  out.theta2.add(theta2_main_shape(), Rational(1));
  out.theta2.add(theta2_correction_shape(), Rational(4 * a - 1, 3));

  DeltaContext ctx{LaurentPoly::one() + LaurentPoly::u_poly() * Rational(a)};
  const Basis& basis = two_loop_basis();

  auto project = [&](const LinearCombo& c, int degree) {
    LinearCombo e = expand_labels(c, N, ctx);
    return e.filter([&](const Diagram& d) { return d.degree() == degree; });
  };
  LinearCombo ref3;
  ref3.add(two_loop_ref_deg3(), Rational(1));
  LinearCombo ref5;
  ref5.add(two_loop_ref_deg5(), Rational(1));

  out.t1_deg3 = coord_on(basis, project(out.theta1, 3), two_loop_ref_deg3());
  out.t1_deg5 = coord_on(basis, project(out.theta1, 5), two_loop_ref_deg5());
  out.t2_deg3 = coord_on(basis, project(out.theta2, 3), two_loop_ref_deg3());
  out.t2_deg5 = coord_on(basis, project(out.theta2, 5), two_loop_ref_deg5());
  out.independence_det = out.t1_deg3 * out.t2_deg5 - out.t2_deg3 * out.t1_deg5;
  return out;
}

TwoLoopSolution solve_two_loop(long a, const Rational& b1, const Rational& b2) {
  TwoLoopSolution out;
  Rational den1(16 * a - 4), den2(32 * a - 8);
  out.p = (Rational(28 * a - 5) * b1 + Rational(6) * b2) / den1;
  out.q = (Rational(12 * a - 1) * b1 + Rational(6) * b2) / den2;
  out.expansion.add(theta1_shape(), out.p);
  out.expansion.add(theta2_main_shape(), out.q);
  out.expansion.add(theta2_correction_shape(), out.q * Rational(4 * a - 1, 3));
  return out;
}

KExamples k_examples(long a) {
  KExamples out;
  Rational A(a * (a + 1));
  out.k0 = {A * Rational(-1, 16), A * Rational(1, 32)};
  out.k1 = {A * Rational(-1, 16) + Rational(1, 2), A * Rational(1, 32)};
  out.k2 = {A * Rational(-1, 16), A * Rational(1, 32) - Rational(3, 4)};
  out.det01 = out.k0.first * out.k1.second - out.k1.first * out.k0.second;
  out.det12 = out.k1.first * out.k2.second - out.k2.first * out.k1.second;
  out.det01_nonzero_expected = (a != 0 && a != -1);
  out.det12_nonzero_expected = (a == 0 || a == -1);
  return out;
}

std::vector<ThetaMN> theta_mn_set(int g) {
  if (g < 1) throw Malformed("theta_mn_set: g >= 1");
  std::vector<ThetaMN> out;
  for (int n = 1; n <= 2 * g; ++n)
    for (int m = 0; 2 * m <= n; ++m) out.push_back({n, m});
  return out;
}

long theta_mn_count(int g) { return static_cast<long>(theta_mn_set(g).size()); }

std::vector<Diagram> xset_3loop() {
  // Eleven 3-loop generators: the two closed 3-loop shapes that survive the
  // orientation quotient, decorated with u-power labels up to total
  // u-degree 3 plus the mixed u,u case. Stored as explicit data.
  std::vector<Diagram> out;
  auto upow = [](int k) {
    LaurentPoly p = LaurentPoly::one();
    for (int i = 0; i < k; ++i) p *= LaurentPoly::u_poly();
    return SymbolicLabel{p, 0};
  };
  // Shape A: the complete graph on four vertices.
  auto k4 = [&]() {
    DiagramBuilder b;
    int v0 = b.add_vertex(), v1 = b.add_vertex(), v2 = b.add_vertex(), v3 = b.add_vertex();
    b.connect(End::v(v0, 0), End::v(v1, 0));
    b.connect(End::v(v0, 1), End::v(v2, 0));
    b.connect(End::v(v0, 2), End::v(v3, 0));
    b.connect(End::v(v1, 1), End::v(v2, 2));
    b.connect(End::v(v1, 2), End::v(v3, 1));
    b.connect(End::v(v2, 1), End::v(v3, 2));
    return b.build();
  }();
  // Shape B: two bubbles joined into a ring (the closed 2-bubble chain).
  Diagram pretzel = shapes::closed_bubble_chain(2, 0);

  auto with_label = [&](const Diagram& base, int edge_no, const SymbolicLabel& lab) {
    Diagram d = base;
    int count = 0;
    for (int h = 0; h < d.dart_count(); ++h) {
      if (d.edge_key(h) != h) continue;
      if (count == edge_no) {
        d.add_label(h, lab);
        return d;
      }
      ++count;
    }
    throw Malformed("xset: edge index out of range");
  };

  out.push_back(k4);                              // 1: bare K4
  out.push_back(pretzel);                         // 2: bare ring
  out.push_back(with_label(k4, 0, upow(1)));      // 3
  out.push_back(with_label(pretzel, 0, upow(1)));  // 4: ring, bubble edge
  out.push_back(with_label(pretzel, 2, upow(1)));  // 5: ring, joining edge
  out.push_back(with_label(k4, 0, upow(2)));      // 6
  out.push_back(with_label(pretzel, 0, upow(2)));  // 7
  out.push_back(with_label(pretzel, 2, upow(2)));  // 8
  out.push_back(with_label(k4, 0, upow(3)));      // 9
  out.push_back(with_label(pretzel, 0, upow(3)));  // 10
  out.push_back(with_label(pretzel, 2, upow(3)));  // 11
  return out;
}

long crude_bound(int n, int g, const EnumLimits& limits) {
  if (n < 2 || g < 1) throw Malformed("crude_bound: need n >= 2, g >= 1");
  SpaceId spec = SpaceId::parse("Bn:" + std::to_string(n), n - 1);
  long m_n = static_cast<long>(enumerate_diagrams(spec, n - 1, limits).size());
  long base = 2 * g + 5;
  long out = m_n;
  for (int i = 0; i < 3 * (n - 1); ++i) out *= base;
  return out;
}

}  // namespace loopexp
