#pragma once

#include <vector>

#include "loopexp/diagram.hpp"
#include "loopexp/spaces.hpp"

namespace loopexp {

/// The genus-1 two-loop pair theta_1, theta_2 for Delta = 1 + a u, together
/// with their expansion coefficients on the fixed degree-3/degree-5
/// reference classes.
struct TwoLoopGenus1 {
  long a = 0;
  LinearCombo theta1;  // symbolic labels over Delta
  LinearCombo theta2;
  Rational t1_deg3, t1_deg5;  // expected (1, -2a + 1/6)
  Rational t2_deg3, t2_deg5;  // expected (-2, 28a/3 - 5/3)
  Rational independence_det;  // 16a/3 - 4/3
};

TwoLoopGenus1 build_thetas(long a, int N);

/// Closed-form solution of the two-loop system for measured b1, b2:
/// p = ((28a-5) b1 + 6 b2) / (16a-4), q = ((12a-1) b1 + 6 b2) / (32a-8),
/// plus the three-diagram expansion p*[d1] + q*[d2] + q(4a/3-1/3)*[d3].
struct TwoLoopSolution {
  Rational p, q;
  LinearCombo expansion;  // symbolic labels over Delta
};
TwoLoopSolution solve_two_loop(long a, const Rational& b1, const Rational& b2);

/// The three computed coefficient pairs and the two determinants of the
/// worked genus-1 family, with the case split on a.
struct KExamples {
  std::pair<Rational, Rational> k0, k1, k2;
  Rational det01, det12;
  bool det01_nonzero_expected;  // a not in {0, -1}
  bool det12_nonzero_expected;  // a in {0, -1}
};
KExamples k_examples(long a);

struct ThetaMN {
  int n, m;
};
std::vector<ThetaMN> theta_mn_set(int g);
long theta_mn_count(int g);

/// The stored 11-element three-loop generating family with u-power labels.
std::vector<Diagram> xset_3loop();

/// m_n * (2g+5)^{3(n-1)} with m_n from the closed-diagram enumeration.
long crude_bound(int n, int g, const EnumLimits& limits = {});

/// Reference shapes used by the two-loop machinery (exposed for tests and
/// the CLI dump).
Diagram two_loop_ref_deg3();
Diagram two_loop_ref_deg5();
Diagram theta1_shape();             // labeled theta of theta_1
Diagram theta2_main_shape();        // labeled theta of theta_2's main term
Diagram theta2_correction_shape();  // the correction diagram

}  // namespace loopexp
