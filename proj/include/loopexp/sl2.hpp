#pragma once

#include <map>

#include "loopexp/diagram.hpp"

namespace loopexp {

/// Polynomial in the Casimir variable c with an h-grading equal to the
/// degree of the diagram it came from.
struct CasimirPoly {
  std::map<int, Rational> coeffs;  // c-exponent -> coefficient
  int h_grading = 0;

  bool is_zero() const;
  void add(int cexp, const Rational& v);
  CasimirPoly& operator+=(const CasimirPoly& o);
  CasimirPoly operator*(const Rational& s) const;
  bool operator==(const CasimirPoly& o) const { return coeffs == o.coeffs; }
  std::string str() const;
};

/// sl2 weight of an open diagram with h-marked legs, by the edge-contraction
/// recursion. The bilinear form is the trace form of the 2-dimensional
/// representation; the strut evaluates to c, which anchors the convention.
/// Labels must be expanded first (UnexpandedLabel otherwise).
CasimirPoly sl2_weight(const Diagram& d);

/// Independent oracle: contracts explicit sl2 structure constants over
/// every internal-edge basis assignment, legs pinned to H, and rescales by
/// the strut anchor. Diagrams up to 8 trivalent vertices (TooLarge beyond).
CasimirPoly sl2_brute(const Diagram& d);

/// True iff the sl2 image of the combo is a nonzero polynomial; certifies
/// the combo is nonzero in B (one-sided).
bool nonvanishing_certificate(const LinearCombo& c);

}  // namespace loopexp
