#pragma once

#include <cstdint>
#include <vector>

#include "loopexp/alexander.hpp"
#include "loopexp/errors.hpp"
#include "loopexp/hseries.hpp"
#include "loopexp/laurent.hpp"

namespace loopexp {

using LaurentMatrix = std::vector<std::vector<LaurentPoly>>;
using IntMatrix = std::vector<std::vector<long>>;

/// Square matrix over Q[t^±1] with the equivariance symmetry
/// l_ji(t) = l_ij(t^-1); constructed from surgery data in blocks of size g.
struct EqLinkingMatrix {
  int genus = 0;
  LaurentMatrix entries;

  int size() const { return static_cast<int>(entries.size()); }
  // Throws Malformed unless square and equivariant.
  void validate() const;
};

/// Linking data of a representing tangle: U, V symmetric (framings on the
/// diagonal), W unrestricted.
struct TangleLinkingData {
  IntMatrix U, V, W;

  int genus() const { return static_cast<int>(U.size()); }
  void validate() const;
};

/// The 4g x 4g surgery block matrix
///   [ O          (t^-1-1) I   I   O ]
///   [ (t-1) I    O            O   I ]
///   [ I          O            U   W ]
///   [ O          I            W^T V ]
EqLinkingMatrix build_surgery_matrix(const TangleLinkingData& d);

/// Exact inverse as M^-1 = Q / Delta with Delta normalized into Z when the
/// determinant is a unit at t = 1 (always the case for surgery matrices).
struct InverseOverDelta {
  AlexanderPoly delta;
  LaurentMatrix q;
  // max |exponent| over all q entries, for the support-window check
  long q_support_radius = 0;
  bool q_support_within_genus = true;
};
InverseOverDelta invert_over_delta(const EqLinkingMatrix& m);

/// Fraction-free determinant over the Laurent ring (Bareiss elimination).
LaurentPoly bareiss_det(const LaurentMatrix& m);

struct LaurentFraction {
  LaurentPoly num;
  LaurentPoly den;
};
/// (i,j)-cofactor route to the inverse entry l^{j,i} = cof(i,j)/det,
/// 0-based indices; independent of the elimination route.
LaurentFraction cofactor(const EqLinkingMatrix& m, int i, int j);

/// Appendix-style certificate of the half-integer second coefficient: the
/// exact cofactor identity, the unit value at t = 1, the h-expansion
/// leading terms -1/+1, and r in 1/2 + Z.
struct BCertificate {
  bool lgg_identity = false;
  Rational value_at_1;
  Rational r;
  bool r_half_integer = false;
  bool leading_coeffs_ok = false;  // -1 and +1 on the two entries
  bool second_coeffs_equal = false;
};
BCertificate appendixB_certificate(const EqLinkingMatrix& m);

/// Deterministic sampler for property tests and the CLI; entries uniform
/// in [-3, 3].
class TangleSampler {
 public:
  explicit TangleSampler(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  TangleLinkingData sample(int genus);

 private:
  long entry();
  uint64_t state_;
};

}  // namespace loopexp
