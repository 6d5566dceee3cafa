#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopexp/diagram.hpp"
#include "loopexp/linking.hpp"
#include "loopexp/rewrite.hpp"

namespace loopexp {

/// Strut table of the (inverse) equivariant linking matrix: entry (i, j),
/// i <= j 0-based, is the one-sided label of the x_{i+1}-x_{j+1} strut,
/// anchored at the x_{i+1} end. Entries may be expanded series or symbolic
/// q^{ij}/Delta labels.
struct GaussianPart {
  std::vector<std::string> labels;  // "x1".."xn"
  std::map<std::pair<int, int>, LabelValue> strut;

  static GaussianPart from_inverse(const InverseOverDelta& inv, int order);
  static GaussianPart from_inverse_symbolic(const InverseOverDelta& inv);
};

/// True iff every graph component has a trivalent vertex not adjacent to an
/// h-marked leg (the P-part condition of the Gaussian splitting).
bool satisfies_ppart(const Diagram& d, const std::string& h_mark = "h");

/// Sum of all ways of gluing the x-marked legs of c1 to the x-marked legs
/// of c2, for all x in glue_marks. Terms with mismatched leg counts
/// contribute zero. One-sided labels ride through splices (with the h -> -h
/// flip when their anchor end is consumed). A gluing that would close a
/// vertexless circle raises PPartViolation.
LinearCombo pair_combos(const LinearCombo& c1, const LinearCombo& c2,
                        const std::vector<std::string>& glue_marks);

/// <exp(-1/2 sum l^{ij} struts), P>: the Gaussian exponential is truncated
/// to the strut multisets matching P's leg counts. With expand = true the
/// result's labels are expanded into h-legs at total degree <= N (the
/// numeric route); otherwise labels stay symbolic (the membership route).
LinearCombo aarhus_integral(const LinearCombo& p, const GaussianPart& gaussian, int N,
                            bool expand = true, const DeltaContext& ctx = {});

/// Wheel coefficients of the unknot value: configuration data for the
/// U+- normalization, generated from (1/2) log(sinh(h/2)/(h/2)).
struct NuData {
  std::map<int, Rational> b;  // 2n -> b_{2n}
  int cutoff = 0;

  static NuData standard(int cutoff);
};

/// Degree-truncated disjoint-union product, exp and log of combos on marks.
LinearCombo combo_mul(const LinearCombo& a, const LinearCombo& b, int N);
LinearCombo combo_exp(const LinearCombo& connected, int N);
LinearCombo combo_log(const LinearCombo& c, int N);
LinearCombo combo_inverse(const LinearCombo& c, int N);

/// Divides by <<U+>>^{sigma_plus} <<U->>^{sigma_minus} in the disjoint-union
/// algebra; the U values are <chi^-1 nu, chi^-1 nu>^-1 exp(-+ theta/16).
LinearCombo normalize_unknots(const LinearCombo& c, int sigma_plus, int sigma_minus,
                              const NuData& nu, int N);

/// Projection onto connected n-loop terms.
LinearCombo loop_project(const LinearCombo& c, int n);

/// The leading clasper-difference data of a surgery: pairs the clasper
/// diagram (legs marked x_{2g+1}, x_{3g+1}) against the inverse-matrix
/// Gaussian, extracts the h^2 coefficient r, and checks that the leading
/// diagram of the difference is the closed clasper carrying +-r.
struct ClasperDifference {
  LinearCombo delta;
  Rational r;
  Rational leading_coeff;
  int leading_degree = -1;
  bool leading_matches = false;  // leading diagram = closed clasper, coeff = +-r
};
ClasperDifference clasper_difference(const EqLinkingMatrix& m, const Diagram& clasper_spec,
                                     int N);

}  // namespace loopexp
