#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopexp/diagram.hpp"
#include "loopexp/rewrite.hpp"

namespace loopexp {

/// Identifies a graded diagram space. Degree strata are computed
/// independently (all relations are degree-homogeneous).
struct SpaceId {
  enum class Family {
    B,        // all open diagrams, h-marked legs
    Bconn,    // connected open diagrams
    Bn,       // connected n-loop open diagrams
    A_line,   // diagrams on oriented lines, no free marks
    A_marks,  // open diagrams with legs marked from a given set
    At,       // line diagrams with labels in {empty, t, t^-1} and free h legs
    E0,       // n-loop connected, labels in {empty} u {t^k/Delta}
    E1        // n-loop connected, labels {empty} u {(t^k-1)/Delta}
  };

  Family family = Family::B;
  int degree_cutoff = 3;
  int loops = -1;                         // Bn / E0 / E1
  std::vector<std::string> line_labels;   // A_line / At
  std::vector<std::string> mark_labels;   // A_marks (defaults to {"h"})
  int m = 0;                              // E0 / E1 token exponent bound
  std::optional<LaurentPoly> delta;       // E0 / E1

  // "B", "Bconn", "Bn:2", "Aline:x", "Amarks:h,x", "At:x", "E0:2,3", "E1:2,3"
  static SpaceId parse(const std::string& text, int degree_cutoff);
  std::string str() const;
};

/// Hard ceilings for the enumeration backend (the CLI exposes
/// --max-vertices on top of these).
struct EnumLimits {
  int max_degree = 6;
  int max_vertices = 12;
};

/// All canonical representatives of diagrams in the space at exactly the
/// given degree, each once, in deterministic (code) order. Sign-zero
/// shapes are included: they are diagrams, even though their classes are 0.
std::vector<Diagram> enumerate_diagrams(const SpaceId& spec, int degree,
                                        const EnumLimits& limits = {});
/// Degrees 0..spec.degree_cutoff concatenated.
std::vector<Diagram> enumerate_diagrams(const SpaceId& spec, const EnumLimits& limits = {});

/// Random connected open diagram of the exact degree, by uniform dart
/// matching with rejection; deterministic in the seed state.
Diagram sample_connected_diagram(uint64_t& state, int degree);

/// Ordered, canonically-pivoted basis of the quotient by AS/IHX (and STU on
/// skeleton spaces), with a linear reduction operator to coordinates.
class Basis {
 public:
  struct Options {
    bool reverse_pivots = false;  // alternate deterministic pivot order
    bool parallel = false;        // parallel relation generation
  };

  static Basis build(const SpaceId& spec, const Options& opts, const EnumLimits& limits);
  static Basis build(const SpaceId& spec) { return build(spec, Options{}, EnumLimits{}); }
  static Basis build(const SpaceId& spec, const Options& opts) {
    return build(spec, opts, EnumLimits{});
  }

  const SpaceId& space() const { return spec_; }
  int dimension() const;
  int dimension_at(int degree) const;
  // Basis representatives in coordinate order.
  const std::vector<Diagram>& representatives() const { return reps_; }

  // Coordinates of a combo in this basis; throws NotInSpace when a term's
  // canonical code is not in the space's span.
  std::vector<Rational> coords(const LinearCombo& c) const;
  // Reduction of a combo to a combination of basis representatives.
  LinearCombo reduce(const LinearCombo& c) const;
  // True iff the combo reduces to zero coordinates.
  bool reduces_to_zero(const LinearCombo& c) const;

 private:
  SpaceId spec_;
  std::vector<Diagram> reps_;                 // basis representatives
  std::map<std::string, int> rep_index_;      // canonical code -> coordinate
  // pivot code -> fully reduced row over basis coordinates
  std::map<std::string, std::vector<std::pair<int, Rational>>> pivot_rows_;
  std::map<std::string, char> known_codes_;   // all enumerated codes
};

/// PBW symmetrization: every free mark with a matching line label is
/// averaged over all orderings of its legs along that line.
LinearCombo chi(const LinearCombo& c, const std::vector<std::string>& to_lines);
/// Exact inverse of chi at any truncation, by the STU recursion on the
/// number of legs.
LinearCombo chi_inverse(const LinearCombo& c, const std::vector<std::string>& from_lines);

/// Label-family membership tests (symbolic labels, not yet expanded).
bool in_At(const LinearCombo& c);
struct ESpec {
  int variant;  // 0 or 1
  int loops;
  int m;
  LaurentPoly delta;
};
bool in_E(const LinearCombo& c, const ESpec& spec);

std::vector<Rational> coords(const LinearCombo& c, const Basis& basis);

}  // namespace loopexp
