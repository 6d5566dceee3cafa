#pragma once

#include <optional>

#include "loopexp/diagram.hpp"

namespace loopexp {

/// AS at a trivalent vertex: returns -D_flipped, the combo the relation
/// asserts equal to D.
LinearCombo apply_AS(const Diagram& d, int vertex);

/// IHX at an internal edge (both ends trivalent, distinct). With the edge's
/// endpoint triples rotated to u=(a,b,e), v=(e',c,d) this returns
/// H - X = (a,c,e)(e',b,d) - (a,d,e)(e',c,b), which equals D in the quotient.
LinearCombo apply_IHX(const Diagram& d, int edge_key);

/// STU at two legs adjacent on a line component: for D with edge-A's leg
/// immediately before edge-B's leg, returns (D transposed) + (joined
/// diagram with a new vertex oriented (A, B, down)), which equals D.
LinearCombo apply_STU(const Diagram& d, int comp, int pos);

struct DeltaContext {
  std::optional<LaurentPoly> delta;
};

/// Replaces every edge label by its h-leg expansion, truncating at total
/// degree N. Symbolic labels with a Delta denominator need ctx.delta
/// (MissingDelta otherwise). Legs produced by a label are attached in
/// series order away from the labeled end and count as h-marked univalent
/// vertices.
LinearCombo expand_labels(const Diagram& d, int N, const DeltaContext& ctx = {});
LinearCombo expand_labels(const LinearCombo& c, int N, const DeltaContext& ctx = {});

/// Pushes a t^k token label across the endpoint of its edge reached by
/// cross_dart (a dart of that edge). Across a trivalent vertex the label
/// becomes t^-k on the other two edges at that vertex; across a univalent
/// vertex it slides to the opposite end as t^-k.
LinearCombo move_label(const Diagram& d, int edge_key, int cross_dart);

}  // namespace loopexp
