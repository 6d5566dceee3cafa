#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopexp/errors.hpp"
#include "loopexp/hseries.hpp"
#include "loopexp/laurent.hpp"
#include "loopexp/rational.hpp"

namespace loopexp {

enum class SkeletonKind { Marks, Lines, Circles };

/// Skeleton of a Jacobi diagram. Marks carries no data (free univalent
/// labels live on the legs); Lines/Circles list their component labels in
/// sorted order, and legs attach by (component, position).
struct Skeleton {
  SkeletonKind kind = SkeletonKind::Marks;
  std::vector<std::string> components;

  static Skeleton marks() { return {}; }
  static Skeleton lines(std::vector<std::string> labels);

  int component_index(const std::string& label) const;
  bool operator==(const Skeleton&) const = default;
  std::string key() const;
};

/// Univalent vertex: either a free mark (h, x1, ...) or an attachment to a
/// skeleton component at a fixed position in its order.
struct LegMark {
  std::string mark;
  int comp = -1;
  int pos = -1;

  static LegMark free_mark(std::string m) { return {std::move(m), -1, -1}; }
  static LegMark attach(std::string m, int comp, int pos) { return {std::move(m), comp, pos}; }
  bool attached() const { return comp >= 0; }
  bool operator==(const LegMark&) const = default;
};

/// One-sided rational-function edge label: num(t) / Delta(t)^delta_pow.
/// Covers t^k, u^k, t^k/Delta, (t^k - 1)/Delta and products thereof.
struct SymbolicLabel {
  LaurentPoly num;
  int delta_pow = 0;

  static SymbolicLabel t_power(long k) { return {LaurentPoly::t_power(k), 0}; }
  bool operator==(const SymbolicLabel&) const = default;
  std::string key() const { return "S" + num.key() + "^D" + std::to_string(delta_pow); }
};

using LabelValue = std::variant<SymbolicLabel, HSeries>;

std::string label_value_key(const LabelValue& v);
/// h -> -h on a label value (the transform picked up when the label's side
/// moves to the opposite end of its edge).
LabelValue label_value_flip(const LabelValue& v);
LabelValue label_value_mul(const LabelValue& a, const LabelValue& b);

struct EdgeLabel {
  int side;  // half-edge id the label is adjacent to (one end of the edge)
  LabelValue value;
};

/// Vertex-oriented uni-trivalent graph over a skeleton, in a half-edge
/// ("dart") representation:
///   - trivalent vertex i owns darts 3i, 3i+1, 3i+2, and this slot order IS
///     its cyclic orientation;
///   - leg j owns dart 3*n_tri + j;
///   - mate[] is the fixed-point-free involution pairing darts into edges.
/// Edges are keyed by their smaller dart id. At most one one-sided label per
/// edge (labels on the same edge multiply, mirroring across sides).
struct Diagram {
  Skeleton skeleton;
  int n_tri = 0;
  std::vector<LegMark> legs;
  std::vector<int> mate;
  std::map<int, EdgeLabel> labels;

  int dart_count() const { return 3 * n_tri + static_cast<int>(legs.size()); }
  bool is_leg_dart(int h) const { return h >= 3 * n_tri; }
  int leg_of_dart(int h) const { return h - 3 * n_tri; }
  int dart_of_leg(int j) const { return 3 * n_tri + j; }
  int vertex_of_dart(int h) const { return h / 3; }
  int edge_key(int h) const { return std::min(h, mate[h]); }

  // Throws Malformed when invariants are violated.
  void validate() const;

  int degree() const { return (n_tri + static_cast<int>(legs.size())) / 2; }
  // First Betti number E - V + C of the graph part (skeleton ignored).
  int loop_number() const;
  bool connected_graph() const;
  // Component id per dart, ignoring the skeleton.
  std::vector<int> graph_components(int* count) const;

  bool has_labels() const { return !labels.empty(); }
  // Trivalent vertices having no neighbouring h-marked leg.
  int counted_trivalent(const std::string& h_mark = "h") const;

  // Attach a label near the given dart's end, multiplying into any label
  // already on that edge.
  void add_label(int near_dart, const LabelValue& value);
  std::optional<EdgeLabel> label_of_edge(int edge_key) const;

  // Deterministic structural serialization (not isomorphism-invariant).
  std::string raw_key() const;

  bool operator==(const Diagram& o) const {
    return skeleton == o.skeleton && n_tri == o.n_tri && legs == o.legs && mate == o.mate &&
           raw_key() == o.raw_key();
  }
};

/// Endpoint spec used by the builder: trivalent (vertex, slot) or leg index.
struct End {
  bool is_leg;
  int idx;
  int slot;
  static End v(int vertex, int slot) { return {false, vertex, slot}; }
  static End leg(int j) { return {true, j, 0}; }
};

class DiagramBuilder {
 public:
  explicit DiagramBuilder(Skeleton skeleton = Skeleton::marks());

  int add_vertex();
  int add_leg(const LegMark& mark);
  int add_free_leg(const std::string& mark) { return add_leg(LegMark::free_mark(mark)); }
  void connect(End a, End b);
  void label(End near, const LabelValue& value);

  Diagram build() const;

 private:
  Skeleton skeleton_;
  int n_tri_ = 0;
  std::vector<LegMark> legs_;
  std::vector<std::pair<End, End>> edges_;
  std::vector<std::pair<End, LabelValue>> labels_;
};

Diagram disjoint_union(const Diagram& a, const Diagram& b);

/// Relabels all darts by the given permutation (perm[old] = new). The
/// permutation must map vertex triples to vertex triples and legs to legs;
/// slot order within a triple may change (this is how AS flips are realized).
Diagram permute_darts(const Diagram& d, const std::vector<int>& perm);

struct CanonResult {
  std::string code;
  int sign = 1;  // 0 when the diagram admits an orientation-reversing automorphism
  Diagram rep;   // canonical representative; D ~ sign * rep
};

/// Canonical form modulo isomorphism and AS orientation flips (sign-tracked).
/// Isomorphic diagrams (same skeleton attachments, marks, labels) get equal
/// codes; sign 0 marks classes that are zero because D = -D.
const CanonResult& canonicalize(const Diagram& d);

/// Formal Q-linear combination of diagrams, merged via canonical codes.
class LinearCombo {
 public:
  LinearCombo() = default;
  LinearCombo(const Diagram& d, const Rational& c) { add(d, c); }

  void add(const Diagram& d, const Rational& c);
  void add_combo(const LinearCombo& o, const Rational& scale = Rational(1));

  LinearCombo& operator+=(const LinearCombo& o) { add_combo(o); return *this; }
  LinearCombo& operator-=(const LinearCombo& o) { add_combo(o, Rational(-1)); return *this; }
  friend LinearCombo operator+(LinearCombo a, const LinearCombo& b) { return a += b; }
  friend LinearCombo operator-(LinearCombo a, const LinearCombo& b) { return a -= b; }
  LinearCombo operator*(const Rational& c) const;

  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  struct Term {
    Diagram diagram;
    Rational coeff;
  };
  const std::map<std::string, Term>& terms() const { return terms_; }
  Rational coeff_of(const Diagram& d) const;

  // Applies a diagram-wise linear map and re-merges.
  LinearCombo map_linear(const std::function<LinearCombo(const Diagram&, const Rational&)>& f) const;
  LinearCombo filter(const std::function<bool(const Diagram&)>& keep) const;

  std::string str() const;

 private:
  std::map<std::string, Term> terms_;
};

}  // namespace loopexp
