#include "loopexp/diagram.hpp"

#include <numeric>
#include <sstream>

namespace loopexp {

Skeleton Skeleton::lines(std::vector<std::string> labels) {
  Skeleton s;
  s.kind = SkeletonKind::Lines;
  std::sort(labels.begin(), labels.end());
  s.components = std::move(labels);
  return s;
}

int Skeleton::component_index(const std::string& label) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (components[i] == label) return static_cast<int>(i);
  return -1;
}

std::string Skeleton::key() const {
  std::string k;
  switch (kind) {
    case SkeletonKind::Marks: k = "M"; break;
    case SkeletonKind::Lines: k = "L"; break;
    case SkeletonKind::Circles: k = "O"; break;
  }
  for (const auto& c : components) k += ":" + c;
  return k;
}

std::string label_value_key(const LabelValue& v) {
  if (std::holds_alternative<SymbolicLabel>(v)) return std::get<SymbolicLabel>(v).key();
  return "H" + std::get<HSeries>(v).key();
}

LabelValue label_value_flip(const LabelValue& v) {
  if (std::holds_alternative<SymbolicLabel>(v)) {
    SymbolicLabel s = std::get<SymbolicLabel>(v);
    s.num = s.num.mirror();  // Delta is symmetric by convention
    return s;
  }
  return std::get<HSeries>(v).parity_flip();
}

LabelValue label_value_mul(const LabelValue& a, const LabelValue& b) {
  if (std::holds_alternative<SymbolicLabel>(a) && std::holds_alternative<SymbolicLabel>(b)) {
    const auto& x = std::get<SymbolicLabel>(a);
    const auto& y = std::get<SymbolicLabel>(b);
    return SymbolicLabel{x.num * y.num, x.delta_pow + y.delta_pow};
  }
  if (std::holds_alternative<HSeries>(a) && std::holds_alternative<HSeries>(b))
    return std::get<HSeries>(a) * std::get<HSeries>(b);
  throw UnsupportedLabel("cannot multiply a symbolic label with an expanded series label");
}

void Diagram::validate() const {
  int n = dart_count();
  if (static_cast<int>(mate.size()) != n) throw Malformed("mate table size mismatch");
  for (int h = 0; h < n; ++h) {
    if (mate[h] < 0 || mate[h] >= n) throw Malformed("mate out of range");
    if (mate[h] == h) throw Malformed("dart paired with itself");
    if (mate[mate[h]] != h) throw Malformed("mate is not an involution");
  }
  // Leg attachments must be consistent with the skeleton.
  std::map<std::pair<int, int>, int> seen;
  for (size_t j = 0; j < legs.size(); ++j) {
    const LegMark& m = legs[j];
    if (m.attached()) {
      if (skeleton.kind == SkeletonKind::Marks) throw Malformed("attached leg on marks skeleton");
      if (m.comp < 0 || m.comp >= static_cast<int>(skeleton.components.size()))
        throw Malformed("attachment component out of range");
      if (m.pos < 0) throw Malformed("negative attachment position");
      if (seen.count({m.comp, m.pos})) throw Malformed("duplicate attachment position");
      seen[{m.comp, m.pos}] = static_cast<int>(j);
    } else if (m.mark.empty()) {
      throw Malformed("free leg with empty mark");
    }
  }
  // Positions on each component must be 0..k-1.
  std::map<int, int> per_comp;
  for (const auto& [cp, j] : seen) per_comp[cp.first]++;
  for (const auto& [cp, j] : seen)
    if (cp.second >= per_comp[cp.first]) throw Malformed("attachment positions not contiguous");
  for (const auto& [k, lab] : labels) {
    if (k < 0 || k >= n || edge_key(k) != k) throw Malformed("bad label edge key");
    if (lab.side != k && lab.side != mate[k]) throw Malformed("label side not on its edge");
  }
}

std::vector<int> Diagram::graph_components(int* count) const {
  int n = dart_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int h = 0; h < n; ++h) unite(h, mate[h]);
  for (int v = 0; v < n_tri; ++v) {
    unite(3 * v, 3 * v + 1);
    unite(3 * v, 3 * v + 2);
  }
  std::map<int, int> remap;
  std::vector<int> comp(n);
  for (int h = 0; h < n; ++h) {
    int r = find(h);
    auto [it, fresh] = remap.try_emplace(r, static_cast<int>(remap.size()));
    comp[h] = it->second;
  }
  if (count) *count = static_cast<int>(remap.size());
  return comp;
}

int Diagram::loop_number() const {
  if (dart_count() == 0) return 0;
  int c = 0;
  graph_components(&c);
  int edges = dart_count() / 2;
  int vertices = n_tri + static_cast<int>(legs.size());
  return edges - vertices + c;
}

bool Diagram::connected_graph() const {
  if (dart_count() == 0) return false;
  int c = 0;
  graph_components(&c);
  return c == 1;
}

int Diagram::counted_trivalent(const std::string& h_mark) const {
  int count = 0;
  for (int v = 0; v < n_tri; ++v) {
    bool touches_h = false;
    for (int s = 0; s < 3; ++s) {
      int m = mate[3 * v + s];
      if (is_leg_dart(m)) {
        const LegMark& lm = legs[leg_of_dart(m)];
        if (!lm.attached() && lm.mark == h_mark) touches_h = true;
      }
    }
    if (!touches_h) ++count;
  }
  return count;
}

namespace {
bool label_is_trivial(const LabelValue& v) {
  if (std::holds_alternative<SymbolicLabel>(v)) {
    const auto& s = std::get<SymbolicLabel>(v);
    return s.delta_pow == 0 && s.num.is_one();
  }
  const auto& h = std::get<HSeries>(v);
  return h == HSeries::constant(Rational(1), h.order());
}
}  // namespace

void Diagram::add_label(int near_dart, const LabelValue& value) {
  int key = edge_key(near_dart);
  auto it = labels.find(key);
  if (it == labels.end()) {
    if (label_is_trivial(value)) return;
    labels[key] = EdgeLabel{near_dart, value};
    return;
  }
  // Merge: transport the new value to the existing label's side (h -> -h
  // when the sides differ), then multiply.
  LabelValue v = value;
  if (it->second.side != near_dart) v = label_value_flip(v);
  it->second.value = label_value_mul(it->second.value, v);
  if (label_is_trivial(it->second.value)) labels.erase(it);
}

std::optional<EdgeLabel> Diagram::label_of_edge(int key) const {
  auto it = labels.find(key);
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

std::string Diagram::raw_key() const {
  std::ostringstream os;
  os << skeleton.key() << "|" << n_tri << "|";
  for (const auto& m : legs) {
    if (m.attached()) os << "a" << m.comp << ":" << m.pos << ",";
    else os << "f" << m.mark << ",";
  }
  os << "|";
  for (int x : mate) os << x << ",";
  os << "|";
  for (const auto& [k, lab] : labels)
    os << k << "@" << lab.side << "=" << label_value_key(lab.value) << ";";
  return os.str();
}

DiagramBuilder::DiagramBuilder(Skeleton skeleton) : skeleton_(std::move(skeleton)) {}

int DiagramBuilder::add_vertex() { return n_tri_++; }

int DiagramBuilder::add_leg(const LegMark& mark) {
  legs_.push_back(mark);
  return static_cast<int>(legs_.size()) - 1;
}

void DiagramBuilder::connect(End a, End b) { edges_.emplace_back(a, b); }

void DiagramBuilder::label(End near, const LabelValue& value) {
  labels_.emplace_back(near, value);
}

Diagram DiagramBuilder::build() const {
  Diagram d;
  d.skeleton = skeleton_;
  d.n_tri = n_tri_;
  d.legs = legs_;
  auto dart = [&](const End& e) {
    if (e.is_leg) {
      if (e.idx < 0 || e.idx >= static_cast<int>(legs_.size())) throw Malformed("bad leg index");
      return d.dart_of_leg(e.idx);
    }
    if (e.idx < 0 || e.idx >= n_tri_ || e.slot < 0 || e.slot > 2) throw Malformed("bad vertex end");
    return 3 * e.idx + e.slot;
  };
  d.mate.assign(d.dart_count(), -1);
  for (const auto& [a, b] : edges_) {
    int da = dart(a), db = dart(b);
    if (da == db) throw Malformed("edge endpoints coincide");
    if (d.mate[da] != -1 || d.mate[db] != -1) throw Malformed("dart used twice");
    d.mate[da] = db;
    d.mate[db] = da;
  }
  for (int h = 0; h < d.dart_count(); ++h)
    if (d.mate[h] == -1) throw Malformed("unpaired dart (valence not met)");
  for (const auto& [near, value] : labels_) d.add_label(dart(near), value);
  d.validate();
  return d;
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
  if (a.skeleton.kind != SkeletonKind::Marks || b.skeleton.kind != SkeletonKind::Marks)
    throw SkeletonMismatch("disjoint_union requires marks skeletons");
  Diagram d;
  d.n_tri = a.n_tri + b.n_tri;
  d.legs = a.legs;
  d.legs.insert(d.legs.end(), b.legs.begin(), b.legs.end());
  d.mate.assign(d.dart_count(), -1);
  auto mapA = [&](int h) {
    return a.is_leg_dart(h) ? d.dart_of_leg(a.leg_of_dart(h)) : h;
  };
  auto mapB = [&](int h) {
    return b.is_leg_dart(h) ? d.dart_of_leg(static_cast<int>(a.legs.size()) + b.leg_of_dart(h))
                            : 3 * a.n_tri + h;
  };
  for (int h = 0; h < a.dart_count(); ++h) d.mate[mapA(h)] = mapA(a.mate[h]);
  for (int h = 0; h < b.dart_count(); ++h) d.mate[mapB(h)] = mapB(b.mate[h]);
  for (const auto& [k, lab] : a.labels) d.add_label(mapA(lab.side), lab.value);
  for (const auto& [k, lab] : b.labels) d.add_label(mapB(lab.side), lab.value);
  d.validate();
  return d;
}

Diagram permute_darts(const Diagram& d, const std::vector<int>& perm) {
  Diagram r = d;
  for (int h = 0; h < d.dart_count(); ++h) r.mate[perm[h]] = perm[d.mate[h]];
  for (size_t j = 0; j < d.legs.size(); ++j) {
    int nd = perm[d.dart_of_leg(static_cast<int>(j))];
    if (!r.is_leg_dart(nd)) throw Malformed("permute_darts: leg mapped to vertex dart");
    r.legs[r.leg_of_dart(nd)] = d.legs[j];
  }
  r.labels.clear();
  for (const auto& [k, lab] : d.labels) r.add_label(perm[lab.side], lab.value);
  return r;
}

void LinearCombo::add(const Diagram& d, const Rational& c) {
  if (c.is_zero()) return;
  const CanonResult& cr = canonicalize(d);
  if (cr.sign == 0) return;
  auto it = terms_.find(cr.code);
  if (it == terms_.end()) {
    terms_.emplace(cr.code, Term{cr.rep, c * Rational(cr.sign)});
  } else {
    it->second.coeff += c * Rational(cr.sign);
    if (it->second.coeff.is_zero()) terms_.erase(it);
  }
}

void LinearCombo::add_combo(const LinearCombo& o, const Rational& scale) {
  if (scale.is_zero()) return;
  for (const auto& [code, term] : o.terms_) {
    auto it = terms_.find(code);
    if (it == terms_.end()) {
      terms_.emplace(code, Term{term.diagram, term.coeff * scale});
    } else {
      it->second.coeff += term.coeff * scale;
      if (it->second.coeff.is_zero()) terms_.erase(it);
    }
  }
}

LinearCombo LinearCombo::operator*(const Rational& c) const {
  LinearCombo r;
  r.add_combo(*this, c);
  return r;
}

Rational LinearCombo::coeff_of(const Diagram& d) const {
  const CanonResult& cr = canonicalize(d);
  if (cr.sign == 0) return Rational(0);
  auto it = terms_.find(cr.code);
  if (it == terms_.end()) return Rational(0);
  return it->second.coeff * Rational(cr.sign);
}

LinearCombo LinearCombo::map_linear(
    const std::function<LinearCombo(const Diagram&, const Rational&)>& f) const {
  LinearCombo r;
  for (const auto& [code, term] : terms_) r.add_combo(f(term.diagram, term.coeff));
  return r;
}

LinearCombo LinearCombo::filter(const std::function<bool(const Diagram&)>& keep) const {
  LinearCombo r;
  for (const auto& [code, term] : terms_)
    if (keep(term.diagram)) r.add(term.diagram, term.coeff);
  return r;
}

std::string LinearCombo::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [code, term] : terms_) {
    os << (first ? "" : " + ") << "(" << term.coeff.str() << ")*[deg "
       << term.diagram.degree() << ", loops " << term.diagram.loop_number() << "]";
    first = false;
  }
  return os.str();
}

}  // namespace loopexp
