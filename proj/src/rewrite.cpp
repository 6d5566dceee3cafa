#include "loopexp/rewrite.hpp"

#include "loopexp/shapes.hpp"

namespace loopexp {

namespace {

// Exchanges the branches attached at darts x and y; one-sided labels ride
// with their branches. When x and y are mates the exchange fixes the edge
// (labels on it would have to flip ends, which is not an isomorphism-level
// move, so that case is rejected for labeled edges).
Diagram exchange_branches(const Diagram& d, int x, int y) {
  Diagram r = d;
  int X = d.mate[x], Y = d.mate[y];
  std::vector<std::pair<int, LabelValue>> labs;
  for (const auto& [k, lab] : d.labels) {
    int s = lab.side;
    if (s == x) s = y;
    else if (s == y) s = x;
    labs.emplace_back(s, lab.value);
  }
  if (X == y) {
    if (d.labels.count(d.edge_key(x)))
      throw UnsupportedLabel("rewiring across a labeled parallel edge");
  } else {
    r.mate[x] = Y;
    r.mate[Y] = x;
    r.mate[y] = X;
    r.mate[X] = y;
  }
  r.labels.clear();
  for (const auto& [s, v] : labs) r.add_label(s, v);
  return r;
}

int cyclic_succ(int h) { return (h / 3) * 3 + (h % 3 + 1) % 3; }

}  // namespace

LinearCombo apply_AS(const Diagram& d, int vertex) {
  if (vertex < 0 || vertex >= d.n_tri) throw SiteNotFound("apply_AS: no such vertex");
  std::vector<int> perm(d.dart_count());
  for (int h = 0; h < d.dart_count(); ++h) perm[h] = h;
  std::swap(perm[3 * vertex + 1], perm[3 * vertex + 2]);
  LinearCombo out;
  out.add(permute_darts(d, perm), Rational(-1));
  return out;
}

LinearCombo apply_IHX(const Diagram& d, int edge_key) {
  if (edge_key < 0 || edge_key >= d.dart_count() || d.edge_key(edge_key) != edge_key)
    throw SiteNotFound("apply_IHX: bad edge key");
  int e = edge_key, ebar = d.mate[e];
  if (d.is_leg_dart(e) || d.is_leg_dart(ebar))
    throw SiteNotFound("apply_IHX: edge must join two trivalent vertices");
  if (d.vertex_of_dart(e) == d.vertex_of_dart(ebar))
    throw SiteNotFound("apply_IHX: self-loop edge");
  if (d.labels.count(edge_key))
    throw UnsupportedLabel("apply_IHX: the contracted edge must be unlabeled");
  // u's triple rotated to (a, b, e); v's to (ebar, c, d). The identity
  // (a,b,e)(ebar,c,d) = (a,c,e)(ebar,b,d) - (a,d,e)(ebar,b,c) comes from
  // ad-invariance of the structure tensor.
  int b = cyclic_succ(cyclic_succ(e));  // so that (a, b, e) is a rotation
  int c = cyclic_succ(ebar);
  int dd = cyclic_succ(c);
  LinearCombo out;
  out.add(exchange_branches(d, b, c), Rational(1));  // H = (a,c,e)(ebar,b,d)
  // X = (a,d,e)(ebar,b,c): cycle the contents of b, c, d via two swaps.
  out.add(exchange_branches(exchange_branches(d, b, dd), c, dd), Rational(-1));
  return out;
}

LinearCombo apply_STU(const Diagram& d, int comp, int pos) {
  if (d.skeleton.kind != SkeletonKind::Lines)
    throw SiteNotFound("apply_STU: needs a line skeleton");
  int l1 = -1, l2 = -1;
  for (size_t j = 0; j < d.legs.size(); ++j) {
    if (d.legs[j].comp == comp && d.legs[j].pos == pos) l1 = static_cast<int>(j);
    if (d.legs[j].comp == comp && d.legs[j].pos == pos + 1) l2 = static_cast<int>(j);
  }
  if (l1 < 0 || l2 < 0) throw SiteNotFound("apply_STU: no adjacent leg pair at position");

  LinearCombo out;
  // U: the two branches transposed on the skeleton.
  out.add(exchange_branches(d, d.dart_of_leg(l1), d.dart_of_leg(l2)), Rational(1));

  // S: legs joined into a new vertex (A, B, down-to-skeleton).
  DiagramBuilder b(d.skeleton);
  for (int v = 0; v < d.n_tri; ++v) b.add_vertex();
  int w = b.add_vertex();
  std::vector<int> leg_map(d.legs.size(), -1);
  for (size_t j = 0; j < d.legs.size(); ++j) {
    if (static_cast<int>(j) == l1 || static_cast<int>(j) == l2) continue;
    LegMark m = d.legs[j];
    if (m.attached() && m.comp == comp && m.pos > pos + 1) m.pos -= 1;
    leg_map[j] = b.add_leg(m);
  }
  int merged = b.add_leg(LegMark::attach(d.skeleton.components[comp], comp, pos));
  auto endof = [&](int dart) {
    if (d.is_leg_dart(dart)) {
      int j = d.leg_of_dart(dart);
      if (j == l1) return End::v(w, 0);
      if (j == l2) return End::v(w, 1);
      return End::leg(leg_map[j]);
    }
    return End::v(d.vertex_of_dart(dart), dart % 3);
  };
  for (int h = 0; h < d.dart_count(); ++h) {
    int m = d.mate[h];
    if (h > m) continue;
    if (d.is_leg_dart(h) && d.is_leg_dart(m) && (d.leg_of_dart(h) == l1 || d.leg_of_dart(h) == l2) &&
        (d.leg_of_dart(m) == l1 || d.leg_of_dart(m) == l2)) {
      // The two legs were a single chord: it becomes a self-loop at w.
      b.connect(End::v(w, 0), End::v(w, 1));
      continue;
    }
    b.connect(endof(h), endof(m));
  }
  b.connect(End::v(w, 2), End::leg(merged));
  for (const auto& [k, lab] : d.labels) b.label(endof(lab.side), lab.value);
  out.add(b.build(), Rational(1));
  return out;
}

LinearCombo expand_labels(const Diagram& d, int N, const DeltaContext& ctx) {
  LinearCombo out;
  int budget = N - d.degree();
  if (budget < 0) return out;
  if (d.labels.empty()) {
    out.add(d, Rational(1));
    return out;
  }

  struct Site {
    int edge_key;
    int side;
    HSeries series;
  };
  std::vector<Site> sites;
  for (const auto& [k, lab] : d.labels) {
    HSeries s(budget);
    if (std::holds_alternative<HSeries>(lab.value)) {
      s = std::get<HSeries>(lab.value).truncated(budget);
    } else {
      const auto& sym = std::get<SymbolicLabel>(lab.value);
      s = sym.num.exp_substitute(budget);
      if (sym.delta_pow != 0) {
        if (!ctx.delta)
          throw MissingDelta("expand_labels: label needs Delta but none configured");
        HSeries dh = ctx.delta->exp_substitute(budget);
        HSeries dinv = dh.invert();
        for (int i = 0; i < sym.delta_pow; ++i) s *= dinv;
        for (int i = 0; i < -sym.delta_pow; ++i) s *= dh;
      }
    }
    sites.push_back({k, lab.side, std::move(s)});
  }

  // Sum over per-edge leg counts with total within budget.
  std::vector<int> ks(sites.size(), 0);
  std::function<void(size_t, int, const Rational&)> walk = [&](size_t i, int used,
                                                               const Rational& coeff) {
    if (coeff.is_zero()) return;
    if (i == sites.size()) {
      // Rebuild with each labeled edge subdivided by ks[i] h-legs.
      DiagramBuilder b(d.skeleton);
      for (int v = 0; v < d.n_tri; ++v) b.add_vertex();
      std::vector<int> leg_map(d.legs.size());
      for (size_t j = 0; j < d.legs.size(); ++j) leg_map[j] = b.add_leg(d.legs[j]);
      auto endof = [&](int dart) {
        return d.is_leg_dart(dart) ? End::leg(leg_map[d.leg_of_dart(dart)])
                                   : End::v(d.vertex_of_dart(dart), dart % 3);
      };
      std::map<int, std::pair<int, int>> expanding;  // edge_key -> (side, k)
      for (size_t s = 0; s < sites.size(); ++s) expanding[sites[s].edge_key] = {sites[s].side, ks[s]};
      for (int h = 0; h < d.dart_count(); ++h) {
        int m = d.mate[h];
        if (h > m) continue;
        auto it = expanding.find(h);
        if (it == expanding.end()) {
          b.connect(endof(h), endof(m));
          continue;
        }
        auto [side, k] = it->second;
        int far = (side == h) ? m : h;
        End prev = endof(side);
        for (int i = 0; i < k; ++i) {
          int w = b.add_vertex();
          int leg = b.add_free_leg("h");
          b.connect(prev, End::v(w, 0));
          b.connect(End::v(w, 2), End::leg(leg));
          prev = End::v(w, 1);
        }
        b.connect(prev, endof(far));
      }
      out.add(b.build(), coeff);
      return;
    }
    for (int k = 0; used + k <= budget; ++k) {
      ks[i] = k;
      walk(i + 1, used + k, coeff * sites[i].series.coeff(k));
    }
  };
  walk(0, 0, Rational(1));
  return out;
}

LinearCombo expand_labels(const LinearCombo& c, int N, const DeltaContext& ctx) {
  return c.map_linear([&](const Diagram& d, const Rational& coeff) {
    return expand_labels(d, N, ctx) * coeff;
  });
}

LinearCombo move_label(const Diagram& d, int edge_key, int cross_dart) {
  auto lab = d.label_of_edge(edge_key);
  if (!lab) throw SiteNotFound("move_label: edge carries no label");
  if (d.edge_key(cross_dart) != edge_key)
    throw SiteNotFound("move_label: cross dart not on the labeled edge");
  if (lab->side != cross_dart)
    throw UnsupportedLabel("move_label: label must sit at the end being crossed");

  LinearCombo out;
  if (d.is_leg_dart(cross_dart)) {
    // Slide to the opposite end (h -> -h); exact for any label value.
    Diagram r = d;
    r.labels.erase(edge_key);
    r.add_label(d.mate[cross_dart], label_value_flip(lab->value));
    out.add(r, Rational(1));
    return out;
  }

  if (!std::holds_alternative<SymbolicLabel>(lab->value))
    throw UnsupportedLabel("move_label: expanded series cannot cross a vertex");
  const auto& sym = std::get<SymbolicLabel>(lab->value);
  auto mono = sym.num.monomial();
  if (!mono || sym.delta_pow != 0)
    throw UnsupportedLabel("move_label: only t^k tokens cross trivalent vertices");
  auto [k, scale] = *mono;

  Diagram r = d;
  r.labels.erase(edge_key);
  if (k != 0) {
    int e1 = cyclic_succ(cross_dart), e2 = cyclic_succ(e1);
    r.add_label(e1, SymbolicLabel::t_power(-k));
    r.add_label(e2, SymbolicLabel::t_power(-k));
  }
  out.add(r, scale);
  return out;
}

}  // namespace loopexp
