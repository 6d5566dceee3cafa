#include "loopexp/spaces.hpp"

#include <future>
#include <mutex>
#include <numeric>
#include <sstream>

namespace loopexp {

namespace {

using EdgeMult = std::map<std::pair<int, int>, int>;

// ---------------------------------------------------------------------
// Multigraph enumeration: symmetric multiplicity matrices (loops allowed)
// realizing a degree sequence. Each matrix is produced exactly once.
// ---------------------------------------------------------------------
void distribute_vertex(int v, int u, int left, std::vector<int>& rem, EdgeMult& edges,
                       const std::function<void()>& next_vertex) {
  int T = static_cast<int>(rem.size());
  if (left == 0) {
    next_vertex();
    return;
  }
  if (u >= T) return;
  if (u == v) {
    for (int l = 0; 2 * l <= left; ++l) {
      if (l > 0) edges[{v, v}] = l;
      distribute_vertex(v, u + 1, left - 2 * l, rem, edges, next_vertex);
    }
    edges.erase({v, v});
    return;
  }
  int cap = std::min(left, rem[u]);
  for (int k = 0; k <= cap; ++k) {
    if (k > 0) edges[{v, u}] = k;
    rem[u] -= k;
    distribute_vertex(v, u + 1, left - k, rem, edges, next_vertex);
    rem[u] += k;
  }
  edges.erase({v, u});
}

void gen_multigraphs_rec(int v, std::vector<int>& rem, EdgeMult& edges,
                         const std::function<void(const EdgeMult&)>& sink) {
  int T = static_cast<int>(rem.size());
  while (v < T && rem[v] == 0) ++v;
  if (v == T) {
    sink(edges);
    return;
  }
  int left = rem[v];
  rem[v] = 0;
  distribute_vertex(v, v, left, rem, edges,
                    [&] { gen_multigraphs_rec(v + 1, rem, edges, sink); });
  rem[v] = left;
}

void gen_multigraphs(std::vector<int> degrees,
                     const std::function<void(const EdgeMult&)>& sink) {
  long total = std::accumulate(degrees.begin(), degrees.end(), 0L);
  if (total % 2) return;
  EdgeMult edges;
  gen_multigraphs_rec(0, degrees, edges, sink);
}

// Non-increasing per-vertex leg counts (0..3 each) summing to `legs`.
void gen_leg_counts(int T, int legs, int max_first, std::vector<int>& acc,
                    const std::function<void(const std::vector<int>&)>& sink) {
  if (static_cast<int>(acc.size()) == T) {
    if (legs == 0) sink(acc);
    return;
  }
  int remaining_slots = T - static_cast<int>(acc.size()) - 1;
  for (int c = std::min(max_first, legs); c >= 0; --c) {
    if (legs - c > 3 * remaining_slots) continue;
    acc.push_back(c);
    gen_leg_counts(T, legs - c, c, acc, sink);
    acc.pop_back();
  }
}

Diagram build_marks_diagram(int T, const std::vector<int>& leg_counts, int struts,
                            const EdgeMult& edges, const std::string& mark) {
  DiagramBuilder b;
  std::vector<int> next_slot(T, 0);
  for (int v = 0; v < T; ++v) b.add_vertex();
  for (const auto& [pr, mult] : edges)
    for (int i = 0; i < mult; ++i)
      b.connect(End::v(pr.first, next_slot[pr.first]++), End::v(pr.second, next_slot[pr.second]++));
  for (int v = 0; v < T; ++v)
    for (int i = 0; i < leg_counts[v]; ++i) {
      int leg = b.add_free_leg(mark);
      b.connect(End::v(v, next_slot[v]++), End::leg(leg));
    }
  for (int s = 0; s < struts; ++s) {
    int la = b.add_free_leg(mark), lb = b.add_free_leg(mark);
    b.connect(End::leg(la), End::leg(lb));
  }
  return b.build();
}

// Open diagrams with identically marked legs at an exact degree, optionally
// connected with a fixed loop number.
std::vector<Diagram> enumerate_marks(int degree, bool connected, int loops,
                                     const std::string& mark, const EnumLimits& limits) {
  if (2 * degree > limits.max_vertices)
    throw TooLarge("enumerate: vertex count exceeds the configured maximum");
  std::map<std::string, Diagram> seen;

  std::vector<std::tuple<int, int, int>> tls;  // (T, legs, struts)
  if (connected && loops >= 0) {
    // Connected with first Betti number n: T = 2(n-1) + L, no struts
    // except the bare strut itself (n = 0, L = 2, T = 0).
    int L = degree - loops + 1;
    if (L >= 0) {
      int T = 2 * (loops - 1) + L;
      if (T == 0 && L == 2)
        tls.emplace_back(0, 2, 1);
      else if (T >= 0)
        tls.emplace_back(T, L, 0);
    }
  } else {
    for (int T = 0; T <= 2 * degree; ++T) {
      int L = 2 * degree - T;
      int max_struts = connected ? (T == 0 && L == 2 ? 1 : 0) : L / 2;
      for (int s = 0; s <= max_struts; ++s) {
        if (L - 2 * s > 3 * T) continue;
        tls.emplace_back(T, L, s);
      }
    }
  }

  for (const auto& [T, L, struts] : tls) {
    int attached = L - 2 * struts;
    if (attached < 0 || attached > 3 * T) continue;
    std::vector<int> acc;
    gen_leg_counts(T, attached, 3, acc, [&](const std::vector<int>& leg_counts) {
      std::vector<int> degs(T);
      for (int v = 0; v < T; ++v) degs[v] = 3 - leg_counts[v];
      gen_multigraphs(degs, [&](const EdgeMult& edges) {
        // Symmetry break: within each run of equal leg counts, the first
        // vertex must carry the lexicographically maximal local profile.
        // Every isomorphism class keeps at least one witness.
        {
          auto profile = [&](int v) {
            std::vector<int> mults;
            int self = 0;
            for (const auto& [pr, m] : edges) {
              if (pr.first == v && pr.second == v) self = m;
              else if (pr.first == v || pr.second == v) mults.push_back(m);
            }
            std::sort(mults.rbegin(), mults.rend());
            mults.insert(mults.begin(), self);
            return mults;
          };
          for (int start = 0; start < T;) {
            int end = start + 1;
            while (end < T && leg_counts[end] == leg_counts[start]) ++end;
            if (end - start > 1) {
              auto first = profile(start);
              for (int v = start + 1; v < end; ++v)
                if (profile(v) > first) return;
            }
            start = end;
          }
        }
        Diagram d = build_marks_diagram(T, leg_counts, struts, edges, mark);
        if (connected && !d.connected_graph()) return;
        if (loops >= 0 && d.loop_number() != loops) return;
        const CanonResult& c = canonicalize(d);
        seen.emplace(c.code, c.rep);
      });
    });
  }
  std::vector<Diagram> out;
  out.reserve(seen.size());
  for (auto& [code, d] : seen) out.push_back(std::move(d));
  return out;
}

// Legs recolored over a mark alphabet.
std::vector<Diagram> enumerate_marks_alphabet(int degree, const std::vector<std::string>& marks,
                                              const EnumLimits& limits) {
  std::map<std::string, Diagram> seen;
  std::vector<Diagram> shapes = enumerate_marks(degree, false, -1, marks.at(0), limits);
  for (const Diagram& shape : shapes) {
    int L = static_cast<int>(shape.legs.size());
    std::vector<int> color(L, 0);
    for (;;) {
      Diagram d = shape;
      for (int j = 0; j < L; ++j) d.legs[j].mark = marks[color[j]];
      const CanonResult& c = canonicalize(d);
      seen.emplace(c.code, c.rep);
      int i = 0;
      while (i < L && ++color[i] == static_cast<int>(marks.size())) color[i++] = 0;
      if (i == L) break;
    }
  }
  std::vector<Diagram> out;
  for (auto& [code, d] : seen) out.push_back(std::move(d));
  return out;
}

// ---------------------------------------------------------------------
// Line-skeleton enumeration: attachment positions scanned left to right,
// internal vertices created on demand, leftover capacities closed by an
// internal multigraph. Closed components are multiplied in afterwards.
// ---------------------------------------------------------------------
void gen_line_part(const Skeleton& skel, const std::vector<int>& comp_sizes, int T_budget,
                   std::map<std::string, Diagram>& seen) {
  int L = std::accumulate(comp_sizes.begin(), comp_sizes.end(), 0);
  if (L == 0 && T_budget == 0) {
    DiagramBuilder b(skel);
    Diagram d = b.build();
    seen.emplace(canonicalize(d).code, canonicalize(d).rep);
    return;
  }
  struct PosTarget {
    int kind;  // 0: chord partner, 1: vertex
    int arg;
  };
  std::vector<PosTarget> assign(L);
  std::vector<int> vertex_caps;
  std::vector<int> pos_of_index(L), comp_of_index(L);
  {
    int idx = 0;
    for (size_t c = 0; c < comp_sizes.size(); ++c)
      for (int p = 0; p < comp_sizes[c]; ++p) {
        comp_of_index[idx] = static_cast<int>(c);
        pos_of_index[idx] = p;
        ++idx;
      }
  }
  std::vector<bool> taken(L, false);

  std::function<void(int)> place = [&](int i) {
    while (i < L && taken[i]) ++i;
    if (i == L) {
      // Internal vertices not directly position-attached complete the
      // budget with all three slots free; the multigraph fill wires them.
      std::vector<int> degs = vertex_caps;
      if (static_cast<int>(degs.size()) > T_budget) return;
      degs.resize(T_budget, 3);
      std::vector<int> saved_caps = vertex_caps;
      vertex_caps = degs;
      gen_multigraphs(degs, [&](const EdgeMult& edges) {
        int T = static_cast<int>(vertex_caps.size());
        DiagramBuilder b(skel);
        std::vector<int> next_slot(T, 0);
        for (int v = 0; v < T; ++v) b.add_vertex();
        std::vector<int> legidx(L);
        for (int j = 0; j < L; ++j)
          legidx[j] = b.add_leg(LegMark::attach(skel.components[comp_of_index[j]],
                                                comp_of_index[j], pos_of_index[j]));
        for (const auto& [pr, mult] : edges)
          for (int k = 0; k < mult; ++k)
            b.connect(End::v(pr.first, next_slot[pr.first]++),
                      End::v(pr.second, next_slot[pr.second]++));
        for (int j = 0; j < L; ++j) {
          const PosTarget& t = assign[j];
          if (t.kind == 0) {
            if (t.arg > j) b.connect(End::leg(legidx[j]), End::leg(legidx[t.arg]));
          } else {
            b.connect(End::leg(legidx[j]), End::v(t.arg, next_slot[t.arg]++));
          }
        }
        Diagram d = b.build();
        // every component must touch the skeleton here
        int ncomp = 0;
        std::vector<int> comp = d.graph_components(&ncomp);
        std::vector<bool> touches(ncomp, false);
        for (size_t j = 0; j < d.legs.size(); ++j)
          touches[comp[d.dart_of_leg(static_cast<int>(j))]] = true;
        for (bool t2 : touches)
          if (!t2) return;
        const CanonResult& c = canonicalize(d);
        seen.emplace(c.code, c.rep);
      });
      vertex_caps = saved_caps;
      return;
    }
    taken[i] = true;
    for (int j = i + 1; j < L; ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      assign[i] = {0, j};
      assign[j] = {0, i};
      place(i + 1);
      taken[j] = false;
    }
    for (int v = 0; v < static_cast<int>(vertex_caps.size()); ++v) {
      if (vertex_caps[v] == 0) continue;
      vertex_caps[v] -= 1;
      assign[i] = {1, v};
      place(i + 1);
      vertex_caps[v] += 1;
    }
    if (static_cast<int>(vertex_caps.size()) < T_budget) {
      vertex_caps.push_back(2);
      assign[i] = {1, static_cast<int>(vertex_caps.size()) - 1};
      place(i + 1);
      vertex_caps.pop_back();
    }
    taken[i] = false;
  };
  place(0);
}

std::vector<Diagram> enumerate_line(int degree, const std::vector<std::string>& labels,
                                    const EnumLimits& limits) {
  if (2 * degree > limits.max_vertices)
    throw TooLarge("enumerate: vertex count exceeds the configured maximum");
  std::map<std::string, Diagram> seen;
  Skeleton skel = Skeleton::lines(labels);
  int C = static_cast<int>(labels.size());

  for (int d_line = 0; d_line <= degree; ++d_line) {
    int d_closed = degree - d_line;
    std::map<std::string, Diagram> line_parts;
    for (int L = 0; L <= 2 * d_line; ++L) {
      int T = 2 * d_line - L;
      std::vector<int> sizes(C, 0);
      std::function<void(int, int)> split = [&](int c, int left) {
        if (c == C - 1) {
          sizes[c] = left;
          gen_line_part(skel, sizes, T, line_parts);
          return;
        }
        for (int k = 0; k <= left; ++k) {
          sizes[c] = k;
          split(c + 1, left - k);
        }
      };
      if (C > 0) split(0, L);
    }
    if (d_closed == 0) {
      for (auto& [code, d] : line_parts) seen.emplace(code, d);
      continue;
    }
    std::vector<Diagram> closed = enumerate_marks(d_closed, false, -1, "h", limits);
    for (auto& [code, lp] : line_parts) {
      for (const Diagram& cp : closed) {
        if (!cp.legs.empty()) continue;
        Diagram d = lp;
        int voff = lp.n_tri;
        d.n_tri += cp.n_tri;
        std::vector<int> mate2(d.dart_count(), -1);
        auto remap_lp = [&](int h2) { return lp.is_leg_dart(h2) ? h2 + 3 * cp.n_tri : h2; };
        for (int h2 = 0; h2 < lp.dart_count(); ++h2)
          mate2[remap_lp(h2)] = remap_lp(lp.mate[h2]);
        for (int h2 = 0; h2 < cp.dart_count(); ++h2)
          mate2[3 * voff + h2] = 3 * voff + cp.mate[h2];
        d.mate = std::move(mate2);
        d.labels.clear();
        for (const auto& [k, lab] : lp.labels) d.add_label(remap_lp(lab.side), lab.value);
        d.validate();
        const CanonResult& c = canonicalize(d);
        seen.emplace(c.code, c.rep);
      }
    }
  }
  std::vector<Diagram> out;
  for (auto& [code, d] : seen) out.push_back(std::move(d));
  return out;
}

// Every edge optionally decorated with a one-sided token.
std::vector<Diagram> decorate_with_tokens(const std::vector<Diagram>& shapes,
                                          const std::vector<SymbolicLabel>& tokens) {
  std::map<std::string, Diagram> seen;
  for (const Diagram& shape : shapes) {
    std::vector<int> edge_keys;
    for (int h = 0; h < shape.dart_count(); ++h)
      if (shape.edge_key(h) == h) edge_keys.push_back(h);
    int opts = 1 + 2 * static_cast<int>(tokens.size());
    std::vector<int> choice(edge_keys.size(), 0);
    for (;;) {
      Diagram d = shape;
      for (size_t e = 0; e < edge_keys.size(); ++e) {
        if (choice[e] == 0) continue;
        int t = (choice[e] - 1) / 2;
        int side = (choice[e] - 1) % 2;
        d.add_label(side == 0 ? edge_keys[e] : d.mate[edge_keys[e]], tokens[t]);
      }
      const CanonResult& c = canonicalize(d);
      seen.emplace(c.code, c.rep);
      size_t i = 0;
      while (i < choice.size() && ++choice[i] == opts) choice[i++] = 0;
      if (i == choice.size()) break;
    }
  }
  std::vector<Diagram> out;
  for (auto& [code, d] : seen) out.push_back(std::move(d));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------
// SpaceId
// ---------------------------------------------------------------------
SpaceId SpaceId::parse(const std::string& text, int degree_cutoff) {
  SpaceId s;
  s.degree_cutoff = degree_cutoff;
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto split = [](const std::string& x) {
    std::vector<std::string> out;
    std::stringstream ss(x);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  if (head == "B") s.family = Family::B;
  else if (head == "Bconn") s.family = Family::Bconn;
  else if (head == "Bn") { s.family = Family::Bn; s.loops = std::stoi(tail); }
  else if (head == "Aline") { s.family = Family::A_line; s.line_labels = split(tail); }
  else if (head == "Amarks") { s.family = Family::A_marks; s.mark_labels = split(tail); }
  else if (head == "At") { s.family = Family::At; s.line_labels = split(tail); }
  else if (head == "E0" || head == "E1") {
    s.family = head == "E0" ? Family::E0 : Family::E1;
    auto parts = split(tail);
    if (parts.size() < 2) throw Malformed("SpaceId: E-spaces need n,m");
    s.loops = std::stoi(parts[0]);
    s.m = std::stoi(parts[1]);
    s.delta = LaurentPoly::one();
  } else {
    throw Malformed("SpaceId: unknown family '" + head + "'");
  }
  if (s.family == Family::A_marks && s.mark_labels.empty()) s.mark_labels = {"h"};
  if (s.family == Family::A_line && s.line_labels.empty()) s.line_labels = {"l"};
  if (s.family == Family::At && s.line_labels.empty()) s.line_labels = {"l"};
  return s;
}

std::string SpaceId::str() const {
  switch (family) {
    case Family::B: return "B";
    case Family::Bconn: return "Bconn";
    case Family::Bn: return "Bn:" + std::to_string(loops);
    case Family::A_line: {
      std::string s = "Aline:";
      for (size_t i = 0; i < line_labels.size(); ++i) s += (i ? "," : "") + line_labels[i];
      return s;
    }
    case Family::A_marks: {
      std::string s = "Amarks:";
      for (size_t i = 0; i < mark_labels.size(); ++i) s += (i ? "," : "") + mark_labels[i];
      return s;
    }
    case Family::At: return "At";
    case Family::E0: return "E0:" + std::to_string(loops) + "," + std::to_string(m);
    case Family::E1: return "E1:" + std::to_string(loops) + "," + std::to_string(m);
  }
  return "?";
}

namespace {
std::vector<Diagram> enumerate_uncached(const SpaceId& spec, int degree,
                                        const EnumLimits& limits);
}

std::vector<Diagram> enumerate_diagrams(const SpaceId& spec, int degree,
                                        const EnumLimits& limits) {
  static std::map<std::string, std::vector<Diagram>> cache;
  static std::mutex mu;
  std::string key = spec.str() + "@" + std::to_string(degree) + "#" +
                    std::to_string(limits.max_degree) + "," +
                    std::to_string(limits.max_vertices);
  if (spec.delta) key += "|" + spec.delta->key();
  {
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<Diagram> out = enumerate_uncached(spec, degree, limits);
  std::scoped_lock lock(mu);
  return cache.emplace(std::move(key), std::move(out)).first->second;
}

namespace {
std::vector<Diagram> enumerate_uncached(const SpaceId& spec, int degree,
                                        const EnumLimits& limits) {
  if (degree < 0) return {};
  if (degree > limits.max_degree)
    throw TooLarge("enumerate: degree beyond configured maximum");
  switch (spec.family) {
    case SpaceId::Family::B:
      return enumerate_marks(degree, false, -1, "h", limits);
    case SpaceId::Family::Bconn:
      return enumerate_marks(degree, true, -1, "h", limits);
    case SpaceId::Family::Bn:
      return enumerate_marks(degree, true, spec.loops, "h", limits);
    case SpaceId::Family::A_marks:
      return enumerate_marks_alphabet(degree, spec.mark_labels, limits);
    case SpaceId::Family::A_line:
      return enumerate_line(degree, spec.line_labels, limits);
    case SpaceId::Family::At:
      return decorate_with_tokens(enumerate_line(degree, spec.line_labels, limits),
                                  {SymbolicLabel::t_power(1), SymbolicLabel::t_power(-1)});
    case SpaceId::Family::E0:
    case SpaceId::Family::E1: {
      std::vector<SymbolicLabel> tokens;
      for (int k = -spec.m; k <= spec.m; ++k) {
        if (k == 0) continue;
        if (spec.family == SpaceId::Family::E0)
          tokens.push_back(SymbolicLabel{LaurentPoly::t_power(k), 1});
        else
          tokens.push_back(SymbolicLabel{LaurentPoly::t_power(k) - LaurentPoly::one(), 1});
      }
      return decorate_with_tokens(enumerate_marks(degree, true, spec.loops, "h", limits),
                                  tokens);
    }
  }
  return {};
}
}  // namespace

std::vector<Diagram> enumerate_diagrams(const SpaceId& spec, const EnumLimits& limits) {
  std::vector<Diagram> out;
  for (int d = 0; d <= spec.degree_cutoff; ++d) {
    auto v = enumerate_diagrams(spec, d, limits);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Diagram sample_connected_diagram(uint64_t& state, int degree) {
  auto next = [&state]() {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1DULL;
  };
  for (;;) {
    int total = 2 * degree;
    int T = static_cast<int>(next() % (total + 1));
    int L = total - T;
    int darts = 3 * T + L;
    if (darts % 2) continue;
    Diagram d;
    d.n_tri = T;
    for (int j = 0; j < L; ++j) d.legs.push_back(LegMark::free_mark("h"));
    std::vector<int> order(darts);
    std::iota(order.begin(), order.end(), 0);
    for (int i = darts - 1; i > 0; --i)
      std::swap(order[i], order[next() % (i + 1)]);
    d.mate.assign(darts, -1);
    bool ok = true;
    for (int i = 0; i + 1 < darts; i += 2) {
      int a = order[i], b = order[i + 1];
      if (a == b) { ok = false; break; }
      d.mate[a] = b;
      d.mate[b] = a;
    }
    if (!ok) continue;
    d.validate();
    if (!d.connected_graph()) continue;
    return d;
  }
}

// ---------------------------------------------------------------------
// Basis: relation generation + sparse exact RREF
// ---------------------------------------------------------------------
namespace {

bool space_has_stu(const SpaceId& s) {
  return s.family == SpaceId::Family::A_line || s.family == SpaceId::Family::At;
}
// Labeled token spaces are spanned modulo AS/isomorphism only; their
// finiteness does not rest on IHX and token membership is checked
// separately, so no IHX rows are generated there.
bool space_has_ihx(const SpaceId& s) {
  return s.family != SpaceId::Family::At && s.family != SpaceId::Family::E0 &&
         s.family != SpaceId::Family::E1;
}

std::vector<LinearCombo> relations_for(const SpaceId& spec, const Diagram& d) {
  std::vector<LinearCombo> rows;
  LinearCombo self;
  self.add(d, Rational(1));
  if (space_has_ihx(spec)) {
    for (int h = 0; h < d.dart_count(); ++h) {
      if (d.edge_key(h) != h) continue;
      int m = d.mate[h];
      if (d.is_leg_dart(h) || d.is_leg_dart(m)) continue;
      if (d.vertex_of_dart(h) == d.vertex_of_dart(m)) continue;
      if (d.labels.count(h)) continue;
      LinearCombo row = self;
      try {
        row -= apply_IHX(d, h);
      } catch (const UnsupportedLabel&) {
        continue;
      }
      if (!row.is_zero()) rows.push_back(std::move(row));
    }
  }
  if (space_has_stu(spec)) {
    for (size_t c = 0; c < d.skeleton.components.size(); ++c) {
      int count = 0;
      for (const auto& m : d.legs)
        if (m.comp == static_cast<int>(c)) count = std::max(count, m.pos + 1);
      for (int p = 0; p + 1 < count; ++p) {
        LinearCombo row = self;
        try {
          row -= apply_STU(d, static_cast<int>(c), p);
        } catch (const UnsupportedLabel&) {
          continue;
        }
        if (!row.is_zero()) rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

using SparseRow = std::vector<std::pair<int, Rational>>;

SparseRow row_axpy(const SparseRow& a, const Rational& f, const SparseRow& b) {
  // a - f*b with sorted column indices
  SparseRow out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -f * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second - f * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Basis Basis::build(const SpaceId& spec, const Options& opts, const EnumLimits& limits) {
  Basis basis;
  basis.spec_ = spec;

  for (int degree = 0; degree <= spec.degree_cutoff; ++degree) {
    std::vector<Diagram> diagrams = enumerate_diagrams(spec, degree, limits);

    std::vector<std::string> codes;
    std::map<std::string, const Diagram*> rep_of;
    for (const Diagram& d : diagrams) {
      const CanonResult& c = canonicalize(d);
      basis.known_codes_[c.code] = 1;
      if (c.sign == 0) continue;
      codes.push_back(c.code);
      rep_of[c.code] = &d;
    }
    std::sort(codes.begin(), codes.end());
    if (opts.reverse_pivots) std::reverse(codes.begin(), codes.end());
    std::map<std::string, int> col;
    for (size_t i = 0; i < codes.size(); ++i) col[codes[i]] = static_cast<int>(i);

    std::vector<LinearCombo> combos;
    if (opts.parallel && diagrams.size() > 8) {
      size_t nchunk = 4;
      std::vector<std::future<std::vector<LinearCombo>>> futs;
      for (size_t c = 0; c < nchunk; ++c) {
        futs.push_back(std::async(std::launch::async, [&, c] {
          std::vector<LinearCombo> local;
          for (size_t i = c; i < diagrams.size(); i += nchunk) {
            auto r = relations_for(spec, diagrams[i]);
            local.insert(local.end(), r.begin(), r.end());
          }
          return local;
        }));
      }
      for (auto& f : futs) {
        auto r = f.get();
        combos.insert(combos.end(), r.begin(), r.end());
      }
    } else {
      for (const Diagram& d : diagrams) {
        auto r = relations_for(spec, d);
        combos.insert(combos.end(), r.begin(), r.end());
      }
    }

    std::vector<SparseRow> rows;
    rows.reserve(combos.size());
    for (const LinearCombo& c : combos) {
      SparseRow row;
      for (const auto& [code, term] : c.terms()) {
        auto it = col.find(code);
        if (it == col.end()) throw NotInSpace("relation leaves the enumerated span");
        row.emplace_back(it->second, term.coeff);
      }
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const SparseRow& a, const SparseRow& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first) return a[i].first < b[i].first;
        if (a[i].second != b[i].second) return a[i].second < b[i].second;
      }
      return false;
    });

    std::map<int, SparseRow> pivot;
    for (auto& raw : rows) {
      SparseRow row = std::move(raw);
      // Full reduction: pivot rows keep non-pivot tails, so each hit is
      // eliminated for good and the scan terminates.
      for (bool changed = true; changed && !row.empty();) {
        changed = false;
        for (const auto& [c, v] : row) {
          auto it = pivot.find(c);
          if (it != pivot.end()) {
            row = row_axpy(row, v, it->second);
            changed = true;
            break;
          }
        }
      }
      if (row.empty()) continue;
      Rational lead = row.front().second;
      for (auto& [c, v] : row) v /= lead;
      int pc = row.front().first;
      for (auto& [c0, pr] : pivot) {
        auto hit = std::find_if(pr.begin(), pr.end(),
                                [&](const auto& e) { return e.first == pc; });
        if (hit == pr.end()) continue;
        pr = row_axpy(pr, hit->second, row);
      }
      pivot.emplace(pc, std::move(row));
    }

    std::vector<int> colmap(codes.size(), -1);
    for (size_t i = 0; i < codes.size(); ++i) {
      if (pivot.count(static_cast<int>(i))) continue;
      colmap[i] = static_cast<int>(basis.reps_.size());
      basis.rep_index_[codes[i]] = colmap[i];
      basis.reps_.push_back(*rep_of[codes[i]]);
    }
    for (auto& [pc, row] : pivot) {
      SparseRow expr;
      for (size_t k = 1; k < row.size(); ++k) {
        int c = row[k].first;
        if (colmap[c] < 0) throw Malformed("RREF left a pivot column in a tail");
        expr.emplace_back(colmap[c], -row[k].second);
      }
      basis.pivot_rows_[codes[pc]] = std::move(expr);
    }
  }
  return basis;
}

int Basis::dimension() const { return static_cast<int>(reps_.size()); }

int Basis::dimension_at(int degree) const {
  int n = 0;
  for (const Diagram& d : reps_)
    if (d.degree() == degree) ++n;
  return n;
}

std::vector<Rational> Basis::coords(const LinearCombo& c) const {
  std::vector<Rational> out(reps_.size(), Rational(0));
  for (const auto& [code, term] : c.terms()) {
    auto rit = rep_index_.find(code);
    if (rit != rep_index_.end()) {
      out[rit->second] += term.coeff;
      continue;
    }
    auto pit = pivot_rows_.find(code);
    if (pit != pivot_rows_.end()) {
      for (const auto& [idx, v] : pit->second) out[idx] += term.coeff * v;
      continue;
    }
    throw NotInSpace("coords: diagram outside the space span");
  }
  return out;
}

LinearCombo Basis::reduce(const LinearCombo& c) const {
  std::vector<Rational> x = coords(c);
  LinearCombo out;
  for (size_t i = 0; i < reps_.size(); ++i)
    if (!x[i].is_zero()) out.add(reps_[i], x[i]);
  return out;
}

bool Basis::reduces_to_zero(const LinearCombo& c) const {
  for (const Rational& v : coords(c))
    if (!v.is_zero()) return false;
  return true;
}

std::vector<Rational> coords(const LinearCombo& c, const Basis& basis) {
  return basis.coords(c);
}

// ---------------------------------------------------------------------
// PBW maps
// ---------------------------------------------------------------------
LinearCombo chi(const LinearCombo& c, const std::vector<std::string>& to_lines) {
  Skeleton out_skel = Skeleton::lines(to_lines);
  return c.map_linear([&](const Diagram& d, const Rational& coeff) {
    if (d.skeleton.kind != SkeletonKind::Marks)
      throw SkeletonMismatch("chi expects marks diagrams");
    std::map<std::string, std::vector<int>> legs_by;
    for (size_t j = 0; j < d.legs.size(); ++j) {
      const std::string& mk = d.legs[j].mark;
      if (std::find(to_lines.begin(), to_lines.end(), mk) != to_lines.end())
        legs_by[mk].push_back(static_cast<int>(j));
    }
    std::vector<std::string> keys;
    std::vector<std::vector<int>> perms;
    Rational norm(1);
    for (auto& [mk, v] : legs_by) {
      if (out_skel.component_index(mk) < 0)
        throw MissingLine("chi: no line component for mark " + mk);
      keys.push_back(mk);
      std::vector<int> p(v.size());
      std::iota(p.begin(), p.end(), 0);
      perms.push_back(p);
      norm *= factorial(static_cast<unsigned>(v.size())).inverse();
    }
    LinearCombo out;
    std::function<void(size_t)> walk = [&](size_t i) {
      if (i == keys.size()) {
        Diagram nd = d;
        nd.skeleton = out_skel;
        for (size_t k = 0; k < keys.size(); ++k) {
          const auto& legs = legs_by[keys[k]];
          int comp = out_skel.component_index(keys[k]);
          for (size_t a = 0; a < legs.size(); ++a)
            nd.legs[legs[a]] = LegMark::attach(keys[k], comp, perms[k][a]);
        }
        out.add(nd, coeff * norm);
        return;
      }
      std::vector<int>& p = perms[i];
      std::sort(p.begin(), p.end());
      do {
        walk(i + 1);
      } while (std::next_permutation(p.begin(), p.end()));
    };
    walk(0);
    return out;
  });
}

namespace {

// The joined S-diagram of the STU relation at (comp, pos): apply_STU
// returns U + S; S is the part with one leg fewer on that component.
LinearCombo stu_join(const Diagram& d, int comp, int pos) {
  LinearCombo both = apply_STU(d, comp, pos);
  auto count_legs = [&](const Diagram& x) {
    int n = 0;
    for (const auto& m : x.legs)
      if (m.comp == comp) ++n;
    return n;
  };
  int orig = count_legs(d);
  LinearCombo s;
  for (const auto& [code, term] : both.terms())
    if (count_legs(term.diagram) < orig) s.add(term.diagram, term.coeff);
  return s;
}

// The literal transposed diagram (branches at positions pos, pos+1 swapped).
Diagram transpose_legs(const Diagram& d, int comp, int pos) {
  int l1 = -1, l2 = -1;
  for (size_t j = 0; j < d.legs.size(); ++j) {
    if (d.legs[j].comp == comp && d.legs[j].pos == pos) l1 = static_cast<int>(j);
    if (d.legs[j].comp == comp && d.legs[j].pos == pos + 1) l2 = static_cast<int>(j);
  }
  if (l1 < 0 || l2 < 0) throw SiteNotFound("transpose_legs: no adjacent pair");
  int x = d.dart_of_leg(l1), y = d.dart_of_leg(l2);
  Diagram r = d;
  int X = d.mate[x], Y = d.mate[y];
  std::vector<std::pair<int, LabelValue>> labs;
  for (const auto& [k, lab] : d.labels) {
    int s = lab.side;
    if (s == x) s = y;
    else if (s == y) s = x;
    labs.emplace_back(s, lab.value);
  }
  if (X != y) {
    r.mate[x] = Y;
    r.mate[Y] = x;
    r.mate[y] = X;
    r.mate[X] = y;
  }
  r.labels.clear();
  for (const auto& [s, v] : labs) r.add_label(s, v);
  return r;
}

LinearCombo chi_inverse_line(const Diagram& d, const std::string& label);

LinearCombo chi_inverse_line_combo(const LinearCombo& c, const std::string& label) {
  return c.map_linear([&](const Diagram& d, const Rational& coeff) {
    return chi_inverse_line(d, label) * coeff;
  });
}

Diagram lift_line(const Diagram& d, const std::string& label) {
  int comp = d.skeleton.component_index(label);
  Diagram r = d;
  std::vector<std::string> rest;
  for (const auto& c : d.skeleton.components)
    if (c != label) rest.push_back(c);
  r.skeleton = rest.empty() ? Skeleton::marks() : Skeleton::lines(rest);
  for (auto& m : r.legs) {
    if (m.comp == comp) {
      m = LegMark::free_mark(label);
    } else if (m.comp > comp) {
      m.comp -= 1;
    }
  }
  return r;
}

LinearCombo chi_inverse_line(const Diagram& d, const std::string& label) {
  static std::map<std::string, LinearCombo> memo;
  static std::mutex memo_mu;
  std::string key = d.raw_key() + "##" + label;
  {
    std::scoped_lock lock(memo_mu);
    auto mit = memo.find(key);
    if (mit != memo.end()) return mit->second;
  }

  int comp = d.skeleton.component_index(label);
  if (comp < 0) throw MissingLine("chi_inverse: no such line " + label);
  std::vector<int> legs;
  for (size_t j = 0; j < d.legs.size(); ++j)
    if (d.legs[j].comp == comp) legs.push_back(static_cast<int>(j));
  int k = static_cast<int>(legs.size());

  LinearCombo out;
  out.add(lift_line(d, label), Rational(1));
  if (k >= 2) {
    Rational inv_kfact = factorial(static_cast<unsigned>(k)).inverse();
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      bool ident = true;
      for (int i = 0; i < k; ++i)
        if (sigma[i] != i) ident = false;
      if (ident) continue;
      std::vector<int> cur(k);
      std::iota(cur.begin(), cur.end(), 0);
      Diagram walk_d = d;
      LinearCombo sum;
      while (cur != sigma) {
        int p = 0;
        while (cur[p] == sigma[p]) ++p;
        int q = p;
        while (cur[q] != sigma[p]) ++q;
        for (int j = q - 1; j >= p; --j) {
          sum += stu_join(walk_d, comp, j);
          walk_d = transpose_legs(walk_d, comp, j);
          std::swap(cur[j], cur[j + 1]);
        }
      }
      out += chi_inverse_line_combo(sum, label) * inv_kfact;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  std::scoped_lock lock(memo_mu);
  memo[key] = out;
  return out;
}

}  // namespace

LinearCombo chi_inverse(const LinearCombo& c, const std::vector<std::string>& from_lines) {
  LinearCombo cur = c;
  for (const std::string& label : from_lines) cur = chi_inverse_line_combo(cur, label);
  return cur;
}

// ---------------------------------------------------------------------
// Label-family membership
// ---------------------------------------------------------------------
bool in_At(const LinearCombo& c) {
  for (const auto& [code, term] : c.terms()) {
    for (const auto& [k, lab] : term.diagram.labels) {
      if (!std::holds_alternative<SymbolicLabel>(lab.value)) return false;
      const auto& s = std::get<SymbolicLabel>(lab.value);
      if (s.delta_pow != 0) return false;
      auto mono = s.num.monomial();
      if (!mono) return false;
      auto [exp, coeff] = *mono;
      if (!coeff.is_one() || exp < -1 || exp > 1 || exp == 0) return false;
    }
  }
  return true;
}

namespace {

// Splits every Delta-denominator label with a t^0 numerator term using
// t^0/Delta = (1/delta_0) * (empty - sum_{k != 0} delta_k t^k / Delta),
// which eliminates the k = 0 token. delta_0 is odd (hence nonzero) for
// every integer Delta in Z, so the rewrite always applies there.
LinearCombo eliminate_t0_tokens(const LinearCombo& c, const LaurentPoly& delta) {
  Rational delta0 = delta.coeff(0);
  if (delta0.is_zero()) return c;
  LinearCombo cur = c;
  for (;;) {
    bool changed = false;
    LinearCombo next;
    for (const auto& [code, term] : cur.terms()) {
      const Diagram& d = term.diagram;
      int offending = -1;
      for (const auto& [k, lab] : d.labels) {
        if (!std::holds_alternative<SymbolicLabel>(lab.value)) continue;
        const auto& s = std::get<SymbolicLabel>(lab.value);
        if (s.delta_pow == 1 && !s.num.coeff(0).is_zero()) {
          offending = k;
          break;
        }
      }
      if (offending < 0) {
        next.add(d, term.coeff);
        continue;
      }
      changed = true;
      const EdgeLabel lab = d.labels.at(offending);
      const auto& s = std::get<SymbolicLabel>(lab.value);
      Rational c0 = s.num.coeff(0) / delta0;
      Diagram stripped = d;
      stripped.labels.erase(offending);
      LaurentPoly reduced = s.num - delta * c0;
      if (!reduced.is_zero()) {
        Diagram relabeled = stripped;
        relabeled.add_label(lab.side, SymbolicLabel{reduced, 1});
        next.add(relabeled, term.coeff);
      }
      next.add(stripped, term.coeff * c0);
    }
    cur = std::move(next);
    if (!changed) break;
  }
  return cur;
}

}  // namespace

bool in_E(const LinearCombo& c, const ESpec& spec) {
  LinearCombo normalized = spec.variant == 0 ? eliminate_t0_tokens(c, spec.delta) : c;
  for (const auto& [code, term] : normalized.terms()) {
    const Diagram& d = term.diagram;
    if (!d.connected_graph() || d.loop_number() != spec.loops) return false;
    if (!d.legs.empty()) return false;
    for (const auto& [k, lab] : d.labels) {
      if (!std::holds_alternative<SymbolicLabel>(lab.value)) return false;
      const auto& s = std::get<SymbolicLabel>(lab.value);
      if (s.delta_pow != 1) return false;
      if (s.num.is_zero()) continue;
      if (s.num.min_exp() < -spec.m || s.num.max_exp() > spec.m) return false;
      if (spec.variant == 0) {
        if (!s.num.coeff(0).is_zero()) return false;
      } else {
        if (!s.num.eval_one().is_zero()) return false;
      }
    }
  }
  return true;
}

}  // namespace loopexp
