#include "loopexp/sl2.hpp"

#include <array>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace loopexp {

bool CasimirPoly::is_zero() const { return coeffs.empty(); }

void CasimirPoly::add(int cexp, const Rational& v) {
  if (v.is_zero()) return;
  auto it = coeffs.find(cexp);
  if (it == coeffs.end()) {
    coeffs[cexp] = v;
    return;
  }
  it->second += v;
  if (it->second.is_zero()) coeffs.erase(it);
}

CasimirPoly& CasimirPoly::operator+=(const CasimirPoly& o) {
  for (const auto& [k, v] : o.coeffs) add(k, v);
  return *this;
}

CasimirPoly CasimirPoly::operator*(const Rational& s) const {
  CasimirPoly out;
  out.h_grading = h_grading;
  if (s.is_zero()) return out;
  for (const auto& [k, v] : coeffs) out.coeffs[k] = v * s;
  return out;
}

std::string CasimirPoly::str() const {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : coeffs) {
    os << (first ? "" : " + ") << "(" << v.str() << ")";
    if (k == 1) os << "*c";
    else if (k > 1) os << "*c^" << k;
    first = false;
  }
  return os.str();
}

namespace {

void require_plain(const Diagram& d) {
  if (d.has_labels()) throw UnexpandedLabel("sl2: expand labels first");
  if (d.skeleton.kind != SkeletonKind::Marks)
    throw UnexpandedLabel("sl2: open diagrams only");
  for (const auto& m : d.legs)
    if (m.attached() || m.mark != "h")
      throw UnexpandedLabel("sl2: legs must all carry the mark h");
}

// Splices the diagram after deleting two vertices, joining the listed dart
// pairs through the deleted set; closed chains contribute a factor of
// dim sl2 = 3 each.
Diagram splice_after_deletion(const Diagram& d, int vu, int vv,
                              const std::vector<std::pair<int, int>>& joins,
                              int* closed_loops) {
  *closed_loops = 0;
  std::vector<int> removed = {3 * vu, 3 * vu + 1, 3 * vu + 2, 3 * vv, 3 * vv + 1, 3 * vv + 2};
  std::vector<int> link(d.dart_count(), -1);  // pairing imposed by the joins
  for (auto [a, b] : joins) {
    link[a] = b;
    link[b] = a;
  }
  auto is_removed = [&](int h) { return h / 3 == vu || (h / 3 == vv && !d.is_leg_dart(h)); };

  // Survivor numbering: vertices drop vu, vv; legs keep order.
  std::vector<int> vmap(d.n_tri, -1);
  int nv = 0;
  for (int v = 0; v < d.n_tri; ++v)
    if (v != vu && v != vv) vmap[v] = nv++;
  Diagram out;
  out.n_tri = nv;
  out.legs = d.legs;
  out.mate.assign(out.dart_count(), -1);
  auto final_dart = [&](int h) {
    if (d.is_leg_dart(h)) return 3 * nv + d.leg_of_dart(h);
    return 3 * vmap[h / 3] + h % 3;
  };

  std::vector<bool> seen(d.dart_count(), false);
  for (int h0 = 0; h0 < d.dart_count(); ++h0) {
    if (is_removed(h0) || seen[h0]) continue;
    // Walk: mate, then jump across joins while inside the removed set.
    int cur = d.mate[h0];
    while (is_removed(cur)) {
      int jump = link[cur];
      if (jump < 0) throw Malformed("sl2 splice: unjoined removed dart");
      cur = d.mate[jump];
      if (cur == h0) break;  // returned to start: handled below
    }
    if (cur == h0) continue;  // degenerate; caught as loop later
    seen[h0] = seen[cur] = true;
    out.mate[final_dart(h0)] = final_dart(cur);
    out.mate[final_dart(cur)] = final_dart(h0);
  }
  // Closed chains: joined pairs whose whole orbit stays in the removed set.
  std::vector<bool> visited(d.dart_count(), false);
  for (auto [a, b] : joins) {
    if (visited[a]) continue;
    // Follow a -> mate -> link ... until back at a or escaping.
    int cur = a;
    bool closed = true;
    std::vector<int> orbit;
    for (;;) {
      orbit.push_back(cur);
      int m = d.mate[cur];
      if (!is_removed(m)) {
        closed = false;
        break;
      }
      orbit.push_back(m);
      cur = link[m];
      if (cur < 0) throw Malformed("sl2 splice: broken chain");
      if (cur == a) break;
    }
    if (closed) {
      for (int x : orbit) visited[x] = true;
      ++*closed_loops;
    }
  }
  out.validate();
  return out;
}

CasimirPoly sl2_rec(const Diagram& d);

CasimirPoly sl2_cached(const Diagram& d) {
  static std::unordered_map<std::string, CasimirPoly> memo;
  static std::mutex mu;
  const CanonResult& c = canonicalize(d);
  if (c.sign == 0) {
    CasimirPoly zero;
    zero.h_grading = d.degree();
    return zero;
  }
  {
    std::scoped_lock lock(mu);
    auto it = memo.find(c.code);
    if (it != memo.end()) return it->second * Rational(c.sign);
  }
  CasimirPoly w = sl2_rec(c.rep);
  {
    std::scoped_lock lock(mu);
    memo[c.code] = w;
  }
  return w * Rational(c.sign);
}

CasimirPoly sl2_rec(const Diagram& d) {
  CasimirPoly out;
  out.h_grading = d.degree();

  // Internal edge between two distinct trivalent vertices?
  int edge = -1;
  for (int h = 0; h < d.dart_count(); ++h) {
    if (d.edge_key(h) != h) continue;
    int m = d.mate[h];
    if (d.is_leg_dart(h) || d.is_leg_dart(m)) continue;
    if (d.vertex_of_dart(h) == d.vertex_of_dart(m)) continue;
    edge = h;
    break;
  }
  if (edge < 0) {
    // Only struts, lone vertices with legs/self-loops remain. Any trivalent
    // vertex here evaluates to zero (two equal arguments in the bracket).
    if (d.n_tri > 0) return out;
    int struts = d.dart_count() / 2;
    CasimirPoly w;
    w.h_grading = d.degree();
    w.add(struts, Rational(1));
    return w;
  }
  int e = edge, ebar = d.mate[edge];
  int vu = d.vertex_of_dart(e), vv = d.vertex_of_dart(ebar);
  auto succ = [](int h) { return (h / 3) * 3 + (h % 3 + 1) % 3; };
  int a = succ(e), b = succ(a);
  int c = succ(ebar), dd = succ(c);
  // <[[a,b],c],d> = 2(<b,c><a,d> - <a,c><b,d>): joins (b,c)+(a,d) minus
  // (a,c)+(b,d), each coefficient 2, with 3 per closed loop.
  struct Case {
    std::vector<std::pair<int, int>> joins;
    Rational coeff;
  };
  for (const Case& cs : {Case{{{b, c}, {a, dd}}, Rational(2)},
                         Case{{{a, c}, {b, dd}}, Rational(-2)}}) {
    int loops = 0;
    Diagram next = splice_after_deletion(d, vu, vv, cs.joins, &loops);
    Rational scale = cs.coeff * rational_pow(Rational(3), loops);
    out += sl2_cached(next) * scale;
  }
  return out;
}

}  // namespace

CasimirPoly sl2_weight(const Diagram& d) {
  require_plain(d);
  d.validate();
  return sl2_cached(d);
}

namespace {

using Vec3 = std::array<Rational, 3>;  // coordinates in (H, E, F)

Vec3 bracket(const Vec3& x, const Vec3& y) {
  // [H,E] = 2E, [H,F] = -2F, [E,F] = H
  Vec3 out{Rational(0), Rational(0), Rational(0)};
  out[1] += (x[0] * y[1] - x[1] * y[0]) * Rational(2);
  out[2] += (x[0] * y[2] - x[2] * y[0]) * Rational(-2);
  out[0] += x[1] * y[2] - x[2] * y[1];
  return out;
}

Rational form(const Vec3& x, const Vec3& y) {
  // trace form in the 2-dimensional representation
  return x[0] * y[0] * Rational(2) + x[1] * y[2] + x[2] * y[1];
}

Rational lambda3(const Vec3& x, const Vec3& y, const Vec3& z) { return form(bracket(x, y), z); }

}  // namespace

CasimirPoly sl2_brute(const Diagram& d) {
  require_plain(d);
  d.validate();
  if (d.n_tri > 8) throw TooLarge("sl2_brute: more than 8 trivalent vertices");

  // Basis indices 0,1,2 = H,E,F. Each internal edge sums over the dual
  // pairs (H, H/2), (E, F), (F, E); the halving rides along as a power of
  // two so the contraction runs on machine integers against a precomputed
  // <[x,y],z> table.
  static const auto lam = [] {
    std::array<std::array<std::array<long, 3>, 3>, 3> t{};
    const Vec3 basis[3] = {Vec3{Rational(1), Rational(0), Rational(0)},
                           Vec3{Rational(0), Rational(1), Rational(0)},
                           Vec3{Rational(0), Rational(0), Rational(1)}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          t[i][j][k] = lambda3(basis[i], basis[j], basis[k]).to_long();
    return t;
  }();

  std::vector<int> internal_edges;
  int leg_leg_edges = 0;
  for (int h = 0; h < d.dart_count(); ++h) {
    if (d.edge_key(h) != h) continue;
    bool la = d.is_leg_dart(h), lb = d.is_leg_dart(d.mate[h]);
    if (la && lb) ++leg_leg_edges;
    else if (!la && !lb) internal_edges.push_back(h);
  }
  int ne = static_cast<int>(internal_edges.size());
  std::sort(internal_edges.begin(), internal_edges.end());

  // slot[dart]: basis index of the element arriving there; legs supply H.
  std::vector<int> slot(d.dart_count(), 0);
  std::vector<int> pending(d.n_tri, 0);
  for (int v = 0; v < d.n_tri; ++v)
    for (int s = 0; s < 3; ++s)
      if (!d.is_leg_dart(d.mate[3 * v + s])) ++pending[v];

  mpq_class total(0);
  auto eval_vertex = [&](int v) { return lam[slot[3 * v]][slot[3 * v + 1]][slot[3 * v + 2]]; };
  // Vertices with only leg neighbours contract lambda(H,H,H) = 0.
  for (int v = 0; v < d.n_tri; ++v)
    if (pending[v] == 0 && eval_vertex(v) == 0) {
      CasimirPoly zero;
      zero.h_grading = d.degree();
      return zero;
    }

  static const int pair_first[3] = {0, 1, 2};
  static const int pair_second[3] = {0, 2, 1};
  std::function<void(int, long, int)> walk = [&](int k, long prod, int halves) {
    if (k == ne) {
      mpq_class term(prod);
      term /= mpq_class(mpz_class(1) << halves);
      total += term;
      return;
    }
    int h = internal_edges[k];
    int m = d.mate[h];
    int vu = d.vertex_of_dart(h), vv = d.vertex_of_dart(m);
    for (int c = 0; c < 3; ++c) {
      slot[h] = pair_first[c];
      slot[m] = pair_second[c];
      pending[vu] -= 1;
      pending[vv] -= 1;
      long p = prod;
      if (pending[vu] == 0) p *= eval_vertex(vu);
      if (p != 0 && vv != vu && pending[vv] == 0) p *= eval_vertex(vv);
      if (p != 0) walk(k + 1, p, halves + (c == 0 ? 1 : 0));
      pending[vu] += 1;
      pending[vv] += 1;
    }
  };
  walk(0, 1, 0);

  Rational total_r{total};
  int legs = static_cast<int>(d.legs.size());
  total_r *= rational_pow(Rational(2), leg_leg_edges);  // <H,H> per strut
  if (legs % 2) {
    CasimirPoly zero;
    zero.h_grading = d.degree();
    if (!total_r.is_zero()) throw Malformed("sl2_brute: odd leg count with nonzero value");
    return zero;
  }
  int dpow = legs / 2;
  CasimirPoly out;
  out.h_grading = d.degree();
  out.add(dpow, total_r / rational_pow(Rational(2), dpow));
  return out;
}

bool nonvanishing_certificate(const LinearCombo& c) {
  CasimirPoly acc;
  for (const auto& [code, term] : c.terms()) {
    if (term.diagram.has_labels())
      throw UnexpandedLabel("nonvanishing_certificate: expand labels first");
    acc += sl2_weight(term.diagram) * term.coeff;
  }
  return !acc.is_zero();
}

}  // namespace loopexp
