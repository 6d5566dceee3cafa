#include "loopexp/shapes.hpp"

namespace loopexp {
namespace shapes {

Diagram theta() {
  DiagramBuilder b;
  int u = b.add_vertex(), v = b.add_vertex();
  for (int s = 0; s < 3; ++s) b.connect(End::v(u, s), End::v(v, 2 - s));
  return b.build();
}

Diagram dumbbell() {
  DiagramBuilder b;
  int u = b.add_vertex(), v = b.add_vertex();
  b.connect(End::v(u, 0), End::v(u, 1));
  b.connect(End::v(v, 0), End::v(v, 1));
  b.connect(End::v(u, 2), End::v(v, 2));
  return b.build();
}

Diagram strut(const std::string& mark_a, const std::string& mark_b) {
  DiagramBuilder b;
  int la = b.add_free_leg(mark_a), lb = b.add_free_leg(mark_b);
  b.connect(End::leg(la), End::leg(lb));
  return b.build();
}

Diagram labeled_strut(const std::string& mark_a, const std::string& mark_b,
                      const LabelValue& near_a) {
  DiagramBuilder b;
  int la = b.add_free_leg(mark_a), lb = b.add_free_leg(mark_b);
  b.connect(End::leg(la), End::leg(lb));
  b.label(End::leg(la), near_a);
  return b.build();
}

Diagram wheel(int k, const std::string& mark) {
  if (k < 2) throw Malformed("wheel needs at least 2 spokes");
  DiagramBuilder b;
  std::vector<int> vs;
  for (int i = 0; i < k; ++i) vs.push_back(b.add_vertex());
  for (int i = 0; i < k; ++i) b.connect(End::v(vs[i], 1), End::v(vs[(i + 1) % k], 0));
  for (int i = 0; i < k; ++i) {
    int leg = b.add_free_leg(mark);
    b.connect(End::v(vs[i], 2), End::leg(leg));
  }
  return b.build();
}

Diagram bubble_chain(int n, const std::string& end_mark_1, const std::string& end_mark_2) {
  if (n < 1) throw Malformed("bubble_chain needs n >= 1");
  DiagramBuilder b;
  // Each bubble: vertices (p, q) with two parallel edges p1-q0, p2-q1;
  // p0 receives the incoming edge, q2 sends the outgoing one.
  std::vector<std::pair<int, int>> bubbles;
  for (int i = 0; i < n; ++i) {
    int p = b.add_vertex(), q = b.add_vertex();
    b.connect(End::v(p, 1), End::v(q, 1));
    b.connect(End::v(p, 2), End::v(q, 0));
    bubbles.emplace_back(p, q);
  }
  for (int i = 0; i + 1 < n; ++i)
    b.connect(End::v(bubbles[i].second, 2), End::v(bubbles[i + 1].first, 0));
  int l1 = b.add_free_leg(end_mark_1), l2 = b.add_free_leg(end_mark_2);
  b.connect(End::leg(l1), End::v(bubbles.front().first, 0));
  b.connect(End::leg(l2), End::v(bubbles.back().second, 2));
  return b.build();
}

Diagram closed_bubble_chain(int n, int extra_legs, const std::string& leg_mark) {
  if (n < 1) throw Malformed("closed_bubble_chain needs n >= 1");
  DiagramBuilder b;
  std::vector<std::pair<int, int>> bubbles;
  for (int i = 0; i < n; ++i) {
    int p = b.add_vertex(), q = b.add_vertex();
    b.connect(End::v(p, 1), End::v(q, 1));
    b.connect(End::v(p, 2), End::v(q, 0));
    bubbles.emplace_back(p, q);
  }
  for (int i = 0; i + 1 < n; ++i)
    b.connect(End::v(bubbles[i].second, 2), End::v(bubbles[i + 1].first, 0));
  // Closing edge from the last bubble back to the first, subdivided by the
  // requested number of legs.
  End prev = End::v(bubbles.back().second, 2);
  for (int i = 0; i < extra_legs; ++i) {
    int w = b.add_vertex();
    int leg = b.add_free_leg(leg_mark);
    b.connect(prev, End::v(w, 0));
    b.connect(End::v(w, 2), End::leg(leg));
    prev = End::v(w, 1);
  }
  b.connect(prev, End::v(bubbles.front().first, 0));
  return b.build();
}

Diagram loop_family(int n, int d, const std::string& mark) {
  if (n < 1 || d < 0) throw Malformed("loop_family needs n >= 1, d >= 0");
  DiagramBuilder b;
  // Ring elements: (n-1) bubbles then 2d leg-vertices, joined in a cycle.
  std::vector<std::pair<End, End>> elements;  // (in, out) per element
  for (int i = 0; i < n - 1; ++i) {
    int p = b.add_vertex(), q = b.add_vertex();
    b.connect(End::v(p, 1), End::v(q, 1));
    b.connect(End::v(p, 2), End::v(q, 0));
    elements.emplace_back(End::v(p, 0), End::v(q, 2));
  }
  for (int i = 0; i < 2 * d; ++i) {
    int w = b.add_vertex();
    int leg = b.add_free_leg(mark);
    b.connect(End::v(w, 2), End::leg(leg));
    elements.emplace_back(End::v(w, 0), End::v(w, 1));
  }
  if (elements.empty()) throw Malformed("loop_family: empty ring (n=1, d=0)");
  for (size_t i = 0; i < elements.size(); ++i)
    b.connect(elements[i].second, elements[(i + 1) % elements.size()].first);
  return b.build();
}

Diagram labeled_theta(const std::optional<LabelValue>& e0, const std::optional<LabelValue>& e1,
                      const std::optional<LabelValue>& e2) {
  DiagramBuilder b;
  int u = b.add_vertex(), v = b.add_vertex();
  for (int s = 0; s < 3; ++s) b.connect(End::v(u, s), End::v(v, 2 - s));
  if (e0) b.label(End::v(u, 0), *e0);
  if (e1) b.label(End::v(u, 1), *e1);
  if (e2) b.label(End::v(u, 2), *e2);
  return b.build();
}

Diagram theta_with_legs(int k0, int k1, int k2, const std::string& mark) {
  DiagramBuilder b;
  int u = b.add_vertex(), v = b.add_vertex();
  int ks[3] = {k0, k1, k2};
  for (int s = 0; s < 3; ++s) {
    End prev = End::v(u, s);
    for (int i = 0; i < ks[s]; ++i) {
      int w = b.add_vertex();
      int leg = b.add_free_leg(mark);
      b.connect(prev, End::v(w, 0));
      b.connect(End::v(w, 2), End::leg(leg));
      prev = End::v(w, 1);
    }
    b.connect(prev, End::v(v, 2 - s));
  }
  return b.build();
}

}  // namespace shapes
}  // namespace loopexp
