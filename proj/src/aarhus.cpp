#include "loopexp/aarhus.hpp"

#include <numeric>

#include "loopexp/shapes.hpp"

namespace loopexp {

GaussianPart GaussianPart::from_inverse(const InverseOverDelta& inv, int order) {
  GaussianPart g;
  int n = static_cast<int>(inv.q.size());
  HSeries dinv = inv.delta.poly().exp_substitute(order).invert();
  for (int i = 0; i < n; ++i) g.labels.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      HSeries s = inv.q[i][j].exp_substitute(order) * dinv;
      if (!s.is_zero()) g.strut[{i, j}] = s;
    }
  return g;
}

GaussianPart GaussianPart::from_inverse_symbolic(const InverseOverDelta& inv) {
  GaussianPart g;
  int n = static_cast<int>(inv.q.size());
  for (int i = 0; i < n; ++i) g.labels.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (inv.q[i][j].is_zero()) continue;
      g.strut[{i, j}] = SymbolicLabel{inv.q[i][j], 1};
    }
  return g;
}

bool satisfies_ppart(const Diagram& d, const std::string& h_mark) {
  int ncomp = 0;
  std::vector<int> comp = d.graph_components(&ncomp);
  std::vector<bool> ok(ncomp, false);
  for (int v = 0; v < d.n_tri; ++v) {
    bool touches_h = false;
    for (int s = 0; s < 3; ++s) {
      int m = d.mate[3 * v + s];
      if (d.is_leg_dart(m)) {
        const LegMark& lm = d.legs[d.leg_of_dart(m)];
        if (!lm.attached() && lm.mark == h_mark) touches_h = true;
      }
    }
    if (!touches_h) ok[comp[3 * v]] = true;
  }
  for (int c = 0; c < ncomp; ++c)
    if (!ok[c]) return false;
  return true;
}

namespace {

// Glues the listed leg pairs of two diagrams, splicing strut chains and
// transporting one-sided labels (flipped when their anchor end is consumed).
// Throws PPartViolation when a chain closes into a vertexless circle.
Diagram glue_diagrams(const Diagram& d1, const Diagram& d2,
                      const std::vector<std::pair<int, int>>& leg_pairs) {
  if (d1.skeleton.kind != SkeletonKind::Marks || d2.skeleton.kind != SkeletonKind::Marks)
    throw SkeletonMismatch("glue: marks skeletons only");
  int T = d1.n_tri + d2.n_tri;
  // Global darts: d1 vertex darts, d2 vertex darts, then d1 legs, d2 legs.
  auto g1 = [&](int h) {
    return d1.is_leg_dart(h) ? 3 * T + d1.leg_of_dart(h) : h;
  };
  auto g2 = [&](int h) {
    return d2.is_leg_dart(h) ? 3 * T + static_cast<int>(d1.legs.size()) + d2.leg_of_dart(h)
                             : 3 * d1.n_tri + h;
  };
  int total = 3 * T + static_cast<int>(d1.legs.size() + d2.legs.size());
  std::vector<int> mate(total, -1);
  std::vector<int> has_label_side(total, -1);  // anchor dart -> label index
  std::vector<LabelValue> label_values;
  auto import_diagram = [&](const Diagram& d, auto&& g) {
    for (int h = 0; h < d.dart_count(); ++h) mate[g(h)] = g(d.mate[h]);
    for (const auto& [k, lab] : d.labels) {
      has_label_side[g(lab.side)] = static_cast<int>(label_values.size());
      label_values.push_back(lab.value);
    }
  };
  import_diagram(d1, g1);
  import_diagram(d2, g2);

  std::vector<bool> is_connector(total, false);
  std::vector<int> partner(total, -1);
  for (auto [l1, l2] : leg_pairs) {
    int a = g1(d1.dart_of_leg(l1)), b = g2(d2.dart_of_leg(l2));
    is_connector[a] = is_connector[b] = true;
    partner[a] = b;
    partner[b] = a;
  }

  // Survivors: non-connector darts. Vertex darts keep ids; legs renumber.
  std::vector<int> new_leg_index(total, -1);
  std::vector<LegMark> new_legs;
  for (size_t j = 0; j < d1.legs.size(); ++j) {
    int gd = 3 * T + static_cast<int>(j);
    if (is_connector[gd]) continue;
    new_leg_index[gd] = static_cast<int>(new_legs.size());
    new_legs.push_back(d1.legs[j]);
  }
  for (size_t j = 0; j < d2.legs.size(); ++j) {
    int gd = 3 * T + static_cast<int>(d1.legs.size() + j);
    if (is_connector[gd]) continue;
    new_leg_index[gd] = static_cast<int>(new_legs.size());
    new_legs.push_back(d2.legs[j]);
  }
  Diagram out;
  out.n_tri = T;
  out.legs = new_legs;
  out.mate.assign(out.dart_count(), -1);
  auto final_dart = [&](int gd) {
    return gd < 3 * T ? gd : 3 * T + new_leg_index[gd];
  };

  std::vector<bool> consumed(total, false);
  struct PendingLabel {
    int anchor;
    LabelValue value;
  };
  std::vector<PendingLabel> pending;

  for (int d0 = 0; d0 < total; ++d0) {
    if (is_connector[d0] || consumed[d0] || out.mate[final_dart(d0)] != -1) continue;
    // Walk from d0 through connector splices.
    int cur = d0;
    std::optional<LabelValue> acc;
    auto absorb = [&](int entry, int exit) {
      // label on edge (entry, exit): anchored at entry keeps orientation,
      // anchored at exit flips.
      if (has_label_side[entry] >= 0) {
        const LabelValue& v = label_values[has_label_side[entry]];
        acc = acc ? label_value_mul(*acc, v) : v;
      }
      if (has_label_side[exit] >= 0) {
        LabelValue v = label_value_flip(label_values[has_label_side[exit]]);
        acc = acc ? label_value_mul(*acc, v) : v;
      }
    };
    for (;;) {
      int m = mate[cur];
      absorb(cur, m);
      if (!is_connector[m]) {
        out.mate[final_dart(d0)] = final_dart(m);
        out.mate[final_dart(m)] = final_dart(d0);
        consumed[d0] = consumed[m] = true;
        if (acc) pending.push_back({final_dart(d0), *acc});
        break;
      }
      consumed[m] = true;
      consumed[partner[m]] = true;
      cur = partner[m];
    }
  }
  // Any unconsumed connector now lies on a closed chain of struts.
  for (int h = 0; h < total; ++h)
    if (is_connector[h] && !consumed[h])
      throw PPartViolation("gluing closed a vertexless circle");

  for (const auto& p : pending) out.add_label(p.anchor, p.value);
  out.validate();
  return out;
}

}  // namespace

LinearCombo pair_combos(const LinearCombo& c1, const LinearCombo& c2,
                        const std::vector<std::string>& glue_marks) {
  LinearCombo out;
  for (const auto& [code1, t1] : c1.terms()) {
    std::map<std::string, std::vector<int>> legs1;
    for (size_t j = 0; j < t1.diagram.legs.size(); ++j) {
      const LegMark& m = t1.diagram.legs[j];
      if (!m.attached() &&
          std::find(glue_marks.begin(), glue_marks.end(), m.mark) != glue_marks.end())
        legs1[m.mark].push_back(static_cast<int>(j));
    }
    for (const auto& [code2, t2] : c2.terms()) {
      std::map<std::string, std::vector<int>> legs2;
      for (size_t j = 0; j < t2.diagram.legs.size(); ++j) {
        const LegMark& m = t2.diagram.legs[j];
        if (!m.attached() &&
            std::find(glue_marks.begin(), glue_marks.end(), m.mark) != glue_marks.end())
          legs2[m.mark].push_back(static_cast<int>(j));
      }
      bool match = legs1.size() == legs2.size();
      if (match)
        for (const auto& [mk, v] : legs1)
          if (!legs2.count(mk) || legs2[mk].size() != v.size()) {
            match = false;
            break;
          }
      if (!match) continue;  // zero contribution

      // Odometer over per-mark bijections.
      std::vector<std::string> keys;
      for (const auto& [mk, v] : legs1) keys.push_back(mk);
      std::vector<std::vector<int>> perms;
      for (const auto& mk : keys) {
        std::vector<int> p(legs1[mk].size());
        std::iota(p.begin(), p.end(), 0);
        perms.push_back(p);
      }
      std::function<void(size_t)> walk = [&](size_t i) {
        if (i == keys.size()) {
          std::vector<std::pair<int, int>> pairs;
          for (size_t k = 0; k < keys.size(); ++k)
            for (size_t a = 0; a < perms[k].size(); ++a)
              pairs.emplace_back(legs1[keys[k]][a], legs2[keys[k]][perms[k][a]]);
          out.add(glue_diagrams(t1.diagram, t2.diagram, pairs), t1.coeff * t2.coeff);
          return;
        }
        std::vector<int>& p = perms[i];
        std::sort(p.begin(), p.end());
        do {
          walk(i + 1);
        } while (std::next_permutation(p.begin(), p.end()));
      };
      walk(0);
    }
  }
  return out;
}

namespace {

// Enumerates strut multisets {m_ij} with sum_j m_ij + 2 m_ii = n_i and
// calls the sink with the exponential coefficient
// prod_{i<j} (-1)^{m_ij}/m_ij! * prod_i (-1/2)^{m_ii}/m_ii!.
void enumerate_strut_multisets(const std::vector<int>& counts,
                               const std::vector<std::pair<int, int>>& pairs, size_t idx,
                               std::vector<int>& mult, std::vector<int>& residual,
                               const std::function<void(const std::vector<int>&, const Rational&)>& sink) {
  if (idx == pairs.size()) {
    for (int r : residual)
      if (r != 0) return;
    Rational coeff(1);
    for (size_t k = 0; k < pairs.size(); ++k) {
      int m = mult[k];
      if (m == 0) continue;
      auto [i, j] = pairs[k];
      Rational base = (i == j) ? Rational(-1, 2) : Rational(-1);
      coeff *= rational_pow(base, m) * factorial(m).inverse();
    }
    sink(mult, coeff);
    return;
  }
  auto [i, j] = pairs[idx];
  int cap = (i == j) ? residual[i] / 2 : std::min(residual[i], residual[j]);
  for (int m = 0; m <= cap; ++m) {
    mult[idx] = m;
    residual[i] -= (i == j) ? 2 * m : m;
    if (i != j) residual[j] -= m;
    enumerate_strut_multisets(counts, pairs, idx + 1, mult, residual, sink);
    residual[i] += (i == j) ? 2 * m : m;
    if (i != j) residual[j] += m;
  }
  mult[idx] = 0;
}

}  // namespace

LinearCombo aarhus_integral(const LinearCombo& p, const GaussianPart& gaussian, int N,
                            bool expand, const DeltaContext& ctx) {
  int n = static_cast<int>(gaussian.labels.size());
  std::map<std::string, int> label_index;
  for (int i = 0; i < n; ++i) label_index[gaussian.labels[i]] = i;

  LinearCombo glued;
  for (const auto& [code, term] : p.terms()) {
    if (!satisfies_ppart(term.diagram))
      throw PPartViolation("aarhus_integral: P term violates the P-part condition");
    std::vector<int> counts(n, 0);
    for (const auto& m : term.diagram.legs) {
      auto it = label_index.find(m.mark);
      if (it != label_index.end() && !m.attached()) counts[it->second]++;
    }
    std::vector<std::pair<int, int>> active;
    for (const auto& [pr, lab] : gaussian.strut)
      if (counts[pr.first] > 0 && counts[pr.second] > 0) active.push_back(pr);
    std::vector<int> mult(active.size(), 0), residual = counts;
    LinearCombo p_single;
    p_single.add(term.diagram, term.coeff);

    enumerate_strut_multisets(
        counts, active, 0, mult, residual,
        [&](const std::vector<int>& m, const Rational& coeff) {
          // Gaussian monomial: disjoint union of labeled struts.
          Diagram struts;
          bool first = true;
          for (size_t k = 0; k < active.size(); ++k) {
            auto [i, j] = active[k];
            for (int c = 0; c < m[k]; ++c) {
              Diagram s = shapes::labeled_strut(gaussian.labels[i], gaussian.labels[j],
                                                gaussian.strut.at({i, j}));
              struts = first ? s : disjoint_union(struts, s);
              first = false;
            }
          }
          if (first) {
            // No struts: contributes only when the P term has no marked legs.
            for (int c : counts)
              if (c) return;
            glued.add(term.diagram, term.coeff * coeff);
            return;
          }
          LinearCombo c1;
          c1.add(struts, coeff);
          glued += pair_combos(c1, p_single, gaussian.labels);
        });
  }
  if (!expand) return glued;
  return expand_labels(glued, N, ctx);
}

NuData NuData::standard(int cutoff) {
  NuData nu;
  nu.cutoff = cutoff;
  // (1/2) log(sinh(h/2)/(h/2)) = sum b_{2n} h^{2n}
  HSeries s(cutoff);
  Rational fact(1);
  for (int k = 0; 2 * k <= cutoff; ++k) {
    // (h/2)^{2k} / (2k+1)!
    if (k > 0) fact *= Rational((2 * k) * (2 * k + 1));
    s.set(2 * k, rational_pow(Rational(1, 2), 2 * k) / fact);
  }
  HSeries half_log = s.log() * Rational(1, 2);
  for (int k = 1; 2 * k <= cutoff; ++k) nu.b[2 * k] = half_log.coeff(2 * k);
  return nu;
}

LinearCombo combo_mul(const LinearCombo& a, const LinearCombo& b, int N) {
  LinearCombo out;
  for (const auto& [ca, ta] : a.terms())
    for (const auto& [cb, tb] : b.terms()) {
      if (ta.diagram.degree() + tb.diagram.degree() > N) continue;
      out.add(disjoint_union(ta.diagram, tb.diagram), ta.coeff * tb.coeff);
    }
  return out;
}

namespace {

LinearCombo empty_unit(const Rational& c) {
  LinearCombo out;
  out.add(Diagram{}, c);
  return out;
}

Rational constant_term(const LinearCombo& c) { return c.coeff_of(Diagram{}); }

}  // namespace

LinearCombo combo_exp(const LinearCombo& connected, int N) {
  LinearCombo out = empty_unit(Rational(1));
  LinearCombo pw = empty_unit(Rational(1));
  Rational fact(1);
  for (int k = 1; k <= N; ++k) {
    pw = combo_mul(pw, connected, N);
    if (pw.is_zero()) break;
    fact *= Rational(k);
    out += pw * fact.inverse();
  }
  return out;
}

LinearCombo combo_log(const LinearCombo& c, int N) {
  if (!(constant_term(c) == Rational(1)))
    throw NonUnitConstant("combo_log: constant term must be 1");
  LinearCombo x = c;
  x.add(Diagram{}, Rational(-1));
  LinearCombo out;
  LinearCombo pw = empty_unit(Rational(1));
  for (int k = 1; k <= N; ++k) {
    pw = combo_mul(pw, x, N);
    if (pw.is_zero()) break;
    out += pw * Rational(k % 2 ? 1 : -1, k);
  }
  return out;
}

LinearCombo combo_inverse(const LinearCombo& c, int N) {
  Rational c0 = constant_term(c);
  if (c0.is_zero()) throw NonUnitConstant("combo_inverse: constant term is zero");
  LinearCombo x = c * c0.inverse();
  x.add(Diagram{}, Rational(-1));
  LinearCombo out = empty_unit(Rational(1));
  LinearCombo pw = empty_unit(Rational(1));
  for (int k = 1; k <= N; ++k) {
    pw = combo_mul(pw, x, N);
    if (pw.is_zero()) break;
    out += pw * Rational(k % 2 ? -1 : 1);
  }
  return out * c0.inverse();
}

LinearCombo loop_project(const LinearCombo& c, int n) {
  return c.filter(
      [&](const Diagram& d) { return d.connected_graph() && d.loop_number() == n; });
}

LinearCombo normalize_unknots(const LinearCombo& c, int sigma_plus, int sigma_minus,
                              const NuData& nu, int N) {
  if (sigma_plus == 0 && sigma_minus == 0) return c;
  if (nu.cutoff < N) throw InsufficientNu("normalize_unknots: nu data below the cutoff");

  // <chi^-1 nu, chi^-1 nu> over a private mark.
  LinearCombo wheels_log;
  for (const auto& [k, bk] : nu.b) {
    if (k > N) continue;
    wheels_log.add(shapes::wheel(k, "nu"), bk);
  }
  LinearCombo nu_combo = combo_exp(wheels_log, N);
  LinearCombo nu_pairing = pair_combos(nu_combo, nu_combo, {"nu"});
  // Degrees above N cannot influence the truncation.
  nu_pairing = nu_pairing.filter([&](const Diagram& d) { return d.degree() <= N; });

  // 1 / (U+^{s+} U-^{s-}) = <nu,nu>^{s+ + s-} exp((s+ - s-) theta / 16).
  LinearCombo theta_term;
  theta_term.add(shapes::theta(), Rational(sigma_plus - sigma_minus, 16));
  LinearCombo factor = combo_exp(theta_term, N);
  for (int k = 0; k < sigma_plus + sigma_minus; ++k)
    factor = combo_mul(factor, nu_pairing, N);
  return combo_mul(c, factor, N);
}

ClasperDifference clasper_difference(const EqLinkingMatrix& m, const Diagram& clasper_spec,
                                     int N) {
  int g = m.genus;
  InverseOverDelta inv = invert_over_delta(m);
  GaussianPart gaussian = GaussianPart::from_inverse(inv, N);

  // The clasper must carry exactly the two legs x_{2g+1}, x_{3g+1}.
  std::string la = "x" + std::to_string(2 * g + 1), lb = "x" + std::to_string(3 * g + 1);
  int count_a = 0, count_b = 0;
  for (const auto& lm : clasper_spec.legs) {
    if (lm.mark == la) ++count_a;
    if (lm.mark == lb) ++count_b;
  }
  if (count_a != 1 || count_b != 1)
    throw Malformed("clasper_difference: clasper needs one leg each of " + la + ", " + lb);
  if (!clasper_spec.connected_graph())
    throw Malformed("clasper_difference: clasper must be connected");

  LinearCombo p;
  p.add(clasper_spec, Rational(1));
  ClasperDifference out;
  out.delta = aarhus_integral(p, gaussian, N);
  out.r = appendixB_certificate(m).r;

  int n_loops = clasper_spec.loop_number();
  for (const auto& [code, term] : out.delta.terms()) {
    int deg = term.diagram.degree();
    if (out.leading_degree < 0 || deg < out.leading_degree) {
      out.leading_degree = deg;
      out.leading_coeff = term.coeff;
    }
  }
  // Leading diagram check: the closed clasper carries +-r and (n+1) loops.
  out.leading_matches = false;
  if (out.leading_degree >= 0) {
    int count_at_leading = 0;
    for (const auto& [code, term] : out.delta.terms())
      if (term.diagram.degree() == out.leading_degree) {
        ++count_at_leading;
        out.leading_matches = term.diagram.loop_number() == n_loops + 1 &&
                              (term.coeff == out.r || term.coeff == -out.r);
        out.leading_coeff = term.coeff;
      }
    if (count_at_leading != 1) out.leading_matches = false;
  }
  return out;
}

}  // namespace loopexp
