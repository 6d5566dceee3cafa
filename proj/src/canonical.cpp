#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "loopexp/diagram.hpp"

namespace loopexp {

namespace {

std::string leg_desc(const LegMark& m) {
  if (m.attached()) return "a" + std::to_string(m.comp) + ":" + std::to_string(m.pos);
  return "f" + m.mark;
}

// One-sided labels are emitted as seen from the processing dart: a label
// anchored at the far end flips (h -> -h), which is an exact identity of
// the expansions. Codes therefore identify the two anchorings of one label.
std::string label_desc(const Diagram& d, int dart) {
  auto lab = d.label_of_edge(d.edge_key(dart));
  if (!lab) return "_";
  LabelValue v = lab->side == dart ? lab->value : label_value_flip(lab->value);
  return "L[" + label_value_key(v) + "]";
}

// Minimal-code search over one graph component containing trivalent
// vertices. Branches on the AS flip at each vertex discovery, tracking the
// flip parity as the sign.
class ComponentEncoder {
 public:
  ComponentEncoder(const Diagram& d, const std::vector<int>& comp_of, int comp)
      : d_(d), comp_of_(comp_of), comp_(comp) {
    newid_.assign(d_.dart_count(), -1);
  }

  struct Result {
    std::string code;
    std::set<int> signs;
    std::vector<int> order;      // order[new id] = old dart (vertex darts only)
    std::vector<int> legs_order; // old leg indices in discovery order
    int sign = 1;                // sign of the recorded winner
  };

  Result run() {
    for (int r = 0; r < d_.dart_count(); ++r) {
      if (comp_of_[r] != comp_ || d_.is_leg_dart(r)) continue;
      for (int flip = 0; flip < 2; ++flip) {
        reset();
        assign_vertex(r, flip);
        rec(0);
      }
    }
    return best_;
  }

 private:
  static int succ(int h) { return (h / 3) * 3 + (h % 3 + 1) % 3; }

  void reset() {
    std::fill(newid_.begin(), newid_.end(), -1);
    order_.clear();
    legs_order_.clear();
    cur_.clear();
    sign_ = 1;
    dead_ = false;
    ahead_ = false;
  }

  void assign_vertex(int first_dart, int flip) {
    int a = first_dart, b = succ(first_dart), c = succ(succ(first_dart));
    if (flip) { std::swap(b, c); sign_ = -sign_; }
    for (int h : {a, b, c}) {
      newid_[h] = static_cast<int>(order_.size());
      order_.push_back(h);
    }
  }

  void unassign_vertex() {
    for (int i = 0; i < 3; ++i) {
      newid_[order_.back()] = -1;
      order_.pop_back();
    }
  }

  void emit(const std::string& s) {
    if (dead_) return;
    size_t at = cur_.size();
    cur_ += s;
    // Prune against the best code found so far; once this branch is known
    // to be strictly ahead (smaller), no further comparison applies.
    if (ahead_ || best_.code.empty()) return;
    size_t upto = std::min(cur_.size(), best_.code.size());
    for (size_t i = at; i < upto; ++i) {
      if (cur_[i] < best_.code[i]) { ahead_ = true; return; }
      if (cur_[i] > best_.code[i]) { dead_ = true; return; }
    }
    if (cur_.size() > best_.code.size())
      dead_ = true;  // longer with the best as proper prefix: cannot win or tie
  }

  void rec(size_t i) {
    if (dead_) return;
    if (i == order_.size()) {
      finalize();
      return;
    }
    size_t mark_cur = cur_.size();
    size_t mark_legs = legs_order_.size();
    int old_sign = sign_;
    bool old_ahead = ahead_;
    int h = order_[i];
    int m = d_.mate[h];
    if (d_.is_leg_dart(m)) {
      emit("G" + leg_desc(d_.legs[d_.leg_of_dart(m)]) + label_desc(d_, h) + ";");
      legs_order_.push_back(d_.leg_of_dart(m));
      rec(i + 1);
    } else if (newid_[m] != -1) {
      if (newid_[m] > static_cast<int>(i))
        emit("E" + std::to_string(newid_[m]) + label_desc(d_, h) + ";");
      else
        emit("-;");
      rec(i + 1);
    } else {
      for (int flip = 0; flip < 2; ++flip) {
        cur_.resize(mark_cur);
        legs_order_.resize(mark_legs);
        sign_ = old_sign;
        dead_ = false;
        ahead_ = old_ahead;
        assign_vertex(m, flip);
        emit("V" + label_desc(d_, h) + ";");
        rec(i + 1);
        unassign_vertex();
      }
      return;
    }
    cur_.resize(mark_cur);
    legs_order_.resize(mark_legs);
    sign_ = old_sign;
    dead_ = false;
    ahead_ = old_ahead;
  }

  void finalize() {
    if (best_.code.empty() || cur_ < best_.code) {
      best_.code = cur_;
      best_.signs = {sign_};
      best_.order = order_;
      best_.legs_order = legs_order_;
      best_.sign = sign_;
    } else if (cur_ == best_.code) {
      best_.signs.insert(sign_);
    }
  }

  const Diagram& d_;
  const std::vector<int>& comp_of_;
  int comp_;
  std::vector<int> newid_;
  std::vector<int> order_;
  std::vector<int> legs_order_;
  std::string cur_;
  int sign_ = 1;
  bool dead_ = false;
  bool ahead_ = false;
  Result best_;
};

struct ComponentCode {
  std::string code;
  bool ambiguous_sign = false;
  int sign = 1;
  std::vector<int> order;       // vertex darts by new id
  std::vector<int> legs_order;  // leg indices in canonical order
};

ComponentCode encode_component(const Diagram& d, const std::vector<int>& comp_of, int comp,
                               const std::vector<int>& darts) {
  ComponentCode out;
  bool has_tri = false;
  for (int h : darts)
    if (!d.is_leg_dart(h)) { has_tri = true; break; }

  if (!has_tri) {
    // A strut: exactly two legs joined by one edge. Two presentations.
    if (darts.size() != 2) throw Malformed("vertexless component that is not a strut");
    int h0 = darts[0], h1 = darts[1];
    auto present = [&](int a, int b) {
      return "S" + leg_desc(d.legs[d.leg_of_dart(a)]) + "," +
             leg_desc(d.legs[d.leg_of_dart(b)]) + label_desc(d, a) + ";";
    };
    std::string c0 = present(h0, h1), c1 = present(h1, h0);
    if (c1 < c0) std::swap(h0, h1), std::swap(c0, c1);
    out.code = c0;
    out.legs_order = {d.leg_of_dart(h0), d.leg_of_dart(h1)};
    return out;
  }

  ComponentEncoder enc(d, comp_of, comp);
  auto res = enc.run();
  out.code = res.code;
  out.sign = res.sign;
  out.ambiguous_sign = res.signs.size() > 1;
  out.order = res.order;
  out.legs_order = res.legs_order;
  return out;
}

CanonResult canonicalize_uncached(const Diagram& d) {
  d.validate();

  // Circles skeletons: minimize over rotations of each circle's positions.
  if (d.skeleton.kind == SkeletonKind::Circles) {
    std::vector<int> sizes(d.skeleton.components.size(), 0);
    for (const auto& m : d.legs)
      if (m.attached()) sizes[m.comp]++;
    long combos = 1;
    for (int s : sizes) combos *= std::max(1, s);
    if (combos > 4096) throw TooLarge("too many circle rotations");
    CanonResult best;
    std::vector<int> rot(sizes.size(), 0);
    for (long c = 0; c < combos; ++c) {
      long t = c;
      for (size_t i = 0; i < sizes.size(); ++i) {
        rot[i] = sizes[i] ? static_cast<int>(t % sizes[i]) : 0;
        t /= std::max(1, sizes[i]);
      }
      Diagram rd = d;
      rd.skeleton.kind = SkeletonKind::Lines;  // positions now absolute
      for (auto& m : rd.legs)
        if (m.attached()) m.pos = (m.pos + rot[m.comp]) % sizes[m.comp];
      CanonResult r = canonicalize_uncached(rd);
      r.rep.skeleton.kind = SkeletonKind::Circles;
      r.code = "O" + r.code;
      if (best.code.empty() || r.code < best.code) best = r;
      else if (r.code == best.code && r.sign != best.sign) best.sign = 0;
    }
    return best;
  }

  int ncomp = 0;
  std::vector<int> comp_of = d.graph_components(&ncomp);
  std::vector<std::vector<int>> darts(ncomp);
  for (int h = 0; h < d.dart_count(); ++h) darts[comp_of[h]].push_back(h);

  std::vector<ComponentCode> codes;
  codes.reserve(ncomp);
  for (int c = 0; c < ncomp; ++c) codes.push_back(encode_component(d, comp_of, c, darts[c]));

  std::vector<int> idx(ncomp);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return codes[a].code < codes[b].code; });

  CanonResult result;
  result.sign = 1;
  std::ostringstream code;
  code << d.skeleton.key() << "#";
  for (int c : idx) {
    if (codes[c].ambiguous_sign) result.sign = 0;
    result.sign *= codes[c].sign;
    code << codes[c].code << "#";
  }
  result.code = code.str();

  // Build the dart permutation realizing the canonical representative.
  std::vector<int> perm(d.dart_count(), -1);
  int vtx_off = 0, leg_off = 0;
  for (int c : idx) {
    for (size_t i = 0; i < codes[c].order.size(); ++i)
      perm[codes[c].order[i]] = 3 * vtx_off + static_cast<int>(i);
    for (size_t i = 0; i < codes[c].legs_order.size(); ++i)
      perm[d.dart_of_leg(codes[c].legs_order[i])] =
          3 * d.n_tri + leg_off + static_cast<int>(i);
    vtx_off += static_cast<int>(codes[c].order.size()) / 3;
    leg_off += static_cast<int>(codes[c].legs_order.size());
  }
  result.rep = permute_darts(d, perm);
  return result;
}

}  // namespace

const CanonResult& canonicalize(const Diagram& d) {
  static std::mutex mu;
  static std::unordered_map<std::string, CanonResult> memo;
  std::string key = d.raw_key();
  {
    std::scoped_lock lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  CanonResult r = canonicalize_uncached(d);
  std::scoped_lock lock(mu);
  return memo.emplace(std::move(key), std::move(r)).first->second;
}

}  // namespace loopexp
