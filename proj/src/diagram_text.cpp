#include "loopexp/diagram_text.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "json.hpp"
#include "loopexp/expr.hpp"

namespace loopexp {

namespace {

struct Tok {
  std::string text;
  size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Tok next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) return {"", i_};
    size_t start = i_;
    char c = s_[i_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      return {s_.substr(start, i_ - start), start};
    }
    if (c == '[') {  // bracketed label expression, up to the matching ]
      size_t depth = 0;
      size_t j = i_;
      for (; j < s_.size(); ++j) {
        if (s_[j] == '[') ++depth;
        if (s_[j] == ']' && --depth == 0) break;
      }
      if (j == s_.size()) throw ParseError("unterminated label bracket", start);
      std::string out = s_.substr(i_, j - i_ + 1);
      i_ = j + 1;
      return {out, start};
    }
    ++i_;
    return {std::string(1, c), start};
  }

  Tok peek() {
    size_t save = i_;
    Tok t = next();
    i_ = save;
    return t;
  }

 private:
  const std::string& s_;
  size_t i_ = 0;
};

SymbolicLabel parse_label_expr(const std::string& inner, size_t at) {
  // inner: expression, optionally "/D" suffix for the Delta denominator.
  std::string expr = inner;
  int delta_pow = 0;
  auto slash = expr.rfind("/D");
  if (slash != std::string::npos && slash + 2 == expr.size()) {
    delta_pow = 1;
    expr = expr.substr(0, slash);
  }
  try {
    return SymbolicLabel{parse_laurent(expr), delta_pow};
  } catch (const ParseError& e) {
    throw ParseError("bad label expression '" + inner + "': " + e.what(), at);
  }
}

}  // namespace

Diagram parse_diagram(const std::string& text) {
  Lexer lex(text);
  auto expect = [&](const std::string& want) {
    Tok t = lex.next();
    if (t.text != want)
      throw ParseError("expected '" + want + "', got '" + t.text + "'", t.pos);
  };
  expect("diagram");
  expect("{");

  std::map<std::string, std::pair<int, int>> dart_names;  // name -> (vertex, slot)
  std::map<std::string, int> leg_names;
  std::vector<LegMark> legs;
  int n_tri = 0;
  struct EdgeSpec {
    std::string a, b;
    std::string label;  // raw [..] text or empty
    size_t pos;
  };
  std::vector<EdgeSpec> edges;
  std::vector<std::string> line_labels;

  for (;;) {
    Tok section = lex.next();
    if (section.text == "}") break;
    if (section.text.empty()) throw ParseError("unexpected end of diagram", section.pos);
    expect(":");
    if (section.text == "tri") {
      for (;;) {
        Tok t = lex.peek();
        if (t.text == ";" ) { lex.next(); break; }
        Tok name = lex.next();
        expect("(");
        for (int s = 0; s < 3; ++s) {
          Tok dart = lex.next();
          if (dart_names.count(dart.text))
            throw ParseError("duplicate dart name '" + dart.text + "'", dart.pos);
          dart_names[dart.text] = {n_tri, s};
          if (s < 2) expect(",");
        }
        expect(")");
        ++n_tri;
        (void)name;
      }
    } else if (section.text == "uni") {
      for (;;) {
        Tok t = lex.peek();
        if (t.text == ";") { lex.next(); break; }
        Tok name = lex.next();
        expect("=");
        Tok mark = lex.next();
        LegMark m = LegMark::free_mark(mark.text);
        if (lex.peek().text == "@") {
          lex.next();
          Tok compname = lex.next();
          expect(":");
          Tok pos = lex.next();
          int idx = -1;
          for (size_t i = 0; i < line_labels.size(); ++i)
            if (line_labels[i] == compname.text) idx = static_cast<int>(i);
          if (idx < 0) {
            idx = static_cast<int>(line_labels.size());
            line_labels.push_back(compname.text);
          }
          m = LegMark::attach(compname.text, idx, std::stoi(pos.text));
        }
        if (leg_names.count(name.text))
          throw ParseError("duplicate leg name '" + name.text + "'", name.pos);
        leg_names[name.text] = static_cast<int>(legs.size());
        legs.push_back(m);
      }
    } else if (section.text == "edges") {
      for (;;) {
        Tok t = lex.peek();
        if (t.text == ";") { lex.next(); break; }
        Tok a = lex.next();
        expect("-");
        Tok b = lex.next();
        EdgeSpec e{a.text, b.text, "", a.pos};
        if (lex.peek().text.size() >= 2 && lex.peek().text.front() == '[') {
          e.label = lex.next().text;
        }
        edges.push_back(e);
      }
    } else {
      throw ParseError("unknown section '" + section.text + "'", section.pos);
    }
  }

  // Sorted line labels shift component indices; rebuild attachments.
  Skeleton skel = line_labels.empty() ? Skeleton::marks() : Skeleton::lines(line_labels);
  DiagramBuilder builder(skel);
  for (int v = 0; v < n_tri; ++v) builder.add_vertex();
  std::vector<int> leg_ids;
  for (auto m : legs) {
    if (m.attached()) m.comp = skel.component_index(m.mark);
    leg_ids.push_back(builder.add_leg(m));
  }
  auto resolve = [&](const std::string& name, size_t pos) {
    auto it = dart_names.find(name);
    if (it != dart_names.end()) return End::v(it->second.first, it->second.second);
    auto lit = leg_names.find(name);
    if (lit != leg_names.end()) return End::leg(leg_ids[lit->second]);
    throw ParseError("unknown endpoint '" + name + "'", pos);
  };
  for (const auto& e : edges) {
    End ea = resolve(e.a, e.pos), eb = resolve(e.b, e.pos);
    builder.connect(ea, eb);
    if (!e.label.empty()) {
      std::string inner = e.label.substr(1, e.label.size() - 2);
      builder.label(ea, parse_label_expr(inner, e.pos));
    }
  }
  try {
    return builder.build();
  } catch (const Malformed& e) {
    throw ParseError(std::string("malformed diagram: ") + e.what(), 0);
  }
}

std::string diagram_to_text(const Diagram& d) {
  std::ostringstream os;
  os << "diagram { tri:";
  for (int v = 0; v < d.n_tri; ++v)
    os << " v" << v << "(d" << 3 * v << ",d" << 3 * v + 1 << ",d" << 3 * v + 2 << ")";
  os << "; uni:";
  for (size_t j = 0; j < d.legs.size(); ++j) {
    const LegMark& m = d.legs[j];
    os << " l" << j << "=" << m.mark;
    if (m.attached()) os << "@" << d.skeleton.components[m.comp] << ":" << m.pos;
  }
  os << "; edges:";
  auto dart_name = [&](int h) {
    return d.is_leg_dart(h) ? "l" + std::to_string(d.leg_of_dart(h))
                            : "d" + std::to_string(h);
  };
  for (int h = 0; h < d.dart_count(); ++h) {
    int m = d.mate[h];
    if (h > m) continue;
    auto lab = d.label_of_edge(h);
    int first = h, second = m;
    if (lab && lab->side == m) std::swap(first, second);
    os << " " << dart_name(first) << "-" << dart_name(second);
    if (lab) {
      if (!std::holds_alternative<SymbolicLabel>(lab->value))
        throw UnsupportedLabel("text format carries symbolic labels only");
      const auto& s = std::get<SymbolicLabel>(lab->value);
      os << "[" << s.num.str();
      if (s.delta_pow == 1) os << "/D";
      else if (s.delta_pow != 0)
        throw UnsupportedLabel("text format supports Delta powers 0 and 1");
      os << "]";
    }
  }
  os << "; }";
  return os.str();
}

std::string diagram_to_json(const Diagram& d) {
  nlohmann::json j;
  j["n_tri"] = d.n_tri;
  auto legs = nlohmann::json::array();
  for (const auto& m : d.legs) {
    nlohmann::json lj;
    lj["mark"] = m.mark;
    if (m.attached()) {
      lj["comp"] = m.comp;
      lj["pos"] = m.pos;
    }
    legs.push_back(lj);
  }
  j["legs"] = legs;
  j["mate"] = d.mate;
  auto labels = nlohmann::json::array();
  for (const auto& [k, lab] : d.labels) {
    nlohmann::json lj;
    lj["side"] = lab.side;
    if (std::holds_alternative<SymbolicLabel>(lab.value)) {
      const auto& s = std::get<SymbolicLabel>(lab.value);
      lj["num"] = nlohmann::json::parse(s.num.json());
      lj["delta_pow"] = s.delta_pow;
    } else {
      lj["series"] = nlohmann::json::parse(std::get<HSeries>(lab.value).json());
    }
    labels.push_back(lj);
  }
  j["labels"] = labels;
  if (d.skeleton.kind != SkeletonKind::Marks) {
    j["skeleton"] = d.skeleton.kind == SkeletonKind::Lines ? "lines" : "circles";
    j["components"] = d.skeleton.components;
  }
  return j.dump();
}

Diagram diagram_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  Diagram d;
  d.n_tri = j.at("n_tri").get<int>();
  for (const auto& lj : j.at("legs")) {
    LegMark m = LegMark::free_mark(lj.at("mark").get<std::string>());
    if (lj.contains("comp")) {
      m.comp = lj.at("comp").get<int>();
      m.pos = lj.at("pos").get<int>();
    }
    d.legs.push_back(m);
  }
  d.mate = j.at("mate").get<std::vector<int>>();
  if (j.contains("skeleton")) {
    d.skeleton.kind =
        j.at("skeleton").get<std::string>() == "lines" ? SkeletonKind::Lines : SkeletonKind::Circles;
    d.skeleton.components = j.at("components").get<std::vector<std::string>>();
  }
  for (const auto& lj : j.at("labels")) {
    int side = lj.at("side").get<int>();
    if (lj.contains("num")) {
      d.add_label(side, SymbolicLabel{LaurentPoly::from_json(lj.at("num").dump()),
                                      lj.at("delta_pow").get<int>()});
    } else {
      d.add_label(side, HSeries::from_json(lj.at("series").dump()));
    }
  }
  d.validate();
  return d;
}

std::string combo_to_json(const LinearCombo& c) {
  auto arr = nlohmann::json::array();
  for (const auto& [code, term] : c.terms()) {
    nlohmann::json tj;
    tj["coeff"] = term.coeff.str();
    tj["diagram"] = nlohmann::json::parse(diagram_to_json(term.diagram));
    tj["degree"] = term.diagram.degree();
    tj["loops"] = term.diagram.loop_number();
    arr.push_back(tj);
  }
  return arr.dump();
}

}  // namespace loopexp
