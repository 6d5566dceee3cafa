#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "loopexp/aarhus.hpp"
#include "loopexp/diagram_text.hpp"
#include "loopexp/expr.hpp"
#include "loopexp/linking.hpp"
#include "loopexp/reproduce.hpp"
#include "loopexp/shapes.hpp"
#include "loopexp/sl2.hpp"
#include "loopexp/tables.hpp"

namespace py = pybind11;
using namespace loopexp;

namespace {

Diagram diagram_from_any(const std::string& text) {
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') return diagram_from_json(text);
  return parse_diagram(text);
}

TangleLinkingData tangle_from_lists(const IntMatrix& u, const IntMatrix& v, const IntMatrix& w) {
  TangleLinkingData d{u, v, w};
  d.validate();
  return d;
}

std::string invert_json(const IntMatrix& u, const IntMatrix& v, const IntMatrix& w) {
  EqLinkingMatrix m = build_surgery_matrix(tangle_from_lists(u, v, w));
  InverseOverDelta inv = invert_over_delta(m);
  BCertificate cert = appendixB_certificate(m);
  nlohmann::json j;
  j["delta"] = inv.delta.poly().str();
  j["delta_json"] = nlohmann::json::parse(inv.delta.poly().json());
  j["q_support_radius"] = inv.q_support_radius;
  j["q_support_within_genus"] = inv.q_support_within_genus;
  j["r"] = cert.r.str();
  j["r_half_integer"] = cert.r_half_integer;
  j["lgg_identity"] = cert.lgg_identity;
  j["value_at_1"] = cert.value_at_1.str();
  return j.dump();
}

std::string clasper_json(const IntMatrix& u, const IntMatrix& v, const IntMatrix& w, int loops,
                         int truncate) {
  EqLinkingMatrix m = build_surgery_matrix(tangle_from_lists(u, v, w));
  int g = m.genus;
  Diagram clasper = shapes::bubble_chain(loops, "x" + std::to_string(2 * g + 1),
                                         "x" + std::to_string(3 * g + 1));
  ClasperDifference cd = clasper_difference(m, clasper, truncate);
  LinearCombo lead =
      cd.delta.filter([&](const Diagram& d) { return d.degree() == cd.leading_degree; });
  nlohmann::json j;
  j["r"] = cd.r.str();
  j["leading_degree"] = cd.leading_degree;
  j["leading_coeff"] = cd.leading_coeff.str();
  j["leading_matches"] = cd.leading_matches;
  j["leading_sl2_nonzero"] = nonvanishing_certificate(lead);
  j["delta_terms"] = cd.delta.size();
  return j.dump();
}

std::string two_loop_json(long a, const std::string& b1, const std::string& b2) {
  TwoLoopGenus1 t = build_thetas(a, 5);
  TwoLoopSolution sol = solve_two_loop(a, Rational::parse(b1), Rational::parse(b2));
  nlohmann::json j;
  j["theta1_deg3"] = t.t1_deg3.str();
  j["theta1_deg5"] = t.t1_deg5.str();
  j["theta2_deg3"] = t.t2_deg3.str();
  j["theta2_deg5"] = t.t2_deg5.str();
  j["independence_det"] = t.independence_det.str();
  j["p"] = sol.p.str();
  j["q"] = sol.q.str();
  return j.dump();
}

std::string reproduce_json(const std::string& section, uint64_t seed) {
  RunReport rep;
  if (section == "two-loop") rep = reproduce::two_loop(5);
  else if (section == "theta-count") rep = reproduce::theta_count();
  else if (section == "appendixB") rep = reproduce::appendix_b(seed ? seed : 7);
  else if (section == "appendixA") rep = reproduce::appendix_a(seed ? seed : 7);
  else if (section == "crude-bound") rep = reproduce::crude_bound_block();
  else if (section == "xset") rep = reproduce::xset_block();
  else throw Malformed("unknown reproduce section: " + section);
  return rep.json();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact Jacobi-diagram algebra: quotient spaces, equivariant linking "
            "matrices, the rational Aarhus pairing, sl2 certificates";

  py::register_exception<Malformed>(m, "Malformed");
  py::register_exception<ParseError>(m, "DiagramParseError");
  py::register_exception<Singular>(m, "Singular");
  py::register_exception<TooLarge>(m, "TooLarge");
  py::register_exception<NotInSpace>(m, "NotInSpace");

  py::class_<Diagram>(m, "Diagram")
      .def_static("parse", &diagram_from_any, py::arg("text"),
                  "Parse the text grammar or the JSON mirror.")
      .def_property_readonly("degree", &Diagram::degree)
      .def_property_readonly("loop_number", &Diagram::loop_number)
      .def_property_readonly("connected", &Diagram::connected_graph)
      .def("canonical_code", [](const Diagram& d) { return canonicalize(d).code; })
      .def("canonical_sign", [](const Diagram& d) { return canonicalize(d).sign; })
      .def("to_text", &diagram_to_text)
      .def("to_json", &diagram_to_json)
      .def("__repr__", [](const Diagram& d) {
        return "<Diagram degree=" + std::to_string(d.degree()) +
               " loops=" + std::to_string(d.loop_number()) + ">";
      });

  m.def("laurent_str", [](const std::string& expr) { return parse_laurent(expr).str(); },
        py::arg("expr"), "Parse a Laurent expression and render it normalized.");
  m.def("exp_substitute",
        [](const std::string& expr, int order) {
          HSeries s = parse_laurent(expr).exp_substitute(order);
          std::vector<std::string> out;
          for (int i = 0; i <= order; ++i) out.push_back(s.coeff(i).str());
          return out;
        },
        py::arg("expr"), py::arg("order"),
        "Coefficients of f(e^h) up to the given order, as exact fractions.");
  m.def("is_in_Z", [](const std::string& expr) { return is_in_Z(parse_laurent(expr)); },
        py::arg("expr"));
  m.def("deg_Z",
        [](const std::string& expr) { return deg_Z(AlexanderPoly(parse_laurent(expr))); },
        py::arg("expr"));

  m.def("space_dimensions",
        [](const std::string& space, int degree) {
          Basis basis = Basis::build(SpaceId::parse(space, degree));
          std::vector<int> dims;
          for (int d = 0; d <= degree; ++d) dims.push_back(basis.dimension_at(d));
          return dims;
        },
        py::arg("space"), py::arg("degree"),
        "Quotient dimensions per degree, e.g. space_dimensions('Bn:2', 5).");
  m.def("reduce_coords",
        [](const std::string& diagram_text, const std::string& space, int degree) {
          Basis basis = Basis::build(SpaceId::parse(space, degree));
          LinearCombo c;
          c.add(diagram_from_any(diagram_text), Rational(1));
          std::vector<std::string> out;
          for (const auto& v : basis.coords(c)) out.push_back(v.str());
          return out;
        },
        py::arg("diagram"), py::arg("space"), py::arg("degree"));

  m.def("sl2_weight",
        [](const std::string& diagram_text) { return sl2_weight(diagram_from_any(diagram_text)).str(); },
        py::arg("diagram"));
  m.def("sl2_brute",
        [](const std::string& diagram_text) { return sl2_brute(diagram_from_any(diagram_text)).str(); },
        py::arg("diagram"));

  m.def("linking_invert", &invert_json, py::arg("U"), py::arg("V"), py::arg("W"),
        "Build the surgery matrix, invert over Delta, certify; returns JSON.");
  m.def("clasper_difference", &clasper_json, py::arg("U"), py::arg("V"), py::arg("W"),
        py::arg("loops") = 2, py::arg("truncate") = 5,
        "Clasper-difference pipeline on a chain clasper; returns JSON.");

  m.def("two_loop", &two_loop_json, py::arg("a"), py::arg("b1") = "0", py::arg("b2") = "0",
        "Genus-1 two-loop expansion coefficients and solution; returns JSON.");
  m.def("theta_mn_count", &theta_mn_count, py::arg("g"));
  m.def("crude_bound", [](int n, int g) { return crude_bound(n, g); }, py::arg("n"),
        py::arg("g"));
  m.def("xset_size", [] { return xset_3loop().size(); });

  m.def("reproduce", &reproduce_json, py::arg("section"), py::arg("seed") = 0,
        "Run a reproduction block; returns the JSON report.");
}
