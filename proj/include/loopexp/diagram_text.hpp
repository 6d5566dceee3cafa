#pragma once

#include <string>

#include "loopexp/diagram.hpp"

namespace loopexp {

/// Text grammar for diagrams:
///
///   diagram { tri: v1(a,b,c) v2(d,e,f); uni: l1=h l2=x1@line1:0;
///             edges: a-d b-e[t] c-f[(t-1)/D]; }
///
/// Trivalent vertices list their three dart names in cyclic order; legs are
/// `name=mark` (free) or `name=mark@component:position` (attached, which
/// makes the skeleton a line skeleton). Edge labels in brackets attach to
/// the first-named side; `/D` marks a Delta denominator. Labels accept the
/// Laurent expression grammar (t, u, v, integers, + - * ^).
Diagram parse_diagram(const std::string& text);
std::string diagram_to_text(const Diagram& d);

/// JSON mirror of the same structure.
std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& json_text);

std::string combo_to_json(const LinearCombo& c);

}  // namespace loopexp
