#pragma once

#include <string>

#include "loopexp/diagram.hpp"

namespace loopexp {
namespace shapes {

/// Two trivalent vertices joined by three parallel edges.
Diagram theta();

/// Two self-loops joined by a bar (canonicalizes to sign 0).
Diagram dumbbell();

/// Single edge between two free legs, optional one-sided label near the
/// first mark's end.
Diagram strut(const std::string& mark_a, const std::string& mark_b);
Diagram labeled_strut(const std::string& mark_a, const std::string& mark_b,
                      const LabelValue& near_a);

/// Cycle of k trivalent vertices, each carrying one free leg. k must be >= 2.
Diagram wheel(int k, const std::string& mark = "h");

/// Chain of n bubbles (pairs of vertices joined by parallel edges) with one
/// free leg at each end: the n-loop connected diagram with two legs.
Diagram bubble_chain(int n, const std::string& end_mark_1, const std::string& end_mark_2);

/// bubble_chain(n) with its two legs closed into an extra loop through a new
/// edge carrying `extra_legs` h-legs: (n+1)-loop, used as the leading shape
/// of the clasper difference.
Diagram closed_bubble_chain(int n, int extra_legs, const std::string& leg_mark = "h");

/// Circle with (n-1) bubbles inserted and 2d consecutive free legs: the
/// n-loop diagram family whose sl2 weight is 4^(n-1) * 2 * (2c)^d up to one
/// global convention constant.
Diagram loop_family(int n, int d, const std::string& mark = "h");

/// Theta with the three edges carrying the given labels (monostate = none).
/// Labels sit near the first vertex's end of each edge.
Diagram labeled_theta(const std::optional<LabelValue>& e0, const std::optional<LabelValue>& e1,
                      const std::optional<LabelValue>& e2);

/// Theta with `k` h-legs placed on edge i (i in 0..2), k_i per edge.
Diagram theta_with_legs(int k0, int k1, int k2, const std::string& mark = "h");

}  // namespace shapes
}  // namespace loopexp
