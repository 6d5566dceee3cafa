"""Smoke tests for the python bindings: a thin pass over each exposed
operation with values pinned by the C++ suites."""

import fractions

import pytest

import loopexp


def frac(s):
    return fractions.Fraction(s)


def test_laurent_and_series():
    assert loopexp.is_in_Z("1 + 2*(t + t^-1 - 2)")
    assert not loopexp.is_in_Z("t")
    assert loopexp.deg_Z("1 - u + 3*u^2") == 2
    coeffs = loopexp.exp_substitute("t + t^-1 - 2", 4)
    assert [frac(c) for c in coeffs] == [0, 0, 1, 0, fractions.Fraction(1, 12)]


def test_diagram_parsing_and_invariants():
    theta = loopexp.Diagram.parse(
        "diagram { tri: v0(a,b,c) v1(d,e,f); uni:; edges: a-f b-e c-d; }"
    )
    assert theta.degree == 1
    assert theta.loop_number == 2
    assert theta.connected
    assert theta.canonical_sign() in (-1, 1)
    again = loopexp.Diagram.parse(theta.to_json())
    assert again.canonical_code() == theta.canonical_code()

    with pytest.raises(loopexp.DiagramParseError):
        loopexp.Diagram.parse("diagram { tri: v0(a,b,c); uni:; edges: a-b; }")


def test_space_dimensions():
    assert loopexp.space_dimensions("Bn:2", 5) == [0, 1, 0, 1, 0, 1]


def test_sl2_values():
    strut = loopexp.Diagram.parse("diagram { tri:; uni: l0=h l1=h; edges: l0-l1; }")
    assert loopexp.sl2_weight(strut.to_text()) == "(1)*c"
    theta = "diagram { tri: v0(a,b,c) v1(d,e,f); uni:; edges: a-f b-e c-d; }"
    assert loopexp.sl2_weight(theta) == loopexp.sl2_brute(theta)


def test_linking_certificate():
    out = loopexp.linking_invert([[0]], [[1]], [[1]])
    assert out["lgg_identity"]
    assert out["value_at_1"] == "1"
    assert out["r_half_integer"]
    assert frac(out["r"]) * 2 == int(frac(out["r"]) * 2)
    assert out["q_support_within_genus"]


def test_clasper_pipeline():
    out = loopexp.clasper_difference([[1]], [[0]], [[2]])
    assert out["leading_matches"]
    assert out["leading_sl2_nonzero"]
    r = frac(out["r"])
    assert (2 * r) % 2 == 1  # half-integer


def test_two_loop_numbers():
    out = loopexp.two_loop(1, "1", "0")
    assert out["theta1_deg3"] == "1"
    assert out["theta1_deg5"] == "-11/6"
    assert out["theta2_deg3"] == "-2"
    assert out["theta2_deg5"] == "23/3"
    assert out["p"] == "23/12"
    assert out["q"] == "11/24"


def test_counts_and_bounds():
    assert [loopexp.theta_mn_count(g) for g in (1, 2, 3, 4)] == [3, 8, 15, 24]
    assert loopexp.crude_bound(2, 1) == 686
    assert loopexp.xset_size() == 11


def test_reproduce_block():
    rep = loopexp.reproduce("theta-count")
    assert rep["all_pass"]
