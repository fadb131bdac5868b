import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from trsreach.polynomial import Polynomial, parse_polynomial

NAMES = ("x", "y", "z")
SYMS = sympy.symbols(NAMES)


@st.composite
def polys(draw, max_terms=4, max_exp=3, min_coeff=-5, max_coeff=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple(
            (v, e) for v, e in zip(NAMES, draw(st.lists(st.integers(0, max_exp), min_size=3, max_size=3))) if e
        )
        terms[tuple(sorted(mono))] = draw(st.integers(min_coeff, max_coeff))
    return Polynomial(terms)


def to_sympy(p: Polynomial):
    env = dict(zip(NAMES, SYMS))
    out = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Integer(c)
        for v, e in mono:
            term *= env[v] ** e
        out += term
    return sympy.expand(out)


def test_examples():
    x = Polynomial.var("x")
    p = x * x * 3 + x * 21 + 37
    assert str(p) == "3*x^2 + 21*x + 37"
    assert p.degree == 2 and p.constant_term == 37
    assert str(Polynomial()) == "0"
    assert str(Polynomial.var("x") - 4) == "x - 4"


def test_parse():
    p = parse_polynomial("3*x^2 + 21*x + 37")
    assert p == Polynomial({(("x", 2),): 3, (("x", 1),): 21, (): 37})
    assert parse_polynomial("x*y + x*y") == parse_polynomial("2*x*y")
    assert parse_polynomial("x^2*x") == parse_polynomial("x^3")
    for bad in ("", "x +", "3 - x", "2**x", "x^"):
        with pytest.raises(ValueError):
            parse_polynomial(bad)


def test_zero_coefficients_vanish():
    x = Polynomial.var("x")
    assert (x - x) == Polynomial()
    assert (x - x).terms == {}
    assert Polynomial({(("x", 0),): 4}) == 4


def test_evaluate_needs_all_values():
    with pytest.raises(KeyError):
        parse_polynomial("x + y").evaluate({"x": 1})


def test_negative_power():
    with pytest.raises(ValueError):
        Polynomial.var("x") ** -1


def test_shift_example():
    # x^2 - 2x at x+1 is x^2 - 1
    p = Polynomial.var("x") ** 2 - Polynomial.var("x") * 2
    assert p.shift() == Polynomial.var("x") ** 2 - 1


@given(polys(), polys())
def test_ring_operations_match_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@given(polys(max_terms=3, max_exp=2), st.integers(0, 3))
def test_power_matches_sympy(p, k):
    assert to_sympy(p**k) == sympy.expand(to_sympy(p) ** k)


@given(polys(max_terms=3, max_exp=2), polys(max_terms=2, max_exp=2), polys(max_terms=2, max_exp=2))
def test_compose_is_simultaneous(p, a, b):
    x, y, _ = SYMS
    got = to_sympy(p.compose({"x": a, "y": b}))
    want = sympy.expand(to_sympy(p).subs({x: to_sympy(a), y: to_sympy(b)}, simultaneous=True))
    assert got == want


@given(polys(), st.integers(0, 3))
def test_shift_matches_sympy(p, k):
    want = sympy.expand(to_sympy(p).subs({s: s + k for s in SYMS}, simultaneous=True))
    assert to_sympy(p.shift(k)) == want


@given(polys(min_coeff=0))
def test_format_parse_round_trip(p):
    assert parse_polynomial(str(p)) == p


@given(polys(), st.tuples(*[st.integers(1, 5)] * 3))
def test_evaluate_matches_sympy(p, values):
    env = dict(zip(NAMES, values))
    assert p.evaluate(env) == to_sympy(p).subs(dict(zip(SYMS, values)))
