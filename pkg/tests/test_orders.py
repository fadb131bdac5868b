from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ground_terms, terms
from oracles import brute_greater, kbo_weight_oracle, to_tuple
from test_polynomial import polys
from trsreach.compiler import HASH0, HASH1, builtin, extend_kbo
from trsreach.orders import (
    EQ,
    GT,
    INCOMPARABLE,
    LT,
    UNKNOWN,
    YES,
    IllFormedInterpretationError,
    InadmissibleSpecError,
    KboSpec,
    MissingWeightError,
    PolyInterpretation,
    SpecSyntaxError,
    UnassignedSymbolError,
    check_kbo,
    check_length_reducing,
    check_poly_order,
    eval_poly,
    eval_term,
    format_interpretation,
    format_kbo,
    interpret,
    kbo_compare,
    kbo_gt,
    kbo_weight,
    orients_step,
    parse_interpretation,
    parse_kbo,
    poly_gt,
)
from trsreach.polynomial import parse_polynomial
from trsreach.rewrite import Caps, reachable_set
from trsreach.syntax import parse_term, parse_trs
from trsreach.terms import app, nu_size, unary_chain, var

x = var("x")

SIG = {"f": 2, "g": 1, "h": 1, "c": 0, "d": 0}
UNIT_KBO = KboSpec.build({n: 1 for n in SIG}, 1, [("f", "g", "h", "c", "d")])
SKEWED_KBO = KboSpec.build({"f": Fraction(1, 2), "g": 3, "h": 1, "c": 2, "d": Fraction(5, 2)}, Fraction(1, 2), [("g", "h")])


def P(text):
    return parse_polynomial(text)


# -- length-reducing ------------------------------------------------------------


def test_length_reducing(hh):
    assert check_length_reducing(hh).oriented
    dup = parse_trs("(VAR x) (RULES f(x,c) -> f(x,x))")
    report = check_length_reducing(dup)
    assert not report.oriented
    assert "size 3 <= 3" in report.per_rule[0].detail
    grow = parse_trs("(VAR x) (RULES f(g(h(x)),c) -> f(x,x))")
    assert not check_length_reducing(grow).oriented


# -- polynomial interpretations ----------------------------------------------------


def test_example_interpretation(rhl, rhl_interp):
    l, r = rhl.rules[5].lhs, rhl.rules[5].rhs
    assert interpret(rhl_interp, l) == P("3*x^2 + 21*x + 37")
    assert interpret(rhl_interp, r) == P("3*x^2 + 9*x + 10")
    assert interpret(rhl_interp, app("0")) == 4
    report = check_poly_order(rhl, rhl_interp)
    assert report.oriented
    assert report.flags == {"size_compatible": True, "linear": False}


def test_eval_examples():
    assert eval_poly(P("3*x^2 + 21*x + 37"), {"x": 1}) == 61
    assert eval_poly(P("4"), {"x": 9}) == 4
    assert eval_poly(P("x + 2*y + 1"), {"x": 1, "y": 1}) == 4
    with pytest.raises(KeyError):
        eval_poly(P("x + y"), {"x": 1})
    with pytest.raises(ValueError):
        eval_poly(P("x"), {"x": 0})


def test_eval_term_matches_interpret(rhl_interp):
    t = parse_term("q(+(s(0),d(x)))", builtin("r_hl").trs.signature)
    assert eval_term(rhl_interp, t, 3) == eval_poly(interpret(rhl_interp, t), {"x": 3})


def test_poly_gt_examples():
    assert poly_gt(P("3*x^2 + 21*x + 37"), P("3*x^2 + 9*x + 10")) == YES
    assert poly_gt(P("x + 1"), P("x + 1")) == UNKNOWN
    assert poly_gt(P("x + 2*y + 7"), P("x + 2*y + 4")) == YES
    # true over naturals >= 1 but not certified before the shift: x^2 + 1 > 2x
    assert poly_gt(P("x^2 + 1"), P("2*x")) == UNKNOWN
    assert poly_gt(P("x^2 + 2"), P("2*x")) == YES


def test_r_d_is_linear():
    b = builtin("r_d")
    report = check_poly_order(b.trs, b.order)
    assert report.oriented
    assert report.flags == {"size_compatible": True, "linear": True}
    assert [v.detail for v in report.per_rule] == ["13 > 4", "3*x + 10 > 3*x + 7"]


def test_interpretation_validation():
    trs = parse_trs("(VAR x) (RULES g(x) -> c)")
    with pytest.raises(UnassignedSymbolError):
        check_poly_order(trs, PolyInterpretation.from_strings({"g": "x + 1"}))
    with pytest.raises(IllFormedInterpretationError):
        check_poly_order(trs, PolyInterpretation.from_strings({"g": "x: 5", "c": "1"}))
    with pytest.raises(IllFormedInterpretationError):
        check_poly_order(trs, PolyInterpretation.from_strings({"g": "x: x + y", "c": "1"}))
    with pytest.raises(IllFormedInterpretationError):
        check_poly_order(trs, PolyInterpretation.from_strings({"g": "x + 1", "c": "0"}))
    with pytest.raises(IllFormedInterpretationError):
        check_poly_order(trs, PolyInterpretation.from_strings({"g": "x,y: x + y", "c": "2"}))
    report = check_poly_order(trs, PolyInterpretation.from_strings({"g": "x + 1", "c": "1"}))
    assert report.oriented and not report.flags["size_compatible"]


def test_interpretation_file_round_trip(rhl_interp):
    text = format_interpretation(rhl_interp)
    assert "[q](x) = 3*x^2 + 3*x + 1;" in text
    assert parse_interpretation(text) == rhl_interp
    with pytest.raises(SpecSyntaxError):
        parse_interpretation("[f] 4;")
    with pytest.raises(SpecSyntaxError):
        parse_interpretation("[c] = 4; [c] = 5;")
    with pytest.raises(SpecSyntaxError):
        parse_interpretation("[g](x) = x - 1;")


@given(polys(max_terms=3, max_exp=2, min_coeff=0), polys(max_terms=3, max_exp=2, min_coeff=0))
def test_poly_gt_is_sound(p, q):
    if poly_gt(p, q) == YES:
        assert brute_greater(p, q, sorted(p.indeterminates | q.indeterminates))


@given(polys(max_terms=3, max_exp=2, min_coeff=0), st.integers(1, 5))
def test_poly_gt_of_shifted_constant(p, k):
    assert poly_gt(p + k, p) == YES
    assert poly_gt(p, p + k) == UNKNOWN


RHL_SIG = {"+": 2, "s": 1, "d": 1, "q": 1, "0": 0}


@given(terms(RHL_SIG, ("x",), max_leaves=4), st.integers(2, 4))
def test_nu_size_bound(t, a):
    I = builtin("r_hl").order
    assert eval_term(I, t, a) > nu_size(t)


@given(ground_terms(RHL_SIG, max_leaves=3))
def test_steps_decrease_under_example_interpretation(t):
    b = builtin("r_hl")
    graph = reachable_set(b.trs, t, Caps(max_terms=300))
    for src, steps in graph.edges.items():
        for step in steps:
            assert orients_step(b.order, src, step.result)


# -- Knuth-Bendix orders -------------------------------------------------------------


def test_kbo_weight_examples(counter, counter_kbo):
    t = parse_term("100(e)", counter.signature)
    assert kbo_weight(counter_kbo, t) == 4
    assert kbo_weight(counter_kbo, x) == 1
    ext = extend_kbo(counter_kbo)
    assert kbo_weight(ext, app(HASH1, [app(HASH0)])) == 2
    with pytest.raises(MissingWeightError):
        kbo_weight(counter_kbo, app("zz"))


def test_kbo_compare_examples(counter, counter_kbo):
    sig = counter.signature
    one, zero = parse_term("1(e)", sig), parse_term("0(e)", sig)
    assert kbo_compare(counter_kbo, one, zero) == GT
    assert kbo_compare(counter_kbo, zero, one) == LT
    assert kbo_compare(counter_kbo, one, one) == EQ
    cmp = kbo_compare(counter_kbo, parse_term("0(1'(x))", sig), parse_term("1'(1(x))", sig))
    assert cmp == GT and "precedence 0 > 1'" in cmp.detail


def test_kbo_incomparable_without_precedence():
    K = KboSpec.build({"g": 1, "h": 1, "c": 1})
    cmp = kbo_compare(K, app("g", [app("c")]), app("h", [app("c")]))
    assert cmp == INCOMPARABLE
    assert "no precedence" in cmp.detail
    # variable condition
    assert kbo_compare(K, app("g", [x]), app("g", [var("y")])) == INCOMPARABLE


def test_check_kbo(counter, counter_kbo):
    report = check_kbo(counter, counter_kbo)
    assert report.oriented
    assert (report.w_min, report.w_max) == (1, 1)
    grow = parse_trs("(VAR x) (RULES g(x) -> g(g(x)))")
    report = check_kbo(grow, KboSpec.build({"g": 1}))
    assert not report.oriented
    assert "weight 2 < 3" in report.per_rule[0].detail


def test_kbo_admissibility():
    trs = parse_trs("(VAR x) (RULES g(x) -> c)")
    with pytest.raises(InadmissibleSpecError, match="weight 0"):
        check_kbo(trs, KboSpec.build({"g": 0, "c": 1}))
    with pytest.raises(InadmissibleSpecError, match="constant c"):
        check_kbo(trs, KboSpec.build({"g": 1, "c": 1}, w0=2))
    with pytest.raises(InadmissibleSpecError, match="no weight"):
        check_kbo(trs, KboSpec.build({"g": 1}))
    with pytest.raises(InadmissibleSpecError, match="w0"):
        check_kbo(trs, KboSpec.build({"g": 1, "c": 1}, w0=0))
    with pytest.raises(InadmissibleSpecError, match="cycle"):
        KboSpec.build({"g": 1}, 1, [("g", "c", "g")])


def test_kbo_file_round_trip(counter_kbo):
    text = format_kbo(counter_kbo)
    assert text == "w0 = 1\nw(1) = 1\nw(0) = 1\nw(1') = 1\nw(e) = 1\nprec: 1 > 0 > 1'\n"
    assert parse_kbo(text) == counter_kbo
    assert parse_kbo("w0 = 1/2\nw(f) = 3/2\n").weights["f"] == Fraction(3, 2)
    for bad in ("w(f) = 1\n", "w0 = 1\nw(f) = 1\nw(f) = 2\n", "w0 = 1\nprec: a\n", "w0 = 1\nfoo\n"):
        with pytest.raises(SpecSyntaxError):
            parse_kbo(bad)


def test_orients_step_rejects_other_objects():
    with pytest.raises(TypeError):
        orients_step(object(), x, x)


@given(terms(max_leaves=8))
def test_kbo_weight_matches_oracle(t):
    for K in (UNIT_KBO, SKEWED_KBO):
        assert kbo_weight(K, t) == kbo_weight_oracle(K.weights, K.w0, to_tuple(t))


@given(terms(max_leaves=8))
def test_weight_size_sandwich(t):
    for K in (UNIT_KBO, SKEWED_KBO):
        ws = list(K.weights.values()) + [K.w0]
        w_min, w_max = min(w for w in ws if w > 0), max(ws)
        assert w_min / 2 * t.size <= kbo_weight(K, t) <= w_max * t.size


@given(terms(max_leaves=5), terms(max_leaves=5))
def test_kbo_is_strict_and_antisymmetric(s, t):
    for K in (UNIT_KBO, SKEWED_KBO):
        assert not kbo_gt(K, s, s)
        assert not (kbo_gt(K, s, t) and kbo_gt(K, t, s))
        verdict = kbo_compare(K, s, t).verdict
        flipped = {GT: LT, LT: GT, EQ: EQ, INCOMPARABLE: INCOMPARABLE}[verdict]
        assert kbo_compare(K, t, s).verdict == flipped


@given(terms(max_leaves=4), terms(max_leaves=4), terms(max_leaves=3))
def test_kbo_closed_under_substitution(s, t, u):
    from trsreach.terms import apply_substitution

    if kbo_gt(SKEWED_KBO, s, t):
        sigma = {"x": u}
        assert kbo_gt(SKEWED_KBO, apply_substitution(sigma, s), apply_substitution(sigma, t))


def test_counter_size_bound(counter, counter_kbo):
    # every reachable term stays within 2 * w_max / w_min times the start size
    for word in ("1", "10", "100", "1000", "1111"):
        s = unary_chain(word, app("e"))
        for t in reachable_set(counter, s).nodes:
            assert t.size <= 2 * s.size
