import pytest
from hypothesis import given

from conftest import SIG, rule_sets, terms
from trsreach.syntax import (
    TrsSyntaxError,
    UnknownSymbolError,
    format_trs,
    is_identifier,
    parse_term,
    parse_trs,
)
from trsreach.terms import (
    ArityError,
    ExtraVariableError,
    Signature,
    VariableLhsError,
    app,
    format_term,
    unary_chain,
    var,
)

x, c = var("x"), app("c")


def test_single_rule_file():
    trs = parse_trs("(VAR x) (RULES h(h(x)) -> g(x))")
    assert len(trs.rules) == 1
    assert dict(trs.signature.symbols) == {"h": 1, "g": 1}


def test_rule_errors_name_the_rule():
    with pytest.raises(VariableLhsError) as e1:
        parse_trs("(VAR x) (RULES x -> g(x))")
    assert "x -> g(x)" in str(e1.value)
    with pytest.raises(ExtraVariableError) as e2:
        parse_trs("(VAR x y) (RULES g(x) -> f(x,y))")
    assert "y" in str(e2.value) and "line 1" in str(e2.value)


def test_arity_conflict():
    with pytest.raises(ArityError):
        parse_trs("(VAR x) (RULES f(x) -> f(x,x))")


def test_syntax_error_has_position():
    with pytest.raises(TrsSyntaxError) as exc:
        parse_trs("(VAR x)\n(RULES\n  f(x -> x\n)")
    assert exc.value.line == 3


def test_bad_character():
    with pytest.raises(TrsSyntaxError):
        parse_trs("(VAR x) (RULES f(x) => x)")


def test_word_chain_sugar():
    trs = parse_trs("(VAR x) (RULES h(h(x)) -> g(x))")
    assert parse_term("gghhg(x)", Signature(trs.signature.symbols, frozenset({"x"}))) is unary_chain(
        "gghhg", x
    )
    # in rules the same sugar works once the pieces are known
    trs2 = parse_trs("(VAR x) (RULES h(x) -> g(x), hh(x) -> gg(x))")
    assert format_term(trs2.rules[1].lhs) == "h(h(x))"


def test_parse_term_examples():
    sig = Signature({"f": 2, "c": 0})
    t = parse_term("f(f(x,c),c)", Signature(sig.symbols, frozenset({"x"})))
    assert t.size == 5
    assert parse_term("c", sig) is c
    assert parse_term("c()", sig) is c


def test_unknown_symbol_and_extend():
    sig = Signature({"h": 1})
    with pytest.raises(UnknownSymbolError):
        parse_term("h(k)", sig)
    assert parse_term("hh(k)", sig, extend=True) is unary_chain("hh", app("k"))


def test_comments_and_hash_symbols():
    text = """
    # a comment line
    (VAR x)   # trailing comment
    (RULES
      #1(x) -> #,
      f(#) -> #1(#0)   # the last rule
    )
    #
    """
    trs = parse_trs(text)
    assert [str(r) for r in trs.rules] == ["#1(x) -> #", "f(#) -> #1(#0)"]


def test_primed_names():
    trs = parse_trs("(VAR x) (RULES 0(1'(x)) -> 1'(1(x)))")
    assert set(trs.signature.symbols) == {"0", "1'", "1"}


def test_format_is_canonical():
    trs = parse_trs("(VAR y x)(RULES f(x,y)->f(y,x), g(c)->c)")
    text = format_trs(trs)
    assert text == "(VAR x y)\n(RULES\n  f(x,y) -> f(y,x),\n  g(c) -> c\n)\n"
    assert parse_trs(text) == trs


def test_identifiers():
    assert is_identifier("q0'")
    assert is_identifier("+1")
    assert not is_identifier("a b")
    assert not is_identifier("")


@given(terms())
def test_term_round_trip(t):
    sig = Signature(SIG, frozenset({"x", "y"}))
    assert parse_term(format_term(t), sig) is t


@given(rule_sets())
def test_trs_round_trip(trs):
    back = parse_trs(format_trs(trs))
    assert back.rules == trs.rules
