from itertools import product

import pytest

from conftest import CONTAINS_A, TINY, WIGGLE
from trsreach.tm import PolySpec, TmError, TuringMachine, parse_tm, parse_word, simulate

WORDS = ["".join(w) for n in range(4) for w in product("ab", repeat=n)]


def test_parse_and_format(contains_a):
    assert contains_a.states == ("q0", "q1", "qhat")
    assert contains_a.tape_alphabet == ("B", "a", "b")
    assert len(contains_a.transitions) == 4
    assert parse_tm(contains_a.format()) == contains_a


def test_optional_lines():
    M = parse_tm(TINY + "poly: 1 1\nqpoly: 2\ntape: X\n# trailing comment\n")
    assert M.poly == PolySpec((1, 1)) and M.poly(3) == 4
    assert M.qpoly(7) == 2
    assert "X" in M.tape_alphabet
    assert parse_tm(M.format()) == M


def test_tape_symbols_from_transitions():
    M = parse_tm(TINY.replace("qhat a R", "qhat Z R"))
    assert M.tape_alphabet == ("b", "a", "Z")


@pytest.mark.parametrize(
    "text, message",
    [
        (TINY.replace("init: q0", "init: q9"), "not declared"),
        (TINY.replace("init: q0", "init: qhat"), "must differ"),
        (TINY + "trans: qhat a -> q0 a R\n", "outgoing"),
        (TINY + "trans: q0 a -> qx a R\n", "unknown state"),
        (TINY.replace("qhat a R", "qhat a S"), "direction"),
        (TINY.replace("states: q0 qhat", "states: q0 qhat a"), "both as state and tape"),
        (TINY.replace("states: q0 qhat", "states: q0 qhat q0"), "duplicate state"),
        (TINY + "trans: q0 a -> qhat a R\n", "duplicate transitions"),
        (TINY.replace("blank: b", "blank: b c"), "one blank"),
        (TINY.replace("blank: b\n", ""), "missing 'blank:'"),
        (TINY + "colour: red\n", "unknown key"),
        (TINY + "poly: 1 x\n", "malformed"),
        (TINY + "trans: q0 a qhat a R\n", "expected 'trans"),
        (TINY + "just words\n", "key: value"),
        (TINY + "init: q0\n", "given twice"),
        (TINY.replace("input: a", "input: a(b"), "valid symbol"),
    ],
)
def test_validation_errors(text, message):
    with pytest.raises(TmError, match=message):
        parse_tm(text)


def test_initial_state_must_not_be_entered():
    M = parse_tm(WIGGLE)
    M.require_initial_unreachable()
    bad = parse_tm(WIGGLE + "trans: q1 b -> q0 b R\n")
    with pytest.raises(TmError, match="enters the initial state"):
        bad.require_initial_unreachable()


def test_polyspec():
    assert PolySpec()(5) == 5
    assert PolySpec.constant(3)(100) == 3
    assert PolySpec((1, 0, 2))(3) == 19
    with pytest.raises(TmError):
        PolySpec((1, -1))
    with pytest.raises(TmError):
        PolySpec(())


def test_parse_word(contains_a):
    assert parse_word(contains_a, "abba") == ("a", "b", "b", "a")
    assert parse_word(contains_a, "a b") == ("a", "b")
    assert parse_word(contains_a, "a,b") == ("a", "b")
    assert parse_word(contains_a, "") == ()
    with pytest.raises(TmError):
        parse_word(contains_a, "abc")


def test_multi_character_letters():
    M = parse_tm("states: p r\nblank: B\ninput: a1 a2\ninit: p\naccept: r\ntrans: p a1 -> r a1 R\n")
    assert parse_word(M, "a1 a2") == ("a1", "a2")
    assert parse_word(M, "a1") == ("a1",)


@pytest.mark.parametrize("word", WORDS)
def test_contains_a(contains_a, word):
    assert simulate(contains_a, word, len(word) + 1) == ("a" in word)


@pytest.mark.parametrize("word", WORDS)
def test_wiggle_needs_four_steps(wiggle, word):
    accepted = len(word) >= 2 and word[1] == "a"
    assert simulate(wiggle, word, 4) == accepted
    assert not simulate(wiggle, word, 3)


def test_step_bound(contains_a):
    assert simulate(contains_a, "bba", 3)
    assert not simulate(contains_a, "bba", 2)


def test_window_blocks_left_moves(wiggle):
    assert simulate(wiggle, "aa", 10, window=(0, 2))
    left = parse_tm(
        "states: q0 q1 qhat\nblank: B\ninput: a\ninit: q0\naccept: qhat\n"
        "trans: q0 a -> q1 a L\ntrans: q1 B -> qhat B R\n"
    )
    assert simulate(left, "a", 5)
    assert simulate(left, "a", 5, window=(1, 1))
    assert not simulate(left, "a", 5, window=(0, 1))


def test_window_allows_exit_to_the_right(starts_with_a):
    # the accepting move may step off the right end of the window
    assert simulate(starts_with_a, "a", 1, window=(0, 1))


def test_nondeterminism():
    M = parse_tm(
        "states: q0 q1 q2 qhat\nblank: B\ninput: a\ninit: q0\naccept: qhat\n"
        "trans: q0 a -> q1 a R\ntrans: q0 a -> q2 a R\ntrans: q2 B -> qhat B R\n"
    )
    assert simulate(M, "a", 2)
    assert not simulate(M, "a", 1)


def test_machine_is_hashable_and_frozen(contains_a):
    assert hash(contains_a) == hash(parse_tm(CONTAINS_A))
    with pytest.raises(AttributeError):
        contains_a.blank = "c"
    assert isinstance(contains_a, TuringMachine)
