"""Turing machine to rewrite system compilers, plus the fixed example systems.

Each construction turns a machine into a TRS together with a start-term
builder and the order that proves the TRS terminating.  Names follow the
usual conventions: the blank is the machine's own blank symbol, ``f`` pads
the step counter, ``#`` ends every tape, primes are appended with ``'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from trsreach.orders import KboSpec, PolyInterpretation, SymbolPoly
from trsreach.polynomial import Polynomial
from trsreach.syntax import format_trs, parse_trs
from trsreach.terms import Rule, Signature, Term, TermError, Trs, app, power, var
from trsreach.tm import PolySpec, TmError, TuringMachine

LENRED = "lenred"
HASH, HASH1, HASH0 = "#", "#1", "#0"
CONSTRUCTIONS = ("np", "2exp", "linexp", "pspace", "large-nexp")


class CompileError(TmError):
    pass


x, y, z = var("x"), var("y"), var("z")
z1, z2, z3 = var("z1"), var("z2"), var("z3")
END = app(HASH)


def u(name: str, arg: Term) -> Term:
    return app(name, [arg])


def word_chain(word: Sequence[str], inner: Term) -> Term:
    for a in reversed(word):
        inner = u(a, inner)
    return inner


def prime(name: str) -> str:
    return name + "'"


@dataclass(frozen=True)
class Construction:
    """A compiled machine: the system, how to build start terms and the
    size bound to ask for, and the order proving termination."""

    name: str
    machine: TuringMachine
    trs: Trs
    order: PolyInterpretation | KboSpec | str
    p: PolySpec
    q: PolySpec | None = None
    confluent: bool = False

    @property
    def large(self) -> bool:
        return self.name == "large-nexp"

    def start(self, word: Sequence[str]) -> Term:
        return START_BUILDERS[self.name](self.machine, tuple(word), self.p, self.q)

    def bound(self, word: Sequence[str]) -> int:
        """Size bound n: small reachability asks for size <= n, large for >= n."""
        if self.large:
            return 4 * 2 ** self.p(len(word)) + len(word) + 6
        return 1

    def simulation_bounds(self, word: Sequence[str]) -> tuple[int, tuple[int, int]]:
        """(step bound, tape window) of the runs the system can simulate."""
        ell = len(word)
        p = self.p(ell)
        if self.name == "np":
            return p, (p, p)
        if self.name == "2exp":
            n = 2 ** 2**p
            return n, (n, ell + n)
        if self.name in ("linexp", "large-nexp"):
            n = 2**p
            return n, (n, ell + n)
        return 2 ** self.q(ell), (p, p)

    def files(self) -> dict[str, str]:
        """Serialized order spec: suffix and text."""
        from trsreach.orders import format_interpretation, format_kbo

        if self.order == LENRED:
            return {"lenred": "lenred\n"}
        if isinstance(self.order, KboSpec):
            return {"kbo": format_kbo(self.order)}
        return {"poly": format_interpretation(self.order)}


# -- helpers -----------------------------------------------------------------


def _reserve(M: TuringMachine, reserved: Sequence[str]) -> None:
    names = set(M.states) | set(M.tape_alphabet)
    clash = sorted(names & set(reserved))
    if clash:
        raise CompileError(f"machine symbols collide with construction symbols: {', '.join(clash)}")


def _finish(rules: list[Rule], extra: dict[str, int]) -> Trs:
    trs = Trs.from_rules(rules, Signature(extra))
    try:
        back = parse_trs(format_trs(trs))
    except TermError as exc:
        raise CompileError(f"compiled system does not read back: {exc}") from exc
    if back.rules != trs.rules:
        raise CompileError("symbol names are ambiguous: the compiled system reads back differently")
    return trs


def _state_args(q: str, first: Term, second: Term, third: Term | None) -> Term:
    return app(q, [first, second] if third is None else [first, second, third])


def _machine_rules(M: TuringMachine, ternary: bool = False, cleanup: bool = True) -> list[Rule]:
    """Transition rules with the step counter f in the second state argument."""
    rules = []
    tail = z if ternary else None
    for t in M.transitions:
        lhs = _state_args(t.state, u(t.read, x), u("f", y), tail)
        if t.move == "R":
            rules.append(Rule(lhs, u(t.write, _state_args(t.target, x, y, tail))))
        else:
            for c in M.tape_alphabet:
                rules.append(Rule(u(c, lhs), _state_args(t.target, u(c, u(t.write, x)), y, tail)))
    if cleanup:
        qh = app(M.accept, [x, y])
        rules += [Rule(u(a, qh), qh) for a in M.tape_alphabet]
        rules.append(Rule(qh, END))
    return rules


def _tm_signature(M: TuringMachine, state_arity: int) -> dict[str, int]:
    sig = {q: state_arity for q in M.states}
    sig.update({a: 1 for a in M.tape_alphabet})
    return sig


def _length(p: PolySpec, word: tuple[str, ...]) -> int:
    n = p(len(word))
    if n < len(word):
        raise CompileError(f"p({len(word)}) = {n} is smaller than the word length {len(word)}")
    return n


# -- nondeterministic polynomial time, length-reducing -------------------------


def compile_np(M: TuringMachine) -> Trs:
    _reserve(M, ("f", HASH))
    sig = _tm_signature(M, 2)
    sig.update({"f": 1, HASH: 0})
    return _finish(_machine_rules(M), sig)


def start_term_np(M: TuringMachine, word: Sequence[str], p: PolySpec) -> Term:
    word = tuple(word)
    M.check_word(word)
    n = _length(p, word)
    tape = word_chain(word, power(M.blank, n - len(word), END))
    return power(M.blank, n, app(M.initial, [tape, power("f", n, END)]))


# -- doubly exponential time, polynomial order --------------------------------


def _hl_copy(i: int, zero_pat: Callable[[str], Term], succ: str) -> list[Rule]:
    """The addition/double/square rules with ``zero_pat`` playing zero."""
    plus, d, sq = f"+{i}", f"d{i}", f"sq{i}"
    return [
        Rule(app(plus, [zero_pat("y"), zero_pat("z")]), zero_pat("y")),
        Rule(app(plus, [u(succ, x), zero_pat("z")]), u(succ, x)),
        Rule(app(plus, [x, u(succ, y)]), u(succ, app(plus, [x, y]))),
        Rule(u(d, zero_pat("z")), zero_pat("z")),
        Rule(u(d, u(succ, x)), u(succ, u(succ, u(d, x)))),
        Rule(u(sq, zero_pat("z")), zero_pat("z")),
        Rule(u(sq, u(succ, x)), app(plus, [u(sq, x), u(succ, u(d, x))])),
    ]


def _r1_rules(M: TuringMachine) -> list[Rule]:
    def q0(prefix: str) -> Term:
        return app(M.initial, [var(prefix + "1"), var(prefix + "2")])

    return _hl_copy(1, q0, M.blank)


def _r_rules(i: int, succ: str) -> list[Rule]:
    return _hl_copy(i, lambda _: END, succ)


_2EXP_NAMES = ("f", HASH) + tuple(f"{s}{i}" for s in ("+", "d", "sq") for i in (1, 2, 3))


def compile_2exp(M: TuringMachine) -> Trs:
    _reserve(M, _2EXP_NAMES)
    M.require_initial_unreachable()
    sig = _tm_signature(M, 2)
    sig.update({"f": 1, HASH: 0})
    rules = _machine_rules(M) + _r1_rules(M) + _r_rules(2, M.blank) + _r_rules(3, "f")
    return _finish(rules, sig)


def start_term_2exp(M: TuringMachine, word: Sequence[str], p: PolySpec) -> Term:
    word = tuple(word)
    M.check_word(word)
    n = p(len(word))
    b = M.blank
    right = power("sq2", n, u(b, u(b, END)))
    counter = power("sq3", n, u("f", u("f", END)))
    return power("sq1", n, u(b, u(b, app(M.initial, [word_chain(word, right), counter]))))


def _base_interpretation(M: TuringMachine, state_arity: int) -> dict[str, str]:
    entries = {a: "x + 3" for a in M.tape_alphabet}
    params = ("x", "y", "z")[:state_arity]
    entries.update({q: ",".join(params) + ": " + " + ".join(params) + " + 3" for q in M.states})
    entries["f"] = "x + 3"
    entries[HASH] = "4"
    return entries


def interpretation_2exp(M: TuringMachine) -> PolyInterpretation:
    entries = _base_interpretation(M, 2)
    for i in (1, 2, 3):
        entries[f"+{i}"] = "x,y: x + 2*y + 1"
        entries[f"d{i}"] = "3*x + 1"
        entries[f"sq{i}"] = "3*x^2 + 3*x + 1"
    return PolyInterpretation.from_strings(entries)


# -- exponential time, linear polynomial order ---------------------------------


def _d_rules(M: TuringMachine, ternary: bool) -> list[Rule]:
    b = M.blank
    zs = [z1, z2, z3] if ternary else [z1, z2]
    q0 = app(M.initial, zs)
    return [
        Rule(u("d1", q0), q0),
        Rule(u("d1", u(b, x)), u(b, u(b, u("d1", x)))),
        Rule(u("d2", END), END),
        Rule(u("d2", u(b, x)), u(b, u(b, u("d2", x)))),
        Rule(u("d3", END), END),
        Rule(u("d3", u("f", x)), u("f", u("f", u("d3", x)))),
    ]


def compile_linexp(M: TuringMachine) -> Trs:
    _reserve(M, ("f", HASH, "d1", "d2", "d3"))
    M.require_initial_unreachable()
    sig = _tm_signature(M, 2)
    sig.update({"f": 1, HASH: 0})
    return _finish(_machine_rules(M) + _d_rules(M, False), sig)


def start_term_linexp(M: TuringMachine, word: Sequence[str], p: PolySpec) -> Term:
    word = tuple(word)
    M.check_word(word)
    n = p(len(word))
    b = M.blank
    tape = word_chain(word, power("d2", n, u(b, END)))
    return power("d1", n, u(b, app(M.initial, [tape, power("d3", n, u("f", END))])))


def interpretation_linexp(M: TuringMachine) -> PolyInterpretation:
    entries = _base_interpretation(M, 2)
    entries.update({f"d{i}": "3*x + 1" for i in (1, 2, 3)})
    return PolyInterpretation.from_strings(entries)


# -- polynomial space, KBO without special symbol -------------------------------


def compile_pspace(M: TuringMachine) -> Trs:
    tape, states = M.tape_alphabet, M.states
    primed = [prime(a) for a in tape] + [prime(q) for q in states]
    _reserve(M, ("0", "1", "1'", HASH) + tuple(primed))
    rules = []
    for a in tape:
        rules.append(Rule(u("1", u(a, x)), u("0", u(prime(a), x))))
        rules.append(Rule(u("0", u(a, x)), u("1'", u(prime(a), x))))
    rules.append(Rule(u("0", u("1'", x)), u("1'", u("1", x))))
    rules.append(Rule(u("1", u("1'", x)), u("0", u("1", x))))
    for a in tape:
        for g in tape + states:
            rules.append(Rule(u(prime(a), u(g, x)), u(a, u(prime(g), x))))
    for t in M.transitions:
        lhs = u(prime(t.state), u(t.read, x))
        if t.move == "R":
            rules.append(Rule(lhs, u(t.write, u(t.target, x))))
        else:
            for c in tape:
                rules.append(Rule(u(c, lhs), u(t.target, u(c, u(t.write, x)))))
    qh = u(M.accept, x)
    rules += [Rule(u(a, qh), qh) for a in tape + ("0", "1")]
    rules.append(Rule(qh, END))
    sig = _tm_signature(M, 1)
    sig.update({n: 1 for n in ("1", "0", "1'", *primed)})
    sig[HASH] = 0
    return _finish(rules, sig)


def start_term_pspace(M: TuringMachine, word: Sequence[str], p: PolySpec, q: PolySpec) -> Term:
    word = tuple(word)
    M.check_word(word)
    n = _length(p, word)
    tape = u(M.initial, word_chain(word, power(M.blank, n - len(word), END)))
    return u("1", power("0", q(len(word)), power(M.blank, n, tape)))


def kbo_pspace(M: TuringMachine) -> KboSpec:
    tape, states = M.tape_alphabet, M.states
    names = ["1", "0", "1'", HASH] + list(tape) + list(states)
    names += [prime(a) for a in tape] + [prime(q) for q in states]
    chains = [("1", "0", "1'")]
    chains += [(prime(q), prime(a)) for q in states for a in tape]
    chains += [(prime(a), c) for a in tape for c in tape]
    chains += [(a, q) for a in tape for q in states]
    return KboSpec.build({n: 1 for n in names}, 1, chains)


# -- large terms, exponential time ------------------------------------------------


def compile_large_nexp(M: TuringMachine) -> Trs:
    _reserve(M, ("f", HASH, "d1", "d2", "d3", "d4", "d4'"))
    M.require_initial_unreachable()
    rules = _machine_rules(M, ternary=True, cleanup=False) + _d_rules(M, True)
    rules += [
        Rule(u("d4", END), u("f", u("f", END))),
        Rule(u("d4", u("f", x)), u("f", u("f", u("d4", x)))),
        Rule(app(M.accept, [x, y, u("d4'", z)]), app(M.accept, [x, y, u("d4", z)])),
        Rule(u("d4", u("d4'", z)), u("d4", u("d4", z))),
    ]
    sig = _tm_signature(M, 3)
    sig.update({"f": 1, HASH: 0})
    return _finish(rules, sig)


def start_term_large_nexp(M: TuringMachine, word: Sequence[str], p: PolySpec) -> Term:
    word = tuple(word)
    M.check_word(word)
    n = p(len(word))
    b = M.blank
    tape = word_chain(word, power("d2", n, u(b, END)))
    counter = power("d3", n, u("f", END))
    spare = power("d4'", n + 1, u("f", END))
    return power("d1", n, u(b, app(M.initial, [tape, counter, spare])))


def interpretation_large_nexp(M: TuringMachine) -> PolyInterpretation:
    entries = _base_interpretation(M, 3)
    entries.update({f"d{i}": "3*x + 1" for i in (1, 2, 3, 4)})
    entries["d4'"] = "3*x + 2"
    return PolyInterpretation.from_strings(entries)


# -- confluence closure --------------------------------------------------------------


def confluence_closure(trs: Trs, mode: str = "poly") -> Trs:
    """Add collapsing rules so that every ground term reaches ``#1(#0)``.

    ``poly`` collapses every non-constant symbol, ``kbo`` only the unary
    ones (all symbols of such systems are unary or constants).
    """
    if mode not in ("poly", "kbo"):
        raise ValueError(f"unknown closure mode {mode!r}")
    symbols = trs.signature.symbols
    clash = sorted({HASH1, HASH0} & set(symbols))
    if clash:
        raise CompileError(f"symbols {', '.join(clash)} are already used")
    bottom = u(HASH1, app(HASH0))
    rules = list(trs.rules)
    for g, k in symbols.items():
        if k == 0:
            continue
        if mode == "kbo" and k != 1:
            raise CompileError(f"kbo closure needs unary symbols, but {g} has arity {k}")
        rules.append(Rule(app(g, [var(f"x{i}") for i in range(1, k + 1)]), bottom))
    if mode == "poly":
        rules.append(Rule(u(HASH1, bottom), bottom))
    if HASH in symbols:
        rules.append(Rule(END, bottom))
    extra = dict(symbols)
    extra.update({HASH1: 1, HASH0: 0})
    return _finish(rules, extra)


def extend_interpretation(I: PolyInterpretation) -> PolyInterpretation:
    return I.extend(
        {
            HASH1: SymbolPoly(("x",), Polynomial.var("x") + 1),
            HASH0: SymbolPoly((), Polynomial.const(2)),
        }
    )


def extend_kbo(K: KboSpec) -> KboSpec:
    weights = {n: 2 for n in K.weights}
    weights.update({HASH1: 1, HASH0: 1})
    return KboSpec.build(weights, 1, K.chains + ((HASH, HASH1),))


# -- dispatch ------------------------------------------------------------------------

START_BUILDERS = {
    "np": lambda M, w, p, q: start_term_np(M, w, p),
    "2exp": lambda M, w, p, q: start_term_2exp(M, w, p),
    "linexp": lambda M, w, p, q: start_term_linexp(M, w, p),
    "pspace": start_term_pspace,
    "large-nexp": lambda M, w, p, q: start_term_large_nexp(M, w, p),
}


def build(
    name: str,
    M: TuringMachine,
    p: PolySpec | None = None,
    q: PolySpec | None = None,
    confluent: bool = False,
) -> Construction:
    """Compile ``M`` with construction ``name``.  ``p`` and ``q`` default to
    the machine's own ``poly:`` and ``qpoly:`` lines, then to p(l) = l + 1."""
    if name not in CONSTRUCTIONS:
        raise CompileError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")
    p = p or M.poly or PolySpec((1, 1))
    if name == "pspace":
        q = q or M.qpoly or p
    if name == "np":
        trs, order = compile_np(M), LENRED
    elif name == "2exp":
        trs, order = compile_2exp(M), interpretation_2exp(M)
    elif name == "linexp":
        trs, order = compile_linexp(M), interpretation_linexp(M)
    elif name == "pspace":
        trs, order = compile_pspace(M), kbo_pspace(M)
    else:
        trs, order = compile_large_nexp(M), interpretation_large_nexp(M)
    if confluent:
        if name in ("2exp", "linexp"):
            trs, order = confluence_closure(trs, "poly"), extend_interpretation(order)
        elif name == "pspace":
            trs, order = confluence_closure(trs, "kbo"), extend_kbo(order)
        else:
            raise CompileError(f"no confluent variant of the {name} construction")
    return Construction(name, M, trs, order, p, q, confluent)


# -- fixed example systems -------------------------------------------------------------


@dataclass(frozen=True)
class Builtin:
    name: str
    trs: Trs
    order: PolyInterpretation | KboSpec | None
    description: str


def _counter() -> Builtin:
    e = app("e")
    rules = [
        Rule(u("1", e), u("0", e)),
        Rule(u("0", e), u("1'", e)),
        Rule(u("0", u("1'", x)), u("1'", u("1", x))),
        Rule(u("1", u("1'", x)), u("0", u("1", x))),
    ]
    trs = Trs.from_rules(rules)
    kbo = KboSpec.build({"1": 1, "0": 1, "1'": 1, "e": 1}, 1, [("1", "0", "1'")])
    return Builtin("binary_counter", trs, kbo, "binary down counter; e is the empty word")


def _hl_rules(zero: str = "0") -> list[Rule]:
    o = app(zero)
    return [
        Rule(app("+", [x, o]), x),
        Rule(app("+", [x, u("s", y)]), u("s", app("+", [x, y]))),
        Rule(u("d", o), o),
        Rule(u("d", u("s", x)), u("s", u("s", u("d", x)))),
        Rule(u("q", o), o),
        Rule(u("q", u("s", x)), app("+", [u("q", x), u("s", u("d", x))])),
    ]


def _r_hl() -> Builtin:
    I = PolyInterpretation.from_strings(
        {"+": "x,y: x + 2*y + 1", "s": "x + 3", "d": "3*x + 1", "q": "3*x^2 + 3*x + 1", "0": "4"}
    )
    return Builtin("r_hl", Trs.from_rules(_hl_rules()), I, "addition, doubling and squaring in unary")


def _r_d() -> Builtin:
    rules = [r for r in _hl_rules() if r.lhs.name == "d"]
    I = PolyInterpretation.from_strings({"s": "x + 3", "d": "3*x + 1", "0": "4"})
    return Builtin("r_d", Trs.from_rules(rules), I, "doubling in unary")


def _el_sample() -> Builtin:
    A, B, A1, B1 = var("A"), var("B"), var("A1"), var("B1")

    def sub(l: Term, r: Term) -> Term:
        return app("sub", [l, r])

    ex = lambda c: u("ex_r", c)  # noqa: E731
    lhs = app(
        "R1",
        [
            sub(A, B),
            sub(A, ex(A1)),
            app(
                "R1",
                [
                    sub(ex(A1), B),
                    app("R2", [sub(ex(A1), ex(B1)), sub(A1, B1)]),
                    sub(ex(B1), B),
                ],
            ),
        ],
    )
    rhs = app("R3", [sub(A, B), sub(A, ex(A1)), sub(A1, B1), sub(ex(B1), B)])
    trs = Trs.from_rules([Rule(lhs, rhs)])
    return Builtin("el_proof_sample", trs, None, "shortening of a description-logic proof; concepts are variables")


BUILTINS: dict[str, Callable[[], Builtin]] = {
    "binary_counter": _counter,
    "r_hl": _r_hl,
    "r_d": _r_d,
    "el_proof_sample": _el_sample,
}


def builtin(name: str) -> Builtin:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}") from None


def start_size_np(p: int) -> int:
    """Closed form for the size of the polynomial-time start term."""
    return 3 * p + 3


__all__ = [
    "Builtin",
    "CONSTRUCTIONS",
    "CompileError",
    "Construction",
    "build",
    "builtin",
    "compile_2exp",
    "compile_large_nexp",
    "compile_linexp",
    "compile_np",
    "compile_pspace",
    "confluence_closure",
    "extend_interpretation",
    "extend_kbo",
    "interpretation_2exp",
    "interpretation_large_nexp",
    "interpretation_linexp",
    "kbo_pspace",
    "start_size_np",
    "start_term_2exp",
    "start_term_large_nexp",
    "start_term_linexp",
    "start_term_np",
    "start_term_pspace",
]
