"""Reduction orders: the length-reducing order, polynomial interpretations
and Knuth-Bendix orders without special symbol.

Every checker returns an :class:`OrderReport` with one verdict per rule.
Polynomial comparison uses the shift criterion and can only say ``yes`` or
``unknown``; the other orders are decided exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from trsreach.polynomial import Polynomial, parse_polynomial
from trsreach.terms import Rule, Term, TermError, Trs, format_term, subterms, variables

YES, NO, UNKNOWN = "yes", "no", "unknown"
GT, LT, EQ, INCOMPARABLE = "GT", "LT", "EQ", "INCOMPARABLE"


class OrderError(TermError):
    pass


class UnassignedSymbolError(OrderError):
    pass


class IllFormedInterpretationError(OrderError):
    pass


class InadmissibleSpecError(OrderError):
    pass


class SpecSyntaxError(OrderError):
    pass


@dataclass(frozen=True)
class RuleVerdict:
    index: int  # 0-based
    rule: Rule
    verdict: str
    detail: str = ""


@dataclass
class OrderReport:
    kind: str
    per_rule: list[RuleVerdict]
    flags: dict[str, bool] = field(default_factory=dict)
    w_min: Fraction | None = None
    w_max: Fraction | None = None

    @property
    def oriented(self) -> bool:
        return all(v.verdict == YES for v in self.per_rule)

    def failing(self) -> list[RuleVerdict]:
        return [v for v in self.per_rule if v.verdict != YES]

    def format(self, style: str = "text") -> str:
        lines = [f"order: {self.kind}", f"oriented: {'yes' if self.oriented else 'no'}"]
        for name, value in self.flags.items():
            lines.append(f"{name}: {'yes' if value else 'no'}")
        if self.w_min is not None:
            lines.append(f"w_min: {self.w_min}")
            lines.append(f"w_max: {self.w_max}")
        for v in self.per_rule:
            if style == "lines":
                lines.append(f"rule {v.index + 1}: {v.verdict}")
            else:
                extra = f"  ({v.detail})" if v.detail else ""
                lines.append(f"rule {v.index + 1}: {v.rule}  {v.verdict}{extra}")
        return "\n".join(lines)


# -- length-reducing -----------------------------------------------------------


def length_reducing_rule(rule: Rule) -> tuple[bool, str]:
    sl, sr = rule.lhs.size, rule.rhs.size
    if sl <= sr:
        return False, f"size {sl} <= {sr}"
    lv, rv = variables(rule.lhs), variables(rule.rhs)
    for x, k in sorted(rv.items()):
        if lv[x] < k:
            return False, f"variable {x} occurs {k} times on the right, {lv[x]} on the left"
    return True, f"size {sl} > {sr}"


def check_length_reducing(trs: Trs) -> OrderReport:
    out = []
    for i, rule in enumerate(trs.rules):
        ok, detail = length_reducing_rule(rule)
        out.append(RuleVerdict(i, rule, YES if ok else NO, detail))
    return OrderReport("lenred", out)


# -- polynomial interpretations -------------------------------------------------


@dataclass(frozen=True)
class SymbolPoly:
    params: tuple[str, ...]
    poly: Polynomial

    def __str__(self) -> str:
        return str(self.poly)


class PolyInterpretation:
    """Map from symbol name to a polynomial over that symbol's parameters."""

    def __init__(self, assignment: Mapping[str, SymbolPoly] | None = None):
        self.assignment: dict[str, SymbolPoly] = dict(assignment or {})

    @classmethod
    def from_strings(cls, entries: Mapping[str, str]) -> "PolyInterpretation":
        """``{"+": "x1 + 2*x2 + 1", "0": "4"}``; parameters are the
        indeterminates in sorted order unless given as ``"x,y: ..."``."""
        out = {}
        for name, text in entries.items():
            if ":" in text:
                head, body = text.split(":", 1)
                params = tuple(p.strip() for p in head.split(",") if p.strip())
            else:
                body = text
                params = None
            poly = parse_polynomial(body)
            if params is None:
                params = tuple(sorted(poly.indeterminates))
            out[name] = SymbolPoly(params, poly)
        return cls(out)

    def __contains__(self, name: str) -> bool:
        return name in self.assignment

    def __getitem__(self, name: str) -> SymbolPoly:
        return self.assignment[name]

    def extend(self, extra: Mapping[str, SymbolPoly]) -> "PolyInterpretation":
        merged = dict(self.assignment)
        merged.update(extra)
        return PolyInterpretation(merged)

    def restrict(self, names: Iterable[str]) -> "PolyInterpretation":
        keep = set(names)
        return PolyInterpretation({n: sp for n, sp in self.assignment.items() if n in keep})

    def without(self, names: Iterable[str]) -> "PolyInterpretation":
        drop = set(names)
        return PolyInterpretation({n: sp for n, sp in self.assignment.items() if n not in drop})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyInterpretation):
            return NotImplemented
        return self.assignment == other.assignment

    def __repr__(self) -> str:
        return f"PolyInterpretation({len(self.assignment)} symbols)"


def _lookup(I: PolyInterpretation, t: Term) -> SymbolPoly:
    sp = I.assignment.get(t.name)
    if sp is None:
        raise UnassignedSymbolError(f"no polynomial assigned to symbol {t.name}")
    if len(sp.params) != len(t.args):
        raise IllFormedInterpretationError(
            f"symbol {t.name} has arity {len(t.args)} but its polynomial has {len(sp.params)} parameters"
        )
    return sp


def interpret(I: PolyInterpretation, t: Term) -> Polynomial:
    """P_t; variables of t become indeterminates named after them."""
    memo: dict[Term, Polynomial] = {}
    for node in _postorder(t):
        if node in memo:
            continue
        if node.is_var:
            memo[node] = Polynomial.var(node.name)
            continue
        sp = _lookup(I, node)
        if not node.args:
            memo[node] = sp.poly
        else:
            memo[node] = sp.poly.compose({p: memo[a] for p, a in zip(sp.params, node.args)})
    return memo[t]


def eval_poly(p: Polynomial, assignment: Mapping[str, int]) -> int:
    for name, v in assignment.items():
        if v < 1:
            raise ValueError(f"indeterminate {name} must be assigned a natural number >= 1")
    return p.evaluate(assignment)


def eval_term(I: PolyInterpretation, t: Term, value: int | Mapping[str, int] = 2) -> int:
    """Evaluate P_t directly as a number; ``value`` is used for every variable
    (or looked up per variable when a mapping)."""
    memo: dict[Term, int] = {}
    for node in _postorder(t):
        if node in memo:
            continue
        if node.is_var:
            memo[node] = value if isinstance(value, int) else value[node.name]
            continue
        sp = _lookup(I, node)
        memo[node] = sp.poly.evaluate({p: memo[a] for p, a in zip(sp.params, node.args)})
    return memo[t]


def _postorder(t: Term):
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(node.args)
    return reversed(out)


def poly_gt(p: Polynomial, q: Polynomial) -> str:
    """yes if p > q on all naturals >= 1 by the shift criterion, else unknown."""
    diff = (p - q - 1).shift(1)
    return YES if all(c >= 0 for c in diff.coefficients()) else UNKNOWN


def validate_interpretation(I: PolyInterpretation, signature: Mapping[str, int] | None = None) -> None:
    for name, sp in I.assignment.items():
        if len(set(sp.params)) != len(sp.params):
            raise IllFormedInterpretationError(f"[{name}]: repeated parameter names")
        stray = sp.poly.indeterminates - set(sp.params)
        if stray:
            raise IllFormedInterpretationError(f"[{name}]: indeterminate(s) {', '.join(sorted(stray))} are not parameters")
        if any(c < 0 for c in sp.poly.coefficients()):
            raise IllFormedInterpretationError(f"[{name}]: negative coefficient")
        missing = set(sp.params) - sp.poly.indeterminates
        if missing:
            raise IllFormedInterpretationError(
                f"[{name}] does not depend on {', '.join(sorted(missing))}"
            )
        if not sp.params and sp.poly.constant_term <= 0:
            raise IllFormedInterpretationError(f"[{name}]: a constant must be mapped to a number > 0")
        if signature is not None and name in signature and signature[name] != len(sp.params):
            raise IllFormedInterpretationError(
                f"[{name}] has {len(sp.params)} parameters but the symbol has arity {signature[name]}"
            )
    if signature is not None:
        missing = [n for n in signature if n not in I.assignment]
        if missing:
            raise UnassignedSymbolError(f"no polynomial assigned to symbol(s) {', '.join(missing)}")


def is_size_compatible(I: PolyInterpretation, names: Iterable[str] | None = None) -> bool:
    pool = I.assignment if names is None else {n: I.assignment[n] for n in names if n in I.assignment}
    return all(sp.poly.constant_term >= 2 for sp in pool.values() if not sp.params)


def is_linear(I: PolyInterpretation) -> bool:
    return all(sp.poly.degree <= 1 for sp in I.assignment.values())


def check_poly_order(trs: Trs, I: PolyInterpretation) -> OrderReport:
    validate_interpretation(I, trs.signature.symbols)
    out = []
    for i, rule in enumerate(trs.rules):
        pl, pr = interpret(I, rule.lhs), interpret(I, rule.rhs)
        out.append(RuleVerdict(i, rule, poly_gt(pl, pr), f"{pl} > {pr}"))
    flags = {"size_compatible": is_size_compatible(I), "linear": is_linear(I)}
    return OrderReport("poly", out, flags)


_INTERP_RE = re.compile(r"^\[([^\]]+)\]\s*(?:\(([^)]*)\))?\s*=\s*(.+)$", re.S)


def parse_interpretation(text: str) -> PolyInterpretation:
    """Statements ``[f](x1,...,xn) = poly;`` and ``[c] = 4;``.  Lines whose
    first non-blank character is ``#`` are comments."""
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    out: dict[str, SymbolPoly] = {}
    for raw in body.split(";"):
        stmt = raw.strip()
        if not stmt:
            continue
        m = _INTERP_RE.match(stmt)
        if not m:
            raise SpecSyntaxError(f"malformed interpretation statement {stmt!r}")
        name = m.group(1).strip()
        params = tuple(p.strip() for p in (m.group(2) or "").split(",") if p.strip())
        try:
            poly = parse_polynomial(m.group(3))
        except ValueError as exc:
            raise SpecSyntaxError(f"[{name}]: {exc}") from None
        if name in out:
            raise SpecSyntaxError(f"symbol {name} is interpreted twice")
        out[name] = SymbolPoly(params, poly)
    return PolyInterpretation(out)


def format_interpretation(I: PolyInterpretation) -> str:
    lines = []
    for name, sp in I.assignment.items():
        head = f"[{name}]" + (f"({','.join(sp.params)})" if sp.params else "")
        lines.append(f"{head} = {sp.poly};")
    return "\n".join(lines) + "\n"


# -- Knuth-Bendix orders ----------------------------------------------------------


def _closure(pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    closed = set()
    for a in list(succ):
        seen = set()
        stack = list(succ[a])
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(succ.get(b, ()))
        for b in seen:
            closed.add((a, b))
    for a, b in closed:
        if a == b:
            raise InadmissibleSpecError(f"precedence has a cycle through {a}")
    return frozenset(closed)


@dataclass(frozen=True)
class KboSpec:
    weights: Mapping[str, Fraction]
    w0: Fraction
    precedence: frozenset[tuple[str, str]]  # (f, g) means f > g; transitively closed
    chains: tuple[tuple[str, ...], ...] = ()

    @classmethod
    def build(cls, weights: Mapping[str, Fraction | int | str], w0=1, chains: Iterable[Iterable[str]] = ()) -> "KboSpec":
        ws = {n: Fraction(v) for n, v in weights.items()}
        chains = tuple(tuple(c) for c in chains)
        pairs = [(c[i], c[i + 1]) for c in chains for i in range(len(c) - 1)]
        return cls(ws, Fraction(w0), _closure(pairs), chains)

    def __hash__(self):
        return hash((tuple(sorted(self.weights.items())), self.w0, self.precedence))

    def greater(self, f: str, g: str) -> bool:
        return (f, g) in self.precedence

    def extend(self, weights: Mapping[str, Fraction | int] = (), chains=()) -> "KboSpec":
        ws = dict(self.weights)
        ws.update({n: Fraction(v) for n, v in dict(weights).items()})
        return KboSpec.build(ws, self.w0, self.chains + tuple(tuple(c) for c in chains))


class MissingWeightError(OrderError):
    pass


def kbo_weight(K: KboSpec, t: Term) -> Fraction:
    total = Fraction(0)
    for node in subterms(t):
        if node.is_var:
            total += K.w0
        else:
            w = K.weights.get(node.name)
            if w is None:
                raise MissingWeightError(f"no weight for symbol {node.name}")
            total += w
    return total


@dataclass(frozen=True)
class Comparison:
    verdict: str
    detail: str = ""

    def __eq__(self, other):
        if isinstance(other, str):
            return self.verdict == other
        if isinstance(other, Comparison):
            return self.verdict == other.verdict and self.detail == other.detail
        return NotImplemented

    def __hash__(self):
        return hash(self.verdict)

    def __str__(self) -> str:
        return self.verdict


def _kbo_gt(K: KboSpec, s: Term, t: Term) -> tuple[bool, str]:
    while True:
        if s is t:
            return False, f"{format_term(s)} equals itself"
        vs, vt = variables(s), variables(t)
        for x, k in sorted(vt.items()):
            if vs[x] < k:
                return False, f"variable {x} occurs more often in {format_term(t)}"
        ws, wt = kbo_weight(K, s), kbo_weight(K, t)
        if ws > wt:
            return True, f"weight {ws} > {wt}"
        if ws < wt:
            return False, f"weight {ws} < {wt}"
        if s.is_var or t.is_var:
            return False, f"equal weight {ws} and no head symbol to compare"
        if s.name != t.name or len(s.args) != len(t.args):
            if K.greater(s.name, t.name):
                return True, f"equal weight {ws}, precedence {s.name} > {t.name}"
            if K.greater(t.name, s.name):
                return False, f"equal weight {ws}, precedence {t.name} > {s.name}"
            return False, f"equal weight {ws}, no precedence between {s.name} and {t.name}"
        for a, b in zip(s.args, t.args):
            if a is not b:
                s, t = a, b
                break
        else:  # pragma: no cover - identical terms are interned
            return False, "identical arguments"


def kbo_compare(K: KboSpec, s: Term, t: Term) -> Comparison:
    if s is t:
        return Comparison(EQ, "identical terms")
    ok, why = _kbo_gt(K, s, t)
    if ok:
        return Comparison(GT, why)
    if _kbo_gt(K, t, s)[0]:
        return Comparison(LT, why)
    return Comparison(INCOMPARABLE, why)


def kbo_gt(K: KboSpec, s: Term, t: Term) -> bool:
    return _kbo_gt(K, s, t)[0]


def check_admissible(K: KboSpec, symbols: Mapping[str, int]) -> None:
    if K.w0 <= 0:
        raise InadmissibleSpecError(f"variable weight w0 = {K.w0} must be positive")
    for name, w in K.weights.items():
        if w < 0:
            raise InadmissibleSpecError(f"weight of {name} is negative")
    for name, arity in symbols.items():
        w = K.weights.get(name)
        if w is None:
            raise InadmissibleSpecError(f"no weight for symbol {name}")
        if arity == 0 and w < K.w0:
            raise InadmissibleSpecError(f"constant {name} has weight {w} < w0 = {K.w0}")
        if arity == 1 and w == 0:
            raise InadmissibleSpecError(f"unary symbol {name} has weight 0 (special symbols are not supported)")


def kbo_bounds(K: KboSpec, names: Iterable[str]) -> tuple[Fraction, Fraction]:
    ws = [K.weights[n] for n in names] + [K.w0]
    return min(w for w in ws if w > 0), max(ws)


def check_kbo(trs: Trs, K: KboSpec) -> OrderReport:
    check_admissible(K, trs.signature.symbols)
    out = []
    for i, rule in enumerate(trs.rules):
        cmp = kbo_compare(K, rule.lhs, rule.rhs)
        out.append(RuleVerdict(i, rule, YES if cmp.verdict == GT else NO, cmp.detail))
    w_min, w_max = kbo_bounds(K, trs.signature.symbols)
    return OrderReport("kbo", out, {}, w_min, w_max)


def parse_kbo(text: str) -> KboSpec:
    """``w0 = r``, ``w(f) = r`` and ``prec: a > b > c`` lines; ``#`` at the
    start of a line begins a comment."""
    w0 = None
    weights: dict[str, Fraction] = {}
    chains: list[tuple[str, ...]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            if stripped.startswith("prec:"):
                chain = tuple(p.strip() for p in stripped[5:].split(">"))
                if len(chain) < 2 or not all(chain):
                    raise ValueError("a precedence chain needs at least two symbols")
                chains.append(chain)
            elif stripped.startswith("w0"):
                key, value = stripped.split("=", 1)
                if key.strip() != "w0":
                    raise ValueError(f"unknown key {key.strip()!r}")
                w0 = Fraction(value.strip())
            elif stripped.startswith("w("):
                m = re.match(r"w\((.+)\)\s*=\s*(\S+)$", stripped)
                if not m:
                    raise ValueError("expected w(symbol) = weight")
                name = m.group(1).strip()
                if name in weights:
                    raise ValueError(f"weight of {name} given twice")
                weights[name] = Fraction(m.group(2))
            else:
                raise ValueError("expected 'w0 = ...', 'w(f) = ...' or 'prec: ...'")
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecSyntaxError(f"line {lineno}: {exc}") from None
    if w0 is None:
        raise SpecSyntaxError("missing 'w0 = ...' line")
    return KboSpec.build(weights, w0, chains)


def format_kbo(K: KboSpec) -> str:
    lines = [f"w0 = {K.w0}"]
    lines += [f"w({n}) = {w}" for n, w in K.weights.items()]
    lines += ["prec: " + " > ".join(c) for c in K.chains]
    return "\n".join(lines) + "\n"


def orients_step(order, s: Term, t: Term) -> bool:
    """Does ``order`` (a PolyInterpretation or KboSpec) put s above t?"""
    if isinstance(order, KboSpec):
        return kbo_gt(order, s, t)
    if isinstance(order, PolyInterpretation):
        return poly_gt(interpret(order, s), interpret(order, t)) == YES
    raise TypeError(f"not an order spec: {order!r}")
