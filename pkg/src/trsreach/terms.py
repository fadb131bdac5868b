"""Terms, signatures, rules and the basic measures on terms.

Terms are hash-consed: two structurally equal terms are the same Python
object, so equality and hashing are identity based and O(1).  Build terms
only through :func:`var` and :func:`app`.
"""

from __future__ import annotations

import threading
import weakref
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

Position = tuple[int, ...]
Substitution = Mapping[str, "Term"]


class TermError(Exception):
    """Base class for errors raised by the term layer."""


class InvalidPositionError(TermError):
    pass


class RuleError(TermError):
    """A rule violates the variable conditions on rewrite rules."""

    def __init__(self, message: str, rule: "Rule | None" = None):
        super().__init__(message)
        self.rule = rule


class VariableLhsError(RuleError):
    pass


class ExtraVariableError(RuleError):
    def __init__(self, message: str, rule: "Rule | None" = None, variables=()):
        super().__init__(message, rule)
        self.variables = tuple(variables)


class ArityError(TermError):
    pass


_table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()
_table_lock = threading.Lock()


class Term:
    """A variable or a function application; immutable and interned."""

    __slots__ = ("name", "args", "is_var", "size", "depth", "__weakref__")

    name: str
    args: tuple["Term", ...]
    is_var: bool
    size: int
    depth: int

    def __new__(cls, *a, **kw):
        raise TypeError("use trsreach.terms.var() or trsreach.terms.app()")

    @classmethod
    def _make(cls, name: str, args: tuple["Term", ...], is_var: bool) -> "Term":
        key = (is_var, name, args)
        t = _table.get(key)
        if t is not None:
            return t
        with _table_lock:
            t = _table.get(key)
            if t is None:
                t = object.__new__(cls)
                object.__setattr__(t, "name", name)
                object.__setattr__(t, "args", args)
                object.__setattr__(t, "is_var", is_var)
                object.__setattr__(t, "size", 1 + sum(c.size for c in args))
                object.__setattr__(t, "depth", 1 + max(c.depth for c in args) if args else 0)
                _table[key] = t
        return t

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __reduce__(self):
        if self.is_var:
            return (var, (self.name,))
        return (app, (self.name, self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_constant(self) -> bool:
        return not self.is_var and not self.args

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return f"<Term {format_term(self)}>"


def var(name: str) -> Term:
    return Term._make(name, (), True)


def app(name: str, args: Sequence[Term] = ()) -> Term:
    return Term._make(name, tuple(args), False)


def unary_chain(names: Sequence[str], inner: Term) -> Term:
    """``unary_chain("gh", x)`` builds ``g(h(x))``; names may also be a list."""
    t = inner
    for n in reversed(list(names)):
        t = app(n, (t,))
    return t


def power(name: str, k: int, inner: Term) -> Term:
    """``name`` applied ``k`` times to ``inner``."""
    t = inner
    for _ in range(k):
        t = app(name, (t,))
    return t


def format_term(t: Term) -> str:
    # iterative so deep unary towers do not hit the recursion limit
    out: list[str] = []
    stack: list[object] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        assert isinstance(item, Term)
        out.append(item.name)
        if item.args:
            stack.append(")")
            for i in range(len(item.args) - 1, -1, -1):
                stack.append(item.args[i])
                if i:
                    stack.append(",")
            stack.append("(")
    return "".join(out)


# -- signatures and rules ---------------------------------------------------


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int


@dataclass(frozen=True)
class Signature:
    """Function symbols (name -> arity, in first-use order) and variable names."""

    symbols: Mapping[str, int] = field(default_factory=dict)
    variables: frozenset[str] = frozenset()

    def __post_init__(self):
        clash = set(self.symbols) & set(self.variables)
        if clash:
            raise TermError(f"names used both as symbol and variable: {sorted(clash)}")

    def __hash__(self):
        return hash((tuple(self.symbols.items()), self.variables))

    def arity(self, name: str) -> int | None:
        return self.symbols.get(name)

    def symbol_list(self) -> list[Symbol]:
        return [Symbol(n, a) for n, a in self.symbols.items()]

    def merge(self, other: "Signature") -> "Signature":
        symbols = dict(self.symbols)
        for n, a in other.symbols.items():
            if symbols.setdefault(n, a) != a:
                raise ArityError(f"symbol {n} used with arities {symbols[n]} and {a}")
        return Signature(symbols, self.variables | other.variables)


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.lhs.is_var:
            raise VariableLhsError(f"left-hand side of {self} is a variable", self)
        extra = sorted(set(variables(self.rhs)) - set(variables(self.lhs)))
        if extra:
            raise ExtraVariableError(
                f"variable(s) {', '.join(extra)} of the right-hand side do not occur on the left in {self}",
                self,
                extra,
            )

    def __str__(self) -> str:
        return f"{format_term(self.lhs)} -> {format_term(self.rhs)}"


def signature_of(terms: Iterator[Term] | Sequence[Term], variables_: frozenset[str] | None = None) -> Signature:
    symbols: dict[str, int] = {}
    vs: set[str] = set()
    for t in terms:
        for node in subterms(t):
            if node.is_var:
                vs.add(node.name)
            elif symbols.setdefault(node.name, node.arity) != node.arity:
                raise ArityError(f"symbol {node.name} used with arities {symbols[node.name]} and {node.arity}")
    if variables_ is not None:
        vs |= set(variables_)
    return Signature(symbols, frozenset(vs))


@dataclass(frozen=True)
class Trs:
    signature: Signature
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            for side in (rule.lhs, rule.rhs):
                for node in subterms(side):
                    if node.is_var:
                        if node.name in self.signature.symbols:
                            raise TermError(f"{node.name} is a function symbol but used as a variable in {rule}")
                        continue
                    arity = self.signature.symbols.get(node.name)
                    if arity is None:
                        raise TermError(f"symbol {node.name} of rule {rule} is missing from the signature")
                    if arity != node.arity:
                        raise ArityError(
                            f"symbol {node.name} has arity {arity} but is used with {node.arity} arguments in {rule}"
                        )

    @classmethod
    def from_rules(cls, rules: Sequence[Rule], extra: Signature | None = None) -> "Trs":
        sig = signature_of([t for r in rules for t in (r.lhs, r.rhs)])
        if extra is not None:
            sig = extra.merge(sig)
        return cls(sig, tuple(rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __str__(self) -> str:
        from trsreach.syntax import format_trs

        return format_trs(self)

    def __hash__(self):
        return hash(self.rules)

    def __eq__(self, other):
        if not isinstance(other, Trs):
            return NotImplemented
        return self.rules == other.rules and self.signature == other.signature


# -- traversals and measures --------------------------------------------------


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order enumeration of all nodes (with repetitions)."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.args))


def positions(t: Term) -> Iterator[tuple[Position, Term]]:
    """All (position, subterm) pairs in lexicographic position order."""
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        for i in range(len(node.args), 0, -1):
            stack.append((pos + (i,), node.args[i - 1]))


def size(t: Term) -> int:
    return t.size


def depth(t: Term) -> int:
    return t.depth


def count_occurrences(t: Term, name: str) -> int:
    return sum(1 for node in subterms(t) if node.name == name)


def nu_size(t: Term) -> int:
    """Occurrences of variables and of function symbols whose arity is not 1."""
    return sum(1 for node in subterms(t) if node.arity != 1)


def arity_counts(t: Term) -> Counter:
    """Map arity -> number of nodes of that arity (variables have arity 0)."""
    return Counter(node.arity for node in subterms(t))


def variables(t: Term) -> Counter:
    """Multiset of variable occurrences."""
    return Counter(node.name for node in subterms(t) if node.is_var)


def symbols_of(t: Term) -> set[str]:
    return {node.name for node in subterms(t) if not node.is_var}


def apply_substitution(sigma: Substitution, t: Term) -> Term:
    if not sigma:
        return t
    memo: dict[Term, Term] = {}

    def go(u: Term) -> Term:
        hit = memo.get(u)
        if hit is not None:
            return hit
        if u.is_var:
            res = sigma.get(u.name, u)
        elif not u.args:
            res = u
        else:
            res = app(u.name, [go(c) for c in u.args])
        memo[u] = res
        return res

    return go(t)


def subterm_at(t: Term, p: Position) -> Term:
    node = t
    for i in p:
        if not 1 <= i <= len(node.args):
            raise InvalidPositionError(f"position {format_position(p)} is not valid in {t}")
        node = node.args[i - 1]
    return node


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    i = p[0]
    if not 1 <= i <= len(t.args):
        raise InvalidPositionError(f"position {format_position(p)} is not valid in {t}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return app(t.name, args)


def format_position(p: Position) -> str:
    return "[" + ",".join(map(str, p)) + "]"
