"""Unification, critical pairs and confluence of terminating systems."""

from __future__ import annotations

from dataclasses import dataclass, field

from trsreach.orders import OrderReport
from trsreach.reachability import CAP, NO, YES, Decision, joinable
from trsreach.rewrite import DEFAULT_CAPS, Caps, NormalizationCapError, normalize
from trsreach.terms import (
    Position,
    Rule,
    Term,
    Trs,
    app,
    apply_substitution,
    format_position,
    format_term,
    positions,
    replace_at,
    subterms,
    var,
)

CONFLUENT, NOT_CONFLUENT = "confluent", "not_confluent"


def unify(s: Term, t: Term) -> dict[str, Term] | None:
    """Most general unifier of s and t (idempotent), or None."""
    sigma: dict[str, Term] = {}

    def walk(u: Term) -> Term:
        while u.is_var and u.name in sigma:
            u = sigma[u.name]
        return u

    def occurs(x: str, u: Term) -> bool:
        stack = [u]
        while stack:
            n = walk(stack.pop())
            if n.is_var:
                if n.name == x:
                    return True
            else:
                stack.extend(n.args)
        return False

    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if a is b:
            continue
        if a.is_var:
            if occurs(a.name, b):
                return None
            sigma[a.name] = b
        elif b.is_var:
            if occurs(b.name, a):
                return None
            sigma[b.name] = a
        elif a.name != b.name or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))

    # resolve the triangular form into an idempotent substitution
    resolved: dict[str, Term] = {}

    def resolve(u: Term) -> Term:
        u = walk(u)
        if u.is_var:
            return u
        if not u.args:
            return u
        return app(u.name, [resolve(c) for c in u.args])

    for x in sigma:
        resolved[x] = resolve(var(x))
    return resolved


@dataclass(frozen=True)
class CriticalPair:
    peak: Term
    left: Term  # outer rule applied at the root
    right: Term  # inner rule applied at ``position``
    rule_outer: int  # 0-based
    rule_inner: int
    position: Position

    @property
    def trivial(self) -> bool:
        return self.left is self.right

    def __str__(self) -> str:
        return (
            f"{format_term(self.peak)} ⟶ {format_term(self.left)} | {format_term(self.right)}  "
            f"(rules {self.rule_outer + 1},{self.rule_inner + 1} @ {format_position(self.position)})"
        )


def _rename(rule: Rule, avoid: set[str]) -> tuple[Rule, dict[str, Term]]:
    ren: dict[str, Term] = {}
    for node in subterms(rule.lhs):
        if node.is_var and node.name not in ren:
            k = 1
            while f"{node.name}_{k}" in avoid:
                k += 1
            fresh = f"{node.name}_{k}"
            avoid.add(fresh)
            ren[node.name] = var(fresh)
    return Rule(apply_substitution(ren, rule.lhs), apply_substitution(ren, rule.rhs)), ren


def critical_pairs(trs: Trs) -> list[CriticalPair]:
    """Overlaps of every inner rule into every non-variable position of every
    outer lhs.  The outer rule is renamed apart; the root overlap of a rule
    with itself is skipped.  Order: outer rule, inner rule, position."""
    names = set(trs.signature.symbols) | set(trs.signature.variables)
    for r in trs.rules:
        names |= {n.name for side in (r.lhs, r.rhs) for n in subterms(side)}
    out = []
    for i, outer in enumerate(trs.rules):
        for j, inner in enumerate(trs.rules):
            avoid = set(names)
            renamed, _ = _rename(outer, avoid)
            for pos, sub in positions(renamed.lhs):
                if sub.is_var or (i == j and not pos):
                    continue
                sigma = unify(sub, inner.lhs)
                if sigma is None:
                    continue
                peak = apply_substitution(sigma, renamed.lhs)
                left = apply_substitution(sigma, renamed.rhs)
                right = replace_at(peak, pos, apply_substitution(sigma, inner.rhs))
                out.append(CriticalPair(peak, left, right, i, j, pos))
    return out


@dataclass
class ConfluenceResult:
    verdict: str
    witness: CriticalPair | None = None
    pairs: list[CriticalPair] = field(default_factory=list)
    detail: str = ""

    @property
    def confluent(self) -> bool:
        return self.verdict == CONFLUENT

    def format(self, style: str = "text") -> str:
        lines = [f"verdict: {self.verdict}", f"critical_pairs: {len(self.pairs)}"]
        if self.witness is not None:
            if style == "lines":
                lines.append(f"witness_left: {format_term(self.witness.left)}")
                lines.append(f"witness_right: {format_term(self.witness.right)}")
            lines.append(f"witness: {self.witness}")
        if self.detail:
            lines.append(f"detail: {self.detail}")
        return "\n".join(lines) + "\n"


def check_confluence(
    trs: Trs, caps: Caps = DEFAULT_CAPS, termination: OrderReport | None = None
) -> ConfluenceResult:
    """Critical-pair test, valid when the system terminates.

    With an oriented ``termination`` report, each pair is joined by comparing
    normal forms; otherwise the closures of both sides are intersected.
    """
    pairs = critical_pairs(trs)
    use_nf = termination is not None and termination.oriented
    capped: CriticalPair | None = None
    for cp in pairs:
        if cp.trivial:
            continue
        if use_nf:
            try:
                nl, _ = normalize(trs, cp.left, caps.max_steps)
                nr, _ = normalize(trs, cp.right, caps.max_steps)
            except NormalizationCapError:
                capped = capped or cp
                continue
            if nl is not nr:
                return ConfluenceResult(
                    NOT_CONFLUENT, cp, pairs,
                    f"distinct normal forms {format_term(nl)} and {format_term(nr)}",
                )
        else:
            d = joinable(trs, cp.left, cp.right, caps)
            if d.answer == NO:
                return ConfluenceResult(NOT_CONFLUENT, cp, pairs, "sides have no common reduct")
            if d.answer == CAP:
                capped = capped or cp
    if capped is not None:
        return ConfluenceResult(CAP, capped, pairs, "caps hit while joining a critical pair")
    return ConfluenceResult(CONFLUENT, None, pairs)


def joinable_pair(trs: Trs, cp: CriticalPair, caps: Caps = DEFAULT_CAPS) -> Decision:
    return joinable(trs, cp.left, cp.right, caps)


__all__ = [
    "CONFLUENT",
    "NOT_CONFLUENT",
    "CAP",
    "YES",
    "CriticalPair",
    "ConfluenceResult",
    "check_confluence",
    "critical_pairs",
    "joinable",
    "joinable_pair",
    "unify",
]
