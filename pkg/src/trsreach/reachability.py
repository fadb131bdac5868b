"""Decision procedures for small, large, term and symbol reachability.

All searches are exhaustive up to the caps: ``no`` is only answered when the
reachable set was closed, otherwise the answer is ``cap_exceeded``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from trsreach.orders import OrderReport, check_length_reducing
from trsreach.rewrite import (
    DEFAULT_CAPS,
    Caps,
    NormalizationCapError,
    RewriteStep,
    explore,
    format_trace,
    normalize,
    search,
)
from trsreach.syntax import UnknownSymbolError
from trsreach.terms import Term, TermError, Trs, format_term, subterms, symbols_of

YES, NO, CAP = "yes", "no", "cap_exceeded"


class PreconditionError(TermError):
    pass


class CycleError(TermError):
    """A rewrite cycle was found, so the system does not terminate on this input."""

    def __init__(self, message: str, cycle: list[Term]):
        super().__init__(message)
        self.cycle = cycle


class CapExceededError(TermError):
    pass


@dataclass
class Decision:
    answer: str
    witness: list[RewriteStep] | None = None
    terms: int = 0
    steps: int = 0
    final: Term | None = None
    other_witness: list[RewriteStep] | None = None  # joinability: trace from the second term

    @property
    def explored(self) -> dict[str, int]:
        return {"terms": self.terms, "steps": self.steps}

    @property
    def yes(self) -> bool:
        return self.answer == YES

    def format(self, style: str = "text") -> str:
        if style == "lines":
            lines = [
                f"answer: {self.answer}",
                f"explored_terms: {self.terms}",
                f"explored_steps: {self.steps}",
            ]
            if self.witness is not None:
                lines.append(f"witness_length: {len(self.witness)}")
            if self.final is not None:
                lines.append(f"final: {format_term(self.final)}")
            for n, step in enumerate(self.witness or (), 1):
                lines.append(f"step: {step.format(n)}")
            for n, step in enumerate(self.other_witness or (), 1):
                lines.append(f"step2: {step.format(n)}")
            return "\n".join(lines) + "\n"
        lines = [f"answer: {self.answer}", f"explored: {self.terms} terms / {self.steps} steps"]
        if self.witness:
            lines.append(format_trace(self.witness))
        if self.other_witness:
            lines.append("--")
            lines.append(format_trace(self.other_witness))
        return "\n".join(lines) + "\n"


def _decide(trs: Trs, s: Term, pred: Callable[[Term], bool], caps: Caps, strategy: str) -> Decision:
    res = search(trs, s, caps, goal=pred, strategy=strategy)
    if res.found is not None:
        return Decision(YES, res.trace_to(res.found), res.terms, res.steps, res.found)
    return Decision(NO if res.exhausted else CAP, None, res.terms, res.steps)


def small_term_reachability(
    trs: Trs, s: Term, n: int, caps: Caps = DEFAULT_CAPS, strategy: str = "bfs"
) -> Decision:
    """Is some term of size <= n reachable from s?"""
    if n < 1:
        raise ValueError("the size bound n must be at least 1")
    return _decide(trs, s, lambda t: t.size <= n, caps, strategy)


def small_term_fast_confluent(
    trs: Trs,
    s: Term,
    n: int,
    lenred: OrderReport | None = None,
    confluent: object = None,
) -> Decision:
    """Polynomial-time answer for confluent length-reducing systems.

    ``lenred`` must be an oriented length-reducing report and ``confluent``
    a confluence verdict (or ``True``) vouching for the system.
    """
    if lenred is None or lenred.kind != "lenred" or not lenred.oriented:
        raise PreconditionError("missing certificate: the system must be shown length-reducing")
    if not _is_confluent_certificate(confluent):
        raise PreconditionError("missing certificate: the system must be shown confluent")
    if n < 1:
        raise ValueError("the size bound n must be at least 1")
    try:
        nf, trace = normalize(trs, s, max(s.size, 1))
    except NormalizationCapError as exc:
        raise PreconditionError(
            f"{format_term(s)} is not normalized within {s.size} steps; the system is not length-reducing"
        ) from exc
    answer = YES if nf.size <= n else NO
    return Decision(answer, trace if answer == YES else None, len(trace) + 1, len(trace), nf)


def _is_confluent_certificate(c: object) -> bool:
    if c is True:
        return True
    verdict = getattr(c, "verdict", None)
    return verdict == "confluent"


@dataclass
class MinSize:
    size: int
    witness: list[RewriteStep]
    term: Term
    exact: bool
    terms: int = 0
    steps: int = 0

    def format(self, style: str = "text") -> str:
        if style == "lines":
            lines = [
                f"min_size: {self.size}",
                f"exact: {'yes' if self.exact else 'no'}",
                f"term: {format_term(self.term)}",
                f"explored_terms: {self.terms}",
                f"explored_steps: {self.steps}",
            ]
            lines += [f"step: {st.format(n)}" for n, st in enumerate(self.witness, 1)]
            return "\n".join(lines) + "\n"
        head = f"min_size: {self.size}" + ("" if self.exact else "  (lower confidence: caps hit, best so far)")
        lines = [head, f"term: {format_term(self.term)}", f"explored: {self.terms} terms / {self.steps} steps"]
        if self.witness:
            lines.append(format_trace(self.witness))
        return "\n".join(lines) + "\n"


def min_reachable_size(trs: Trs, s: Term, caps: Caps = DEFAULT_CAPS) -> MinSize:
    """Smallest reachable term; ``exact`` is false when a cap cut the search."""
    res = explore(trs, s, caps, goal=lambda t: t.size == 1)
    if res.found is not None:
        return MinSize(1, res.trace_to(res.found), res.found, True, res.terms, res.steps)
    best = s
    for t in res.parent:
        if t.size < best.size:
            best = t
    return MinSize(best.size, res.trace_to(best), best, res.exhausted, res.terms, res.steps)


def large_term_reachability(
    trs: Trs,
    s: Term,
    n: int,
    caps: Caps = DEFAULT_CAPS,
    shortcut: bool = True,
    strategy: str = "bfs",
) -> Decision:
    """Is some term of size >= n reachable from s?

    For length-reducing systems the start term is the largest reachable term,
    so the answer is read off directly unless ``shortcut`` is disabled.
    """
    if n < 1:
        raise ValueError("the size bound n must be at least 1")
    if shortcut and check_length_reducing(trs).oriented:
        if s.size >= n:
            return Decision(YES, [], 1, 0, s)
        return Decision(NO, None, 1, 0)
    return _decide(trs, s, lambda t: t.size >= n, caps, strategy)


def term_reachability(
    trs: Trs, s: Term, t: Term, caps: Caps = DEFAULT_CAPS, strategy: str = "bfs"
) -> Decision:
    """Does s rewrite to t in zero or more steps?"""
    return _decide(trs, s, lambda u: u is t, caps, strategy)


def symbol_reachability(
    trs: Trs, s: Term, f: str, caps: Caps = DEFAULT_CAPS, strategy: str = "bfs"
) -> Decision:
    """Is some term containing the symbol f reachable from s?"""
    if f not in trs.signature.symbols and f not in symbols_of(s):
        raise UnknownSymbolError(f"symbol {f} occurs neither in the system nor in the start term")
    memo: dict[Term, bool] = {}

    def contains(t: Term) -> bool:
        # children are usually shared with earlier terms, so memoize per node
        hit = memo.get(t)
        if hit is None:
            hit = t.name == f and not t.is_var or any(contains(a) for a in t.args)
            memo[t] = hit
        return hit

    def pred(t: Term) -> bool:
        if t.depth > 500:
            return any(node.name == f and not node.is_var for node in subterms(t))
        return contains(t)

    return _decide(trs, s, pred, caps, strategy)


def derivation_height(trs: Trs, s: Term, caps: Caps = DEFAULT_CAPS) -> int:
    """Length of the longest rewrite sequence issuing from s."""
    res = explore(trs, s, caps, record_edges=True)
    if not res.exhausted:
        raise CapExceededError(
            f"reachable set of {format_term(s)} not closed within caps "
            f"({res.terms} terms, {res.steps} steps)"
        )
    edges = res.edges
    height: dict[Term, int] = {}
    on_path: set[Term] = set()
    stack: list[tuple[Term, int]] = [(s, 0)]
    path: list[Term] = []
    while stack:
        t, i = stack.pop()
        if i == 0:
            if t in height:
                continue
            on_path.add(t)
            path.append(t)
        succ = edges.get(t, [])
        if i < len(succ):
            stack.append((t, i + 1))
            nxt = succ[i].result
            if nxt in on_path:
                cycle = path[path.index(nxt):] + [nxt]
                raise CycleError(f"rewrite cycle through {format_term(nxt)}", cycle)
            if nxt not in height:
                stack.append((nxt, 0))
            continue
        height[t] = max((height[e.result] + 1 for e in succ), default=0)
        on_path.discard(t)
        path.pop()
    return height[s]


def joinable(trs: Trs, s: Term, t: Term, caps: Caps = DEFAULT_CAPS) -> Decision:
    """Do s and t have a common reduct?  Both traces are returned on yes."""
    left = explore(trs, s, caps)
    right = explore(trs, t, caps, goal=lambda u: u in left.parent)
    terms = left.terms + right.terms
    steps = left.steps + right.steps
    if right.found is not None:
        meet = right.found
        return Decision(YES, left.trace_to(meet), terms, steps, meet, right.trace_to(meet))
    if left.exhausted and right.exhausted:
        return Decision(NO, None, terms, steps)
    return Decision(CAP, None, terms, steps)


def replay_witness(trs: Trs, s: Term, witness: list[RewriteStep]) -> Term:
    """Check a witness step by step against the engine and return its end."""
    from trsreach.rewrite import successors

    cur = s
    for n, step in enumerate(witness, 1):
        if step.source is not cur:
            raise TermError(f"step {n} starts at {format_term(step.source)}, expected {format_term(cur)}")
        if not any(
            st.rule_index == step.rule_index and st.position == step.position and st.result is step.result
            for st in successors(trs, cur)
        ):
            raise TermError(f"step {n} is not a rewrite step of the system")
        cur = step.result
    return cur
