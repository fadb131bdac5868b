"""Matching, one-step rewriting, normalization and reachable-set search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from trsreach.terms import (
    Position,
    Rule,
    Term,
    TermError,
    Trs,
    app,
    apply_substitution,
    format_position,
    format_term,
    replace_at,
)


@dataclass(frozen=True)
class Caps:
    """Guardrails for searches: explored terms, steps along a path, term size."""

    max_terms: int = 1_000_000
    max_steps: int = 1_000_000
    max_size: int = 100_000

    def __post_init__(self):
        for name in ("max_terms", "max_steps", "max_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class RewriteStep:
    rule_index: int  # 0-based index into Trs.rules
    position: Position
    substitution: Mapping[str, Term]
    source: Term
    result: Term

    def format(self, n: int | None = None) -> str:
        head = f"{n}: " if n is not None else ""
        return (
            f"{head}{format_term(self.source)} -[rule {self.rule_index + 1} @ "
            f"{format_position(self.position)}]-> {format_term(self.result)}"
        )


def match(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """The substitution ``s`` with ``s(pattern) == subject``, or None."""
    sigma: dict[str, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if p.is_var:
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound is not s:
                return None
        elif s.is_var or p.name != s.name or len(p.args) != len(s.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return sigma


class Rewriter:
    """One-step rewriting for a fixed TRS.

    Root matches and a has-redex flag are memoized per (interned) subterm, so
    subterms shared between the terms of a search are matched only once.
    """

    def __init__(self, trs: Trs):
        self.trs = trs
        self._by_head: dict[tuple[str, int], list[tuple[int, Rule]]] = {}
        for i, rule in enumerate(trs.rules):
            self._by_head.setdefault((rule.lhs.name, rule.lhs.arity), []).append((i, rule))
        self._root: dict[Term, tuple] = {}
        self._reducible: dict[Term, bool] = {}

    def clear(self) -> None:
        self._root.clear()
        self._reducible.clear()

    def root_steps(self, t: Term) -> tuple:
        """(rule index, substitution, contractum) for every rule matching at the root."""
        hit = self._root.get(t)
        if hit is None:
            out = []
            if not t.is_var:
                for idx, rule in self._by_head.get((t.name, len(t.args)), ()):
                    sigma = match(rule.lhs, t)
                    if sigma is not None:
                        out.append((idx, sigma, apply_substitution(sigma, rule.rhs)))
            hit = tuple(out)
            self._root[t] = hit
        return hit

    def reducible(self, t: Term) -> bool:
        memo = self._reducible
        if t in memo:
            return memo[t]
        # iterative post-order so that deep unary chains do not recurse
        stack = [(t, False)]
        while stack:
            node, done = stack.pop()
            if node in memo:
                continue
            if done:
                memo[node] = bool(self.root_steps(node)) or any(memo[a] for a in node.args)
                continue
            stack.append((node, True))
            stack.extend((a, False) for a in node.args if a not in memo)
        return memo[t]

    def local_steps(self, t: Term) -> tuple:
        """(position, rule index, substitution, result) for every redex of t,
        ordered by position (lexicographic) and then rule index."""
        out = []
        if not self.reducible(t):
            return ()
        # pre-order walk; link is None or (ancestor, child index, parent link)
        stack: list[tuple[Term, tuple | None]] = [(t, None)]
        while stack:
            node, link = stack.pop()
            matches = self.root_steps(node)
            if matches:
                pos: list[int] = []
                up = link
                while up is not None:
                    pos.append(up[1] + 1)
                    up = up[2]
                pos.reverse()
                for idx, sigma, res in matches:
                    up = link
                    while up is not None:
                        anc, i = up[0], up[1]
                        res = app(anc.name, anc.args[:i] + (res,) + anc.args[i + 1 :])
                        up = up[2]
                    out.append((tuple(pos), idx, sigma, res))
            for i in range(len(node.args) - 1, -1, -1):
                child = node.args[i]
                if self.reducible(child):
                    stack.append((child, (node, i, link)))
        return tuple(out)

    def successors(self, t: Term) -> list[RewriteStep]:
        return [RewriteStep(idx, pos, sigma, t, res) for pos, idx, sigma, res in self.local_steps(t)]

    def successor_terms(self, t: Term) -> Iterable[Term]:
        return (step[3] for step in self.local_steps(t))

    def is_irreducible(self, t: Term) -> bool:
        return not self.reducible(t)


def rewriter(trs: Trs) -> Rewriter:
    return _engine_of(trs)


def _engine_of(trs: Trs) -> Rewriter:
    eng = trs.__dict__.get("_rewriter")
    if eng is None:
        eng = Rewriter(trs)
        trs.__dict__["_rewriter"] = eng
    return eng


def successors(trs: Trs, s: Term) -> list[RewriteStep]:
    return _engine_of(trs).successors(s)


def is_irreducible(trs: Trs, s: Term) -> bool:
    return _engine_of(trs).is_irreducible(s)


def replay(trs: Trs, step: RewriteStep) -> Term:
    """Recompute a step's result from its rule, position and substitution."""
    rule = trs.rules[step.rule_index]
    return replace_at(step.source, step.position, apply_substitution(step.substitution, rule.rhs))


def format_trace(trace: Iterable[RewriteStep]) -> str:
    return "\n".join(step.format(n) for n, step in enumerate(trace, 1))


class NormalizationCapError(TermError):
    def __init__(self, message: str, trace: list[RewriteStep]):
        super().__init__(message)
        self.trace = trace


def normalize(trs: Trs, s: Term, step_cap: int = 1_000_000) -> tuple[Term, list[RewriteStep]]:
    """Follow the first successor until an irreducible term is reached."""
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    eng = _engine_of(trs)
    trace: list[RewriteStep] = []
    t = s
    while True:
        steps = eng.local_steps(t)
        if not steps:
            return t, trace
        if len(trace) >= step_cap:
            raise NormalizationCapError(
                f"no normal form within {step_cap} steps from {format_term(s)}", trace
            )
        pos, idx, sigma, res = steps[0]
        trace.append(RewriteStep(idx, pos, sigma, t, res))
        t = res


# -- breadth-first exploration ------------------------------------------------


@dataclass
class Search:
    """Outcome of a breadth-first exploration from ``root``.

    ``parent`` maps every discovered term except the root to the step that
    first reached it, so witnesses are shortest by number of steps.
    """

    root: Term
    parent: dict[Term, RewriteStep | None]
    depth: dict[Term, int]
    exhausted: bool
    steps: int  # successor steps generated
    found: Term | None = None
    edges: dict[Term, list[RewriteStep]] | None = None

    @property
    def terms(self) -> int:
        return len(self.parent)

    def trace_to(self, t: Term) -> list[RewriteStep]:
        trace = []
        step = self.parent[t]
        while step is not None:
            trace.append(step)
            step = self.parent[step.source]
        trace.reverse()
        return trace


def explore(
    trs: Trs,
    s: Term,
    caps: Caps = DEFAULT_CAPS,
    goal: Callable[[Term], bool] | None = None,
    record_edges: bool = False,
) -> Search:
    """BFS closure of ``{s}`` under one-step rewriting.

    Stops at the first discovered term satisfying ``goal``.  Terms larger than
    ``caps.max_size`` and terms at depth ``caps.max_steps`` are not expanded,
    and discovery stops after ``caps.max_terms`` terms; any of these clears
    ``exhausted``.
    """
    eng = _engine_of(trs)
    parent: dict[Term, RewriteStep | None] = {s: None}
    depth: dict[Term, int] = {s: 0}
    edges: dict[Term, list[RewriteStep]] | None = {} if record_edges else None
    search = Search(s, parent, depth, True, 0, None, edges)
    if goal is not None and goal(s):
        search.found = s
        return search
    queue = deque([s])
    exhausted = True
    n_steps = 0
    max_terms, max_steps, max_size = caps.max_terms, caps.max_steps, caps.max_size
    while queue:
        t = queue.popleft()
        d = depth[t]
        if t.size > max_size or d >= max_steps:
            if eng.reducible(t):
                exhausted = False
            continue
        local = eng.local_steps(t)
        if record_edges:
            edges[t] = [RewriteStep(idx, pos, sigma, t, res) for pos, idx, sigma, res in local]
        for pos, idx, sigma, res in local:
            n_steps += 1
            if res in parent:
                continue
            if len(parent) >= max_terms:
                if record_edges:
                    edges[t] = [e for e in edges[t] if e.result in parent]
                search.exhausted = False
                search.steps = n_steps
                return search
            parent[res] = RewriteStep(idx, pos, sigma, t, res)
            depth[res] = d + 1
            if goal is not None and goal(res):
                search.found = res
                search.exhausted = False
                search.steps = n_steps
                return search
            queue.append(res)
    search.exhausted = exhausted
    search.steps = n_steps
    return search


def explore_dfs(
    trs: Trs,
    s: Term,
    caps: Caps = DEFAULT_CAPS,
    goal: Callable[[Term], bool] | None = None,
) -> Search:
    """Depth-first variant of :func:`explore`.

    Children are visited lazily in successor order, so the first path tried
    is the one :func:`normalize` follows.  Witnesses are valid but need not be
    shortest.  Caps are applied as in :func:`explore`; a term first met on a
    path that was cut by ``max_steps`` is not revisited later, which is why any
    pruning clears ``exhausted``.
    """
    eng = _engine_of(trs)
    parent: dict[Term, RewriteStep | None] = {s: None}
    depth: dict[Term, int] = {s: 0}
    search = Search(s, parent, depth, True, 0, None, None)
    if goal is not None and goal(s):
        search.found = s
        return search
    max_terms, max_steps, max_size = caps.max_terms, caps.max_steps, caps.max_size
    exhausted = True
    n_steps = 0
    stack: list[list] = []

    def push(t: Term, d: int) -> None:
        nonlocal exhausted
        if not eng.reducible(t):
            return
        if t.size > max_size or d >= max_steps:
            exhausted = False
            return
        stack.append([t, eng.local_steps(t), 0, d])

    push(s, 0)
    while stack:
        frame = stack[-1]
        t, local, i, d = frame
        if i >= len(local):
            stack.pop()
            continue
        frame[2] = i + 1
        pos, idx, sigma, res = local[i]
        n_steps += 1
        if res in parent:
            continue
        if len(parent) >= max_terms:
            search.exhausted = False
            search.steps = n_steps
            return search
        parent[res] = RewriteStep(idx, pos, sigma, t, res)
        depth[res] = d + 1
        if goal is not None and goal(res):
            search.found = res
            search.exhausted = False
            search.steps = n_steps
            return search
        push(res, d + 1)
    search.exhausted = exhausted
    search.steps = n_steps
    return search


STRATEGIES = {"bfs": explore, "dfs": explore_dfs}


def search(trs: Trs, s: Term, caps: Caps = DEFAULT_CAPS, goal=None, strategy: str = "bfs") -> Search:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown search strategy {strategy!r} (expected bfs or dfs)") from None
    return fn(trs, s, caps, goal)


@dataclass
class ReachGraph:
    root: Term
    nodes: dict[Term, int]  # term -> BFS depth, in discovery order
    edges: dict[Term, list[RewriteStep]]
    exhausted: bool
    steps: int = 0
    _search: Search | None = field(default=None, repr=False)

    def __contains__(self, t: Term) -> bool:
        return t in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def trace_to(self, t: Term) -> list[RewriteStep]:
        return self._search.trace_to(t)


def reachable_set(trs: Trs, s: Term, caps: Caps = DEFAULT_CAPS) -> ReachGraph:
    search = explore(trs, s, caps, record_edges=True)
    return ReachGraph(s, search.depth, search.edges, search.exhausted, search.steps, search)
