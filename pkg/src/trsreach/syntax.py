"""Reading and printing terms and TRS files.

File grammar (whitespace-insensitive)::

    file  := decl+
    decl  := "(VAR" ident* ")" | "(RULES" rule ("," rule)* ")"
    rule  := term "->" term
    term  := ident | ident "(" term ("," term)* ")"

Identifiers consist of ``[A-Za-z0-9_'+*#^]``.  Nested unary symbols may be
written as one word, e.g. ``gghhg(x)`` for ``g(g(h(h(g(x)))))``; the word is
split into symbols that are known from elsewhere.  Output is always fully
parenthesized.

Comments run from ``#`` to the end of the line.  Because ``#`` is also an
identifier character, a ``#`` only starts a comment when it is followed by
whitespace and the next thing on the line is not ``->``, ``,`` or ``)``.
A line holding a lone ``#`` is an empty comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from trsreach.terms import (
    ArityError,
    Rule,
    Signature,
    Term,
    TermError,
    Trs,
    app,
    format_term,
    var,
)

IDENT_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_'+*#^")
_IDENT_RE = re.compile(r"[A-Za-z0-9_'+*#^]+\Z")


def is_identifier(name: str) -> bool:
    return bool(_IDENT_RE.match(name))


class TrsSyntaxError(TermError):
    """Malformed input; carries 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


ParseError = TrsSyntaxError


class UnknownSymbolError(TermError):
    pass


@dataclass
class _Tok:
    kind: str  # ident ( ) , -> eof
    text: str
    line: int
    col: int


def _is_comment_start(text: str, i: int, line_start: int) -> bool:
    n = len(text)
    nxt = text[i + 1] if i + 1 < n else "\n"
    if nxt in IDENT_CHARS:
        return False
    if nxt in "\r\n":
        return text[line_start:i].strip() == ""
    if nxt not in " \t":
        return False
    j = i + 1
    while j < n and text[j] in " \t":
        j += 1
    rest = text[j : j + 2]
    return not (rest.startswith("->") or rest[:1] in (",", ")"))


def tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, line_start = 0, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i - line_start + 1
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
        elif ch in " \t\r":
            i += 1
        elif ch == "#" and _is_comment_start(text, i, line_start):
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "(),":
            toks.append(_Tok(ch, ch, line, col))
            i += 1
        elif ch == "-" and text.startswith("->", i):
            toks.append(_Tok("->", "->", line, col))
            i += 2
        elif ch in IDENT_CHARS:
            j = i
            while j < n and text[j] in IDENT_CHARS:
                j += 1
            toks.append(_Tok("ident", text[i:j], line, col))
            i = j
        else:
            raise TrsSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, i - line_start + 1))
    return toks


@dataclass
class _Raw:
    """A term as written, before symbols and variables are told apart."""

    name: str
    args: list["_Raw"] | None  # None: written without parentheses
    line: int
    col: int

    @property
    def nargs(self) -> int:
        return len(self.args) if self.args else 0

    def walk(self):
        yield self
        for a in self.args or ():
            yield from a.walk()


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, what: str | None = None) -> _Tok:
        tok = self.cur
        if tok.kind != kind:
            expected = what or (kind if kind != "eof" else "end of input")
            found = tok.text or "end of input"
            raise TrsSyntaxError(f"expected {expected}, found {found!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def term(self) -> _Raw:
        tok = self.take("ident", "a symbol or variable")
        if self.cur.kind != "(":
            return _Raw(tok.text, None, tok.line, tok.col)
        self.take("(")
        args: list[_Raw] = []
        if self.cur.kind == ")":
            self.take(")")
            return _Raw(tok.text, [], tok.line, tok.col)
        args.append(self.term())
        while self.cur.kind == ",":
            self.take(",")
            args.append(self.term())
        self.take(")", "',' or ')'")
        return _Raw(tok.text, args, tok.line, tok.col)

    def file(self) -> tuple[list[str], list[tuple[_Raw, _Raw, _Tok]]]:
        variables: list[str] = []
        rules: list[tuple[_Raw, _Raw, _Tok]] = []
        if self.cur.kind == "eof":
            raise TrsSyntaxError("empty TRS file", self.cur.line, self.cur.col)
        while self.cur.kind != "eof":
            self.take("(", "'(VAR' or '(RULES'")
            head = self.take("ident", "VAR or RULES")
            if head.text == "VAR":
                while self.cur.kind == "ident":
                    variables.append(self.take("ident").text)
                self.take(")", "a variable name or ')'")
            elif head.text == "RULES":
                while self.cur.kind != ")":
                    start = self.cur
                    lhs = self.term()
                    self.take("->", "'->'")
                    rhs = self.term()
                    rules.append((lhs, rhs, start))
                    if self.cur.kind != ",":
                        break
                    self.take(",")
                self.take(")", "',' or ')'")
            else:
                raise TrsSyntaxError(f"unknown declaration {head.text!r}", head.line, head.col)
        return variables, rules


def _segment(word: str, unary: frozenset[str], last_ok) -> list[str] | None:
    """Split ``word`` into >= 2 pieces: unary symbols followed by a piece
    accepted by ``last_ok``.  Longer pieces are tried first."""

    @lru_cache(maxsize=None)
    def go(i: int, count: int) -> tuple[str, ...] | None:
        rest = word[i:]
        if count >= 1 and last_ok(rest):
            return (rest,)
        for j in range(len(word) - 1, i, -1):
            piece = word[i:j]
            if piece in unary:
                tail = go(j, count + 1)
                if tail is not None:
                    return (piece,) + tail
        return None

    found = go(0, 0)
    return list(found) if found else None


def _build(raw: _Raw, resolve) -> Term:
    names, arity = resolve(raw)
    args = [_build(a, resolve) for a in raw.args or ()]
    if names is None:
        return var(raw.name)
    t = app(names[-1], args)
    for n in reversed(names[:-1]):
        t = app(n, (t,))
    return t


def parse_trs(text: str) -> Trs:
    """Parse a TRS file; the signature is inferred, arities from first use."""
    variables, raw_rules = _Parser(text).file()
    varset = frozenset(variables)

    occurrences: dict[str, list[_Raw]] = {}
    for lhs, rhs, _ in raw_rules:
        for side in (lhs, rhs):
            for node in side.walk():
                if node.name in varset:
                    if node.args is not None:
                        raise TrsSyntaxError(f"variable {node.name} cannot take arguments", node.line, node.col)
                    continue
                occurrences.setdefault(node.name, []).append(node)

    # settle short names first so longer words can be split into them
    arities: dict[str, int] = {}
    chains: dict[tuple[str, int], list[str]] = {}
    for name in sorted(occurrences, key=len):
        unary = frozenset(n for n, a in arities.items() if a == 1)
        split = {}
        for node in occurrences[name]:
            k = node.nargs
            if (name, k) not in split:
                split[(name, k)] = _segment(name, unary, lambda rest, k=k: arities.get(rest) == k)
        if all(s is not None for s in split.values()):
            chains.update(split)
            continue
        first = occurrences[name][0]
        arities[name] = first.nargs
        for node in occurrences[name]:
            if node.nargs != first.nargs:
                raise ArityError(
                    f"line {node.line}, column {node.col}: symbol {name} used with {node.nargs} "
                    f"arguments but earlier with {first.nargs}"
                )

    def resolve(node: _Raw):
        if node.name in varset:
            return None, 0
        if node.name in arities:
            return [node.name], arities[node.name]
        return chains[(node.name, node.nargs)], node.nargs

    # symbols listed in order of first use in the file
    order: dict[str, int] = {}
    rules = []
    for lhs_raw, rhs_raw, start in raw_rules:
        lhs = _build(lhs_raw, resolve)
        rhs = _build(rhs_raw, resolve)
        rule_text = f"{format_term(lhs)} -> {format_term(rhs)}"
        try:
            rules.append(Rule(lhs, rhs))
        except TermError as exc:
            exc.args = (f"line {start.line}: rule {rule_text}: {exc.args[0]}",)
            raise
        for t in (lhs, rhs):
            for node in _preorder(t):
                if not node.is_var:
                    order.setdefault(node.name, node.arity)
    sig = Signature(order, varset)
    return Trs(sig, tuple(rules))


def _preorder(t: Term):
    stack = [t]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.args))


def parse_term(text: str, sig: Signature, extend: bool = False) -> Term:
    """Parse a single term against ``sig``.

    Names in ``sig.variables`` are variables.  With ``extend`` set, unknown
    names become fresh function symbols (arity from first use) instead of
    raising :class:`UnknownSymbolError`.
    """
    p = _Parser(text)
    raw = p.term()
    p.take("eof")
    fresh: dict[str, int] = {}
    unary = frozenset(n for n, a in sig.symbols.items() if a == 1)

    def known(name: str) -> int | None:
        a = sig.symbols.get(name)
        return fresh.get(name) if a is None else a

    def resolve(node: _Raw):
        k = node.nargs
        if node.name in sig.variables:
            if node.args is not None:
                raise TrsSyntaxError(f"variable {node.name} cannot take arguments", node.line, node.col)
            return None, 0
        a = known(node.name)
        if a is not None:
            if a != k:
                raise ArityError(
                    f"line {node.line}, column {node.col}: symbol {node.name} has arity {a} "
                    f"but is given {k} arguments"
                )
            return [node.name], k
        pieces = _segment(node.name, unary, lambda rest: known(rest) == k)
        if pieces is not None:
            return pieces, k
        if extend:
            fresh[node.name] = k
            return [node.name], k
        raise UnknownSymbolError(f"line {node.line}, column {node.col}: unknown symbol {node.name}")

    return _build(raw, resolve)


def format_trs(trs: Trs) -> str:
    lines = []
    used_vars = sorted(
        {n.name for r in trs.rules for side in (r.lhs, r.rhs) for n in _preorder(side) if n.is_var}
        | set(trs.signature.variables)
    )
    lines.append("(VAR " + " ".join(used_vars) + ")" if used_vars else "(VAR)")
    lines.append("(RULES")
    body = [f"  {format_term(r.lhs)} -> {format_term(r.rhs)}" for r in trs.rules]
    lines.append(",\n".join(body))
    lines.append(")")
    return "\n".join(lines) + "\n"
