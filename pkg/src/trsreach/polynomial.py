"""Exact multivariate polynomials over the integers, kept in expanded form.

A monomial is a sorted tuple of ``(indeterminate, exponent)`` pairs; the
constant monomial is ``()``.  Interpretations only ever hold natural
coefficients, but differences such as ``p - q - 1`` need integers.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

Monomial = tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class Polynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            if c:
                key = tuple(sorted((v, e) for v, e in mono if e))
                clean[key] = clean.get(key, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    @staticmethod
    def _lift(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.const(other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._lift(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- inspection ---------------------------------------------------------

    @property
    def indeterminates(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    @property
    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    @property
    def constant_term(self) -> int:
        return self.terms.get((), 0)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def coefficients(self) -> Iterable[int]:
        return self.terms.values()

    # -- evaluation and composition ----------------------------------------

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        missing = self.indeterminates - set(assignment)
        if missing:
            raise KeyError(f"no value for indeterminate(s) {', '.join(sorted(missing))}")
        total = 0
        for m, c in self.terms.items():
            v = c
            for name, e in m:
                v *= assignment[name] ** e
            total += v
        return total

    def compose(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneously replace indeterminates by polynomials."""
        result = Polynomial()
        powers: dict[tuple[str, int], Polynomial] = {}
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for name, e in m:
                if name in mapping:
                    key = (name, e)
                    if key not in powers:
                        powers[key] = mapping[name] ** e
                    term = term * powers[key]
                else:
                    term = term * Polynomial({((name, e),): 1})
            result = result + term
        return result

    def shift(self, by: int = 1) -> "Polynomial":
        """Replace every indeterminate ``x`` by ``x + by``."""
        return self.compose({v: Polynomial.var(v) + by for v in self.indeterminates})

    # -- printing -------------------------------------------------------------

    def _sorted_terms(self):
        def key(item):
            m, _ = item
            return (-sum(e for _, e in m), m)

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_terms():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in m]
            mag = abs(c)
            if factors:
                body = "*".join(factors) if mag == 1 else "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


_MONO_FACTOR = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)(?:\s*\^\s*(\d+))?)\s*\Z")


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``3*x^2 + 21*x + 37`` style sums of monomials (no subtraction)."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    result = Polynomial()
    for raw_mono in text.split("+"):
        if not raw_mono.strip():
            raise ValueError(f"malformed polynomial {text!r}")
        coeff = 1
        mono: dict[str, int] = {}
        for factor in raw_mono.split("*"):
            m = _MONO_FACTOR.match(factor)
            if not m:
                raise ValueError(f"malformed monomial {raw_mono.strip()!r} in {text!r}")
            if m.group(1) is not None:
                coeff *= int(m.group(1))
            else:
                e = int(m.group(3)) if m.group(3) else 1
                mono[m.group(2)] = mono.get(m.group(2), 0) + e
        result = result + Polynomial({tuple(sorted(mono.items())): coeff})
    return result
