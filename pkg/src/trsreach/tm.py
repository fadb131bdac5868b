"""Nondeterministic one-tape Turing machines: model, file format, simulator."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from trsreach.syntax import is_identifier


class TmError(ValueError):
    pass


@dataclass(frozen=True)
class PolySpec:
    """p(l) = c0 + c1*l + c2*l^2 + ..."""

    coefficients: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        if not self.coefficients or any(c < 0 for c in self.coefficients):
            raise TmError("polynomial coefficients must be natural numbers")

    def __call__(self, length: int) -> int:
        return sum(c * length**i for i, c in enumerate(self.coefficients))

    @classmethod
    def parse(cls, text: str) -> "PolySpec":
        try:
            return cls(tuple(int(tok) for tok in text.split()))
        except ValueError:
            raise TmError(f"malformed polynomial coefficients {text!r}") from None

    @classmethod
    def constant(cls, c: int) -> "PolySpec":
        return cls((c,))

    def __str__(self) -> str:
        return " ".join(map(str, self.coefficients))


@dataclass(frozen=True)
class Transition:
    state: str
    read: str
    target: str
    write: str
    move: str  # "R" or "L"

    def __str__(self) -> str:
        return f"{self.state} {self.read} -> {self.target} {self.write} {self.move}"


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    blank: str
    input_alphabet: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: str
    accept: str
    extra_tape: tuple[str, ...] = ()
    poly: PolySpec | None = None
    qpoly: PolySpec | None = None
    _tape: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        tape = [self.blank]
        for a in self.input_alphabet + self.extra_tape:
            if a not in tape:
                tape.append(a)
        for t in self.transitions:
            for a in (t.read, t.write):
                if a not in tape:
                    tape.append(a)
        object.__setattr__(self, "_tape", tuple(tape))
        self.validate()

    @property
    def tape_alphabet(self) -> tuple[str, ...]:
        return self._tape

    def validate(self) -> None:
        names = list(self.states) + list(self._tape)
        for n in names:
            if not is_identifier(n):
                raise TmError(f"{n!r} is not a valid symbol name")
        if len(set(self.states)) != len(self.states):
            raise TmError("duplicate state names")
        clash = set(self.states) & set(self._tape)
        if clash:
            raise TmError(f"names used both as state and tape symbol: {', '.join(sorted(clash))}")
        for q in (self.initial, self.accept):
            if q not in self.states:
                raise TmError(f"state {q} is not declared")
        if self.initial == self.accept:
            raise TmError("the initial state must differ from the accepting state")
        for t in self.transitions:
            for q in (t.state, t.target):
                if q not in self.states:
                    raise TmError(f"transition {t}: unknown state {q}")
            if t.move not in ("R", "L"):
                raise TmError(f"transition {t}: direction must be R or L")
            if t.state == self.accept:
                raise TmError(f"the accepting state {self.accept} must not have outgoing transitions")
        if len(set(self.transitions)) != len(self.transitions):
            raise TmError("duplicate transitions")

    def require_initial_unreachable(self) -> None:
        for t in self.transitions:
            if t.target == self.initial:
                raise TmError(f"transition {t} enters the initial state {self.initial}")

    def check_word(self, word: tuple[str, ...]) -> None:
        for a in word:
            if a not in self.input_alphabet:
                raise TmError(f"symbol {a!r} is not in the input alphabet")

    def moves(self, state: str, symbol: str) -> list[Transition]:
        return [t for t in self.transitions if t.state == state and t.read == symbol]

    def format(self) -> str:
        lines = [
            "states: " + " ".join(self.states),
            f"blank: {self.blank}",
            "input: " + " ".join(self.input_alphabet),
        ]
        extra = [a for a in self._tape if a != self.blank and a not in self.input_alphabet]
        if extra:
            lines.append("tape: " + " ".join(extra))
        lines += [f"init: {self.initial}", f"accept: {self.accept}"]
        lines += [f"trans: {t}" for t in self.transitions]
        if self.poly is not None:
            lines.append(f"poly: {self.poly}")
        if self.qpoly is not None:
            lines.append(f"qpoly: {self.qpoly}")
        return "\n".join(lines) + "\n"


def parse_tm(text: str) -> TuringMachine:
    fields: dict[str, str] = {}
    transitions: list[Transition] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise TmError(f"line {lineno}: expected 'key: value'")
        key, value = (s.strip() for s in line.split(":", 1))
        if key == "trans":
            parts = value.split()
            if len(parts) != 6 or parts[2] != "->":
                raise TmError(f"line {lineno}: expected 'trans: q a -> q2 a2 R|L'")
            move = parts[5].upper()
            transitions.append(Transition(parts[0], parts[1], parts[3], parts[4], move))
        elif key in ("states", "blank", "input", "init", "accept", "poly", "qpoly", "tape"):
            if key in fields:
                raise TmError(f"line {lineno}: '{key}' given twice")
            fields[key] = value
        else:
            raise TmError(f"line {lineno}: unknown key {key!r}")
    for key in ("states", "blank", "init", "accept"):
        if key not in fields:
            raise TmError(f"missing '{key}:' line")
    blank = fields["blank"]
    if len(blank.split()) != 1:
        raise TmError("exactly one blank symbol expected")
    return TuringMachine(
        states=tuple(fields["states"].split()),
        blank=blank,
        input_alphabet=tuple(fields.get("input", "").split()),
        transitions=tuple(transitions),
        initial=fields["init"],
        accept=fields["accept"],
        extra_tape=tuple(fields.get("tape", "").split()),
        poly=PolySpec.parse(fields["poly"]) if "poly" in fields else None,
        qpoly=PolySpec.parse(fields["qpoly"]) if "qpoly" in fields else None,
    )


def parse_word(M: TuringMachine, text: str) -> tuple[str, ...]:
    """Words are written letter by letter ("aab") or space separated when
    the input alphabet has multi-character symbols ("a1 a2")."""
    text = text.strip()
    if not text:
        return ()
    if " " in text or "," in text:
        word = tuple(text.replace(",", " ").split())
    elif all(len(a) == 1 for a in M.input_alphabet):
        word = tuple(text)
    else:
        word = (text,)
    M.check_word(word)
    return word


def simulate(
    M: TuringMachine,
    word: tuple[str, ...] | str,
    max_steps: int,
    window: tuple[int, int] | None = None,
) -> bool:
    """Does some run reach the accepting state within ``max_steps`` moves?

    ``window = (left, right)`` restricts the readable cells to positions
    ``-left .. right - 1`` (the input starts at 0).  A move to the right may
    leave the window, after which the machine can only accept if it is
    already in the accepting state; a move to the left of ``-left`` is not
    possible.
    """
    word = tuple(word)
    M.check_word(word)
    # tape: sorted (position, symbol) pairs for the non-blank cells
    tape = tuple((i, a) for i, a in enumerate(word) if a != M.blank)
    start = (M.initial, 0, tape)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        (state, head, tape), steps = frontier.popleft()
        if steps >= max_steps:
            continue
        if window and not -window[0] <= head < window[1]:
            continue
        cells = dict(tape)
        for t in M.moves(state, cells.get(head, M.blank)):
            nxt = head + (1 if t.move == "R" else -1)
            if window and nxt < -window[0]:
                continue
            if t.target == M.accept:
                return True
            new = dict(cells)
            if t.write == M.blank:
                new.pop(head, None)
            else:
                new[head] = t.write
            conf = (t.target, nxt, tuple(sorted(new.items())))
            if conf not in seen:
                seen.add(conf)
                frontier.append((conf, steps + 1))
    return False
