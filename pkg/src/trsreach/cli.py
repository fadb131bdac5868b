"""Command-line front end.

Exit codes: 0 yes / oriented / confluent, 1 no, 2 caps exceeded,
3 usage error, 4 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from trsreach import compiler
from trsreach.confluence import check_confluence
from trsreach.orders import (
    OrderError,
    check_kbo,
    check_length_reducing,
    check_poly_order,
    format_interpretation,
    format_kbo,
    parse_interpretation,
    parse_kbo,
)
from trsreach.reachability import (
    CAP,
    NO,
    YES,
    CapExceededError,
    CycleError,
    PreconditionError,
    derivation_height,
    large_term_reachability,
    min_reachable_size,
    small_term_fast_confluent,
    small_term_reachability,
    symbol_reachability,
    term_reachability,
)
from trsreach.rewrite import STRATEGIES, Caps, NormalizationCapError, normalize
from trsreach.syntax import format_trs, parse_term, parse_trs
from trsreach.terms import TermError, format_term
from trsreach.tm import PolySpec, TmError, parse_tm, parse_word

EXIT = {YES: 0, NO: 1, CAP: 2}
USAGE, BAD_INPUT = 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise TermError(f"cannot read {path}: {exc.strerror}") from None


def _load_trs(args):
    return parse_trs(_read(args.trs))


def _caps(args) -> Caps:
    return Caps(args.max_terms, args.max_steps, args.max_size)


def _term(trs, text: str):
    # constants outside the rules are inert but legal in start terms
    return parse_term(text, trs.signature, extend=True)


def _start(args):
    text = args.term or getattr(args, "source", None)
    if text is None:
        raise UsageError("a start term is required (--term or --from)")
    if text.startswith("@"):
        text = _read(text[1:]).strip()
    return text


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands ------------------------------------------------------------------


def cmd_parse(args) -> int:
    trs = _load_trs(args)
    _emit(format_trs(trs))
    sig = ", ".join(f"{n}/{a}" for n, a in trs.signature.symbols.items())
    _emit(f"signature: {sig}")
    if args.term:
        _emit(f"term: {format_term(_term(trs, _start(args)))}")
    return 0


def cmd_reach(args) -> int:
    trs = _load_trs(args)
    s = _term(trs, _start(args))
    caps = _caps(args)
    if args.kind in ("small", "large") and args.n is None:
        raise UsageError(f"reach {args.kind} needs --n")
    if args.kind == "small":
        if args.fast:
            lenred = check_length_reducing(trs)
            conf = check_confluence(trs, caps, termination=lenred)
            d = small_term_fast_confluent(trs, s, args.n, lenred=lenred, confluent=conf)
        else:
            d = small_term_reachability(trs, s, args.n, caps, args.strategy)
    elif args.kind == "large":
        d = large_term_reachability(trs, s, args.n, caps, not args.no_shortcut, args.strategy)
    elif args.kind == "term":
        if args.to is None:
            raise UsageError("reach term needs --to")
        t = _term(trs, args.to)
        d = term_reachability(trs, s, t, caps, args.strategy)
    else:
        if args.symbol is None:
            raise UsageError("reach symbol needs --symbol")
        d = symbol_reachability(trs, s, args.symbol, caps, args.strategy)
    _emit(d.format(args.format))
    return EXIT[d.answer]


def cmd_check(args) -> int:
    trs = _load_trs(args)
    if args.kind == "lenred":
        report = check_length_reducing(trs)
    elif args.kind == "poly":
        if not args.interp:
            raise UsageError("check poly needs --interp")
        report = check_poly_order(trs, parse_interpretation(_read(args.interp)))
    elif args.kind == "kbo":
        if not args.kbo:
            raise UsageError("check kbo needs --kbo")
        report = check_kbo(trs, parse_kbo(_read(args.kbo)))
    else:
        if args.interp:
            cert = check_poly_order(trs, parse_interpretation(_read(args.interp)))
        elif args.kbo:
            cert = check_kbo(trs, parse_kbo(_read(args.kbo)))
        else:
            cert = check_length_reducing(trs)
        res = check_confluence(trs, _caps(args), termination=cert if cert.oriented else None)
        _emit(f"termination: {cert.kind} {'oriented' if cert.oriented else 'not shown'}")
        _emit(res.format(args.format))
        if args.verbose:
            for cp in res.pairs:
                _emit(f"pair: {cp}")
        return EXIT[YES] if res.confluent else EXIT[CAP] if res.verdict == CAP else EXIT[NO]
    _emit(report.format(args.format))
    return 0 if report.oriented else 1


def cmd_compile(args) -> int:
    M = parse_tm(_read(args.tm))
    word = parse_word(M, args.word or "")
    p = PolySpec.parse(args.p) if args.p else None
    q = PolySpec.parse(args.q) if args.q else None
    c = compiler.build(args.construction, M, p, q, confluent=args.confluent)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    name = args.name or args.construction
    start = c.start(word)
    written = {f"{name}.trs": format_trs(c.trs), f"{name}.start": format_term(start) + "\n"}
    for suffix, text in c.files().items():
        written[f"{name}.{suffix}"] = text
    for fname, text in written.items():
        (out / fname).write_text(text)
    kind = "large" if c.large else "small"
    _emit(f"construction: {args.construction}{' (confluent)' if args.confluent else ''}")
    _emit(f"rules: {len(c.trs.rules)}")
    _emit(f"start_size: {start.size}")
    _emit(f"question: {kind} {c.bound(word)}")
    for fname in written:
        _emit(f"wrote: {out / fname}")
    return 0


def cmd_minimize(args) -> int:
    trs = _load_trs(args)
    res = min_reachable_size(trs, _term(trs, _start(args)), _caps(args))
    _emit(res.format(args.format))
    return 0 if res.exact else EXIT[CAP]


def cmd_height(args) -> int:
    trs = _load_trs(args)
    s = _term(trs, _start(args))
    try:
        h = derivation_height(trs, s, _caps(args))
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT[CAP]
    except CycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit("cycle: " + " -> ".join(format_term(t) for t in exc.cycle))
        return 1
    _emit(f"height: {h}")
    return 0


def cmd_normalize(args) -> int:
    trs = _load_trs(args)
    s = _term(trs, _start(args))
    try:
        nf, trace = normalize(trs, s, args.max_steps)
    except NormalizationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT[CAP]
    _emit(f"normal_form: {format_term(nf)}")
    _emit(f"steps: {len(trace)}")
    for n, st in enumerate(trace, 1):
        _emit(st.format(n))
    return 0


def cmd_builtin(args) -> int:
    b = compiler.builtin(args.name)
    files = {f"{b.name}.trs": format_trs(b.trs)}
    if isinstance(b.order, compiler.KboSpec):
        files[f"{b.name}.kbo"] = format_kbo(b.order)
    elif b.order is not None:
        files[f"{b.name}.poly"] = format_interpretation(b.order)
    if args.out is None:
        for fname, text in files.items():
            _emit(f"# {fname}")
            _emit(text)
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fname, text in files.items():
        (out / fname).write_text(text)
        _emit(f"wrote: {out / fname}")
    return 0


# -- argument parsing --------------------------------------------------------------


def _add_caps(p: argparse.ArgumentParser) -> None:
    d = Caps()
    p.add_argument("--max-terms", type=int, default=d.max_terms)
    p.add_argument("--max-steps", type=int, default=d.max_steps)
    p.add_argument("--max-size", type=int, default=d.max_size)
    p.add_argument("--format", choices=("text", "lines"), default="text")


def _add_term(p: argparse.ArgumentParser, required_trs: bool = True) -> None:
    p.add_argument("--trs", required=required_trs, help="TRS file")
    p.add_argument("--term", help="start term, or @file to read it from a file")
    p.add_argument("--from", dest="source", help="alias of --term")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="trsreach", description="Reachability of small and large terms in rewrite systems.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse a TRS (and a term) and print it back")
    _add_term(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("reach", help="decide small, large, term or symbol reachability")
    p.add_argument("kind", choices=("small", "large", "term", "symbol"))
    _add_term(p)
    p.add_argument("--n", type=int, help="size bound")
    p.add_argument("--to", help="target term (reach term)")
    p.add_argument("--symbol", help="target symbol (reach symbol)")
    p.add_argument("--strategy", choices=tuple(STRATEGIES), default="bfs")
    p.add_argument("--fast", action="store_true", help="confluent length-reducing fast path (reach small)")
    p.add_argument("--no-shortcut", action="store_true", help="always search (reach large)")
    _add_caps(p)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("check", help="check an order or confluence")
    p.add_argument("kind", choices=("lenred", "poly", "kbo", "confluence"))
    p.add_argument("--trs", required=True)
    p.add_argument("--interp", help="polynomial interpretation file")
    p.add_argument("--kbo", help="KBO spec file")
    p.add_argument("--verbose", action="store_true", help="list all critical pairs")
    _add_caps(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compile", help="compile a Turing machine into a TRS")
    p.add_argument("construction", choices=compiler.CONSTRUCTIONS)
    p.add_argument("--tm", required=True)
    p.add_argument("--word", default="")
    p.add_argument("--out", required=True)
    p.add_argument("--name", help="base name of the written files (default: the construction)")
    p.add_argument("--p", help="coefficients of p, low degree first (default: the TM file or l + 1)")
    p.add_argument("--q", help="coefficients of q for pspace")
    p.add_argument("--confluent", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("minimize", help="smallest reachable term")
    _add_term(p)
    _add_caps(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("height", help="length of the longest rewrite sequence")
    _add_term(p)
    _add_caps(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("normalize", help="normal form along the leftmost-outermost redex")
    _add_term(p)
    _add_caps(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("builtin", help="print or write a built-in example system")
    p.add_argument("name", choices=tuple(compiler.BUILTINS))
    p.add_argument("--out")
    p.set_defaults(func=cmd_builtin)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"trsreach: error: {exc}", file=sys.stderr)
        return USAGE
    except (TermError, TmError, OrderError, PreconditionError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"trsreach: error: {msg}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
