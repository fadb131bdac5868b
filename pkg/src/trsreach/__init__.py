"""Reachability of small and large terms in terminating term rewriting systems."""

from trsreach.terms import Rule, Signature, Term, Trs, app, format_term, size, var
from trsreach.syntax import format_trs, parse_term, parse_trs
from trsreach.rewrite import Caps, explore, normalize, reachable_set, successors
from trsreach.reachability import (
    Decision,
    derivation_height,
    joinable,
    large_term_reachability,
    min_reachable_size,
    small_term_fast_confluent,
    small_term_reachability,
    symbol_reachability,
    term_reachability,
)
from trsreach.orders import check_kbo, check_length_reducing, check_poly_order
from trsreach.confluence import check_confluence, critical_pairs, unify

__version__ = "0.1.0"

__all__ = [
    "Rule",
    "Signature",
    "Term",
    "Trs",
    "app",
    "format_term",
    "size",
    "var",
    "format_trs",
    "parse_term",
    "parse_trs",
    "Caps",
    "explore",
    "normalize",
    "reachable_set",
    "successors",
    "Decision",
    "derivation_height",
    "joinable",
    "large_term_reachability",
    "min_reachable_size",
    "small_term_fast_confluent",
    "small_term_reachability",
    "symbol_reachability",
    "term_reachability",
    "check_kbo",
    "check_length_reducing",
    "check_poly_order",
    "check_confluence",
    "critical_pairs",
    "unify",
]
