import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from trsreach.compiler import builtin  # noqa: E402
from trsreach.syntax import parse_trs  # noqa: E402
from trsreach.terms import Rule, Trs, app, var  # noqa: E402
from trsreach.tm import parse_tm  # noqa: E402

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


CONTAINS_A = """\
states: q0 q1 qhat
blank: B
input: a b
init: q0
accept: qhat
trans: q0 a -> qhat a R
trans: q0 b -> q1 b R
trans: q1 a -> qhat a R
trans: q1 b -> q1 b R
"""

TINY = """\
states: q0 qhat
blank: b
input: a
init: q0
accept: qhat
trans: q0 a -> qhat a R
"""

STARTS_WITH_A = """\
states: q0 qhat
blank: B
input: a b
init: q0
accept: qhat
trans: q0 a -> qhat a R
"""

# second letter decides after a left-right wiggle; exercises left moves
WIGGLE = """\
states: q0 q1 q2 q3 qhat
blank: B
input: a b
init: q0
accept: qhat
trans: q0 a -> q1 a R
trans: q0 b -> q1 b R
trans: q1 a -> q2 a L
trans: q2 a -> q3 a R
trans: q2 b -> q3 b R
trans: q3 a -> qhat a R
"""


@pytest.fixture(scope="session")
def counter():
    return builtin("binary_counter").trs


@pytest.fixture(scope="session")
def counter_kbo():
    return builtin("binary_counter").order


@pytest.fixture(scope="session")
def rhl():
    return builtin("r_hl").trs


@pytest.fixture(scope="session")
def rhl_interp():
    return builtin("r_hl").order


@pytest.fixture(scope="session")
def hh():
    return parse_trs("(VAR x) (RULES h(h(x)) -> g(x))")


@pytest.fixture(scope="session")
def contains_a():
    return parse_tm(CONTAINS_A)


@pytest.fixture(scope="session")
def tiny():
    return parse_tm(TINY)


@pytest.fixture(scope="session")
def starts_with_a():
    return parse_tm(STARTS_WITH_A)


@pytest.fixture(scope="session")
def wiggle():
    return parse_tm(WIGGLE)


# -- hypothesis strategies -------------------------------------------------------

SIG = {"f": 2, "g": 1, "h": 1, "c": 0, "d": 0}


def terms(sig=None, variables=("x", "y"), max_leaves=6):
    """Random terms over ``sig``; variables appear when ``variables`` is nonempty."""
    sig = sig or SIG
    leaves = [app(n) for n, a in sig.items() if a == 0] + [var(v) for v in variables]
    leaf = st.sampled_from(leaves)
    inner = [(n, a) for n, a in sig.items() if a > 0]

    def extend(children):
        return st.sampled_from(inner).flatmap(
            lambda na: st.lists(children, min_size=na[1], max_size=na[1]).map(lambda args, n=na[0]: app(n, args))
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


def ground_terms(sig=None, max_leaves=6):
    return terms(sig, (), max_leaves)


@st.composite
def rule_sets(draw, sig=None, max_rules=3, max_leaves=3):
    """Small random TRSs whose rules respect the variable conditions."""
    sig = sig or SIG
    rules = []
    for _ in range(draw(st.integers(1, max_rules))):
        lhs = draw(terms(sig, ("x", "y"), max_leaves).filter(lambda t: not t.is_var))
        lvars = sorted({n.name for n in _nodes(lhs) if n.is_var})
        rhs = draw(terms(sig, tuple(lvars), max_leaves))
        rules.append(Rule(lhs, rhs))
    return Trs.from_rules(rules)


@st.composite
def length_reducing_sets(draw, sig=None, max_rules=3):
    sig = sig or SIG
    from trsreach.orders import check_length_reducing

    trs = draw(rule_sets(sig, max_rules, 4).filter(lambda r: check_length_reducing(r).oriented))
    return trs


def _nodes(t):
    stack = [t]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.args)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
