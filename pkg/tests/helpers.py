"""Shared test utilities: a finite chain domain, enumeration oracles, tree walkers."""

from __future__ import annotations

import random
from typing import Iterable, List, Sequence, Tuple

from widenkit import (
    BOTTOM,
    CONVERGED,
    NEG_INF,
    POS_INF,
    Converged,
    Domain,
    Interval,
    IntervalElem,
    WideningNode,
    classic_to_tree,
    interval_contains,
    make_node,
    make_ramp,
    ramp_widening,
)

# ---------------------------------------------------------------------------
# A totally ordered chain domain: 0 (bottom) < 1 < 2 < ... < +inf.
# An element n covers the integers 1..n, so 0 covers nothing.


def chain_leq(a, b) -> bool:
    return a <= b


def chain_join(a, b):
    return max(a, b)


def chain_widen(n, m):
    """Keep the current bound if it already covers the new one, else give up."""
    return n if m <= n else POS_INF


def chain_contains(e, c: int) -> bool:
    return 1 <= c and c <= e


CHAIN_DOMAIN = Domain(
    name="chain",
    leq=chain_leq,
    join=chain_join,
    bottom=0,
    concretizes=chain_contains,
    is_bottom=lambda e: e == 0,
)


def chain_classic(start) -> WideningNode:
    return classic_to_tree(chain_widen, chain_leq, start)


def escalating_chain_tree() -> WideningNode:
    """The two-threshold chain tree: propose 1, then 3, then give up to +inf.

    Stepping the root with 2 yields the node labeled 3; stepping that with 4
    yields the node labeled +inf, which converges on any following query.
    """
    terminal = make_node(POS_INF, lambda v: CONVERGED)
    return ramp_widening(make_ramp((1, 3), chain_leq), terminal)


# ---------------------------------------------------------------------------
# Walking widening trees while checking every leaf.


def walk(
    node: WideningNode,
    queries: Iterable,
    leq,
) -> Tuple[bool, List, List]:
    """Feed queries to a tree until it converges.

    Returns (converged, proposals_seen, answers_consumed).  Every CONVERGED
    answer is checked against ``leq``; a dishonest leaf fails the test here.
    """
    proposals = [node.proposal]
    consumed = []
    for q in queries:
        consumed.append(q)
        answer = node.step(q)
        if isinstance(answer, Converged):
            assert leq(q, node.proposal), (
                f"dishonest leaf: query {q!r} not below proposal {node.proposal!r}"
            )
            return True, proposals, consumed
        node = answer.node
        proposals.append(node.proposal)
    return False, proposals, consumed


# ---------------------------------------------------------------------------
# Interval grids and enumeration oracles.

PROBE_WINDOW = tuple(range(-4, 5))


def grid_endpoints(span: int = 2) -> Tuple:
    return (NEG_INF,) + tuple(range(-span, span + 1)) + (POS_INF,)


def grid_intervals(span: int = 2, with_bottom: bool = True) -> List[IntervalElem]:
    """Every well-formed interval with endpoints in {-inf, -span..span, +inf}."""
    elems: List[IntervalElem] = [BOTTOM] if with_bottom else []
    points = grid_endpoints(span)
    for lo in points:
        for hi in points:
            if lo is POS_INF or hi is NEG_INF:
                continue
            if lo <= hi:
                elems.append(Interval(lo, hi))
    return elems


def members(e: IntervalElem, window: Sequence[int] = PROBE_WINDOW) -> frozenset:
    """Concrete members of an interval element, restricted to a finite window."""
    return frozenset(c for c in window if interval_contains(e, c))


def enclosing_interval(values: Sequence[int]) -> IntervalElem:
    """Independent oracle: smallest interval containing the given integers."""
    if not values:
        return BOTTOM
    return Interval(min(values), max(values))


def random_interval(rng: random.Random, lo: int = -100, hi: int = 100) -> IntervalElem:
    kind = rng.randrange(8)
    if kind == 0:
        return BOTTOM
    a = rng.randint(lo, hi)
    b = rng.randint(lo, hi)
    a, b = min(a, b), max(a, b)
    if kind == 1:
        return Interval(NEG_INF, b)
    if kind == 2:
        return Interval(a, POS_INF)
    if kind == 3:
        return Interval(NEG_INF, POS_INF)
    return Interval(a, b)


# ---------------------------------------------------------------------------
# Generic law checks, run against every registered domain instance.


def check_preorder(dom: Domain, elements: Sequence, triples: Iterable[Tuple]) -> None:
    for e in elements:
        assert dom.leq(e, e), f"{dom.name}: leq not reflexive at {e!r}"
    for a, b, c in triples:
        if dom.leq(a, b) and dom.leq(b, c):
            assert dom.leq(a, c), f"{dom.name}: leq not transitive at {a!r}, {b!r}, {c!r}"


def check_lattice_laws(dom: Domain, pairs: Iterable[Tuple], probes: Sequence) -> None:
    """Gamma-monotonicity, join soundness and join-upper-bound on finite probes."""
    for a, b in pairs:
        j = dom.join(a, b)
        assert dom.leq(a, j) and dom.leq(b, j), f"{dom.name}: join not an upper bound"
        for c in probes:
            if dom.concretizes(a, c) or dom.concretizes(b, c):
                assert dom.concretizes(j, c), f"{dom.name}: join unsound at {a!r},{b!r},{c!r}"
        if dom.leq(a, b):
            for c in probes:
                if dom.concretizes(a, c):
                    assert dom.concretizes(b, c), (
                        f"{dom.name}: membership not monotone at {a!r} <= {b!r}, {c!r}"
                    )


def check_bottom_laws(dom: Domain, elements: Sequence, probes: Sequence) -> None:
    assert dom.is_bottom(dom.bottom)
    for e in elements:
        assert dom.leq(dom.bottom, e), f"{dom.name}: bottom not least under {e!r}"
    for c in probes:
        assert not dom.concretizes(dom.bottom, c), f"{dom.name}: bottom covers {c!r}"
