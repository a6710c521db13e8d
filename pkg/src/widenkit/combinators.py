"""Transformers that build richer widening trees out of simpler ones.

Three constructions: threshold ("ramp") widening, which tries a finite
ascending chain of candidate bounds before falling back to a base strategy;
delayed widening, which interleaves a bounded number of plain joins between
consecutive base steps; and product widening, which runs one strategy per
coordinate and only advances the coordinates that are actually unstable.
Each carries its own termination argument, noted on the constructor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, Mapping, Tuple, TypeVar

from .intervals import (
    AbstractEnv,
    Env,
    IntervalElem,
    env_leq,
    interval_leq,
    make_env,
)
from .widening import CONVERGED, Answer, Next, WideningNode

E = TypeVar("E")
E1 = TypeVar("E1")
E2 = TypeVar("E2")


@dataclass(frozen=True)
class Ramp(Generic[E]):
    """A strictly ascending chain of candidate bounds, with the order it ascends in.

    Strictness matters: equivalent neighbours would make "the next threshold
    above a value" ambiguous under linear search, so construction rejects them.
    """

    values: Tuple[E, ...]
    leq: Callable[[E, E], bool]

    def __post_init__(self):
        for a, b in zip(self.values, self.values[1:]):
            if not self.leq(a, b) or self.leq(b, a):
                raise ValueError(f"ramp values must ascend strictly: {a!r} then {b!r}")

    def __len__(self) -> int:
        return len(self.values)


def make_ramp(values, leq: Callable[[E, E], bool]) -> Ramp[E]:
    return Ramp(tuple(values), leq)


def ramp_widening_search(bound: E, ramp: Ramp[E]) -> Ramp[E]:
    """Longest suffix of the ramp whose head dominates ``bound``; may be empty.

    Linear scan front to back, keeping the whole remaining suffix at the
    first hit.  Because the ramp ascends, this head is also the least
    threshold above ``bound``.
    """
    values = ramp.values
    for i, candidate in enumerate(values):
        if ramp.leq(bound, candidate):
            return Ramp(values[i:], ramp.leq)
    return Ramp((), ramp.leq)


def ramp_widening(ramp: Ramp[E], base: WideningNode[E]) -> WideningNode[E]:
    """Try the ramp's thresholds in order, falling back to ``base`` when they run out.

    The node proposes the ramp's head; a query below it converges, anything
    else searches the remaining tail for the next dominating threshold.
    Every step strictly shrinks the remaining suffix or moves into ``base``,
    so the tree is well-founded whenever ``base`` is.
    """
    if not ramp.values:
        return base
    head = ramp.values[0]
    tail = Ramp(ramp.values[1:], ramp.leq)

    def _step(v: E) -> Answer:
        if ramp.leq(v, head):
            return CONVERGED
        return Next(ramp_widening(ramp_widening_search(v, tail), base))

    hint = None if base.fuel_hint is None else len(ramp) + base.fuel_hint + 1
    return WideningNode(head, _step, hint)


def delayed_widening_each_step(
    n: int,
    base: WideningNode[E],
    join: Callable[[E, E], E],
    leq: Callable[[E, E], bool],
) -> WideningNode[E]:
    """Interleave up to ``n`` join steps between consecutive steps of ``base``.

    The node tracks a label (initially the base proposal), a join budget and
    the current base position.  An uncovered query spends budget on a join
    of label and query; once the budget is gone the base advances one step
    and the budget resets to ``n``.  The base fires at least every ``n+1``
    steps, so termination reduces to the base's.
    """
    if n < 0:
        raise ValueError("delay count must be nonnegative")
    return _delayed(base.proposal, n, n, base, join, leq)


def _delayed(label, budget, n, base, join, leq) -> WideningNode:
    def _step(v) -> Answer:
        if leq(v, label):
            return CONVERGED
        if budget > 0:
            return Next(_delayed(join(label, v), budget - 1, n, base, join, leq))
        answer = base.step(v)
        if isinstance(answer, Next):
            child = answer.node
            return Next(_delayed(child.proposal, n, n, child, join, leq))
        # base claims coverage; echo it and let the solver's leaf check rule
        return CONVERGED

    hint = None if base.fuel_hint is None else (n + 1) * base.fuel_hint
    return WideningNode(label, _step, hint)


def product_widening(
    w1: WideningNode[E1],
    w2: WideningNode[E2],
    leq1: Callable[[E1, E1], bool],
    leq2: Callable[[E2, E2], bool],
) -> WideningNode[Tuple[E1, E2]]:
    """Run one widening per coordinate of a pair, advancing only unstable ones.

    Given a query (v1, v2): if both coordinates are below their proposals
    the pair converges; if exactly one is, its node is kept as-is while the
    other takes one step; if neither is, both step.  Terminates because each
    coordinate's tree can only be stepped finitely often.
    """
    u1, u2 = w1.proposal, w2.proposal

    def _step(query: Tuple[E1, E2]) -> Answer:
        v1, v2 = query
        covered1 = leq1(v1, u1)
        covered2 = leq2(v2, u2)
        if covered1 and covered2:
            return CONVERGED
        m1, m2 = w1, w2
        moved = False
        if not covered1:
            a1 = w1.step(v1)
            if isinstance(a1, Next):
                m1 = a1.node
                moved = True
        if not covered2:
            a2 = w2.step(v2)
            if isinstance(a2, Next):
                m2 = a2.node
                moved = True
        if not moved:
            # every unstable coordinate claimed coverage; echo the claim and
            # let the solver's leaf check rule on it
            return CONVERGED
        return Next(product_widening(m1, m2, leq1, leq2))

    hint = None
    if w1.fuel_hint is not None and w2.fuel_hint is not None:
        hint = w1.fuel_hint + w2.fuel_hint
    return WideningNode((u1, u2), _step, hint)


def pointwise_env_widening(
    per_var: Mapping[str, WideningNode[IntervalElem]],
) -> WideningNode[AbstractEnv]:
    """Finite product of interval widenings, one per program variable.

    The n-ary version of ``product_widening`` over environments: coordinates
    whose query is already covered keep their node untouched, the rest take
    one step each.  ENV_BOTTOM queries are below everything and converge
    immediately.
    """
    variables = tuple(per_var)
    nodes = dict(per_var)
    proposal = make_env({name: nodes[name].proposal for name in variables})

    def _step(query: AbstractEnv) -> Answer:
        if env_leq(query, proposal):
            return CONVERGED
        assert isinstance(query, Env)  # bottom queries converged above
        if set(query.variables) != set(variables):
            raise ValueError(
                f"widening built for variables {variables} queried with {query.variables}"
            )
        moved = False
        stepped = {}
        for name in variables:
            node = nodes[name]
            value = query[name]
            if interval_leq(value, node.proposal):
                stepped[name] = node
                continue
            answer = node.step(value)
            if isinstance(answer, Next):
                stepped[name] = answer.node
                moved = True
            else:
                stepped[name] = node
        if not moved:
            return CONVERGED
        return Next(pointwise_env_widening(stepped))

    hints = [nodes[name].fuel_hint for name in variables]
    hint = sum(hints) if variables and all(h is not None for h in hints) else None
    return WideningNode(proposal, _step, hint)
