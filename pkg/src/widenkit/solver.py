"""Fixpoint engine: run an abstract transformer against a widening tree.

At each node the engine evaluates the transformer on the proposal and hands
the result to the node.  A Next answer moves down the tree; a CONVERGED
answer is re-checked against the domain order before being believed.  The
engine returns the certified post-fixpoint, or raises a defect: a broken
strategy (dishonest leaf) or fuel exhaustion (tree not well-founded, or not
within budget).  No monotonicity is assumed of the transformer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Generic, Optional, Tuple, TypeVar

from .widening import Converged, Next, WideningNode

E = TypeVar("E")

DEFAULT_FUEL = 10_000
DEFAULT_TRACE_LIMIT = 64


class SolverDefect(Exception):
    """A widening run failed in a way that is a bug in the strategy, not a result."""

    def __init__(self, message: str, trace: Tuple = ()):
        super().__init__(message)
        self.trace = trace
        self.loop_id: Optional[int] = None  # set by the analyzer when inside a loop


class BrokenWidening(SolverDefect):
    """A node answered CONVERGED for a query the domain order rejects."""

    def __init__(self, proposal, query, trace: Tuple = ()):
        super().__init__(
            f"widening claimed convergence at proposal {proposal!r} "
            f"but query {query!r} is not below it",
            trace,
        )
        self.proposal = proposal
        self.query = query


class FuelExhausted(SolverDefect):
    """No convergence within the step budget."""

    def __init__(self, last_proposal, fuel: int, trace: Tuple = ()):
        super().__init__(f"no convergence within {fuel} steps", trace)
        self.last_proposal = last_proposal
        self.fuel = fuel


@dataclass
class PostFixpointResult(Generic[E]):
    """A certified post-fixpoint: ``leq(f(value), value)`` held at return time."""

    value: E
    check_passed: bool
    steps_taken: int
    proposal_trace: Tuple[E, ...]


def abstract_lfp(
    f: Callable[[E], E],
    root: WideningNode[E],
    leq: Callable[[E, E], bool],
    *,
    fuel: int = DEFAULT_FUEL,
    trace_limit: int = DEFAULT_TRACE_LIMIT,
) -> PostFixpointResult[E]:
    """Iterate ``f`` down the widening tree until a certified post-fixpoint.

    One step is one evaluation of ``f``.  The trace keeps the last
    ``trace_limit`` proposals for diagnostics.  Deterministic: identical
    inputs produce identical traces and results.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    trace: deque = deque(maxlen=trace_limit)
    node = root
    steps = 0
    while True:
        if steps >= fuel:
            raise FuelExhausted(node.proposal, fuel, tuple(trace))
        u = node.proposal
        trace.append(u)
        v = f(u)
        steps += 1
        answer = node.step(v)
        if isinstance(answer, Converged):
            if not leq(v, u):
                raise BrokenWidening(u, v, tuple(trace))
            return PostFixpointResult(
                value=u, check_passed=True, steps_taken=steps, proposal_trace=tuple(trace)
            )
        assert isinstance(answer, Next)
        node = answer.node
