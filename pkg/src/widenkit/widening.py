"""Widening strategies as lazily constructed trees.

A widening strategy is represented by a tree node: a proposed abstract
element together with a step function.  A fixpoint engine repeatedly hands
the node the element it actually needs covered; the node either answers
CONVERGED, claiming the query is already below its proposal, or hands back
the next node to try.  The tree is never materialized: children come into
existence only when ``step`` is applied, so a node is just a value paired
with a closure.

Two obligations cannot be expressed in the type and are enforced elsewhere:

  * Well-foundedness.  Every chain of Next answers must be finite.  Shipped
    constructors document their termination argument; the solver backs them
    with a fuel bound and reports exhaustion as a defect rather than looping.
  * Honest leaves.  CONVERGED is only legitimate when the query really is
    below the proposal.  The solver re-checks this with the domain order at
    every leaf and reports a violation as a broken strategy.

Nodes are immutable and close over immutable data; they can be shared and
stepped concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, Optional, TypeVar, Union

E = TypeVar("E")


@dataclass(frozen=True)
class Converged:
    """The query is claimed to be below the answering node's proposal."""


CONVERGED = Converged()


@dataclass(frozen=True)
class Next(Generic[E]):
    """Try again against ``node``, the strategy's next proposal."""

    node: "WideningNode[E]"


Answer = Union[Converged, "Next[E]"]


@dataclass(frozen=True)
class WideningNode(Generic[E]):
    """One node of a widening tree: a proposal and the branch map below it.

    ``fuel_hint`` is advisory metadata: an upper bound on the number of Next
    answers any query sequence can extract from this subtree, when the
    constructor can compute one.  The solver does not rely on it.
    """

    proposal: E
    step: Callable[[E], Answer]
    fuel_hint: Optional[int] = None


def make_node(
    proposal: E, step: Callable[[E], Answer], fuel_hint: Optional[int] = None
) -> WideningNode[E]:
    """Wrap a proposal and branch map into a node.

    The caller owes the termination discipline for the subtree ``step``
    generates; nothing is checked here.
    """
    return WideningNode(proposal, step, fuel_hint)


def step(node: WideningNode[E], v: E) -> Answer:
    """Apply the node's branch map to the query ``v``.  Pure."""
    return node.step(v)


def classic_to_tree(
    widen_op: Callable[[E, E], E],
    leq: Callable[[E, E], bool],
    start: E,
    fuel_hint: Optional[int] = None,
) -> WideningNode[E]:
    """Adapt a classic binary widening operator into a tree rooted at ``start``.

    The node proposes ``start``; a query below it converges, anything else
    moves to the tree rooted at ``widen_op(start, query)``.  If the operator
    stabilizes every sequence ``u = widen_op(u, v_n)`` the tree is
    well-founded; if not, only the solver's fuel terminates a run.
    """

    def _step(v: E) -> Answer:
        if leq(v, start):
            return CONVERGED
        child_hint = None if fuel_hint is None else max(fuel_hint - 1, 0)
        return Next(classic_to_tree(widen_op, leq, widen_op(start, v), child_hint))

    return WideningNode(start, _step, fuel_hint)
