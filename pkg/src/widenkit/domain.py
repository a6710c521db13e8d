"""The contract every abstract domain implements.

A domain is a capability record: a decidable ordering, a join, a least
element and a decidable membership test relating abstract elements to the
concrete values they stand for.  Everything downstream (widening trees,
combinators, the fixpoint solver) is written against this record alone.

Laws expected of an instance (the property suite in tests probes them on
finite grids of concrete values):

  * ``leq`` is a preorder: reflexive and transitive.  Antisymmetry is NOT
    required; two distinct elements may represent the same concrete set.
  * membership is monotone along ``leq``: if ``leq(a, b)`` then every
    concrete value of ``a`` is a concrete value of ``b``.
  * ``join(a, b)`` is an upper bound of both arguments and covers every
    concrete value of either.
  * ``bottom`` is below everything and has no concrete values.

Membership is a per-value test, not a set: the sets involved are typically
infinite (or undecidable), so the contract exposes only the decidable
question "does this abstract element cover this concrete value".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

E = TypeVar("E")
C = TypeVar("C")


@dataclass(frozen=True)
class Domain(Generic[E, C]):
    """Capability record for an abstract domain over elements E and concrete values C."""

    name: str
    leq: Callable[[E, E], bool]
    join: Callable[[E, E], E]
    bottom: E
    concretizes: Callable[[E, C], bool]
    is_bottom: Callable[[E], bool]

    def __repr__(self) -> str:
        return f"Domain({self.name})"
