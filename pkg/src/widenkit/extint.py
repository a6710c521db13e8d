"""Integers extended with signed infinities, with exact (unbounded) arithmetic.

Interval endpoints live here: ordinary Python ints plus the two sentinels
NEG_INF and POS_INF.  Python ints never overflow, so endpoint arithmetic is
exact by construction.
"""

from __future__ import annotations

from typing import Union


class _Infinity:
    """Signed infinity, totally ordered against ints and the other infinity."""

    __slots__ = ("positive",)

    def __init__(self, positive: bool):
        object.__setattr__(self, "positive", positive)

    def __setattr__(self, name, value):
        raise AttributeError("infinity sentinels are immutable")

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return not self.positive and other.positive
        if isinstance(other, int):
            return not self.positive
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return not self.positive or other.positive
        if isinstance(other, int):
            return not self.positive
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (_Infinity, int)):
            return not self.__le__(other)
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (_Infinity, int)):
            return not self.__lt__(other)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, _Infinity) and self.positive == other.positive

    def __hash__(self):
        return hash(("widenkit-infinity", self.positive))

    def __neg__(self) -> "_Infinity":
        return POS_INF if self is NEG_INF else NEG_INF

    def __repr__(self) -> str:
        return "+inf" if self.positive else "-inf"


NEG_INF = _Infinity(False)
POS_INF = _Infinity(True)

ExtInt = Union[int, _Infinity]


def is_finite(x: ExtInt) -> bool:
    return isinstance(x, int)


def ext_neg(x: ExtInt) -> ExtInt:
    return -x


def ext_add(a: ExtInt, b: ExtInt) -> ExtInt:
    """Exact addition; adding infinities of opposite signs is rejected."""
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if isinstance(a, _Infinity):
        if isinstance(b, _Infinity) and a.positive != b.positive:
            raise ValueError("cannot add infinities of opposite signs")
        return a
    return b


def ext_scale(k: int, x: ExtInt) -> ExtInt:
    """k * x with the convention 0 * (+-inf) = 0."""
    if k == 0:
        return 0
    if isinstance(x, int):
        return k * x
    return x if k > 0 else -x
