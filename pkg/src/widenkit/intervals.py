"""Bottom-lifted integer intervals and their pointwise lift to environments.

An interval element is either BOTTOM (unreachable, covers nothing) or a
well-formed pair ``[lo, hi]`` with ``lo <= hi``, endpoints drawn from the
extended integers.  An abstract environment binds every declared program
variable to an interval, pointwise ordered; any bottom binding collapses
the whole environment to ENV_BOTTOM so that the pointwise order stays
consistent with emptiness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Tuple, Union

from .domain import Domain
from .extint import NEG_INF, POS_INF, ExtInt, ext_add, ext_scale


def _fmt_endpoint(x: ExtInt, positive_sign: bool = False) -> str:
    if x is NEG_INF:
        return "-inf"
    if x is POS_INF:
        return "+inf" if positive_sign else "inf"
    return str(x)


@dataclass(frozen=True)
class Interval:
    """A non-empty integer interval ``[lo, hi]`` with ``lo <= hi``."""

    lo: ExtInt
    hi: ExtInt

    def __post_init__(self):
        if self.lo is POS_INF or self.hi is NEG_INF:
            raise ValueError(f"malformed interval endpoints ({self.lo}, {self.hi})")
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]; use BOTTOM instead")

    def __str__(self) -> str:
        return f"[{_fmt_endpoint(self.lo)}, {_fmt_endpoint(self.hi, positive_sign=True)}]"

    __repr__ = __str__


class _Bottom:
    """Unreachable: the interval element covering no integer."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "bottom"


BOTTOM = _Bottom()
TOP = Interval(NEG_INF, POS_INF)

IntervalElem = Union[Interval, _Bottom]


def singleton(n: int) -> Interval:
    return Interval(n, n)


def interval_is_bottom(e: IntervalElem) -> bool:
    return e is BOTTOM or isinstance(e, _Bottom)


def interval_leq(a: IntervalElem, b: IntervalElem) -> bool:
    """Containment order: bottom below everything, else endpoint inclusion."""
    if interval_is_bottom(a):
        return True
    if interval_is_bottom(b):
        return False
    return b.lo <= a.lo and a.hi <= b.hi


def interval_join(a: IntervalElem, b: IntervalElem) -> IntervalElem:
    """Smallest enclosing interval; bottom is neutral."""
    if interval_is_bottom(a):
        return b
    if interval_is_bottom(b):
        return a
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


def interval_meet(a: IntervalElem, b: IntervalElem) -> IntervalElem:
    """Exact intersection; disjoint arguments give BOTTOM."""
    if interval_is_bottom(a) or interval_is_bottom(b):
        return BOTTOM
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo <= hi:
        return Interval(lo, hi)
    return BOTTOM


def interval_contains(e: IntervalElem, n: int) -> bool:
    if interval_is_bottom(e):
        return False
    return e.lo <= n <= e.hi


def interval_widen_brutal(u: IntervalElem, v: IntervalElem) -> IntervalElem:
    """Discard whichever bounds of ``u`` the new value ``v`` destabilizes.

    The lower bound survives only if it already covers ``v``'s, otherwise it
    drops to -inf; symmetrically for the upper bound.  Each bound can be
    discarded at most once, so iterating ``u = widen(u, v_n)`` is stationary
    after at most two non-trivial steps.
    """
    if interval_is_bottom(u):
        return v
    if interval_is_bottom(v):
        return u
    lo = u.lo if u.lo <= v.lo else NEG_INF
    hi = u.hi if v.hi <= u.hi else POS_INF
    return Interval(lo, hi)


def interval_add(a: IntervalElem, b: IntervalElem) -> IntervalElem:
    if interval_is_bottom(a) or interval_is_bottom(b):
        return BOTTOM
    return Interval(ext_add(a.lo, b.lo), ext_add(a.hi, b.hi))


def interval_scale(k: int, a: IntervalElem) -> IntervalElem:
    if interval_is_bottom(a):
        return BOTTOM
    if k >= 0:
        return Interval(ext_scale(k, a.lo), ext_scale(k, a.hi))
    return Interval(ext_scale(k, a.hi), ext_scale(k, a.lo))


# ---------------------------------------------------------------------------
# Environments: finite maps variable -> Interval, plus a collapsed bottom.


@dataclass(frozen=True)
class Env:
    """Non-bottom environment: every declared variable bound to a non-bottom interval."""

    items: Tuple[Tuple[str, Interval], ...]

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.items)

    def __getitem__(self, var: str) -> Interval:
        for name, elem in self.items:
            if name == var:
                return elem
        raise KeyError(var)

    def as_dict(self) -> dict:
        return dict(self.items)

    def updated(self, var: str, elem: IntervalElem) -> "AbstractEnv":
        if var not in self.variables:
            raise KeyError(var)
        if interval_is_bottom(elem):
            return ENV_BOTTOM
        return Env(tuple((n, elem if n == var else e) for n, e in self.items))

    def __str__(self) -> str:
        inside = ", ".join(f"{n} in {e}" for n, e in self.items)
        return "{" + inside + "}"

    __repr__ = __str__


class _EnvBottom:
    """Unreachable environment: no concrete state satisfies it."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "env-bottom"


ENV_BOTTOM = _EnvBottom()

AbstractEnv = Union[Env, _EnvBottom]


def make_env(bindings: Mapping[str, IntervalElem]) -> AbstractEnv:
    """Build an environment, collapsing to ENV_BOTTOM if any binding is bottom."""
    items = []
    for name, elem in bindings.items():
        if interval_is_bottom(elem):
            return ENV_BOTTOM
        items.append((name, elem))
    return Env(tuple(items))


def env_is_bottom(env: AbstractEnv) -> bool:
    return env is ENV_BOTTOM or isinstance(env, _EnvBottom)


def _check_same_variables(a: Env, b: Env) -> None:
    if a.variables != b.variables:
        raise ValueError(f"environments over different variables: {a.variables} vs {b.variables}")


def env_leq(a: AbstractEnv, b: AbstractEnv) -> bool:
    """Pointwise containment; ENV_BOTTOM below everything."""
    if env_is_bottom(a):
        return True
    if env_is_bottom(b):
        return False
    _check_same_variables(a, b)
    return all(interval_leq(ea, eb) for (_, ea), (_, eb) in zip(a.items, b.items))


def env_join(a: AbstractEnv, b: AbstractEnv) -> AbstractEnv:
    if env_is_bottom(a):
        return b
    if env_is_bottom(b):
        return a
    _check_same_variables(a, b)
    return Env(tuple((n, interval_join(ea, eb)) for (n, ea), (_, eb) in zip(a.items, b.items)))


def env_contains(env: AbstractEnv, state: Mapping[str, int]) -> bool:
    """Does the environment cover the concrete valuation ``state``?"""
    if env_is_bottom(env):
        return False
    return all(interval_contains(elem, state[name]) for name, elem in env.items)


def env_str(env: AbstractEnv) -> str:
    return "bottom" if env_is_bottom(env) else str(env)


INTERVAL_DOMAIN: Domain[IntervalElem, int] = Domain(
    name="interval",
    leq=interval_leq,
    join=interval_join,
    bottom=BOTTOM,
    concretizes=interval_contains,
    is_bottom=interval_is_bottom,
)


def env_domain(variables: Tuple[str, ...]) -> Domain[AbstractEnv, Mapping[str, int]]:
    """The pointwise product of the interval domain over a fixed variable set."""
    return Domain(
        name=f"env({','.join(variables)})",
        leq=env_leq,
        join=env_join,
        bottom=ENV_BOTTOM,
        concretizes=env_contains,
        is_bottom=env_is_bottom,
    )
