"""Abstract semantics for the while-language: per-loop interval invariants.

Statements transform abstract environments; each loop solves a fixpoint
with a fresh widening tree seeded at the loop-entry environment.  The loop
transformer is ``entry join body(refine(u, guard))``, so a post-fixpoint of
it over-approximates every state ever observed at the loop head.  The exit
environment is the invariant refined by the negated guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Tuple, Union

from ..combinators import (
    Ramp,
    delayed_widening_each_step,
    pointwise_env_widening,
    ramp_widening,
    ramp_widening_search,
)
from ..extint import NEG_INF, POS_INF, ext_add
from ..intervals import (
    BOTTOM,
    ENV_BOTTOM,
    TOP,
    AbstractEnv,
    Env,
    Interval,
    IntervalElem,
    env_is_bottom,
    env_join,
    env_leq,
    interval_add,
    interval_join,
    interval_leq,
    interval_meet,
    interval_scale,
    interval_widen_brutal,
    make_env,
    singleton,
)
from ..solver import DEFAULT_FUEL, SolverDefect, abstract_lfp
from ..widening import CONVERGED, Answer, Next, WideningNode, classic_to_tree, make_node
from .ast import AffineExpr, Assign, Assume, Cond, Havoc, If, Program, Stmt, While, negate

# Each unstable interval bound can be discarded once, plus the converging step.
_BRUTAL_DEPTH = 3


# ---------------------------------------------------------------------------
# Expression evaluation and condition refinement.


def interval_affine_eval(env: AbstractEnv, expr: AffineExpr) -> IntervalElem:
    """Sound interval value of an affine expression under ``env``."""
    if env_is_bottom(env):
        return BOTTOM
    acc: IntervalElem = singleton(expr.constant)
    for coeff, name in expr.terms:
        acc = interval_add(acc, interval_scale(coeff, env[name]))
    return acc


def _diff(cond: Cond) -> Tuple[int, Dict[str, int]]:
    """Rewrite ``lhs op rhs`` as ``constant + sum(coeff*var) op 0``."""
    constant = cond.lhs.constant - cond.rhs.constant
    coeffs: Dict[str, int] = {}
    for sign, side in ((1, cond.lhs), (-1, cond.rhs)):
        for coeff, name in side.terms:
            coeffs[name] = coeffs.get(name, 0) + sign * coeff
    return constant, {name: c for name, c in coeffs.items() if c != 0}


_CONST_TEST = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    ">": lambda c: c > 0,
    ">=": lambda c: c >= 0,
    "==": lambda c: c == 0,
    "!=": lambda c: c != 0,
}

_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


def _allowed(op: str, bound: Interval) -> IntervalElem:
    """Values x can take given ``x op e`` for some integer e in ``bound``."""
    if op == "<":
        return TOP if bound.hi is POS_INF else Interval(NEG_INF, ext_add(bound.hi, -1))
    if op == "<=":
        return Interval(NEG_INF, bound.hi) if bound.hi is not POS_INF else TOP
    if op == ">":
        return TOP if bound.lo is NEG_INF else Interval(ext_add(bound.lo, 1), POS_INF)
    if op == ">=":
        return Interval(bound.lo, POS_INF) if bound.lo is not NEG_INF else TOP
    if op == "==":
        return bound
    return TOP  # "!=" handled separately via endpoint trimming


def _trim_not_equal(current: Interval, excluded: int) -> IntervalElem:
    """Drop ``excluded`` from an interval when it sits on an endpoint."""
    if current.lo == current.hi == excluded:
        return BOTTOM
    if current.lo == excluded:
        return Interval(excluded + 1, current.hi)
    if current.hi == excluded:
        return Interval(current.lo, excluded - 1)
    return current


def env_refine(env: AbstractEnv, cond: Cond) -> AbstractEnv:
    """Best-effort, sound restriction of ``env`` to states satisfying ``cond``.

    Each variable with a unit coefficient in the normalized condition is
    tightened against the interval of the rest of the expression; other
    shapes are left alone, which is sound (never drops a satisfying state).
    """
    if env_is_bottom(env):
        return ENV_BOTTOM
    constant, coeffs = _diff(cond)
    if not coeffs:
        return env if _CONST_TEST[cond.op](constant) else ENV_BOTTOM
    result: AbstractEnv = env
    for name, coeff in coeffs.items():
        if abs(coeff) != 1 or env_is_bottom(result):
            continue
        rest = AffineExpr(constant, tuple((c, n) for n, c in coeffs.items() if n != name))
        rest_iv = interval_affine_eval(env, rest)
        assert isinstance(rest_iv, Interval)
        # coeff * x + rest op 0  becomes  x op' e  with e ranging over ``bound``
        if coeff == 1:
            op, bound = cond.op, interval_scale(-1, rest_iv)
        else:
            op, bound = _FLIP[cond.op], rest_iv
        assert isinstance(bound, Interval)
        current = result[name]
        if op == "!=":
            if bound.lo == bound.hi:
                refined = _trim_not_equal(current, bound.lo)
            else:
                refined = current
        else:
            refined = interval_meet(current, _allowed(op, bound))
        result = result.updated(name, refined)
        if env_is_bottom(result):
            return ENV_BOTTOM
    return result


# ---------------------------------------------------------------------------
# Widening strategies, compiled per loop into an environment widening tree.


@dataclass(frozen=True)
class NaiveWidening:
    """Brutal interval widening on every variable, no thresholds, no delay."""

    @property
    def label(self) -> str:
        return "naive"


@dataclass(frozen=True)
class ThresholdWidening:
    """Try ascending upper-bound thresholds before falling back to the brutal widening.

    ``thresholds`` is either a shared ascending tuple of integers or a
    mapping from variable name to such a tuple.  At each loop a threshold t
    is lifted for variable x to the interval [entry-lower-bound(x), t];
    thresholds below the entry lower bound are dropped.
    """

    thresholds: Union[Tuple[int, ...], Mapping[str, Tuple[int, ...]]]

    def for_variable(self, name: str) -> Tuple[int, ...]:
        if isinstance(self.thresholds, Mapping):
            return tuple(self.thresholds.get(name, ()))
        return tuple(self.thresholds)

    @property
    def label(self) -> str:
        if isinstance(self.thresholds, Mapping):
            inner = ";".join(
                f"{name}:{','.join(map(str, values))}"
                for name, values in sorted(self.thresholds.items())
            )
        else:
            inner = ",".join(map(str, self.thresholds))
        return f"ramp({inner})"


@dataclass(frozen=True)
class DelayedWidening:
    """Allow ``count`` plain joins between consecutive steps of the inner strategy."""

    count: int
    inner: "Strategy" = field(default_factory=NaiveWidening)

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("delay count must be nonnegative")

    @property
    def label(self) -> str:
        return f"delay({self.count}, {strategy_label(self.inner)})"


Strategy = Union[NaiveWidening, ThresholdWidening, DelayedWidening]


def strategy_label(strategy) -> str:
    return strategy.label


def _seed_of(entry: AbstractEnv, name: str) -> IntervalElem:
    return entry[name] if isinstance(entry, Env) else BOTTOM


def _variable_node(strategy, name: str, seed: IntervalElem) -> WideningNode[IntervalElem]:
    if isinstance(strategy, NaiveWidening):
        return classic_to_tree(
            interval_widen_brutal, interval_leq, seed, fuel_hint=_BRUTAL_DEPTH
        )
    if isinstance(strategy, ThresholdWidening):
        return _threshold_node(strategy.for_variable(name), seed)
    if isinstance(strategy, DelayedWidening):
        inner = _variable_node(strategy.inner, name, seed)
        return delayed_widening_each_step(
            strategy.count, inner, interval_join, interval_leq
        )
    raise TypeError(f"unknown widening strategy {strategy!r}")


def _threshold_node(thresholds: Tuple[int, ...], seed: IntervalElem) -> WideningNode[IntervalElem]:
    lo = seed.lo if isinstance(seed, Interval) else NEG_INF
    lifted = tuple(Interval(lo, t) for t in thresholds if lo <= t)
    base = classic_to_tree(interval_widen_brutal, interval_leq, seed, fuel_hint=_BRUTAL_DEPTH)
    if not lifted:
        return base
    ramp = Ramp(lifted, interval_leq)

    def _step(v: IntervalElem) -> Answer:
        if interval_leq(v, seed):
            return CONVERGED
        return Next(ramp_widening(ramp_widening_search(v, ramp), base))

    return make_node(seed, _step, fuel_hint=len(ramp) + _BRUTAL_DEPTH + 1)


def compile_strategy(
    strategy, variables: Tuple[str, ...], entry: AbstractEnv
) -> WideningNode[AbstractEnv]:
    """Build the loop's widening tree, rooted at the loop-entry environment."""
    custom = getattr(strategy, "compile", None)
    if custom is not None:
        return custom(variables, entry)
    nodes = {name: _variable_node(strategy, name, _seed_of(entry, name)) for name in variables}
    return pointwise_env_widening(nodes)


# ---------------------------------------------------------------------------
# Statement transfer and whole-program analysis.


@dataclass
class AnalysisReport:
    """Per-loop invariants plus the final environment of one analysis run."""

    variables: Tuple[str, ...]
    loop_invariants: Dict[int, AbstractEnv]
    loop_lines: Dict[int, int]
    loop_traces: Dict[int, Tuple[AbstractEnv, ...]]
    final_env: AbstractEnv
    strategy: str
    solver_steps: int


class _Engine:
    def __init__(self, variables: Tuple[str, ...], strategy, fuel: int):
        self.variables = variables
        self.strategy = strategy
        self.fuel = fuel
        self.invariants: Dict[int, AbstractEnv] = {}
        self.lines: Dict[int, int] = {}
        self.traces: Dict[int, Tuple[AbstractEnv, ...]] = {}
        self.steps = 0

    def seq(self, env: AbstractEnv, stmts: Sequence[Stmt]) -> AbstractEnv:
        for stmt in stmts:
            env = self.stmt(env, stmt)
        return env

    def stmt(self, env: AbstractEnv, stmt: Stmt) -> AbstractEnv:
        if isinstance(stmt, Assign):
            if env_is_bottom(env):
                return ENV_BOTTOM
            return env.updated(stmt.var, interval_affine_eval(env, stmt.expr))
        if isinstance(stmt, Havoc):
            if env_is_bottom(env):
                return ENV_BOTTOM
            return env.updated(stmt.var, TOP)
        if isinstance(stmt, Assume):
            return env_refine(env, stmt.cond)
        if isinstance(stmt, If):
            then_env = self.seq(env_refine(env, stmt.cond), stmt.then_body)
            else_env = self.seq(env_refine(env, negate(stmt.cond)), stmt.else_body)
            return env_join(then_env, else_env)
        if isinstance(stmt, While):
            return self.loop(env, stmt)
        raise TypeError(f"unknown statement {stmt!r}")

    def loop(self, env: AbstractEnv, loop: While) -> AbstractEnv:
        entry = env

        def phi(u: AbstractEnv) -> AbstractEnv:
            return env_join(entry, self.seq(env_refine(u, loop.cond), loop.body))

        root = compile_strategy(self.strategy, self.variables, entry)
        try:
            result = abstract_lfp(phi, root, env_leq, fuel=self.fuel)
        except SolverDefect as defect:
            if defect.loop_id is None:
                defect.loop_id = loop.id
            raise
        self.invariants[loop.id] = result.value
        self.lines[loop.id] = loop.line
        self.traces[loop.id] = result.proposal_trace
        self.steps += result.steps_taken
        return env_refine(result.value, negate(loop.cond))


def transfer_stmt(
    env: AbstractEnv,
    stmt: Stmt,
    strategy,
    *,
    fuel: int = DEFAULT_FUEL,
) -> Tuple[AbstractEnv, Dict[int, AbstractEnv]]:
    """Transfer one statement, returning the out-environment and any loop invariants."""
    variables = env.variables if isinstance(env, Env) else ()
    engine = _Engine(variables, strategy, fuel)
    out = engine.stmt(env, stmt)
    return out, engine.invariants


def initial_env(program: Program) -> AbstractEnv:
    return make_env({d.var: Interval(d.lo, d.hi) for d in program.decls})


def analyze(program: Program, strategy, *, fuel: int = DEFAULT_FUEL) -> AnalysisReport:
    """Run the abstract semantics over the whole program body."""
    engine = _Engine(program.variables, strategy, fuel)
    final = engine.seq(initial_env(program), program.body)
    return AnalysisReport(
        variables=program.variables,
        loop_invariants=engine.invariants,
        loop_lines=engine.lines,
        loop_traces=engine.traces,
        final_env=final,
        strategy=strategy_label(strategy),
        solver_steps=engine.steps,
    )
