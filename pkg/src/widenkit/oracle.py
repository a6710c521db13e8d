"""Bounded concrete interpreter, used to cross-check reported invariants.

Programs are compiled to a flat instruction list with explicit loop-head
markers; a breadth-first exploration of the small-step semantics records
every concrete state observed at each loop head.  Exploration truncates at
configurable bounds, so it under-approximates reachability, which is the
right direction for a soundness check: any recorded state missing from a
reported invariant is a genuine analyzer bug.
"""

from __future__ import annotations

import itertools
import operator
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, List, Set, Tuple

from .extint import is_finite
from .intervals import env_is_bottom
from .lang.analysis import AnalysisReport
from .lang.ast import AffineExpr, Assign, Assume, Cond, Havoc, If, Program, While

DEFAULT_HAVOC_WINDOW = (-2, -1, 0, 1, 2)


class OracleConfigError(ValueError):
    """The program cannot be explored under the given bounds."""


@dataclass(frozen=True)
class ExplorationBounds:
    max_steps: int = 100_000
    max_states: int = 1_000_000
    havoc_window: Tuple[int, ...] = DEFAULT_HAVOC_WINDOW

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_states <= 0:
            raise ValueError("exploration bounds must be positive")


@dataclass
class ExplorationResult:
    variables: Tuple[str, ...]
    loop_states: Dict[int, Set[Tuple[int, ...]]]
    truncated: bool

    def states_at(self, loop_id: int) -> Set[Dict[str, int]]:
        return {dict(zip(self.variables, s)) for s in self.loop_states.get(loop_id, ())}


@dataclass
class SoundnessVerdict:
    passed: bool
    counterexamples: List[Tuple[int, Dict[str, int]]]
    states_checked: int


# ---------------------------------------------------------------------------
# Compilation of the structured program to a flat instruction list.

_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


def _compile_expr(expr: AffineExpr, index: Dict[str, int]) -> Callable[[Tuple[int, ...]], int]:
    constant = expr.constant
    terms = tuple((coeff, index[name]) for coeff, name in expr.terms)

    def evaluate(state: Tuple[int, ...]) -> int:
        return constant + sum(coeff * state[i] for coeff, i in terms)

    return evaluate


def _compile_cond(cond: Cond, index: Dict[str, int]) -> Callable[[Tuple[int, ...]], bool]:
    lhs = _compile_expr(cond.lhs, index)
    rhs = _compile_expr(cond.rhs, index)
    op = _OPS[cond.op]

    def test(state: Tuple[int, ...]) -> bool:
        return op(lhs(state), rhs(state))

    return test


def _compile(program: Program):
    index = {name: i for i, name in enumerate(program.variables)}
    instrs: List[tuple] = []

    def emit(stmts):
        for stmt in stmts:
            if isinstance(stmt, Assign):
                instrs.append(("assign", index[stmt.var], _compile_expr(stmt.expr, index)))
            elif isinstance(stmt, Havoc):
                instrs.append(("havoc", index[stmt.var]))
            elif isinstance(stmt, Assume):
                instrs.append(("assume", _compile_cond(stmt.cond, index)))
            elif isinstance(stmt, If):
                branch_at = len(instrs)
                instrs.append(None)  # patched below
                emit(stmt.then_body)
                jump_at = len(instrs)
                instrs.append(None)
                else_at = len(instrs)
                emit(stmt.else_body)
                instrs[branch_at] = ("branch", _compile_cond(stmt.cond, index), branch_at + 1, else_at)
                instrs[jump_at] = ("jump", len(instrs))
            elif isinstance(stmt, While):
                head = len(instrs)
                instrs.append(("loophead", stmt.id))
                branch_at = len(instrs)
                instrs.append(None)
                emit(stmt.body)
                instrs.append(("jump", head))
                instrs[branch_at] = ("branch", _compile_cond(stmt.cond, index), branch_at + 1, len(instrs))
            else:
                raise TypeError(f"unknown statement {stmt!r}")

    emit(program.body)
    return instrs


def _initial_values(program: Program, window: Tuple[int, ...]) -> List[List[int]]:
    """Per-variable initial value lists: full finite ranges, sampled otherwise."""
    per_var: List[List[int]] = []
    for decl in program.decls:
        if is_finite(decl.lo) and is_finite(decl.hi):
            per_var.append(list(range(decl.lo, decl.hi + 1)))
            continue
        samples = {w for w in window if decl.lo <= w <= decl.hi}
        if is_finite(decl.lo):
            samples.add(decl.lo)
        if is_finite(decl.hi):
            samples.add(decl.hi)
        if not samples:
            raise OracleConfigError(
                f"variable {decl.var!r} has an infinite initial interval and the "
                "havoc window provides no sample inside it"
            )
        per_var.append(sorted(samples))
    return per_var


def explore(program: Program, bounds: ExplorationBounds = ExplorationBounds()) -> ExplorationResult:
    """Breadth-first closure of the concrete semantics, recording loop-head states."""
    instrs = _compile(program)
    havoc_values = sorted(set(bounds.havoc_window))
    loop_states: Dict[int, Set[Tuple[int, ...]]] = {w.id: set() for w in program.loops()}
    truncated = False

    queue: deque = deque()
    visited: Set[Tuple[int, Tuple[int, ...]]] = set()
    for values in itertools.product(*_initial_values(program, bounds.havoc_window)):
        if len(visited) >= bounds.max_states:
            truncated = True
            break
        config = (0, values)
        if config not in visited:
            visited.add(config)
            queue.append(config)

    expansions = 0
    end = len(instrs)
    while queue:
        if expansions >= bounds.max_steps:
            truncated = True
            break
        pc, state = queue.popleft()
        expansions += 1
        if pc == end:
            continue
        kind = instrs[pc][0]
        if kind == "assign":
            _, i, evaluate = instrs[pc]
            successors = [(pc + 1, state[:i] + (evaluate(state),) + state[i + 1 :])]
        elif kind == "havoc":
            _, i = instrs[pc]
            if not havoc_values:
                raise OracleConfigError("havoc statement with an empty havoc window")
            successors = [(pc + 1, state[:i] + (w,) + state[i + 1 :]) for w in havoc_values]
        elif kind == "assume":
            _, test = instrs[pc]
            successors = [(pc + 1, state)] if test(state) else []
        elif kind == "branch":
            _, test, t_true, t_false = instrs[pc]
            successors = [(t_true if test(state) else t_false, state)]
        elif kind == "jump":
            successors = [(instrs[pc][1], state)]
        else:  # loophead
            loop_states[instrs[pc][1]].add(state)
            successors = [(pc + 1, state)]
        for succ in successors:
            if succ not in visited:
                if len(visited) >= bounds.max_states:
                    truncated = True
                    continue
                visited.add(succ)
                queue.append(succ)

    return ExplorationResult(program.variables, loop_states, truncated)


def check_soundness(report: AnalysisReport, concrete: ExplorationResult) -> SoundnessVerdict:
    """Every concrete loop-head state must be covered by that loop's invariant."""
    counterexamples: List[Tuple[int, Dict[str, int]]] = []
    checked = 0
    names = concrete.variables
    for loop_id in sorted(concrete.loop_states):
        if loop_id not in report.loop_invariants:
            raise ValueError(f"loop id {loop_id} missing from the analysis report")
        env = report.loop_invariants[loop_id]
        if env_is_bottom(env):
            for state in sorted(concrete.loop_states[loop_id]):
                checked += 1
                counterexamples.append((loop_id, dict(zip(names, state))))
            continue
        spans = [env[name] for name in names]
        for state in sorted(concrete.loop_states[loop_id]):
            checked += 1
            for span, value in zip(spans, state):
                if not span.lo <= value <= span.hi:
                    counterexamples.append((loop_id, dict(zip(names, state))))
                    break
    return SoundnessVerdict(not counterexamples, counterexamples, checked)
