"""Frontend and abstract semantics for the analyzed while-language."""

from .analysis import (
    AnalysisReport,
    DelayedWidening,
    NaiveWidening,
    Strategy,
    ThresholdWidening,
    analyze,
    compile_strategy,
    env_refine,
    initial_env,
    interval_affine_eval,
    strategy_label,
    transfer_stmt,
)
from .ast import (
    AffineExpr,
    Assign,
    Assume,
    Cond,
    Decl,
    Havoc,
    If,
    Program,
    Stmt,
    While,
    negate,
)
from .parser import ParseError, ParseIssue, parse

__all__ = [
    "AffineExpr",
    "AnalysisReport",
    "Assign",
    "Assume",
    "Cond",
    "Decl",
    "DelayedWidening",
    "Havoc",
    "If",
    "NaiveWidening",
    "ParseError",
    "ParseIssue",
    "Program",
    "Stmt",
    "Strategy",
    "ThresholdWidening",
    "While",
    "analyze",
    "compile_strategy",
    "env_refine",
    "initial_env",
    "interval_affine_eval",
    "negate",
    "parse",
    "strategy_label",
    "transfer_stmt",
]
