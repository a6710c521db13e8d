"""widenkit: widening strategies as lazily built trees, with an interval analyzer.

The core is domain-agnostic: abstract domains implement a small capability
record (order, join, bottom, membership), widening strategies are trees of
proposals built on demand, and a fixpoint engine walks a tree until it can
certify a post-fixpoint.  On top of that sits an integer interval domain, a
toy while-language analyzer that infers per-loop invariants, and a bounded
concrete interpreter used to cross-check every reported invariant.
"""

from .combinators import (
    Ramp,
    delayed_widening_each_step,
    make_ramp,
    pointwise_env_widening,
    product_widening,
    ramp_widening,
    ramp_widening_search,
)
from .domain import Domain
from .extint import NEG_INF, POS_INF, ExtInt
from .intervals import (
    BOTTOM,
    ENV_BOTTOM,
    INTERVAL_DOMAIN,
    TOP,
    AbstractEnv,
    Env,
    Interval,
    IntervalElem,
    env_contains,
    env_domain,
    env_is_bottom,
    env_join,
    env_leq,
    env_str,
    interval_contains,
    interval_is_bottom,
    interval_join,
    interval_leq,
    interval_meet,
    interval_widen_brutal,
    make_env,
    singleton,
)
from .solver import (
    DEFAULT_FUEL,
    BrokenWidening,
    FuelExhausted,
    PostFixpointResult,
    SolverDefect,
    abstract_lfp,
)
from .widening import (
    CONVERGED,
    Answer,
    Converged,
    Next,
    WideningNode,
    classic_to_tree,
    make_node,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AbstractEnv",
    "BOTTOM",
    "BrokenWidening",
    "CONVERGED",
    "Converged",
    "DEFAULT_FUEL",
    "Domain",
    "ENV_BOTTOM",
    "Env",
    "ExtInt",
    "FuelExhausted",
    "INTERVAL_DOMAIN",
    "Interval",
    "IntervalElem",
    "NEG_INF",
    "Next",
    "POS_INF",
    "PostFixpointResult",
    "Ramp",
    "SolverDefect",
    "TOP",
    "WideningNode",
    "abstract_lfp",
    "classic_to_tree",
    "delayed_widening_each_step",
    "env_contains",
    "env_domain",
    "env_is_bottom",
    "env_join",
    "env_leq",
    "env_str",
    "interval_contains",
    "interval_is_bottom",
    "interval_join",
    "interval_leq",
    "interval_meet",
    "interval_widen_brutal",
    "make_env",
    "make_node",
    "make_ramp",
    "pointwise_env_widening",
    "product_widening",
    "ramp_widening",
    "ramp_widening_search",
    "singleton",
    "step",
]
