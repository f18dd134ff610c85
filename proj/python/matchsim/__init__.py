"""Perfect sampling of stochastic matching models with reneging.

Thin re-export of the C++ core: coupling-from-the-past samplers (generic
control, infinite-server domination, strongly synchronizing words), exact
counting of strongly synchronizing words, and Monte-Carlo loss estimation.
"""

from ._core import (
    LATENCY,
    ArrivalModel,
    CompatibilityGraph,
    ConfigError,
    NonTerminationError,
    beta,
    coalescence_bounds,
    compare_policies,
    compare_samplers_ops,
    count_strongly_synchronizing,
    derive_replication_seed,
    deterministic_model,
    discrete_model,
    distribution_agreement,
    enumerate_traces,
    estimate_loss,
    is_strongly_synchronizing,
    named_graph,
    random_connected_er,
    sample,
    sync_probability,
    trace_of,
    word_step,
    __version__,
)

__all__ = [
    "LATENCY",
    "ArrivalModel",
    "CompatibilityGraph",
    "ConfigError",
    "NonTerminationError",
    "beta",
    "coalescence_bounds",
    "compare_policies",
    "compare_samplers_ops",
    "count_strongly_synchronizing",
    "derive_replication_seed",
    "deterministic_model",
    "discrete_model",
    "distribution_agreement",
    "enumerate_traces",
    "estimate_loss",
    "is_strongly_synchronizing",
    "named_graph",
    "random_connected_er",
    "sample",
    "sync_probability",
    "trace_of",
    "word_step",
    "__version__",
]
