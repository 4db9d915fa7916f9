"""Simulation and limit-set toolkit for nonautonomous difference and
integrodifference equations.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._idescope import (  # noqa: F401
    ConstraintError,
    ConvergenceError,
    FixedPointResult,
    HypothesisBounds,
    Model,
    SchemaError,
    SeriesResult,
    Trajectory,
    __version__,
    absorbing_bound,
    bh_asy_closed_form,
    bh_closed_form,
    bh_omega_table,
    bh_series_limit,
    catalog,
    compare_reports,
    evolve,
    fixed_point_iterate,
    gronwall_bound,
    hypothesis_bounds,
    make_model,
    orbit,
    ricker_smallness_check,
    ricker_smallness_margin,
    run_config,
    step,
    verify_process_property,
)

__all__ = [
    "ConstraintError",
    "ConvergenceError",
    "FixedPointResult",
    "HypothesisBounds",
    "Model",
    "SchemaError",
    "SeriesResult",
    "Trajectory",
    "__version__",
    "absorbing_bound",
    "bh_asy_closed_form",
    "bh_closed_form",
    "bh_omega_table",
    "bh_series_limit",
    "catalog",
    "compare_reports",
    "evolve",
    "fixed_point_iterate",
    "gronwall_bound",
    "hypothesis_bounds",
    "make_model",
    "orbit",
    "ricker_smallness_check",
    "ricker_smallness_margin",
    "run_config",
    "step",
    "verify_process_property",
]
