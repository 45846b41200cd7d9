"""Besov traces, half-space extensions and Riesz transforms on periodic grids."""

from ._core import (
    ConfigError,
    GridFunction,
    GridSpec,
    KernelKind,
    PreconditionError,
    ResolutionError,
    besov_seminorm,
    config_keys,
    extend,
    family,
    heat_identity_residual,
    heat_time_integral,
    main_estimate_ratio,
    riesz_pv_oracle,
    riesz_transform,
    run_suite,
    set_thread_count,
    suite_names,
    trace_limit,
    uspenskii_ansatz_residual,
    zygmund_seminorm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
