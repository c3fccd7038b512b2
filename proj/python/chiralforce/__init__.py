"""Axial force of guided nanofiber light on a two-level atom."""

from ._core import (
    ConvergenceError,
    DomainError,
    NotGuidedError,
    PhysicsError,
    __version__,
    cutoff_radius_nm,
    eta_infinity,
    eta_infinity_bound,
    modes,
    radial_sweep,
    radius_sweep,
    steady_state,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "NotGuidedError",
    "PhysicsError",
    "__version__",
    "cutoff_radius_nm",
    "eta_infinity",
    "eta_infinity_bound",
    "modes",
    "radial_sweep",
    "radius_sweep",
    "steady_state",
]
