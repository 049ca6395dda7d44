"""Python bindings for the rkit C++ core."""
from ._rkit import (
    RkitError,
    coupled_rearrangement,
    decreasing_rearrangement,
    duff_integrals,
    gradient_seminorm,
    ground_state_energy,
    lp_norm,
    symmetric_rearrangement,
    verify,
)

__all__ = [
    "RkitError",
    "coupled_rearrangement",
    "decreasing_rearrangement",
    "duff_integrals",
    "gradient_seminorm",
    "ground_state_energy",
    "lp_norm",
    "symmetric_rearrangement",
    "verify",
]
