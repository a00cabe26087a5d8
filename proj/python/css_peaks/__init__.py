"""Python access to the css_peaks solver core.

Fields are NumPy arrays of shape (n, n) indexed as ``u[j, i]`` with ``j``
along x2 and ``i`` along x1, on the grid ``[-L, L)^2``.
"""

from ._core import (
    Config,
    DomainError,
    Grid2D,
    MarginError,
    PreconditionError,
    RadialProfile,
    SolverError,
    build_ansatz,
    energy,
    gauge_fields,
    minimize_peaks,
    newton_solve,
    pohozaev_check,
    read_snapshot,
    residual,
    solve_ground_state,
    tangency_residual,
    well_profiles,
    write_snapshot,
)

__all__ = [
    "Config",
    "DomainError",
    "Grid2D",
    "MarginError",
    "PreconditionError",
    "RadialProfile",
    "SolverError",
    "build_ansatz",
    "energy",
    "gauge_fields",
    "minimize_peaks",
    "newton_solve",
    "pohozaev_check",
    "read_snapshot",
    "residual",
    "solve_ground_state",
    "tangency_residual",
    "well_profiles",
    "write_snapshot",
]
