"""Periodic homogenization toolkit: cell problems, Steklov smoothing,
resolvent approximations, and convergence sweeps on the unit torus."""

from ._core import (
    bmo_seminorm,
    fit_rate,
    homogenize,
    run_sweep,
    solve_homogenized,
    solve_resolvent,
    steklov_apply,
)

__all__ = [
    "bmo_seminorm",
    "fit_rate",
    "homogenize",
    "run_sweep",
    "solve_homogenized",
    "solve_resolvent",
    "steklov_apply",
]
