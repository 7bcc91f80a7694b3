"""Deterministic 1-D maximisation: coarse grid scan, then golden-section refinement."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from .errors import DegenerateObjectiveError, ParameterError

INV_PHI = (math.sqrt(5) - 1) / 2
FLAT_TOL = 1e-12


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-6) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on [a, b]; returns (x, f(x)) with the bracket narrower than ``tol``."""
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def scan_then_refine(
    f: Callable[[float], float],
    bounds: tuple[float, float],
    grid_points: int = 64,
    tol: float = 1e-6,
    maximize: bool = True,
) -> tuple[float, float]:
    """Global grid scan over ``bounds`` followed by golden-section refinement.

    Ties on the grid go to the smallest x.  Raises
    :class:`DegenerateObjectiveError` if the objective varies by less than
    1e-12 over the grid.
    """
    lo, hi = bounds
    if not lo < hi:
        raise ParameterError(f"empty interval {bounds}")
    if grid_points < 64:
        raise ParameterError("the coarse scan needs at least 64 points")
    sign = 1.0 if maximize else -1.0
    g = lambda x: sign * f(x)  # noqa: E731

    xs = np.linspace(lo, hi, grid_points)
    ys = np.array([g(x) for x in xs])
    if ys.max() - ys.min() < FLAT_TOL:
        raise DegenerateObjectiveError(f"objective is flat on [{lo}, {hi}] (spread {ys.max() - ys.min():.3e})")
    i = int(np.argmax(ys))
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, grid_points - 1)]
    x, y = golden_section_max(g, left, right, tol)
    if y < ys[i]:
        x, y = float(xs[i]), float(ys[i])
    return float(x), sign * float(y)
