"""Super-Beer loss: fringe contrast of coherent vs N00N light with a lossy arm.

Contrast is the peak-to-peak fringe amplitude relative to the lossless one.
With amplitude decay exp(-nγ) per pass a coherent beam keeps exp(-γ) of its
contrast and a N00N state exp(-Nγ).  γ = ln 2 is the value the "3 dB"
comparison uses.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .interferometry import (
    Difference,
    NoonProjector,
    NPhotonRate,
    SensitivityReport,
    contrast_factor,
    fringe_scan,
    phase_sensitivity,
)
from .fock import PureState, tensor_product
from .states import make_coherent, make_noon

CROSS_CHECK_TOL = 1e-9
BREAKEVEN_TOL = 1e-8


@dataclass(frozen=True)
class LossSweep:
    gammas: tuple[float, ...]
    coherent_contrast: tuple[float, ...]
    noon_contrast: tuple[float, ...]
    N: int

    def __post_init__(self):
        if not (len(self.gammas) == len(self.coherent_contrast) == len(self.noon_contrast)):
            raise ParameterError("sweep columns must have equal lengths")
        if any(g < 0 for g in self.gammas) or any(b <= a for a, b in zip(self.gammas, self.gammas[1:])):
            raise ParameterError("gammas must be non-negative and strictly increasing")


def _coherent_input(n_coherent: float) -> PureState:
    return tensor_product(make_coherent(math.sqrt(n_coherent)), PureState.vacuum(1))


def simulated_coherent_contrast(n_coherent: float, gamma: float) -> float:
    """Difference-signal contrast of a coherent beam through the full interferometer."""
    state = _coherent_input(n_coherent)
    grid = (0.0, math.pi)
    return contrast_factor(fringe_scan(state, grid, gamma, Difference()), fringe_scan(state, grid, 0.0, Difference()))


def simulated_noon_contrast(n: int, gamma: float) -> float:
    """N-photon-rate contrast of N00N(N) with the phase applied between the splitters."""
    state = make_noon(n)
    grid = (0.0, math.pi / n)
    obs = NPhotonRate(n)
    lossy = fringe_scan(state, grid, gamma, obs, bare_phase=True)
    return contrast_factor(lossy, fringe_scan(state, grid, 0.0, obs, bare_phase=True))


def contrast_curves(n: int, n_coherent: float, gamma_grid: Sequence[float]) -> LossSweep:
    """Simulated contrasts over ``gamma_grid``, checked against exp(-γ) and exp(-Nγ)."""
    if n < 1:
        raise ParameterError(f"N must be positive, got {n}")
    if n_coherent <= 0:
        raise ParameterError(f"coherent photon number must be positive, got {n_coherent}")
    gammas = tuple(float(g) for g in gamma_grid)
    coh, noon = [], []
    for g in gammas:
        c = simulated_coherent_contrast(n_coherent, g)
        q = simulated_noon_contrast(n, g)
        if abs(c - math.exp(-g)) > CROSS_CHECK_TOL or abs(q - math.exp(-n * g)) > CROSS_CHECK_TOL:
            raise NumericalError(f"simulated contrasts ({c}, {q}) disagree with closed form at gamma={g}")
        coh.append(c)
        noon.append(q)
    return LossSweep(gammas, tuple(coh), tuple(noon), n)


def _slope_gap(n: int, gamma: float) -> float:
    # maximum fringe slope at unit lossless amplitude: N * contrast for cos(Nφ)
    return n * simulated_noon_contrast(n, gamma) - simulated_coherent_contrast(1.0, gamma)


def breakeven_gamma(n: int) -> float:
    """Loss at which the N00N fringe slope drops to the coherent one.

    Solves N exp(-Nγ) = exp(-γ), i.e. γ* = ln N / (N - 1), and cross-checks
    by bisection on simulated contrasts.
    """
    if n < 2:
        raise ParameterError(f"breakeven needs N >= 2, got {n}")
    closed = math.log(n) / (n - 1)
    lo, hi = 0.0, 5.0
    while hi - lo > 1e-12:
        mid = (lo + hi) / 2
        if _slope_gap(n, mid) > 0:
            lo = mid
        else:
            hi = mid
    simulated = (lo + hi) / 2
    if abs(simulated - closed) > BREAKEVEN_TOL:
        raise NumericalError(f"bisection breakeven {simulated} disagrees with ln(N)/(N-1) = {closed}")
    return closed


@dataclass(frozen=True)
class SensitivityComparison:
    gamma: float
    coherent: SensitivityReport
    noon: SensitivityReport


def sensitivity_comparison(n: int, n_coherent: float, gamma: float) -> SensitivityComparison:
    """Noise-propagated phase uncertainty of both probes at their steepest points.

    The coherent beam is read at φ = π/2 with the difference signal, the N00N
    state with the projector pair at φ = π/(2N).
    """
    coh = phase_sensitivity(_coherent_input(n_coherent), Difference(), math.pi / 2, gamma)
    noon = phase_sensitivity(make_noon(n), NoonProjector(n), math.pi / (2 * n), gamma)
    return SensitivityComparison(gamma, coh, noon)


def super_beer_factors(n: int, gamma: float) -> tuple[float, float]:
    """Closed-form (coherent, N00N) contrast factors exp(-γ), exp(-Nγ)."""
    return math.exp(-gamma), float(np.exp(-n * gamma))
