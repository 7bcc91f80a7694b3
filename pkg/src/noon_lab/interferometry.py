"""Mach-Zehnder interferometry and the metrology figures of merit.

Mode 0 (A) carries the phase shifter and any loss.  After the second beam
splitter mode 0 is the dark port C and mode 1 is the bright port D, so the
difference signal n_D - n_C equals I_A cos φ for light entering port A.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .elements import apply_beamsplitter, apply_phase
from .errors import (
    ContractError,
    DegenerateReferenceError,
    DimensionError,
    NumericalError,
    ParameterError,
    SingularPointError,
    UndefinedStateError,
)
from .fock import Moments, PureState, combine, lower, norm_squared, raise_

FD_STEP = 1e-5
RICHARDSON_RTOL = 1e-6
SLOPE_FLOOR = 1e-9


class PortIntensities(NamedTuple):
    i_c: float
    i_d: float
    m: float


def classical_mzi_signal(intensity_a: float, phi: float) -> PortIntensities:
    """Classical port intensities for light entering port A."""
    if intensity_a < 0:
        raise ParameterError(f"intensity must be non-negative, got {intensity_a}")
    i_c = intensity_a * math.sin(phi / 2) ** 2
    i_d = intensity_a * math.cos(phi / 2) ** 2
    # rebuild the smaller share from the larger; the subtraction is exact
    # (Sterbenz) so i_c + i_d == intensity_a holds bit for bit
    if i_c <= i_d:
        i_d = intensity_a - i_c
        i_c = intensity_a - i_d
    else:
        i_c = intensity_a - i_d
        i_d = intensity_a - i_c
    return PortIntensities(i_c, i_d, intensity_a * math.cos(phi))


def _require_two_modes(state: PureState) -> None:
    if state.mode_count != 2:
        raise DimensionError(f"interferometer needs a two-mode state, got {state.mode_count} modes")


def run_mzi(state: PureState, phi: float, gamma: float = 0.0, bare_phase: bool = False) -> PureState:
    """Send ``state`` through the interferometer.

    With ``bare_phase`` the input is taken to be already between the beam
    splitters and only the (lossy) phase shifter on mode A is applied.
    """
    _require_two_modes(state)
    if bare_phase:
        return apply_phase(state, 0, phi, gamma)
    state = apply_beamsplitter(state, 0, 1, math.pi / 4)
    state = apply_phase(state, 0, phi, gamma)
    return apply_beamsplitter(state, 0, 1, math.pi / 4)


def difference_signal(state: PureState) -> Moments:
    """Moments of n_D - n_C (mode 1 minus mode 0) on the renormalised state."""
    _require_two_modes(state)
    norm = norm_squared(state)
    if norm == 0.0:
        raise UndefinedStateError("difference signal of a zero-norm state")
    p = np.abs(state.amplitudes) ** 2 / norm
    d = (state.occupations[:, 1] - state.occupations[:, 0]).astype(float)
    return Moments.from_raw(float(p @ d), float(p @ d**2))


def _lower_combined(occ: np.ndarray, amp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Apply e = (a + b)/sqrt(2)."""
    occ, amp = combine([lower(occ, amp, 0), lower(occ, amp, 1)], 2)
    return occ, amp / math.sqrt(2)


def _raise_combined(occ: np.ndarray, amp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    occ, amp = combine([raise_(occ, amp, 0), raise_(occ, amp, 1)], 2)
    return occ, amp / math.sqrt(2)


def nphoton_rate(state: PureState, n: int) -> Moments:
    """Moments of (e†)^N e^N for the symmetric mode e = (a + b)/sqrt(2).

    This is an absolute rate: it is evaluated on the state as given, so
    probability removed by loss counts as events in which the N-photon
    detector does not fire.
    """
    _require_two_modes(state)
    if n < 1:
        raise ParameterError(f"N must be positive, got {n}")
    if norm_squared(state) == 0.0:
        raise UndefinedStateError("N-photon rate of a zero-norm state")
    occ, amp = state.occupations, state.amplitudes
    for _ in range(n):
        occ, amp = _lower_combined(occ, amp)
    mean = float(np.vdot(amp, amp).real)
    for _ in range(n):
        occ, amp = _raise_combined(occ, amp)
    second = float(np.vdot(amp, amp).real)
    return Moments.from_raw(mean, second)


def noon_projector(state: PureState, n: int) -> Moments:
    """Moments of |N,0><0,N| + |0,N><N,0| on the renormalised state."""
    _require_two_modes(state)
    norm = norm_squared(state)
    if norm == 0.0:
        raise UndefinedStateError("projector moments of a zero-norm state")
    c_up = state.amplitude((n, 0))
    c_down = state.amplitude((0, n))
    mean = 2.0 * (c_up.conjugate() * c_down).real / norm
    second = (abs(c_up) ** 2 + abs(c_down) ** 2) / norm
    return Moments.from_raw(mean, second)


# observables -------------------------------------------------------------


@dataclass(frozen=True)
class Difference:
    """n_D - n_C."""

    signed = True
    forces_bare_phase = False

    @property
    def tag(self) -> str:
        return "difference"

    def measure(self, state: PureState) -> Moments:
        return difference_signal(state)


@dataclass(frozen=True)
class NPhotonRate:
    """N-photon absorption/coincidence rate on the recombined mode."""

    n: int
    signed = False
    forces_bare_phase = False

    @property
    def tag(self) -> str:
        return f"nphoton_rate_{self.n}"

    def measure(self, state: PureState) -> Moments:
        return nphoton_rate(state, self.n)


@dataclass(frozen=True)
class NoonProjector:
    """Projector pair on the N00N subspace, read out on the bare-phase state."""

    n: int
    signed = True
    forces_bare_phase = True

    @property
    def tag(self) -> str:
        return f"noon_projector_{self.n}"

    def measure(self, state: PureState) -> Moments:
        return noon_projector(state, self.n)


Observable = Union[Difference, NPhotonRate, NoonProjector]


def evaluate(state: PureState, observable: Observable, phi: float, gamma: float = 0.0, bare_phase: bool = False) -> Moments:
    """Run the interferometer at one phase and measure ``observable``."""
    bare = bare_phase or observable.forces_bare_phase
    return observable.measure(run_mzi(state, phi, gamma, bare_phase=bare))


# fringe scans --------------------------------------------------------------


@dataclass(frozen=True)
class FringeScan:
    phis: tuple[float, ...]
    values: tuple[float, ...]
    variances: tuple[float, ...]
    observable_tag: str

    def __post_init__(self):
        if not (len(self.phis) == len(self.values) == len(self.variances)):
            raise ParameterError("phis, values and variances must have equal lengths")
        if not self.phis:
            raise ParameterError("a fringe scan needs at least one phase")
        if any(b <= a for a, b in zip(self.phis, self.phis[1:])):
            raise ParameterError("phis must be strictly increasing")
        if any(v < 0 for v in self.variances):
            raise ParameterError("variances must be non-negative")

    @property
    def peak_to_peak(self) -> float:
        return max(self.values) - min(self.values)


def fringe_scan(
    state: PureState,
    phis: Sequence[float],
    gamma: float = 0.0,
    observable: Observable = Difference(),
    bare_phase: bool = False,
) -> FringeScan:
    phis = [float(p) for p in phis]
    if not phis:
        raise ParameterError("phase grid is empty")
    values, variances = [], []
    for phi in phis:
        m = evaluate(state, observable, phi, gamma, bare_phase)
        values.append(m.mean)
        variances.append(m.variance)
    return FringeScan(tuple(phis), tuple(values), tuple(variances), observable.tag)


def visibility(scan: FringeScan) -> float:
    """(max - min)/(max + min) of a non-negative rate."""
    if scan.observable_tag.startswith(("difference", "noon_projector")):
        raise ContractError(f"visibility is undefined for the signed signal {scan.observable_tag!r}; use contrast_factor")
    lo, hi = min(scan.values), max(scan.values)
    if lo < -1e-12:
        raise ContractError("visibility needs a non-negative rate; use contrast_factor for signed signals")
    lo = max(lo, 0.0)
    if hi + lo <= 0.0:
        raise DegenerateReferenceError("visibility undefined: rate vanishes on the whole grid")
    return (hi - lo) / (hi + lo)


def contrast_factor(lossy: FringeScan, lossless: FringeScan) -> float:
    """Peak-to-peak amplitude of ``lossy`` relative to ``lossless``."""
    if lossy.phis != lossless.phis:
        raise ContractError("contrast_factor needs scans on identical phase grids")
    if lossy.observable_tag != lossless.observable_tag:
        raise ContractError(f"observable mismatch: {lossy.observable_tag!r} vs {lossless.observable_tag!r}")
    ref = lossless.peak_to_peak
    if ref == 0.0:
        raise DegenerateReferenceError("lossless scan has zero peak-to-peak amplitude")
    return lossy.peak_to_peak / ref


# sensitivity -----------------------------------------------------------------


@dataclass(frozen=True)
class SensitivityReport:
    delta_phi: float
    at_phi: float
    slope: float
    noise: float


def _central_difference(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2 * h)


def phase_sensitivity(
    state: PureState,
    observable: Observable,
    phi: float,
    gamma: float = 0.0,
    bare_phase: bool = False,
    step: float = FD_STEP,
) -> SensitivityReport:
    """Error-propagation phase uncertainty sqrt(Var M) / |dM/dφ|.

    The slope is a central difference with step ``step`` checked against step
    ``step/2``; the two must agree to 1e-6 relative, and the Richardson
    combination of both is reported.
    """

    def mean(p: float) -> float:
        return evaluate(state, observable, p, gamma, bare_phase).mean

    coarse = _central_difference(mean, phi, step)
    fine = _central_difference(mean, phi, step / 2)
    slope = (4 * fine - coarse) / 3
    if abs(slope) < SLOPE_FLOOR:
        raise SingularPointError(phi, slope)
    if abs(fine - coarse) > RICHARDSON_RTOL * abs(slope):
        raise NumericalError(f"finite-difference slope unstable at phi={phi}: {coarse} vs {fine}")
    noise = math.sqrt(evaluate(state, observable, phi, gamma, bare_phase).variance)
    return SensitivityReport(noise / abs(slope), phi, slope, noise)


# reference limits ------------------------------------------------------------


class ReferenceLimits(NamedTuple):
    snl_phi: float
    hl_phi: float
    snl_x: float
    hl_x: float


def reference_limits(n: float, wavelength: float) -> ReferenceLimits:
    """Shot-noise and Heisenberg limits in phase and in displacement (reduced wavelength λ/2π)."""
    if n <= 0:
        raise ParameterError(f"photon number must be positive, got {n}")
    if wavelength <= 0:
        raise ParameterError(f"wavelength must be positive, got {wavelength}")
    reduced = wavelength / (2 * math.pi)
    return ReferenceLimits(1 / math.sqrt(n), 1 / n, reduced / math.sqrt(n), reduced / n)


def effective_wavelength(wavelength: float, n: int) -> float:
    """Wavelength of N photons acting together."""
    if n < 1:
        raise ParameterError(f"N must be at least 1, got {n}")
    if wavelength <= 0:
        raise ParameterError(f"wavelength must be positive, got {wavelength}")
    return wavelength / n


# bright twin-beam source ---------------------------------------------------------


def opa_fringe(state: PureState, phis: Sequence[float], n: int = 2) -> FringeScan:
    """N-photon fringe of a two-mode source sent through the interferometer.

    The first 50-50 splitter is folded into state preparation and the phase
    applied between the splitters.  The recombined-mode rate is unchanged by
    the second splitter, which maps the symmetric mode onto itself up to a
    phase.
    """
    _require_two_modes(state)
    prepared = apply_beamsplitter(state, 0, 1, math.pi / 4)
    return fringe_scan(prepared, phis, 0.0, NPhotonRate(n), bare_phase=True)


OPA_PHASE_GRID = tuple(np.linspace(0.0, math.pi, 4, endpoint=False))
