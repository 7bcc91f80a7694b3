"""Optical elements acting on :class:`~noon_lab.fock.PureState`.

Conventions
-----------
* Beam splitter of mixing angle ``theta`` maps creation operators as
  ``a† -> cos θ a† + i sin θ b†`` and ``b† -> i sin θ a† + cos θ b†``;
  reflection carries a ``+i`` (π/2) phase and ``theta = π/4`` is 50-50.
* A phase shifter multiplies a term with ``n`` photons in its mode by
  ``exp(i n φ - n γ)``.  ``γ > 0`` is pure amplitude decay: the state is left
  subnormalised and its squared norm is the survival probability.
* A mirror is a lossless π/2 phase shifter.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CircuitError, DimensionError, ParameterError
from .fock import PureState, unique_rows


def _check_mode(state: PureState, mode: int) -> None:
    if not 0 <= mode < state.mode_count:
        raise DimensionError(f"mode {mode} out of range for {state.mode_count}-mode state")


def _check_pair(state: PureState, mode_a: int, mode_b: int) -> None:
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ParameterError(f"two-mode element needs distinct modes, got {mode_a} twice")


def apply_phase(state: PureState, mode: int, phi: float, gamma: float = 0.0) -> PureState:
    """Multiply each term by exp(i n φ - n γ), n the photon count in ``mode``."""
    _check_mode(state, mode)
    if gamma < 0:
        raise ParameterError(f"loss exponent gamma must be non-negative, got {gamma}")
    n = state.occupations[:, mode]
    return state.replace(state.occupations, state.amplitudes * np.exp(n * complex(-gamma, phi)))


def apply_cross_kerr(state: PureState, mode_a: int, mode_b: int, chi: float) -> PureState:
    """Multiply each term by exp(i χ n_a n_b)."""
    _check_pair(state, mode_a, mode_b)
    occ = state.occupations
    return state.replace(occ, state.amplitudes * np.exp(1j * chi * occ[:, mode_a] * occ[:, mode_b]))


# beam splitter ----------------------------------------------------------------
#
# Within the sector of t photons shared by the two modes the beam splitter is
# exp(iθ G) with G = a†b + ab†, a real symmetric tridiagonal matrix in the
# basis k = photons in mode a.  Diagonalising G keeps the result unitary to
# machine precision for large t, where the explicit binomial expansion suffers
# catastrophic cancellation.


# G also commutes with the reflection k -> t - k, so each sector splits into a
# symmetric and an antisymmetric tridiagonal block of about half the size.

_SQRT_HALF = math.sqrt(0.5)


def _tridiagonal_eigensystem(diag: np.ndarray, off: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(diag) == 1:
        return diag.copy(), np.ones((1, 1))
    return eigh_tridiagonal(diag, off)


@lru_cache(maxsize=24)
def _sector_eigensystem(t: int) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Eigensystems of G restricted to the symmetric and antisymmetric blocks."""
    k = np.arange(t)
    off = np.sqrt((k + 1.0) * (t - k))
    h = (t + 1) // 2
    inner = off[: h - 1]
    if t % 2:
        # the last pair (h-1, h) is coupled to itself by the reflection
        fold = np.zeros(h)
        fold[-1] = off[h - 1]
        sym = _tridiagonal_eigensystem(fold, inner)
        anti = _tridiagonal_eigensystem(-fold, inner)
    else:
        sym = _tridiagonal_eigensystem(np.zeros(h + 1), np.append(inner, math.sqrt(2.0) * off[h - 1]))
        anti = _tridiagonal_eigensystem(np.zeros(h), inner)
    for arr in (*sym, *anti):
        arr.setflags(write=False)
    return sym, anti


def _block_apply(w: np.ndarray, v: np.ndarray, theta: float, x: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(x)
    if not len(nz):
        return np.zeros(len(x), dtype=np.complex128)
    coeff = v[nz].T @ x[nz]
    return v @ (np.exp(1j * theta * w) * coeff)


def _sector_apply_dense(t: int, theta: float, x: np.ndarray) -> np.ndarray:
    (ws, vs), (wa, va) = _sector_eigensystem(t)
    h = (t + 1) // 2
    lo, hi = x[:h], x[t - h + 1:][::-1]
    xs = np.zeros(len(ws), dtype=np.complex128)
    xs[:h] = (lo + hi) * _SQRT_HALF
    if t % 2 == 0:
        xs[h] = x[h]
    xa = (lo - hi) * _SQRT_HALF
    ys = _block_apply(ws, vs, theta, xs)
    ya = _block_apply(wa, va, theta, xa)
    out = np.empty(t + 1, dtype=np.complex128)
    out[:h] = (ys[:h] + ya) * _SQRT_HALF
    out[t - h + 1:] = ((ys[:h] - ya) * _SQRT_HALF)[::-1]
    if t % 2 == 0:
        out[h] = ys[h]
    return out


def _sector_unitary_apply(t: int, theta: float, k_in: np.ndarray, amp_in: np.ndarray) -> np.ndarray:
    if t == 0:
        return amp_in.copy()
    if len(k_in) == 1:
        return amp_in[0] * _sector_column(t, theta, int(k_in[0]))
    x = np.zeros(t + 1, dtype=np.complex128)
    np.add.at(x, k_in, amp_in)
    return _sector_apply_dense(t, theta, x)


@lru_cache(maxsize=8192)
def _sector_column(t: int, theta: float, k: int) -> np.ndarray:
    x = np.zeros(t + 1, dtype=np.complex128)
    x[k] = 1.0
    col = _sector_apply_dense(t, theta, x)
    col.setflags(write=False)
    return col


def apply_beamsplitter(state: PureState, mode_a: int, mode_b: int, theta: float) -> PureState:
    """Mix ``mode_a`` and ``mode_b`` with mixing angle ``theta`` (π/4 is 50-50)."""
    _check_pair(state, mode_a, mode_b)
    occ, amp = state.occupations, state.amplitudes
    if not len(amp):
        return state
    others = [m for m in range(state.mode_count) if m != mode_a and m != mode_b]
    totals = occ[:, mode_a] + occ[:, mode_b]
    # group rows by (photons in the other modes, photons shared by the pair)
    group_key = np.column_stack([occ[:, others], totals]) if others else totals[:, None]
    keys, inverse = unique_rows(group_key)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(len(keys) + 1))

    out_occ, out_amp = [], []
    for g, key in enumerate(keys):
        rows = order[bounds[g]:bounds[g + 1]]
        t = int(key[-1])
        new_amp = _sector_unitary_apply(t, theta, occ[rows, mode_a], amp[rows])
        block = np.empty((t + 1, state.mode_count), dtype=np.int64)
        if others:
            block[:, others] = key[:-1]
        block[:, mode_a] = np.arange(t + 1)
        block[:, mode_b] = t - np.arange(t + 1)
        out_occ.append(block)
        out_amp.append(new_amp)
    return state.replace(np.concatenate(out_occ), np.concatenate(out_amp))


# circuits -------------------------------------------------------------------


class StepKind(enum.Enum):
    PHASE = "PhaseShift"
    LOSSY_PHASE = "LossyPhaseShift"
    BEAM_SPLITTER = "BeamSplitter"
    MIRROR = "Mirror"
    CROSS_KERR = "CrossKerr"


_REQUIRED = {
    StepKind.PHASE: (1, {"phi"}),
    StepKind.LOSSY_PHASE: (1, {"phi", "gamma"}),
    StepKind.BEAM_SPLITTER: (2, {"theta"}),
    StepKind.MIRROR: (1, set()),
    StepKind.CROSS_KERR: (2, {"chi"}),
}


@dataclass(frozen=True)
class CircuitStep:
    """One optical element; parameters that the kind does not use stay ``None``."""

    kind: StepKind
    modes: tuple[int, ...]
    theta: float | None = None
    phi: float | None = None
    gamma: float | None = None
    chi: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        n_modes, needed = _REQUIRED[self.kind]
        if len(self.modes) != n_modes:
            raise ParameterError(f"{self.kind.value} acts on {n_modes} mode(s), got {self.modes}")
        if n_modes == 2 and self.modes[0] == self.modes[1]:
            raise ParameterError(f"{self.kind.value} needs two distinct modes, got {self.modes}")
        for name in ("theta", "phi", "gamma", "chi"):
            given = getattr(self, name) is not None
            if given != (name in needed):
                what = "requires" if name in needed else "does not take"
                raise ParameterError(f"{self.kind.value} {what} parameter {name!r}")
        if self.gamma is not None and self.gamma < 0:
            raise ParameterError(f"gamma must be non-negative, got {self.gamma}")

    @classmethod
    def phase(cls, mode: int, phi: float) -> CircuitStep:
        return cls(StepKind.PHASE, (mode,), phi=phi)

    @classmethod
    def lossy_phase(cls, mode: int, phi: float, gamma: float) -> CircuitStep:
        return cls(StepKind.LOSSY_PHASE, (mode,), phi=phi, gamma=gamma)

    @classmethod
    def beam_splitter(cls, mode_a: int, mode_b: int, theta: float = math.pi / 4) -> CircuitStep:
        return cls(StepKind.BEAM_SPLITTER, (mode_a, mode_b), theta=theta)

    @classmethod
    def mirror(cls, mode: int) -> CircuitStep:
        return cls(StepKind.MIRROR, (mode,))

    @classmethod
    def cross_kerr(cls, mode_a: int, mode_b: int, chi: float) -> CircuitStep:
        return cls(StepKind.CROSS_KERR, (mode_a, mode_b), chi=chi)

    def inverse(self) -> CircuitStep:
        """The inverse element; lossy steps have none."""
        if self.kind is StepKind.LOSSY_PHASE:
            if self.gamma:
                raise ParameterError("a lossy phase shifter is not invertible")
            return CircuitStep.phase(self.modes[0], -self.phi)
        if self.kind is StepKind.PHASE:
            return CircuitStep.phase(self.modes[0], -self.phi)
        if self.kind is StepKind.MIRROR:
            return CircuitStep.phase(self.modes[0], -math.pi / 2)
        if self.kind is StepKind.BEAM_SPLITTER:
            return CircuitStep.beam_splitter(*self.modes, theta=-self.theta)
        return CircuitStep.cross_kerr(*self.modes, chi=-self.chi)

    def apply(self, state: PureState) -> PureState:
        if self.kind is StepKind.PHASE:
            return apply_phase(state, self.modes[0], self.phi)
        if self.kind is StepKind.LOSSY_PHASE:
            return apply_phase(state, self.modes[0], self.phi, self.gamma)
        if self.kind is StepKind.MIRROR:
            return apply_phase(state, self.modes[0], math.pi / 2)
        if self.kind is StepKind.BEAM_SPLITTER:
            return apply_beamsplitter(state, *self.modes, self.theta)
        return apply_cross_kerr(state, *self.modes, self.chi)


def apply_circuit(state: PureState, steps: Sequence[CircuitStep]) -> PureState:
    """Apply ``steps`` left to right.  A failing step raises :class:`CircuitError`."""
    for i, step in enumerate(steps):
        try:
            state = step.apply(state)
        except (DimensionError, ParameterError) as exc:
            raise CircuitError(i, exc) from exc
    return state


def inverse_circuit(steps: Sequence[CircuitStep]) -> list[CircuitStep]:
    return [s.inverse() for s in reversed(steps)]
