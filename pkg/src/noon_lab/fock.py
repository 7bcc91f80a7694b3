"""Sparse multi-mode Fock-space states.

A :class:`PureState` is a sparse map from occupation vectors (photon counts per
mode) to complex amplitudes.  Internally the map is held as a pair of numpy
arrays, an ``(T, M)`` integer array of occupation rows sorted lexicographically
and a length-``T`` complex array of amplitudes.  States are immutable; every
operation returns a new state.

States may be subnormalised (after loss or heralding) but never
super-normalised.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .config import photon_cap
from .errors import CapacityError, DimensionError, NumericalError, ParameterError, UndefinedStateError

DEFAULT_PRUNE_THRESHOLD = 1e-14
NORM_SLACK = 1e-9

Occupation = tuple[int, ...]


def row_codes(occ: np.ndarray) -> np.ndarray | None:
    """Mixed-radix integer code per row, ordered like the rows lexicographically.

    Returns None when the code would overflow int64.
    """
    radix = occ.max(axis=0).astype(np.int64) + 1
    if float(np.prod(radix.astype(float))) >= 2.0**62:
        return None
    strides = np.ones(len(radix), dtype=np.int64)
    for m in range(len(radix) - 2, -1, -1):
        strides[m] = strides[m + 1] * radix[m + 1]
    return occ @ strides


def unique_rows(occ: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted unique rows and, for each input row, the index of its unique row."""
    codes = row_codes(occ) if occ.shape[1] else None
    if codes is None:
        uniq, inverse = np.unique(occ, axis=0, return_inverse=True)
        return uniq, inverse.reshape(-1)
    _, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
    return occ[first], inverse.reshape(-1)


def merge_terms(occ: np.ndarray, amp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum amplitudes of repeated occupation rows and sort the rows."""
    if len(occ) <= 1:
        return occ, amp
    uniq, inverse = unique_rows(occ)
    re = np.bincount(inverse, weights=amp.real, minlength=len(uniq))
    im = np.bincount(inverse, weights=amp.imag, minlength=len(uniq))
    return uniq, re + 1j * im


class PureState:
    """Immutable sparse pure state of ``mode_count`` bosonic modes.

    Construction merges duplicate rows, drops amplitudes whose magnitude is
    not above ``prune_threshold``, and enforces the photon cap and the
    ``norm_squared <= 1 + 1e-9`` bound.
    """

    __slots__ = ("_occ", "_amp", "_mode_count", "_prune", "_index")

    def __init__(
        self,
        occupations: np.ndarray | Sequence[Sequence[int]],
        amplitudes: np.ndarray | Sequence[complex],
        mode_count: int | None = None,
        prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    ):
        amp = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        occ = np.asarray(occupations, dtype=np.int64)
        if mode_count is None:
            if occ.ndim != 2 or occ.shape[0] == 0:
                raise DimensionError("mode_count is required for an empty state")
            mode_count = occ.shape[1]
        if mode_count < 1:
            raise DimensionError(f"mode_count must be positive, got {mode_count}")
        occ = occ.reshape(-1, mode_count) if occ.size else np.zeros((0, mode_count), dtype=np.int64)
        if len(occ) != len(amp):
            raise DimensionError(f"{len(occ)} occupation rows but {len(amp)} amplitudes")
        if prune_threshold < 0:
            raise ParameterError("prune_threshold must be non-negative")
        if occ.size and occ.min() < 0:
            raise ParameterError("occupation numbers must be non-negative")

        occ, amp = merge_terms(occ, amp)
        keep = np.abs(amp) > prune_threshold
        occ, amp = occ[keep], amp[keep]

        cap = photon_cap()
        if len(occ) and int(occ.sum(axis=1).max()) > cap:
            raise CapacityError(f"term with {int(occ.sum(axis=1).max())} photons exceeds photon cap {cap}")
        norm = float(np.vdot(amp, amp).real)
        if norm > 1.0 + NORM_SLACK:
            raise ParameterError(f"state is super-normalised: norm_squared={norm!r}")

        occ.setflags(write=False)
        amp.setflags(write=False)
        self._occ = occ
        self._amp = amp
        self._mode_count = int(mode_count)
        self._prune = float(prune_threshold)
        self._index: dict[Occupation, int] | None = None

    # construction helpers -------------------------------------------------

    @classmethod
    def from_terms(
        cls,
        terms: Mapping[Sequence[int], complex],
        mode_count: int | None = None,
        normalize: bool = False,
        prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    ) -> PureState:
        """Build a state from ``{occupation: amplitude}``."""
        keys = [tuple(int(n) for n in k) for k in terms]
        if mode_count is None:
            if not keys:
                raise DimensionError("mode_count is required for an empty state")
            mode_count = len(keys[0])
        if any(len(k) != mode_count for k in keys):
            raise DimensionError(f"every occupation must have {mode_count} entries")
        amp = np.array([complex(terms[k]) for k in terms], dtype=np.complex128)
        if normalize:
            norm = math.sqrt(float(np.vdot(amp, amp).real))
            if norm == 0.0:
                raise UndefinedStateError("cannot normalise a zero state")
            amp = amp / norm
        return cls(np.array(keys, dtype=np.int64).reshape(-1, mode_count), amp, mode_count, prune_threshold)

    @classmethod
    def vacuum(cls, mode_count: int) -> PureState:
        return cls(np.zeros((1, mode_count), dtype=np.int64), [1.0], mode_count)

    @classmethod
    def empty(cls, mode_count: int) -> PureState:
        return cls(np.zeros((0, mode_count), dtype=np.int64), [], mode_count)

    def replace(self, occupations: np.ndarray, amplitudes: np.ndarray, mode_count: int | None = None) -> PureState:
        """New state with this state's prune threshold."""
        return PureState(
            occupations, amplitudes, self._mode_count if mode_count is None else mode_count, self._prune
        )

    # read access ----------------------------------------------------------

    @property
    def mode_count(self) -> int:
        return self._mode_count

    @property
    def prune_threshold(self) -> float:
        return self._prune

    @property
    def occupations(self) -> np.ndarray:
        return self._occ

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amp

    @property
    def terms(self) -> dict[Occupation, complex]:
        return {tuple(int(n) for n in row): complex(a) for row, a in zip(self._occ, self._amp)}

    def amplitude(self, occupation: Sequence[int]) -> complex:
        """Amplitude of one basis ket (0 if the ket is absent)."""
        if len(occupation) != self._mode_count:
            raise DimensionError(f"occupation {tuple(occupation)} does not have {self._mode_count} modes")
        if self._index is None:
            self._index = {tuple(int(n) for n in row): i for i, row in enumerate(self._occ)}
        i = self._index.get(tuple(int(n) for n in occupation))
        return 0j if i is None else complex(self._amp[i])

    def probability(self, occupation: Sequence[int]) -> float:
        return abs(self.amplitude(occupation)) ** 2

    def photon_totals(self) -> np.ndarray:
        return self._occ.sum(axis=1)

    def __len__(self) -> int:
        return len(self._amp)

    def __iter__(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self.terms.items())

    def __repr__(self) -> str:
        if not len(self):
            return f"PureState(<empty>, modes={self._mode_count})"
        parts = [f"({a.real:.4g}{a.imag:+.4g}j)|{','.join(map(str, row))}>" for row, a in zip(self._occ[:8], self._amp[:8])]
        more = f" + ... ({len(self) - 8} more)" if len(self) > 8 else ""
        return "PureState(" + " + ".join(parts) + more + ")"


@dataclass(frozen=True)
class Moments:
    """Mean and variance of an observable."""

    mean: float
    variance: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @classmethod
    def from_raw(cls, mean: float, second: float) -> Moments:
        """Build from the first two raw moments, clamping round-off negatives."""
        var = second - mean * mean
        if var < 0.0:
            if var < -1e-12 * max(1.0, abs(second)):
                raise NumericalError(f"negative variance {var!r}")
            var = 0.0
        return cls(float(mean), float(var))


def norm_squared(state: PureState) -> float:
    amp = state.amplitudes
    return float(np.vdot(amp, amp).real)


def _check_same_modes(a: PureState, b: PureState) -> None:
    if a.mode_count != b.mode_count:
        raise DimensionError(f"mode count mismatch: {a.mode_count} vs {b.mode_count}")


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_same_modes(a, b)
    if not len(a) or not len(b):
        return 0j
    uniq, inverse = unique_rows(np.concatenate([a.occupations, b.occupations]))
    va = np.zeros(len(uniq), dtype=np.complex128)
    vb = np.zeros(len(uniq), dtype=np.complex128)
    va[inverse[: len(a)]] = a.amplitudes
    vb[inverse[len(a):]] = b.amplitudes
    return complex(np.vdot(va, vb))


def fidelity(target: PureState, state: PureState) -> float:
    """|<target|state>|^2 on renormalised states; global phase drops out."""
    na, nb = norm_squared(target), norm_squared(state)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, abs(inner_product(target, state)) ** 2 / (na * nb))


def _check_mode(state: PureState, mode: int) -> None:
    if not 0 <= mode < state.mode_count:
        raise DimensionError(f"mode {mode} out of range for {state.mode_count}-mode state")


def number_moments(state: PureState, mode: int) -> Moments:
    """Mean and variance of n on ``mode``, on the renormalised state."""
    _check_mode(state, mode)
    norm = norm_squared(state)
    if norm == 0.0:
        raise UndefinedStateError("number moments of a zero-norm state")
    p = np.abs(state.amplitudes) ** 2 / norm
    n = state.occupations[:, mode].astype(float)
    mean = float(p @ n)
    return Moments.from_raw(mean, float(p @ n**2))


def tensor_product(a: PureState, b: PureState) -> PureState:
    """a ⊗ b with a's modes first."""
    ia, ib = np.divmod(np.arange(len(a) * len(b)), len(b))
    occ = np.hstack([a.occupations[ia], b.occupations[ib]]) if len(ia) else np.zeros((0, a.mode_count + b.mode_count), dtype=np.int64)
    amp = a.amplitudes[ia] * b.amplitudes[ib]
    return PureState(occ, amp, a.mode_count + b.mode_count, min(a.prune_threshold, b.prune_threshold))


def max_abs_difference(a: PureState, b: PureState) -> float:
    """Largest amplitude difference over the union of both supports."""
    _check_same_modes(a, b)
    both = np.concatenate([a.occupations, b.occupations])
    if not len(both):
        return 0.0
    uniq, inverse = unique_rows(both)
    diff = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(diff, inverse[: len(a)], a.amplitudes)
    np.add.at(diff, inverse[len(a):], -b.amplitudes)
    return float(np.abs(diff).max())


# ladder operators on raw (occupation, amplitude) arrays; results are not
# PureStates because they need not be normalisable


def lower(occ: np.ndarray, amp: np.ndarray, mode: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply the annihilation operator of ``mode``."""
    n = occ[:, mode]
    keep = n > 0
    new = occ[keep].copy()
    new[:, mode] -= 1
    return new, amp[keep] * np.sqrt(n[keep])


def raise_(occ: np.ndarray, amp: np.ndarray, mode: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply the creation operator of ``mode``."""
    new = occ.copy()
    new[:, mode] += 1
    return new, amp * np.sqrt(new[:, mode])


def combine(parts: Iterable[tuple[np.ndarray, np.ndarray]], mode_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Sum several raw term arrays into one merged array."""
    parts = [p for p in parts if len(p[1])]
    if not parts:
        return np.zeros((0, mode_count), dtype=np.int64), np.zeros(0, dtype=np.complex128)
    occ = np.concatenate([p[0] for p in parts])
    amp = np.concatenate([p[1] for p in parts])
    return merge_terms(occ, amp)
