"""Constructors for the input states: Fock, coherent, N00N and OPA twin-beam states."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .config import photon_cap
from .errors import CapacityError, ParameterError
from .fock import PureState

OPA_TAIL_BOUND = 1e-10


@dataclass(frozen=True)
class CoherentSpec:
    """Coherent amplitude plus the probability mass allowed beyond the cutoff."""

    alpha: complex
    tail_epsilon: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.tail_epsilon <= 1e-6:
            raise ParameterError(f"tail_epsilon must lie in (0, 1e-6], got {self.tail_epsilon}")

    @property
    def mean_photons(self) -> float:
        return abs(self.alpha) ** 2


def opa_auto_cutoff(gain_r: float, tail: float = OPA_TAIL_BOUND) -> int:
    """Smallest pair cutoff K with sum_{n>K} |a_n|^2 = tanh(r)^(2K+2) < tail."""
    t2 = math.tanh(gain_r) ** 2
    if t2 == 0.0:
        return 1
    k = max(1, math.ceil(math.log(tail) / math.log(t2)) - 1)
    while t2 ** (k + 1) >= tail:
        k += 1
    return k


@dataclass(frozen=True)
class OpaSpec:
    """Two-mode squeezed vacuum with gain ``gain_r``, truncated at ``pair_cutoff`` pairs.

    ``pair_cutoff=None`` picks the smallest cutoff whose discarded tail is below
    1e-10.  An explicit cutoff must also satisfy that bound.
    """

    gain_r: float
    pair_cutoff: int | None = None

    def __post_init__(self):
        if self.gain_r < 0:
            raise ParameterError(f"gain_r must be non-negative, got {self.gain_r}")
        if self.pair_cutoff is None:
            object.__setattr__(self, "pair_cutoff", opa_auto_cutoff(self.gain_r))
        if self.pair_cutoff < 1:
            raise ParameterError(f"pair_cutoff must be positive, got {self.pair_cutoff}")
        if self.tail_probability >= OPA_TAIL_BOUND:
            raise ParameterError(
                f"pair_cutoff={self.pair_cutoff} leaves tail {self.tail_probability:.3e} >= {OPA_TAIL_BOUND} at r={self.gain_r}"
            )

    @property
    def tail_probability(self) -> float:
        return math.tanh(self.gain_r) ** (2 * (self.pair_cutoff + 1))


def make_fock(counts: Sequence[int]) -> PureState:
    counts = [int(c) for c in counts]
    if not counts:
        raise ParameterError("a Fock state needs at least one mode")
    return PureState(np.array([counts], dtype=np.int64), [1.0], len(counts))


def coherent_cutoff(mean_photons: float, tail_epsilon: float) -> int:
    """Smallest n with P(Poisson(mean) > n) < tail_epsilon."""
    if mean_photons == 0.0:
        return 0
    n = max(0, int(mean_photons))
    # P(X > n) = P(n+1, mean), the regularised lower incomplete gamma
    while gammainc(n + 1, mean_photons) >= tail_epsilon:
        n += 1
    while n > 0 and gammainc(n, mean_photons) < tail_epsilon:
        n -= 1
    return n


def make_coherent(spec: CoherentSpec | complex) -> PureState:
    """Single-mode coherent state truncated by probability mass (not renormalised)."""
    if not isinstance(spec, CoherentSpec):
        spec = CoherentSpec(complex(spec))
    cap = photon_cap()
    nbar = spec.mean_photons
    if nbar > cap / 4:
        raise CapacityError(f"|alpha|^2={nbar} exceeds cap/4={cap / 4}")
    cutoff = coherent_cutoff(nbar, spec.tail_epsilon)
    if cutoff > cap:
        raise CapacityError(f"coherent cutoff {cutoff} exceeds photon cap {cap}")
    n = np.arange(cutoff + 1)
    if nbar == 0.0:
        amp = np.ones(1, dtype=np.complex128)
    else:
        log_mag = -nbar / 2 + n * math.log(abs(spec.alpha)) - 0.5 * gammaln(n + 1)
        amp = np.exp(log_mag) * np.exp(1j * n * np.angle(spec.alpha))
    return PureState(n.reshape(-1, 1), amp, 1)


def make_noon(n: int, relative_sign: int = 1) -> PureState:
    """(|N,0> + s|0,N>)/sqrt(2), with the normalisation kept."""
    if n < 1:
        raise ParameterError(f"N00N photon number must be positive, got {n}")
    if relative_sign not in (1, -1):
        raise ParameterError("relative_sign must be +1 or -1")
    amp = np.array([1.0, relative_sign]) / math.sqrt(2)
    return PureState(np.array([[n, 0], [0, n]]), amp, 2)


def make_opa(spec: OpaSpec | float) -> PureState:
    """sum_n a_n |n,n> with a_n = tanh(r)^n / cosh(r), truncated and renormalised."""
    if not isinstance(spec, OpaSpec):
        spec = OpaSpec(float(spec))
    cap = photon_cap()
    if 2 * spec.pair_cutoff > cap:
        raise CapacityError(f"pair_cutoff {spec.pair_cutoff} needs {2 * spec.pair_cutoff} photons > cap {cap}")
    n = np.arange(spec.pair_cutoff + 1)
    t = math.tanh(spec.gain_r)
    coeff = np.where(n == 0, 1.0, t ** n.astype(float)) / math.cosh(spec.gain_r)
    coeff = coeff / np.linalg.norm(coeff)
    return PureState(np.stack([n, n], axis=1), coeff, 2)
