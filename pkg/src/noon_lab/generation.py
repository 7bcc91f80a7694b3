"""Heralded N00N-state generators.

Two schemes are simulated:

* a cross-Kerr "magic beam splitter" in which one ancilla photon in a first
  interferometer controls a π phase shift inside a second one;
* a linear-optics scheme that sends |3,3> through a 50-50 beam splitter, taps
  one photon out of each arm, and recombines the surviving |3,1> and |1,3>
  terms into |4,0> + |0,4>.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .elements import CircuitStep, apply_circuit
from .errors import DimensionError, ParameterError
from .fock import PureState, fidelity
from .optimize import scan_then_refine
from .states import make_fock, make_noon


@dataclass(frozen=True)
class HeraldPattern:
    """Exact photon counts demanded on ancilla modes."""

    requirements: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        req = {int(m): int(n) for m, n in dict(self.requirements).items()}
        if any(n < 0 for n in req.values()):
            raise ParameterError(f"herald counts must be non-negative: {req}")
        object.__setattr__(self, "requirements", req)

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(sorted(self.requirements))


@dataclass(frozen=True)
class GenerationResult:
    output: PureState
    success_probability: float
    fidelity_to_target: float | None = None


def herald_project(state: PureState, pattern: HeraldPattern, target: PureState | None = None) -> GenerationResult:
    """Post-select on ``pattern``, drop the ancilla modes and renormalise.

    An impossible pattern yields probability 0 and an empty output rather
    than an exception.
    """
    anc = pattern.modes
    if any(not 0 <= m < state.mode_count for m in anc):
        raise DimensionError(f"herald modes {anc} out of range for {state.mode_count}-mode state")
    keep_modes = [m for m in range(state.mode_count) if m not in pattern.requirements]
    if not keep_modes:
        raise DimensionError("heralding every mode leaves no output")
    occ = state.occupations
    mask = np.ones(len(occ), dtype=bool)
    for m, n in pattern.requirements.items():
        mask &= occ[:, m] == n
    amp = state.amplitudes[mask]
    prob = float(np.vdot(amp, amp).real)
    if prob == 0.0:
        out = PureState.empty(len(keep_modes))
        return GenerationResult(out, 0.0, None if target is None else 0.0)
    out = state.replace(occ[mask][:, keep_modes], amp / math.sqrt(prob), len(keep_modes))
    fid = None if target is None else fidelity(target, out)
    return GenerationResult(out, prob, fid)


def relabel(steps: Sequence[CircuitStep], mapping: Mapping[int, int]) -> list[CircuitStep]:
    """Rename the modes that ``steps`` act on."""
    out = []
    for s in steps:
        modes = tuple(mapping.get(m, m) for m in s.modes)
        out.append(CircuitStep(s.kind, modes, s.theta, s.phi, s.gamma, s.chi))
    return out


# cross-Kerr scheme ---------------------------------------------------------------
#
# modes: 0 ancilla input/port C of the control MZI, 1 its lower arm/port D,
#        2 signal arm A/port C of the target MZI, 3 signal arm B/port D.
# With the +i reflection convention the heralded output is
# (i^N |0,N> -/+ (-1)^N |N,0>)/2; a fixed -π/2 trim on mode 2 turns it into
# (|N,0> -/+ |0,N>)/sqrt(2) for every N.

GC_OUTPUT_TRIM = -math.pi / 2


def gc_circuit(chi: float = math.pi) -> list[CircuitStep]:
    return [
        CircuitStep.beam_splitter(0, 1),
        CircuitStep.beam_splitter(2, 3),
        CircuitStep.cross_kerr(1, 2, chi),
        CircuitStep.beam_splitter(0, 1),
        CircuitStep.beam_splitter(2, 3),
        CircuitStep.phase(2, GC_OUTPUT_TRIM),
    ]


def generate_noon_gc(n: int, chi: float = math.pi, port: str = "D") -> GenerationResult:
    """Cross-Kerr N00N generator heralded on the ancilla leaving ``port``.

    Port D heralds (|N,0> + |0,N>)/sqrt(2) and port C heralds the minus-sign
    N00N state; each branch occurs with probability 1/2 at χ = π.
    """
    if n < 1:
        raise ParameterError(f"N must be positive, got {n}")
    if port not in ("C", "D"):
        raise ParameterError(f"ancilla port must be 'C' or 'D', got {port!r}")
    state = apply_circuit(make_fock((1, 0, n, 0)), gc_circuit(chi))
    pattern = HeraldPattern({0: 0, 1: 1} if port == "D" else {0: 1, 1: 0})
    target = make_noon(n, 1 if port == "D" else -1)
    return herald_project(state, pattern, target)


# linear-optics scheme ----------------------------------------------------------
#
# modes: 0 upper arm, 1 lower arm, 2 upper tap detector, 3 lower tap detector.
# Equal taps give the heralded |3,1> and |1,3> identical amplitudes, which the
# final 50-50 splitter maps back onto themselves.  A π/2 arm phase before
# recombination supplies the relative phase for the reverse HOM step and a π/4
# trim afterwards fixes the output sign to |4,0> + |0,4>.

LKD_ARM_PHASE = math.pi / 2
LKD_OUTPUT_TRIM = math.pi / 4
LKD_HERALD = HeraldPattern({2: 1, 3: 1})
LKD_THETA_BOUNDS = (1e-3, math.pi / 2 - 1e-3)


def _check_tap(tap_theta: float) -> None:
    if not 0.0 < tap_theta < math.pi / 2:
        raise ParameterError(f"tap_theta must lie in (0, π/2), got {tap_theta}")


def lkd_tap_circuit(tap_theta: float) -> list[CircuitStep]:
    return [
        CircuitStep.beam_splitter(0, 1),
        CircuitStep.beam_splitter(0, 2, tap_theta),
        CircuitStep.beam_splitter(1, 3, tap_theta),
    ]


def lkd_recombination() -> list[CircuitStep]:
    return [
        CircuitStep.phase(0, LKD_ARM_PHASE),
        CircuitStep.beam_splitter(0, 1),
        CircuitStep.phase(0, LKD_OUTPUT_TRIM),
    ]


def lkd_heralded_intermediate(tap_theta: float, swap_arms: bool = False) -> GenerationResult:
    """Interferometer state right after both tap detectors register one photon."""
    _check_tap(tap_theta)
    steps = lkd_tap_circuit(tap_theta)
    if swap_arms:
        steps = relabel(steps, {0: 1, 1: 0, 2: 3, 3: 2})
    return herald_project(apply_circuit(make_fock((3, 3, 0, 0)), steps), LKD_HERALD)


def generate_noon4_lkd(tap_theta: float, swap_arms: bool = False) -> GenerationResult:
    """Heralded |4,0> + |0,4> from |3,3> with both taps at mixing angle ``tap_theta``."""
    mid = lkd_heralded_intermediate(tap_theta, swap_arms)
    target = make_noon(4)
    if mid.success_probability == 0.0:
        return GenerationResult(mid.output, 0.0, 0.0)
    steps = lkd_recombination()
    if swap_arms:
        steps = relabel(steps, {0: 1, 1: 0})
    out = apply_circuit(mid.output, steps)
    return GenerationResult(out, mid.success_probability, fidelity(target, out))


def _lkd_objective(name: str) -> Callable[[float], float]:
    if name == "probability":
        return lambda th: generate_noon4_lkd(th).success_probability
    if name in ("probability*fidelity", "probability_x_fidelity"):
        def f(th: float) -> float:
            r = generate_noon4_lkd(th)
            return r.success_probability * r.fidelity_to_target
        return f
    raise ParameterError(f"unknown objective {name!r}; expected 'probability' or 'probability*fidelity'")


def optimize_success(
    objective: str | Callable[[float], float] = "probability",
    theta_bounds: tuple[float, float] = LKD_THETA_BOUNDS,
    grid_points: int = 64,
    tol: float = 1e-6,
    maximize: bool = True,
) -> tuple[float, float]:
    """Tune the tap mixing angle: 64-point scan, then golden-section to ``tol``.

    ``objective`` names a figure of merit of :func:`generate_noon4_lkd` or is
    any callable of θ.
    """
    lo, hi = theta_bounds
    if not 0.0 < lo < hi < math.pi / 2:
        raise ParameterError(f"theta bounds must lie inside (0, π/2), got {theta_bounds}")
    f = _lkd_objective(objective) if isinstance(objective, str) else objective
    return scan_then_refine(f, (lo, hi), grid_points, tol, maximize)
