"""Deterministic simulator of N00N-state optical interferometry."""

from .config import DEFAULT_PHOTON_CAP, photon_cap, photon_cap_scope
from .elements import (
    CircuitStep,
    StepKind,
    apply_beamsplitter,
    apply_circuit,
    apply_cross_kerr,
    apply_phase,
    inverse_circuit,
)
from .errors import (
    CapacityError,
    CircuitError,
    ContractError,
    DegenerateObjectiveError,
    DegenerateReferenceError,
    DimensionError,
    NoonLabError,
    NumericalError,
    ParameterError,
    SingularPointError,
    UndefinedStateError,
)
from .fock import (
    Moments,
    PureState,
    fidelity,
    inner_product,
    norm_squared,
    number_moments,
    tensor_product,
)
from .generation import (
    GenerationResult,
    HeraldPattern,
    generate_noon4_lkd,
    generate_noon_gc,
    herald_project,
    optimize_success,
)
from .interferometry import (
    Difference,
    FringeScan,
    NoonProjector,
    NPhotonRate,
    SensitivityReport,
    classical_mzi_signal,
    contrast_factor,
    difference_signal,
    effective_wavelength,
    fringe_scan,
    noon_projector,
    nphoton_rate,
    opa_fringe,
    phase_sensitivity,
    reference_limits,
    run_mzi,
    visibility,
)
from .loss import LossSweep, breakeven_gamma, contrast_curves, sensitivity_comparison, super_beer_factors
from .optimize import golden_section_max, scan_then_refine
from .states import CoherentSpec, OpaSpec, make_coherent, make_fock, make_noon, make_opa

__all__ = [
    "DEFAULT_PHOTON_CAP",
    "photon_cap",
    "photon_cap_scope",
    "CircuitStep",
    "StepKind",
    "apply_beamsplitter",
    "apply_circuit",
    "apply_cross_kerr",
    "apply_phase",
    "inverse_circuit",
    "CapacityError",
    "CircuitError",
    "ContractError",
    "DegenerateObjectiveError",
    "DegenerateReferenceError",
    "DimensionError",
    "NoonLabError",
    "NumericalError",
    "ParameterError",
    "SingularPointError",
    "UndefinedStateError",
    "Moments",
    "PureState",
    "fidelity",
    "inner_product",
    "norm_squared",
    "number_moments",
    "tensor_product",
    "GenerationResult",
    "HeraldPattern",
    "generate_noon4_lkd",
    "generate_noon_gc",
    "herald_project",
    "optimize_success",
    "Difference",
    "FringeScan",
    "NoonProjector",
    "NPhotonRate",
    "SensitivityReport",
    "classical_mzi_signal",
    "contrast_factor",
    "difference_signal",
    "effective_wavelength",
    "fringe_scan",
    "noon_projector",
    "nphoton_rate",
    "opa_fringe",
    "phase_sensitivity",
    "reference_limits",
    "run_mzi",
    "visibility",
    "LossSweep",
    "breakeven_gamma",
    "contrast_curves",
    "sensitivity_comparison",
    "super_beer_factors",
    "golden_section_max",
    "scan_then_refine",
    "CoherentSpec",
    "OpaSpec",
    "make_coherent",
    "make_fock",
    "make_noon",
    "make_opa",
]
