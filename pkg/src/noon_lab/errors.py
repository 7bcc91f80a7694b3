"""Exception hierarchy shared by all noon_lab modules."""


class NoonLabError(Exception):
    """Base class for every error raised by noon_lab."""


class ParameterError(NoonLabError, ValueError):
    """An argument is outside its allowed domain."""


class DimensionError(NoonLabError, ValueError):
    """Mode counts or mode indices do not fit together."""


class CapacityError(NoonLabError):
    """A term would exceed the global photon cap."""


class UndefinedStateError(NoonLabError):
    """A quantity was requested from a state with zero norm."""


class ContractError(NoonLabError, ValueError):
    """An operation was applied to data it is not defined for."""


class DegenerateReferenceError(NoonLabError):
    """A reference quantity needed for normalisation vanishes."""


class SingularPointError(NoonLabError):
    """The fringe slope vanishes at the requested phase."""

    def __init__(self, phi: float, slope: float):
        super().__init__(f"slope {slope:.3e} vanishes at phi={phi!r}; sensitivity undefined")
        self.phi = phi
        self.slope = slope


class DegenerateObjectiveError(NoonLabError):
    """An optimisation objective is flat over the search interval."""


class NumericalError(NoonLabError):
    """A numerical self-check (finite differences, cross-validation) failed."""


class CircuitError(NoonLabError):
    """A circuit step failed; carries the index of the offending step."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause
