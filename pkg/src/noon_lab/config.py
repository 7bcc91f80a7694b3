"""Global photon cap.

The cap bounds the total photon number of any stored Fock term.  It defaults to
64, can be overridden process-wide with the ``NOON_LAB_NCAP`` environment
variable, and can be changed for a block of code with :func:`photon_cap_scope`.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from collections.abc import Iterator

from .errors import ParameterError

DEFAULT_PHOTON_CAP = 64
ENV_VAR = "NOON_LAB_NCAP"

_override: contextvars.ContextVar[int | None] = contextvars.ContextVar("photon_cap", default=None)


def _parse_cap(raw: str) -> int:
    try:
        cap = int(raw)
    except ValueError:
        raise ParameterError(f"{ENV_VAR}={raw!r} is not an integer") from None
    if cap < 1:
        raise ParameterError(f"{ENV_VAR} must be positive, got {cap}")
    return cap


def photon_cap() -> int:
    """Return the photon cap currently in force."""
    cap = _override.get()
    if cap is not None:
        return cap
    raw = os.environ.get(ENV_VAR)
    return _parse_cap(raw) if raw else DEFAULT_PHOTON_CAP


@contextlib.contextmanager
def photon_cap_scope(cap: int) -> Iterator[int]:
    """Temporarily set the photon cap for the current context."""
    if int(cap) < 1:
        raise ParameterError(f"photon cap must be positive, got {cap}")
    token = _override.set(int(cap))
    try:
        yield int(cap)
    finally:
        _override.reset(token)
