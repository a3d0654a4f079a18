"""Enumeration limits and backend selection.

Limits are read from the environment on every call so that the CLI and
tests can adjust them without reloading modules.  ``CHARVAR_MAX_ITER``
caps every enumeration; ``CHARVAR_BACKEND`` picks the kernel backend
(``numba`` or ``numpy``).
"""

import contextlib
import contextvars
import os

GROUP_LIMIT = 10**8
ITER_LIMIT = 10**9

_override = contextvars.ContextVar("charvar_max_iter", default=None)


def _env_limit():
    raw = os.environ.get("CHARVAR_MAX_ITER")
    if raw is None or raw == "":
        return None
    value = int(raw)
    if value < 1:
        raise ValueError("CHARVAR_MAX_ITER must be positive")
    return value


def _cap():
    cap = _override.get()
    if cap is None:
        cap = _env_limit()
    return cap


def iteration_limit(limit=None):
    """Limit on brute-force / representation-space iterations."""
    if limit is not None:
        return limit
    cap = _cap()
    return ITER_LIMIT if cap is None else cap


def group_limit(limit=None):
    """Limit on the order of an enumerated group."""
    if limit is not None:
        return limit
    cap = _cap()
    return GROUP_LIMIT if cap is None else min(GROUP_LIMIT, cap)


@contextlib.contextmanager
def max_iterations(value):
    """Temporarily cap all enumerations at ``value`` iterations."""
    token = _override.set(value)
    try:
        yield
    finally:
        _override.reset(token)


def backend():
    """Name of the kernel backend in use: ``"numba"`` or ``"numpy"``."""
    choice = os.environ.get("CHARVAR_BACKEND", "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"unknown CHARVAR_BACKEND {choice!r}")
    if choice == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
    return choice
