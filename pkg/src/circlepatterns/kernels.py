"""Kernel backend selection: compiled extension with pure-numpy fallback.

The compiled module is preferred when importable.  Selection can be forced
with the environment variable CIRCLEPATTERNS_KERNELS=python|compiled (import
time) or switched at runtime with :func:`set_backend` (used by the test
suite and the benchmark to compare both implementations).
"""

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _kernels_c

    _BACKENDS["compiled"] = _kernels_c
except ImportError:  # extension not built; pure fallback
    _kernels_c = None

_env = os.environ.get("CIRCLEPATTERNS_KERNELS", "").strip().lower()
if _env:
    if _env not in _BACKENDS:
        raise ImportError(
            f"CIRCLEPATTERNS_KERNELS={_env!r} requested but only "
            f"{sorted(_BACKENDS)} available"
        )
    _active = _BACKENDS[_env]
else:
    _active = _BACKENDS.get("compiled", _kernels_py)


def available_backends():
    return tuple(sorted(_BACKENDS))


def backend_name() -> str:
    return _active.BACKEND_NAME


def set_backend(name: str) -> str:
    """Switch the active kernel backend; returns the previous backend name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    previous = _active.BACKEND_NAME
    _active = _BACKENDS[name]
    return previous


def s_of_theta(delta, theta):
    return _active.s_of_theta(delta, theta)


def angles_110(theta, u1, u2):
    return _active.angles_110(theta, u1, u2)


def full_110(theta, u1, u2):
    return _active.full_110(theta, u1, u2)


def angles_00d(delta, theta, u1, u2):
    return _active.angles_00d(delta, theta, u1, u2)


def full_00d(delta, theta, u1, u2):
    return _active.full_00d(delta, theta, u1, u2)
