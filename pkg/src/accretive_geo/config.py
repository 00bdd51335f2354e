"""Centralized numerical tolerances.

The active :class:`Tolerances` record lives in a :mod:`contextvars` variable,
so overrides made with :func:`tolerances` are local to the current thread or
task.  The process-wide default can be changed with the environment variable
``ACCRETIVE_GEO_TOL``, e.g. ``ACCRETIVE_GEO_TOL="tol_pd=1e-10,tol_branch=1e-6"``.
"""

import contextlib
import contextvars
import dataclasses
import os

from .errors import InvalidInput

ENV_VAR = "ACCRETIVE_GEO_TOL"


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Tolerance levels.  All are relative to a matrix norm unless noted.

    Attributes
    ----------
    tol_herm : float
        Hermitian check, ``||H - H*|| <= tol_herm * ||H||``.
    tol_orth : float
        Unitarity check, ``||U*U - I||_sp <= tol_orth`` (absolute).
    tol_pd : float
        Positive definiteness / accretivity margin, relative to ``||.||_sp``.
    tol_branch : float
        Angular distance (radians) an eigenvalue must keep from the negative
        real axis before a principal log or square root is taken.
    tol_normal : float
        Normality check, ``||N*N - NN*|| <= tol_normal * ||N||^2``; also the
        gate on the strictly upper part of the Schur factor.
    tol_sing : float
        Singularity gate, ``sigma_min <= tol_sing * sigma_max``.
    tol_resid : float
        Residual bound used by internal consistency assertions.
    tol_one, tol_zero : float
        Log-rank thresholds on ``|log lambda|`` and ``|phase|`` (absolute).
    """

    tol_herm: float = 1e-10
    tol_orth: float = 1e-10
    tol_pd: float = 1e-12
    tol_branch: float = 1e-8
    tol_normal: float = 1e-8
    tol_sing: float = 1e-13
    tol_resid: float = 1e-8
    tol_one: float = 1e-10
    tol_zero: float = 1e-10

    def replace(self, **changes):
        unknown = set(changes) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise InvalidInput(f"unknown tolerance(s): {sorted(unknown)}")
        for name, value in changes.items():
            if not value > 0:
                raise InvalidInput(f"tolerance {name} must be positive, got {value!r}")
        return dataclasses.replace(self, **{k: float(v) for k, v in changes.items()})


def parse_overrides(text):
    """Parse ``"name=value,name=value"`` into a dict of floats."""
    out = {}
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        if not sep:
            raise InvalidInput(f"tolerance override {item!r} is not of the form name=value")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InvalidInput(f"tolerance override {item!r} has a non-numeric value") from None
    return out


def _initial():
    text = os.environ.get(ENV_VAR, "")
    return Tolerances().replace(**parse_overrides(text)) if text else Tolerances()


_current = contextvars.ContextVar("accretive_geo_tolerances", default=_initial())


def get_tolerances():
    return _current.get()


@contextlib.contextmanager
def tolerances(**changes):
    """Temporarily override tolerances in the current context.

    >>> with tolerances(tol_pd=1e-9):
    ...     get_tolerances().tol_pd
    1e-09
    """
    token = _current.set(_current.get().replace(**changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
