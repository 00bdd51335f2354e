"""Log-rank and closest bounded-log-rank approximation.

The log-rank of ``A = P U P`` is the larger of the number of eigenvalues of
``P^2`` different from one and the number of phases of ``U`` different from
zero.  Because the distance splits over the two legs, the closest matrix of
log-rank at most ``r`` is ``P_r U_r P_r`` where each leg keeps its ``r``
largest log-eigenvalues (resp. phases) in absolute value and resets the
rest.  The truncation does not depend on the gauge functions.
"""

from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .errors import InvalidInput
from .finsler import MetricConfig, gauge_eval
from .geometry import check_accretive_unitary
from .manifold import sym_polar
from .matcore import check_positive_definite, ct, eig_hermitian, eig_normal, herm, sqrtm_pd


class LogRankResult(NamedTuple):
    r_P: int
    r_U: int
    r: int


class LogRankApprox(NamedTuple):
    A_r: np.ndarray
    P2_r: np.ndarray
    U_r: np.ndarray
    objective_P: float
    objective_U: float
    distance: float


def log_rank(A, tol_one=None, tol_zero=None):
    """Count eigenvalues of ``P^2`` with ``|log lambda| > tol_one`` and
    phases of ``U`` with ``|phi| > tol_zero``."""
    tols = get_tolerances()
    tol_one = tols.tol_one if tol_one is None else tol_one
    tol_zero = tols.tol_zero if tol_zero is None else tol_zero
    sp = sym_polar(A)
    r_p = int(np.sum(np.abs(np.log(np.linalg.eigvalsh(sp.P2))) > tol_one))
    r_u = int(np.sum(np.abs(np.angle(eig_normal(sp.U).lam)) > tol_zero))
    return LogRankResult(r_p, r_u, max(r_p, r_u))


def closest_pd(A, cfg=None):
    """Closest positive definite matrix: ``P^2`` from ``A = P U P``."""
    return sym_polar(A).P2


def closest_au(A, cfg=None):
    """Closest strictly accretive unitary matrix: ``U`` from ``A = P U P``."""
    return sym_polar(A).U


def _truncation_order(keys, values):
    # largest |key| first; ties by larger value, then original index
    idx = np.arange(keys.size)
    return np.lexsort((idx, -values, -np.abs(keys)))


def _check_r(r, n):
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or not 0 <= r <= n:
        raise InvalidInput(f"r must be an integer in [0, {n}], got {r!r}")


def _truncate_pd(P2, r):
    V, lam = eig_hermitian(P2)
    _check_r(r, lam.size)
    loglam = np.log(lam)
    keep = _truncation_order(loglam, lam)[:r]
    new = np.ones_like(lam)
    new[keep] = lam[keep]
    dropped = np.delete(loglam, keep)
    return herm((V * new) @ ct(V)), dropped


def _truncate_unitary(U, r):
    V, lam = eig_normal(U)
    _check_r(r, lam.size)
    ang = np.angle(lam)
    keep = _truncation_order(ang, ang)[:r]
    new = np.ones_like(lam)
    new[keep] = np.exp(1j * ang[keep])
    dropped = np.delete(ang, keep)
    return (V * new) @ ct(V), dropped


def truncate_pd_logrank(P2, r, phi=None):
    """Closest positive definite matrix to ``P2`` with at most ``r``
    eigenvalues different from one.

    The minimizer is the same for every symmetric gauge function, so
    ``phi`` does not affect the result.
    """
    P2 = check_positive_definite(P2, "P2")
    return _truncate_pd(P2, r)[0]


def truncate_unitary_logrank(U, r, phi=None):
    """Closest accretive unitary matrix to ``U`` with at most ``r`` nonzero
    phases (same for every gauge function)."""
    U = check_accretive_unitary(U)
    return _truncate_unitary(U, r)[0]


def closest_logrank(A, r, cfg=None, full_output=False):
    """Closest strictly accretive matrix of log-rank at most ``r``.

    Returns ``A_r`` or, with ``full_output``, a :class:`LogRankApprox` that
    also carries the truncated legs and the two leg objectives; the distance
    to ``A`` is then ``sqrt(Psi(objective_P^2, objective_U^2))``.
    """
    cfg = cfg or MetricConfig()
    sp = sym_polar(A)
    _check_r(r, sp.P.shape[0])
    P2_r, drop_p = _truncate_pd(sp.P2, r)
    U_r, drop_u = _truncate_unitary(sp.U, r)
    P_r = sqrtm_pd(P2_r)
    A_r = P_r @ U_r @ P_r
    if not full_output:
        return A_r
    obj_p = gauge_eval(cfg.phi1, drop_p)
    obj_u = gauge_eval(cfg.phi2, drop_u)
    return LogRankApprox(A_r, P2_r, U_r, obj_p, obj_u, cfg.combine(obj_p, obj_u))
