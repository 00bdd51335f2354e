"""Geometric mean of strictly accretive matrices and its relation to the
geodesic midpoint.

``A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`` (principal roots) is
the unique strictly accretive solution ``G`` of ``G A^{-1} G = B``.
"""

import numpy as np

from .config import get_tolerances
from .errors import ConsistencyError, InvalidInput, Singular
from .finsler import MetricConfig
from .geometry import GeodesicA
from .manifold import check_accretive, is_accretive, sym_polar
from .matcore import as_cmatrix, ct, sqrt_principal, sqrtm_pd

# equality-condition thresholds of midpoint_mean_report
COMPONENT_TOL = 1e-10
COMMUTE_TOL = 1e-8
EQ16_TOL = 1e-9


def geometric_mean(A, B):
    """``A # B`` via principal square roots.

    Raises
    ------
    NotAccretive
        If either argument is not strictly accretive.
    ConsistencyError
        If the computed mean is not strictly accretive.
    """
    A = check_accretive(A)
    B = check_accretive(B, "B")
    Ah = sqrt_principal(A)
    Aih = np.linalg.inv(Ah)
    G = Ah @ sqrt_principal(Aih @ B @ Aih) @ Ah
    if not is_accretive(G)[0]:
        raise ConsistencyError("geometric mean is not strictly accretive")
    return G


def riccati_residual(G, A, B):
    """Relative residual ``||G A^{-1} G - B|| / ||B||``."""
    G = as_cmatrix(G, "G")
    A = as_cmatrix(A)
    B = as_cmatrix(B, "B")
    if np.linalg.cond(A) * get_tolerances().tol_sing >= 1.0:
        raise Singular("A is numerically singular")
    return float(np.linalg.norm(G @ np.linalg.solve(A, G) - B) / np.linalg.norm(B))


def _diagonal_entries(D, name):
    D = np.asarray(D, dtype=complex)
    if D.ndim == 2:
        if D.shape[0] != D.shape[1] or np.any(D - np.diag(np.diag(D))):
            raise InvalidInput(f"{name} must be diagonal")
        D = np.diag(D)
    if D.ndim != 1 or not np.all(np.isfinite(D)) or np.any(D.real <= 0):
        raise InvalidInput(f"{name} must have its diagonal in the open right half plane")
    return D


def congruence_mean(T, D_A, D_B):
    """``T^* (D_A # D_B) T`` for diagonal ``D_A, D_B`` in the right half plane.

    The diagonal mean is entrywise ``sqrt(a) * sqrt(b)``, i.e. modulus
    ``sqrt(|a b|)`` and phase ``(arg a + arg b) / 2``.
    """
    T = as_cmatrix(T, "T")
    a = _diagonal_entries(D_A, "D_A")
    b = _diagonal_entries(D_B, "D_B")
    if a.size != T.shape[0] or b.size != T.shape[0]:
        raise InvalidInput("dimension mismatch between T and the diagonal factors")
    if np.linalg.matrix_rank(T) < T.shape[0]:
        raise InvalidInput("T must be invertible")
    return (ct(T) * (np.sqrt(a) * np.sqrt(b))) @ T


def _is_normal(X):
    s = np.linalg.norm(X, 2)
    return np.linalg.norm(ct(X) @ X - X @ ct(X)) <= COMMUTE_TOL * s * s


def midpoint_mean_report(A, B, cfg=None):
    """Compare ``A # B`` with the geodesic midpoint ``gamma(1/2)``.

    The midpoint is evaluated twice, from the geodesic and as
    ``(P_A^2 # P_B^2)^{1/2} (U_A # U_B) (P_A^2 # P_B^2)^{1/2}``; the two must
    agree to 1e-9 (relative) or :class:`ConsistencyError` is raised.  The
    report lists which of the known sufficient conditions for
    ``A # B = gamma(1/2)`` hold: ``i`` both unitary legs are ``I``, ``ii``
    equal positive definite legs, ``iii`` commuting normal matrices.
    """
    cfg = cfg or MetricConfig()
    A = check_accretive(A)
    B = check_accretive(B, "B")
    pa, pb = sym_polar(A), sym_polar(B)
    n = A.shape[0]
    eye = np.eye(n)

    mid = GeodesicA.between(pa, pb)(0.5)
    half = sqrtm_pd(geometric_mean(pa.P2, pb.P2))
    mid16 = half @ geometric_mean(pa.U, pb.U) @ half
    eq16 = float(np.linalg.norm(mid - mid16) / np.linalg.norm(mid))
    if eq16 > EQ16_TOL:
        raise ConsistencyError(f"midpoint evaluations disagree ({eq16:.3e})")

    G = geometric_mean(A, B)
    gap = float(np.linalg.norm(G - mid))
    conditions = {
        "i": bool(np.linalg.norm(pa.U - eye) <= COMPONENT_TOL * np.sqrt(n)
                  and np.linalg.norm(pb.U - eye) <= COMPONENT_TOL * np.sqrt(n)),
        "ii": bool(np.linalg.norm(pa.P - pb.P) <= COMPONENT_TOL * np.linalg.norm(pa.P)),
        "iii": bool(_is_normal(A) and _is_normal(B)
                    and np.linalg.norm(A @ B - B @ A)
                    <= COMMUTE_TOL * np.linalg.norm(A, 2) * np.linalg.norm(B, 2)),
    }
    equal = gap <= EQ16_TOL * max(1.0, np.linalg.norm(mid))
    return {
        "mean": G,
        "midpoint": mid,
        "gap": gap,
        "eq16_residual": eq16,
        "conditions": conditions,
        "equal": bool(equal),
        "equal_without_known_condition": bool(equal and not any(conditions.values())),
    }
