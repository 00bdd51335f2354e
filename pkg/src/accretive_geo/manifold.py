"""Strictly accretive and sectorial matrices.

Membership tests, phases, the sectorial decomposition ``A = T^* D T``, the
symmetric polar decomposition ``A = P U P``, rotation of a sector onto the
right half plane and a piecewise smooth path from ``A`` to the identity.
"""

from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .errors import InvalidInput, NotAccretive, NotSectorial, PhaseOutOfSector
from .matcore import (
    as_cmatrix,
    cartesian_parts,
    ct,
    eig_hermitian,
    herm,
    invsqrtm_pd,
    polar,
    powm_pd,
    spectral_norm,
    sqrtm_pd,
)

GRID_POINTS = 720
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class SectorialReport(NamedTuple):
    is_sectorial: bool
    theta_star: float
    margin: float
    # (GRID_POINTS, 2) array of (theta, lambda_min(H(e^{i theta} A)))
    support_samples: np.ndarray


class SectorialDecomp(NamedTuple):
    """``A = T^* diag(exp(1j * phases)) T`` with ``phases`` nonincreasing."""

    T: np.ndarray
    phases: np.ndarray

    @property
    def D(self):
        return np.diag(np.exp(1j * self.phases))


class SymPolar(NamedTuple):
    """``A = P U P`` with ``P`` positive definite and ``U`` accretive unitary."""

    P: np.ndarray
    U: np.ndarray

    @property
    def P2(self):
        return herm(self.P @ self.P)

    def compose(self):
        return self.P @ self.U @ self.P


def accretivity_margin(A):
    """Smallest eigenvalue of the Hermitian part of ``A``."""
    H, _ = cartesian_parts(A)
    return float(np.linalg.eigvalsh(H)[0])


def is_accretive(A):
    """Return ``(flag, margin)`` with ``margin = lambda_min(H(A))``.

    ``flag`` is true when the margin exceeds ``tol_pd * ||A||_sp``.
    """
    A = as_cmatrix(A)
    margin = accretivity_margin(A)
    return margin > get_tolerances().tol_pd * spectral_norm(A), margin


def check_accretive(A, name="A"):
    A = as_cmatrix(A, name)
    ok, margin = is_accretive(A)
    if not ok:
        raise NotAccretive(f"{name} is not strictly accretive (lambda_min(H) = {margin:.3e})")
    return A


def _support(H, K, theta):
    """lambda_min(cos(theta) H + sin(theta) K) for an array of angles."""
    theta = np.atleast_1d(theta)
    stack = np.cos(theta)[:, None, None] * H + np.sin(theta)[:, None, None] * K
    return np.linalg.eigvalsh(stack)[:, 0]


def is_sectorial(A, grid=GRID_POINTS, xtol=1e-10):
    """Decide whether ``0`` lies outside the numerical range of ``A``.

    The support function ``theta -> lambda_min(H(e^{i theta} A))`` is
    sampled on a uniform grid over ``[-pi, pi)`` and the best sample is
    refined by golden-section search.  Since the numerical range is convex,
    ``A`` is sectorial exactly when the maximum is positive; numerically the
    maximum must exceed ``tol_pd * ||A||_sp``.
    """
    A = as_cmatrix(A)
    H, S = cartesian_parts(A)
    K = 1j * S  # H(e^{i theta} A) = cos(theta) H + sin(theta) (i S)
    thetas = -np.pi + 2.0 * np.pi * np.arange(grid) / grid
    values = _support(H, K, thetas)
    k = int(np.argmax(values))
    h = 2.0 * np.pi / grid

    def f(x):
        return float(_support(H, K, x)[0])

    a, b = thetas[k] - h, thetas[k] + h
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    theta_star, margin = (c, fc) if fc > fd else (d, fd)
    if values[k] > margin:
        theta_star, margin = thetas[k], float(values[k])
    theta_star = float((theta_star + np.pi) % (2.0 * np.pi) - np.pi)
    flag = margin > get_tolerances().tol_pd * spectral_norm(A)
    samples = np.column_stack([thetas, values])
    return SectorialReport(bool(flag), theta_star, float(margin), samples)


def _rotation_to_accretive(A):
    """Angle ``theta`` such that ``e^{i theta} A`` is strictly accretive.

    Zero for accretive input, otherwise the max-margin angle.
    """
    if is_accretive(A)[0]:
        return 0.0
    report = is_sectorial(A)
    if not report.is_sectorial:
        raise NotSectorial("0 lies in the numerical range of the matrix")
    return report.theta_star


def _accretive_pencil(A):
    """``H^{1/2}``, and the eigendecomposition of ``H^{-1/2} (S/i) H^{-1/2}``."""
    H, S = cartesian_parts(A)
    H_half = sqrtm_pd(H)
    H_ihalf = invsqrtm_pd(H)
    M = herm(H_ihalf @ (-1j * S) @ H_ihalf)
    W, lam = eig_hermitian(M)
    return H_half, W, lam


def sectorial_decomposition(A):
    """Sectorial decomposition ``A = T^* D T`` with ``D`` diagonal unitary.

    The matrix is first rotated into the right half plane (no rotation when
    it is already strictly accretive).  For accretive ``A'`` with
    ``H = H(A')`` and ``M = H^{-1/2} (S(A')/i) H^{-1/2} = W diag(mu) W^*``,
    ``D' = diag((1 + i mu) / |1 + i mu|)`` and
    ``T = diag(|1 + i mu|^{1/2}) W^* H^{1/2}``.
    """
    A = as_cmatrix(A)
    theta = _rotation_to_accretive(A)
    H_half, W, mu = _accretive_pencil(np.exp(1j * theta) * A)
    scale = np.abs(1.0 + 1j * mu) ** 0.5
    T = (scale[:, None] * ct(W)) @ H_half
    return SectorialDecomp(T, np.arctan(mu) - theta)


def phases(A):
    """Phases of a sectorial matrix, nonincreasing.

    For strictly accretive matrices they lie in ``(-pi/2, pi/2)``.  For other
    sectorial matrices the representative is anchored at the max-margin
    rotation ``theta_star``: the phases of ``e^{i theta_star} A`` minus
    ``theta_star``.
    """
    return sectorial_decomposition(A).phases


def sym_polar(A):
    """Symmetric polar decomposition ``A = P U P`` of a strictly accretive matrix.

    ``A = H^{1/2} K H^{1/2}`` with the normal matrix ``K = I + i M``.  The
    polar factors of ``K`` come straight from the eigendecomposition of
    ``M``; then ``L = Q_K^{1/2} H^{1/2} = V_L Q_L`` gives ``P = Q_L`` and
    ``U = V_L^* V_K V_L``.
    """
    A = check_accretive(A)
    H_half, W, mu = _accretive_pencil(A)
    r = np.sqrt(1.0 + mu * mu)
    V_K = (W * ((1.0 + 1j * mu) / r)) @ ct(W)
    Q_K_half = herm((W * np.sqrt(r)) @ ct(W))
    V_L, Q_L = polar(Q_K_half @ H_half)
    return SymPolar(herm(Q_L), ct(V_L) @ V_K @ V_L)


def rotate_to_accretive(A, alpha, beta):
    """Rotate a matrix with phases in ``(alpha, beta)``, ``beta - alpha = pi``.

    Returns ``(e^{-i (alpha + beta)/2} A, -(alpha + beta)/2)``.  Phases are
    compared with the sector modulo ``2 pi``.

    Raises
    ------
    PhaseOutOfSector
        If some phase lies outside the open sector.
    """
    A = as_cmatrix(A)
    if abs((beta - alpha) - np.pi) > 1e-12 * max(1.0, abs(alpha), abs(beta)):
        raise InvalidInput("sector must have opening beta - alpha = pi")
    try:
        ph = phases(A)
    except NotSectorial:
        raise PhaseOutOfSector("matrix is not sectorial") from None
    center = 0.5 * (alpha + beta)
    mid = 0.5 * (ph.max() + ph.min())
    ph = ph - 2.0 * np.pi * np.round((mid - center) / (2.0 * np.pi))
    if ph.min() <= alpha or ph.max() >= beta:
        raise PhaseOutOfSector(
            f"phases [{ph.min():.6g}, {ph.max():.6g}] not inside ({alpha:.6g}, {beta:.6g})"
        )
    rotation = -center
    return np.exp(1j * rotation) * A, rotation


def path_to_identity(A, t):
    """Piecewise smooth path in the accretive set from ``A`` (t=0) to ``I`` (t=1).

    ``T^* D^{1-2t} T`` on ``[0, 1/2)``, ``(T^* T)^{2-2t}`` on ``[1/2, 1)``.
    """
    A = check_accretive(A)
    if not 0.0 <= t <= 1.0:
        raise InvalidInput(f"t must lie in [0, 1], got {t}")
    n = A.shape[0]
    if t == 1.0:
        return np.eye(n, dtype=complex)
    T, ph = sectorial_decomposition(A)
    if t < 0.5:
        return (ct(T) * np.exp(1j * (1.0 - 2.0 * t) * ph)) @ T
    return powm_pd(herm(ct(T) @ T), 2.0 - 2.0 * t)
