"""Dense complex linear algebra kernel.

Cartesian parts, Hermitian/normal eigendecompositions, the polar
decomposition, principal matrix functions and simultaneous diagonalization
by congruence.  All routines take array-likes, never modify their input and
return fresh ``complex128`` arrays.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .config import get_tolerances
from .errors import (
    BranchCut,
    ConvergenceFailure,
    DomainError,
    EigFailure,
    InvalidInput,
    NotHermitian,
    NotNormal,
    NotPositiveDefinite,
    NotSkewHermitian,
    Singular,
)

_TINY = np.finfo(float).tiny
ANGLE_RESOLUTION = 1e-12


class HermEig(NamedTuple):
    """``H = V @ diag(lam) @ V^*`` with ``lam`` nonincreasing."""

    V: np.ndarray
    lam: np.ndarray


class NormalEig(NamedTuple):
    V: np.ndarray
    lam: np.ndarray


class PolarDecomp(NamedTuple):
    """``A = V @ Q`` with ``V`` unitary and ``Q`` positive definite."""

    V: np.ndarray
    Q: np.ndarray


class CongruenceDiag(NamedTuple):
    """``P = S S^*`` and ``Q = S diag(lam) S^*``."""

    S: np.ndarray
    lam: np.ndarray


def as_cmatrix(A, name="A"):
    """Validate ``A`` as a finite square matrix and return a complex copy.

    Scalars are promoted to 1x1 matrices.
    """
    try:
        M = np.array(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: cannot convert to a complex matrix ({exc})") from None
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidInput(f"{name}: expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput(f"{name}: entries must be finite")
    return M


def ct(A):
    """Conjugate transpose."""
    return A.conj().T


def herm(A):
    """Hermitian part ``(A + A^*) / 2``."""
    return 0.5 * (A + ct(A))


def spectral_norm(A):
    return float(np.linalg.norm(A, 2))


def is_hermitian(A, tol=None):
    tol = get_tolerances().tol_herm if tol is None else tol
    return np.linalg.norm(A - ct(A)) <= tol * max(np.linalg.norm(A), _TINY)


def is_unitary(U, tol=None):
    tol = get_tolerances().tol_orth if tol is None else tol
    n = U.shape[0]
    return np.linalg.norm(ct(U) @ U - np.eye(n), 2) <= tol


def cartesian_parts(A):
    """Split ``A`` into Hermitian and skew-Hermitian parts.

    Returns
    -------
    H, S : ndarray
        ``H = (A + A^*)/2`` and ``S = (A - A^*)/2``.  Both are exactly
        (skew-)Hermitian in storage, and ``H + S`` equals ``A`` up to
        rounding.
    """
    A = as_cmatrix(A)
    Ah = ct(A)
    H = 0.5 * (A + Ah)
    S = 0.5 * (A - Ah)
    # the elementwise formulas already give exact conjugate symmetry off the
    # diagonal; only the diagonal needs cleaning
    idx = np.diag_indices_from(H)
    H[idx] = H[idx].real
    S[idx] = 1j * S[idx].imag
    return H, S


def _fix_column_phases(V):
    """Make the first non-negligible entry of every column real positive."""
    big = np.abs(V) > 1e-10
    # unit columns always have an entry above the threshold
    z = V[np.argmax(big, axis=0), np.arange(V.shape[1])]
    return V * (np.conj(z) / np.abs(z))


def _require_hermitian(H, name="H"):
    if not is_hermitian(H):
        raise NotHermitian(f"{name} is not Hermitian within tol_herm")


def eig_hermitian(H):
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in nonincreasing order and every eigenvector
    has its first non-negligible component real and positive, so the output
    is deterministic for a fixed input.  Exactly equal eigenvalues keep the
    LAPACK column order; within a repeated eigenvalue the basis is whatever
    LAPACK returns.

    Raises
    ------
    NotHermitian
        If ``||H - H^*|| > tol_herm ||H||``.
    EigFailure
        If LAPACK does not converge.
    """
    H = as_cmatrix(H, "H")
    _require_hermitian(H)
    try:
        lam, V = np.linalg.eigh(herm(H))
    except np.linalg.LinAlgError as exc:
        raise EigFailure(f"Hermitian eigensolver failed: {exc}") from None
    order = np.argsort(-lam, kind="stable")
    return HermEig(_fix_column_phases(V[:, order]), lam[order])


def eig_normal(N):
    """Unitary diagonalization of a normal matrix via the complex Schur form.

    The Schur factor of a normal matrix is diagonal; its strictly upper part
    is required to be below ``tol_normal * ||N||_sp`` before the diagonal is
    read off.  Eigenpairs are sorted by decreasing angle, then modulus;
    angles are compared after rounding to ``ANGLE_RESOLUTION`` so that
    roundoff does not reorder a real spectrum.
    """
    N = as_cmatrix(N, "N")
    tol = get_tolerances().tol_normal
    s = spectral_norm(N)
    if np.linalg.norm(ct(N) @ N - N @ ct(N)) > tol * max(s * s, _TINY):
        raise NotNormal("matrix is not normal within tol_normal")
    try:
        T, Z = scipy.linalg.schur(N, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigFailure(f"Schur decomposition failed: {exc}") from None
    if np.linalg.norm(np.triu(T, 1)) > tol * max(s, _TINY):
        raise NotNormal("Schur factor is not diagonal within tol_normal")
    lam = np.diag(T).copy()
    key = np.round(np.angle(lam) / ANGLE_RESOLUTION)
    order = np.lexsort((-np.abs(lam), -key))
    return NormalEig(Z[:, order], lam[order])


def polar(A):
    """Polar decomposition ``A = V Q`` of an invertible matrix.

    Computed from the eigendecomposition of ``A^* A`` as
    ``Q = (A^*A)^{1/2}`` and ``V = A (A^*A)^{-1/2}``.  When ``A`` is
    ill-conditioned, ``V`` is re-unitarized by Newton steps and
    ``Q = H(V^* A)``.

    Raises
    ------
    Singular
        If ``sigma_min(A) <= tol_sing * sigma_max(A)``.
    """
    A = as_cmatrix(A)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= get_tolerances().tol_sing * sv[0] or sv[-1] == 0:
        raise Singular(f"matrix is numerically singular (sigma_min = {sv[-1]:.3e})")
    W, lam = eig_hermitian(herm(ct(A) @ A))
    s = np.sqrt(np.maximum(lam, 0.0))
    Q = herm((W * s) @ ct(W))
    V = A @ ((W / s) @ ct(W))
    if np.linalg.norm(ct(V) @ V - np.eye(A.shape[0])) > get_tolerances().tol_orth:
        # unitarity is lost at rate cond(A)^2; V is nearly unitary, so Newton recovers it quickly
        V = polar_newton(V).V
        Q = herm(ct(V) @ A)
    return PolarDecomp(V, Q)


def polar_newton(A, maxiter=100):
    """Polar decomposition by the scaled Newton iteration.

    An independent route to :func:`polar`, used for cross-checking.
    ``X <- (zeta X + X^{-*} / zeta) / 2`` with Frobenius-norm scaling until
    the update stalls.
    """
    A = as_cmatrix(A)
    X = A.copy()
    scaling = True
    prev = np.inf
    for _ in range(maxiter):
        try:
            Xi = np.linalg.inv(X)
        except np.linalg.LinAlgError:
            raise Singular("matrix is singular") from None
        zeta = np.sqrt(np.linalg.norm(Xi) / np.linalg.norm(X)) if scaling else 1.0
        Xn = 0.5 * (zeta * X + ct(Xi) / zeta)
        diff = np.linalg.norm(Xn - X) / np.linalg.norm(Xn)
        X = Xn
        if diff < 1e-2:
            scaling = False
        if diff <= 1e-15 or (diff < 1e-10 and diff >= prev):
            break
        prev = diff
    else:
        raise ConvergenceFailure("Newton polar iteration did not converge")
    return PolarDecomp(X, herm(ct(X) @ A))


def fun_hermitian(H, f, lower=None, strict=False):
    """Apply a scalar function to a Hermitian matrix, ``V diag(f(lam)) V^*``.

    Parameters
    ----------
    H : array_like
        Hermitian matrix.
    f : callable
        Vectorized scalar function.  It may return complex values, in which
        case the result is not symmetrized.
    lower : float, optional
        Lower end of the domain of ``f``.
    strict : bool
        If true the domain is open at ``lower`` (e.g. ``log``).  Otherwise
        eigenvalues below ``lower`` by at most ``tol_pd * ||H||_sp`` are
        clipped to ``lower``.

    Raises
    ------
    DomainError
        If an eigenvalue is outside the domain.
    """
    V, lam = eig_hermitian(H)
    if lower is not None:
        scale = max(np.abs(lam).max(), _TINY)
        if strict:
            bad = lam <= lower
        else:
            bad = lam < lower - get_tolerances().tol_pd * scale
        if np.any(bad):
            raise DomainError(
                f"eigenvalue {lam[bad][0]:.6g} outside the domain "
                f"{'(' if strict else '['}{lower}, inf)"
            )
        if not strict:
            lam = np.maximum(lam, lower)
    vals = np.asarray(f(lam))
    out = (V * vals) @ ct(V)
    if not np.iscomplexobj(vals) or np.all(vals.imag == 0):
        out = herm(out)
    return out


def sqrtm_pd(P):
    return fun_hermitian(P, np.sqrt, lower=0.0)


def invsqrtm_pd(P):
    return fun_hermitian(P, lambda x: 1.0 / np.sqrt(x), lower=0.0, strict=True)


def logm_pd(P):
    return fun_hermitian(P, np.log, lower=0.0, strict=True)


def powm_pd(P, t):
    return fun_hermitian(P, lambda x: x**t, lower=0.0, strict=True)


def expm_hermitian(H):
    return fun_hermitian(H, np.exp)


def _require_skew(Z, name="Z"):
    if np.linalg.norm(Z + ct(Z)) > get_tolerances().tol_herm * max(np.linalg.norm(Z), _TINY):
        raise NotSkewHermitian(f"{name} is not skew-Hermitian within tol_herm")


def expm_skew(Z):
    """Exponential of a skew-Hermitian matrix (a unitary matrix)."""
    Z = as_cmatrix(Z, "Z")
    _require_skew(Z)
    return fun_hermitian(-1j * 0.5 * (Z - ct(Z)), lambda m: np.exp(1j * m))


def log_unitary(U):
    """Principal logarithm of a unitary matrix.

    Returns a skew-Hermitian ``Z`` with ``expm(Z) = U`` and eigenvalue
    phases in ``(-pi, pi)``.

    Raises
    ------
    InvalidInput
        If ``U`` is not unitary within ``tol_orth``.
    BranchCut
        If an eigenvalue phase is within ``tol_branch`` of ``+-pi``.
    """
    U = as_cmatrix(U, "U")
    tols = get_tolerances()
    if not is_unitary(U):
        raise InvalidInput("U is not unitary within tol_orth")
    V, lam = eig_normal(U)
    ang = np.angle(lam)
    if np.any(np.abs(ang) > np.pi - tols.tol_branch):
        raise BranchCut("unitary has an eigenvalue at (or near) -1")
    Z = (V * (1j * ang)) @ ct(V)
    return 0.5 * (Z - ct(Z))


def _check_branch(A):
    tols = get_tolerances()
    ev = np.linalg.eigvals(A)
    scale = max(spectral_norm(A), _TINY)
    if np.min(np.abs(ev)) <= tols.tol_sing * scale:
        raise BranchCut("matrix has an eigenvalue at the origin")
    if np.any(np.abs(np.angle(ev)) > np.pi - tols.tol_branch):
        raise BranchCut("matrix has an eigenvalue on the closed negative real axis")


def _sqrt_denman_beavers(A, maxiter=100, rtol=1e-13):
    """Scaled Denman-Beavers iteration; ``None`` if it does not converge."""
    n = A.shape[0]
    eye = np.eye(n, dtype=complex)
    Y, Z = A.copy(), eye
    scaling = True
    prev = np.inf
    for _ in range(maxiter):
        try:
            Yi = np.linalg.inv(Y)
            Zi = np.linalg.inv(Z)
        except np.linalg.LinAlgError:
            return None
        if scaling:
            # mu = |det(Y) det(Z)|^(-1/(2n)), via log-determinants
            logdet = np.linalg.slogdet(Y)[1] + np.linalg.slogdet(Z)[1]
            mu = np.exp(-logdet / (2 * n))
        else:
            mu = 1.0
        Yn = 0.5 * (mu * Y + Zi / mu)
        Zn = 0.5 * (mu * Z + Yi / mu)
        diff = np.linalg.norm(Yn - Y) / np.linalg.norm(Yn)
        Y, Z = Yn, Zn
        if not np.isfinite(diff):
            return None
        if diff < 1e-2:
            scaling = False
        if diff <= rtol or (diff < 1e-9 and diff >= prev):
            return Y
        prev = diff
    return None


def _sqrt_schur(A):
    """Principal square root by the upper-triangular Schur recurrence."""
    T, Q = scipy.linalg.schur(A, output="complex")
    n = T.shape[0]
    R = np.zeros_like(T)
    for j in range(n):
        R[j, j] = np.sqrt(T[j, j])
        for i in range(j - 1, -1, -1):
            s = R[i, i + 1:j] @ R[i + 1:j, j]
            R[i, j] = (T[i, j] - s) / (R[i, i] + R[j, j])
    return Q @ R @ ct(Q)


def sqrt_principal(A):
    """Principal square root of a matrix with no eigenvalue on ``(-inf, 0]``.

    The scaled Denman-Beavers iteration (budget 100 steps, stopping when the
    relative update drops below 1e-13) is tried first; if it fails, the
    Schur recurrence is used.  The result ``X`` satisfies ``X @ X = A`` and
    has its spectrum in the open right half plane.

    Raises
    ------
    BranchCut
        If ``A`` has an eigenvalue within ``tol_branch`` of the closed
        negative real axis.
    ConvergenceFailure
        If neither method meets the residual tolerance.
    """
    A = as_cmatrix(A)
    _check_branch(A)
    tol = get_tolerances().tol_resid
    nA = np.linalg.norm(A)
    for method in (_sqrt_denman_beavers, _sqrt_schur):
        X = method(A)
        if X is None or not np.all(np.isfinite(X)):
            continue
        if np.linalg.norm(X @ X - A) <= tol * nA and np.all(np.linalg.eigvals(X).real > 0):
            return X
    raise ConvergenceFailure("principal square root did not converge")


def check_positive_definite(P, name="P"):
    """Return the symmetrized ``P`` after checking it is positive definite."""
    P = as_cmatrix(P, name)
    if not is_hermitian(P):
        raise NotPositiveDefinite(f"{name} is not Hermitian")
    P = herm(P)
    lam = np.linalg.eigvalsh(P)
    if lam[0] <= get_tolerances().tol_pd * max(abs(lam[-1]), _TINY):
        raise NotPositiveDefinite(f"{name} has min eigenvalue {lam[0]:.3e}")
    return P


def simdiag_congruence(P, Q):
    """Simultaneous diagonalization of two positive definite matrices.

    With the Cholesky factor ``P = C C^*`` and the Hermitian eigenproblem
    ``C^{-1} Q C^{-*} = W diag(lam) W^*``, ``S = C W`` satisfies ``P = S S^*``
    and ``Q = S diag(lam) S^*``.  ``lam`` are the eigenvalues of
    ``P^{-1} Q`` in nonincreasing order.
    """
    P = check_positive_definite(P, "P")
    Q = check_positive_definite(Q, "Q")
    if P.shape != Q.shape:
        raise InvalidInput("P and Q must have the same shape")
    C = np.linalg.cholesky(P)
    X = scipy.linalg.solve_triangular(C, Q, lower=True)
    M = ct(scipy.linalg.solve_triangular(C, ct(X), lower=True))
    W, lam = eig_hermitian(herm(M))
    return CongruenceDiag(C @ W, lam)
