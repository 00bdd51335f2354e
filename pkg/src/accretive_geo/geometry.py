"""Geodesics and geodesic distances.

The accretive set is handled through the diffeomorphism ``A -> (P^2, U)``
onto (positive definite) x (accretive unitary).  Each leg carries its own
unitarily invariant Finsler norm and a product function combines the two:

    d(A, B) = sqrt(Psi(Phi1(log lambda(P_A^-1 P_B^2 P_A^-1))^2,
                       Phi2(angle lambda(U_A^* U_B))^2))

and the geodesic is ``gamma(t) = gamma_P(t)^{1/2} gamma_U(t) gamma_P(t)^{1/2}``
with ``gamma_P(t) = P_A^2 exp(t log(P_A^-2 P_B^2))`` and
``gamma_U(t) = U_A exp(t log(U_A^* U_B))``.
"""

import dataclasses
from typing import NamedTuple

import numpy as np
import scipy.integrate

from .config import get_tolerances
from .errors import (
    BranchCut,
    ConsistencyError,
    DomainExit,
    InvalidInput,
    NotAccretiveUnitary,
)
from .finsler import MetricConfig, gauge_eval
from .manifold import SymPolar, is_accretive, sym_polar
from .matcore import (
    as_cmatrix,
    check_positive_definite,
    ct,
    eig_hermitian,
    eig_normal,
    expm_skew,
    herm,
    invsqrtm_pd,
    is_unitary,
    log_unitary,
    logm_pd,
    powm_pd,
    simdiag_congruence,
    sqrtm_pd,
)
from .sampling import haar_unitary

# relative disagreement tolerated between the two evaluations of distance_A
CROSS_CHECK_TOL = 1e-8


def check_accretive_unitary(U, name="U"):
    U = as_cmatrix(U, name)
    if not is_unitary(U) or not is_accretive(U)[0]:
        raise NotAccretiveUnitary(f"{name} is not a strictly accretive unitary matrix")
    return U


def _as_polar(X):
    return X if isinstance(X, SymPolar) else sym_polar(X)


# --------------------------------------------------------------------------
# positive definite leg

def geodesic_P(P2, Q2, t, method="congruence"):
    """Point at ``t`` on the geodesic from ``P2`` to ``Q2`` (positive definite).

    ``method="congruence"`` evaluates ``S Lambda^t S^*`` from the simultaneous
    diagonalization ``P2 = S S^*``, ``Q2 = S Lambda S^*``;
    ``method="sqrt"`` evaluates ``P^{1/2} (P^{-1/2} Q P^{-1/2})^t P^{1/2}``.
    """
    if method == "congruence":
        S, lam = simdiag_congruence(P2, Q2)
        return herm((S * lam**t) @ ct(S))
    if method == "sqrt":
        P2 = check_positive_definite(P2)
        Q2 = check_positive_definite(Q2, "Q")
        half, ihalf = sqrtm_pd(P2), invsqrtm_pd(P2)
        return herm(half @ powm_pd(herm(ihalf @ Q2 @ ihalf), t) @ half)
    raise InvalidInput(f"unknown method {method!r}")


def distance_P(P2, Q2, phi):
    """``Phi(log lambda(P2^{-1} Q2))``."""
    _, lam = simdiag_congruence(P2, Q2)
    return gauge_eval(phi, np.log(lam))


# --------------------------------------------------------------------------
# accretive unitary leg

def _unitary_angles(W):
    """Eigenvalue angles of a unitary matrix, guarding the branch cut."""
    ang = np.angle(eig_normal(W).lam)
    if np.any(np.abs(ang) > np.pi - get_tolerances().tol_branch):
        raise BranchCut("U_A^* U_B has an eigenvalue at (or near) -1")
    return ang


def geodesic_AU(U, V, t):
    """``U exp(t log(U^* V))``; stays strictly accretive for ``t`` in [0, 1]."""
    U = check_accretive_unitary(U, "U")
    V = check_accretive_unitary(V, "V")
    out = U @ expm_skew(t * log_unitary(ct(U) @ V))
    if 0.0 <= t <= 1.0 and not (is_accretive(out)[0] and is_unitary(out)):
        raise ConsistencyError(f"geodesic left the accretive unitary set at t={t}")
    return out


def distance_AU(U, V, phi):
    """``Phi(|angle lambda(U^* V)|)``."""
    U = check_accretive_unitary(U, "U")
    V = check_accretive_unitary(V, "V")
    return gauge_eval(phi, np.abs(_unitary_angles(ct(U) @ V)))


# --------------------------------------------------------------------------
# accretive matrices

@dataclasses.dataclass(frozen=True)
class GeodesicA:
    """Cached data of the geodesic from ``A`` to ``B``.

    The positive definite leg is stored through the congruence
    ``P_A^2 = S S^*``, ``P_B^2 = S diag(lam) S^*``; the unitary leg through
    the eigendecomposition ``log(U_A^* U_B) = W diag(i mu) W^*``.
    """

    polar_A: SymPolar
    polar_B: SymPolar
    S: np.ndarray
    lam: np.ndarray
    W: np.ndarray
    mu: np.ndarray

    @classmethod
    def between(cls, A, B):
        pa, pb = _as_polar(A), _as_polar(B)
        S, lam = simdiag_congruence(pa.P2, pb.P2)
        Z = log_unitary(ct(pa.U) @ pb.U)
        W, mu = eig_hermitian(herm(-1j * Z))
        return cls(pa, pb, S, lam, W, mu)

    @property
    def gen_P(self):
        """``log(P_A^{-2} P_B^2) = S^{-*} diag(log lam) S^*``."""
        return np.linalg.solve(ct(self.S), np.log(self.lam)[:, None] * ct(self.S))

    @property
    def gen_U(self):
        """``log(U_A^* U_B)``, skew-Hermitian."""
        Z = (self.W * (1j * self.mu)) @ ct(self.W)
        return 0.5 * (Z - ct(Z))

    def _stack_t(self, ts):
        return np.atleast_1d(np.asarray(ts, dtype=float))

    def points(self, ts):
        """Leg values ``(gamma_P(t), gamma_U(t))`` stacked over ``ts``."""
        ts = self._stack_t(ts)
        S, W = self.S, self.W
        P2 = np.einsum("ik,tk,jk->tij", S, self.lam[None, :] ** ts[:, None], S.conj())
        E = np.exp(1j * ts[:, None] * self.mu[None, :])
        U = self.polar_A.U @ np.einsum("ik,tk,jk->tij", W, E, W.conj())
        return 0.5 * (P2 + np.swapaxes(P2.conj(), 1, 2)), U

    def derivatives(self, ts):
        """Analytic leg derivatives ``(gamma_P'(t), gamma_U'(t))``."""
        ts = self._stack_t(ts)
        S, W = self.S, self.W
        loglam = np.log(self.lam)
        dP2 = np.einsum("ik,tk,jk->tij", S, self.lam[None, :] ** ts[:, None] * loglam, S.conj())
        E = 1j * self.mu[None, :] * np.exp(1j * ts[:, None] * self.mu[None, :])
        dU = self.polar_A.U @ np.einsum("ik,tk,jk->tij", W, E, W.conj())
        return 0.5 * (dP2 + np.swapaxes(dP2.conj(), 1, 2)), dU

    def __call__(self, t):
        P2, U = self.points(t)
        half = sqrtm_pd(P2[0])
        return half @ U[0] @ half


def geodesic(A, B):
    """Build the cached geodesic from ``A`` to ``B``."""
    return GeodesicA.between(A, B)


def geodesic_A(A, B, t, cache=None):
    """Point at ``t`` on the geodesic from ``A`` to ``B``.

    Defined for any real ``t`` where the legs stay in their domains; for
    ``t`` in [0, 1] the result is checked to be strictly accretive.
    """
    g = cache if cache is not None else GeodesicA.between(A, B)
    out = g(t)
    if 0.0 <= t <= 1.0 and not is_accretive(out)[0]:
        raise ConsistencyError(f"geodesic left the accretive set at t={t}")
    return out


def distance_components(A, B, cfg=None, check=True):
    """The two leg distances ``(d_P, d_U)`` entering the product function.

    With ``check=True`` the eigenvalue form is compared against the
    norm-of-logarithm form and a :class:`ConsistencyError` is raised if
    they disagree by more than ``1e-8`` (relative).
    """
    cfg = cfg or MetricConfig()
    pa, pb = _as_polar(A), _as_polar(B)
    X = np.linalg.solve(pa.P, pb.P2)
    M = herm(ct(np.linalg.solve(pa.P, ct(X))))  # P_A^-1 P_B^2 P_A^-1
    Uab = ct(pa.U) @ pb.U
    d_p = gauge_eval(cfg.phi1, np.log(np.linalg.eigvalsh(M)))
    d_u = gauge_eval(cfg.phi2, _unitary_angles(Uab))
    if check:
        d_p2 = gauge_eval(cfg.phi1, np.linalg.svd(logm_pd(M), compute_uv=False))
        d_u2 = gauge_eval(cfg.phi2, np.linalg.svd(log_unitary(Uab), compute_uv=False))
        for a, b, leg in ((d_p, d_p2, "P"), (d_u, d_u2, "U")):
            if abs(a - b) > CROSS_CHECK_TOL * (1.0 + abs(a)):
                raise ConsistencyError(f"{leg}-leg distance forms disagree: {a!r} vs {b!r}")
    return d_p, d_u


def distance_A(A, B, cfg=None, check=True):
    """Geodesic distance between two strictly accretive matrices.

    ``A`` and ``B`` may also be precomputed :class:`SymPolar` pairs.
    """
    cfg = cfg or MetricConfig()
    return cfg.combine(*distance_components(A, B, cfg, check))


# --------------------------------------------------------------------------
# arc length

class ArcLength(NamedTuple):
    value: float
    error: float


@dataclasses.dataclass(frozen=True)
class ComponentCurve:
    """A curve ``t -> (P2(t), U(t))`` given by callables on scalar ``t``.

    ``derivative`` may be omitted; central differences are used then, so
    the curve must be evaluable slightly outside [0, 1].
    """

    point: object
    derivative: object = None

    def points(self, ts):
        pts = [self.point(float(t)) for t in np.atleast_1d(ts)]
        return np.array([p[0] for p in pts]), np.array([p[1] for p in pts])

    def derivatives(self, ts):
        if self.derivative is None:
            raise AttributeError("derivatives")
        d = [self.derivative(float(t)) for t in np.atleast_1d(ts)]
        return np.array([x[0] for x in d]), np.array([x[1] for x in d])


def _gauge_rows(phi, X):
    if phi.kind == "p_norm":
        return np.linalg.norm(X, ord=phi.p, axis=1)
    return np.array([gauge_eval(phi, x) for x in X])


def _check_legs(ts, P2, U):
    tol = get_tolerances()
    n = P2.shape[-1]
    lam_p = np.linalg.eigvalsh(P2)
    herm_u = 0.5 * (U + np.swapaxes(U.conj(), 1, 2))
    lam_u = np.linalg.eigvalsh(herm_u)
    orth = np.linalg.norm(np.swapaxes(U.conj(), 1, 2) @ U - np.eye(n), axis=(1, 2))
    bad = (lam_p[:, 0] <= tol.tol_pd * np.abs(lam_p[:, -1])) | (lam_u[:, 0] <= tol.tol_pd) \
        | (orth > np.sqrt(n) * 1e3 * tol.tol_orth)
    if np.any(bad):
        t = float(ts[np.argmax(bad)])
        raise DomainExit(f"curve leaves the manifold at t={t}", t=t)


def arc_length(curve, cfg=None, samples=2000, h=1e-6):
    """Length of a component curve under ``sqrt(Psi(F_P^2, F_U^2))``.

    Parameters
    ----------
    curve : object
        Provides ``points(ts) -> (P2, U)`` stacked over ``ts`` and optionally
        ``derivatives(ts)``; otherwise central differences with step ``h``.
    samples : int
        Number of Simpson panels (even).

    Returns
    -------
    ArcLength
        Composite Simpson value and a Richardson estimate of its error.
    """
    cfg = cfg or MetricConfig()
    if samples < 2 or samples % 2:
        raise InvalidInput("samples must be an even integer >= 2")
    ts = np.linspace(0.0, 1.0, samples + 1)
    P2, U = curve.points(ts)
    _check_legs(ts, P2, U)
    try:
        dP2, dU = curve.derivatives(ts)
    except AttributeError:
        Pp, Up = curve.points(ts + h)
        Pm, Um = curve.points(ts - h)
        dP2, dU = (Pp - Pm) / (2 * h), (Up - Um) / (2 * h)
    L = np.linalg.cholesky(P2)
    Y = np.linalg.solve(L, dP2)
    Y = np.linalg.solve(L, np.swapaxes(Y.conj(), 1, 2))  # L^-1 dP L^-*
    fp = _gauge_rows(cfg.phi1, np.abs(np.linalg.eigvalsh(0.5 * (Y + np.swapaxes(Y.conj(), 1, 2)))))
    X = np.swapaxes(U.conj(), 1, 2) @ dU  # left-translated tangent, skew-Hermitian
    X = -0.5j * (X - np.swapaxes(X.conj(), 1, 2))
    fu = _gauge_rows(cfg.phi2, np.abs(np.linalg.eigvalsh(X)))
    integrand = np.array([cfg.combine(a, b) for a, b in zip(fp, fu)])
    fine = scipy.integrate.simpson(integrand, x=ts)
    coarse = scipy.integrate.simpson(integrand[::2], x=ts[::2])
    return ArcLength(float(fine), float(abs(fine - coarse) / 15.0))


# --------------------------------------------------------------------------
# distance properties

def check_distance_properties(A, B, cfg=None, seed=0):
    """Residuals of the invariance properties of the distance.

    Keys: ``inverse`` (d(A^-1, B^-1) vs d(A, B)), ``adjoint``,
    ``doubling`` (d(A^-1, A) vs 2 d(I, A)), ``doubling_inverse``
    (2 d(I, A) vs 2 d(I, A^-1)), ``midpoint`` (||gamma_{A^-1 -> A}(1/2) - I||)
    and ``unitary_congruence`` (a seeded Haar unitary).
    """
    cfg = cfg or MetricConfig()
    A = as_cmatrix(A)
    B = as_cmatrix(B, "B")
    n = A.shape[0]
    eye = np.eye(n, dtype=complex)
    Ai, Bi = np.linalg.inv(A), np.linalg.inv(B)
    d = distance_A(A, B, cfg)
    d_ia = distance_A(eye, A, cfg)
    W = haar_unitary(n, np.random.default_rng(seed))
    return {
        "distance": d,
        "inverse": abs(distance_A(Ai, Bi, cfg) - d),
        "adjoint": abs(distance_A(ct(A), ct(B), cfg) - d),
        "doubling": abs(distance_A(Ai, A, cfg) - 2.0 * d_ia),
        "doubling_inverse": abs(2.0 * d_ia - 2.0 * distance_A(eye, Ai, cfg)),
        "midpoint": float(np.linalg.norm(geodesic_A(Ai, A, 0.5) - eye)),
        "unitary_congruence": abs(distance_A(ct(W) @ A @ W, ct(W) @ B @ W, cfg) - d),
    }
