import contextlib

import numpy as np
import pytest

from accretive_geo.sampling import haar_unitary, random_accretive


ACCEPTANCE_LINES = []


@contextlib.contextmanager
def criterion(number, title):
    """Collect one acceptance line; the body sets ``box["passed"]`` and ``box["detail"]``."""
    box = {"passed": False, "detail": ""}
    try:
        yield box
    except Exception as exc:
        box["passed"] = False
        box["detail"] = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        line = f"{'PASS' if box['passed'] else 'FAIL'}  [{number:>2}] {title}: {box['detail']}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert box["passed"], box["detail"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel_err(X, Y):
    return np.linalg.norm(np.asarray(X) - np.asarray(Y)) / max(np.linalg.norm(Y), 1e-300)


def min_herm_eig(X):
    return np.linalg.eigvalsh(0.5 * (X + X.conj().T))[0]


def commuting_normal_pair(n, rng):
    """Two strictly accretive normal matrices diagonal in one unitary basis."""
    V = haar_unitary(n, rng)
    a = np.exp(rng.uniform(-1, 1, n) + 1j * rng.uniform(-1.3, 1.3, n))
    b = np.exp(rng.uniform(-1, 1, n) + 1j * rng.uniform(-1.3, 1.3, n))
    return (V * a) @ V.conj().T, (V * b) @ V.conj().T


def accretive_pairs(count, rng, nmax=6):
    out = []
    for _ in range(count):
        n = int(rng.integers(1, nmax + 1))
        out.append((random_accretive(n, rng), random_accretive(n, rng)))
    return out


class PerturbedCurve:
    """Geodesic legs deformed with fixed endpoints.

    ``P2(t) = gamma_P(t) + eps t (1 - t) E`` and
    ``U(t) = gamma_U(t) exp(eps t (1 - t) K)`` with ``E`` Hermitian and ``K``
    skew-Hermitian; derivatives are analytic.
    """

    def __init__(self, geo, E, K, eps):
        self.geo = geo
        self.E = E
        self.eps = eps
        kappa, self.V = np.linalg.eigh(-1j * K)
        self.kappa = kappa
        self.K = K

    def _rotation(self, s):
        E = np.exp(1j * s[:, None] * self.kappa[None, :])
        return np.einsum("ik,tk,jk->tij", self.V, E, self.V.conj())

    def points(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        s = self.eps * ts * (1 - ts)
        P2, U = self.geo.points(ts)
        return P2 + s[:, None, None] * self.E, U @ self._rotation(s)

    def derivatives(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        s = self.eps * ts * (1 - ts)
        ds = self.eps * (1 - 2 * ts)
        P2, U = self.geo.points(ts)
        dP2, dU = self.geo.derivatives(ts)
        R = self._rotation(s)
        return dP2 + ds[:, None, None] * self.E, dU @ R + U @ (ds[:, None, None] * (self.K @ R))


def random_perturbation(geo, rng, scale=0.3):
    n = geo.S.shape[0]
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    E = X + X.conj().T
    # keep gamma_P + eps t(1-t) E positive definite: t(1-t) <= 1/4
    P2, _ = geo.points(np.linspace(0, 1, 41))
    floor = min(np.linalg.eigvalsh(P)[0] for P in P2)
    E *= scale * floor * 4 / np.linalg.norm(E, 2)
    Y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    K = 0.5 * (Y - Y.conj().T)
    K *= 0.2 / np.linalg.norm(K, 2)
    return PerturbedCurve(geo, E, K, rng.uniform(0.2, 1.0))
