"""Seeded random samplers.

A strictly accretive matrix is drawn through its symmetric polar factors:
``P^2 = V1 diag(exp(u * log_spread)) V1^*`` with ``u ~ U[-1, 1]`` and
``U = V2 diag(exp(i theta)) V2^*`` with ``theta ~ U[-phase_spread,
phase_spread]``, where ``V1, V2`` are Haar unitaries.  Then ``A = P U P``.
"""

import dataclasses

import numpy as np

from .errors import InvalidSpec
from .matcore import ct, herm


def haar_unitary(n, rng):
    """Haar-distributed ``n x n`` unitary (QR of a complex Ginibre matrix)."""
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


@dataclasses.dataclass(frozen=True)
class SamplerSpec:
    n: int
    seed: int = 0
    log_spread: float = 1.0
    phase_spread: float = 1.2

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidSpec(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (np.isfinite(self.log_spread) and self.log_spread >= 0):
            raise InvalidSpec(f"log_spread must be finite and >= 0, got {self.log_spread!r}")
        if not 0 <= self.phase_spread < np.pi / 2:
            raise InvalidSpec(f"phase_spread must lie in [0, pi/2), got {self.phase_spread!r}")


@dataclasses.dataclass(frozen=True)
class Sample:
    A: np.ndarray
    P: np.ndarray
    U: np.ndarray
    spec: SamplerSpec


def sample(spec, rng=None):
    """Draw one strictly accretive matrix; deterministic for a fixed seed.

    If ``rng`` is given it is used instead of ``spec.seed``.
    """
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.n
    V1 = haar_unitary(n, rng)
    V2 = haar_unitary(n, rng)
    u = rng.uniform(-1.0, 1.0, n)
    theta = rng.uniform(-spec.phase_spread, spec.phase_spread, n)
    P = herm((V1 * np.exp(0.5 * spec.log_spread * u)) @ ct(V1))
    U = (V2 * np.exp(1j * theta)) @ ct(V2)
    return Sample(P @ U @ P, P, U, spec)


def random_accretive(n, rng, log_spread=1.0, phase_spread=1.2):
    """Convenience wrapper returning only the matrix."""
    return sample(SamplerSpec(n, 0, log_spread, phase_spread), rng).A


def random_pd(n, rng, log_spread=1.0):
    V = haar_unitary(n, rng)
    return herm((V * np.exp(log_spread * rng.uniform(-1.0, 1.0, n))) @ ct(V))


def random_accretive_unitary(n, rng, phase_spread=1.2):
    V = haar_unitary(n, rng)
    return (V * np.exp(1j * rng.uniform(-phase_spread, phase_spread, n))) @ ct(V)
