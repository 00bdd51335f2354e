"""Symmetric gauge functions, product functions and tangent-space norms.

A symmetric gauge function ``Phi`` turns singular values into a unitarily
invariant norm, ``||X||_Phi = Phi(sigma(X))``.  Two of them (one for the
positive definite leg, one for the accretive unitary leg) and a product
function ``Psi`` make up a :class:`MetricConfig`.
"""

import dataclasses
import json
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInput, NotHermitian, NotSkewHermitian
from .matcore import as_cmatrix, check_positive_definite, herm, invsqrtm_pd, is_hermitian

# finite-difference step (relative) and "vanishing" threshold of validate_product
FD_STEP = 1e-5
VANISH_TOL = 1e-6


@dataclasses.dataclass(frozen=True)
class GaugeFunction:
    """A symmetric gauge function on real vectors.

    Use :meth:`p_norm` for the built-in family or :meth:`custom` to wrap a
    callable.  Instances are callable: ``phi(x)``.
    """

    kind: str
    p: Optional[float] = None
    func: Optional[Callable] = dataclasses.field(default=None, compare=False)
    smooth: bool = False
    name: str = ""

    @classmethod
    def p_norm(cls, p=2.0):
        p = float(p)
        if not p >= 1.0:
            raise InvalidInput(f"p-norm needs p >= 1, got {p}")
        return cls("p_norm", p=p, smooth=1.0 < p < np.inf, name=f"p={p:g}")

    @classmethod
    def custom(cls, func, smooth=False, name="custom"):
        if not callable(func):
            raise InvalidInput("custom gauge must be callable")
        return cls("custom", func=func, smooth=bool(smooth), name=name)

    def __call__(self, x):
        return gauge_eval(self, x)

    def to_dict(self):
        if self.kind != "p_norm":
            raise InvalidInput("custom gauge functions cannot be serialized")
        return {"p": "inf" if np.isinf(self.p) else self.p}

    @classmethod
    def from_dict(cls, obj):
        if isinstance(obj, (int, float, str)):
            obj = {"p": obj}
        if not isinstance(obj, dict) or set(obj) != {"p"}:
            raise InvalidInput(f"gauge must be an object {{\"p\": value}}, got {obj!r}")
        p = obj["p"]
        if isinstance(p, str):
            if p.lower() not in ("inf", "infinity"):
                raise InvalidInput(f"unrecognized p {p!r}")
            p = np.inf
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise InvalidInput(f"p must be a number, got {p!r}")
        return cls.p_norm(p)


def gauge_eval(phi, x):
    """Evaluate ``phi`` on a real vector; p-norms give ``(sum |x_k|^p)^(1/p)``."""
    x = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise InvalidInput("gauge argument must be finite")
    if phi.kind == "p_norm":
        return float(np.linalg.norm(x, ord=phi.p)) if x.size else 0.0
    return float(phi.func(x))


@dataclasses.dataclass
class GaugeReport:
    trials: int
    violations: list
    counts: dict
    smooth_declared: bool
    smooth_observed: bool

    @property
    def passed(self):
        return not self.violations


def _signed_permutation(x, rng):
    return rng.permutation(x) * rng.choice([-1.0, 1.0], size=x.size)


def _random_vector(rng, dim):
    x = rng.standard_normal(dim) * np.exp(rng.uniform(-2, 2))
    # sprinkle zeros and ties so degenerate inputs are exercised too
    if dim > 1 and rng.random() < 0.2:
        x[rng.integers(dim)] = 0.0
    if dim > 1 and rng.random() < 0.2:
        i, j = rng.choice(dim, size=2, replace=False)
        x[j] = -x[i]
    return x


def _gradient(f, x, h):
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def _gradient_is_continuous(phi, dim, rng, points=8):
    """Probe gradient jumps across coordinate zeros and magnitude ties."""
    if dim < 1:
        return True
    for _ in range(points):
        x = rng.standard_normal(dim)
        probes = [x.copy()]
        probes[0][0] = 0.0
        if dim > 1:
            tie = x.copy()
            tie[1] = abs(tie[0]) * np.sign(tie[1] or 1.0)
            probes.append(tie)
        for base in probes:
            jumps = []
            for delta in (1e-3, 1e-6):
                e = np.zeros(dim)
                e[0] = delta
                g_plus = _gradient(phi, base + e, delta / 10)
                g_minus = _gradient(phi, base - e, delta / 10)
                jumps.append(np.linalg.norm(g_plus - g_minus))
            if jumps[1] > 1e-6 and jumps[1] > 0.5 * jumps[0]:
                return False
    return True


def validate_gauge(phi, trials=1000, seed=0, dim=4, rtol=1e-12, max_witnesses=5):
    """Check the four gauge axioms on seeded random inputs.

    i) positivity, ii) absolute homogeneity, iii) triangle inequality,
    iv) invariance under signed permutations.  Violations are returned with
    witnesses, never raised.  A numerical spot check of gradient continuity
    is compared with the declared ``smooth`` flag.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    rng = np.random.default_rng(seed)
    violations = []
    counts = {"i": 0, "ii": 0, "iii": 0, "iv": 0, "smooth": 0}

    def record(axiom, detail, **witness):
        counts[axiom] += 1
        if sum(1 for v in violations if v["axiom"] == axiom) < max_witnesses:
            violations.append({"axiom": axiom, "detail": detail,
                               **{k: np.asarray(v).tolist() for k, v in witness.items()}})

    zero = phi(np.zeros(dim))
    if zero != 0.0:
        record("ii", f"phi(0) = {zero!r} != 0", x=np.zeros(dim))
    for _ in range(trials):
        x = _random_vector(rng, dim)
        y = _random_vector(rng, dim)
        beta = rng.standard_normal() * np.exp(rng.uniform(-2, 2))
        fx, fy = phi(x), phi(y)
        if np.any(x != 0) and not fx > 0:
            record("i", f"phi(x) = {fx!r} is not positive", x=x)
        fb = phi(beta * x)
        if abs(fb - abs(beta) * fx) > rtol * (abs(fb) + abs(beta * fx) + 1e-300):
            record("ii", f"phi(beta x) = {fb!r} != |beta| phi(x) = {abs(beta) * fx!r}", x=x, beta=beta)
        fxy = phi(x + y)
        if fxy > fx + fy + rtol * (abs(fx) + abs(fy)):
            record("iii", f"phi(x + y) = {fxy!r} > {fx + fy!r}", x=x, y=y)
        xt = _signed_permutation(x, rng)
        ft = phi(xt)
        if abs(ft - fx) > rtol * (abs(ft) + abs(fx) + 1e-300):
            record("iv", f"phi(x~) = {ft!r} != phi(x) = {fx!r}", x=x, x_tilde=xt)
    smooth_observed = _gradient_is_continuous(phi, dim, rng)
    if phi.smooth and not smooth_observed:
        record("smooth", "declared smooth, but gradient jumps across a tie or zero")
    return GaugeReport(trials, violations, counts, phi.smooth, smooth_observed)


@dataclasses.dataclass(frozen=True)
class ProductFunction:
    """A Minkowskian product function ``Psi`` on pairs of nonnegative reals."""

    kind: str
    q: Optional[float] = None
    func: Optional[Callable] = dataclasses.field(default=None, compare=False)
    name: str = ""

    @classmethod
    def euclidean_sum(cls):
        return cls("euclidean_sum", name="euclidean_sum")

    @classmethod
    def power_mean(cls, q):
        q = float(q)
        if not q > 1.0 or not np.isfinite(q):
            raise InvalidInput(f"power_mean needs finite q > 1, got {q}")
        return cls("power_mean", q=q, name=f"power_mean(q={q:g})")

    @classmethod
    def custom(cls, func, name="custom"):
        if not callable(func):
            raise InvalidInput("custom product function must be callable")
        return cls("custom", func=func, name=name)

    def __call__(self, x1, x2):
        return product_eval(self, x1, x2)

    def to_dict(self):
        if self.kind == "euclidean_sum":
            return "euclidean_sum"
        if self.kind == "power_mean":
            return {"power_mean": self.q}
        raise InvalidInput("custom product functions cannot be serialized")

    @classmethod
    def from_dict(cls, obj):
        if obj == "euclidean_sum":
            return cls.euclidean_sum()
        if isinstance(obj, dict) and set(obj) == {"power_mean"}:
            q = obj["power_mean"]
            if isinstance(q, bool) or not isinstance(q, (int, float)):
                raise InvalidInput(f"power_mean exponent must be a number, got {q!r}")
            return cls.power_mean(q)
        raise InvalidInput(f"unrecognized product function {obj!r}")


def _raw_product(psi, x1, x2):
    if psi.kind == "euclidean_sum":
        return x1 + x2
    if psi.kind == "power_mean":
        m = max(x1, x2)
        if m == 0.0:
            return 0.0
        # scaled to avoid overflow for large q
        return m * ((x1 / m) ** psi.q + (x2 / m) ** psi.q) ** (1.0 / psi.q)
    return float(psi.func(x1, x2))


def product_eval(psi, x1, x2):
    """Evaluate ``psi(x1, x2)`` for ``x1, x2 >= 0``."""
    x1, x2 = float(x1), float(x2)
    if not (x1 >= 0.0 and x2 >= 0.0) or not (np.isfinite(x1) and np.isfinite(x2)):
        raise InvalidInput(f"product function arguments must be finite and >= 0, got ({x1}, {x2})")
    return float(_raw_product(psi, x1, x2))


@dataclasses.dataclass
class ProductReport:
    grid_size: int
    radius: float
    conditions: dict
    failures: list

    @property
    def passed(self):
        return all(self.conditions.values())


def validate_product(psi, grid_size=20, radius=10.0, max_failures=20):
    """Check the product-function conditions on a grid over ``(0, R]^2``.

    i) and ii) are checked directly.  Smoothness (iii), nonvanishing
    partials (iv) and the mixed condition
    ``d1 Psi d2 Psi - 2 Psi d12 Psi != 0`` (v) use central differences with
    step ``1e-5 * max(x1, x2)``; a value with magnitude ``<= 1e-6`` counts
    as vanishing.
    """
    if grid_size < 1:
        raise InvalidInput("grid_size must be >= 1")
    f = lambda a, b: _raw_product(psi, a, b)  # noqa: E731
    ok = {c: True for c in ("i", "ii", "iii", "iv", "v")}
    failures = []

    def fail(cond, x1, x2, value):
        ok[cond] = False
        if len(failures) < max_failures:
            failures.append({"condition": cond, "x1": x1, "x2": x2, "value": value})

    if f(0.0, 0.0) != 0.0:
        fail("i", 0.0, 0.0, f(0.0, 0.0))
    axis = np.linspace(radius / grid_size, radius, grid_size)
    for a in axis:
        for x1, x2 in ((a, 0.0), (0.0, a)):
            if not f(x1, x2) > 0:
                fail("i", x1, x2, f(x1, x2))
    for x1 in axis:
        for x2 in axis:
            v = f(x1, x2)
            if not v > 0:
                fail("i", x1, x2, v)
            for alpha in (0.5, 2.5, 7.0):
                va = f(alpha * x1, alpha * x2)
                if abs(va - alpha * v) > 1e-12 * abs(alpha * v):
                    fail("ii", x1, x2, va - alpha * v)
            h = FD_STEP * max(x1, x2)
            d1 = (f(x1 + h, x2) - f(x1 - h, x2)) / (2 * h)
            d2 = (f(x1, x2 + h) - f(x1, x2 - h)) / (2 * h)
            d12 = (f(x1 + h, x2 + h) - f(x1 + h, x2 - h)
                   - f(x1 - h, x2 + h) + f(x1 - h, x2 - h)) / (4 * h * h)
            # smoothness proxy: derivatives finite and stable under halving h
            d1h = (f(x1 + h / 2, x2) - f(x1 - h / 2, x2)) / h
            d2h = (f(x1, x2 + h / 2) - f(x1, x2 - h / 2)) / h
            if not np.all(np.isfinite([d1, d2, d12])) or \
                    abs(d1 - d1h) > 1e-4 * (1 + abs(d1)) or abs(d2 - d2h) > 1e-4 * (1 + abs(d2)):
                fail("iii", x1, x2, float(d1 - d1h))
            if abs(d1) <= VANISH_TOL:
                fail("iv", x1, x2, d1)
            if abs(d2) <= VANISH_TOL:
                fail("iv", x1, x2, d2)
            cross = d1 * d2 - 2.0 * v * d12
            if abs(cross) <= VANISH_TOL:
                fail("v", x1, x2, cross)
    return ProductReport(grid_size, radius, ok, failures)


@dataclasses.dataclass(frozen=True)
class MetricConfig:
    """``(Phi_1, Phi_2, Psi)``: gauges for the positive definite and unitary legs."""

    phi1: GaugeFunction = dataclasses.field(default_factory=GaugeFunction.p_norm)
    phi2: GaugeFunction = dataclasses.field(default_factory=GaugeFunction.p_norm)
    psi: ProductFunction = dataclasses.field(default_factory=ProductFunction.euclidean_sum)

    @property
    def smooth(self):
        """Whether both gauges are smooth (p-norms with 1 < p < inf)."""
        return self.phi1.smooth and self.phi2.smooth

    def combine(self, d_p, d_u):
        """``sqrt(Psi(d_p^2, d_u^2))``."""
        return float(np.sqrt(self.psi(d_p * d_p, d_u * d_u)))

    def to_dict(self):
        return {"phi1": self.phi1.to_dict(), "phi2": self.phi2.to_dict(), "psi": self.psi.to_dict()}

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise InvalidInput("metric config must be a JSON object")
        unknown = set(obj) - {"phi1", "phi2", "psi"}
        if unknown:
            raise InvalidInput(f"unknown metric config keys: {sorted(unknown)}")
        default = cls()
        return cls(
            GaugeFunction.from_dict(obj["phi1"]) if "phi1" in obj else default.phi1,
            GaugeFunction.from_dict(obj["phi2"]) if "phi2" in obj else default.phi2,
            ProductFunction.from_dict(obj["psi"]) if "psi" in obj else default.psi,
        )

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"metric config is not valid JSON: {exc}") from None
        return cls.from_dict(obj)

    def validate(self, trials=1000, seed=0, dim=4, grid_size=20):
        return {
            "phi1": validate_gauge(self.phi1, trials, seed, dim),
            "phi2": validate_gauge(self.phi2, trials, seed + 1, dim),
            "psi": validate_product(self.psi, grid_size),
        }


def tangent_norm_P(P, X, phi):
    """Finsler norm of a Hermitian tangent ``X`` at ``P``: ``phi(sigma(P^{-1/2} X P^{-1/2}))``."""
    P = check_positive_definite(P)
    X = as_cmatrix(X, "X")
    if not is_hermitian(X):
        raise NotHermitian("tangent vector at a positive definite point must be Hermitian")
    Pih = invsqrtm_pd(P)
    return phi(np.abs(np.linalg.eigvalsh(herm(Pih @ X @ Pih))))


def tangent_norm_AU(U, X, phi):
    """Finsler norm of a skew-Hermitian tangent ``X``: ``phi(sigma(X))``, independent of ``U``."""
    as_cmatrix(U, "U")
    X = as_cmatrix(X, "X")
    if not is_hermitian(1j * X):
        raise NotSkewHermitian("tangent vector at a unitary point must be skew-Hermitian")
    return phi(np.abs(np.linalg.eigvalsh(herm(-1j * X))))
