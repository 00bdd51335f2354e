import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from accretive_geo.errors import InvalidInput, NotHermitian, NotSkewHermitian
from accretive_geo.finsler import (
    GaugeFunction,
    MetricConfig,
    ProductFunction,
    gauge_eval,
    product_eval,
    tangent_norm_AU,
    tangent_norm_P,
    validate_gauge,
    validate_product,
)
from accretive_geo.sampling import random_accretive_unitary, random_pd

P_NORMS = [GaugeFunction.p_norm(p) for p in (1, 1.5, 2, 3, np.inf)]

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestGaugeEval:
    def test_euclidean(self):
        assert gauge_eval(GaugeFunction.p_norm(2), [3, 4]) == 5.0

    @pytest.mark.parametrize("phi", P_NORMS, ids=lambda g: g.name)
    def test_zero(self, phi):
        assert phi(np.zeros(4)) == 0.0

    def test_signed_permutation(self):
        phi = GaugeFunction.p_norm(2)
        assert phi([-4, 3]) == phi([4, -3]) == 5.0

    def test_special_p(self):
        x = np.array([1.0, -2.0, 3.0])
        assert GaugeFunction.p_norm(1)(x) == 6.0
        assert GaugeFunction.p_norm(np.inf)(x) == 3.0

    def test_rejects_p_below_one(self):
        with pytest.raises(InvalidInput):
            GaugeFunction.p_norm(0.5)

    def test_smoothness_flags(self):
        assert [g.smooth for g in P_NORMS] == [False, True, True, True, False]

    @settings(max_examples=200)
    @given(x=st.lists(finite, min_size=1, max_size=6), y=st.lists(finite, min_size=6, max_size=6),
           p=st.sampled_from([1.0, 2.0, 3.0, np.inf]))
    def test_triangle_inequality(self, x, y, p):
        phi = GaugeFunction.p_norm(p)
        x = np.asarray(x)
        y = np.asarray(y[: x.size])
        assert phi(x + y) <= phi(x) + phi(y) + 1e-9 * (phi(x) + phi(y) + 1)


class TestValidateGauge:
    def test_euclidean_clean(self):
        rep = validate_gauge(GaugeFunction.p_norm(2), trials=10_000)
        assert rep.passed and rep.smooth_declared and rep.smooth_observed

    def test_max_norm_is_nonsmooth_gauge(self):
        phi = GaugeFunction.custom(lambda x: np.max(np.abs(x)), smooth=False, name="max")
        rep = validate_gauge(phi, trials=2000)
        assert rep.passed
        assert not rep.smooth_observed

    def test_plain_sum_is_not_a_gauge(self):
        phi = GaugeFunction.custom(lambda x: np.sum(x), name="sum")
        rep = validate_gauge(phi, trials=200)
        assert not rep.passed
        assert rep.counts["iv"] > 0
        witness = next(v for v in rep.violations if v["axiom"] == "iv")
        x = np.asarray(witness["x"])
        assert np.sum(x) != np.sum(witness["x_tilde"])

    def test_false_smooth_claim(self):
        phi = GaugeFunction.custom(lambda x: np.max(np.abs(x)), smooth=True)
        rep = validate_gauge(phi, trials=100)
        assert rep.counts["smooth"] == 1

    def test_deterministic(self):
        phi = GaugeFunction.custom(lambda x: np.sum(x))
        a = validate_gauge(phi, trials=50, seed=3)
        b = validate_gauge(phi, trials=50, seed=3)
        assert a.violations == b.violations


class TestProduct:
    def test_euclidean_sum(self):
        assert product_eval(ProductFunction.euclidean_sum(), 3, 4) == 7.0

    @pytest.mark.parametrize("psi", [ProductFunction.euclidean_sum(), ProductFunction.power_mean(3)])
    def test_zero(self, psi):
        assert psi(0.0, 0.0) == 0.0

    @pytest.mark.parametrize("psi", [ProductFunction.euclidean_sum(), ProductFunction.power_mean(2),
                                     ProductFunction.power_mean(7.5)])
    def test_homogeneous(self, psi):
        np.testing.assert_allclose(psi(2.5, 5.0), 2.5 * psi(1.0, 2.0), rtol=1e-14)

    def test_power_mean_value(self):
        np.testing.assert_allclose(ProductFunction.power_mean(2)(3.0, 4.0), 5.0, rtol=1e-15)

    def test_power_mean_no_overflow(self):
        np.testing.assert_allclose(ProductFunction.power_mean(400)(1e300, 1e300),
                                   1e300 * 2 ** (1 / 400), rtol=1e-14)

    def test_rejects_negative(self):
        with pytest.raises(InvalidInput):
            product_eval(ProductFunction.euclidean_sum(), -1.0, 1.0)

    def test_rejects_bad_q(self):
        with pytest.raises(InvalidInput):
            ProductFunction.power_mean(1.0)


class TestValidateProduct:
    def test_euclidean_sum_passes(self):
        rep = validate_product(ProductFunction.euclidean_sum())
        assert rep.passed and not rep.failures

    def test_power_mean_report(self):
        rep = validate_product(ProductFunction.power_mean(2), grid_size=10)
        assert set(rep.conditions) == {"i", "ii", "iii", "iv", "v"}
        assert rep.conditions["i"] and rep.conditions["ii"] and rep.conditions["iii"]

    def test_max_violates_nonvanishing_partials(self):
        rep = validate_product(ProductFunction.custom(max, name="max"), grid_size=10)
        assert not rep.conditions["iv"]
        iv = [f for f in rep.failures if f["condition"] == "iv"]
        assert iv and all(f["x1"] != f["x2"] for f in iv)


class TestMetricConfig:
    def test_default_json(self):
        cfg = MetricConfig()
        assert cfg.to_dict() == {"phi1": {"p": 2.0}, "phi2": {"p": 2.0}, "psi": "euclidean_sum"}
        assert cfg.smooth

    def test_round_trip(self):
        cfg = MetricConfig(GaugeFunction.p_norm(np.inf), GaugeFunction.p_norm(3),
                           ProductFunction.power_mean(4))
        again = MetricConfig.from_json(json.dumps(cfg.to_dict()))
        assert again == cfg
        assert not again.smooth

    def test_partial_json(self):
        cfg = MetricConfig.from_json('{"phi2": {"p": 1}}')
        assert cfg.phi1.p == 2 and cfg.phi2.p == 1

    @pytest.mark.parametrize("text", ["[]", '{"phi3": {"p": 2}}', '{"phi1": {"p": "x"}}',
                                      '{"psi": "sum"}', "{", '{"psi": {"power_mean": 0.5}}'])
    def test_rejects(self, text):
        with pytest.raises(InvalidInput):
            MetricConfig.from_json(text)

    def test_combine(self):
        assert MetricConfig().combine(3.0, 4.0) == 5.0

    def test_validate(self):
        reports = MetricConfig().validate(trials=200)
        assert all(r.passed for r in reports.values())


class TestTangentNorms:
    def test_p_identity(self):
        assert tangent_norm_P(np.eye(2), np.diag([3.0, -4.0]), GaugeFunction.p_norm(2)) == 5.0

    def test_p_zero(self, rng):
        assert tangent_norm_P(random_pd(3, rng), np.zeros((3, 3)), GaugeFunction.p_norm(2)) == 0.0

    def test_p_scaling(self, rng):
        P = random_pd(4, rng)
        X = rng.standard_normal((4, 4))
        X = X + X.T
        for phi in P_NORMS:
            np.testing.assert_allclose(tangent_norm_P(7 * P, 7 * X, phi), tangent_norm_P(P, X, phi),
                                       rtol=1e-12)

    def test_p_congruence_invariance(self, rng):
        P = random_pd(3, rng)
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        X = X + X.conj().T
        G = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        phi = GaugeFunction.p_norm(2)
        np.testing.assert_allclose(tangent_norm_P(G @ P @ G.conj().T, G @ X @ G.conj().T, phi),
                                   tangent_norm_P(P, X, phi), rtol=1e-10)

    def test_au(self):
        val = tangent_norm_AU(np.eye(2), 1j * np.diag([1.0, -2.0]), GaugeFunction.p_norm(2))
        np.testing.assert_allclose(val, np.sqrt(5), rtol=1e-15)

    def test_au_zero_and_base_point(self, rng):
        phi = GaugeFunction.p_norm(3)
        X = 1j * np.diag([0.3, -0.1, 0.7])
        assert tangent_norm_AU(np.eye(3), np.zeros((3, 3)), phi) == 0.0
        a = tangent_norm_AU(random_accretive_unitary(3, rng), X, phi)
        b = tangent_norm_AU(random_accretive_unitary(3, rng), X, phi)
        assert a == b

    def test_wrong_tangent_type(self):
        with pytest.raises(NotHermitian):
            tangent_norm_P(np.eye(2), 1j * np.eye(2), GaugeFunction.p_norm(2))
        with pytest.raises(NotSkewHermitian):
            tangent_norm_AU(np.eye(2), np.eye(2), GaugeFunction.p_norm(2))
