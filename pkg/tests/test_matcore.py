import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from accretive_geo.config import tolerances
from accretive_geo.errors import (
    BranchCut,
    DomainError,
    InvalidInput,
    NotHermitian,
    NotNormal,
    NotPositiveDefinite,
    NotSkewHermitian,
    Singular,
)
from accretive_geo.matcore import (
    as_cmatrix,
    cartesian_parts,
    eig_hermitian,
    eig_normal,
    expm_hermitian,
    expm_skew,
    fun_hermitian,
    log_unitary,
    logm_pd,
    polar,
    polar_newton,
    powm_pd,
    simdiag_congruence,
    sqrt_principal,
    sqrtm_pd,
)
from accretive_geo.sampling import haar_unitary, random_accretive, random_pd

from .conftest import rel_err

J = np.array([[1.0, 1.0], [0.0, 1.0]])


def random_skew(n, rng, radius):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Z = 0.5 * (X - X.conj().T)
    return Z * (radius / np.linalg.norm(Z, 2))


class TestAsCMatrix:
    def test_scalar_promoted(self):
        M = as_cmatrix(2.0)
        assert M.shape == (1, 1) and M.dtype == complex

    @pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.zeros((0, 0)), [[np.nan]], [[np.inf, 0], [0, 1]],
                                     "abc"])
    def test_rejects(self, bad):
        with pytest.raises(InvalidInput):
            as_cmatrix(bad)


class TestCartesianParts:
    def test_jordan_block(self):
        H, S = cartesian_parts(J)
        np.testing.assert_allclose(H, [[1, 0.5], [0.5, 1]])
        np.testing.assert_allclose(S, [[0, 0.5], [-0.5, 0]])

    def test_hermitian(self, rng):
        P = random_pd(4, rng)
        H, S = cartesian_parts(P)
        np.testing.assert_allclose(H, P, atol=1e-15)
        assert np.all(S == 0)

    def test_skew(self):
        H, S = cartesian_parts(1j * np.eye(2))
        assert np.all(H == 0)
        np.testing.assert_array_equal(S, 1j * np.eye(2))

    def test_exact_symmetry(self, rng):
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        H, S = cartesian_parts(A)
        np.testing.assert_array_equal(H, H.conj().T)
        np.testing.assert_array_equal(S, -S.conj().T)
        np.testing.assert_allclose(H + S, A, atol=1e-15)


class TestEigHermitian:
    def test_identity(self):
        V, lam = eig_hermitian(np.eye(3))
        np.testing.assert_allclose(lam, 1.0)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(3), atol=1e-14)

    def test_diagonal(self):
        V, lam = eig_hermitian(np.diag([-1.0, 2.0]))
        np.testing.assert_allclose(lam, [2, -1])
        np.testing.assert_allclose(np.abs(V), [[0, 1], [1, 0]], atol=1e-15)

    def test_two_by_two(self):
        np.testing.assert_allclose(eig_hermitian([[1, 0.5], [0.5, 1]]).lam, [1.5, 0.5], rtol=1e-15)

    def test_residual_and_order(self, rng):
        for n in range(1, 9):
            X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            H = X + X.conj().T
            V, lam = eig_hermitian(H)
            assert np.all(np.diff(lam) <= 0)
            assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-10
            assert np.linalg.norm(H @ V - V * lam) <= 1e-12 * np.linalg.norm(H)

    def test_column_phase_convention(self, rng):
        V, _ = eig_hermitian(random_pd(5, rng))
        for k in range(5):
            first = V[np.argmax(np.abs(V[:, k]) > 1e-10), k]
            assert first.imag == 0 and first.real > 0

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(J)


class TestEigNormal:
    def test_diagonal(self):
        lam = np.exp(1j * np.array([np.pi / 4, -np.pi / 3]))
        _, out = eig_normal(np.diag(lam[::-1]))
        np.testing.assert_allclose(out, lam, atol=1e-15)

    def test_hermitian_agrees(self, rng):
        P = random_pd(5, rng)
        np.testing.assert_allclose(eig_normal(P).lam.real, eig_hermitian(P).lam, rtol=1e-12)

    def test_recovers_unitary_angles(self, rng):
        for n in (2, 4, 7):
            theta = rng.uniform(-3, 3, n)
            V0 = haar_unitary(n, rng)
            V, lam = eig_normal((V0 * np.exp(1j * theta)) @ V0.conj().T)
            np.testing.assert_allclose(np.sort(np.angle(lam)), np.sort(theta), atol=1e-10)
            U = (V0 * np.exp(1j * theta)) @ V0.conj().T
            np.testing.assert_allclose(U @ V, V * lam, atol=1e-12)

    def test_not_normal(self):
        with pytest.raises(NotNormal):
            eig_normal(J)


class TestPolar:
    def test_positive_definite(self, rng):
        P = random_pd(4, rng)
        V, Q = polar(P)
        np.testing.assert_allclose(V, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(Q, P, atol=1e-12)

    def test_unitary(self, rng):
        W = haar_unitary(4, rng)
        V, Q = polar(W)
        np.testing.assert_allclose(V, W, atol=1e-12)
        np.testing.assert_allclose(Q, np.eye(4), atol=1e-12)

    def test_jordan_block_against_scipy(self):
        V, Q = polar(J)
        assert np.linalg.norm(V @ Q - J) <= 1e-12
        np.testing.assert_allclose(Q, scipy.linalg.sqrtm(J.T @ J), atol=1e-12)
        Vs, Qs = scipy.linalg.polar(J)
        np.testing.assert_allclose(V, Vs, atol=1e-12)

    def test_newton_cross_check(self, rng):
        A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        V1, Q1 = polar(A)
        V2, Q2 = polar_newton(A)
        np.testing.assert_allclose(V1, V2, atol=1e-10)
        np.testing.assert_allclose(Q1, Q2, atol=1e-10)

    def test_ill_conditioned_stays_unitary(self, rng):
        X, Y = haar_unitary(5, rng), haar_unitary(5, rng)
        A = (X * np.logspace(0, -5, 5)) @ Y
        V, Q = polar(A)
        assert np.linalg.norm(V.conj().T @ V - np.eye(5)) <= 1e-10
        assert rel_err(V @ Q, A) <= 1e-10
        np.testing.assert_allclose(V, X @ Y, atol=1e-9)

    def test_singular(self):
        with pytest.raises(Singular):
            polar(np.diag([1.0, 0.0]))
        with pytest.raises(Singular):
            polar_newton(np.diag([1.0, 0.0]))


class TestFunHermitian:
    def test_exp_zero(self):
        np.testing.assert_array_equal(expm_hermitian(np.zeros((3, 3))), np.eye(3))

    def test_log_diagonal(self):
        np.testing.assert_allclose(logm_pd(np.diag([4.0, 2.0, 1.0])),
                                   np.diag(np.log([4.0, 2.0, 1.0])), atol=1e-15)

    def test_half_power(self):
        P = np.array([[2.0, 1.0], [1.0, 2.0]])
        X = powm_pd(P, 0.5)
        assert np.linalg.norm(X @ X - P) <= 1e-12
        X = fun_hermitian(P, np.sqrt, lower=0.0)
        assert np.linalg.norm(X @ X - P) <= 1e-12

    def test_against_scipy(self, rng):
        P = random_pd(5, rng, log_spread=2.0)
        np.testing.assert_allclose(sqrtm_pd(P), scipy.linalg.sqrtm(P), atol=1e-11)
        np.testing.assert_allclose(logm_pd(P), scipy.linalg.logm(P), atol=1e-11)
        H = logm_pd(P)
        np.testing.assert_allclose(expm_hermitian(H), scipy.linalg.expm(H), atol=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            logm_pd(np.diag([1.0, 0.0]))
        with pytest.raises(DomainError):
            sqrtm_pd(np.diag([1.0, -1.0]))

    def test_clips_roundoff_negatives(self):
        X = sqrtm_pd(np.diag([1.0, -1e-14]))
        np.testing.assert_allclose(X, np.diag([1.0, 0.0]))


class TestUnitaryLog:
    def test_identity(self):
        assert np.all(log_unitary(np.eye(3)) == 0)

    def test_scalar_phase(self):
        np.testing.assert_allclose(log_unitary(np.exp(1j * np.pi / 4) * np.eye(2)),
                                   1j * np.pi / 4 * np.eye(2), atol=1e-15)

    def test_exp_then_log(self, rng):
        for n in (1, 3, 6):
            Z0 = random_skew(n, rng, 3.0)
            assert rel_err(log_unitary(expm_skew(Z0)), Z0) <= 1e-10
            np.testing.assert_allclose(expm_skew(Z0), scipy.linalg.expm(Z0), atol=1e-12)

    def test_branch_cut(self):
        with pytest.raises(BranchCut):
            log_unitary(np.diag([1.0, -1.0]))

    def test_not_unitary(self):
        with pytest.raises(InvalidInput):
            log_unitary(2 * np.eye(2))

    def test_expm_skew_rejects_hermitian(self):
        with pytest.raises(NotSkewHermitian):
            expm_skew(np.eye(2))


class TestSqrtPrincipal:
    def test_positive_definite(self, rng):
        P = random_pd(5, rng)
        np.testing.assert_allclose(sqrt_principal(P), sqrtm_pd(P), atol=1e-12)

    def test_diagonal(self):
        X = sqrt_principal(np.diag([4.0, 1j]))
        np.testing.assert_allclose(X, np.diag([2.0, np.exp(1j * np.pi / 4)]), atol=1e-15)

    def test_jordan_block(self):
        X = sqrt_principal(J)
        np.testing.assert_allclose(X, [[1, 0.5], [0, 1]], atol=1e-14)
        np.testing.assert_allclose(X @ X, J, atol=1e-14)

    def test_against_scipy(self, rng):
        for n in (2, 5, 9):
            A = random_accretive(n, rng, log_spread=2.0)
            np.testing.assert_allclose(sqrt_principal(A), scipy.linalg.sqrtm(A), atol=1e-10)

    def test_nonnormal_non_accretive(self):
        # eigenvalues 1 and 4 with large off-diagonal coupling
        A = np.array([[1.0, 100.0], [0.0, 4.0]])
        X = sqrt_principal(A)
        np.testing.assert_allclose(X @ X, A, atol=1e-11)
        assert np.all(np.linalg.eigvals(X).real > 0)

    @pytest.mark.parametrize("A", [np.diag([1.0, -2.0]), np.diag([1.0, 0.0])])
    def test_branch_cut(self, A):
        with pytest.raises(BranchCut):
            sqrt_principal(A)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8))
    def test_square_back(self, seed, n):
        A = random_accretive(n, np.random.default_rng(seed), log_spread=1.5, phase_spread=1.5)
        X = sqrt_principal(A)
        assert rel_err(X @ X, A) <= 1e-10
        assert np.all(np.linalg.eigvals(X).real > 0)


class TestSimdiagCongruence:
    def test_identity(self):
        S, lam = simdiag_congruence(np.eye(3), np.eye(3))
        np.testing.assert_allclose(S, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(lam, 1.0)

    def test_identity_and_diagonal(self):
        S, lam = simdiag_congruence(np.eye(2), np.diag([2.0, 4.0]))
        np.testing.assert_allclose(lam, [4, 2])
        np.testing.assert_allclose(S.conj().T @ S, np.eye(2), atol=1e-14)

    def test_residuals(self, rng):
        for n in (1, 3, 8):
            P, Q = random_pd(n, rng, 2.0), random_pd(n, rng, 2.0)
            S, lam = simdiag_congruence(P, Q)
            assert np.linalg.norm(S @ S.conj().T - P) <= 1e-10 * np.linalg.norm(P)
            assert np.linalg.norm((S * lam) @ S.conj().T - Q) <= 1e-10 * np.linalg.norm(Q)
            direct = np.sort(np.linalg.eigvals(np.linalg.solve(P, Q)).real)[::-1]
            np.testing.assert_allclose(lam, direct, rtol=1e-10)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            simdiag_congruence(np.eye(2), np.diag([1.0, -1.0]))


class TestTolerances:
    def test_override_changes_gate(self):
        N = np.array([[1.0, 1e-6], [0.0, 2.0]])
        with pytest.raises(NotNormal):
            eig_normal(N)
        with tolerances(tol_normal=1e-3):
            eig_normal(N)
