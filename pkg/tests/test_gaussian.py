import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import sqrtm

from relgauss.gaussian import (
    GaussianState,
    NumericFailure,
    SingleModeParams,
    direct_sum,
    is_physical,
    rotation,
    single_mode_cov,
    symplectic_eigenvalues,
    symplectic_form,
    wigner_eval,
)
from relgauss.partition import ParticleSystem, cmr_matrix

from conftest import random_physical_cov

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


def sqrtm_symplectic_spectrum(V):
    """Independent route: i V^(1/2) Omega V^(1/2) is Hermitian with spectrum +/- nu."""
    root = np.real(sqrtm(V))
    n = V.shape[0] // 2
    H = 1j * root @ symplectic_form(n) @ root
    ev = np.linalg.eigvalsh((H + H.conj().T) / 2)
    return np.sort(ev[ev > 0])[::-1]


class TestSymplecticForm:
    def test_single_mode(self):
        np.testing.assert_array_equal(symplectic_form(1), OMEGA)

    def test_two_modes_block_diagonal(self):
        expected = np.zeros((4, 4))
        expected[:2, :2] = OMEGA
        expected[2:, 2:] = OMEGA
        np.testing.assert_array_equal(symplectic_form(2), expected)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_squares_to_minus_identity(self, n):
        O = symplectic_form(n)
        np.testing.assert_array_equal(O @ O, -np.eye(2 * n))
        np.testing.assert_array_equal(O, -O.T)

    @pytest.mark.parametrize("n", [0, -1, 1.5])
    def test_rejects_bad_mode_count(self, n):
        with pytest.raises(ValueError):
            symplectic_form(n)


class TestSingleModeCov:
    def test_vacuum_for_any_rotation(self):
        np.testing.assert_allclose(single_mode_cov(SingleModeParams(1.0, 0.0, 0.3)), np.eye(2), atol=1e-15)

    def test_thermal(self):
        V = single_mode_cov(SingleModeParams(0.5, 0.0, 0.0))
        np.testing.assert_allclose(V, 2 * np.eye(2))
        assert np.linalg.det(V) == pytest.approx(4.0)

    def test_squeezed(self):
        V = single_mode_cov(SingleModeParams(1.0, 1.0, 0.0))
        np.testing.assert_allclose(V, np.diag([np.exp(-2), np.exp(2)]), rtol=1e-14)

    @pytest.mark.parametrize("mu", [0.0, -0.1, 1.0000001])
    def test_rejects_bad_purity(self, mu):
        with pytest.raises(ValueError):
            SingleModeParams(mu)

    @given(
        mu=st.floats(0.1, 1.0),
        r=st.floats(-2.0, 2.0),
        theta=st.floats(0.0, np.pi / 4),
    )
    def test_determinant_is_inverse_purity_squared(self, mu, r, theta):
        V = single_mode_cov(SingleModeParams(mu, r, theta))
        assert np.linalg.det(V) == pytest.approx(1 / mu**2, rel=1e-10)

    @given(mu=st.floats(0.1, 1.0), r=st.floats(-2.0, 2.0), theta=st.floats(-3.0, 3.0))
    def test_matches_rotated_squeezing_product(self, mu, r, theta):
        R = rotation(theta)
        S = np.diag([np.exp(-2 * r), np.exp(2 * r)])
        np.testing.assert_allclose(
            single_mode_cov(SingleModeParams(mu, r, theta)), R @ S @ R.T / mu, rtol=1e-12, atol=1e-12
        )


class TestSymplecticEigenvalues:
    def test_vacuum(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.eye(4)), [1.0, 1.0])

    def test_thermal(self):
        np.testing.assert_allclose(symplectic_eigenvalues(2 * np.eye(2)), [2.0])

    @pytest.mark.parametrize("r", [0.1, 1.0, 2.5])
    def test_pure_squeezed(self, r):
        np.testing.assert_allclose(symplectic_eigenvalues(np.diag([np.exp(-2 * r), np.exp(2 * r)])), [1.0], atol=1e-10)

    @given(r=st.floats(-2.0, 2.0), theta=st.floats(0.0, np.pi / 4))
    def test_pure_single_mode_is_one(self, r, theta):
        nu = symplectic_eigenvalues(single_mode_cov(SingleModeParams(1.0, r, theta)))
        assert abs(nu[0] - 1.0) <= 1e-10

    def test_descending_order(self, rng):
        V, nu = random_physical_cov(4, rng)
        out = symplectic_eigenvalues(V)
        np.testing.assert_allclose(out, nu, rtol=1e-9)
        assert np.all(np.diff(out) <= 0)

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalues(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalues(np.eye(3))

    def test_non_finite_input_raises(self):
        with pytest.raises(NumericFailure):
            symplectic_eigenvalues(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    @settings(max_examples=50, deadline=None)
    @given(masses=st.lists(st.floats(0.01, 100.0), min_size=2, max_size=4), seed=st.integers(0, 2**32 - 1))
    def test_invariant_under_partition_transform(self, masses, seed):
        rng = np.random.default_rng(seed)
        V, _ = random_physical_cov(len(masses), rng)
        M = cmr_matrix(ParticleSystem(tuple(masses))).matrix
        np.testing.assert_allclose(
            symplectic_eigenvalues(M @ V @ M.T), symplectic_eigenvalues(V), rtol=1e-9
        )

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_agrees_with_sqrtm_route(self, n, rng):
        for _ in range(10):
            V, _ = random_physical_cov(n, rng)
            np.testing.assert_allclose(symplectic_eigenvalues(V), sqrtm_symplectic_spectrum(V), rtol=1e-8)


class TestIsPhysical:
    def test_vacuum(self):
        assert is_physical(np.eye(2))

    def test_subvacuum(self):
        assert not is_physical(0.5 * np.eye(2))

    def test_mixed_squeezed(self):
        assert is_physical(single_mode_cov(SingleModeParams(0.3, 1.0, np.pi / 8)))

    def test_indefinite(self):
        assert not is_physical(np.diag([2.0, -2.0]))

    def test_tolerance_is_respected(self):
        V = (1 - 1e-6) * np.eye(2)
        assert not is_physical(V)
        assert is_physical(V, tol=1e-5)


class TestDirectSum:
    def test_identities(self):
        np.testing.assert_array_equal(direct_sum(np.eye(2), np.eye(2)), np.eye(4))

    def test_spectrum_and_determinant(self, rng):
        a, nu_a = random_physical_cov(1, rng)
        b, nu_b = random_physical_cov(2, rng)
        ab = direct_sum(a, b)
        np.testing.assert_allclose(symplectic_eigenvalues(ab), np.sort(np.r_[nu_a, nu_b])[::-1], rtol=1e-9)
        assert np.linalg.det(ab) == pytest.approx(np.linalg.det(a) * np.linalg.det(b), rel=1e-10)


def midpoint_integral(state, lo, hi, h, chunk=200_000):
    """Midpoint rule over the cube [lo, hi]^(2n), evaluated in chunks."""
    axis = np.arange(lo + h / 2, hi, h)
    dim = state.mean.size
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    total = 0.0
    for k in range(0, len(pts), chunk):
        total += wigner_eval(state, pts[k : k + chunk]).sum()
    return total * h**dim


class TestWigner:
    def test_vacuum_origin(self):
        assert wigner_eval(GaussianState.vacuum(1), [0.0, 0.0]) == pytest.approx(1 / (2 * np.pi))

    def test_vacuum_normalised(self):
        assert midpoint_integral(GaussianState.vacuum(1), -8, 8, 0.05) == pytest.approx(1.0, abs=1e-6)

    def test_even_about_mean(self, rng):
        V, _ = random_physical_cov(2, rng)
        s = GaussianState(rng.normal(size=4), V)
        delta = rng.normal(size=4)
        assert wigner_eval(s, s.mean + delta) == pytest.approx(wigner_eval(s, s.mean - delta), rel=1e-13)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_single_mode_normalised(self, seed):
        rng = np.random.default_rng(seed)
        p = SingleModeParams(rng.uniform(0.3, 1.0), rng.uniform(-0.5, 0.5), rng.uniform(0, np.pi / 4))
        s = GaussianState(rng.normal(scale=0.5, size=2), single_mode_cov(p))
        assert midpoint_integral(s, -12, 12, 0.05) == pytest.approx(1.0, abs=1e-5)

    @pytest.mark.parametrize("seed", range(3))
    def test_random_two_mode_normalised(self, seed):
        rng = np.random.default_rng(100 + seed)
        while True:
            V, _ = random_physical_cov(2, rng, scale=0.2, max_nu=1.3)
            ev = np.linalg.eigvalsh(V)
            if ev[0] > 0.4 and ev[-1] < 2.5:
                break
        s = GaussianState(np.zeros(4), V)
        assert midpoint_integral(s, -9, 9, 0.3) == pytest.approx(1.0, abs=1e-5)

    def test_batch_matches_pointwise(self, rng):
        V, _ = random_physical_cov(1, rng)
        s = GaussianState(np.zeros(2), V)
        pts = rng.normal(size=(5, 2))
        np.testing.assert_allclose(wigner_eval(s, pts), [wigner_eval(s, p) for p in pts])

    def test_singular_cov_raises(self):
        with pytest.raises(NumericFailure):
            wigner_eval(GaussianState(np.zeros(2), np.diag([1.0, 0.0])), [0.0, 0.0])

    def test_mean_length_checked(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(3), np.eye(2))
