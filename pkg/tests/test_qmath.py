import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import RHO_REF, RHO_REF_DIST_TO_MIXED, RHO_REF_EIGS, SY, SZ, random_density, trace_distance_2x2
from redsm.errors import DimMismatch, IndexOutOfRange, NotHermitian, NuOutOfRange
from redsm.qmath import (
    Prng,
    fourier_ket,
    hermitian_eig,
    is_density_matrix,
    kron,
    kron_all,
    nearly_pure,
    random_mixed,
    random_pure,
    trace_distance,
)


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_y_corner(self):
        assert kron(SY, SY)[0, 3] == -1

    def test_dims(self):
        assert kron(np.ones((2, 2)), np.ones((3, 3))).shape == (6, 6)

    def test_associative(self, rng):
        a, b, c = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)) for k in (2, 3, 2))
        np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-13)
        np.testing.assert_allclose(kron_all(a, b, c), kron(a, kron(b, c)), atol=1e-13)

    def test_mixed_product(self, rng):
        a, b, c, d = (rng.standard_normal((2, 2)) for _ in range(4))
        np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-13)

    def test_rejects_vectors(self):
        with pytest.raises(DimMismatch):
            kron(np.ones(2), np.eye(2))


class TestHermitianEig:
    def test_pauli_z(self):
        np.testing.assert_allclose(hermitian_eig(SZ).eigenvalues, [1.0, -1.0], atol=1e-14)

    def test_paper_state(self):
        np.testing.assert_allclose(hermitian_eig(RHO_REF).eigenvalues, RHO_REF_EIGS, atol=1e-12)
        # printed digits
        np.testing.assert_allclose(hermitian_eig(RHO_REF).eigenvalues, [0.88319, 0.11681], atol=5e-6)

    def test_maximally_mixed(self):
        np.testing.assert_allclose(hermitian_eig(np.eye(2) / 2).eigenvalues, [0.5, 0.5])

    @pytest.mark.parametrize("d", [2, 3, 5, 8, 12])
    def test_matches_lapack(self, rng, d):
        h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = h + h.conj().T
        spec = hermitian_eig(h)
        np.testing.assert_allclose(spec.eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-10)
        v = spec.eigenvectors
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
        np.testing.assert_allclose(h @ v, v * spec.eigenvalues, atol=1e-9)
        assert spec.sweeps <= 60

    def test_degenerate(self):
        h = np.diag([1.0, 1.0, -2.0]).astype(complex)
        np.testing.assert_allclose(hermitian_eig(h).eigenvalues, [1, 1, -2], atol=1e-14)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_not_square(self):
        with pytest.raises(DimMismatch):
            hermitian_eig(np.ones((2, 3)))


class TestTraceDistance:
    def test_identical(self):
        assert trace_distance(RHO_REF, RHO_REF) == pytest.approx(0.0, abs=1e-15)

    def test_orthogonal(self):
        assert trace_distance(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(1.0)

    def test_paper_state_vs_mixed(self):
        d = trace_distance(RHO_REF, np.eye(2) / 2)
        assert d == pytest.approx(RHO_REF_DIST_TO_MIXED, abs=1e-12)
        assert d == pytest.approx(0.3832, abs=1e-4)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            trace_distance(np.eye(2) / 2, np.eye(3) / 3)

    def test_two_by_two_oracle(self, rng):
        for _ in range(50):
            a, b = random_density(2, rng), random_density(2, rng)
            assert trace_distance(a, b) == pytest.approx(trace_distance_2x2(a, b), abs=1e-12)

    def test_metric(self, rng):
        for d in (2, 3, 4):
            a, b, c = (random_density(d, rng) for _ in range(3))
            ab, bc, ac = trace_distance(a, b), trace_distance(b, c), trace_distance(a, c)
            assert ab == pytest.approx(trace_distance(b, a), abs=1e-13)
            assert ac <= ab + bc + 1e-12
            assert 0.0 <= ab <= 1.0


class TestFourierKet:
    def test_d2(self):
        np.testing.assert_allclose(fourier_ket(2, 0), np.array([1, 1]) / np.sqrt(2))
        np.testing.assert_allclose(fourier_ket(2, 1), np.array([1, -1]) / np.sqrt(2), atol=1e-15)

    def test_d3_component(self):
        assert fourier_ket(3, 1)[2] == pytest.approx(np.exp(4j * np.pi / 3) / np.sqrt(3))

    def test_orthonormal(self):
        f = np.array([fourier_ket(5, j) for j in range(5)])
        np.testing.assert_allclose(f.conj() @ f.T, np.eye(5), atol=1e-14)

    def test_range(self):
        with pytest.raises(IndexOutOfRange):
            fourier_ket(3, 3)


class TestRandomStates:
    @pytest.mark.parametrize("mode", ["haar", "nonneg"])
    def test_normalised(self, mode):
        for k in range(20):
            psi = random_pure(4, mode, Prng(7).split(k))
            assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_nonneg(self):
        for k in range(50):
            psi = random_pure(3, "nonneg", Prng(7).split(k))
            assert min(psi.real.min(), psi.imag.min()) >= 0.0

    def test_deterministic(self):
        np.testing.assert_array_equal(random_pure(3, "haar", Prng(5)), random_pure(3, "haar", Prng(5)))
        assert not np.allclose(random_pure(3, "haar", Prng(5)), random_pure(3, "haar", Prng(6)))

    def test_ginibre_is_state(self):
        base = Prng(3)
        worst = np.inf
        for k in range(10_000):
            rho = random_mixed(2, base.split(k))
            assert abs(np.trace(rho) - 1) < 1e-12
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
            worst = min(worst, hermitian_eig(rho).eigenvalues[-1])
        assert worst >= -1e-14

    def test_nearly_pure_limits(self):
        psi = random_pure(3, "haar", Prng(1))
        np.testing.assert_allclose(nearly_pure(psi, 0.0), np.outer(psi, psi.conj()))
        np.testing.assert_allclose(nearly_pure(psi, 1.0), np.eye(3) / 3)
        np.testing.assert_allclose(nearly_pure(np.array([1.0, 0.0]), 0.10), np.diag([0.95, 0.05]))

    def test_nearly_pure_range(self):
        with pytest.raises(NuOutOfRange):
            nearly_pure(np.array([1.0, 0.0]), 1.5)

    def test_is_density_matrix(self):
        assert is_density_matrix(np.eye(2) / 2)
        assert not is_density_matrix(np.eye(2))


class TestPrng:
    def test_split_independent_of_order(self):
        a = Prng(9)
        x = a.split(3).random(4)
        a.split(1).random(100)
        np.testing.assert_array_equal(Prng(9).split(3).random(4), x)

    def test_distinct_streams(self):
        assert not np.array_equal(Prng(9).split(0).random(4), Prng(9).split(1).random(4))

    def test_seed_range(self):
        with pytest.raises(ValueError):
            Prng(-1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_trace_distance_bounds_property(d, seed):
    rng = np.random.default_rng(seed)
    a, b = random_density(d, rng), random_density(d, rng)
    dist = trace_distance(a, b)
    assert 0.0 <= dist <= 1.0
    # invariant under a common unitary
    q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    assert trace_distance(q @ a @ q.conj().T, q @ b @ q.conj().T) == pytest.approx(dist, abs=1e-10)
