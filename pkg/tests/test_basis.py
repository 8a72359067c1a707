import numpy as np
import pytest

from coherbound.basis import BasisCoefficients, expand, generalized_gell_mann, project
from coherbound.operators import SIGMA_X, SIGMA_Y, SIGMA_Z, DimensionMismatchError, PreconditionError
from conftest import rand_herm


def test_qubit_basis_is_normalized_paulis():
    b = generalized_gell_mann(2)
    for h, p in zip(b.stack, (SIGMA_X, SIGMA_Y, SIGMA_Z)):
        np.testing.assert_allclose(h, p / np.sqrt(2), atol=1e-15)


def test_rejects_small_dim():
    with pytest.raises(PreconditionError):
        generalized_gell_mann(1)


def test_ordering_dim3():
    b = generalized_gell_mann(3)
    assert len(b) == 8
    # symmetric (0,1),(0,2),(1,2); antisymmetric same pairs; then two diagonals
    for n, (j, k) in enumerate([(0, 1), (0, 2), (1, 2)]):
        assert b.stack[n, j, k] == pytest.approx(1 / np.sqrt(2))
        assert b.stack[3 + n, j, k] == pytest.approx(-1j / np.sqrt(2))
        assert b.stack[3 + n, k, j] == pytest.approx(1j / np.sqrt(2))
    np.testing.assert_allclose(np.diag(b.stack[6]).real, [1, -1, 0] / np.sqrt(2))
    np.testing.assert_allclose(np.diag(b.stack[7]).real, [1, 1, -2] / np.sqrt(6))


@pytest.mark.parametrize("d", range(2, 9))
def test_orthonormal_traceless(d):
    h = generalized_gell_mann(d).stack
    assert h.shape == (d * d - 1, d, d)
    np.testing.assert_allclose(h, np.conj(np.swapaxes(h, 1, 2)), atol=0)
    assert np.max(np.abs(np.einsum("mii->m", h))) <= 1e-12
    gram = np.einsum("mij,nij->mn", h.conj(), h)
    np.testing.assert_allclose(gram, np.eye(d * d - 1), atol=1e-10)
    assert np.einsum("mij,mji->", h, h).real == pytest.approx(d * d - 1)


def test_expand_examples():
    b = generalized_gell_mann(2)
    e1 = BasisCoefficients(2, [1, 0, 0])
    np.testing.assert_allclose(expand(e1, b).m, SIGMA_X / np.sqrt(2))
    np.testing.assert_array_equal(expand(BasisCoefficients(2, [0, 0, 0]), b).m, 0)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_expand_unit_norm_diagonal_sum(rng, d):
    a = rng.standard_normal(d * d - 1)
    a /= np.linalg.norm(a)
    A = expand(BasisCoefficients(d, a)).m
    assert abs(np.trace(A)) <= 1e-12
    assert np.linalg.norm(A) == pytest.approx(1, abs=1e-10)
    assert np.sum(np.diag(A @ A)).real == pytest.approx(1, abs=1e-10)


def test_project_examples():
    b = generalized_gell_mann(2)
    np.testing.assert_allclose(project(SIGMA_X / np.sqrt(2), b).a, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(project(np.eye(2), b).a, 0, atol=1e-15)


@pytest.mark.parametrize("d", range(2, 7))
def test_round_trip_and_completeness(rng, d):
    b = generalized_gell_mann(d)
    for _ in range(20):
        a = rng.standard_normal(d * d - 1)
        np.testing.assert_allclose(project(expand(BasisCoefficients(d, a), b), b).a, a, atol=1e-12)
        h = rand_herm(rng, d)
        rebuilt = np.trace(h).real / d * np.eye(d) + expand(project(h, b), b).m
        np.testing.assert_allclose(rebuilt, h, atol=1e-9)


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        BasisCoefficients(2, [1, 0])
    with pytest.raises(DimensionMismatchError):
        project(np.eye(3), generalized_gell_mann(2))
    with pytest.raises(DimensionMismatchError):
        expand(BasisCoefficients(2, [1, 0, 0]), generalized_gell_mann(3))
