import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wigner_bell import linalg
from wigner_bell.linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

from conftest import random_density, random_hermitian


def test_kron_identity():
    np.testing.assert_array_equal(linalg.kron(I2, I2), np.eye(4))


def test_kron_zz():
    np.testing.assert_array_equal(linalg.kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_xy_squares_to_identity():
    m = linalg.kron(SIGMA_X, SIGMA_Y)
    np.testing.assert_allclose(m @ m, np.eye(4), atol=1e-15)


def test_kron_entry_layout(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    k = linalg.kron(a, b)
    assert k.shape == (6, 6)
    for i1, i2, j1, j2 in itertools.product(range(2), range(3), range(2), range(3)):
        assert abs(k[i1 * 3 + i2, j1 * 3 + j2] - a[i1, j1] * b[i2, j2]) < 1e-14


def test_kron_rejects_non_square():
    with pytest.raises(ValueError):
        linalg.kron(np.ones((2, 3)), I2)


complex_2x2 = arrays(
    np.complex128,
    (2, 2),
    elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=50, deadline=None)
@given(complex_2x2, complex_2x2, complex_2x2)
def test_kron_associative(a, b, c):
    left = linalg.kron(linalg.kron(a, b), c)
    right = linalg.kron(a, linalg.kron(b, c))
    np.testing.assert_allclose(left, right, rtol=0, atol=1e-12)


def _partial_trace_loops(rho, dims, keep):
    """Reference reduction by explicit index sums."""
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    kd = [dims[k] for k in keep]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    for row in itertools.product(*[range(d) for d in kd]):
        for col in itertools.product(*[range(d) for d in kd]):
            total = 0j
            for env in itertools.product(*[range(dims[k]) for k in traced]):
                r, c = [0] * n, [0] * n
                for k, v in zip(keep, row):
                    r[k] = v
                for k, v in zip(keep, col):
                    c[k] = v
                for k, v in zip(traced, env):
                    r[k] = c[k] = v
                total += rho[np.ravel_multi_index(r, dims), np.ravel_multi_index(c, dims)]
            out[np.ravel_multi_index(row, kd) if kd else 0, np.ravel_multi_index(col, kd) if kd else 0] = total
    return out


def test_partial_trace_product_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1
    np.testing.assert_array_equal(linalg.partial_trace(rho, [2, 2], keep=[1]), np.diag([1, 0]))


def test_partial_trace_bell_state_is_maximally_mixed():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = linalg.projector(phi)
    expected = _partial_trace_loops(rho, [2, 2], [1])
    np.testing.assert_allclose(expected, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(linalg.partial_trace(rho, [2, 2], keep=[1]), expected, atol=1e-15)


@pytest.mark.parametrize(
    "dims,keep",
    [([2, 2], [0]), ([2, 3], [1]), ([2, 2, 2], [0, 2]), ([3, 2, 2], [1, 2]), ([2, 2, 2, 2, 2, 2], [3, 4, 5])],
)
def test_partial_trace_matches_index_sum(rng, dims, keep):
    rho = random_density(rng, int(np.prod(dims)))
    got = linalg.partial_trace(rho, dims, keep)
    np.testing.assert_allclose(got, _partial_trace_loops(rho, dims, keep), atol=1e-13)
    assert abs(np.trace(got) - np.trace(rho)) < 1e-13


def test_partial_trace_preserves_trace_of_hermitian(rng):
    for _ in range(20):
        h = random_hermitian(rng, 8)
        red = linalg.partial_trace(h, [2, 2, 2], keep=[1])
        assert abs(np.trace(red) - np.trace(h)) < 1e-12


def test_partial_trace_over_everything_is_scalar_trace(rng):
    rho = random_hermitian(rng, 8)
    out = linalg.partial_trace(rho, [2, 4], keep=[])
    assert out.shape == (1, 1)
    assert abs(out[0, 0] - np.trace(rho)) < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), [2, 3], keep=[0])
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), [2, 2], keep=[2])


def test_eigenvalues_diagonal():
    np.testing.assert_allclose(linalg.hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [3, 2, 1])


def test_eigenvalues_pauli_x():
    np.testing.assert_allclose(linalg.hermitian_eigenvalues(SIGMA_X), [1, -1], atol=1e-15)


def test_eigenvalues_orthogonal_gram_matches_charpoly():
    t = np.diag([1.0, -1.0, 1.0])
    m = t.T @ t
    # characteristic polynomial (x - 1)^3 => triple eigenvalue 1
    np.testing.assert_allclose(np.poly(m), [1, -3, 3, -1], atol=1e-12)
    np.testing.assert_allclose(linalg.hermitian_eigenvalues(m), [1, 1, 1], atol=1e-12)


def test_eigenvalues_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


@pytest.mark.parametrize("dim", [2, 5, 16, 64])
def test_eigh_reconstructs(rng, dim):
    for _ in range(5):
        m = random_hermitian(rng, dim)
        w, v = linalg.hermitian_eigh(m)
        assert np.all(np.diff(w) <= 0)
        err = np.linalg.norm(m - v @ np.diag(w) @ v.conj().T)
        assert err <= 1e-9 * np.linalg.norm(m)


def test_predicates():
    assert linalg.is_hermitian(SIGMA_Y)
    assert not linalg.is_hermitian(SIGMA_Y + 1e-9j * np.eye(2))
    assert linalg.is_hermitian(SIGMA_Y + 1e-11 * np.array([[0, 1], [0, 0]]))
    assert linalg.is_unitary(SIGMA_Y)
    assert not linalg.is_unitary(2 * SIGMA_Y)
    assert linalg.is_psd(np.eye(2) / 2)
    assert not linalg.is_psd(SIGMA_Z)


def test_normalize():
    psi = linalg.normalize([3, 4j])
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    with pytest.raises(ValueError):
        linalg.normalize([0, 0])


def test_pauli_tensor_matches_direct_traces(rng):
    rho = random_density(rng, 8)
    r = linalg.pauli_tensor(rho, 3)
    for idx in itertools.product(range(4), repeat=3):
        op = linalg.kron_all(linalg.PAULI[i] for i in idx)
        assert abs(r[idx] - np.trace(rho @ op).real) < 1e-13


def test_pauli_coefficients_roundtrip(rng):
    c = rng.standard_normal(4)
    op = np.einsum("k,kij->ij", c, linalg.PAULI)
    np.testing.assert_allclose(linalg.pauli_coefficients(op).real, c, atol=1e-15)
