"""Small dense complex linear algebra for qubit registers.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``; state vectors are
1-d arrays. Everything here is sized for at most 64-dimensional spaces, so
there are no sparse paths.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

#: Absolute tolerance on the largest entry of ``m - m^dagger``.
HERMITIAN_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Pauli basis ``(I, X, Y, Z)`` stacked as a ``(4, 2, 2)`` array.
PAULI = np.stack([I2, SIGMA_X, SIGMA_Y, SIGMA_Z])


def _square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two square matrices."""
    return np.kron(_square(a, "a"), _square(b, "b"))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def dot_sigma(a: Sequence[float]) -> np.ndarray:
    """The spin observable ``a . sigma`` for a real 3-vector ``a``."""
    ax, ay, az = a
    return ax * SIGMA_X + ay * SIGMA_Y + az * SIGMA_Z


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = _square(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = _square(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def is_psd(m: np.ndarray, tol: float = 1e-10) -> bool:
    if not is_hermitian(m):
        return False
    return bool(hermitian_eigenvalues(m)[-1] >= -tol)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Raises ``ValueError`` if ``m`` is not Hermitian within ``HERMITIAN_TOL``.
    """
    m = _square(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)[::-1]


def hermitian_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian matrix, eigenvalues descending.

    Columns of the returned matrix are the matching eigenvectors.
    """
    m = _square(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    return w[::-1], v[:, ::-1]


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduce ``rho`` onto the subsystems listed in ``keep``.

    ``dims`` gives the subsystem dimensions in tensor order and ``keep`` holds
    0-based subsystem indices. Kept subsystems stay in their original order.
    Keeping nothing returns the ``1 x 1`` matrix holding the trace.
    """
    rho = _square(rho, "rho")
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} do not multiply to {rho.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")

    t = rho.reshape(dims + dims)
    # einsum labels: row index i for subsystem i, column n + i; traced
    # subsystems share one label between row and column.
    rows = list(range(n))
    cols = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, rows + cols, out)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d, d)


def normalize(psi: Sequence[complex]) -> np.ndarray:
    """Return ``psi`` scaled to unit Euclidean norm."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def purity(rho: np.ndarray) -> float:
    rho = _square(rho, "rho")
    return float(np.real(np.trace(rho @ rho)))


def pauli_coefficients(op: np.ndarray) -> np.ndarray:
    """Coefficients ``c`` with ``op = c0 I + c1 X + c2 Y + c3 Z`` for a 2x2 ``op``."""
    op = _square(op, "op")
    if op.shape != (2, 2):
        raise ValueError("expected a 2x2 operator")
    return np.einsum("kij,ji->k", PAULI, op) / 2.0


def pauli_tensor(rho: np.ndarray, n_qubits: int) -> np.ndarray:
    """Real correlation tensor ``R[m1..mN] = tr(rho sigma_m1 x ... x sigma_mN)``.

    Index 0 is the identity, 1..3 are X, Y, Z.
    """
    rho = _square(rho, "rho")
    if rho.shape[0] != 2**n_qubits:
        raise ValueError(f"rho has dim {rho.shape[0]}, expected {2**n_qubits}")
    t = rho.reshape((2,) * (2 * n_qubits))
    # tr(rho P) = sum rho[r, c] P[c, r]; per qubit contract (r_k, c_k) with PAULI[m_k, c_k, r_k].
    operands: list = [t, list(range(2 * n_qubits))]
    for k in range(n_qubits):
        operands += [PAULI, [2 * n_qubits + k, n_qubits + k, k]]
    r = np.einsum(*operands, [2 * n_qubits + k for k in range(n_qubits)])
    return np.real(r)
