"""JIT kernels for maximizing a correlational Bell functional.

The functional is written as a coefficient tensor ``W`` of shape (12, 12, 12):
party ``k`` contributes a "lifted" 12-vector made of three 4-vectors, one per
setting index (0 = no measurement -> (1, 0, 0, 0); 1, 2 -> (0, a_x, a_y, a_z)).
Two-party functionals are padded with a dummy third party that never measures.

With every other direction held fixed the functional is linear in each
measurement direction, so the best direction is the normalized coefficient
vector. Alternating these exact updates never decreases the value.
"""

import numpy as np
from numba import njit

# Positions of a lifted vector that can be nonzero.
_NZ = np.array([0, 5, 6, 7, 9, 10, 11])
_ZERO_NORM = 1e-14


@njit(cache=True)
def _lift(v, out):
    out[:] = 0.0
    out[0] = 1.0
    for s in range(2):
        for c in range(3):
            out[4 * (s + 1) + 1 + c] = v[s, c]


@njit(cache=True)
def _coefficient(W, a, k, out):
    """Coefficient of party ``k``'s lifted vector, others contracted."""
    k1 = (k + 1) % 3
    k2 = (k + 2) % 3
    out[:] = 0.0
    for p in _NZ:
        acc = 0.0
        for q in _NZ:
            aq = a[k1, q]
            if aq == 0.0:
                continue
            for r in _NZ:
                ar = a[k2, r]
                if ar == 0.0:
                    continue
                if k == 0:
                    w = W[p, q, r]
                elif k == 1:
                    w = W[r, p, q]
                else:
                    w = W[q, r, p]
                acc += w * aq * ar
        out[p] = acc


@njit(cache=True)
def tensor_value(W, V):
    """Functional value for directions ``V`` of shape (3, 2, 3)."""
    a = np.zeros((3, 12))
    for k in range(3):
        _lift(V[k], a[k])
    c = np.zeros(12)
    _coefficient(W, a, 2, c)
    val = 0.0
    for p in _NZ:
        val += c[p] * a[2, p]
    return val


@njit(cache=True)
def seesaw(W, V0, max_iter, tol):
    """Alternating exact maximization from each start in ``V0`` (M, 3, 2, 3).

    Returns final values, final directions, iteration counts and a flag that is
    set when the per-sweep gain dropped below ``tol`` within ``max_iter`` sweeps.
    """
    M = V0.shape[0]
    V = V0.copy()
    values = np.empty(M)
    iters = np.zeros(M, np.int64)
    converged = np.zeros(M, np.bool_)
    a = np.zeros((3, 12))
    c = np.zeros(12)
    for m in range(M):
        for k in range(3):
            _lift(V[m, k], a[k])
        prev = tensor_value(W, V[m])
        for it in range(max_iter):
            cur = 0.0
            for k in range(3):
                _coefficient(W, a, k, c)
                for s in range(2):
                    base = 4 * (s + 1) + 1
                    n = np.sqrt(c[base] ** 2 + c[base + 1] ** 2 + c[base + 2] ** 2)
                    if n > _ZERO_NORM:
                        for j in range(3):
                            V[m, k, s, j] = c[base + j] / n
                _lift(V[m, k], a[k])
                if k == 2:
                    for p in _NZ:
                        cur += c[p] * a[2, p]
            iters[m] = it + 1
            gain = cur - prev
            prev = cur
            if gain < tol:
                converged[m] = True
                break
        values[m] = prev
    return values, V, iters, converged
