"""Correlational Bell functionals and their maximization over measurement directions.

A functional is a table of weights ``T[i1..iN]`` over setting indices, with
index 0 meaning "no measurement" (identity on that qubit) and 1, 2 the two
measurement directions of that party. Its value on a state is
``sum T[i1..iN] Q[i1..iN]`` with ``Q = tr(rho a_i1.sigma x ... x a_iN.sigma)``.
Both functionals shipped here have classical bound 1.

Measurement settings are arrays of shape ``(N, 2, 3)``: party, setting,
unit direction.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import _seesaw, linalg
from .scenario import MomentumScenario, transform_scenario

log = logging.getLogger(__name__)

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class BellFunctional:
    name: str
    n_parties: int
    coefficients: Mapping[tuple[int, ...], Fraction]
    classical_bound: Fraction = Fraction(1)
    n_settings: int = 2

    def __post_init__(self):
        if self.n_parties not in (2, 3):
            raise ValueError("only 2- and 3-party functionals are supported")
        coeffs = {}
        for key, w in self.coefficients.items():
            key = tuple(int(i) for i in key)
            if len(key) != self.n_parties:
                raise ValueError(f"index tuple {key} has wrong length")
            if any(i < 0 or i > self.n_settings for i in key):
                raise ValueError(f"setting index in {key} exceeds {self.n_settings}")
            coeffs[key] = Fraction(w)
        object.__setattr__(self, "coefficients", coeffs)

    def tensor(self) -> np.ndarray:
        t = np.zeros((self.n_settings + 1,) * self.n_parties)
        for key, w in self.coefficients.items():
            t[key] = float(w)
        return t

    def total_weight(self) -> float:
        """``sum |T|``, an upper bound on ``|value|`` for any state and settings."""
        return float(sum(abs(w) for w in self.coefficients.values()))


def _table(weight: Fraction, plus: Iterable[str], minus: Iterable[str]) -> dict:
    table = {tuple(int(c) for c in k): weight for k in plus}
    table.update({tuple(int(c) for c in k): -weight for k in minus})
    return table


CHSH = BellFunctional(
    "CHSH", 2, _table(Fraction(1, 2), plus=["11", "12", "21"], minus=["22"])
)

I3 = BellFunctional(
    "I3",
    3,
    _table(
        Fraction(1, 3),
        plus=["221", "212", "122", "200", "020", "002"],
        minus=["111", "222", "110", "120", "210", "101", "102", "201", "011", "012", "021"],
    ),
)


def functional_for(n_qubits: int) -> BellFunctional:
    return {2: CHSH, 3: I3}[n_qubits]


# -- measurement settings -------------------------------------------------------


def settings_from_angles(angles) -> np.ndarray:
    """Unit directions from polar/azimuthal angles of shape ``(N, 2, 2)``."""
    angles = np.asarray(angles, dtype=float)
    theta, phi = angles[..., 0], angles[..., 1]
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def settings_to_angles(settings) -> np.ndarray:
    """Inverse of :func:`settings_from_angles` with ``theta in [0, pi]``, ``phi in (-pi, pi]``."""
    s = np.asarray(settings, dtype=float)
    theta = np.arccos(np.clip(s[..., 2], -1.0, 1.0))
    phi = np.arctan2(s[..., 1], s[..., 0])
    return np.stack([theta, phi], axis=-1)


def check_settings(settings, n_parties: int) -> np.ndarray:
    s = np.asarray(settings, dtype=float)
    if s.shape != (n_parties, 2, 3):
        raise ValueError(f"settings must have shape ({n_parties}, 2, 3), got {s.shape}")
    if np.max(np.abs(np.linalg.norm(s, axis=-1) - 1.0)) > 1e-12:
        raise ValueError("measurement directions must be unit vectors")
    return s


def random_settings(rng: np.random.Generator, n_starts: int, n_parties: int) -> np.ndarray:
    """Uniformly distributed directions, shape ``(n_starts, N, 2, 3)``.

    Draws are sequential, so the first ``k`` of ``n`` starts equal a ``k``-start draw.
    """
    v = rng.standard_normal((n_starts, n_parties, 2, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


# -- evaluation ---------------------------------------------------------------


def correlation(rho: np.ndarray, directions: Sequence) -> float:
    """``tr(rho A_1 x ... x A_N)`` with ``A_k = a_k.sigma``, or the identity where
    ``directions[k]`` is ``None``."""
    rho = np.asarray(rho)
    n = len(directions)
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"rho of shape {rho.shape} does not match {n} parties")
    ops = [linalg.I2 if d is None else linalg.dot_sigma(d) for d in directions]
    q = np.trace(rho @ linalg.kron_all(ops))
    if abs(q.imag) > _IMAG_TOL:
        raise ValueError(f"correlation has imaginary part {q.imag}; is rho Hermitian?")
    return float(q.real)


def evaluate(f: BellFunctional, rho: np.ndarray, settings) -> float:
    """Value of ``f`` on ``rho`` for the given measurement settings."""
    s = check_settings(settings, f.n_parties)
    total = 0.0
    for key, w in f.coefficients.items():
        dirs = [None if i == 0 else s[k, i - 1] for k, i in enumerate(key)]
        total += float(w) * correlation(rho, dirs)
    return total


def coefficient_tensor(f: BellFunctional, rho: np.ndarray) -> np.ndarray:
    """Fold ``f`` and the Pauli correlations of ``rho`` into the (12, 12, 12)
    tensor used by the JIT kernels (two-party functionals are padded)."""
    r = linalg.pauli_tensor(rho, f.n_parties)
    t = f.tensor()
    if f.n_parties == 2:
        w2 = np.einsum("ij,ab->iajb", t, r).reshape(12, 12)
        w = np.zeros((12, 12, 12))
        w[:, :, 0] = w2
        return w
    return np.einsum("ijk,abc->iajbkc", t, r).reshape(12, 12, 12)


def _pad(settings: np.ndarray) -> np.ndarray:
    """Pad ``(M, N, 2, 3)`` starts to three parties for the kernels."""
    m, n = settings.shape[:2]
    if n == 3:
        return np.ascontiguousarray(settings)
    out = np.zeros((m, 3, 2, 3))
    out[:, :n] = settings
    out[:, n:, :, 2] = 1.0
    return out


# -- maximization -------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerOptions:
    """Multistart search settings.

    ``method`` is ``"seesaw"`` (alternating exact updates of one party's
    directions at a time) or ``"nelder-mead"`` (simplex over spherical angles).
    ``tol`` bounds the per-sweep gain (seesaw) or the simplex size (Nelder-Mead).
    """

    multistarts: int = 24
    max_iters: int = 2000
    tol: float = 1e-9
    seed: int = 7
    method: str = "seesaw"

    def __post_init__(self):
        if self.multistarts < 0:
            raise ValueError("multistarts must be >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValueError("tol must be positive")
        if self.method not in ("seesaw", "nelder-mead"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class MaximizeResult:
    value: float
    settings: np.ndarray
    converged: bool
    start_values: np.ndarray = field(repr=False)


def _nelder_mead(w: np.ndarray, starts: np.ndarray, n: int, opts: OptimizerOptions):
    values, finals, flags = [], [], []
    for start in starts:
        x0 = settings_to_angles(start[:n]).ravel()

        def neg(x):
            v = _pad(settings_from_angles(x.reshape(n, 2, 2))[None])[0]
            return -_seesaw.tensor_value(w, v)

        res = _scipy_minimize(
            neg,
            x0,
            method="Nelder-Mead",
            options={"xatol": opts.tol, "fatol": 1e-13, "maxiter": opts.max_iters, "adaptive": True},
        )
        values.append(-res.fun)
        finals.append(settings_from_angles(res.x.reshape(n, 2, 2)))
        flags.append(bool(res.success))
    return np.array(values), np.array(finals), np.array(flags, dtype=bool)


def maximize(
    f: BellFunctional,
    rho: np.ndarray,
    opts: OptimizerOptions = OptimizerOptions(),
    initial: Sequence[np.ndarray] = (),
) -> MaximizeResult:
    """Best value of ``f`` on ``rho`` over all measurement directions found by a
    multistart local search.

    Starts are the ``initial`` settings (warm starts) followed by
    ``opts.multistarts`` random ones drawn from ``opts.seed``. The best final
    candidate wins, ties going to the earliest start. The returned value is
    recomputed with :func:`evaluate` at the winning settings.
    """
    n = f.n_parties
    warm = [check_settings(s, n) for s in initial]
    fresh = random_settings(np.random.default_rng(opts.seed), opts.multistarts, n)
    starts = np.concatenate([np.array(warm).reshape(-1, n, 2, 3), fresh])
    if len(starts) == 0:
        raise ValueError("no starting points: give multistarts > 0 or initial settings")

    w = coefficient_tensor(f, rho)
    if opts.method == "seesaw":
        values, finals, _, flags = _seesaw.seesaw(w, _pad(starts), opts.max_iters, opts.tol)
        finals = finals[:, :n]
    else:
        values, finals, flags = _nelder_mead(w, _pad(starts), n, opts)

    best = int(np.argmax(values))
    settings = finals[best]
    settings = settings / np.linalg.norm(settings, axis=-1, keepdims=True)
    value = evaluate(f, rho, settings)
    if not flags[best]:
        log.debug("best start %d of %d did not converge", best, len(starts))
    return MaximizeResult(value, settings, bool(flags[best]), np.asarray(values))


def chsh_oracle(rho: np.ndarray) -> float:
    """Exact maximum of the CHSH functional (normalized to classical bound 1).

    ``sqrt(l1 + l2)`` for the two largest eigenvalues of ``T^T T``, where
    ``T[i, j] = tr(rho sigma_i x sigma_j)``.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError("chsh_oracle needs a two-qubit density matrix")
    t = linalg.pauli_tensor(rho, 2)[1:, 1:]
    lam = linalg.hermitian_eigenvalues((t.T @ t).astype(complex))
    return math.sqrt(max(lam[0] + lam[1], 0.0))


# -- sweeps -------------------------------------------------------------------


@dataclass
class SweepPoint:
    omega: float
    value: float
    settings: np.ndarray
    converged: bool


def check_omega_grid(omega_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(omega_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("omega grid is empty")
    if not np.all(np.isfinite(grid)) or grid.min() < 0.0 or grid.max() >= math.pi / 2:
        raise ValueError("omega grid must lie in [0, pi/2)")
    if np.any(np.diff(grid) < 0):
        raise ValueError("omega grid must be nondecreasing")
    return grid


def sweep(
    f: BellFunctional,
    scenario: MomentumScenario,
    omega_grid: Sequence[float],
    opts: OptimizerOptions = OptimizerOptions(),
) -> list[SweepPoint]:
    """Maximized Bell value of the boosted spin state at each grid angle.

    Point ``i`` starts from the previous point's best settings plus fresh
    starts seeded by ``(opts.seed, i)``. A backward pass then re-runs the
    local search at each point from its right neighbour's best settings and
    keeps whichever is larger, so a better branch found late propagates back.
    """
    if f.n_parties != scenario.n_qubits:
        raise ValueError(f"{f.name} needs {f.n_parties} qubits, scenario has {scenario.n_qubits}")
    grid = check_omega_grid(omega_grid)
    rhos = [transform_scenario(scenario, om) for om in grid]

    points: list[SweepPoint] = []
    prev = None
    for i, (om, rho) in enumerate(zip(grid, rhos)):
        point_opts = replace(opts, seed=_point_seed(opts.seed, i))
        res = maximize(f, rho, point_opts, initial=[] if prev is None else [prev])
        points.append(SweepPoint(float(om), res.value, res.settings, res.converged))
        prev = res.settings

    local = replace(opts, multistarts=0)
    for i in range(len(points) - 2, -1, -1):
        res = maximize(f, rhos[i], local, initial=[points[i + 1].settings])
        if res.value > points[i].value:
            points[i] = SweepPoint(points[i].omega, res.value, res.settings, res.converged)
    return points


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])
