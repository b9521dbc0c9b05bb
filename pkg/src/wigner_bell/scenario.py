"""Momentum-spin initial states and the reduced spin state seen by a boosted observer.

A scenario is a superposition of momentum branches (each branch fixes one
direction of motion per particle) times a spin state. Momentum kets are
treated as orthonormal labels. The observer moves along +x, every particle
moves in the yz-plane, and all particles share one speed, so a single Wigner
angle ``omega`` describes the whole boost; the axis for particle ``k`` in
branch ``b`` is ``x_hat x dir[b][k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import linalg
from .relativity import WignerRotation, rotation_axis, spin_half_rep, su2, wigner_angle

OBSERVER_DIR = np.array([1.0, 0.0, 0.0])
_NORM_TOL = 1e-12
_PLANE_TOL = 1e-9


class MomentumSetting(str, Enum):
    TWO_OPPOSITE = "two-opposite"
    TWO_SAME = "two-same"
    THREE_SYMMETRIC = "three-symmetric"
    THREE_SAME = "three-same"

    @property
    def n_qubits(self) -> int:
        return 2 if self.value.startswith("two") else 3


_S3 = math.sqrt(3.0) / 2.0
_FIRST_BRANCH = {
    MomentumSetting.TWO_OPPOSITE: [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)],
    MomentumSetting.TWO_SAME: [(0.0, 0.0, 1.0), (0.0, 0.0, 1.0)],
    MomentumSetting.THREE_SYMMETRIC: [(0.0, 0.0, 1.0), (0.0, _S3, -0.5), (0.0, -_S3, -0.5)],
    MomentumSetting.THREE_SAME: [(0.0, 0.0, 1.0)] * 3,
}


@dataclass(frozen=True)
class MomentumBranch:
    amplitude: complex
    directions: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        dirs = tuple(tuple(float(x) for x in d) for d in self.directions)
        for d in dirs:
            if len(d) != 3:
                raise ValueError(f"direction {d} is not a 3-vector")
            if abs(math.sqrt(sum(x * x for x in d)) - 1.0) > _NORM_TOL:
                raise ValueError(f"direction {d} is not a unit vector")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "amplitude", complex(self.amplitude))


@dataclass(frozen=True)
class MomentumScenario:
    """``sum_b c_b |dirs_b>`` (momentum) times ``spin_state``.

    Branches with identical direction tuples are merged by adding amplitudes;
    the merged amplitudes must then be normalized.
    """

    n_qubits: int
    branches: tuple[MomentumBranch, ...]
    spin_state: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits not in (2, 3):
            raise ValueError(f"n_qubits must be 2 or 3, got {self.n_qubits}")
        merged: dict[tuple, complex] = {}
        for b in self.branches:
            if len(b.directions) != self.n_qubits:
                raise ValueError(
                    f"branch has {len(b.directions)} directions for {self.n_qubits} qubits"
                )
            for d in b.directions:
                if abs(d[0]) > _PLANE_TOL:
                    raise ValueError(f"direction {d} is not in the yz-plane")
            merged[b.directions] = merged.get(b.directions, 0j) + b.amplitude
        branches = tuple(MomentumBranch(c, dirs) for dirs, c in merged.items())
        weight = sum(abs(b.amplitude) ** 2 for b in branches)
        if abs(weight - 1.0) > _NORM_TOL:
            raise ValueError(f"branch amplitudes have squared norm {weight}, expected 1")
        object.__setattr__(self, "branches", branches)

        psi = np.asarray(self.spin_state, dtype=complex).ravel()
        if psi.shape != (2**self.n_qubits,):
            raise ValueError(f"spin state must have dimension {2**self.n_qubits}")
        if abs(np.linalg.norm(psi) - 1.0) > _NORM_TOL:
            raise ValueError("spin state is not normalized")
        psi.setflags(write=False)
        object.__setattr__(self, "spin_state", psi)


def make_generalized_ghz_spin(n: int, theta_s: float) -> np.ndarray:
    """``cos(theta_s)|0...0> + sin(theta_s)|1...1>`` on ``n`` qubits."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = math.cos(theta_s)
    psi[-1] = math.sin(theta_s)
    return psi


def make_generalized_w_spin(theta_s: float, phi_s: float) -> np.ndarray:
    """``sin t cos p |001> + sin t sin p |010> + cos t |100>``."""
    psi = np.zeros(8, dtype=complex)
    psi[0b001] = math.sin(theta_s) * math.cos(phi_s)
    psi[0b010] = math.sin(theta_s) * math.sin(phi_s)
    psi[0b100] = math.cos(theta_s)
    return psi


def make_momentum_branches(setting: MomentumSetting | str, theta_m: float) -> list[MomentumBranch]:
    """Two branches ``cos(theta_m)|p1..pN> + sin(theta_m)|-p1..-pN>`` for a named setting."""
    try:
        setting = MomentumSetting(setting)
    except ValueError:
        valid = ", ".join(s.value for s in MomentumSetting)
        raise ValueError(f"unknown momentum setting {setting!r}; expected one of {valid}") from None
    first = _FIRST_BRANCH[setting]
    second = [tuple(-x + 0.0 for x in d) for d in first]
    return [
        MomentumBranch(math.cos(theta_m), tuple(first)),
        MomentumBranch(math.sin(theta_m), tuple(second)),
    ]


def make_scenario(setting: MomentumSetting | str, theta_m: float, spin_state: np.ndarray) -> MomentumScenario:
    setting = MomentumSetting(setting)
    return MomentumScenario(setting.n_qubits, tuple(make_momentum_branches(setting, theta_m)), spin_state)


def omega_from_speeds(particle_speed: float, observer_speed: float) -> float:
    """Common Wigner angle when every particle moves at ``particle_speed``."""
    return wigner_angle(particle_speed, observer_speed)


def _check_omega(omega: float) -> float:
    omega = float(omega)
    if not (0.0 <= omega < math.pi / 2):
        raise ValueError(f"omega = {omega} outside [0, pi/2)")
    return omega


def branch_unitary(directions: Sequence[Sequence[float]], omega: float) -> np.ndarray:
    """Tensor product of the per-particle spin-1/2 Wigner rotations for one branch."""
    factors = []
    for d in directions:
        axis = rotation_axis(d, OBSERVER_DIR)
        w = WignerRotation.identity() if axis is None else WignerRotation(omega, tuple(axis))
        factors.append(spin_half_rep(w))
    return linalg.kron_all(factors)


def check_spin_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    if not linalg.is_hermitian(rho):
        raise ValueError("spin density is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"spin density has trace {tr}")
    lam_min = linalg.hermitian_eigenvalues(rho)[-1]
    if lam_min < -tol:
        raise ValueError(f"spin density has negative eigenvalue {lam_min}")
    return rho


def transform_scenario(s: MomentumScenario, omega: float) -> np.ndarray:
    """Reduced spin density matrix after a boost with Wigner angle ``omega``.

    ``sum_b |c_b|^2 U_b |phi><phi| U_b^dagger``: the boost keeps distinct
    momentum tuples distinct, so tracing out momentum kills all cross terms.
    """
    omega = _check_omega(omega)
    rho = np.zeros((2**s.n_qubits,) * 2, dtype=complex)
    for b in s.branches:
        psi = branch_unitary(b.directions, omega) @ s.spin_state
        rho += abs(b.amplitude) ** 2 * np.outer(psi, psi.conj())
    rho = (rho + rho.conj().T) / 2
    return check_spin_density(rho)


def transform_scenario_full(s: MomentumScenario, omega: float) -> np.ndarray:
    """Same quantity as :func:`transform_scenario`, built in the full
    momentum-label x spin space and reduced with :func:`linalg.partial_trace`.

    Each particle gets one orthonormal momentum label per distinct direction it
    takes across branches. The boost acts as a momentum-controlled local
    rotation on spin and a relabeling of momenta (a permutation, here the
    identity, since relabeling commutes with the final trace).
    """
    omega = _check_omega(omega)
    n = s.n_qubits
    labels: list[list[tuple]] = [[] for _ in range(n)]
    for b in s.branches:
        for k, d in enumerate(b.directions):
            if d not in labels[k]:
                labels[k].append(d)
    mdims = [len(l) for l in labels]
    mom_dim = int(np.prod(mdims))
    spin_dim = 2**n

    psi_mom = np.zeros(mom_dim, dtype=complex)
    for b in s.branches:
        idx = np.ravel_multi_index([labels[k].index(d) for k, d in enumerate(b.directions)], mdims)
        psi_mom[idx] += b.amplitude
    psi = np.kron(psi_mom, s.spin_state)

    # Block-diagonal controlled rotation: momentum label tuple selects the spin unitary.
    big = np.zeros((mom_dim * spin_dim,) * 2, dtype=complex)
    for idx in range(mom_dim):
        ks = np.unravel_index(idx, mdims)
        per_particle = []
        for k in range(n):
            axis = rotation_axis(labels[k][ks[k]], OBSERVER_DIR)
            per_particle.append(np.eye(2) if axis is None else su2(omega, axis))
        block = slice(idx * spin_dim, (idx + 1) * spin_dim)
        big[block, block] = linalg.kron_all(per_particle)

    rho_full = linalg.projector(big @ psi)
    dims = mdims + [2] * n
    return linalg.partial_trace(rho_full, dims, keep=range(n, 2 * n))
