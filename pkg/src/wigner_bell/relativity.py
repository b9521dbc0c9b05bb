"""Boost kinematics and the spin-1/2 Wigner rotation (natural units, c = 1).

The Wigner angle uses the closed form valid for a particle velocity
perpendicular to the observer's velocity (particles in the yz-plane,
observer along x). Other geometries are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, dot_sigma

#: Tolerance on ``|u_dir . v_dir|`` for the perpendicular-boost geometry.
PERP_TOL = 1e-9
#: Cross products shorter than this count as collinear boosts.
COLLINEAR_TOL = 1e-12
DEFAULT_AXIS = np.array([0.0, 0.0, 1.0])


class SuperluminalError(ValueError):
    """A speed or velocity with magnitude >= 1 was supplied."""


def _check_speed(speed: float, name: str = "speed") -> float:
    speed = float(speed)
    if not math.isfinite(speed) or speed < 0.0:
        raise ValueError(f"{name} must be a finite non-negative number, got {speed}")
    if speed >= 1.0:
        raise SuperluminalError(f"{name} = {speed} is not below the speed of light")
    return speed


def as_velocity(v: Sequence[float], name: str = "velocity") -> np.ndarray:
    """Validate a 3-velocity (fractions of c) and return it as an array."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be a finite 3-vector, got {v!r}")
    if np.linalg.norm(v) >= 1.0:
        raise SuperluminalError(f"|{name}| = {np.linalg.norm(v)} is not below the speed of light")
    return v


def _unit(v: Sequence[float], name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError(f"{name} must be a unit vector, |{name}| = {np.linalg.norm(v)}")
    return v


def gamma(speed: float) -> float:
    speed = _check_speed(speed)
    return 1.0 / math.sqrt(1.0 - speed * speed)


def rapidity(speed: float) -> float:
    """Rapidity ``artanh(speed)``; ``cosh`` of it is the Lorentz factor."""
    return math.atanh(_check_speed(speed))


def wigner_angle(u_speed: float, v_speed: float) -> float:
    """Wigner angle for perpendicular boosts with the given speeds.

    ``arctan(sinh xi sinh zeta / (cosh xi + cosh zeta))`` where ``xi`` and
    ``zeta`` are the two rapidities. Lies in ``[0, pi/2)``; symmetric in its
    arguments and zero when either speed is zero.
    """
    xi = rapidity(_check_speed(u_speed, "u_speed"))
    zeta = rapidity(_check_speed(v_speed, "v_speed"))
    return math.atan((math.sinh(xi) * math.sinh(zeta)) / (math.cosh(xi) + math.cosh(zeta)))


@dataclass(frozen=True)
class WignerRotation:
    """Rotation by ``angle`` radians about the unit vector ``axis``."""

    angle: float
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError("angle must be finite")
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-12:
            raise ValueError(f"axis must be a unit 3-vector, got {self.axis}")
        object.__setattr__(self, "axis", tuple(float(x) for x in axis))

    @classmethod
    def identity(cls) -> "WignerRotation":
        return cls(0.0, tuple(DEFAULT_AXIS))


def rotation_axis(u_dir: Sequence[float], v_dir: Sequence[float]) -> np.ndarray | None:
    """Normalized ``v_dir x u_dir``, or ``None`` for collinear directions.

    Non-collinear directions that are not perpendicular raise ``ValueError``.
    """
    u = _unit(u_dir, "u_dir")
    v = _unit(v_dir, "v_dir")
    n = np.cross(v, u)
    norm = np.linalg.norm(n)
    if norm < COLLINEAR_TOL:
        return None
    if abs(float(np.dot(u, v))) > PERP_TOL:
        raise ValueError(
            f"u_dir . v_dir = {np.dot(u, v):.3g}; only perpendicular boosts are supported"
        )
    return n / norm


def wigner_rotation(
    u_dir: Sequence[float], v_dir: Sequence[float], u_speed: float, v_speed: float
) -> WignerRotation:
    """Wigner rotation seen by an observer moving along ``v_dir`` at ``v_speed``
    for a particle moving along ``u_dir`` at ``u_speed``."""
    angle = wigner_angle(u_speed, v_speed)
    axis = rotation_axis(u_dir, v_dir)
    if axis is None or angle == 0.0:
        return WignerRotation.identity()
    return WignerRotation(angle, tuple(axis))


def su2(angle, axis) -> np.ndarray:
    """``cos(angle/2) I + i sin(angle/2) axis . sigma``, broadcasting over leading dims.

    ``angle`` has shape ``(...)`` and ``axis`` shape ``(..., 3)``; the result
    has shape ``(..., 2, 2)``.
    """
    angle = np.asarray(angle, dtype=float)
    axis = np.asarray(axis, dtype=float)
    c = np.cos(angle / 2.0)[..., None, None]
    s = np.sin(angle / 2.0)[..., None, None]
    n_sigma = (
        axis[..., 0, None, None] * SIGMA_X
        + axis[..., 1, None, None] * SIGMA_Y
        + axis[..., 2, None, None] * SIGMA_Z
    )
    return c * I2 + 1j * s * n_sigma


def spin_half_rep(w: WignerRotation) -> np.ndarray:
    """Two-dimensional (special unitary) representation of a Wigner rotation."""
    return su2(w.angle, np.asarray(w.axis))


def einstein_add(v: Sequence[float], u: Sequence[float]) -> np.ndarray:
    """Velocity of an object moving with ``u`` in a frame that moves with ``v``.

    Parallel part ``(v + u_par) / (1 + v.u)``, perpendicular part
    ``u_perp / (gamma_v (1 + v.u))``.
    """
    v = as_velocity(v, "v")
    u = as_velocity(u, "u")
    vv = float(np.dot(v, v))
    if vv == 0.0:
        return u.copy()
    denom = 1.0 + float(np.dot(v, u))
    u_par = (np.dot(u, v) / vv) * v
    u_perp = u - u_par
    g = 1.0 / math.sqrt(1.0 - vv)
    w = (v + u_par + u_perp / g) / denom
    # Rounding can only push |w| to within an ulp of 1 for inputs already at the edge.
    return as_velocity(w, "composite velocity")


def relativistic_spin_direction(a: Sequence[float], w: Sequence[float]) -> np.ndarray:
    """Direction ``a'`` such that the relativistic spin operator equals ``a' . sigma``."""
    a = _unit(a, "a")
    w = as_velocity(w, "w")
    ww = float(np.dot(w, w))
    if ww == 0.0:
        return a.copy()
    a_par = (np.dot(a, w) / ww) * w
    a_perp = a - a_par
    denom2 = 1.0 + float(np.dot(w, a)) ** 2 - ww
    assert denom2 > 0.0, "denominator vanishes only at the speed of light"
    return (math.sqrt(1.0 - ww) * a_perp + a_par) / math.sqrt(denom2)


def relativistic_spin_operator(a: Sequence[float], w: Sequence[float]) -> np.ndarray:
    """Spin observable along ``a`` for a particle with velocity ``w``
    (center-of-mass construction). Hermitian with eigenvalues +1 and -1."""
    return dot_sigma(relativistic_spin_direction(a, w))
