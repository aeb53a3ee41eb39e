"""Rotations about arbitrary axes, built three independent ways.

* :func:`rotation_rodrigues` evaluates the closed form
  ``C1 + (sin(t) * A2 - (1 - cos(t)) * O3) @ T4`` and is the reference.
* :func:`rotation_from_reflections` multiplies two orthographic reflections in
  planes through the axis that meet at half the rotation angle.
* :func:`rotation_eigen_reconstruct` assembles ``V diag(1, 1, e^it, e^-it) V^-1``
  from the axis point, the axis direction and the two isotropic directions.

All three agree and follow the right-hand rule about the axis direction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .projective_core import (
    DEFAULT_TOL,
    ProjectiveError,
    TolLike,
    as_vec4,
    is_infinite_point,
    proj_equal,
)
from .stereohomology import orthographic_reflection

UNIT_TOL = 1e-12


def reduce_angle(theta: float) -> float:
    """Map an angle to ``(-pi, pi]``."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise ProjectiveError(f"rotation angle must be finite, got {theta}")
    r = math.remainder(theta, 2.0 * math.pi)
    return math.pi if r == -math.pi else r


def _point4(p: ArrayLike) -> NDArray:
    p = np.asarray(p, dtype=float)
    if p.shape == (3,):
        p = np.append(p, 1.0)
    return as_vec4(p)


def _dir3(d: ArrayLike) -> NDArray:
    d = np.asarray(d, dtype=float)
    if d.shape == (4,):
        if d[3] != 0 and not is_infinite_point(d):
            raise ProjectiveError("axis direction must be an infinite point (w = 0)")
        d = d[:3]
    if d.shape != (3,) or not np.all(np.isfinite(d)):
        raise ProjectiveError(f"axis direction must have 3 finite components, got {d}")
    if not np.any(d):
        raise ProjectiveError("axis direction cannot be the zero vector")
    return d


@dataclass(frozen=True, eq=False)
class AxisByPointDir:
    """Axis through the ordinary ``point`` (w = 1) with unit ``dir`` (w = 0).

    The constructor rejects non-unit directions; use :meth:`normalized` to
    accept any nonzero direction.
    """

    point: NDArray
    dir: NDArray

    def __post_init__(self):
        p = _point4(self.point)
        if is_infinite_point(p):
            raise ProjectiveError("axis point must be ordinary")
        d = _dir3(self.dir)
        if abs(np.linalg.norm(d) - 1.0) > UNIT_TOL:
            raise ProjectiveError(f"axis direction must have unit length, got |d| = {np.linalg.norm(d)}")
        object.__setattr__(self, "point", p / p[3])
        object.__setattr__(self, "dir", np.append(d, 0.0))

    @classmethod
    def normalized(cls, point: ArrayLike, dir: ArrayLike) -> "AxisByPointDir":
        d = _dir3(dir)
        return cls(point, d / np.linalg.norm(d))

    @property
    def origin(self) -> NDArray:
        """Euclidean coordinates of the stored axis point."""
        return self.point[:3]

    @property
    def unit(self) -> NDArray:
        return self.dir[:3]

    def contains(self, p: ArrayLike, tol: float = 1e-8) -> bool:
        """Whether the ordinary point ``p`` lies on the axis."""
        x = _point4(p)
        x = x[:3] / x[3]
        r = x - self.origin
        return bool(np.linalg.norm(np.cross(r, self.unit)) <= tol * max(1.0, np.linalg.norm(x)))


@dataclass(frozen=True, eq=False)
class AxisByPlanes:
    """Axis as the meet of two ordinary planes, stored with unit normals."""

    p1: NDArray
    p2: NDArray

    def __post_init__(self):
        p1 = as_vec4(np.asarray(self.p1, dtype=float))
        p2 = as_vec4(np.asarray(self.p2, dtype=float))
        n1, n2 = np.linalg.norm(p1[:3]), np.linalg.norm(p2[:3])
        if n1 <= DEFAULT_TOL.rel * np.abs(p1).max() or n2 <= DEFAULT_TOL.rel * np.abs(p2).max():
            raise ProjectiveError("axis planes must be ordinary")
        p1, p2 = p1 / n1, p2 / n2
        if np.linalg.norm(np.cross(p1[:3], p2[:3])) <= DEFAULT_TOL.rel:
            raise ProjectiveError("axis planes are parallel")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @property
    def direction(self) -> NDArray:
        """Unit direction ``n1 x n2`` of the common line."""
        d = np.cross(self.p1[:3], self.p2[:3])
        return d / np.linalg.norm(d)

    def to_point_dir(self) -> AxisByPointDir:
        """Closest point of the line to the origin, with direction ``n1 x n2``."""
        N = np.vstack([self.p1[:3], self.p2[:3]])
        x = np.linalg.lstsq(N, -np.array([self.p1[3], self.p2[3]]), rcond=None)[0]
        return AxisByPointDir(x, self.direction)


@dataclass(frozen=True, eq=False)
class RotationSpec:
    axis: AxisByPointDir
    theta: float

    def __post_init__(self):
        if not isinstance(self.axis, AxisByPointDir):
            raise TypeError("axis must be an AxisByPointDir")
        object.__setattr__(self, "theta", reduce_angle(self.theta))

    @classmethod
    def of(cls, point: ArrayLike, dir: ArrayLike, theta: float) -> "RotationSpec":
        """Build a spec from raw arrays, normalizing the direction."""
        return cls(AxisByPointDir.normalized(point, dir), theta)


def two_points_to_axis(P: ArrayLike, Q: ArrayLike, tol: TolLike = None) -> AxisByPointDir:
    """Axis through two projective points, at least one ordinary."""
    P, Q = as_vec4(np.asarray(P, dtype=float)), as_vec4(np.asarray(Q, dtype=float))
    if not np.any(P) or not np.any(Q):
        raise ProjectiveError("axis points must be nonzero")
    if proj_equal(P, Q, tol):
        raise ProjectiveError("the two points coincide; the axis is undetermined")
    p_inf, q_inf = is_infinite_point(P, tol), is_infinite_point(Q, tol)
    if p_inf and q_inf:
        raise ProjectiveError("both points are infinite; the axis has no ordinary point")
    if p_inf:
        P, Q, q_inf = Q, P, True
    if q_inf:
        return AxisByPointDir.normalized(P, Q[:3])
    return AxisByPointDir.normalized(P, Q[:3] / Q[3] - P[:3] / P[3])


def _cycle_to_last(k: int) -> list[int]:
    """Cyclic index order that puts coordinate ``k`` in the third slot."""
    return [(k + 1) % 3, (k + 2) % 3, k]


def _unpermute(v: NDArray, perm: list[int]) -> NDArray:
    out = v.copy()
    out[perm] = v[:3]
    return out


def axis_to_plane_pair(axis: AxisByPointDir) -> AxisByPlanes:
    """Two planes of the pencil through the axis.

    With point ``(x0, y0, z0)`` and direction ``(a, b, c)`` they are
    ``(c, 0, -a, a*z0 - c*x0)`` and ``(0, c, -b, b*z0 - c*y0)``. Coordinates are
    cycled first so that the largest direction component plays ``c``.
    """
    d = axis.unit
    perm = _cycle_to_last(int(np.argmax(np.abs(d))))
    a, b, c = d[perm]
    x0, y0, z0 = axis.origin[perm]
    q1 = np.array([c, 0.0, -a, a * z0 - c * x0])
    q2 = np.array([0.0, c, -b, b * z0 - c * y0])
    return AxisByPlanes(_unpermute(q1, perm), _unpermute(q2, perm))


def dihedral_angle(p1: ArrayLike, p2: ArrayLike, mode: str = "arccos") -> float:
    """Angle in ``(0, pi)`` between the oriented normals of two ordinary planes.

    ``mode="laguerre"`` computes it instead as ``(1/2i) Log`` of the cross ratio
    of ``(p1, p2; I+, I-)`` in the pencil, ``I+`` and ``I-`` being its two
    isotropic members.
    """
    p1 = as_vec4(np.asarray(p1, dtype=float))
    p2 = as_vec4(np.asarray(p2, dtype=float))
    n1, n2 = p1[:3], p2[:3]
    g11, g12, g22 = n1 @ n1, n1 @ n2, n2 @ n2
    if g11 == 0 or g22 == 0:
        raise ProjectiveError("dihedral angle needs ordinary planes")
    if np.linalg.norm(np.cross(n1, n2)) <= DEFAULT_TOL.rel * math.sqrt(g11 * g22):
        raise ProjectiveError("planes are parallel")
    if mode == "arccos":
        return float(np.arccos(np.clip(g12 / math.sqrt(g11 * g22), -1.0, 1.0)))
    if mode != "laguerre":
        raise ValueError(f"unknown dihedral mode {mode!r}")
    # Members t*p1 + p2 with (t*n1 + n2)^2 = 0: g11 t^2 + 2 g12 t + g22 = 0.
    root = cmath.sqrt(complex(g12 * g12 - g11 * g22))
    t_plus = (-g12 + root) / g11
    t_minus = (-g12 - root) / g11
    # Pencil coordinates (t : 1); p1 = (1 : 0), p2 = (0 : 1).
    def bracket(x, y):
        return x[0] * y[1] - x[1] * y[0]

    P1, P2, Ip, Im = (1.0, 0.0), (0.0, 1.0), (t_plus, 1.0), (t_minus, 1.0)
    cross = (bracket(P1, Ip) * bracket(P2, Im)) / (bracket(P1, Im) * bracket(P2, Ip))
    w = (cmath.log(cross) / 2j).real
    return float(w % math.pi)


def bisector_planes(axis: AxisByPlanes, theta: float) -> tuple[NDArray, NDArray]:
    """Planes through the axis at ``+theta/2`` and ``-theta/2`` from ``p1``.

    Returns ``(pi_minus, pi_plus)`` built as
    ``sin(w - t/2) p1 + sin(t/2) p2`` and ``sin(w + t/2) p1 - sin(t/2) p2``,
    scaled by ``1 / sin(w)`` so their normals stay unit length.
    """
    p1, p2 = axis.p1, axis.p2
    w = dihedral_angle(p1, p2)
    sw = math.sin(w)
    if sw <= DEFAULT_TOL.rel:
        raise ProjectiveError("axis planes are parallel")
    h = 0.5 * float(theta)
    pm = (math.sin(w - h) * p1 + math.sin(h) * p2) / sw
    pp = (math.sin(w + h) * p1 - math.sin(h) * p2) / sw
    return pm, pp


def rotation_from_reflections(axis: AxisByPlanes, theta: float, direction: ArrayLike | None = None) -> NDArray:
    """Product of the orthographic reflections in the bisector plane and ``p1``.

    Mirroring in ``p1`` and then in the plane at ``theta/2`` from it turns by
    ``theta`` right-handedly about ``n1 x n2``. When ``direction`` points the
    other way along the axis, the reverse product (the inverse) is returned so
    the result is right-handed about ``direction``.
    """
    half, _ = bisector_planes(axis, theta)
    R1 = orthographic_reflection(axis.p1)
    R2 = orthographic_reflection(half)
    if direction is not None and axis.direction @ _dir3(direction) < 0:
        return R1 @ R2
    return R2 @ R1


def eigvec_complex_pair(dir: ArrayLike) -> tuple[NDArray, NDArray]:
    """The two isotropic infinite points orthogonal to ``dir``.

    Each has the form ``(alpha + i beta, lam + i rho, 1, 0)`` with
    ``alpha = -a c / (a^2 + b^2)``, ``beta = +-b |d| / (a^2 + b^2)``,
    ``lam = -b c / (a^2 + b^2)`` and ``rho = -+a |d| / (a^2 + b^2)``. Coordinates
    are cycled so the smallest direction component plays ``c``.

    The first returned vector is the eigenvector for ``e^{+i theta}`` of a
    right-handed rotation about ``dir``; the second is its conjugate.
    """
    d = _dir3(dir)
    perm = _cycle_to_last(int(np.argmin(np.abs(d))))
    a, b, c = d[perm]
    q = a * a + b * b
    n = math.sqrt(q + c * c)
    v = np.array([complex(-a * c / q, b * n / q), complex(-b * c / q, -a * n / q), 1.0])
    v = _unpermute(v, perm)
    # v = u - i w pairs with e^{+i theta} exactly when (u, w, d) is right-handed.
    if np.cross(v.real, -v.imag) @ d < 0:
        v = v.conj()
    v = np.append(v, 0.0)
    return v, v.conj()


def isotropy_residuals(v: ArrayLike, dir: ArrayLike) -> tuple[float, float, float]:
    """(isotropy, infinity, orthogonality) residuals of an isotropic direction."""
    v = np.asarray(v)
    d = _dir3(dir)
    s = np.abs(v).max()
    v = v / s
    return float(abs(v[:3] @ v[:3] + v[3] * v[3])), float(abs(v[3])), float(abs(v[:3] @ d) / np.linalg.norm(d))


def rotation_eigen_reconstruct(spec: RotationSpec) -> NDArray:
    """``Re(V D V^-1)`` with ``V = [point, dir, v+, v-]`` and ``D = diag(1, 1, e^it, e^-it)``."""
    vp, vm = eigvec_complex_pair(spec.axis.unit)
    V = np.column_stack([spec.axis.point, spec.axis.dir, vp, vm]).astype(complex)
    if abs(np.linalg.det(V)) <= DEFAULT_TOL.abs:
        raise ProjectiveError("eigenvector matrix is singular")
    D = np.diag([1.0, 1.0, cmath.exp(1j * spec.theta), cmath.exp(-1j * spec.theta)])
    M = np.linalg.solve(V.T, (V @ D).T).T
    if np.abs(M.imag).max() > 1e-9 * np.abs(M.real).max():
        raise ProjectiveError("eigen reconstruction left a non-negligible imaginary part")
    return M.real


def rotation_rodrigues(spec: RotationSpec) -> NDArray:
    """Closed-form right-handed rotation ``C1 + (sin t A2 - (1 - cos t) O3) T4``."""
    if not isinstance(spec, RotationSpec):
        raise TypeError("rotation_rodrigues expects a RotationSpec")
    a, b, c = spec.axis.unit
    if abs(a * a + b * b + c * c - 1.0) > 2 * UNIT_TOL:
        raise ProjectiveError("axis direction must have unit length")
    x0, y0, z0 = spec.axis.origin
    t = spec.theta
    ct, st = math.cos(t), math.sin(t)
    C1 = np.diag([1.0, 1.0, 1.0, 2.0 - ct])
    A2 = np.array([[0.0, -c, b, 0.0], [c, 0.0, -a, 0.0], [-b, a, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]])
    n = np.array([a, b, c, 0.0])
    O3 = np.eye(4) - np.outer(n, n)
    T4 = np.eye(4)
    T4[:3, 3] = [-x0, -y0, -z0]
    M = C1 + (st * A2 - (1.0 - ct) * O3) @ T4
    # (2 - cos t) - (1 - cos t) is 1 in exact arithmetic; drop the rounding.
    M[3] = [0.0, 0.0, 0.0, 1.0]
    return M


METHODS = ("rodrigues", "reflections", "eigen")


def rotation_matrix(point: ArrayLike, dir: ArrayLike, theta: float, method: str = "rodrigues") -> NDArray:
    """Rotation by ``theta`` about the axis through ``point`` along ``dir`` (any length)."""
    spec = RotationSpec.of(point, dir, theta)
    if method == "rodrigues":
        return rotation_rodrigues(spec)
    if method == "reflections":
        return rotation_from_reflections(axis_to_plane_pair(spec.axis), spec.theta, spec.axis.unit)
    if method == "eigen":
        return rotation_eigen_reconstruct(spec)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
