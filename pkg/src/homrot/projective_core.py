"""Homogeneous points, hyperplanes and scale-identified 4x4 matrices.

Everything here uses the column-vector convention: a matrix ``M`` acts on a
point ``p`` as ``M @ p``, and ``compose(A, B)`` applies ``B`` first.
Matrices are plain ``numpy`` arrays of shape ``(4, 4)``; the functions in this
module treat any nonzero multiple of a matrix as the same transformation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray


class ProjectiveError(ValueError):
    """Raised for invalid projective arguments (zero vectors, singular maps...)."""


class IndeterminatePointError(ProjectiveError):
    """A point was mapped onto the zero vector by a singular matrix."""


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise ValueError(f"tolerances must be strictly positive, got {self}")


DEFAULT_TOL = Tolerance()

TolLike = Union[Tolerance, float, None]


def as_tol(tol: TolLike) -> Tolerance:
    """Coerce ``None`` / a float / a :class:`Tolerance` into a :class:`Tolerance`."""
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(rel=float(tol), abs=min(float(tol), DEFAULT_TOL.abs))


def _frozen(a: NDArray) -> NDArray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_vec4(v: ArrayLike, dtype=float) -> NDArray:
    a = np.asarray(v, dtype=dtype)
    if a.shape != (4,):
        raise ProjectiveError(f"expected a homogeneous 4-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ProjectiveError("homogeneous vector has non-finite entries")
    return a


def as_mat4(m: ArrayLike, dtype=float) -> NDArray:
    a = np.asarray(m, dtype=dtype)
    if a.shape != (4, 4):
        raise ProjectiveError(f"expected a 4x4 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ProjectiveError("matrix has non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class HomPoint:
    """A projective point ``(x1, x2, x3, x4)``; ``x4 == 0`` encodes a direction."""

    coords: NDArray

    def __post_init__(self):
        c = as_vec4(self.coords)
        if not np.any(c):
            raise ProjectiveError("a homogeneous point cannot be the zero vector")
        object.__setattr__(self, "coords", _frozen(c))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __repr__(self):
        return f"HomPoint({np.array2string(self.coords, precision=6)})"

    @classmethod
    def ordinary(cls, x: float, y: float, z: float) -> "HomPoint":
        return cls(np.array([x, y, z, 1.0]))

    @classmethod
    def direction(cls, a: float, b: float, c: float) -> "HomPoint":
        return cls(np.array([a, b, c, 0.0]))

    def is_infinite(self, tol: TolLike = None) -> bool:
        return is_infinite_point(self.coords, tol)

    def is_ordinary(self, tol: TolLike = None) -> bool:
        return not self.is_infinite(tol)

    def canonical(self, tol: TolLike = None) -> "HomPoint":
        return HomPoint(canonical_point(self.coords, tol))

    def euclidean(self) -> NDArray:
        """Cartesian ``(x, y, z)``; only defined for ordinary points."""
        if self.coords[3] == 0:
            raise ProjectiveError("point at infinity has no Euclidean coordinates")
        return self.coords[:3] / self.coords[3]


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Plane ``a*x + b*y + c*z + d*w = 0`` stored as coefficients ``(a, b, c, d)``."""

    coeffs: NDArray

    def __post_init__(self):
        c = as_vec4(self.coeffs)
        if not np.any(c):
            raise ProjectiveError("a hyperplane cannot have all-zero coefficients")
        object.__setattr__(self, "coeffs", _frozen(c))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coeffs, dtype=dtype)

    def __repr__(self):
        return f"Hyperplane({np.array2string(self.coeffs, precision=6)})"

    @property
    def normal(self) -> NDArray:
        return self.coeffs[:3]

    def is_infinite(self, tol: TolLike = None) -> bool:
        return is_infinite_plane(self.coeffs, tol)

    def is_ordinary(self, tol: TolLike = None) -> bool:
        return not self.is_infinite(tol)

    def unit(self) -> "Hyperplane":
        """Scale so the normal has unit length (ordinary planes only)."""
        return Hyperplane(unit_plane(self.coeffs))

    def canonical(self, tol: TolLike = None) -> "Hyperplane":
        return Hyperplane(canonical_plane(self.coeffs, tol))

    def contains(self, p: ArrayLike, tol: TolLike = None) -> bool:
        p = as_vec4(p)
        tol = as_tol(tol)
        return abs(self.coeffs @ p) <= tol.rel * np.linalg.norm(self.coeffs) * np.linalg.norm(p)


def is_infinite_point(p: ArrayLike, tol: TolLike = None) -> bool:
    p = as_vec4(p)
    tol = as_tol(tol)
    return bool(abs(p[3]) <= tol.rel * np.max(np.abs(p)))


def is_infinite_plane(pi: ArrayLike, tol: TolLike = None) -> bool:
    pi = as_vec4(pi)
    tol = as_tol(tol)
    return bool(np.max(np.abs(pi[:3])) <= tol.rel * np.max(np.abs(pi)))


def _sign_fix(v: NDArray) -> NDArray:
    k = int(np.argmax(np.abs(v)))
    # adding 0.0 turns negated zeros into plain zeros
    return (-v if v[k] < 0 else v) + 0.0


def canonical_point(p: ArrayLike, tol: TolLike = None) -> NDArray:
    """Ordinary points get ``w = 1``; directions get unit norm, largest entry positive."""
    p = as_vec4(p)
    if not np.any(p):
        raise ProjectiveError("zero vector is not a projective point")
    if is_infinite_point(p, tol):
        d = p.copy()
        d[3] = 0.0
        return _sign_fix(d / np.linalg.norm(d))
    return p / p[3]


def unit_plane(pi: ArrayLike) -> NDArray:
    pi = as_vec4(pi)
    n = np.linalg.norm(pi[:3])
    if n == 0:
        raise ProjectiveError("the infinite plane has no unit normal")
    return pi / n


def canonical_plane(pi: ArrayLike, tol: TolLike = None) -> NDArray:
    """Unit normal with its largest-magnitude component positive; infinite plane -> (0,0,0,1)."""
    pi = as_vec4(pi)
    if not np.any(pi):
        raise ProjectiveError("zero vector is not a hyperplane")
    if is_infinite_plane(pi, tol):
        return np.array([0.0, 0.0, 0.0, 1.0])
    u = unit_plane(pi)
    k = int(np.argmax(np.abs(u[:3])))
    return (-u if u[k] < 0 else u) + 0.0


def apply(M: ArrayLike, p: ArrayLike) -> NDArray:
    """Raw image ``M @ p`` (no normalisation)."""
    M = as_mat4(M)
    p = as_vec4(np.asarray(p), dtype=np.result_type(np.asarray(p), float))
    if not np.any(M):
        raise ProjectiveError("zero matrix is not a projective transformation")
    y = M @ p
    if not np.any(np.abs(y) > DEFAULT_TOL.abs * np.linalg.norm(M) * np.linalg.norm(p)):
        raise IndeterminatePointError("point is projected to the indeterminate (zero) point")
    return y


def _proj_equal_flat(u: NDArray, v: NDArray, rel: float) -> bool:
    nu = np.linalg.norm(u)
    if nu == 0 or not np.any(v):
        raise ProjectiveError("projective comparison of a zero vector")
    k = int(np.argmax(np.abs(v)))
    s = u[k] / v[k]
    if s == 0:
        return False
    return bool(np.linalg.norm(u - s * v) <= rel * nu)


def proj_equal(u: ArrayLike, v: ArrayLike, tol: TolLike = None) -> bool:
    """True iff ``u`` is a nonzero multiple of ``v`` (complex vectors allowed).

    The scale is taken from the largest-magnitude component of ``v``, so it is
    never a ratio of near-zero entries.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ProjectiveError(f"shape mismatch {u.shape} vs {v.shape}")
    return _proj_equal_flat(u.ravel(), v.ravel(), as_tol(tol).rel)


def mat_proj_equal(A: ArrayLike, B: ArrayLike, tol: TolLike = None) -> bool:
    return proj_equal(as_mat4(A), as_mat4(B), tol)


def compose(*matrices: ArrayLike) -> NDArray:
    """Matrix product ``A @ B @ ...``; the right-most factor acts first."""
    if not matrices:
        return np.eye(4)
    out = as_mat4(matrices[0])
    for m in matrices[1:]:
        out = out @ as_mat4(m)
    return out


def inverse(T: ArrayLike, tol: TolLike = None) -> NDArray:
    T = as_mat4(T)
    tol = as_tol(tol)
    scale = np.max(np.abs(T))
    if scale == 0 or abs(np.linalg.det(T / scale)) <= tol.abs:
        raise ProjectiveError("matrix is singular")
    return np.linalg.inv(T)


def conjugate(A: ArrayLike, T: ArrayLike, tol: TolLike = None) -> NDArray:
    """Express ``A`` in the frame reached by ``T``: returns ``T @ A @ inv(T)``."""
    T = as_mat4(T)
    return T @ as_mat4(A) @ inverse(T, tol)


def is_affine(M: ArrayLike, tol: TolLike = None) -> bool:
    M = as_mat4(M)
    tol = as_tol(tol)
    scale = np.max(np.abs(M))
    if scale == 0:
        return False
    return bool(np.max(np.abs(M[3, :3])) <= tol.rel * scale and abs(M[3, 3]) > tol.rel * scale)


def affine_normal(M: ArrayLike, tol: TolLike = None) -> NDArray:
    """Divide by the bottom-right entry of an affine-normalizable matrix."""
    M = as_mat4(M)
    if not is_affine(M, tol):
        raise ProjectiveError("matrix is not affine-normalizable")
    return M / M[3, 3]


def canonical_scale(M: ArrayLike, tol: TolLike = None) -> NDArray:
    """Deterministic representative of the projective class of ``M``.

    Affine matrices are scaled to ``w = 1``; anything else gets unit Frobenius
    norm with its largest-magnitude entry positive.
    """
    M = as_mat4(M)
    if not np.any(M):
        raise ProjectiveError("zero matrix is not a projective transformation")
    if is_affine(M, tol):
        return M / M[3, 3]
    N = M / np.linalg.norm(M)
    k = int(np.argmax(np.abs(N)))
    return -N if N.flat[k] < 0 else N


def translation(t: ArrayLike) -> NDArray:
    t = np.asarray(t, dtype=float)
    if t.shape == (4,):
        t = t[:3] / t[3]
    M = np.eye(4)
    M[:3, 3] = t
    return M


_AXES = {"x": (1, 2), "y": (2, 0), "z": (0, 1)}


def givens(theta: float, axis: str = "z") -> NDArray:
    """Right-handed rotation about a coordinate axis, column convention."""
    i, j = _AXES[axis]
    c, s = np.cos(theta), np.sin(theta)
    M = np.eye(4)
    M[i, i] = c
    M[i, j] = -s
    M[j, i] = s
    M[j, j] = c
    return M


def embed3(B: ArrayLike) -> NDArray:
    """Embed a 3x3 linear map as a homogeneous matrix."""
    M = np.eye(4)
    M[:3, :3] = np.asarray(B, dtype=float)
    return M
