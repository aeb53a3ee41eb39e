"""Recognize a homogeneous 4x4 matrix as a rotation and recover its axis and angle.

A matrix is a rotation when, after dividing by its repeated real eigenvalue
``mu``, the eigenvalues are ``{1, 1, e^{it}, e^{-it}}``, the eigenvalue-1
eigenspace is a line holding exactly one infinite point (the axis direction),
and the eigenvectors for ``e^{+-it}`` are infinite, isotropic and orthogonal to
that direction. Only eigenvalue ratios are used, so any nonzero multiple of a
rotation is recognized too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .eigen4 import EigenSystem, eigen_decompose
from .projective_core import ProjectiveError, TolLike, as_mat4, as_tol
from .rotation_build import RotationSpec, rotation_rodrigues

ANGLE_RESOLUTION = 1e-6
# Structural checks run on eigenvectors, a few orders looser than tol.rel.
CHECK_FACTOR = 100.0


@dataclass(frozen=True, eq=False)
class RotationReport:
    is_rotation: bool
    direction: Optional[NDArray] = None
    fixed_point: Optional[NDArray] = None
    theta: Optional[float] = None
    eig_residual: float = float("nan")
    scale: Optional[float] = None
    reason: str = ""
    identity: bool = False
    eigensystem: Optional[EigenSystem] = None

    def as_dict(self) -> dict:
        def arr(v):
            return None if v is None else [float(x) for x in v]

        return {
            "is_rotation": self.is_rotation,
            "direction": arr(self.direction),
            "fixed_point": arr(self.fixed_point),
            "theta": self.theta,
            "eig_residual": self.eig_residual,
            "scale": self.scale,
            "identity": self.identity,
            "reason": self.reason,
        }


class RoundTripError(AssertionError):
    pass


def _reject(reason: str, es: EigenSystem | None = None, **kw) -> RotationReport:
    res = es.max_residual if es is not None else float("nan")
    return RotationReport(False, reason=reason, eig_residual=res, eigensystem=es, **kw)


def _real_basis(B: NDArray, check: float) -> NDArray | None:
    if np.abs(B.imag).max(initial=0.0) > check:
        return None
    return B.real


def _axis_from_space(B: NDArray, check: float):
    """Split a real 2-dim eigenspace into (unit direction, ordinary point) or None."""
    B = B / np.linalg.norm(B, axis=0)
    w = B[3]
    if np.abs(w).max() <= check:
        return None
    # The one combination with zero fourth coordinate.
    d = (w[1] * B[:, 0] - w[0] * B[:, 1])[:3]
    nd = np.linalg.norm(d)
    if nd <= check:
        return None
    d = d / nd
    k = int(np.argmax(np.abs(w)))
    x = B[:3, k] / w[k]
    x = x - (x @ d) * d
    return d, np.append(x, 1.0)


def _lex_larger(d: NDArray) -> NDArray:
    for x in np.round(d, 12):
        if x != 0:
            return d if x > 0 else -d
    return d


def classify_rotation(M: ArrayLike, tol: TolLike = None) -> RotationReport:
    """Decide whether ``M`` is a (scaled) rotation and recover axis, fixed point and angle.

    ``theta`` is reported in ``(0, pi]`` and the direction is oriented so the
    turn is right-handed about it. For a half turn, where both orientations
    fit, the lexicographically larger direction is chosen.
    """
    M = as_mat4(M)
    tol = as_tol(tol)
    if not np.any(M):
        raise ProjectiveError("zero matrix is not a projective transformation")
    check = CHECK_FACTOR * tol.rel
    es = eigen_decompose(M, tol)
    distinct = es.distinct()

    if len(distinct) == 1 and distinct[0][2].shape[1] == 4:
        mu = distinct[0][0]
        if abs(mu.imag) <= check * abs(mu):
            return _reject("identity: every point is fixed", es, identity=True, scale=float(mu.real))
    if es.defect_flag:
        return _reject("defective eigensystem", es)

    # Candidate mu: real, double, with a 2-dim eigenspace that is an axis line.
    best = None
    for idx, (value, alg, B) in enumerate(distinct):
        if alg != 2 or B.shape[1] != 2 or abs(value.imag) > check * abs(value):
            continue
        Br = _real_basis(B, check)
        if Br is None:
            continue
        axis = _axis_from_space(Br, check)
        if axis is not None:
            best = (idx, value.real, axis)
            break
    if best is None:
        return _reject("no double real eigenvalue whose eigenspace is a line with one infinite point", es)
    idx, mu, (d, x) = best
    A = M / mu
    others = [(v / mu, a, B) for k, (v, a, B) in enumerate(distinct) if k != idx]
    ratios = [r for r, a, _ in others for _ in range(a)]
    if len(ratios) != 2:
        return _reject("eigenvalue ratios are not {1, 1, e^it, e^-it}", es)
    if max(abs(abs(r) - 1.0) for r in ratios) > check or abs(ratios[0] - ratios[1].conjugate()) > check:
        return _reject("remaining eigenvalue ratios are not a conjugate unit pair", es)

    residual = max(float(np.linalg.norm(A @ np.append(d, 0.0) - np.append(d, 0.0))),
                   float(np.linalg.norm(A @ x - x) / np.linalg.norm(x)))
    r = ratios[0] if ratios[0].imag >= 0 else ratios[1]
    t0 = abs(math.atan2(r.imag, r.real))

    if t0 < ANGLE_RESOLUTION:
        return _reject("identity: rotation angle below resolution", es, identity=True, scale=float(mu))

    if len(others) == 1:
        # Half turn: a real 2-dim eigenspace for -1 made of directions orthogonal to the axis.
        value, alg, B = others[0]
        if B.shape[1] != 2 or abs(value + 1.0) > check:
            return _reject("half-turn eigenspace is not 2-dimensional", es)
        Br = _real_basis(B, check)
        if Br is None or np.abs(Br[3]).max() > check or np.abs(Br[:3].T @ d).max() > check:
            return _reject("half-turn eigenspace is not orthogonal to the axis at infinity", es)
        residual = max(residual, float(np.linalg.norm(A @ Br + Br)))
        return RotationReport(True, direction=np.append(_lex_larger(d), 0.0), fixed_point=x,
                              theta=math.pi, eig_residual=max(residual, es.max_residual),
                              scale=float(mu), reason="half turn", eigensystem=es)

    v = next(B[:, 0] for val, a, B in others if val == r)
    v = v / np.abs(v).max()
    iso = abs(v[:3] @ v[:3] + v[3] * v[3])
    if abs(v[3]) > check or iso > check or abs(v[:3] @ d) > check:
        return _reject("complex eigenvectors are not isotropic directions orthogonal to the axis", es)
    u, w = v.real[:3], -v.imag[:3]
    theta = t0
    if np.cross(u, w) @ d < 0:
        d = -d
    residual = max(residual, float(np.linalg.norm(A @ v - r * v) / np.linalg.norm(v)))
    return RotationReport(True, direction=np.append(d, 0.0), fixed_point=x, theta=theta,
                          eig_residual=max(residual, es.max_residual), scale=float(mu),
                          eigensystem=es)


def round_trip(spec: RotationSpec, tol: float = 1e-8) -> RotationReport:
    """Build with the closed form, classify, and assert the spec is recovered."""
    rep = classify_rotation(rotation_rodrigues(spec))
    if spec.theta == 0:
        if not rep.identity:
            raise RoundTripError("zero-angle spec did not classify as identity")
        return rep
    if abs(spec.theta) < ANGLE_RESOLUTION:
        return rep
    if not rep.is_rotation:
        raise RoundTripError(f"spec did not classify as a rotation: {rep.reason}")
    d = spec.axis.unit
    sign = 1.0 if spec.theta > 0 else -1.0
    got = rep.direction[:3]
    # Within the angle resolution of a half turn either orientation is valid.
    half = math.pi - abs(spec.theta) < ANGLE_RESOLUTION
    if half:
        ok_dir = min(np.linalg.norm(got - d), np.linalg.norm(got + d)) <= tol
    else:
        ok_dir = np.linalg.norm(got - sign * d) <= tol
    if not ok_dir:
        raise RoundTripError(f"direction {got} does not match spec direction {d}")
    if abs(rep.theta - abs(spec.theta)) > (ANGLE_RESOLUTION if half else tol):
        raise RoundTripError(f"angle {rep.theta} does not match spec angle {spec.theta}")
    if not spec.axis.contains(rep.fixed_point, tol):
        raise RoundTripError("fixed point is off the spec axis")
    return rep
