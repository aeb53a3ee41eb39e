"""Elementary center/plane transformations built as rank-one updates of the identity.

Every constructor takes a center ``s`` (a homogeneous point) and a plane ``pi``
(homogeneous plane coefficients) and returns ``lambda*I + k * s pi^T``:

=====  ==========================  =============  ==============
row    name                        plane          center
=====  ==========================  =============  ==============
1-3    projection (singular)       ord/ord/inf    ord/inf/ord
4-6    scaling by ``rho``          ord/ord/inf    ord/inf/ord
7-9    involutory (``rho=-lam``)   ord/ord/inf    ord/inf/ord
10-12  elation (center on plane)   ord/ord/inf    ord/inf/inf
=====  ==========================  =============  ==============

:func:`classify_stereo` inverts the constructors: it finds the eigenvalue
``lam`` for which ``M - lam*I`` has rank one, factors that rank-one part into
``s`` and ``pi`` and reads the row off their finiteness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .eigen4 import char_poly, solve_quartic
from .projective_core import (
    ProjectiveError,
    TolLike,
    as_mat4,
    as_tol,
    as_vec4,
    canonical_plane,
    canonical_point,
    is_infinite_plane,
    is_infinite_point,
    proj_equal,
)

LABELS = {
    1: "CentralProjection",
    2: "ParallelProjection",
    3: "Direction",
    4: "SpaceHomology",
    5: "ElementaryScaling",
    6: "CentralDilation",
    7: "InvolutorySpaceHomology",
    8: "Reflection",
    9: "CentralSymmetry",
    10: "SpaceElation",
    11: "Shearing",
    12: "Translation",
}

NOT_STEREO = "not stereohomology"
IDENTITY = "Identity"


@dataclass(frozen=True, eq=False)
class StereoSpec:
    center: NDArray
    plane: NDArray
    lam: float = 1.0
    rho: Optional[float] = None
    mu: Optional[float] = None


@dataclass(frozen=True, eq=False)
class StereoClass:
    """Outcome of :func:`classify_stereo`.

    ``row`` is 1..12, or ``None`` for the identity class and for rejects.
    ``orthographic`` is only meaningful for rows 2, 5 and 8 (infinite center).
    """

    row: Optional[int]
    label: str
    spec: Optional[StereoSpec] = None
    orthographic: Optional[bool] = None
    residual: float = float("nan")
    note: str = ""

    @property
    def is_stereo(self) -> bool:
        return self.row is not None


def _pair(s: ArrayLike, pi: ArrayLike):
    s = as_vec4(np.asarray(s))
    pi = as_vec4(np.asarray(pi))
    if not np.any(s) or not np.any(pi):
        raise ProjectiveError("center and plane must be nonzero")
    return s, pi


def _off_plane(s: NDArray, pi: NDArray, tol) -> float:
    d = float(s @ pi)
    if abs(d) <= as_tol(tol).rel * np.linalg.norm(s) * np.linalg.norm(pi):
        raise ProjectiveError("center lies on the plane; this constructor needs s^T pi != 0")
    return d


def _nonzero(name: str, x: float):
    if x == 0 or not np.isfinite(x):
        raise ProjectiveError(f"{name} must be finite and nonzero, got {x}")


def make_projection(s: ArrayLike, pi: ArrayLike, lam: float = 1.0, tol: TolLike = None) -> NDArray:
    """Projection from center ``s`` onto plane ``pi``; rank 3, annihilates ``s``."""
    s, pi = _pair(s, pi)
    _nonzero("lambda", lam)
    d = _off_plane(s, pi, tol)
    return lam * np.eye(4) - lam * np.outer(s, pi) / d


def make_scaling(s: ArrayLike, pi: ArrayLike, rho: float, lam: float = 1.0, tol: TolLike = None) -> NDArray:
    """Fixes ``pi`` pointwise (eigenvalue ``lam``) and scales ``s`` by ``rho``."""
    s, pi = _pair(s, pi)
    _nonzero("lambda", lam)
    _nonzero("rho", rho)
    d = _off_plane(s, pi, tol)
    return lam * np.eye(4) + (rho - lam) * np.outer(s, pi) / d


def make_reflection(s: ArrayLike, pi: ArrayLike, lam: float = 1.0, tol: TolLike = None) -> NDArray:
    """Involutory scaling (``rho = -lam``); ``M @ M == lam**2 * I``."""
    s, pi = _pair(s, pi)
    _nonzero("lambda", lam)
    d = _off_plane(s, pi, tol)
    return lam * np.eye(4) - 2.0 * lam * np.outer(s, pi) / d


def orthographic_reflection(pi: ArrayLike, lam: float = 1.0) -> NDArray:
    """Mirror in an ordinary plane, center at the infinite point of its normal."""
    pi = as_vec4(np.asarray(pi))
    s = np.append(pi[:3], 0.0)
    if not np.any(s):
        raise ProjectiveError("the infinite plane has no orthographic reflection")
    return make_reflection(s, pi, lam)


def make_shear(s: ArrayLike, pi: ArrayLike, mu: float, lam: float = 1.0, tol: TolLike = None) -> NDArray:
    """Elation with center on the plane; ``(M - lam*I)**2 == 0``."""
    s, pi = _pair(s, pi)
    _nonzero("lambda", lam)
    ns, npi = np.linalg.norm(s), np.linalg.norm(pi)
    if abs(s @ pi) > as_tol(tol).rel * ns * npi:
        raise ProjectiveError("center must lie on the plane for an elation")
    return lam * np.eye(4) + mu * np.outer(s, pi) / (ns * npi)


def _row(kind: int, s_inf: bool, pi_inf: bool) -> Optional[int]:
    # kind: 0 projection, 1 scaling, 2 involutory, 3 elation
    base = 1 + 3 * kind
    if kind < 3:
        if pi_inf and s_inf:
            return None
        return base + (2 if pi_inf else 1 if s_inf else 0)
    if pi_inf and not s_inf:
        return None
    return base + (2 if pi_inf else 1 if s_inf else 0)


def _candidates(A: NDArray, singular: bool) -> list[float]:
    if singular:
        return [float(np.trace(A)) / 3.0]
    # Elations have trace/4 as their only eigenvalue. Otherwise raw quartic
    # roots suffice as seeds: the rank-one refinement repairs their error.
    out: list[float] = [float(np.trace(A)) / 4.0]
    for w in solve_quartic(char_poly(A)):
        if all(abs(w.real - c) > 1e-7 for c in out):
            out.append(float(w.real))
    return out


def _rank_one_at(A: NDArray, lam: float):
    """Refine ``lam`` so that ``A - lam*I`` is as close to rank one as possible."""
    I = np.eye(4)
    for _ in range(4):
        U, sv, Vt = np.linalg.svd(A - lam * I)
        # Two-sided projection kills the rank-one part to second order.
        Pu = I - np.outer(U[:, 0], U[:, 0])
        Pv = I - np.outer(Vt[0], Vt[0])
        P = Pu @ Pv
        lam = float(np.sum((Pu @ A @ Pv) * P) / np.sum(P * P))
    U, sv, Vt = np.linalg.svd(A - lam * I)
    return lam, U[:, 0], Vt[0], sv


def classify_stereo(M: ArrayLike, tol: TolLike = None) -> StereoClass:
    """Identify which table row (if any) produced ``M``, and recover its parameters."""
    M = as_mat4(M)
    tol = as_tol(tol)
    nrm = np.linalg.norm(M)
    if nrm == 0:
        raise ProjectiveError("zero matrix is not a projective transformation")
    A = M / nrm
    I = np.eye(4)
    lam0 = float(np.trace(A)) / 4.0
    if np.linalg.norm(A - lam0 * I) <= tol.rel:
        return StereoClass(None, IDENTITY, residual=float(np.linalg.norm(A - lam0 * I)),
                           note="scalar multiple of the identity")

    sv = np.linalg.svd(A, compute_uv=False)
    singular = sv[-1] <= tol.rel * sv[0]

    best = None
    for cand in _candidates(A, singular):
        lam, u, v, s_vals = _rank_one_at(A, cand)
        if abs(lam) <= tol.rel:
            continue
        r = s_vals[1]
        if best is None or r < best[0]:
            best = (r, lam, u, v, s_vals[0])
    if best is None or best[0] > tol.rel:
        res = float("nan") if best is None else float(best[0])
        return StereoClass(None, NOT_STEREO, residual=res,
                           note="M - lambda*I has rank above one for every real eigenvalue")

    r, lam, u, v, sigma = best
    s = canonical_point(u, tol)
    pi = canonical_plane(v, tol)
    s_inf = is_infinite_point(s, tol)
    pi_inf = is_infinite_plane(pi, tol)
    # Rank-one part as k * s pi^T in the canonical representatives.
    N = A - lam * I
    k = float(s @ N @ pi) / ((s @ s) * (pi @ pi))
    d = float(s @ pi)
    on_plane = abs(d) <= tol.rel * np.linalg.norm(s) * np.linalg.norm(pi)

    rho = mu = None
    ortho = None
    if on_plane:
        kind = 3
        mu = k * np.linalg.norm(s) * np.linalg.norm(pi) * nrm
    else:
        c = k * d
        if singular:
            kind = 0
        elif abs(c + 2.0 * lam) <= tol.rel * abs(lam):
            kind = 2
        else:
            kind = 1
            rho = (lam + c) * nrm
        if kind == 2:
            rho = -lam * nrm
    row = _row(kind, s_inf, pi_inf)
    if row is None:
        return StereoClass(None, NOT_STEREO, residual=float(r),
                           note="center/plane finiteness matches no table row")
    if row in (2, 5, 8):
        ortho = proj_equal(s, np.append(pi[:3], 0.0), tol)
    spec = StereoSpec(center=s, plane=pi, lam=lam * nrm, rho=rho, mu=mu)
    return StereoClass(row, LABELS[row], spec=spec, orthographic=ortho, residual=float(r))
