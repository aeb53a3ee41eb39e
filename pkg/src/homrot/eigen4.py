"""Eigen-decomposition of real 4x4 matrices via the characteristic quartic.

The route is: Faddeev-LeVerrier characteristic polynomial -> Ferrari roots ->
Newton polish -> multiplicity detection -> refinement on the matrix ->
eigenvectors as null spaces of ``M - lambda*I`` (complex Gaussian elimination
with full pivoting).

Repeated roots of a polynomial are ill-conditioned (an m-fold root computed
from rounded coefficients scatters by roughly ``eps**(1/m)``), so clusters are
not detected by a fixed distance.  A group of ``m`` computed roots is merged
when the first ``m`` Taylor coefficients of the quartic at the group mean all
vanish to rounding level; the merged value is then polished on the
``(m-1)``-th derivative, where it is a simple root.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .projective_core import ProjectiveError, TolLike, as_mat4, as_tol

# Taylor-coefficient vanishing threshold, relative to coefficient magnitudes.
MULTIPLICITY_ETA = 1e-12
# Pivot threshold (relative to the unit-Frobenius matrix) for null-space rank.
RANK_TOL = 1e-7
# Residual above which the eigenproblem is flagged ill-conditioned.
ILL_CONDITIONED = 1e-6


def char_poly(M: ArrayLike) -> NDArray:
    """Monic characteristic polynomial ``[1, c3, c2, c1, c0]`` (highest power first)."""
    A = as_mat4(M)
    coeffs = [1.0]
    Mk = np.zeros((4, 4))
    c = 1.0
    for k in range(1, 5):
        Mk = A @ Mk + c * np.eye(4)
        c = -np.trace(A @ Mk) / k
        coeffs.append(c)
    return np.array(coeffs)


def _polish(coeffs, x, steps=3):
    """Newton on ``coeffs``; a step is kept only if it reduces ``|p|``."""
    d = np.polyder(coeffs)
    px = np.polyval(coeffs, x)
    for _ in range(steps):
        dx = np.polyval(d, x)
        if dx == 0 or px == 0:
            break
        xn = x - px / dx
        pn = np.polyval(coeffs, xn)
        if abs(pn) >= abs(px):
            break
        x, px = xn, pn
    return x


def _cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3)


def _cubic_roots(b: complex, c: complex, d: complex) -> list[complex]:
    """Roots of ``m^3 + b m^2 + c m + d`` by Cardano in complex arithmetic."""
    P = c - b * b / 3
    Q = 2 * b ** 3 / 27 - b * c / 3 + d
    sq = cmath.sqrt((Q / 2) ** 2 + (P / 3) ** 3)
    w = -Q / 2 + sq if abs(-Q / 2 + sq) >= abs(-Q / 2 - sq) else -Q / 2 - sq
    u = _cbrt(w)
    omega = complex(-0.5, np.sqrt(3) / 2)
    if u == 0:
        roots = [0j, 0j, 0j]
    else:
        roots = [u * omega ** k - P / (3 * u * omega ** k) for k in range(3)]
    cubic = [1, b, c, d]
    return [_polish(cubic, t - b / 3, 2) for t in roots]


def _quadratic_roots(B: complex, C: complex) -> list[complex]:
    """Roots of ``y^2 + B y + C`` without cancellation."""
    disc = cmath.sqrt(B * B - 4 * C)
    # pick the sign that adds magnitudes
    if (B.conjugate() * disc).real < 0:
        disc = -disc
    y1 = -(B + disc) / 2
    if y1 == 0:
        return [0j, 0j]
    return [y1, C / y1]


def _enforce_conjugates(roots: list[complex], scale: float) -> list[complex]:
    roots = list(roots)
    out = []
    while roots:
        k = max(range(len(roots)), key=lambda i: abs(roots[i].imag))
        r = roots.pop(k)
        if abs(r.imag) <= 1e-14 * scale:
            out.append(complex(r.real, 0.0))
            out.extend(complex(q.real, 0.0) for q in roots)
            break
        j = min(range(len(roots)), key=lambda i: abs(roots[i] - r.conjugate()), default=None)
        if j is not None and abs(roots[j] - r.conjugate()) < abs(r.imag):
            q = roots.pop(j)
            avg = (r + q.conjugate()) / 2
            out.extend([avg, avg.conjugate()])
        else:
            out.append(complex(r.real, 0.0))
    return out


def solve_quartic(coeffs: ArrayLike) -> NDArray:
    """All four complex roots of a real quartic (Ferrari via the resolvent cubic)."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (5,) or c[0] == 0:
        raise ValueError("expected 5 coefficients with nonzero leading term")
    a3, a2, a1, a0 = c[1:] / c[0]
    p = a2 - 3 * a3 ** 2 / 8
    q = a1 - a3 * a2 / 2 + a3 ** 3 / 8
    r = a0 - a3 * a1 / 4 + a3 ** 2 * a2 / 16 - 3 * a3 ** 4 / 256
    scale = max(abs(p), abs(q) ** (2 / 3), abs(r) ** 0.5, 1e-300)

    # (y^2 + m)^2 = (2m - p) y^2 - q y + (m^2 - r); pick m so the right side is a square
    ms = _cubic_roots(-p / 2, -r, (4 * p * r - q * q) / 8)
    m = max(ms, key=lambda m: abs(2 * m - p))
    s2 = 2 * m - p
    if abs(s2) <= 1e-30 * scale:
        ys = []
        for z in _quadratic_roots(complex(p), complex(r)):
            w = cmath.sqrt(z)
            ys.extend([w, -w])
    else:
        s = cmath.sqrt(s2)
        ys = _quadratic_roots(-s, m + q / (2 * s)) + _quadratic_roots(s, m - q / (2 * s))

    monic = np.concatenate([[1.0], c[1:] / c[0]])
    roots = [_polish(monic, y - a3 / 4, 3) for y in ys]
    rscale = max(1.0, max(abs(x) for x in roots))
    return np.array(_enforce_conjugates(roots, rscale), dtype=complex)


def _taylor(coeffs: NDArray, z: complex, j: int) -> tuple[complex, float]:
    """j-th Taylor coefficient of the quartic at ``z`` and its rounding bound."""
    deg = len(coeffs) - 1
    val = 0j
    bound = 0.0
    for i, a in enumerate(coeffs):
        k = deg - i
        if k < j:
            continue
        w = comb(k, j) * abs(z) ** (k - j)
        val += a * comb(k, j) * z ** (k - j)
        bound += (abs(a) + 1.0) * w
    return val, bound


def _is_multiple_root(coeffs: NDArray, z: complex, m: int, eta: float) -> bool:
    for j in range(m):
        val, bound = _taylor(coeffs, z, j)
        if abs(val) > eta * bound:
            return False
    return True


def cluster_roots(roots: ArrayLike, coeffs: ArrayLike, eta: float = MULTIPLICITY_ETA):
    """Group roots into ``(value, multiplicity)`` clusters, largest groups first.

    A candidate group's mean is polished on the ``(m-1)``-th derivative; the
    group is accepted when the quartic's Taylor coefficients of order ``< m``
    vanish there, and its members are the ``m`` roots nearest the polished
    value.  A value already claimed by an accepted cluster is not reused.
    """
    roots = [complex(x) for x in roots]
    coeffs = np.asarray(coeffs, dtype=float)
    # Work on p(s*y)/s**4 so the roots are O(1) and eta is a relative bound.
    s = max(abs(x) for x in roots)
    if s > 0:
        roots = [x / s for x in roots]
        coeffs = coeffs / s ** np.arange(len(coeffs))
    else:
        s = 1.0
    scale = 1.0
    remaining = list(range(len(roots)))
    clusters: list[tuple[complex, int]] = []
    for m in (4, 3, 2):
        deriv = np.polyder(coeffs, m - 1)
        progress = True
        while progress and len(remaining) >= m:
            progress = False
            for sub in itertools.combinations(remaining, m):
                z = _polish(deriv, sum(roots[i] for i in sub) / m, 8)
                if any(abs(z - w) <= 1e-6 * scale for w, _ in clusters):
                    continue
                # a real quartic cannot carry an unpaired complex root of multiplicity > 2
                if m > 2 and abs(z.imag) > 1e-6 * scale:
                    continue
                if not _is_multiple_root(coeffs, z, m, eta):
                    continue
                if abs(z.imag) <= 1e-14 * scale:
                    z = complex(z.real, 0.0)
                members = sorted(remaining, key=lambda i: abs(roots[i] - z))[:m]
                clusters.append((z, m))
                remaining = [i for i in remaining if i not in members]
                progress = True
                break
    clusters.extend((roots[i], 1) for i in remaining)
    return [(z * s, m) for z, m in clusters]


def _eliminate(A: NDArray, rank_tol: float, force_rank: int | None, scale: float | None):
    """Full-pivot elimination; returns (U, column order, rank)."""
    U = np.array(A, dtype=complex)
    n = U.shape[0]
    cols = list(range(n))
    if scale is None:
        scale = max(np.max(np.abs(U)), 1e-300)
    r = 0
    for k in range(n):
        if force_rank is not None and k >= force_rank:
            break
        sub = np.abs(U[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        piv = sub[i, j]
        if piv == 0 or (force_rank is None and piv <= rank_tol * scale):
            break
        i += k
        j += k
        U[[k, i]] = U[[i, k]]
        U[:, [k, j]] = U[:, [j, k]]
        cols[k], cols[j] = cols[j], cols[k]
        for row in range(k + 1, n):
            f = U[row, k] / U[k, k]
            U[row, k:] -= f * U[k, k:]
            U[row, k] = 0
        r += 1
    return U, cols, r


def null_space(A: ArrayLike, rank_tol: float = RANK_TOL, force_rank: int | None = None,
               scale: float | None = None) -> NDArray:
    """Basis (columns) of the numerical null space of a square matrix.

    Pivots at or below ``rank_tol * scale`` count as zero (``scale`` defaults
    to the largest entry of ``A``).  With ``force_rank`` the elimination takes
    exactly that many pivots whatever their size.
    """
    U, cols, r = _eliminate(A, rank_tol, force_rank, scale)
    n = U.shape[0]
    basis = []
    for f in range(r, n):
        x = np.zeros(n, dtype=complex)
        x[f] = 1.0
        for i in reversed(range(r)):
            x[i] = -(U[i, i + 1:] @ x[i + 1:]) / U[i, i]
        v = np.zeros(n, dtype=complex)
        v[cols] = x
        basis.append(v)
    if not basis:
        return np.zeros((n, 0), dtype=complex)
    return np.stack(basis, axis=1)


def _solve(B: NDArray, b: NDArray, floor: float = 1e-15) -> NDArray:
    """Solve ``B x = b`` by full pivoting; tiny pivots are nudged (inverse iteration use)."""
    n = B.shape[0]
    Ab = np.concatenate([np.array(B, dtype=complex), np.array(b, dtype=complex).reshape(n, -1)], axis=1)
    cols = list(range(n))
    for k in range(n):
        sub = np.abs(Ab[k:, k:n])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        i += k
        j += k
        Ab[[k, i]] = Ab[[i, k]]
        Ab[:, [k, j]] = Ab[:, [j, k]]
        cols[k], cols[j] = cols[j], cols[k]
        if abs(Ab[k, k]) < floor:
            Ab[k, k] = floor if Ab[k, k] == 0 else floor * Ab[k, k] / abs(Ab[k, k])
        for row in range(k + 1, n):
            f = Ab[row, k] / Ab[k, k]
            Ab[row, k:] -= f * Ab[k, k:]
    X = np.zeros((n, Ab.shape[1] - n), dtype=complex)
    for i in reversed(range(n)):
        X[i] = (Ab[i, n:] - Ab[i, i + 1:n] @ X[i + 1:]) / Ab[i, i]
    out = np.zeros_like(X)
    out[cols] = X
    return out


def _inverse_subspace(A: NDArray, z: complex, m: int, iters: int = 8) -> tuple[complex, NDArray]:
    """Inverse subspace iteration at shift ``z``; returns (Ritz value, orthonormal basis)."""
    V = null_space(A - z * np.eye(4), force_rank=4 - m)
    if V.shape[1] != m:
        return z, V
    V, _ = np.linalg.qr(V)
    I = np.eye(4)
    for _ in range(iters):
        if np.linalg.norm(A @ V - z * V) <= 1e-15:
            break
        W = _solve(A - z * I, V)
        if not np.all(np.isfinite(W)):
            break
        V, _ = np.linalg.qr(W)
        z_new = np.trace(np.linalg.pinv(V) @ A @ V) / m
        if not np.isfinite(z_new):
            break
        z = complex(z_new)
    return z, V


def _refine(A: NDArray, z: complex, m: int, others: list[complex]) -> complex:
    z0 = z
    z, _ = _inverse_subspace(A, z, m)
    gap = min((abs(z0 - o) for o in others), default=np.inf)
    if abs(z - z0) > 0.5 * gap:
        return z0
    return z


def _small_eigvals(Y: NDArray) -> list[complex]:
    """Eigenvalues of a 1x1, 2x2 or 3x3 complex block."""
    k = Y.shape[0]
    if k == 1:
        return [complex(Y[0, 0])]
    if k == 2:
        h = (Y[0, 0] + Y[1, 1]) / 2
        d = cmath.sqrt(((Y[0, 0] - Y[1, 1]) / 2) ** 2 + Y[0, 1] * Y[1, 0])
        return [complex(h + d), complex(h - d)]
    tr = np.trace(Y)
    c1 = (tr * tr - np.trace(Y @ Y)) / 2
    cubic = [1, -tr, c1, -np.linalg.det(Y)]
    return [complex(_polish(cubic, w, 3)) for w in _cubic_roots(-tr, c1, -np.linalg.det(Y))]


def _group(values: list[complex], scale: float) -> list[tuple[complex, int]]:
    groups: list[list[complex]] = []
    for w in values:
        for g in groups:
            if abs(g[0] - w) <= 1e-6 * scale:
                g.append(w)
                break
        else:
            groups.append([w])
    return [(sum(g) / len(g), len(g)) for g in groups]


def _deflate(A: NDArray, z: complex, g: int, scale: float):
    """Split off a g-fold semisimple value ``z`` and recompute the other eigenvalues.

    The g-dimensional eigenspace is refined on the matrix and the remaining
    eigenvalues are read off the quotient block, which is far better
    conditioned than quartic roots clustered around a multiple root.  Returns
    ``None`` when the quotient still has ``z`` as an eigenvalue (a genuine
    defect or an undetected higher multiplicity).
    """
    zr, V = _inverse_subspace(A, z, g)
    if V.shape[1] != g or abs(zr - z) > 1e-3 * scale:
        return None
    if np.linalg.norm(A @ V - zr * V) > 1e-12:
        return None
    Q, _ = np.linalg.qr(V, mode="complete")
    Y = (Q.conj().T @ A @ Q)[g:, g:]
    rest = _small_eigvals(Y)
    if any(abs(w - zr) <= 1e-6 * scale for w in rest):
        return None
    if z.imag == 0:
        zr = complex(zr.real, 0.0)
    return [(zr, g)] + _group(rest, scale)


def _fix_phase(v: NDArray) -> NDArray:
    v = v / np.linalg.norm(v)
    big = np.abs(v) > 1e-10 * np.max(np.abs(v))
    k = int(np.argmax(big))
    return v * (np.conj(v[k]) / abs(v[k]))


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: complex
    vector: NDArray
    algebraic: int = 1
    geometric: int = 1

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Four eigenpairs of a matrix plus conditioning diagnostics.

    Pairs sharing an eigenvalue carry identical ``value`` objects; for a
    defective value the vectors repeat the available eigenvectors.
    """

    pairs: tuple[EigenPair, ...]
    defect_flag: bool
    ill_conditioned: bool
    max_residual: float

    @property
    def values(self) -> NDArray:
        return np.array([p.value for p in self.pairs])

    @property
    def vectors(self) -> NDArray:
        return np.stack([p.vector for p in self.pairs], axis=1)

    def distinct(self) -> list[tuple[complex, int, NDArray]]:
        """``(value, algebraic multiplicity, eigenspace basis)`` per distinct eigenvalue."""
        out: list[tuple[complex, int, NDArray]] = []
        seen: list[complex] = []
        for p in self.pairs:
            if p.value in seen:
                continue
            seen.append(p.value)
            vecs = [q.vector for q in self.pairs if q.value == p.value][: max(p.geometric, 0)]
            basis = np.stack(vecs, axis=1) if vecs else np.zeros((4, 0), dtype=complex)
            out.append((p.value, p.algebraic, basis))
        return out


def _rescue_cluster(A, roots, scale):
    """Look for a semisimple multiple eigenvalue hidden in a tight root group.

    Closed-form roots of a near four-fold cluster scatter by about eps**(1/4),
    which defeats the derivative test; the group centroid is far more accurate.
    """
    roots = list(roots)
    for i, r in enumerate(roots):
        group = [w for w in roots if abs(w - r) <= 1e-3 * scale]
        if len(group) < 3:
            continue
        c = complex(np.mean(group).real, 0.0)
        for g in range(len(group) - 1, 1, -1):
            split = _deflate(A, c, g, scale)
            if split is not None and sum(k for _, k in split) == 4:
                return split
    return None


def eigen_decompose(M: ArrayLike, tol: TolLike = None) -> EigenSystem:
    """Full eigensystem of a real 4x4 matrix, sorted by descending |lambda|, re, im."""
    M = as_mat4(M)
    as_tol(tol)
    nrm = np.linalg.norm(M)
    if nrm == 0:
        raise ProjectiveError("zero matrix has no meaningful eigensystem")
    A = M / nrm
    I = np.eye(4)
    coeffs = char_poly(A)
    roots = solve_quartic(coeffs)
    scale = max(1e-300, max(abs(x) for x in roots))
    clusters = cluster_roots(roots, coeffs)

    # Roots next to a multiple root inherit its ill-conditioning; re-read them
    # from the quotient by the (refined) eigenspace of the first multiple value.
    settled = False
    fallback = None
    for z, m in clusters:
        if m < 2:
            continue
        g = null_space(A - z * I, scale=1.0).shape[1]
        settled = g == 4
        if g < 4:
            split = _deflate(A, z, g if 1 <= g <= m else m, scale)
            if split is not None and sum(k for _, k in split) == 4:
                # An all-simple split may just be a blurred double root.
                if any(k > 1 for _, k in split):
                    clusters = split
                    settled = True
                else:
                    fallback = split
        break
    if not settled:
        split = _rescue_cluster(A, roots, scale)
        if split is not None:
            clusters = split
        elif fallback is not None:
            clusters = fallback

    n = len(clusters)
    values: list[complex | None] = [None] * n
    spaces: list[NDArray | None] = [None] * n
    defect = False
    for idx, (z, m) in enumerate(clusters):
        if z.imag < 0 and any(k != idx and mk == m and abs(w - z.conjugate()) <= 1e-12 * scale
                              for k, (w, mk) in enumerate(clusters)):
            continue
        others = [w for k, (w, _) in enumerate(clusters) if k != idx]
        basis = null_space(A - z * I, scale=1.0) if m > 1 else null_space(A - z * I, force_rank=3)
        if basis.shape[1] >= m:
            z = _refine(A, z, m, others)
            if clusters[idx][0].imag == 0:
                z = complex(z.real, 0.0)
            basis = null_space(A - z * I, force_rank=4 - m)[:, :m]
            if m > 1:
                basis, _ = np.linalg.qr(basis)
        else:
            defect = True
        values[idx] = z
        spaces[idx] = basis

    for idx, (z, m) in enumerate(clusters):
        if values[idx] is None:
            k = min((k for k in range(n) if values[k] is not None and clusters[k][1] == m),
                    key=lambda k: abs(clusters[k][0] - z.conjugate()))
            values[idx] = values[k].conjugate()
            spaces[idx] = np.conj(spaces[k])

    pairs = []
    residual = 0.0
    for (_, m), z, basis in zip(clusters, values, spaces):
        g = basis.shape[1]
        vecs = [_fix_phase(basis[:, k]) for k in range(g)]
        for v in vecs:
            residual = max(residual, float(np.linalg.norm(A @ v - z * v)))
        value = complex(z * nrm)
        for k in range(m):
            v = vecs[min(k, g - 1)] if g else np.full(4, np.nan, dtype=complex)
            pairs.append(EigenPair(value, v, algebraic=m, geometric=g))

    def key(p: EigenPair):
        w = p.value / nrm
        return (-round(abs(w), 11), -round(w.real, 11), -round(w.imag, 11))

    pairs.sort(key=key)
    return EigenSystem(
        pairs=tuple(pairs),
        defect_flag=defect,
        ill_conditioned=bool(residual > ILL_CONDITIONED or not np.isfinite(residual)),
        max_residual=residual,
    )


def eigenvalues(M: ArrayLike) -> NDArray:
    return eigen_decompose(M).values
