"""Command-line interface: ``homrot {rotate,classify,stereo,verify,angle}``.

Exit codes: 0 success, 1 negative result (not recognized / a check failed),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from .formats import FormatError, fmt_float, format_matrix, format_vector, parse_matrix, read_source
from .projective_core import ProjectiveError, Tolerance, canonical_scale, mat_proj_equal
from .rotation_build import (
    METHODS,
    AxisByPointDir,
    RotationSpec,
    dihedral_angle,
    rotation_matrix,
    rotation_rodrigues,
    two_points_to_axis,
)
from .rotation_classify import RoundTripError, classify_rotation, round_trip
from .stereohomology import (
    IDENTITY,
    classify_stereo,
    make_projection,
    make_reflection,
    make_scaling,
    make_shear,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str, n: int, what: str) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{what}: expected {n} finite numbers, got {text!r}")
    return np.array(vals)


def _angle_in(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _tol(args) -> Tolerance:
    try:
        return Tolerance(rel=args.tol, abs=min(args.tol, 1e-12))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(obj))
        return
    for k, v in obj.items():
        if isinstance(v, float):
            v = fmt_float(v)
        elif isinstance(v, list):
            v = " ".join(fmt_float(x) if isinstance(x, float) else str(x) for x in v)
        print(f"{k}: {v}")


def _spec_from_args(args) -> RotationSpec:
    theta = _angle_in(args, args.theta)
    point = _floats(args.point, 3, "--point")
    if args.through is not None:
        if args.dir is not None:
            raise UsageError("give either --dir or --through, not both")
        axis = two_points_to_axis(np.append(point, 1.0), np.append(_floats(args.through, 3, "--through"), 1.0))
    else:
        if args.dir is None:
            raise UsageError("an axis direction (--dir) or second point (--through) is required")
        axis = AxisByPointDir.normalized(point, _floats(args.dir, 3, "--dir"))
    return RotationSpec(axis, theta)


def cmd_rotate(args) -> int:
    spec = _spec_from_args(args)
    M = rotation_matrix(spec.axis.point, spec.axis.dir, spec.theta, args.method)
    print(format_matrix(canonical_scale(M), args.format or "text"))
    return EXIT_OK


def _stereo_dict(M, tol) -> tuple[dict, bool]:
    sc = classify_stereo(M, tol)
    if sc.label == IDENTITY:
        return {"is_rotation": False, "class": "identity", "row": None, "reason": sc.note}, True
    out = {"is_rotation": False, "class": sc.label, "row": sc.row}
    if sc.spec is not None:
        sp = sc.spec
        out.update({
            "s": [float(x) for x in sp.center],
            "pi": [float(x) for x in sp.plane],
            "lambda": float(sp.lam),
            "rho": None if sp.rho is None else float(sp.rho),
            "mu": None if sp.mu is None else float(sp.mu),
            "orthographic": sc.orthographic,
        })
    out["residual"] = sc.residual
    if sc.note:
        out["reason"] = sc.note
    return out, sc.is_stereo


def cmd_classify(args) -> int:
    M = parse_matrix(read_source(args.matrix))
    tol = _tol(args)
    rep = classify_rotation(M, tol)
    if rep.is_rotation:
        _emit(rep.as_dict(), args.format or "json")
        return EXIT_OK
    out, known = _stereo_dict(M, tol)
    if not known and rep.reason:
        out["rotation_reason"] = rep.reason
    _emit(out, args.format or "json")
    return EXIT_OK if known else EXIT_NEGATIVE


def cmd_stereo(args) -> int:
    tol = _tol(args)
    if args.make is None:
        M = parse_matrix(read_source(args.matrix))
        out, known = _stereo_dict(M, tol)
        _emit(out, args.format or "json")
        return EXIT_OK if known else EXIT_NEGATIVE
    if args.center is None or args.plane is None:
        raise UsageError("--make needs --center and --plane")
    s = _floats(args.center, 4, "--center")
    pi = _floats(args.plane, 4, "--plane")
    if args.make == "projection":
        M = make_projection(s, pi, args.lam, tol)
    elif args.make == "scaling":
        M = make_scaling(s, pi, args.rho, args.lam, tol)
    elif args.make == "reflection":
        M = make_reflection(s, pi, args.lam, tol)
    else:
        M = make_shear(s, pi, args.mu, args.lam, tol)
    print(format_matrix(M, args.format or "text"))
    return EXIT_OK


def verify_spec(spec: RotationSpec, tol: float) -> list[tuple[str, float, bool, str]]:
    """Per-check ``(name, residual, passed, note)`` for one rotation spec."""
    ref = rotation_rodrigues(spec)
    checks = []
    for m in METHODS[1:]:
        M = rotation_matrix(spec.axis.point, spec.axis.dir, spec.theta, m)
        r = float(np.linalg.norm(M / M[3, 3] - ref) / np.linalg.norm(ref))
        checks.append((f"agree_{m}", r, mat_proj_equal(M, ref, tol) and r <= tol, ""))
    axis_r = max(float(np.linalg.norm(ref @ spec.axis.point - spec.axis.point)),
                 float(np.linalg.norm(ref @ spec.axis.dir - spec.axis.dir)))
    checks.append(("axis_eigenvectors", axis_r, axis_r <= tol, ""))
    B = ref[:3, :3]
    orth = max(float(np.abs(B.T @ B - np.eye(3)).max()), abs(float(np.linalg.det(B)) - 1.0))
    checks.append(("orthogonality", orth, orth <= tol, ""))
    note = ""
    try:
        rep = round_trip(spec, tol=max(tol, 1e-12))
        ok = True
        res = rep.eig_residual
        if rep.theta is not None and rep.theta == math.pi:
            note = "half turn: direction sign is ambiguous"
    except RoundTripError as exc:
        ok, res, note = False, float("nan"), str(exc)
    checks.append(("round_trip", res, ok, note))
    return checks


def cmd_verify(args) -> int:
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        spec = RotationSpec.of(rng.uniform(-10, 10, 3), rng.normal(size=3), rng.uniform(-math.pi, math.pi))
    else:
        if args.point is None or args.theta is None:
            raise UsageError("verify needs --seed or --point/--dir/--theta")
        spec = _spec_from_args(args)
    checks = verify_spec(spec, args.tol)
    failed = [c for c in checks if not c[2]]
    fmt = args.format or "text"
    if fmt == "json":
        print(json.dumps({
            "point": [float(x) for x in spec.axis.origin],
            "dir": [float(x) for x in spec.axis.unit],
            "theta": spec.theta,
            "checks": [{"name": n, "residual": r, "pass": p, "note": t} for n, r, p, t in checks],
            "pass": not failed,
        }))
    else:
        print("spec point " + format_vector(spec.axis.origin) + " dir " + format_vector(spec.axis.unit)
              + " theta " + fmt_float(spec.theta))
        for name, r, p, note in checks:
            line = f"{'ok  ' if p else 'FAIL'} {name:<18} {r:.3e}"
            print(line + (f"  ({note})" if note else ""))
    if failed:
        print("failing checks: " + ", ".join(c[0] for c in failed), file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_angle(args) -> int:
    p1 = _floats(args.p1, 4, "--p1")
    p2 = _floats(args.p2, 4, "--p2")
    w = dihedral_angle(p1, p2, "arccos")
    w_l = dihedral_angle(p1, p2, "laguerre")
    conv = math.degrees if args.degrees else float
    _emit({"arccos": conv(w), "laguerre": conv(w_l), "difference": abs(w - w_l)}, args.format or "text")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None,
                        help="output encoding (default depends on the command)")
    common.add_argument("--tol", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    common.add_argument("--degrees", action="store_true", help="angles in degrees instead of radians")

    ap = argparse.ArgumentParser(prog="homrot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def axis_args(p, required):
        p.add_argument("-p", "--point", required=required, help="axis point x,y,z")
        p.add_argument("-d", "--dir", help="axis direction a,b,c (any nonzero length)")
        p.add_argument("-q", "--through", help="second axis point x,y,z (instead of --dir)")
        p.add_argument("-t", "--theta", type=float, required=required, help="rotation angle")

    p = sub.add_parser("rotate", parents=[common], help="build a rotation matrix")
    axis_args(p, True)
    p.add_argument("-m", "--method", choices=METHODS, default="rodrigues")
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("classify", parents=[common], help="classify a 4x4 matrix")
    p.add_argument("matrix", nargs="?", default="-", help="matrix file, or - for stdin")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("stereo", parents=[common], help="classify or build a center/plane transformation")
    p.add_argument("matrix", nargs="?", default="-", help="matrix file, or - for stdin")
    p.add_argument("--make", choices=("projection", "scaling", "reflection", "shear"))
    p.add_argument("--center", help="center s as 4 numbers")
    p.add_argument("--plane", help="plane pi as 4 numbers")
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=2.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.set_defaults(func=cmd_stereo)

    p = sub.add_parser("verify", parents=[common], help="cross-check the construction methods on one spec")
    axis_args(p, False)
    p.add_argument("--seed", type=int, help="draw a random spec from this seed")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("angle", parents=[common], help="dihedral angle between two planes")
    p.add_argument("--p1", required=True, help="first plane a,b,c,d")
    p.add_argument("--p2", required=True, help="second plane a,b,c,d")
    p.set_defaults(func=cmd_angle)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, ProjectiveError) as exc:
        print(f"homrot {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
