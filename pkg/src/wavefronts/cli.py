"""Command-line interface: scene configuration plus the CSV/SVG emitters.

Exit codes: 0 success, 1 numerical/module failure, 2 validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import families, fronts, gallery, geometry, jets, pde
from . import expr as ex
from .emitters import emit_csv, emit_svg
from .errors import WavefrontError

DEFAULT_SEED_DENSITY = 8
DEFAULT_TOL = 1e-8


class ValidationError(Exception):
    pass


def parse_range(text: str) -> np.ndarray:
    """Parse 'lo:hi:step' (leading/trailing spaces allowed) into a grid."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValidationError(f"range {text!r} must be lo:hi:step")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as e:
        raise ValidationError(f"range {text!r}: {e}") from e
    if step <= 0 or hi < lo:
        raise ValidationError(f"range {text!r} is empty")
    vals = np.arange(lo, hi + step / 2, step)
    if vals.size == 0:
        raise ValidationError(f"range {text!r} is empty")
    return vals


def _check_writable(path: Optional[str]):
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise ValidationError(f"output directory {parent} is not writable")


def load_family(name: str) -> families.GeneratingFamily:
    if Path(name).is_file():
        return families.family_from_file(name)
    cat = families.catalog()
    if name in cat:
        return cat[name]
    raise ValidationError(
        f"unknown family {name!r}: not a file, not one of {sorted(cat)}"
    )


def load_curve(args) -> geometry.PlaneCurve:
    kinds = {"circle", "ellipse", "parabola"}
    if args.curve not in kinds:
        raise ValidationError(f"unknown curve {args.curve!r}: choose from {sorted(kinds)}")
    if args.curve == "circle":
        return geometry.Circle(radius=args.a)
    if args.curve == "ellipse":
        return geometry.Ellipse(a=args.a, b=args.b)
    return geometry.Parabola(c=args.a)


def phase_seeds(fam: families.GeneratingFamily, density: int, cap: int = 4096) -> List[np.ndarray]:
    """Coarse (q, x) grid over the family's domain box (shrunk 10%)."""
    box = fam.field.box
    if box is None:
        box = tuple((-3.0, 3.0) for _ in range(fam.k + fam.n))
    axes = []
    for lo, hi in box:
        m = 0.05 * (hi - lo)
        axes.append(np.linspace(lo + m, hi - m, density))
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    if len(pts) > cap:
        stride = int(np.ceil(len(pts) / cap))
        pts = pts[::stride]
    return list(pts)


def x_grid_and_q_seeds(fam: families.GeneratingFamily, density: int):
    box = fam.field.box
    if box is None:
        box = tuple((-3.0, 3.0) for _ in range(fam.k + fam.n))
    x_axes = []
    for lo, hi in box[fam.k :]:
        m = 0.05 * (hi - lo)
        x_axes.append(np.linspace(lo + m, hi - m, density))
    mesh = np.meshgrid(*x_axes, indexing="ij")
    xg = np.stack([m.ravel() for m in mesh], axis=1)
    if fam.seeds:
        qs = [np.asarray(s, dtype=float) for s in fam.seeds]
    else:
        q_axes = [np.linspace(lo * 0.9, hi * 0.9, density) for lo, hi in box[: fam.k]]
        qm = np.meshgrid(*q_axes, indexing="ij")
        qs = list(np.stack([m.ravel() for m in qm], axis=1))
    return xg, qs


def _emit(args, rows, n, k, curves):
    if getattr(args, "csv", None):
        emit_csv(rows, n, k, args.csv)
        print(f"wrote {args.csv}")
    if getattr(args, "svg", None):
        emit_svg(curves, args.svg)
        print(f"wrote {args.svg}")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_verify(args) -> int:
    fam = load_family(args.family)
    gl = families.GraphLikeFamily(base=fam)
    # even per-axis counts keep the grid off coordinate hyperplanes, where
    # isolated degenerate strata of the catalog families sit
    density = max(4, args.seed_density // 2)
    if density % 2:
        density += 1
    xg, qs = x_grid_and_q_seeds(fam, density)
    cps = families.solve_critical_set(fam, xg, qs)
    if not cps:
        print("no critical points found on the sampling grid")
        return 1
    morse = sum(
        families.morse_family_check(fam, cp.q, cp.x, eps=args.tol)["pass"] for cp in cps
    )
    hyper = sum(
        families.morse_hypersurface_check(
            families.shifted_family(fam, fam.value(cp.q, cp.x)), cp.q, cp.x, eps=args.tol
        )["pass"]
        for cp in cps
    )
    nondeg = sum(
        families.nondegeneracy_check(gl, cp.q, cp.x, fam.value(cp.q, cp.x), eps=args.tol)
        for cp in cps
    )
    m = len(cps)
    print(f"morse-family check: {'pass' if morse == m else 'FAIL'} ({morse}/{m} points)")
    print(f"graph-like (momentary hypersurface) check: {'pass' if hyper == m else 'FAIL'} ({hyper}/{m} points)")
    print(f"non-degeneracy check: {'pass' if nondeg == m else 'FAIL'} ({nondeg}/{m} points)")
    return 0


def cmd_front(args) -> int:
    fam = load_family(args.family)
    gl = families.GraphLikeFamily(base=fam)
    seeds = phase_seeds(fam, args.seed_density)
    curves = fronts.momentary_front(gl, args.t, seeds)
    rows = []
    svg = []
    for fc in curves:
        for x, q in zip(fc.x, fc.q):
            rows.append((fc.t, x, q, "front"))
        if fam.n == 2:
            svg.append((fc.x, "front"))
    print(f"front t={args.t}: {sum(len(c.x) for c in curves)} points in {len(curves)} chains")
    _emit(args, rows, fam.n, fam.k, svg)
    return 0


def cmd_big_front(args) -> int:
    fam = load_family(args.family)
    gl = families.GraphLikeFamily(base=fam)
    seeds = phase_seeds(fam, args.seed_density)
    t_values = parse_range(args.t)
    curves = fronts.big_front(gl, t_values, seeds)
    rows = []
    svg = []
    for fc in curves:
        for x, q in zip(fc.x, fc.q):
            rows.append((fc.t, x, q, "front"))
        if fam.n == 2:
            svg.append((fc.x, "front"))
    print(f"big front: {len(curves)} slices, {sum(len(c.x) for c in curves)} points")
    _emit(args, rows, fam.n, fam.k, svg)
    return 0


def cmd_caustic(args) -> int:
    fam = load_family(args.family)
    seeds = phase_seeds(fam, args.seed_density)
    cloud = fronts.caustic(fam, seeds)
    rows = [
        (fam.value(q, x), x, q, "caustic") for x, q in zip(cloud.x, cloud.q)
    ]
    print(f"caustic: {len(cloud.x)} points")
    _emit(args, rows, fam.n, fam.k, [(cloud.x, "caustic")] if fam.n == 2 else [])
    return 0


def cmd_maxwell(args) -> int:
    fam = load_family(args.family)
    xg, qs = x_grid_and_q_seeds(fam, args.seed_density)
    pts = fronts.maxwell_set(fam, xg, qs)
    rows = [(p.value, p.x, p.q, "maxwell") for p in pts]
    print(f"maxwell set: {len(pts)} points")
    svg = [(np.array([p.x for p in pts]), "maxwell")] if pts and fam.n == 2 else []
    _emit(args, rows, fam.n, fam.k, svg)
    return 0


def cmd_discriminant(args) -> int:
    fam = load_family(args.family)
    gl = families.GraphLikeFamily(base=fam)
    seeds = phase_seeds(fam, args.seed_density)
    xg, qs = x_grid_and_q_seeds(fam, args.seed_density)
    t_values = parse_range(args.t)
    dec = fronts.discriminant(gl, seeds, xg, qs, t_values)
    rows = [(fam.value(q, x), x, q, "caustic") for x, q in zip(dec.caustic.x, dec.caustic.q)]
    rows += [(p.value, p.x, p.q, "maxwell") for p in pts_or(dec.maxwell)]
    svg = []
    if fam.n == 2:
        svg.append((dec.caustic.x, "caustic"))
        if dec.maxwell:
            svg.append((np.array([p.x for p in dec.maxwell]), "maxwell"))
    print(
        f"discriminant: caustic {len(dec.caustic.x)}, maxwell {len(dec.maxwell)}, "
        f"delta {len(dec.delta)} (empty as required)"
    )
    _emit(args, rows, fam.n, fam.k, svg)
    return 0


def pts_or(seq):
    return seq if seq else []


def cmd_evolute(args) -> int:
    curve = load_curve(args)
    u_grid = parse_range(args.u) if args.u else np.linspace(0.0, 2 * np.pi, 720)
    rows = []
    pts = []
    for u in u_grid:
        if abs(curve.curvature(float(u))) < 1e-10:
            continue
        p = curve.evolute_point(float(u))
        rows.append((0.0, p, [u], "caustic"))
        pts.append(p)
    print(f"evolute: {len(pts)} points")
    _emit(args, rows, 2, 1, [(np.array(pts), "caustic")] if pts else [])
    return 0


def cmd_parallels(args) -> int:
    curve = load_curve(args)
    u_grid = parse_range(args.u) if args.u else np.linspace(0.0, 2 * np.pi, 720)
    r_values = parse_range(args.r)
    offs = geometry.parallels(curve, r_values, u_grid)
    rows = []
    svg = []
    for r, pts in offs:
        for u, p in zip(u_grid, pts):
            rows.append((r * r, p, [u], "front"))
        svg.append((pts, "front"))
    ev = geometry.evolute(curve, u_grid)
    if len(ev):
        svg.append((ev, "caustic"))
    print(f"parallels: {len(offs)} offsets x {len(u_grid)} samples (+ evolute)")
    _emit(args, rows, 2, 1, svg)
    return 0


def cmd_burgers(args) -> int:
    eq = pde.burgers(speed=args.speed)
    t_values = parse_range(args.t)
    dt = float(t_values[1] - t_values[0]) if len(t_values) > 1 else 1e-3
    x0 = np.linspace(0.0, 2 * np.pi, args.strips)
    sheet = pde.integrate_characteristics(eq, x0, (t_values[0], t_values[-1]), dt=dt)
    if args.report_breaking:
        t_star = pde.breaking_time(sheet)
        if t_star is None:
            print("t* = none (no fold in the sampled window)")
        else:
            print(f"t* = {t_star:.4f}")
    if args.count:
        x_hat, t_at = (float(v) for v in args.count.split(","))
        print(f"count({x_hat}, {t_at}) = {pde.multivalued_count(sheet, x_hat, t_at)}")
    if getattr(args, "csv", None) or getattr(args, "svg", None):
        t_show = float(t_values[-1])
        vals = pde.sheet_values(sheet, t_show)
        rows = [(t_show, v, [x0i], "front") for v, x0i in zip(vals, x0)]
        _emit(args, rows, 2, 1, [(vals, "front")])
    return 0


def cmd_ode_gallery(args) -> int:
    alpha = None
    if args.alpha and args.alpha.strip() != "0":
        alpha = ex.parse_expr(args.alpha, ("v1", "v2"))
    diagram = gallery.gallery_family(args.germ, alpha)
    t_values = parse_range(args.t)
    u1_grid = np.linspace(-1.6, 1.6, 20 * args.seed_density + 1)
    rows = []
    svg = []
    for t in t_values:
        fr = gallery.gallery_front(diagram, float(t), u1_grid)
        for br in fr.branches:
            svg.append((br["xy"], "front"))
            for u, p in zip(br["u"], br["xy"]):
                rows.append((fr.t, p, u, "front"))
    disc = gallery.gallery_discriminant(diagram, t_values)
    if len(disc.caustic):
        svg.append((disc.caustic, "caustic"))
    if len(disc.maxwell):
        svg.append((disc.maxwell, "maxwell"))
    if len(disc.delta):
        svg.append((disc.delta, "delta"))
    print(
        f"germ {args.germ} ({diagram.kind}): {len(t_values)} fronts; "
        f"caustic {len(disc.caustic)}, maxwell {len(disc.maxwell)}, delta {len(disc.delta)}"
    )
    _emit(args, rows, 2, 2, svg)
    return 0


def cmd_versal(args) -> int:
    qvars = tuple(f"q{i + 1}" for i in range(args.k))
    f = ex.parse_expr(args.f, qvars)
    dfdx = [ex.parse_expr(s, qvars) for s in args.dfdx.split(";") if s.strip()]
    lag = jets.lagrangian_stability_check(f, dfdx, args.jet, variables=qvars)
    sp = jets.sp_plus_versality_check(f, dfdx, args.jet, variables=qvars)
    for name, rep in (("stability", lag), ("time-extended versality", sp)):
        verdict = "pass" if rep.passes else "FAIL"
        line = f"{name}: {verdict} (defect {rep.codimension_defect}"
        if rep.witnesses:
            line += f", witnesses {', '.join(rep.witnesses)}"
        print(line + ")")
    dim = jets.k_determinacy_dimension(f, args.jet, variables=qvars)
    print(f"determinacy dimension: {dim}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavefronts",
        description="Generating families, wave fronts, caustics and their discriminants.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed-density",
        type=int,
        default=DEFAULT_SEED_DENSITY,
        help=f"samples per axis for seeding grids (default {DEFAULT_SEED_DENSITY})",
    )
    common.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_TOL,
        help=f"rank / membership tolerance (default {DEFAULT_TOL})",
    )
    common.add_argument("--csv", help="write labeled samples to this CSV path")
    common.add_argument("--svg", help="write curves to this SVG path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the family rank checks")
    p.add_argument("--family", required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("front", parents=[common], help="one momentary front")
    p.add_argument("--family", required=True)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(fn=cmd_front)

    p = sub.add_parser("big-front", parents=[common], help="stacked momentary fronts")
    p.add_argument("--family", required=True)
    p.add_argument("--t", required=True, help="lo:hi:step")
    p.set_defaults(fn=cmd_big_front)

    p = sub.add_parser("caustic", parents=[common], help="caustic of a family")
    p.add_argument("--family", required=True)
    p.set_defaults(fn=cmd_caustic)

    p = sub.add_parser("maxwell", parents=[common], help="equal-value critical pairs")
    p.add_argument("--family", required=True)
    p.set_defaults(fn=cmd_maxwell)

    p = sub.add_parser("discriminant", parents=[common], help="caustic + maxwell (+ empty delta)")
    p.add_argument("--family", required=True)
    p.add_argument("--t", required=True, help="lo:hi:step for the delta scan")
    p.set_defaults(fn=cmd_discriminant)

    for name, fn, extra in (
        ("evolute", cmd_evolute, False),
        ("parallels", cmd_parallels, True),
    ):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a plane curve")
        p.add_argument("--curve", required=True, help="circle | ellipse | parabola")
        p.add_argument("--a", type=float, default=2.0)
        p.add_argument("--b", type=float, default=1.0)
        p.add_argument("--u", help="parameter range lo:hi:step (default full turn)")
        if extra:
            p.add_argument("--r", required=True, help="offset range lo:hi:step")
        p.set_defaults(fn=fn)

    p = sub.add_parser("burgers", parents=[common], help="characteristics of the model equation")
    p.add_argument("--t", required=True, help="lo:hi:step (step = dt)")
    p.add_argument("--speed", type=float, default=2.0)
    p.add_argument("--strips", type=int, default=400)
    p.add_argument("--report-breaking", action="store_true")
    p.add_argument("--count", help="'x,t': report the number of characteristics there")
    p.set_defaults(fn=cmd_burgers)

    p = sub.add_parser("ode-gallery", parents=[common], help="normal-form front galleries")
    p.add_argument("--germ", type=int, required=True)
    p.add_argument("--t", required=True, help="lo:hi:step")
    p.add_argument("--alpha", default="0", help="functional modulus in (v1, v2), or 0")
    p.set_defaults(fn=cmd_ode_gallery)

    p = sub.add_parser("versal", parents=[common], help="jet-space stability report")
    p.add_argument("--f", required=True, help="germ, polynomial in q1..qk")
    p.add_argument("--dfdx", default="", help="semicolon-separated initial velocities")
    p.add_argument("--jet", type=int, default=8)
    p.add_argument("--k", type=int, default=1, help="number of q variables")
    p.set_defaults(fn=cmd_versal)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        _check_writable(getattr(args, "csv", None))
        _check_writable(getattr(args, "svg", None))
        return args.fn(args)
    except ValidationError as e:
        print(f"invalid arguments: {e}", file=sys.stderr)
        return 2
    except WavefrontError as e:
        print(f"error[{type(e).__name__}]: {e}", file=sys.stderr)
        return 1


def main() -> None:  # console-script entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
