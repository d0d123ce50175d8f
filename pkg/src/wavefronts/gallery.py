"""The six normal-form integral diagrams for generic first-order ODEs:
momentary fronts, caustic / envelope / self-intersection data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .errors import MaxIterations, SingularJacobian, UnknownGerm
from .fronts import polyline_self_intersections
from .solve import newton_solve

_U = ("u1", "u2")

_GERMS = {
    1: ("u2", ("u1", "u2"), "trivial"),
    2: ("2/3*u1^3 + u2", ("u1^2", "u2"), "regular"),
    3: ("u2 - 1/2*u1", ("u1", "u2^2"), "clairaut"),
    4: ("3/4*u1^4 + 1/2*u1^2*u2 + u2", ("u1^3 + u2*u1", "u2"), "regular"),
    5: ("u2", ("u1", "u2^3 + u1*u2"), "clairaut"),
    6: ("-3*u2^2 + 4*u1*u2 + u1", ("u1", "u2^3 + u1*u2^2"), "mixed"),
}

# Closed-form parametric envelopes of the front families (the delta data),
# one callable per branch, each mapping the branch parameter to (x, y).
_ENVELOPES = {
    3: [lambda s: np.array([s, 0.0])],
    5: [lambda s: np.array([-3 * s * s, -2 * s**3])],
    6: [lambda s: np.array([s, 0.0]), lambda s: np.array([s, 4 * s**3 / 27])],
}


@dataclass
class IntegralDiagram:
    germ_id: int
    kind: str
    mu: ex.Expr
    g: Tuple[ex.Expr, ex.Expr]
    mu_fn: Callable
    mu_du: Tuple[Callable, Callable]
    g_fn: Callable
    det_dg_fn: Callable

    def front_map(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(self.g_fn(u), dtype=float)


@dataclass
class GalleryFront:
    t: float
    branches: List[dict]  # each with keys "u" (N, 2) and "xy" (N, 2)

    @property
    def xy(self) -> np.ndarray:
        if not self.branches:
            return np.zeros((0, 2))
        return np.vstack([b["xy"] for b in self.branches])


@dataclass
class GalleryDiscriminant:
    caustic: np.ndarray  # (N, 2)
    maxwell: np.ndarray  # (N, 2)
    delta: np.ndarray  # (N, 2)


def gallery_family(germ_id: int, alpha: Optional[ex.Expr] = None) -> IntegralDiagram:
    """Build one of the six normal forms; ``alpha`` is an optional functional
    modulus, a polynomial in (v1, v2) composed with the front map."""
    if germ_id not in _GERMS:
        raise UnknownGerm(f"germ id {germ_id} (expected 1..6)")
    mu_text, g_texts, kind = _GERMS[germ_id]
    mu = ex.parse_expr(mu_text, _U)
    g = tuple(ex.parse_expr(s, _U) for s in g_texts)
    if alpha is not None and germ_id in (4, 5, 6):
        mu = ex.add(mu, alpha.subst({"v1": g[0], "v2": g[1]}))
    mu_fn = mu.compile(_U)
    mu_du = (mu.diff("u1").compile(_U), mu.diff("u2").compile(_U))
    g_fns = tuple(c.compile(_U) for c in g)
    # det of the Jacobian of the front map, symbolically
    det = ex.sub(
        ex.mul(g[0].diff("u1"), g[1].diff("u2")),
        ex.mul(g[0].diff("u2"), g[1].diff("u1")),
    )
    det_fn = det.compile(_U)
    return IntegralDiagram(
        germ_id=germ_id,
        kind=kind,
        mu=mu,
        g=g,
        mu_fn=mu_fn,
        mu_du=mu_du,
        g_fn=lambda u: np.array([g_fns[0](u), g_fns[1](u)]),
        det_dg_fn=det_fn,
    )


def _line_roots(h: Callable, grid: np.ndarray) -> List[float]:
    """Roots of a scalar function along a sampled line (bisection refine)."""
    vals = np.array([h(s) for s in grid])
    roots = []
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(float(grid[i]))
            continue
        if va * vb < 0:
            a, b = float(grid[i]), float(grid[i + 1])
            fa = va
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = h(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    if len(vals) and vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def gallery_front(
    diagram: IntegralDiagram,
    t: float,
    u1_grid: Sequence[float],
    u2_range: Tuple[float, float] = (-3.0, 3.0),
    scan: int = 400,
    branch_jump: float = 0.5,
) -> GalleryFront:
    """Level set mu = t solved along grid lines and mapped by the front map.

    Roots are matched to branches by continuity in u2 across the u1 grid.
    """
    u2_scan = np.linspace(u2_range[0], u2_range[1], scan)
    branches: List[List[np.ndarray]] = []
    open_tips: List[float] = []
    for u1 in u1_grid:
        roots = _line_roots(lambda s: diagram.mu_fn(np.array([u1, s])) - t, u2_scan)
        assigned = [False] * len(branches)
        new_tips = list(open_tips)
        for u2 in roots:
            best, best_d = None, branch_jump
            for bi, tip in enumerate(open_tips):
                if assigned[bi]:
                    continue
                d = abs(u2 - tip)
                if d < best_d:
                    best, best_d = bi, d
            if best is None:
                branches.append([np.array([u1, u2])])
                assigned.append(True)
                new_tips.append(u2)
            else:
                branches[best].append(np.array([u1, u2]))
                assigned[best] = True
                new_tips[best] = u2
        open_tips = new_tips
    out = []
    for br in branches:
        u = np.array(br)
        xy = np.array([diagram.front_map(p) for p in u])
        out.append({"u": u, "xy": xy})
    return GalleryFront(t=float(t), branches=out)


def _caustic_points(
    diagram: IntegralDiagram, u1_grid: np.ndarray, u2_grid: np.ndarray
) -> np.ndarray:
    """Zero locus of det Dg on the chart, mapped by the front map."""
    pts = []
    f = diagram.det_dg_fn
    for u1 in u1_grid:
        for u2 in _line_roots(lambda s: f(np.array([u1, s])), u2_grid):
            pts.append(diagram.front_map(np.array([u1, u2])))
    for u2 in u2_grid:
        for u1 in _line_roots(lambda s: f(np.array([s, u2])), u1_grid):
            pts.append(diagram.front_map(np.array([u1, u2])))
    if not pts:
        return np.zeros((0, 2))
    uniq = {}
    for p in pts:
        uniq[tuple(np.round(p, 9))] = p
    return np.array(list(uniq.values()))


def _maxwell_points(
    diagram: IntegralDiagram, t_values: Sequence[float], u1_grid: np.ndarray
) -> np.ndarray:
    """Equal-time front self-intersections, refined by Newton on the pairing
    equations g(u) = g(u'), mu(u) = mu(u') = t."""
    out = []
    for t in t_values:
        front = gallery_front(diagram, t, u1_grid)
        for br in front.branches:
            if len(br["xy"]) < 4:
                continue
            for hit in polyline_self_intersections(br["xy"]):
                u_all = br["u"]
                d = np.linalg.norm(br["xy"] - hit, axis=1)
                order = np.argsort(d)
                ua = u_all[order[0]]
                ub = None
                for idx in order[1:]:
                    if np.linalg.norm(u_all[idx] - ua) > 1e-2:
                        ub = u_all[idx]
                        break
                if ub is None:
                    continue

                def pairing(w):
                    u, v = w[:2], w[2:]
                    return np.concatenate(
                        [
                            diagram.front_map(u) - diagram.front_map(v),
                            [diagram.mu_fn(u) - t, diagram.mu_fn(v) - t],
                        ]
                    )

                try:
                    w = newton_solve(pairing, np.concatenate([ua, ub]))
                except (SingularJacobian, MaxIterations):
                    continue
                if np.linalg.norm(w[:2] - w[2:]) < 1e-3:
                    continue
                out.append(diagram.front_map(w[:2]))
    if not out:
        return np.zeros((0, 2))
    uniq = {}
    for p in out:
        uniq[tuple(np.round(p, 7))] = p
    return np.array(list(uniq.values()))


def envelope(diagram: IntegralDiagram, s_grid: Sequence[float]) -> np.ndarray:
    """Closed-form envelope of the front family, where one is defined."""
    branches = _ENVELOPES.get(diagram.germ_id)
    if not branches:
        return np.zeros((0, 2))
    return np.array([b(float(s)) for b in branches for s in s_grid])


def gallery_discriminant(
    diagram: IntegralDiagram,
    t_values: Sequence[float],
    u1_grid: Optional[np.ndarray] = None,
    u2_grid: Optional[np.ndarray] = None,
    s_grid: Optional[np.ndarray] = None,
) -> GalleryDiscriminant:
    """Caustic (critical values of the front map), envelope data and
    equal-time self-intersections for one normal form.

    Components reported per germ: (4) caustic + maxwell, (5) delta,
    (6) caustic + delta, per-germ front geometry otherwise empty.
    """
    if u1_grid is None:
        u1_grid = np.linspace(-1.5, 1.5, 121)
    if u2_grid is None:
        u2_grid = np.linspace(-1.5, 1.5, 121)
    if s_grid is None:
        s_grid = np.linspace(-1.2, 1.2, 241)
    gid = diagram.germ_id
    empty = np.zeros((0, 2))
    ca = _caustic_points(diagram, u1_grid, u2_grid) if gid in (4, 6) else empty
    mx = _maxwell_points(diagram, t_values, np.linspace(-1.6, 1.6, 321)) if gid == 4 else empty
    de = envelope(diagram, s_grid) if gid in (3, 5, 6) else empty
    return GalleryDiscriminant(caustic=ca, maxwell=mx, delta=de)
