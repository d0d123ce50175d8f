"""Parametric curves and surfaces: curvature, evolutes, parallels and the
distance-squared generating families.

Sign conventions (normative for this package):

* plane curves are parameterized so that ``normal(u)`` is the *outward*
  normal (rightward of the travel direction; outward for the counterclockwise
  catalog parameterizations);
* ``curvature`` returns the counterclockwise-signed curvature
  ``(x'y'' - y'x'') / |X'|^3`` (positive for convex CCW curves);
* parallels are ``X + r * normal``, so negative ``r`` offsets inward;
* the evolute is the center of curvature ``X - (1/kappa) * normal``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateMetric
from .families import GeneratingFamily, GraphLikeFamily
from .fields import ScalarField
from .solve import newton_solve
from .errors import DomainError, MaxIterations, SingularJacobian


class PlaneCurve:
    """A regular parametric curve in R^2 with closed-form derivatives."""

    ambient = 2
    periodic: Optional[float] = None

    def point(self, u: float) -> np.ndarray:
        raise NotImplementedError

    def d1(self, u: float) -> np.ndarray:
        raise NotImplementedError

    def d2(self, u: float) -> np.ndarray:
        raise NotImplementedError

    def normal(self, u: float) -> np.ndarray:
        dx, dy = self.d1(u)
        n = np.array([dy, -dx])
        return n / np.linalg.norm(n)

    def curvature(self, u: float) -> float:
        dx, dy = self.d1(u)
        ddx, ddy = self.d2(u)
        speed = math.hypot(dx, dy)
        if speed**3 < 1e-14:
            raise DegenerateMetric(f"vanishing speed at u={u}")
        return (dx * ddy - dy * ddx) / speed**3

    def evolute_point(self, u: float) -> np.ndarray:
        return self.point(u) - (1.0 / self.curvature(u)) * self.normal(u)


@dataclass
class Circle(PlaneCurve):
    radius: float = 1.0

    def __post_init__(self):
        self.periodic = 2 * math.pi

    def point(self, u):
        return self.radius * np.array([math.cos(u), math.sin(u)])

    def d1(self, u):
        return self.radius * np.array([-math.sin(u), math.cos(u)])

    def d2(self, u):
        return -self.point(u)


@dataclass
class Ellipse(PlaneCurve):
    a: float = 2.0
    b: float = 1.0

    def __post_init__(self):
        self.periodic = 2 * math.pi

    def point(self, u):
        return np.array([self.a * math.cos(u), self.b * math.sin(u)])

    def d1(self, u):
        return np.array([-self.a * math.sin(u), self.b * math.cos(u)])

    def d2(self, u):
        return -self.point(u)


@dataclass
class Parabola(PlaneCurve):
    """The graph y = c * u^2, parameterized left to right."""

    c: float = 1.0

    def point(self, u):
        return np.array([u, self.c * u * u])

    def d1(self, u):
        return np.array([1.0, 2 * self.c * u])

    def d2(self, u):
        return np.array([0.0, 2 * self.c])


class Surface:
    """A regular parametric surface in R^3 with derivatives up to order 2."""

    ambient = 3

    def point(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def du(self, u: np.ndarray) -> np.ndarray:
        """(2, 3) array of first partials."""
        raise NotImplementedError

    def d2(self, u: np.ndarray) -> np.ndarray:
        """(2, 2, 3) array of second partials."""
        raise NotImplementedError

    def normal(self, u: np.ndarray) -> np.ndarray:
        J = self.du(u)
        n = np.cross(J[0], J[1])
        norm = np.linalg.norm(n)
        if norm < 1e-14:
            raise DegenerateMetric(f"degenerate chart at u={u!r}")
        return n / norm

    def fundamental_forms(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        J = self.du(u)
        n = self.normal(u)
        I = J @ J.T
        S = self.d2(u)
        II = np.array([[S[i, j] @ n for j in range(2)] for i in range(2)])
        return I, II

    def principal_curvatures(self, u: np.ndarray) -> np.ndarray:
        I, II = self.fundamental_forms(u)
        if abs(np.linalg.det(I)) < 1e-14:
            raise DegenerateMetric(f"first fundamental form degenerate at u={u!r}")
        shape_op = np.linalg.solve(I, II)
        k = np.sort(np.real(np.linalg.eigvals(shape_op)))
        return k


@dataclass
class Sphere(Surface):
    radius: float = 1.0

    def point(self, u):
        phi, theta = u
        r = self.radius
        return r * np.array(
            [math.sin(phi) * math.cos(theta), math.sin(phi) * math.sin(theta), math.cos(phi)]
        )

    def du(self, u):
        phi, theta = u
        r = self.radius
        return np.array(
            [
                [r * math.cos(phi) * math.cos(theta), r * math.cos(phi) * math.sin(theta), -r * math.sin(phi)],
                [-r * math.sin(phi) * math.sin(theta), r * math.sin(phi) * math.cos(theta), 0.0],
            ]
        )

    def d2(self, u):
        phi, theta = u
        r = self.radius
        s, c = math.sin(phi), math.cos(phi)
        st, ct = math.sin(theta), math.cos(theta)
        dpp = np.array([-r * s * ct, -r * s * st, -r * c])
        dpt = np.array([-r * c * st, r * c * ct, 0.0])
        dtt = np.array([-r * s * ct, -r * s * st, 0.0])
        return np.array([[dpp, dpt], [dpt, dtt]])


@dataclass
class GraphSurface(Surface):
    """z = g(u1, u2) with closed-form partial closures.

    ``grad_g``/``hess_g`` may be omitted; finite differences (step 1e-5) are
    used then, with the documented accuracy loss.
    """

    g: Callable[[float, float], float]
    grad_g: Optional[Callable] = None
    hess_g: Optional[Callable] = None

    def _grad(self, u):
        if self.grad_g is not None:
            return np.asarray(self.grad_g(u[0], u[1]), dtype=float)
        h = 1e-5
        return np.array(
            [
                (self.g(u[0] + h, u[1]) - self.g(u[0] - h, u[1])) / (2 * h),
                (self.g(u[0], u[1] + h) - self.g(u[0], u[1] - h)) / (2 * h),
            ]
        )

    def _hess(self, u):
        if self.hess_g is not None:
            return np.asarray(self.hess_g(u[0], u[1]), dtype=float)
        h = 1e-4
        g = self.g
        a, b = u
        H = np.empty((2, 2))
        H[0, 0] = (g(a + h, b) - 2 * g(a, b) + g(a - h, b)) / h**2
        H[1, 1] = (g(a, b + h) - 2 * g(a, b) + g(a, b - h)) / h**2
        H[0, 1] = H[1, 0] = (
            g(a + h, b + h) - g(a + h, b - h) - g(a - h, b + h) + g(a - h, b - h)
        ) / (4 * h**2)
        return H

    def point(self, u):
        return np.array([u[0], u[1], self.g(u[0], u[1])])

    def du(self, u):
        gu = self._grad(u)
        return np.array([[1.0, 0.0, gu[0]], [0.0, 1.0, gu[1]]])

    def d2(self, u):
        H = self._hess(u)
        out = np.zeros((2, 2, 3))
        out[:, :, 2] = H
        return out


@dataclass
class Ellipsoid(Surface):
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def point(self, u):
        phi, theta = u
        return np.array(
            [
                self.a * math.sin(phi) * math.cos(theta),
                self.b * math.sin(phi) * math.sin(theta),
                self.c * math.cos(phi),
            ]
        )

    def du(self, u):
        phi, theta = u
        return np.array(
            [
                [self.a * math.cos(phi) * math.cos(theta), self.b * math.cos(phi) * math.sin(theta), -self.c * math.sin(phi)],
                [-self.a * math.sin(phi) * math.sin(theta), self.b * math.sin(phi) * math.cos(theta), 0.0],
            ]
        )

    def d2(self, u):
        phi, theta = u
        s, c = math.sin(phi), math.cos(phi)
        st, ct = math.sin(theta), math.cos(theta)
        dpp = np.array([-self.a * s * ct, -self.b * s * st, -self.c * c])
        dpt = np.array([-self.a * c * st, self.b * c * ct, 0.0])
        dtt = np.array([-self.a * s * ct, -self.b * s * st, 0.0])
        return np.array([[dpp, dpt], [dpt, dtt]])


# ---------------------------------------------------------------------------
# Operations


@dataclass
class CurvatureData:
    kappas: np.ndarray  # (n-1,) principal curvatures (signed kappa for n=2)
    directions: Optional[np.ndarray] = None


def curvature(surface, u) -> CurvatureData:
    if isinstance(surface, PlaneCurve):
        return CurvatureData(kappas=np.array([surface.curvature(float(np.atleast_1d(u)[0]))]))
    k = surface.principal_curvatures(np.asarray(u, dtype=float))
    return CurvatureData(kappas=k)


def evolute(surface, u_grid: Sequence, branch: int = 0, min_kappa: float = 1e-10) -> np.ndarray:
    """Focal points X + (1/kappa_i) * n_kappa per chart sample; zero-curvature
    samples are skipped."""
    pts = []
    if isinstance(surface, PlaneCurve):
        for u in u_grid:
            u = float(np.atleast_1d(u)[0])
            if abs(surface.curvature(u)) < min_kappa:
                continue
            pts.append(surface.evolute_point(u))
    else:
        for u in u_grid:
            u = np.asarray(u, dtype=float)
            k = surface.principal_curvatures(u)[branch]
            if abs(k) < min_kappa:
                continue
            pts.append(surface.point(u) + surface.normal(u) / k)
    return np.array(pts) if pts else np.zeros((0, surface.ambient))


def parallels(surface, r_values: Sequence[float], u_grid: Sequence) -> List[Tuple[float, np.ndarray]]:
    """Offset polylines (P_r(u), r); for surfaces an unordered point set per r."""
    out = []
    for r in r_values:
        if isinstance(surface, PlaneCurve):
            pts = np.array(
                [surface.point(float(u)) + r * surface.normal(float(u)) for u in u_grid]
            )
        else:
            pts = np.array(
                [surface.point(np.asarray(u, float)) + r * surface.normal(np.asarray(u, float)) for u in u_grid]
            )
        out.append((float(r), pts))
    return out


def parallel_cusps(curve: PlaneCurve, r: float, u_grid: Sequence) -> List[np.ndarray]:
    """Singular points of the offset at distance r: solutions of
    1 + r * kappa(u) = 0, refined by bisection between grid samples."""
    vals = [1.0 + r * curve.curvature(float(u)) for u in u_grid]
    out = []
    for i in range(len(u_grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            u_star = float(u_grid[i])
        elif va * vb < 0:
            a, b = float(u_grid[i]), float(u_grid[i + 1])
            fa = va
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = 1.0 + r * curve.curvature(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            u_star = 0.5 * (a + b)
        else:
            continue
        out.append(curve.point(u_star) + r * curve.normal(u_star))
    return out


def distance_squared_family(
    surface, v_box=None, u_span: float = 30.0, name: str = ""
) -> Tuple[GeneratingFamily, GraphLikeFamily]:
    """The family D(u, v) = |X(u) - v|^2 with closed-form derivatives."""
    if isinstance(surface, PlaneCurve):
        k, n = 1, 2

        def X(u):
            return surface.point(float(u[0]))

        def DX(u):
            return surface.d1(float(u[0]))[None, :]

        def D2X(u):
            return surface.d2(float(u[0]))[None, None, :]

    else:
        k, n = 2, 3

        def X(u):
            return surface.point(u)

        def DX(u):
            return surface.du(u)

        def D2X(u):
            return surface.d2(u)

    def split(p):
        return p[:k], p[k:]

    def fn(p):
        u, v = split(p)
        d = X(u) - v
        return float(d @ d)

    def grad_fn(p):
        u, v = split(p)
        d = X(u) - v
        J = DX(u)
        return np.concatenate([2 * J @ d, -2 * d])

    def hess_fn(p):
        u, v = split(p)
        d = X(u) - v
        J = DX(u)
        S = D2X(u)
        H = np.zeros((k + n, k + n))
        for i in range(k):
            for j in range(k):
                H[i, j] = 2 * (S[i, j] @ d + J[i] @ J[j])
        H[:k, k:] = -2 * J
        H[k:, :k] = H[:k, k:].T
        H[k:, k:] = 2 * np.eye(n)
        return H

    if v_box is None:
        extent = max(np.abs(X(np.zeros(k))).max(), 1.0) * 4 + 4
        v_box = tuple((-extent, extent) for _ in range(n))
    box = tuple((-u_span, u_span) for _ in range(k)) + tuple(v_box)
    field = ScalarField(arity=k + n, fn=fn, grad_fn=grad_fn, hess_fn=hess_fn, box=box)
    fam = GeneratingFamily(k=k, n=n, field=field, name=name or f"dist2-{type(surface).__name__.lower()}")
    return fam, GraphLikeFamily(base=fam)


def tangent_sphere_check(
    surface,
    v,
    r: float,
    u_grid: Sequence,
    radius_tol: float = 1e-8,
    min_separation: float = 1e-3,
) -> dict:
    """All chart points where the sphere of radius r about v is tangent to the
    surface; ``multiple`` flags two or more separated tangency points."""
    v = np.asarray(v, dtype=float)
    fam, _ = distance_squared_family(surface)
    k = fam.k
    hits: List[np.ndarray] = []
    for u0 in u_grid:
        u0 = np.atleast_1d(np.asarray(u0, dtype=float))
        z0 = np.concatenate([u0, v])
        frozen = list(range(k, k + fam.n))

        def system(z):
            return fam.grad_q(z[:k], z[k:])

        try:
            z = newton_solve(system, z0, frozen=frozen)
        except (SingularJacobian, MaxIterations, DomainError):
            continue
        u = z[:k]
        if abs(fam.value(u, v) - r * r) > max(radius_tol, 1e-10 * r * r):
            continue
        if any(np.linalg.norm(u - h) < min_separation for h in hits):
            continue
        hits.append(u)
    multiple = len(hits) >= 2
    return {"tangency_points": hits, "multiple": multiple}
