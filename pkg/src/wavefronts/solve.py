"""Newton solving and pseudo-arclength continuation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DomainError,
    MaxIterations,
    RankDeficientSeed,
    SeedNotOnCurve,
    SingularJacobian,
)
from .fields import FD_STEP
from .linalg import null_space, numerical_rank

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
SINGULAR_RATIO = 1e-12


def fd_jacobian(system: Callable, p: np.ndarray) -> np.ndarray:
    """Central finite-difference Jacobian, step 1e-5 relative per coordinate."""
    p = np.asarray(p, dtype=float)
    r0 = np.asarray(system(p), dtype=float)
    m = p.size
    J = np.empty((r0.size, m))
    for i in range(m):
        h = FD_STEP * max(1.0, abs(p[i]))
        e = np.zeros(m)
        e[i] = h
        J[:, i] = (np.asarray(system(p + e)) - np.asarray(system(p - e))) / (2 * h)
    return J


def _in_box(p: np.ndarray, box) -> bool:
    if box is None:
        return True
    return all(lo <= v <= hi for v, (lo, hi) in zip(p, box))


def newton_solve(
    system: Callable,
    seed,
    frozen: Sequence[int] = (),
    jac: Optional[Callable] = None,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    box=None,
) -> np.ndarray:
    """Solve ``system(p) = 0`` from ``seed`` with some coordinates frozen.

    Under-determined steps use the least-norm update; frozen coordinates are
    never touched.  Raises SingularJacobian, MaxIterations or DomainError.
    """
    p = np.asarray(seed, dtype=float).copy()
    m = p.size
    free = np.array([i for i in range(m) if i not in set(frozen)], dtype=int)
    if free.size == 0:
        raise ValueError("all coordinates frozen")
    jac_fn = jac if jac is not None else (lambda q: fd_jacobian(system, q))
    for _ in range(max_iter):
        res = np.asarray(system(p), dtype=float)
        if res.size > free.size:
            raise ValueError("over-determined system: more equations than free unknowns")
        if np.linalg.norm(res, ord=np.inf) < tol:
            return p
        J = np.asarray(jac_fn(p), dtype=float)[:, free]
        s = np.linalg.svd(J, compute_uv=False)
        if s.size == 0 or s[0] == 0.0 or s[min(res.size, free.size) - 1] < SINGULAR_RATIO * s[0]:
            raise SingularJacobian(f"singular Jacobian at {p!r}")
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        p = p.copy()
        p[free] += step
        if not _in_box(p, box):
            raise DomainError(f"Newton iterate {p!r} left the box")
    raise MaxIterations(f"no convergence in {max_iter} iterations (residual {res!r})")


@dataclass
class Curve:
    """A traced solution chain.  ``points`` has one row per point."""

    points: np.ndarray
    closed: bool


def _tangent(J: np.ndarray, prev: Optional[np.ndarray]) -> np.ndarray:
    ns = null_space(J)
    if ns.shape[1] != 1:
        raise RankDeficientSeed("Jacobian null space is not one-dimensional")
    tau = ns[:, 0]
    if prev is not None and np.dot(tau, prev) < 0:
        tau = -tau
    return tau


def continue_curve(
    system: Callable,
    seed,
    step: float,
    max_points: int,
    box=None,
    jac: Optional[Callable] = None,
    seed_tol: float = 1e-6,
    residual_tol: float = 1e-8,
) -> Curve:
    """Pseudo-arclength predictor-corrector tracing of a 1-D solution set.

    ``system`` maps R^m -> R^(m-1).  Terminates on box exit, closure (return
    within step/2 of the seed after at least 10 points) or ``max_points``.
    """
    z0 = np.asarray(seed, dtype=float).copy()
    res = np.asarray(system(z0), dtype=float)
    if res.size != z0.size - 1:
        raise ValueError("system must have exactly one fewer equation than unknowns")
    if np.linalg.norm(res, ord=np.inf) > seed_tol:
        raise SeedNotOnCurve(f"seed residual {np.linalg.norm(res, np.inf):.3e}")
    jac_fn = jac if jac is not None else (lambda q: fd_jacobian(system, q))
    if numerical_rank(jac_fn(z0)) < z0.size - 1:
        raise RankDeficientSeed(f"Jacobian rank-deficient at seed {z0!r}")
    # polish the seed onto the curve (least-norm correction)
    try:
        z0 = newton_solve(system, z0, jac=jac_fn)
    except (SingularJacobian, MaxIterations):
        pass

    def march(direction: float):
        pts = []
        z = z0.copy()
        tau = _tangent(jac_fn(z), None) * direction
        while len(pts) < max_points:
            advanced = False
            h = step
            for _ in range(5):
                pred = z + h * tau
                tau_fixed = tau

                def corr(w):
                    return np.concatenate(
                        [np.asarray(system(w), dtype=float), [tau_fixed @ (w - pred)]]
                    )

                try:
                    znew = newton_solve(corr, pred, tol=residual_tol * 1e-2)
                    advanced = True
                    break
                except (SingularJacobian, MaxIterations, DomainError):
                    h *= 0.5
            if not advanced:
                return pts, False
            if not _in_box(znew, box):
                return pts, False
            pts.append(znew)
            if len(pts) >= 10 and np.linalg.norm(znew - z0) <= step / 2:
                return pts, True
            tau = _tangent(jac_fn(znew), tau)
            z = znew
        return pts, False

    fwd, closed = march(+1.0)
    if closed:
        points = [z0] + fwd
    else:
        bwd, closed_b = march(-1.0)
        if closed_b:
            points = [z0] + bwd
            closed = True
        else:
            points = list(reversed(bwd)) + [z0] + fwd
    return Curve(points=np.array(points), closed=closed)
