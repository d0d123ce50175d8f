"""Generating families F(q, x): rank criteria, critical sets and the induced
Lagrangian / graph-like unfolding maps."""

from __future__ import annotations

import ast as _pyast
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import expr as ex
from .errors import ChartFailure, FamilyFileError, NotOnSigmaStar
from .fields import ScalarField, field_from_expr
from .linalg import RANK_EPS, null_space, numerical_rank
from .solve import newton_solve
from .errors import MaxIterations, SingularJacobian, DomainError

DEDUP_RADIUS = 1e-6
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class GeneratingFamily:
    """F(q, x) with k internal and n space variables."""

    k: int
    n: int
    field: ScalarField  # arity k + n, variable order (q1..qk, x1..xn)
    name: str = ""
    seeds: tuple = ()

    def point(self, q, x) -> np.ndarray:
        return np.concatenate([np.atleast_1d(np.asarray(q, float)), np.atleast_1d(np.asarray(x, float))])

    def value(self, q, x) -> float:
        return self.field.value(self.point(q, x))

    def grad_q(self, q, x) -> np.ndarray:
        return self.field.grad(self.point(q, x))[: self.k]

    def grad_x(self, q, x) -> np.ndarray:
        return self.field.grad(self.point(q, x))[self.k :]

    def hess(self, q, x) -> np.ndarray:
        return self.field.hessian(self.point(q, x))

    def hess_qq(self, q, x) -> np.ndarray:
        return self.hess(q, x)[: self.k, : self.k]

    def delta_jacobian(self, q, x) -> np.ndarray:
        """k x (k+n) Jacobian of (dF/dq1 .. dF/dqk)."""
        return self.hess(q, x)[: self.k, :]


@dataclass(frozen=True)
class GraphLikeFamily:
    """The big family F(q, x) - t (unit factor fixed to 1)."""

    base: GeneratingFamily

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    def value(self, q, x, t: float) -> float:
        return self.base.value(q, x) - t


@dataclass(frozen=True)
class CriticalPoint:
    q: np.ndarray
    x: np.ndarray
    residual: float
    hess_q_det: float
    corank: int


@dataclass(frozen=True)
class LagrangianSample:
    x: np.ndarray
    p: np.ndarray
    source: CriticalPoint


@dataclass(frozen=True)
class GraphLikeSample:
    x: np.ndarray
    t: float
    p: np.ndarray
    source: CriticalPoint


def morse_family_check(fam: GeneratingFamily, q, x, eps: float = RANK_EPS) -> dict:
    """Rank test of the k x (k+n) Jacobian of dF/dq; pass iff rank == k."""
    J = fam.delta_jacobian(q, x)
    r = numerical_rank(J, eps)
    return {"pass": r == fam.k, "rank": r}


def morse_hypersurface_check(fam: GeneratingFamily, q, x, eps: float = RANK_EPS) -> dict:
    """Rank test of the (k+1) x (k+n) Jacobian of (F, dF/dq); pass iff rank == k+1."""
    p = fam.point(q, x)
    J = np.vstack([fam.field.grad(p), fam.delta_jacobian(q, x)])
    r = numerical_rank(J, eps)
    return {"pass": r == fam.k + 1, "rank": r}


def nondegeneracy_check(
    gl: GraphLikeFamily, q, x, t: float, eps: float = RANK_EPS, tol: float = 1e-6
) -> bool:
    """Non-degeneracy of the big family at a point of its zero-critical set.

    Tests rank of [[0, dF/dx], [d2F/dq2, d2F/dxdq]] == k+1.
    """
    fam = gl.base
    if abs(gl.value(q, x, t)) > tol or np.linalg.norm(fam.grad_q(q, x), np.inf) > tol:
        raise NotOnSigmaStar(f"point (q={q!r}, x={x!r}, t={t!r}) not on the zero-critical set")
    top = np.concatenate([np.zeros(fam.k), fam.grad_x(q, x)])
    J = np.vstack([top, fam.delta_jacobian(q, x)])
    return numerical_rank(J, eps) == fam.k + 1


def solve_critical_set(
    fam: GeneratingFamily,
    x_grid: Sequence,
    q_seeds: Sequence,
    dedup: float = DEDUP_RADIUS,
    eps: float = RANK_EPS,
) -> List[CriticalPoint]:
    """Newton-solve dF/dq = 0 at each frozen grid x from each q seed.

    Non-converging seeds are skipped; duplicates within ``dedup`` merged.
    Output follows the deterministic grid order.
    """
    out: List[CriticalPoint] = []
    for x in x_grid:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        found: List[np.ndarray] = []
        for q0 in q_seeds:
            q0 = np.atleast_1d(np.asarray(q0, dtype=float))
            z0 = np.concatenate([q0, x])
            frozen = list(range(fam.k, fam.k + fam.n))

            def system(z):
                return fam.grad_q(z[: fam.k], z[fam.k :])

            try:
                z = newton_solve(system, z0, frozen=frozen)
            except (SingularJacobian, MaxIterations, DomainError):
                continue
            q = z[: fam.k]
            if any(np.linalg.norm(q - qf) < dedup for qf in found):
                continue
            found.append(q)
            H = fam.hess_qq(q, x)
            out.append(
                CriticalPoint(
                    q=q,
                    x=x,
                    residual=float(np.linalg.norm(fam.grad_q(q, x), np.inf)),
                    hess_q_det=float(np.linalg.det(H)),
                    corank=fam.k - numerical_rank(H, eps),
                )
            )
    return out


def shifted_family(fam: GeneratingFamily, t0: float) -> GeneratingFamily:
    """The family F - t0 (same variables); used to view a momentary slice of
    the graph-like family as a hypersurface family in its own right."""
    base = fam.field
    fld = ScalarField(
        arity=base.arity,
        fn=lambda p: base.fn(p) - t0,
        grad_fn=base.grad_fn,
        hess_fn=base.hess_fn,
        box=base.box,
    )
    return GeneratingFamily(k=fam.k, n=fam.n, field=fld, name=f"{fam.name}-shift", seeds=fam.seeds)


def lagrangian_map(fam: GeneratingFamily, cp: CriticalPoint) -> LagrangianSample:
    return LagrangianSample(x=cp.x, p=fam.grad_x(cp.q, cp.x), source=cp)


def legendrian_unfolding_map(gl: GraphLikeFamily, cp: CriticalPoint) -> GraphLikeSample:
    fam = gl.base
    return GraphLikeSample(
        x=cp.x, t=fam.value(cp.q, cp.x), p=fam.grad_x(cp.q, cp.x), source=cp
    )


def rank_diagnostics(gl: GraphLikeFamily, cp: CriticalPoint, eps: float = RANK_EPS) -> dict:
    """Ranks of the space/front projections and the least singular value of the
    cotangent projection, in an orthonormal chart of the critical set."""
    fam = gl.base
    k, n = fam.k, fam.n
    J = fam.delta_jacobian(cp.q, cp.x)
    V = null_space(J, eps)  # (k+n) x n tangent basis of C(F)
    if V.shape[1] != n:
        raise ChartFailure(
            f"critical set not a graph near (q={cp.q!r}, x={cp.x!r}): tangent dim {V.shape[1]}"
        )
    H = fam.hess(cp.q, cp.x)
    gradF = fam.field.grad(fam.point(cp.q, cp.x))
    d_space = np.hstack([np.zeros((n, k)), np.eye(n)]) @ V
    d_front = np.vstack([np.hstack([np.zeros((n, k)), np.eye(n)]), gradF]) @ V
    d_cotangent = np.vstack(
        [np.hstack([np.zeros((n, k)), np.eye(n)]), H[k:, :]]
    ) @ V
    sv = np.linalg.svd(d_cotangent, compute_uv=False)
    return {
        "space_proj_rank": numerical_rank(d_space, eps),
        "front_proj_rank": numerical_rank(d_front, eps),
        "immersion_sigma_min": float(sv[-1]),
    }


# ---------------------------------------------------------------------------
# Family files and the built-in catalog


def family_from_text(
    text: str,
    k: int,
    n: int,
    box=None,
    name: str = "",
    seeds: Sequence = (),
) -> GeneratingFamily:
    e = ex.parse_family(text, k, n)
    fld = field_from_expr(e, ex.family_variables(k, n), box=box)
    return GeneratingFamily(k=k, n=n, field=fld, name=name, seeds=tuple(np.atleast_1d(np.asarray(s, float)) for s in seeds))


def _parse_value(raw: str):
    raw = raw.strip()
    try:
        return _pyast.literal_eval(raw)
    except (ValueError, SyntaxError):
        return raw


def parse_family_file(text: str) -> dict:
    """Parse a key/value family file: k, n, expr, domain, seeds."""
    data = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FamilyFileError(f"line {lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        data[key.strip()] = _parse_value(raw)
    for req in ("k", "n", "expr"):
        if req not in data:
            raise FamilyFileError(f"missing required key {req!r}")
    return data


def family_from_file(path) -> GeneratingFamily:
    data = parse_family_file(Path(path).read_text())
    k, n = int(data["k"]), int(data["n"])
    box = data.get("domain")
    if box is not None:
        box = tuple((float(lo), float(hi)) for lo, hi in box)
        if len(box) != k + n:
            raise FamilyFileError("domain must list one [lo, hi] per variable (q first, then x)")
    seeds = data.get("seeds", [])
    return family_from_text(
        str(data["expr"]), k, n, box=box, name=str(data.get("name", Path(path).stem)), seeds=seeds
    )


def catalog() -> dict:
    """Built-in polynomial families used across tests and the verify command."""
    box3 = ((-4.0, 4.0), (-6.0, 6.0), (-6.0, 6.0))
    fams = {
        "fold": family_from_text(
            "q1^2 + x1*q1 + x2", 1, 2, box=box3, name="fold", seeds=[[-1.0], [0.0], [1.0]]
        ),
        "cusp": family_from_text(
            "q1^4 + x1*q1^2 + x2*q1", 1, 2, box=box3, name="cusp",
            seeds=[[-1.5], [-0.5], [0.0], [0.5], [1.5]],
        ),
    }
    return fams
