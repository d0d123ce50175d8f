"""Evaluable smooth scalar fields with first and second derivatives.

A field carries optional closed-form gradient/hessian closures; when absent,
central finite differences with relative step ``h = 1e-5`` are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, NonFiniteValue
from .expr import Expr

FD_STEP = 1e-5

Box = Tuple[Tuple[float, float], ...]


def _check_finite(value, point):
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue(f"non-finite field value at {np.asarray(point)!r}")
    return value


@dataclass(frozen=True)
class ScalarField:
    """A smooth function R^m -> R on a box, with derivatives.

    ``fn`` takes a length-m vector.  ``grad_fn``/``hess_fn`` are optional
    closed-form closures; finite differences are the fallback.
    """

    arity: int
    fn: Callable[[np.ndarray], float]
    grad_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    box: Optional[Box] = None

    @property
    def has_closed_form(self) -> bool:
        return self.grad_fn is not None

    def _steps(self, p: np.ndarray) -> np.ndarray:
        return FD_STEP * np.maximum(1.0, np.abs(p))

    def _check_box(self, p: np.ndarray, margin: np.ndarray | float = 0.0):
        if self.box is None:
            return
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        if np.any(p - margin < lo) or np.any(p + margin > hi):
            raise DomainError(f"point {p!r} (margin {margin!r}) exits the domain box")

    def value(self, point) -> float:
        p = np.asarray(point, dtype=float)
        self._check_box(p)
        v = float(self.fn(p))
        _check_finite(v, p)
        return v

    def grad(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        if self.grad_fn is not None:
            self._check_box(p)
            return np.asarray(_check_finite(self.grad_fn(p), p), dtype=float)
        h = self._steps(p)
        self._check_box(p, h)
        g = np.empty(self.arity)
        for i in range(self.arity):
            e = np.zeros(self.arity)
            e[i] = h[i]
            g[i] = (self.fn(p + e) - self.fn(p - e)) / (2 * h[i])
        return _check_finite(g, p)

    def hessian(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        if self.hess_fn is not None:
            self._check_box(p)
            return np.asarray(_check_finite(self.hess_fn(p), p), dtype=float)
        h = self._steps(p)
        self._check_box(p, h)
        m = self.arity
        H = np.empty((m, m))
        if self.grad_fn is not None:
            # differentiate the closed-form gradient once
            for i in range(m):
                e = np.zeros(m)
                e[i] = h[i]
                H[:, i] = (self.grad_fn(p + e) - self.grad_fn(p - e)) / (2 * h[i])
        else:
            f0 = self.fn(p)
            for i in range(m):
                ei = np.zeros(m)
                ei[i] = h[i]
                H[i, i] = (self.fn(p + ei) - 2 * f0 + self.fn(p - ei)) / h[i] ** 2
                for j in range(i + 1, m):
                    ej = np.zeros(m)
                    ej[j] = h[j]
                    H[i, j] = H[j, i] = (
                        self.fn(p + ei + ej)
                        - self.fn(p + ei - ej)
                        - self.fn(p - ei + ej)
                        + self.fn(p - ei - ej)
                    ) / (4 * h[i] * h[j])
        H = 0.5 * (H + H.T)
        return _check_finite(H, p)


def field_from_expr(
    e: Expr, var_order: Sequence[str], box: Optional[Box] = None
) -> ScalarField:
    """Build a field with exact symbolic first/second derivatives from an AST."""
    m = len(var_order)
    f = e.compile(var_order)
    grads = [e.diff(v) for v in var_order]
    gfns = [g.compile(var_order) for g in grads]
    hfns = [[grads[i].diff(v).compile(var_order) for v in var_order] for i in range(m)]

    def grad_fn(p):
        return np.array([g(p) for g in gfns], dtype=float)

    def hess_fn(p):
        H = np.array([[hij(p) for hij in row] for row in hfns], dtype=float)
        return 0.5 * (H + H.T)

    return ScalarField(arity=m, fn=lambda p: float(f(p)), grad_fn=grad_fn, hess_fn=hess_fn, box=box)


def field_from_callable(
    fn: Callable, arity: int, box: Optional[Box] = None
) -> ScalarField:
    """Finite-difference-backed field (no closed-form derivatives)."""
    return ScalarField(arity=arity, fn=lambda p: float(fn(p)), box=box)


def catalog() -> dict:
    """Named closed-form fields used by numerics-hygiene tests."""

    def mk(arity, fn, grad, hess=None):
        return ScalarField(arity=arity, fn=fn, grad_fn=grad, hess_fn=hess)

    entries = {
        "sin": mk(
            1,
            lambda p: math.sin(p[0]),
            lambda p: np.array([math.cos(p[0])]),
            lambda p: np.array([[-math.sin(p[0])]]),
        ),
        "cos": mk(
            1,
            lambda p: math.cos(p[0]),
            lambda p: np.array([-math.sin(p[0])]),
            lambda p: np.array([[-math.cos(p[0])]]),
        ),
        "gauss": mk(
            1,
            lambda p: math.exp(-p[0] ** 2),
            lambda p: np.array([-2 * p[0] * math.exp(-p[0] ** 2)]),
        ),
        "sin_sum": mk(
            2,
            lambda p: math.sin(p[0]) + math.cos(p[1]),
            lambda p: np.array([math.cos(p[0]), -math.sin(p[1])]),
        ),
    }
    return entries
