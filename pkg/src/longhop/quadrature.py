"""One-dimensional numerical integration used by the random-placement analytics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when an integral does not reach tolerance within the subdivision budget."""


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = "simpson"  # "simpson" or "gauss-legendre"
    abs_tolerance: float = 1e-10
    max_subdivisions: int = 20

    def __post_init__(self):
        if self.method not in ("simpson", "gauss-legendre"):
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if not self.abs_tolerance > 0:
            raise ValueError("abs_tolerance must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()

_MIN_DEPTH = 4
_GL_ORDER = 16


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Integrate a vectorized ``f`` over ``[a, b]``."""
    if b == a:
        return 0.0
    if quad.method == "simpson":
        return _adaptive_simpson(f, a, b, quad.abs_tolerance, quad.max_subdivisions)
    return _composite_gauss_legendre(f, a, b, quad.abs_tolerance, quad.max_subdivisions)


def _adaptive_simpson(f, a, b, tol, max_depth):
    # Each stack entry carries the endpoints, midpoint and their f values, so
    # every accepted interval costs two new evaluations.
    fa, fm, fb = (float(v) for v in f(np.array([a, 0.5 * (a + b), b])))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    parts = []
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = (float(v) for v in f(np.array([0.5 * (lo + mid), 0.5 * (mid + hi)])))
        left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi)
        delta = left + right - s
        if depth >= _MIN_DEPTH and abs(delta) <= 15.0 * eps:
            parts.append(left + right + delta / 15.0)
            continue
        if depth + 1 > max_depth:
            raise QuadratureError(
                f"Simpson did not converge on [{lo:g}, {hi:g}] within {max_depth} subdivision levels")
        stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
    return math.fsum(parts)


@lru_cache(maxsize=None)
def _gl_rule(order):
    return np.polynomial.legendre.leggauss(order)


def _composite_gauss_legendre(f, a, b, tol, max_levels):
    nodes, weights = _gl_rule(_GL_ORDER)

    def panels(k):
        edges = np.linspace(a, b, k + 1)
        half = 0.5 * np.diff(edges)
        centre = 0.5 * (edges[:-1] + edges[1:])
        x = (centre[:, None] + half[:, None] * nodes[None, :]).ravel()
        fx = np.asarray(f(x), dtype=float).reshape(k, -1)
        return math.fsum((half * (fx @ weights)).tolist())

    prev = panels(1)
    for level in range(1, max_levels + 1):
        cur = panels(2 ** level)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureError(f"Gauss-Legendre did not converge within {2 ** max_levels} panels")
