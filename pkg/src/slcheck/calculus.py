"""Differential structure of subset polynomials.

For a multi-affine g the Hessian of log g on the positive orthant is

    H(x) = (g(x) * D2g(x) - grad g(x) grad g(x)^T) / g(x)^2,

where D2g has zero diagonal because no variable appears squared.  Log
concavity of g at x is the statement that H(x) is negative semidefinite,
equivalently that the polynomial matrix

    M = grad g grad g^T - g * D2g        (entries are polynomials)

is positive semidefinite at x, since M evaluated at x equals -g(x)^2 H(x).
`m_matrix` builds M once, exactly; certificates reason about its
coefficients, numeric checks evaluate it or H directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import (
    RationalLike,
    SparsePoly,
    SubsetPoly,
    as_fraction,
    check_point,
    sparse_from_subset,
)


def gradient(p: SubsetPoly, point: Sequence[float]) -> np.ndarray:
    """Float gradient of g_p at a point."""
    coords = check_point(point, p.n)
    return np.array([p.derivative(i + 1).eval(coords) for i in range(p.n)], dtype=float)


def hessian(p: SubsetPoly, point: Sequence[float]) -> np.ndarray:
    """Float Hessian of g_p itself.  The diagonal is identically zero."""
    coords = check_point(point, p.n)
    h = np.zeros((p.n, p.n), dtype=float)
    for i in range(p.n):
        for j in range(i + 1, p.n):
            v = p.derivative_subset((1 << i) | (1 << j)).eval(coords)
            h[i, j] = h[j, i] = v
    return h


def log_hessian(p: SubsetPoly, point: Sequence[float]) -> np.ndarray:
    """Hessian of log g_p at a strictly positive point where g_p > 0."""
    coords = check_point(point, p.n, positive=True)
    g = p.eval(coords)
    if not g > 0.0:
        raise ValueError(f"polynomial evaluates to {g} at {coords}; log requires a positive value")
    grad = gradient(p, coords)
    h = hessian(p, coords)
    out = np.empty((p.n, p.n), dtype=float)
    for i in range(p.n):
        for j in range(i, p.n):
            v = (g * h[i, j] - grad[i] * grad[j]) / (g * g)
            out[i, j] = out[j, i] = v
    return out


@dataclass(frozen=True)
class SymbolicMatrix:
    """Symmetric matrix of SparsePoly entries, stored densely."""

    n: int
    rows: tuple[tuple[SparsePoly, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise ValueError("rows do not form an n-by-n matrix")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError(f"symbolic matrix is not symmetric at ({i}, {j})")

    def entry(self, i: int, j: int) -> SparsePoly:
        return self.rows[i][j]

    def scaled(self, factor: RationalLike) -> SymbolicMatrix:
        f = as_fraction(factor)
        return SymbolicMatrix(self.n, tuple(tuple(e * f for e in row) for row in self.rows))

    def eval_exact(self, point: Sequence[RationalLike]) -> list[list[Fraction]]:
        return [[e.eval_exact(point) for e in row] for row in self.rows]

    def eval_float(self, point: Sequence[float]) -> np.ndarray:
        return np.array([[e.eval(point) for e in row] for row in self.rows], dtype=float)


def m_matrix(p: SubsetPoly) -> SymbolicMatrix:
    """The polynomial matrix grad g grad g^T - g * D2g, exactly.

    Positive semidefiniteness of this matrix at a positive point is
    equivalent to negative semidefiniteness of the log-Hessian there.
    Diagonal entries reduce to squared first derivatives.
    """
    g = sparse_from_subset(p)
    grads = [sparse_from_subset(p.derivative(i + 1)) for i in range(p.n)]
    rows: list[list[SparsePoly]] = [[None] * p.n for _ in range(p.n)]  # type: ignore[list-item]
    for i in range(p.n):
        for j in range(i, p.n):
            entry = grads[i] * grads[j]
            if i != j:
                gij = sparse_from_subset(p.derivative_subset((1 << i) | (1 << j)))
                entry = entry - g * gij
            rows[i][j] = rows[j][i] = entry
    return SymbolicMatrix(p.n, tuple(tuple(row) for row in rows))


# ----- batch float evaluation ----------------------------------------------
#
# The sampling checkers test thousands of points per polynomial; evaluating
# point by point in Python would dominate the runtime, so these helpers take
# an (N, n) array of points at once.


def eval_many(p: SubsetPoly, points: np.ndarray) -> np.ndarray:
    """Evaluate g_p at every row of an (N, n) float array."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != p.n:
        raise ValueError(f"expected an (N, {p.n}) point array, got shape {pts.shape}")
    total = np.zeros(pts.shape[0], dtype=float)
    for mask, c in enumerate(p.coeffs):
        if c == 0:
            continue
        term = np.full(pts.shape[0], float(c))
        m = mask
        k = 0
        while m:
            if m & 1:
                term = term * pts[:, k]
            m >>= 1
            k += 1
        total += term
    return total


def log_hessian_many(p: SubsetPoly, points: np.ndarray) -> np.ndarray:
    """Hessians of log g_p at every row of an (N, n) array of positive points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != p.n:
        raise ValueError(f"expected an (N, {p.n}) point array, got shape {pts.shape}")
    if np.any(pts <= 0.0) or not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite and strictly positive")
    g = eval_many(p, pts)
    if np.any(g <= 0.0):
        raise ValueError("polynomial is not positive at every sample point")
    n = p.n
    count = pts.shape[0]
    grads = np.stack([eval_many(p.derivative(i + 1), pts) for i in range(n)], axis=1)
    out = np.empty((count, n, n), dtype=float)
    gg = g * g
    for i in range(n):
        out[:, i, i] = -(grads[:, i] * grads[:, i]) / gg
        for j in range(i + 1, n):
            hij = eval_many(p.derivative_subset((1 << i) | (1 << j)), pts)
            v = (g * hij - grads[:, i] * grads[:, j]) / gg
            out[:, i, j] = v
            out[:, j, i] = v
    return out
