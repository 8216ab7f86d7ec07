"""Gauss hypergeometric function F(a,b;c;z) on z in [0,1).

The kernels of the closed-form linear solver need F(gamma,gamma;1;zeta) and
F(gamma+1,gamma+1;2;zeta) where the argument zeta always lies in [0,1) on
the light-cone domain, so plain power-series evaluation is the right tool:

    F(a,b;c;z) = sum_k (a)_k (b)_k / ((c)_k k!) z^k.

Terms are generated by the ratio recurrence and accumulated with Kahan
compensated summation; this keeps the exact lower bound F(a,a;c;z) >= 1
(all series terms are nonnegative squares there) from being spoiled by
rounding.  Truncation: once the term ratio has dropped below
rho = (1+z)/2 < 1, the remaining tail is bounded by |term|/(1-rho), and we
stop when that bound is below the requested absolute tolerance.  For z -> 1
convergence degrades like z^k; rather than continuing analytically we keep
a generous term budget and raise ConvergenceError beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "HypergeomQuery",
    "hyp2f1",
    "hyp2f1_grid",
    "hyp2f1_lower_bound_check",
]

DEFAULT_TOL = 1e-13
MAX_TERMS = 10**6


class ConvergenceError(RuntimeError):
    """Series did not meet the requested tolerance within the term budget."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


def _check_parameters(c: float, z: float) -> None:
    if c <= 0 and c == math.floor(c):
        raise ValueError(f"series pole: c = {c} is zero or a negative integer")
    if not 0.0 <= z < 1.0:
        raise ValueError(f"argument z = {z} outside [0, 1)")


def _settle_index(a: float, b: float, c: float) -> int:
    """Index past which the term ratio is monotone toward its limit z.

    The ratio of consecutive series terms is r(k)*z with
    r(k) = 1 + ((a+b-c-1)k + ab-c) / ((c+k)(1+k)); beyond the sign change of
    the linear numerator, r(k) approaches 1 monotonically, which makes the
    geometric tail bound safe.
    """
    settle = max(abs(a), abs(b), abs(c))
    slope = a + b - c - 1.0
    if slope != 0.0:
        settle = max(settle, (c - a * b) / slope)
    return int(settle) + 2


@dataclass(frozen=True)
class HypergeomQuery:
    """A single evaluation request with its truncation tolerance."""

    a: float
    b: float
    c: float
    z: float
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        _check_parameters(self.c, self.z)
        if self.tol <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tol}")

    def evaluate(self, max_terms: int = MAX_TERMS) -> float:
        return hyp2f1(self.a, self.b, self.c, self.z, tol=self.tol, max_terms=max_terms)


def hyp2f1(
    a: float,
    b: float,
    c: float,
    z: float,
    tol: float = DEFAULT_TOL,
    max_terms: int = MAX_TERMS,
) -> float:
    """Evaluate F(a,b;c;z) for z in [0,1) to absolute tolerance ``tol``."""
    _check_parameters(c, z)
    if tol <= 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    if z == 0.0:
        return 1.0

    rho = 0.5 * (1.0 + z)
    k_settle = _settle_index(a, b, c)

    total = 1.0
    comp = 0.0  # Kahan compensation
    term = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (1.0 + k)) * z
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k >= k_settle and abs(term) <= tol * (1.0 - rho):
            ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0))) * z
            if ratio <= rho:
                return total
    raise ConvergenceError(
        f"F({a},{b};{c};{z}) did not reach tol={tol} within {max_terms} terms",
        achieved=abs(term) / (1.0 - z),
    )


def hyp2f1_grid(
    a: float,
    b: float,
    c: float,
    z: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_terms: int = MAX_TERMS,
) -> np.ndarray:
    """Vectorized series evaluation over an array of arguments in [0,1).

    Same series, ratio test, and compensated summation as :func:`hyp2f1`,
    iterated on the whole array until every entry's tail bound is below
    ``tol``.
    """
    z = np.asarray(z, dtype=float)
    _check_parameters(c, float(np.max(z)) if z.size else 0.0)
    if z.size and float(np.min(z)) < 0.0:
        raise ValueError("argument array contains z < 0")

    total = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    rho = 0.5 * (1.0 + z)
    active = np.ones(z.shape, dtype=bool)
    k_settle = _settle_index(a, b, c)

    for k in range(max_terms):
        if not active.any():
            return total
        factor = (a + k) * (b + k) / ((c + k) * (1.0 + k))
        term = np.where(active, term * factor * z, term)
        y = np.where(active, term - comp, 0.0)
        t = total + y
        comp = np.where(active, (t - total) - y, comp)
        total = t
        if k >= k_settle:
            ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0))) * z
            done = (np.abs(term) <= tol * (1.0 - rho)) & (ratio <= rho)
            active &= ~done
    raise ConvergenceError(
        f"array evaluation of F({a},{b};{c};.) left {int(active.sum())} points "
        f"unconverged after {max_terms} terms",
        achieved=float(np.max(np.abs(term[active]) / (1.0 - z[active]))),
    )


def hyp2f1_lower_bound_check(
    a: float,
    c: float,
    zgrid: list[float] | np.ndarray,
    tol: float = DEFAULT_TOL,
) -> bool:
    """True iff F(a,a;c;z) >= 1 - tol for every z in the grid (needs c > 0)."""
    if c <= 0:
        raise ValueError(f"lower bound requires c > 0, got {c}")
    return all(hyp2f1(a, a, c, z, tol=tol) >= 1.0 - tol for z in zgrid)
