"""Shared closed-form oracles for the solver tests.

The polynomial bump (1 - (x/R)^2)^4 has an elementary antiderivative, so
d'Alembert-type solutions built from it are evaluable without quadrature;
that keeps the oracles independent of the solver's integration path.
"""

import numpy as np

from siwave.profiles import CauchyProfile


def poly_bump(x: float, R: float = 1.0) -> float:
    s = x / R
    return (1.0 - s * s) ** 4 if abs(s) < 1.0 else 0.0


def poly_bump_derivative(x: float, R: float = 1.0) -> float:
    s = x / R
    if abs(s) >= 1.0:
        return 0.0
    return 4.0 * (1.0 - s * s) ** 3 * (-2.0 * s / R)


def poly_bump_antiderivative(x: float, R: float = 1.0) -> float:
    """Antiderivative of poly_bump vanishing at x = 0 (constant outside [-R, R])."""
    s = min(1.0, max(-1.0, x / R))
    return R * (s - 4 * s**3 / 3 + 6 * s**5 / 5 - 4 * s**7 / 7 + s**9 / 9)


def poly_bump_integral(lo: float, hi: float, R: float = 1.0) -> float:
    if hi <= lo:
        return 0.0
    return poly_bump_antiderivative(hi, R) - poly_bump_antiderivative(lo, R)


def poly_profile(R: float = 1.0, eps: float = 0.3, u0_zero: bool = False) -> CauchyProfile:
    u0 = (lambda x: 0.0) if u0_zero else (lambda x: poly_bump(x, R))
    d_u0 = (lambda x: 0.0) if u0_zero else (lambda x: poly_bump_derivative(x, R))
    return CauchyProfile(u0=u0, u1=lambda x: poly_bump(x, R), R=R, eps=eps, d_u0=d_u0)


def dalembert(t: float, x: float, eps: float, R: float = 1.0) -> float:
    """Free-wave solution with data (eps*poly_bump, eps*poly_bump)."""
    lo, hi = max(x - t, -R), min(x + t, R)
    return 0.5 * eps * (poly_bump(x + t, R) + poly_bump(x - t, R)) + 0.5 * eps * (
        poly_bump_integral(lo, hi, R)
    )


def transformed_mu2(t: float, x: float, eps: float, R: float = 1.0) -> float:
    """Solution for (mu, nu2) = (2, 0): free wave with data (u0, u0 + u1), over 1+t."""
    lo, hi = max(x - t, -R), min(x + t, R)
    free = 0.5 * eps * (poly_bump(x + t, R) + poly_bump(x - t, R)) + 0.5 * eps * 2.0 * (
        poly_bump_integral(lo, hi, R)
    )
    return free / (1.0 + t)


def cone_points(n: int, t_max: float, seed: int, R: float = 1.0) -> list[tuple[float, float]]:
    """Random points with t in (0, t_max] and x inside the data light cone."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        t = float(rng.uniform(0.0, t_max))
        x = float(rng.uniform(-(R + t), R + t))
        pts.append((t, x))
    return pts
