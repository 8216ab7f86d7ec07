"""Kernel functions of the closed-form 1D linear solver and their lower bounds.

Three kernels enter the solution formula (module :mod:`siwave.linear`):

    E(t,x;b,y)   weight of the source inside the Duhamel double integral,
    K1(t,x;y)    weight of the initial velocity data (E restricted to b=0),
    K0(t,x;y)    weight of the initial displacement (-d/db E at b=0).

All three are built from power factors and F(gamma,gamma;1;zeta) with
zeta = ((t-b)^2 - (y-x)^2) / ((t+b+2)^2 - (y-x)^2) in [0,1) on the
light-cone domain 0 <= b <= t, |y-x| <= t-b.  zeta is always computed in
the factored form ((t-b)+w)((t-b)-w) / ((t+b+2)+w)((t+b+2)-w) to avoid
cancellation near the light cone, where the hypergeometric argument must
stay accurate; points within 1e-12*(1+t) of the cone are accepted and
clamped onto it.

The solver's positivity arguments need the weighted minima of K1, E and
K0 + mu*K1; :func:`verify_kernel_lower_bounds` reports those minima over a
point sample (the hidden constants of the underlying estimates are never
explicit, so empirical minima are the checkable surrogate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypergeom import hyp2f1, hyp2f1_grid
from .params import ScaleInvariantParams

__all__ = [
    "KernelPoint",
    "KernelEval",
    "BoundReport",
    "kernel_E",
    "kernel_dbE_at_b0",
    "kernel_K0_K1",
    "verify_kernel_lower_bounds",
    "light_cone_sample",
]

#: Relative slack for accepting points on (or within rounding of) the cone.
CONE_SLACK = 1e-12


def _zeta(t: float, b: float, w: float) -> float:
    num = ((t - b) + w) * ((t - b) - w)
    den = ((t + b + 2.0) + w) * ((t + b + 2.0) - w)
    return max(0.0, num / den)


def _check_domain(t: float, b: float, w: float) -> None:
    slack = CONE_SLACK * (1.0 + t)
    if t < 0 or b < -slack or b > t + slack:
        raise ValueError(f"point outside light-cone domain: t={t}, b={b}")
    if abs(w) > (t - b) + slack:
        raise ValueError(
            f"point outside light-cone domain: |y-x|={abs(w)} > t-b={t - b}"
        )


@dataclass(frozen=True)
class KernelPoint:
    """A spacetime quadruple (t, x, b, y) inside the light-cone domain."""

    t: float
    x: float
    b: float
    y: float
    zeta: float = field(init=False)

    def __post_init__(self) -> None:
        _check_domain(self.t, self.b, self.y - self.x)
        object.__setattr__(self, "zeta", _zeta(self.t, self.b, self.y - self.x))


@dataclass(frozen=True)
class KernelEval:
    """Kernel values at one point; K0/K1 refer to the b=0 restriction."""

    E: float
    K0: float
    K1: float


def _E_scalar(params: ScaleInvariantParams, t: float, b: float, w: float) -> float:
    mu, gamma = params.mu, params.gamma
    den = ((t + b + 2.0) + w) * ((t + b + 2.0) - w)
    value = (1.0 + t) ** (-0.5 * mu + gamma) * (1.0 + b) ** (0.5 * mu + gamma) * den**-gamma
    if gamma != 0.0:
        value *= hyp2f1(gamma, gamma, 1.0, _zeta(t, b, w))
    return value


def kernel_E(params: ScaleInvariantParams, pt: KernelPoint) -> float:
    """Source kernel E at a light-cone point (positive whenever delta >= 0)."""
    return _E_scalar(params, pt.t, pt.b, pt.y - pt.x)


def kernel_dbE_at_b0(params: ScaleInvariantParams, t: float, x: float, y: float) -> float:
    """d/db E(t,x;b,y) at b=0, from the analytic expansion.

    The bracket combines three contributions: the derivative of the
    hypergeometric argument (an F(gamma+1,gamma+1;2;zeta) term), the
    derivative of the (1+b) power, and the derivative of the distance
    power.  No numerical differentiation is involved.
    """
    w = y - x
    _check_domain(t, 0.0, w)
    mu, gamma = params.mu, params.gamma
    if gamma == 0.0:
        return 0.5 * mu * (1.0 + t) ** (-0.5 * mu)
    den = ((t + 2.0) + w) * ((t + 2.0) - w)
    zeta = _zeta(t, 0.0, w)
    f1 = hyp2f1(gamma, gamma, 1.0, zeta)
    f2 = hyp2f1(gamma + 1.0, gamma + 1.0, 2.0, zeta)
    bracket = (
        4.0 * gamma**2 * (1.0 + t) * (w * w - t * (t + 2.0)) / (den * den) * f2
        + (0.5 * mu + gamma) * f1
        - 2.0 * gamma * (t + 2.0) / den * f1
    )
    return (1.0 + t) ** (-0.5 * mu + gamma) * den**-gamma * bracket


def kernel_K0_K1(params: ScaleInvariantParams, t: float, x: float, y: float) -> KernelEval:
    """Data kernels at (t,x;y): K1 = E(b=0) (shared code path), K0 = -dE/db|0."""
    w = y - x
    _check_domain(t, 0.0, w)
    e0 = _E_scalar(params, t, 0.0, w)
    return KernelEval(E=e0, K0=-kernel_dbE_at_b0(params, t, x, y), K1=e0)


@dataclass(frozen=True)
class BoundReport:
    """Empirical weighted minima of the kernel lower bounds over a sample.

    c_K1  = min K1 * (1+t)^(sigma/2)
    c_E   = min E * (1+t)^(sigma/2) * (1+b)^(-sigma/2)
    c_mix = min (K0 + mu*K1) * (1+t)^(sigma/2), only meaningful for
            delta >= 1 (None otherwise: the estimate is not available on
            the delta < 1 branch).
    """

    c_K1: float
    c_E: float
    c_mix: float | None
    n_points: int
    mu: float
    nu2: float
    sigma: float

    @property
    def all_positive(self) -> bool:
        minima = [self.c_K1, self.c_E] + ([self.c_mix] if self.c_mix is not None else [])
        return all(m > 0.0 for m in minima)


def verify_kernel_lower_bounds(
    params: ScaleInvariantParams, sample: list[KernelPoint]
) -> BoundReport:
    """Weighted kernel minima over a sample of light-cone points.

    K1 and the mixed combination are evaluated on each point's b=0
    projection (always inside the domain); E is evaluated at the full
    point.  The weights are folded into the power exponents before
    exponentiation, so minima that are identically 1 (e.g. mu=2, nu2=0)
    come out exactly 1 instead of multiplying nearly reciprocal powers.
    """
    if not sample:
        raise ValueError("empty kernel sample")
    t = np.array([pt.t for pt in sample])
    b = np.array([pt.b for pt in sample])
    w = np.array([pt.y - pt.x for pt in sample])
    mu, gamma, sig = params.mu, params.gamma, params.sigma
    e_t = -0.5 * mu + gamma + 0.5 * sig  # exponent of (1+t) after weighting

    den0 = ((t + 2.0) + w) * ((t + 2.0) - w)
    if gamma != 0.0:
        zeta0 = np.maximum(0.0, (t + w) * (t - w) / den0)
        f1 = hyp2f1_grid(gamma, gamma, 1.0, zeta0)
    else:
        f1 = np.ones_like(t)
    c_k1 = float(np.min((1.0 + t) ** e_t * den0**-gamma * f1))

    den = ((t + b + 2.0) + w) * ((t + b + 2.0) - w)
    e_weighted = (1.0 + t) ** e_t * (1.0 + b) ** (0.5 * mu + gamma - 0.5 * sig) * den**-gamma
    if gamma != 0.0:
        zeta = np.maximum(0.0, ((t - b) + w) * ((t - b) - w) / den)
        e_weighted = e_weighted * hyp2f1_grid(gamma, gamma, 1.0, zeta)
    c_e = float(np.min(e_weighted))

    c_mix = None
    if params.delta >= 1.0:
        # mu*K1 - dE/db|0, sharing the prefactor (1+t)^e_t * den0^-gamma
        combo = (mu - (0.5 * mu + gamma)) * f1
        if gamma != 0.0:
            f2 = hyp2f1_grid(gamma + 1.0, gamma + 1.0, 2.0, zeta0)
            combo = combo + 2.0 * gamma * (t + 2.0) / den0 * f1
            combo = combo - 4.0 * gamma**2 * (1.0 + t) * (w * w - t * (t + 2.0)) / (den0 * den0) * f2
        c_mix = float(np.min((1.0 + t) ** e_t * den0**-gamma * combo))
    return BoundReport(
        c_K1=c_k1,
        c_E=c_e,
        c_mix=c_mix,
        n_points=len(sample),
        mu=params.mu,
        nu2=params.nu2,
        sigma=sig,
    )


def light_cone_sample(
    t_max: float, n_t: int, n_b: int, n_y: int, t_min: float = 0.0, x: float = 0.0
) -> list[KernelPoint]:
    """Regular sample of the light-cone domain: n_t x n_b x n_y points.

    For each time t in (t_min, t_max], b runs over fractions of t and y
    over fractions of the remaining cone width t-b (interior fractions, so
    every point is strictly inside the domain).
    """
    points: list[KernelPoint] = []
    ts = np.linspace(t_min, t_max, n_t + 1)[1:]
    b_frac = np.linspace(0.0, 1.0, n_b + 2)[1:-1]
    y_frac = np.linspace(-1.0, 1.0, n_y + 2)[1:-1]
    for t in ts:
        for fb in b_frac:
            b = fb * t
            half_width = t - b
            for fy in y_frac:
                points.append(KernelPoint(t=t, x=x, b=b, y=x + fy * half_width))
    return points
