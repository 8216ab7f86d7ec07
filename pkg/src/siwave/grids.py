"""Uniform spacetime grids and sampled fields.

The x-interval [-x_max, x_max] must contain the full light cone of the data
(x_max >= R + t_max), so numerical boundaries never activate: solutions
with compactly supported data vanish identically near the grid edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["GridSpec", "SpacetimeField"]

#: Text format for CSV payloads: 17 significant digits round-trips binary64.
FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: spacing dx, time step cfl*dx, half-width x_max, horizon t_max."""

    dx: float
    cfl: float
    x_max: float
    t_max: float

    def __post_init__(self) -> None:
        if self.dx <= 0:
            raise ValueError(f"dx must be > 0, got {self.dx}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.x_max <= 0 or self.t_max <= 0:
            raise ValueError("x_max and t_max must be > 0")

    @property
    def dt(self) -> float:
        return self.cfl * self.dx

    def xs(self) -> np.ndarray:
        n_half = int(round(self.x_max / self.dx))
        return self.dx * np.arange(-n_half, n_half + 1)

    def n_steps(self) -> int:
        return math.ceil(self.t_max / self.dt - 1e-12)

    def validate_cone(self, R: float) -> None:
        """Check the domain contains the light cone of data with radius R."""
        if self.x_max < R + self.t_max:
            raise ValueError(
                f"x_max={self.x_max} < R+t_max={R + self.t_max}: "
                "light cone would reach the boundary"
            )


@dataclass
class SpacetimeField:
    """Sampled solution values and time derivative on (a subset of) grid rows.

    ``times`` lists the stored rows (they need not be every step when a
    storage stride is used); ``values`` and ``dvalues`` are (time x space)
    arrays.  Storage is truncated before any non-finite value, so all
    stored entries are finite.
    """

    grid: GridSpec
    times: np.ndarray
    values: np.ndarray
    dvalues: np.ndarray

    def __post_init__(self) -> None:
        xs = self.grid.xs()
        if self.values.shape != (len(self.times), len(xs)):
            raise ValueError(
                f"values shape {self.values.shape} inconsistent with "
                f"{len(self.times)} times x {len(xs)} nodes"
            )
        if self.dvalues.shape != self.values.shape:
            raise ValueError("dvalues shape differs from values shape")
        if not np.isfinite(self.values).all() or not np.isfinite(self.dvalues).all():
            raise ValueError("field contains non-finite entries")
        self._xs = xs

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    def interpolate(self, t: float, x: float) -> float:
        """Bilinear interpolation of u at an off-node point."""
        return self._interp(self.values, t, x)

    def interpolate_dt(self, t: float, x: float) -> float:
        """Bilinear interpolation of u_t at an off-node point."""
        return self._interp(self.dvalues, t, x)

    def _interp(self, array: np.ndarray, t: float, x: float) -> float:
        times, xs = self.times, self.xs
        if not (times[0] <= t <= times[-1]) or not (xs[0] <= x <= xs[-1]):
            raise ValueError(f"point (t={t}, x={x}) outside stored field")
        i = min(int(np.searchsorted(times, t, side="right")) - 1, len(times) - 2)
        i = max(i, 0)
        j = min(int(np.searchsorted(xs, x, side="right")) - 1, len(xs) - 2)
        j = max(j, 0)
        ft = (t - times[i]) / (times[i + 1] - times[i])
        fx = (x - xs[j]) / (xs[j + 1] - xs[j])
        return float(
            (1 - ft) * (1 - fx) * array[i, j]
            + (1 - ft) * fx * array[i, j + 1]
            + ft * (1 - fx) * array[i + 1, j]
            + ft * fx * array[i + 1, j + 1]
        )

    def to_csv(self, path: str) -> None:
        """Write rows `t,x,u,ut`, one per node, 17 significant digits."""
        xs = self.xs
        with open(path, "w", encoding="ascii") as handle:
            handle.write("t,x,u,ut\n")
            for i, t in enumerate(self.times):
                for j, x in enumerate(xs):
                    handle.write(
                        ",".join(
                            FLOAT_FMT % v
                            for v in (t, x, self.values[i, j], self.dvalues[i, j])
                        )
                        + "\n"
                    )
