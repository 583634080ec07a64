"""Radial grids shared by the quadrature and finite-difference layers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError

MIN_POINTS = 64


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing, nonnegative radial abscissae.

    ``scheme`` is ``"uniform"`` (``step`` is the constant spacing) or
    ``"geometric"`` (``step`` is the ratio between consecutive intervals).
    """

    points: np.ndarray
    scheme: str
    step: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < MIN_POINTS:
            raise ContractError(f"grid needs at least {MIN_POINTS} points, got {pts.size}")
        if pts[0] < 0.0 or not np.all(np.diff(pts) > 0.0):
            raise ContractError("grid points must be nonnegative and strictly increasing")
        if self.scheme == "uniform":
            d = np.diff(pts)
            if np.max(np.abs(d - self.step)) > 1e-12 * max(pts[-1], 1.0):
                raise ContractError("uniform grid spacing is not constant")
        elif self.scheme != "geometric":
            raise ContractError(f"unknown grid scheme {self.scheme!r}")

    @classmethod
    def uniform(cls, r_min: float, r_max: float, spacing: float) -> "RadialGrid":
        """Uniform grid on [r_min, r_max] with spacing no larger than ``spacing``.

        The interval count is rounded up to an even number.
        """
        if not r_max > r_min >= 0.0 or spacing <= 0.0:
            raise ContractError("need 0 <= r_min < r_max and spacing > 0")
        n_int = int(np.ceil((r_max - r_min) / spacing - 1e-9))
        n_int = max(n_int, MIN_POINTS)
        n_int += n_int % 2
        pts = np.linspace(r_min, r_max, n_int + 1)
        return cls(pts, "uniform", (r_max - r_min) / n_int)

    @classmethod
    def geometric(cls, r_min: float, r_max: float, count: int) -> "RadialGrid":
        if not r_max > r_min > 0.0:
            raise ContractError("geometric grid needs 0 < r_min < r_max")
        pts = np.geomspace(r_min, r_max, count)
        return cls(pts, "geometric", (r_max / r_min) ** (1.0 / (count - 1)))

    @property
    def r_max(self) -> float:
        return float(self.points[-1])

    @property
    def r_min(self) -> float:
        return float(self.points[0])

    def __len__(self):
        return self.points.size
