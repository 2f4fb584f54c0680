"""Random network topologies: one UE plus Poisson-distributed mmWave SCells."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SimArea:
    """Rectangular simulation region, dimensions in km."""

    width_km: float
    height_km: float

    def __post_init__(self):
        if self.width_km <= 0 or self.height_km <= 0:
            raise ValueError("SimArea dimensions must be positive")

    @property
    def area_km2(self) -> float:
        return self.width_km * self.height_km

    @property
    def width_m(self) -> float:
        return self.width_km * 1e3

    @property
    def height_m(self) -> float:
        return self.height_km * 1e3


@dataclass
class Deployment:
    """One UE and M SCells; positions in meters, SCell IDs 1..M."""

    ue_position: np.ndarray            # shape (2,)
    scell_positions: np.ndarray        # shape (M, 2)
    scell_ids: tuple[int, ...] = field(default=())

    @property
    def n_scells(self) -> int:
        return len(self.scell_ids)

    def scell_distances_m(self) -> np.ndarray:
        """UE-to-SCell distance for every cell, in meters."""
        if self.n_scells == 0:
            return np.zeros(0)
        return np.linalg.norm(self.scell_positions - self.ue_position, axis=1)


def sample_deployment(rng: np.random.Generator, lambda_bs: float, area: SimArea) -> Deployment:
    """Draw a deployment: SCell count ~ Poisson(lambda_bs * A), positions uniform.

    lambda_bs is the cell density per km^2.  The UE is also placed uniformly
    at random in the area.  Pure function of (rng state, lambda_bs, area).
    """
    if lambda_bs < 0:
        raise ValueError("lambda_bs must be >= 0")
    m = int(rng.poisson(lambda_bs * area.area_km2))
    ue = rng.uniform((0.0, 0.0), (area.width_m, area.height_m))
    cells = rng.uniform((0.0, 0.0), (area.width_m, area.height_m), size=(m, 2))
    return Deployment(ue_position=ue, scell_positions=cells,
                      scell_ids=tuple(range(1, m + 1)))


def distance_m(p, q) -> float:
    """Euclidean distance between two 2-D points in meters."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.hypot(dx, dy)
