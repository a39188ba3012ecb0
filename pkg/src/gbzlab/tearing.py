"""Complete-tearing transition of the analytical spectrum.

The end-to-end closure gap of the upper-right spectral quadrant, traced by
the branch solvers' rotation angle, drops to zero exactly when the spectrum
is torn into four parts; the first dissipation value where it vanishes and
stays zero is the critical strength.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gbz
from .classify import analytic_phase_boundaries
from .model import ModelParams

DELTA_THETA = 2.0 * math.pi / 512.0
ZERO_THRESHOLD = 1e-6


@dataclass
class TearingScan:
    params_base: ModelParams
    epsilon_grid: list[float]
    delta_values: list[float] = field(default_factory=list)
    epsilon_star: float | None = None

    def __post_init__(self):
        grid = list(self.epsilon_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("epsilon grid must be strictly increasing")
        if self.delta_values and len(self.delta_values) != len(grid):
            raise ValueError("delta_values must match the epsilon grid length")


def _quadrant_energies(params: ModelParams, theta: float,
                       screen_tol: float = gbz.SCREEN_TOL) -> np.ndarray:
    """Accepted analytical energies in the open upper-right quadrant at one
    rotation angle (all four branch families)."""
    cands = []
    for chain in ("I", "II"):
        cands.extend(gbz.solve_equal_modulus_branch(params, chain, theta))
    for pair in ("outer", "inner"):
        cands.extend(gbz.solve_product_one_branch(params, pair, theta))
    accepted = gbz.screen_candidates(cands, tol=screen_tol)
    e = np.array([p.energy for p in accepted], dtype=complex)
    if len(e) == 0:
        return e
    return e[(e.real > 0.0) & (e.imag > 0.0)]


def _set_distance(a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def delta_gap(params: ModelParams, delta_theta: float = DELTA_THETA,
              zero_threshold: float = ZERO_THRESHOLD) -> float:
    """End-to-end closure gap of the upper-right spectral quadrant.

    Compares the accepted quadrant energies just after theta = 0 against
    those just before theta = 2 pi.  A finite probe angle leaves a drift of
    order |dE/dtheta| * 2 * delta_theta between the two samples even on a
    closed curve, so the probe-angle limit is taken by Richardson
    extrapolation over delta_theta, delta_theta/2, delta_theta/4; values
    below zero_threshold are reported as exactly 0.  Returns NaN
    (not-applicable) when a probe finds the quadrant empty.
    """
    raw = []
    for dth in (delta_theta, delta_theta / 2.0, delta_theta / 4.0):
        a = _quadrant_energies(params, dth)
        b = _quadrant_energies(params, 2.0 * math.pi - dth)
        if len(a) == 0 or len(b) == 0:
            return math.nan
        raw.append(_set_distance(a, b))
    d1, d2, d4 = raw
    extrapolated = max((d1 - 6.0 * d2 + 8.0 * d4) / 3.0, 0.0)
    return 0.0 if extrapolated < zero_threshold else extrapolated


def critical_epsilon(params_base: ModelParams, epsilon_grid,
                     zero_threshold: float = ZERO_THRESHOLD,
                     threads: int = 0) -> TearingScan:
    """Scan the closure gap over a dissipation grid and locate the smallest
    grid value from which it vanishes and stays zero."""
    grid = [float(e) for e in epsilon_grid]
    scan = TearingScan(params_base=params_base, epsilon_grid=grid)
    if not analytic_phase_boundaries(params_base).obc_topological:
        warnings.warn("parameters outside the open-chain topological region; "
                      "the closure gap may never vanish", stacklevel=2)

    def one(eps: float) -> float:
        return delta_gap(params_base.with_(epsilon=eps), zero_threshold=zero_threshold)

    if threads == 1 or len(grid) < 4:
        values = [one(e) for e in grid]
    else:
        workers = threads if threads > 0 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, grid))
    scan.delta_values = [float(v) for v in values]

    star = None
    below = [not math.isnan(v) and v < zero_threshold for v in values]
    for i in range(len(grid)):
        if all(below[i:]):
            star = grid[i]
            break
    scan.epsilon_star = star
    return scan
