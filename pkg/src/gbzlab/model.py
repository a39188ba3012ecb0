"""Real-space Hamiltonian of the dissipative non-reciprocal SSH ring.

The ring consists of two SSH chains of ``n_cells`` unit cells each.  Chain I
carries on-site gain ``+i*epsilon``, chain II the matching loss
``-i*epsilon``, so the two junctions where the chains meet act as gain/loss
domain walls.  Intracell hopping is non-reciprocal (``t1 + gamma`` one way,
``t1 - gamma`` the other), intercell hopping is ``t2``, and the two
inter-chain bonds carry ``t_boundary`` (equal to ``t2`` for the closed ring,
``0`` for two open chains).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """All couplings of the ring model.

    Site ordering in state vectors is chain I cells 1..N (A then B site per
    cell) followed by chain II in the same order, so chain I occupies the
    first ``2 * n_cells`` entries.
    """

    t1: float
    t2: float = 1.0
    gamma: float = 0.0
    epsilon: float = 0.0
    t_boundary: float | None = None  # None means t2 (periodic ring)
    n_cells: int = 30

    def __post_init__(self):
        if self.t_boundary is None:
            object.__setattr__(self, "t_boundary", float(self.t2))
        for name in ("t1", "t2", "gamma", "epsilon", "t_boundary"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.t2 == 0.0:
            raise ValueError("t2 must be nonzero")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        object.__setattr__(self, "n_cells", int(self.n_cells))

    @property
    def dim(self) -> int:
        """Total number of sites (matrix dimension): 4 * n_cells."""
        return 4 * self.n_cells

    @property
    def is_periodic(self) -> bool:
        return self.t_boundary == self.t2

    def is_degenerate(self, tol: float = 1e-9) -> bool:
        """True on the |t1| = |gamma| lines where the two-root structure of
        the characteristic equation collapses."""
        scale = max(abs(self.t1), abs(self.gamma), 1.0)
        return abs(abs(self.t1) - abs(self.gamma)) < tol * scale

    def with_(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Dense complex Hamiltonian of the two-chain ring.

    Within a cell the A->B element is ``t1 + gamma`` and B->A is
    ``t1 - gamma``; intercell B<->A bonds are ``t2`` both ways; the diagonal
    is ``+i*epsilon`` on chain I and ``-i*epsilon`` on chain II; the two
    inter-chain bonds (chain-I cell N B-site <-> chain-II cell 1 A-site, and
    chain-II cell N B-site <-> chain-I cell 1 A-site) carry ``t_boundary``.
    """
    n = params.n_cells
    dim = 4 * n
    h = np.zeros((dim, dim), dtype=complex)
    for chain in range(2):
        offset = 2 * n * chain
        onsite = 1j * params.epsilon * (1.0 if chain == 0 else -1.0)
        for cell in range(n):
            a = offset + 2 * cell
            b = a + 1
            h[a, a] = onsite
            h[b, b] = onsite
            h[a, b] = params.t1 + params.gamma
            h[b, a] = params.t1 - params.gamma
            if cell + 1 < n:
                h[b, a + 2] = params.t2
                h[a + 2, b] = params.t2
    t = params.t_boundary
    h[2 * n - 1, 2 * n] = t
    h[2 * n, 2 * n - 1] = t
    h[dim - 1, 0] = t
    h[0, dim - 1] = t
    return h


def bloch_spectrum(params: ModelParams, k: float) -> tuple[complex, complex]:
    """Both branches of the translation-invariant dispersion at momentum k.

    Returns +/- sqrt((t1 + t2 cos k)^2 + (t2 sin k + i*gamma)^2).  Ignores
    epsilon and t_boundary; valid as the ring spectrum only for epsilon = 0
    and t_boundary = t2.
    """
    if not math.isfinite(k):
        raise ValueError("k must be finite")
    dx = params.t1 + params.t2 * math.cos(k)
    dy = params.t2 * math.sin(k) + 1j * params.gamma
    root = np.sqrt(complex(dx * dx + dy * dy))
    return complex(root), complex(-root)


def bloch_curve(params: ModelParams, n_k: int = 512) -> np.ndarray:
    """Both Bloch branches sampled on a uniform k grid (2 * n_k energies)."""
    ks = 2.0 * np.pi * np.arange(n_k) / n_k
    dx = params.t1 + params.t2 * np.cos(ks)
    dy = params.t2 * np.sin(ks) + 1j * params.gamma
    root = np.sqrt((dx * dx + dy * dy).astype(complex))
    return np.concatenate([root, -root])


def ring_momentum_grid(params: ModelParams) -> np.ndarray:
    """Quantized momenta of the 2N-cell ring: k_m = 2 pi m / (2 n_cells)."""
    two_n = 2 * params.n_cells
    return 2.0 * np.pi * np.arange(two_n) / two_n
