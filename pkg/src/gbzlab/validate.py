"""Self-check suites cross-validating the numerical and analytical engines."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import gbz, spectral
from .model import ModelParams, bloch_spectrum, build_hamiltonian, ring_momentum_grid


def matched_distance(a, b) -> float:
    """Max pointwise distance of two equal-size complex multisets under the
    optimal assignment."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        raise ValueError(f"multiset sizes differ: {len(a)} vs {len(b)}")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance of two complex point sets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def directed_distance(a, b) -> float:
    """sup over a of the distance to the nearest point of b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.abs(a[:, None] - b[None, :]).min(axis=1).max())


def suite_bloch() -> tuple[bool, list[str]]:
    """Ring eigenvalues against the translation-invariant dispersion."""
    lines = []
    ok = True
    for t1, gamma in ((1.7, 1.6), (0.7, 2.0 / 3.0), (1.0, 0.0)):
        params = ModelParams(t1=t1, t2=1.0, gamma=gamma, epsilon=0.0, n_cells=30)
        values = np.linalg.eigvals(build_hamiltonian(params))
        reference = np.concatenate(
            [np.array(bloch_spectrum(params, k)) for k in ring_momentum_grid(params)]
        )
        dist = matched_distance(values, reference)
        good = dist <= 1e-8
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} bloch t1={t1} gamma={gamma:.4g}: "
                     f"max matched distance {dist:.3e} (tol 1e-08)")
    return ok, lines


def suite_determinant() -> tuple[bool, list[str]]:
    """Boundary condition against the finite ring and the 4x4 determinant."""
    lines = []
    ok = True
    params = ModelParams(t1=1.7, t2=1.0, gamma=1.6, epsilon=1.0, n_cells=8)
    values = np.linalg.eigvals(build_hamiltonian(params))
    res = [gbz.boundary_determinant_residual(complex(e), params) for e in values]
    good = max(res) <= 1e-6
    ok &= good
    lines.append(f"{'PASS' if good else 'FAIL'} determinant on-spectrum n_cells=8: "
                 f"max residual {max(res):.3e} (tol 1e-06)")

    rng = np.random.default_rng(20260810)
    probes = []
    bound = np.abs(values).max() + 0.5
    while len(probes) < 20:
        z = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
        if np.abs(values - z).min() >= 0.3:
            probes.append(z)
    off = [gbz.boundary_determinant_residual(z, params) for z in probes]
    good = min(off) >= 1e-2
    ok &= good
    lines.append(f"{'PASS' if good else 'FAIL'} determinant off-spectrum probes: "
                 f"min residual {min(off):.3e} (floor 1e-02)")

    small = params.with_(n_cells=2)
    worst = 0.0
    for _ in range(12):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        try:
            m = gbz.boundary_matrix(z, small)
        except ValueError:
            continue
        det = np.linalg.det(m) / small.t2 ** 4
        lhs, rhs, okm, scale, _ = gbz._boundary_terms_vec(np.array([z]), small)
        if not okm[0]:
            continue
        diff = complex((lhs[0] - rhs[0]) * scale[0])
        rel = abs(diff - det) / max(abs(det), 1e-12)
        worst = max(worst, rel)
    good = worst <= 1e-10
    ok &= good
    lines.append(f"{'PASS' if good else 'FAIL'} determinant vs product form at n_cells=2: "
                 f"worst relative mismatch {worst:.3e} (tol 1e-10)")
    return ok, lines


def suite_symmetry() -> tuple[bool, list[str]]:
    """Spectrum closed under E -> -E and E -> conj(E).

    Random parameters are drawn inside the regime where double-precision
    eigenvalues of these non-normal rings are still reliable (small rings,
    moderate nonreciprocity).
    """
    rng = np.random.default_rng(1771)
    lines = []
    ok = True
    worst_neg = worst_conj = 0.0
    for _ in range(10):
        t1 = rng.uniform(0.4, 2.2) * rng.choice([-1.0, 1.0])
        t2 = rng.uniform(0.6, 1.4)
        gamma = rng.uniform(0.0, 0.45) * abs(t1) * rng.choice([-1.0, 1.0])
        eps = rng.uniform(0.0, 1.2)
        tb = float(rng.choice([0.0, t2]))
        params = ModelParams(t1=t1, t2=t2, gamma=gamma, epsilon=eps,
                             t_boundary=tb, n_cells=int(rng.integers(4, 11)))
        pairs = spectral.eigendecompose(build_hamiltonian(params))
        values = np.array([p.energy for p in pairs])
        worst_neg = max(worst_neg, matched_distance(values, -values))
        worst_conj = max(worst_conj, matched_distance(values, np.conj(values)))
    good = worst_neg <= 1e-8 and worst_conj <= 1e-8
    ok &= good
    lines.append(f"{'PASS' if good else 'FAIL'} symmetry suite (10 draws): "
                 f"E->-E {worst_neg:.3e}, E->conj {worst_conj:.3e} (tol 1e-08)")
    return ok, lines


def suite_bz_limit() -> tuple[bool, list[str]]:
    """At zero dissipation every accepted GBZ point returns to the unit circle."""
    lines = []
    ok = True
    for t1, gamma in ((1.7, 1.6), (0.7, 2.0 / 3.0)):
        params = ModelParams(t1=t1, t2=1.0, gamma=gamma, epsilon=0.0, n_cells=30)
        curve = gbz.gbz_curve(params, theta_steps=512)
        betas = curve.beta_values()
        worst = float(np.abs(np.abs(betas) - 1.0).max()) if len(betas) else np.inf
        good = worst <= 1e-8
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} bz-limit t1={t1} gamma={gamma:.4g}: "
                     f"max ||beta|-1| = {worst:.3e} (tol 1e-08)")
    return ok, lines


SUITES = {
    "bloch": suite_bloch,
    "determinant": suite_determinant,
    "symmetry": suite_symmetry,
    "bz-limit": suite_bz_limit,
}
