"""Generalized-Brillouin-zone machinery for the dissipative SSH ring.

Solves the two chains' characteristic equations, enumerates the four GBZ
branch families (equal-modulus within one chain, unit product across the
chains), screens candidates with the modulus-ordering conditions, and
assembles the analytical curve C_beta together with the analytical energy
spectrum.  Also evaluates the finite-ring boundary determinant in a
power-balanced form, which doubles as a stable root equation for polishing
finite-size eigenvalues far beyond what dense double-precision
diagonalization resolves in strongly non-normal regimes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams

BRANCHES = ("eqmod_I", "eqmod_II", "prod_outer", "prod_inner")

CHAR_RESIDUAL_TOL = 1e-9
UNSQUARED_TOL = 1e-8
SCREEN_TOL = 1e-9
DEDUP_TOL = 1e-9


class DegenerateModelError(ValueError):
    """Raised on the |t1| = |gamma| lines where a characteristic-equation
    coefficient vanishes and the two-root structure collapses."""


@dataclass(frozen=True)
class CharacteristicCoeffs:
    """Coefficients of b*beta^2 + (c - E_shifted^2)*beta + a = 0."""

    a: float  # t2 * (t1 - gamma)
    b: float  # t2 * (t1 + gamma)
    c: float  # t1^2 - gamma^2 + t2^2

    @classmethod
    def from_params(cls, params: ModelParams) -> "CharacteristicCoeffs":
        return cls(
            a=params.t2 * (params.t1 - params.gamma),
            b=params.t2 * (params.t1 + params.gamma),
            c=params.t1 ** 2 - params.gamma ** 2 + params.t2 ** 2,
        )

    def require_nondegenerate(self) -> None:
        scale = max(abs(self.a), abs(self.b), 1.0)
        if abs(self.b) < 1e-12 * scale:
            raise DegenerateModelError(
                f"quadratic coefficient b = t2*(t1+gamma) = {self.b:g} vanishes"
            )

    def f(self, beta):
        """Right-hand side of the characteristic equation, f(beta) = E_shifted^2."""
        beta = np.asarray(beta, dtype=complex)
        return self.c + self.a / beta + self.b * beta


def _roots_vec(coeffs: CharacteristicCoeffs, e2):
    """Both roots of b x^2 + (c - e2) x + a = 0 for an array of e2 values,
    ordered by (modulus, principal argument)."""
    e2 = np.asarray(e2, dtype=complex)
    bq = coeffs.c - e2
    disc = np.sqrt(bq * bq - 4.0 * coeffs.a * coeffs.b)
    disc = np.where((np.conj(bq) * disc).real < 0.0, -disc, disc)
    q = -(bq + disc) / 2.0
    tiny = np.abs(q) < 1e-300
    q_safe = np.where(tiny, 1.0, q)
    r1 = np.where(tiny, 0.0, q_safe / coeffs.b)
    r2 = np.where(tiny, -bq / coeffs.b, coeffs.a / q_safe)
    m1, m2 = np.abs(r1), np.abs(r2)
    swap = (m1 > m2) | ((m1 == m2) & (np.angle(r1) > np.angle(r2)))
    small = np.where(swap, r2, r1)
    large = np.where(swap, r1, r2)
    return small, large


def characteristic_roots(e_shifted: complex, coeffs: CharacteristicCoeffs) -> tuple[complex, complex]:
    """Roots (beta1, beta2) with |beta1| <= |beta2| of the characteristic
    quadratic at shifted energy e_shifted; ties broken by smaller principal
    argument."""
    coeffs.require_nondegenerate()
    small, large = _roots_vec(coeffs, np.array([complex(e_shifted) ** 2]))
    return complex(small[0]), complex(large[0])


def obc_reference_modulus(params: ModelParams) -> float:
    """GBZ radius sqrt(|t1 - gamma| / |t1 + gamma|) of one open chain."""
    if params.is_degenerate():
        raise DegenerateModelError("|t1| = |gamma|: open-chain GBZ radius is 0 or infinite")
    return float(np.sqrt(abs(params.t1 - params.gamma) / abs(params.t1 + params.gamma)))


@dataclass(frozen=True)
class GbzPoint:
    """One candidate or accepted GBZ solution.

    betas holds (beta^I_1, beta^I_2, beta^II_1, beta^II_2) with
    |beta^X_1| <= |beta^X_2| per chain; g holds the pair-product moduli
    (g1, g2, g3, g4) = (|bI2*bII2|, |bI2*bII1|, |bI1*bII2|, |bI1*bII1|).
    """

    branch: str
    theta: float
    energy: complex
    betas: tuple[complex, complex, complex, complex]
    g: tuple[float, float, float, float]

    def defining_betas(self) -> tuple[complex, complex]:
        """The pair of beta values that realizes the branch condition."""
        b11, b12, b21, b22 = self.betas
        if self.branch == "eqmod_I":
            return (b11, b12)
        if self.branch == "eqmod_II":
            return (b21, b22)
        if self.branch == "prod_outer":
            return (b12, b22)
        if self.branch == "prod_inner":
            return (b11, b21)
        raise ValueError(f"unknown branch {self.branch!r}")

    def characteristic_residual(self, params: ModelParams) -> float:
        """Worst residual of b*beta^2 + (c - E_shifted^2)*beta + a over the
        four stored roots, relative to the coefficient scale."""
        co = CharacteristicCoeffs.from_params(params)
        worst = 0.0
        for beta, shift in zip(self.betas, (-1, -1, +1, +1)):
            e_sh = self.energy + shift * 1j * params.epsilon
            val = co.b * beta * beta + (co.c - e_sh ** 2) * beta + co.a
            scale = max(abs(co.a), abs(co.b), abs(co.c - e_sh ** 2), 1.0)
            worst = max(worst, abs(val) / scale)
        return worst


def _g_values(b11, b12, b21, b22):
    return (np.abs(b12 * b22), np.abs(b12 * b21), np.abs(b11 * b22), np.abs(b11 * b21))


def _screen_mask(branch: str, g1, g2, g3, g4, tol: float):
    if branch == "eqmod_II":
        return (g1 >= g2 - tol) & (g2 >= 1.0 - tol) & (g3 <= 1.0 + tol) & (g4 <= g3 + tol)
    if branch == "eqmod_I":
        return (g1 >= g3 - tol) & (g3 >= 1.0 - tol) & (g2 <= 1.0 + tol) & (g4 <= g2 + tol)
    if branch == "prod_outer":
        return (np.abs(g1 - 1.0) <= tol) & (g2 <= 1.0 + tol) & (g3 <= 1.0 + tol) & (g4 <= 1.0 + tol)
    if branch == "prod_inner":
        return (np.abs(g4 - 1.0) <= tol) & (g1 >= 1.0 - tol) & (g2 >= 1.0 - tol) & (g3 >= 1.0 - tol)
    raise ValueError(f"unknown branch {branch!r}")


def screen_candidates(candidates: list[GbzPoint], tol: float = SCREEN_TOL) -> list[GbzPoint]:
    """Keep candidates whose branch's modulus-ordering chain holds within tol."""
    kept = []
    for cand in candidates:
        g1, g2, g3, g4 = cand.g
        if bool(_screen_mask(cand.branch, *(np.array([v]) for v in (g1, g2, g3, g4)), tol=tol)[0]):
            kept.append(cand)
    return kept


def _four_betas_vec(coeffs: CharacteristicCoeffs, energies, epsilon: float):
    e = np.asarray(energies, dtype=complex)
    b11, b12 = _roots_vec(coeffs, (e - 1j * epsilon) ** 2)
    b21, b22 = _roots_vec(coeffs, (e + 1j * epsilon) ** 2)
    return b11, b12, b21, b22


def _eqmod_arrays(params: ModelParams, chain: str, thetas: np.ndarray):
    """Unscreened equal-modulus candidates, vectorized over theta.

    Setting beta' = beta*e^{i theta} in f(beta) = f(beta') gives
    beta^2 = (a/b) e^{-i theta}; both square roots are enumerated, and for
    each the two energy branches E = +/-sqrt(f(beta)) shifted by +i*epsilon
    (chain I) or -i*epsilon (chain II).
    """
    co = CharacteristicCoeffs.from_params(params)
    co.require_nondegenerate()
    if params.is_degenerate():
        return None
    base = np.sqrt((co.a / co.b) * np.exp(-1j * thetas).astype(complex))
    beta = np.concatenate([base, -base])
    th = np.tile(thetas, 2)
    sq = np.sqrt(co.f(beta))
    shift = 1j * params.epsilon if chain == "I" else -1j * params.epsilon
    energies = np.concatenate([shift + sq, shift - sq])
    th = np.tile(th, 2)
    b11, b12, b21, b22 = _four_betas_vec(co, energies, params.epsilon)
    g = _g_values(b11, b12, b21, b22)
    return dict(theta=th, energy=energies, betas=(b11, b12, b21, b22), g=g)


def _quartic_roots_stacked(p):
    """Roots of monic-normalized quartics given stacked coefficient rows
    (n, 5), highest order first.  Rows with a degenerate leading coefficient
    fall back to the lower-degree polynomial."""
    n = p.shape[0]
    roots = np.full((n, 4), np.nan + 0j, dtype=complex)
    scale = np.max(np.abs(p), axis=1)
    ok = np.abs(p[:, 0]) >= 1e-14 * np.maximum(scale, 1.0)
    if np.any(ok):
        pn = p[ok] / p[ok, :1]
        comp = np.zeros((pn.shape[0], 4, 4), dtype=complex)
        comp[:, 1, 0] = 1.0
        comp[:, 2, 1] = 1.0
        comp[:, 3, 2] = 1.0
        comp[:, 0, :] = -pn[:, 1:]
        roots[ok] = np.linalg.eigvals(comp)
    for i in np.where(~ok)[0]:
        rr = np.roots(p[i])
        roots[i, : len(rr)] = rr
    return roots


def _product_arrays(params: ModelParams, thetas: np.ndarray,
                    unsquared_tol: float = UNSQUARED_TOL):
    """Unscreened unit-product candidates, vectorized over theta.

    Substituting beta_other = e^{i theta}/beta into the two-branch energy
    equality i*eps + s1*sqrt(f(beta)) = -i*eps + s2*sqrt(f(beta_other)) and
    squaring twice gives the quartic Q(beta)^2 + 16 eps^2 (b beta^3 +
    c beta^2 + a beta) = 0 with Q = (a e^{-i theta} - b) beta^2 +
    4 eps^2 beta + (b e^{i theta} - a).  Each root is kept only when some
    sign combination of the original unsquared equation has a small
    residual; surviving roots yield E and all four betas.  The pairing
    attribute says whether the constructed unit product joins the two larger
    roots (outer), the two smaller ones (inner), or is mixed.
    """
    co = CharacteristicCoeffs.from_params(params)
    co.require_nondegenerate()
    if params.is_degenerate():
        return None
    eps = params.epsilon
    n = len(thetas)
    if eps == 0.0:
        half = np.exp(0.5j * thetas)
        roots = np.stack([half, -half], axis=1)
    else:
        q2 = co.a * np.exp(-1j * thetas) - co.b
        q1 = 4.0 * eps * eps
        q0 = co.b * np.exp(1j * thetas) - co.a
        p = np.stack(
            [
                q2 * q2,
                2.0 * q2 * q1 + 16.0 * eps ** 2 * co.b,
                q1 * q1 + 2.0 * q2 * q0 + 16.0 * eps ** 2 * co.c,
                2.0 * q1 * q0 + 16.0 * eps ** 2 * co.a,
                q0 * q0,
            ],
            axis=1,
        )
        roots = _quartic_roots_stacked(p)

    th = np.repeat(thetas, roots.shape[1])
    beta = roots.reshape(-1)
    good = np.isfinite(beta) & (np.abs(beta) > 1e-300)
    th, beta = th[good], beta[good]

    u = np.sqrt(co.f(beta))
    partner = np.exp(1j * th) / beta
    v = np.sqrt(co.f(partner))
    tol = unsquared_tol * max(1.0, 2.0 * abs(eps))

    out = {"theta": [], "energy": [], "beta": [], "partner": []}
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            resid = np.abs(2j * eps + s1 * u - s2 * v)
            mask = resid < tol
            if np.any(mask):
                out["theta"].append(th[mask])
                out["energy"].append(1j * eps + s1 * u[mask])
                out["beta"].append(beta[mask])
                out["partner"].append(partner[mask])
    if not out["theta"]:
        return dict(theta=np.empty(0), energy=np.empty(0, complex),
                    betas=tuple(np.empty(0, complex) for _ in range(4)),
                    g=tuple(np.empty(0) for _ in range(4)),
                    pairing=np.empty(0, dtype="U5"))
    th = np.concatenate(out["theta"])
    energies = np.concatenate(out["energy"])
    beta = np.concatenate(out["beta"])
    partner = np.concatenate(out["partner"])

    b11, b12, b21, b22 = _four_betas_vec(co, energies, eps)
    near_large_i = np.abs(beta - b12) <= np.abs(beta - b11)
    near_large_ii = np.abs(partner - b22) <= np.abs(partner - b21)
    pairing = np.where(near_large_i & near_large_ii, "outer",
                       np.where(~near_large_i & ~near_large_ii, "inner", "mixed"))
    g = _g_values(b11, b12, b21, b22)
    return dict(theta=th, energy=energies, betas=(b11, b12, b21, b22), g=g, pairing=pairing)


def _points_from_arrays(branch: str, arrays, mask) -> list[GbzPoint]:
    idx = np.where(mask)[0]
    b11, b12, b21, b22 = arrays["betas"]
    g1, g2, g3, g4 = arrays["g"]
    return [
        GbzPoint(
            branch=branch,
            theta=float(arrays["theta"][i]),
            energy=complex(arrays["energy"][i]),
            betas=(complex(b11[i]), complex(b12[i]), complex(b21[i]), complex(b22[i])),
            g=(float(g1[i]), float(g2[i]), float(g3[i]), float(g4[i])),
        )
        for i in idx
    ]


def solve_equal_modulus_branch(params: ModelParams, chain: str, theta: float) -> list[GbzPoint]:
    """Unscreened candidates of the equal-modulus branch of one chain at one
    rotation angle theta.  Every candidate has |beta(chain)| equal to the
    open-chain GBZ radius.  Empty with a degenerate model."""
    if chain not in ("I", "II"):
        raise ValueError("chain must be 'I' or 'II'")
    arrays = _eqmod_arrays(params, chain, np.array([float(theta)]))
    if arrays is None:
        return []
    branch = "eqmod_I" if chain == "I" else "eqmod_II"
    return _points_from_arrays(branch, arrays, np.ones(len(arrays["theta"]), bool))


def solve_product_one_branch(params: ModelParams, pair: str, theta: float) -> list[GbzPoint]:
    """Unscreened candidates whose constructed unit product matches the
    requested pair role ('outer' joins the two larger roots, 'inner' the two
    smaller).  Roots of the squared quartic that fail the unsquared-equation
    residual filter, and mixed pairings, are dropped."""
    if pair not in ("outer", "inner"):
        raise ValueError("pair must be 'outer' or 'inner'")
    arrays = _product_arrays(params, np.array([float(theta)]))
    if arrays is None:
        return []
    mask = arrays["pairing"] == pair
    return _points_from_arrays("prod_" + pair, arrays, mask)


@dataclass
class GbzCurve:
    """Accepted GBZ solutions over a theta grid."""

    points: list[GbzPoint]
    theta_steps: int

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.points], dtype=complex)

    def beta_cloud(self) -> list[tuple[complex, str, float]]:
        """C_beta: both defining betas of every accepted point, with branch
        provenance and theta."""
        cloud = []
        for p in self.points:
            for beta in p.defining_betas():
                cloud.append((beta, p.branch, p.theta))
        return cloud

    def beta_values(self) -> np.ndarray:
        return np.array([b for (b, _, _) in self.beta_cloud()], dtype=complex)

    def branch_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for p in self.points:
            counts[p.branch] = counts.get(p.branch, 0) + 1
        return counts


def _dedup_points(points: list[GbzPoint], tol: float) -> list[GbzPoint]:
    """Drop points within tol of an earlier point in both E and all betas;
    the earlier point (deterministic branch-then-theta order) is kept."""
    if not points:
        return points
    e = np.array([p.energy for p in points])
    betas = np.array([p.betas for p in points])
    order = np.argsort(e.real, kind="stable")
    keep = np.ones(len(points), dtype=bool)
    sorted_idx = list(order)
    for pos, i in enumerate(sorted_idx):
        if not keep[i]:
            continue
        for j in sorted_idx[pos + 1:]:
            if e[j].real - e[i].real > tol:
                break
            if not keep[j]:
                continue
            if abs(e[j] - e[i]) <= tol and np.all(np.abs(betas[j] - betas[i]) <= tol):
                # keep whichever comes first in candidate order
                if j > i:
                    keep[j] = False
                else:
                    keep[i] = False
                    break
    return [p for p, k in zip(points, keep) if k]


def gbz_curve(params: ModelParams, theta_steps: int = 512,
              screen_tol: float = SCREEN_TOL, dedup_tol: float = DEDUP_TOL) -> GbzCurve:
    """Run all four branch solvers over a uniform theta grid, screen with the
    modulus-ordering conditions, and deduplicate overlapping points."""
    if theta_steps < 64:
        raise ValueError("theta_steps must be >= 64")
    if params.is_degenerate():
        raise DegenerateModelError("|t1| = |gamma|: GBZ branch solvers are undefined")
    thetas = 2.0 * np.pi * np.arange(theta_steps) / theta_steps
    points: list[GbzPoint] = []
    for chain, branch in (("I", "eqmod_I"), ("II", "eqmod_II")):
        arrays = _eqmod_arrays(params, chain, thetas)
        mask = _screen_mask(branch, *arrays["g"], tol=screen_tol)
        points.extend(_points_from_arrays(branch, arrays, mask))
    arrays = _product_arrays(params, thetas)
    for pair, branch in (("outer", "prod_outer"), ("inner", "prod_inner")):
        if len(arrays["theta"]) == 0:
            continue
        mask = (arrays["pairing"] == pair) & _screen_mask(branch, *arrays["g"], tol=screen_tol)
        points.extend(_points_from_arrays(branch, arrays, mask))
    points = _dedup_points(points, dedup_tol)
    if not points and params.epsilon > 0:
        raise RuntimeError(
            f"no GBZ solutions accepted at {params} despite epsilon > 0; "
            "all four branch families came back empty"
        )
    return GbzCurve(points=points, theta_steps=theta_steps)


# ---------------------------------------------------------------------------
# Finite-ring boundary condition (4x4 determinant) and energy polishing
# ---------------------------------------------------------------------------

def _eta_vec(coeffs: CharacteristicCoeffs, params: ModelParams, beta, e_shifted):
    """Sublattice amplitude ratio phi_A/phi_B for a characteristic root."""
    return ((params.t1 + params.gamma) + params.t2 / beta) / e_shifted


def _boundary_terms_vec(energies, params: ModelParams):
    """Power-balanced left/right sides of the boundary condition.

    Returns (lhs, rhs, ok, pow_scale, conv_scale): both sides are divided by
    the dominant modulus among the N-th power products (pow_scale), so the
    difference is finite for any n_cells.  conv_scale is the natural
    magnitude of the two sides before cancellation (the amplitude-bracket
    factors can vanish at a root while the opposite side is already
    negligible, so max(|lhs|, |rhs|) is not a usable convergence scale).
    """
    co = CharacteristicCoeffs.from_params(params)
    e = np.asarray(energies, dtype=complex)
    n = params.n_cells
    ei = e - 1j * params.epsilon
    eii = e + 1j * params.epsilon
    b11, b12 = _roots_vec(co, ei ** 2)
    b21, b22 = _roots_vec(co, eii ** 2)
    bad = (np.abs(ei) < 1e-12) | (np.abs(eii) < 1e-12)
    ei = np.where(bad, 1.0, ei)
    eii = np.where(bad, 1.0, eii)
    eta_i1 = _eta_vec(co, params, b11, ei)
    eta_i2 = _eta_vec(co, params, b12, ei)
    eta_ii1 = _eta_vec(co, params, b21, eii)
    eta_ii2 = _eta_vec(co, params, b22, eii)

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        xl = (b11 * b21) ** n
        yl = (b12 * b22) ** n
        xr = (b12 * b21) ** n
        yr = (b11 * b22) ** n
        scale = np.maximum.reduce([np.abs(xl * yl), np.abs(xl), np.abs(yl),
                                   np.abs(xr), np.abs(yr), np.ones_like(np.abs(xl))])
        al = (eta_i1 * b11 - eta_ii2 * b22) * (eta_i2 * b12 - eta_ii1 * b21)
        ar = (eta_i1 * b11 - eta_ii1 * b21) * (eta_i2 * b12 - eta_ii2 * b22)
        pl = (xl * yl - xl - yl + 1.0) / scale
        pr = (xr * yr - xr - yr + 1.0) / scale
        lhs = pl * al
        rhs = pr * ar
        al_mag = ((np.abs(eta_i1 * b11) + np.abs(eta_ii2 * b22))
                  * (np.abs(eta_i2 * b12) + np.abs(eta_ii1 * b21)))
        ar_mag = ((np.abs(eta_i1 * b11) + np.abs(eta_ii1 * b21))
                  * (np.abs(eta_i2 * b12) + np.abs(eta_ii2 * b22)))
        conv_scale = np.maximum(np.abs(pl) * al_mag, np.abs(pr) * ar_mag)
        conv_scale = np.maximum(conv_scale, 1e-30)
    return lhs, rhs, ~bad & np.isfinite(lhs) & np.isfinite(rhs), scale, conv_scale


def boundary_matrix(energy: complex, params: ModelParams) -> np.ndarray:
    """The 4x4 junction-condition matrix whose null vector carries the four
    sublattice amplitudes; brute-force counterpart of the product form."""
    co = CharacteristicCoeffs.from_params(params)
    n = params.n_cells
    t2 = params.t2
    ei = energy - 1j * params.epsilon
    eii = energy + 1j * params.epsilon
    b11, b12 = characteristic_roots(ei, co)
    b21, b22 = characteristic_roots(eii, co)
    if abs(ei) < 1e-12 or abs(eii) < 1e-12:
        raise ValueError("shifted energy at a branch point; amplitude ratios undefined")
    hi = [(params.t1 + params.gamma + t2 / b) / ei for b in (b11, b12)]
    hii = [(params.t1 + params.gamma + t2 / b) / eii for b in (b21, b22)]
    return np.array(
        [
            [-t2, -t2, t2 * b21 ** n, t2 * b22 ** n],
            [-t2 * hi[0] * b11 ** (n + 1), -t2 * hi[1] * b12 ** (n + 1),
             t2 * hii[0] * b21, t2 * hii[1] * b22],
            [t2 * b11 ** n, t2 * b12 ** n, -t2, -t2],
            [t2 * hi[0] * b11, t2 * hi[1] * b12,
             -t2 * hii[0] * b21 ** (n + 1), -t2 * hii[1] * b22 ** (n + 1)],
        ],
        dtype=complex,
    )


def boundary_determinant_residual(energy: complex, params: ModelParams,
                                  floor: float = 1e-12) -> float:
    """Scaled |LHS - RHS| of the boundary condition at a trial energy.

    Near-zero return signals that the energy is an eigenvalue of the finite
    ring.  Requires the closed ring (t_boundary = t2) and modest n_cells for
    a well-conditioned probe contract.
    """
    if not params.is_periodic:
        raise ValueError("boundary condition derived for the closed ring (t_boundary = t2)")
    if params.n_cells > 12:
        raise ValueError("residual probe restricted to n_cells <= 12; "
                         "use polish_ring_energies for large rings")
    ei = energy - 1j * params.epsilon
    eii = energy + 1j * params.epsilon
    if abs(ei) < 1e-12 or abs(eii) < 1e-12:
        raise ValueError("shifted energy at a branch point of the characteristic equation")
    lhs, rhs, ok, _, _ = _boundary_terms_vec(np.array([energy]), params)
    if not ok[0]:
        raise ValueError("boundary condition not evaluable at this energy")
    l, r = complex(lhs[0]), complex(rhs[0])
    return float(abs(l - r) / max(abs(l), abs(r), floor))


def _newton_boundary(seeds, params: ModelParams, itmax: int = 30,
                     tol: float = 1e-11, step_cap: float = 0.05,
                     escape: float | None = None):
    """Damped Newton iteration on the balanced boundary difference, run over
    all seeds simultaneously.  Seeds that leave the escape radius are dropped
    early.  Returns (values, converged mask)."""
    e = np.array(seeds, dtype=complex)
    if escape is None and len(e):
        escape = 2.0 * float(np.abs(e).max()) + 2.0
    active = np.ones(len(e), dtype=bool)
    h = 1e-7
    for _ in range(itmax):
        if not np.any(active):
            break
        ea = e[active]
        lhs, rhs, ok, _, conv = _boundary_terms_vec(ea, params)
        fv = lhs - rhs
        done = ok & (np.abs(fv) < tol * conv)
        lp, rp, _, _, _ = _boundary_terms_vec(ea + h, params)
        lm, rm, _, _, _ = _boundary_terms_vec(ea - h, params)
        fp = ((lp - rp) - (lm - rm)) / (2.0 * h)
        fp = np.where(np.abs(fp) < 1e-300, 1.0, fp)
        step = fv / fp
        mag = np.abs(step)
        step = np.where(mag > step_cap, step * (step_cap / np.maximum(mag, 1e-300)), step)
        ea = np.where(done | ~ok, ea, ea - step)
        e[active] = ea
        gone = ~ok | (np.abs(ea) > escape)
        still = np.where(active)[0]
        active[still[done | gone]] = False
    lhs, rhs, ok, _, conv = _boundary_terms_vec(e, params)
    converged = ok & (np.abs(lhs - rhs) < 1e-8 * conv)
    return e, converged


def _dedup_complex(values, tol: float = 1e-8):
    values = np.asarray(values, dtype=complex)
    if len(values) == 0:
        return values
    order = np.lexsort((values.imag, values.real))
    out: list[complex] = []
    for v in values[order]:
        dup = False
        for w in reversed(out):
            if v.real - w.real > tol:
                break
            if abs(v - w) <= tol:
                dup = True
                break
        if not dup:
            out.append(v)
    return np.array(out)


def axis_state_energies(params: ModelParams, n_seeds: int = 36,
                        bound: float | None = None) -> np.ndarray:
    """Finite-ring eigenvalues lying exactly on the Re E = 0 or Im E = 0
    symmetry axes, found by Newton on the balanced boundary condition from
    dense axis seed grids.  Wall-localized special states always appear here.
    """
    if not params.is_periodic:
        raise ValueError("axis search requires the closed ring (t_boundary = t2)")
    if bound is None:
        bound = abs(params.t1) + abs(params.t2) + abs(params.gamma) + abs(params.epsilon) + 1.0
    grid = np.linspace(0.015 * bound, bound, n_seeds)
    seeds = np.concatenate([1j * grid, -1j * grid, grid + 0j, -grid + 0j])
    roots, converged = _newton_boundary(seeds, params)
    roots = roots[converged]
    if len(roots) == 0:
        return np.empty(0, dtype=complex)
    # keep only roots that stayed on an axis and inside the spectral bound
    scale = max(bound, 1.0)
    on_axis = (np.abs(roots.real) < 1e-6 * scale) | (np.abs(roots.imag) < 1e-6 * scale)
    roots = roots[on_axis & (np.abs(roots) <= 1.2 * bound)]
    # snap to the axis to remove Newton noise
    roots = np.where(np.abs(roots.real) < 1e-6 * scale, 1j * roots.imag, roots.real + 0j)
    return _dedup_complex(roots, tol=1e-7)


def polish_ring_energies(energies, params: ModelParams,
                         curve: GbzCurve | None = None,
                         assign_radius: float = 0.6):
    """Polish approximate ring eigenvalues against the balanced boundary
    condition.

    Dense diagonalization of strongly non-normal rings is pseudospectrum
    limited; the boundary condition is stable at any size, so Newton roots
    seeded from the raw values, the analytical curve, and the symmetry axes
    recover accurate finite-size energies.  Each input is replaced by the
    nearest recovered root within assign_radius (otherwise kept).  Returns
    (polished array, moved mask).
    """
    if not params.is_periodic:
        raise ValueError("polishing requires the closed ring (t_boundary = t2)")
    e = np.asarray(energies, dtype=complex)
    seeds = [e]
    if curve is not None and len(curve.points) > 0:
        ce = curve.energies
        stride = max(1, len(ce) // 600)
        seeds.append(ce[::stride])
    bound = abs(params.t1) + abs(params.t2) + abs(params.gamma) + abs(params.epsilon) + 1.0
    grid = np.linspace(0.015 * bound, bound, 40)
    seeds.append(np.concatenate([1j * grid, -1j * grid, grid + 0j, -grid + 0j]))
    all_seeds = np.concatenate(seeds)
    roots, converged = _newton_boundary(all_seeds, params)
    roots = roots[converged & (np.abs(roots) <= 1.5 * bound)]
    if len(roots) == 0:
        return e.copy(), np.zeros(len(e), dtype=bool)
    # dedup well below the physical level spacing but above Newton noise, so
    # near-duplicate converged copies of one root do not outnumber the inputs
    roots = _dedup_complex(roots, tol=1e-6)
    # one-to-one optimal assignment first (independent nearest-root mapping
    # collapses clusters of drifted values onto one root and leaves true
    # roots unrepresented), then leftovers take their nearest root, which
    # also covers degenerate roots hosting two states
    from scipy.optimize import linear_sum_assignment

    dist = np.abs(e[:, None] - roots[None, :])
    big = 1e6
    cost = np.where(dist <= assign_radius, dist, big)
    polished = e.copy()
    assigned = np.zeros(len(e), dtype=bool)
    if len(roots) >= len(e):
        rows, cols = linear_sum_assignment(cost)
        for i, j in zip(rows, cols):
            if dist[i, j] <= assign_radius:
                polished[i] = roots[j]
                assigned[i] = True
    else:
        rows, cols = linear_sum_assignment(cost.T)
        for j, i in zip(rows, cols):
            if dist[i, j] <= assign_radius:
                polished[i] = roots[j]
                assigned[i] = True
    rest = np.where(~assigned)[0]
    if len(rest):
        nearest = np.argmin(dist[rest], axis=1)
        best = dist[rest, nearest]
        take = best <= assign_radius
        polished[rest[take]] = roots[nearest[take]]
        assigned[rest[take]] = True
    moved = assigned & (np.abs(polished - e) > 1e-9)
    return polished, moved
