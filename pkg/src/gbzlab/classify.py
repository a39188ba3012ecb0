"""Spectral-structure phase classification.

Maps line-gap structure plus special-state content onto the seven phase
regions of the dissipative ring's phase diagram, and exposes the closed-form
phase-boundary predicates.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gbz, spectral
from .model import ModelParams, build_hamiltonian
from .spectral import EigenPair


class Region(enum.Enum):
    """Phase regions; values are the stable serialization contract."""

    DEGENERATE = 0
    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5
    VI = 6
    VII = 7

    @classmethod
    def from_serial(cls, value: int) -> "Region":
        return cls(value)


@dataclass(frozen=True)
class GapReport:
    real_gap_open: bool
    real_gap_width: float
    imag_gap_open: bool
    imag_gap_width: float
    component_count: int


@dataclass(frozen=True)
class SpecialStateSummary:
    topological_edge: int = 0
    bound: int = 0

    @classmethod
    def from_pairs(cls, pairs: list[EigenPair]) -> "SpecialStateSummary":
        tags = [p.tag for p in pairs]
        return cls(topological_edge=tags.count("topological_edge"),
                   bound=tags.count("bound"))


def _component_count(energies: np.ndarray, link_factor: float) -> int:
    """Connected clusters under single linkage with linking distance
    link_factor x median nearest-neighbour spacing."""
    n = len(energies)
    if n <= 1:
        return n
    if n > 1500:  # clustering on a stride subsample; component shapes are coarse
        energies = energies[:: (n // 1200 + 1)]
        n = len(energies)
    d = np.abs(energies[:, None] - energies[None, :])
    np.fill_diagonal(d, np.inf)
    link = link_factor * np.median(d.min(axis=1))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ii, jj = np.where(d <= link)
    for i, j in zip(ii, jj):
        if i < j:
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(n)})


def detect_gaps(energies, rel_tol: float = 1e-3, link_factor: float = 5.0) -> GapReport:
    """Line-gap structure of an energy multiset.

    The real gap is open when the symmetric interval around Re = 0 that is
    free of spectrum is wider than rel_tol times the spectral radius (width
    2 * min|Re E|); the imaginary gap is analogous.  Callers exclude
    special-state energies first: in-gap states must not close a gap.
    """
    e = np.asarray(energies, dtype=complex)
    if len(e) < 8:
        raise ValueError(f"need at least 8 energies, got {len(e)}")
    radius = float(np.abs(e).max())
    threshold = rel_tol * max(radius, 1e-300)
    rw = 2.0 * float(np.abs(e.real).min())
    iw = 2.0 * float(np.abs(e.imag).min())
    real_open = rw > threshold
    imag_open = iw > threshold
    return GapReport(
        real_gap_open=real_open,
        real_gap_width=rw if real_open else 0.0,
        imag_gap_open=imag_open,
        imag_gap_width=iw if imag_open else 0.0,
        component_count=_component_count(e, link_factor),
    )


def classify_region(params: ModelParams, report: GapReport,
                    tags: SpecialStateSummary) -> Region:
    """Map gap structure plus special-state content to a phase region.

    Bound states flag region VI only on the boundary-hopping tuning path
    (epsilon = 0); with dissipation on, in-gap precursor states exist well
    inside the plain real-gap phase and do not define a region of their own.
    """
    if params.is_degenerate():
        return Region.DEGENERATE
    topo = tags.topological_edge > 0
    bound = tags.bound > 0
    if report.real_gap_open and report.imag_gap_open:
        return Region.V if topo else Region.IV
    if report.real_gap_open:
        if topo:
            return Region.VII
        if bound and params.epsilon == 0.0:
            return Region.VI
        return Region.II
    if report.imag_gap_open:
        return Region.III
    if topo:
        warnings.warn("topological tags with both gaps closed; labelling I", stacklevel=2)
    return Region.I


@dataclass(frozen=True)
class PhaseBoundaries:
    """Signed margins (positive = |t1| below the line) of the closed-form
    phase-boundary predicates, plus the dissipation-vs-nonreciprocity line."""

    obc_margin: float
    obc_topological: bool
    pbc_margin_plus: float
    pbc_margin_minus: float
    below_plus_line: bool
    below_minus_line: bool
    tearing_margin: float
    dissipation_dominant: bool

    @property
    def predicts_topological(self) -> bool:
        """Strong-dissipation topological predicate: |eps| > |gamma| and
        |t1| < sqrt(t2^2 + gamma^2)."""
        return self.dissipation_dominant and self.obc_topological


def analytic_phase_boundaries(params: ModelParams) -> PhaseBoundaries:
    t1 = abs(params.t1)
    obc_line = float(np.hypot(params.t2, params.gamma))
    plus_line = abs(params.t2 + params.gamma)
    minus_line = abs(params.t2 - params.gamma)
    tearing = abs(params.epsilon) - abs(params.gamma)
    return PhaseBoundaries(
        obc_margin=obc_line - t1,
        obc_topological=t1 < obc_line,
        pbc_margin_plus=plus_line - t1,
        pbc_margin_minus=minus_line - t1,
        below_plus_line=t1 < plus_line,
        below_minus_line=t1 < minus_line,
        tearing_margin=tearing,
        dissipation_dominant=tearing > 0.0,
    )


@dataclass(frozen=True)
class AnalysisConfig:
    """Tolerances of the classification pipeline."""

    rel_tol: float = 1e-3       # gap threshold as a fraction of spectral radius
    tol_re: float = 1e-3        # Re window of the idealized edge-state position
    tol_im: float = 0.05        # Im window around +/- epsilon
    link_factor: float = 5.0    # component clustering linkage multiplier
    theta_steps: int = 128      # analytic-curve resolution inside the pipeline
    screen_tol: float = 1e-9

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "tol_re": self.tol_re,
            "tol_im": self.tol_im,
            "link_factor": self.link_factor,
            "theta_steps": self.theta_steps,
            "screen_tol": self.screen_tol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisConfig":
        return cls(rel_tol=data["rel_tol"], tol_re=data["tol_re"], tol_im=data["tol_im"],
                   link_factor=data["link_factor"], theta_steps=int(data["theta_steps"]),
                   screen_tol=data["screen_tol"])


@dataclass
class PointAnalysis:
    params: ModelParams
    label: Region
    report: GapReport | None
    tags: SpecialStateSummary
    pairs: list[EigenPair] = field(default_factory=list)
    curve: gbz.GbzCurve | None = None
    note: str = ""


def classify_parameters(params: ModelParams, config: AnalysisConfig | None = None,
                        keep_pairs: bool = False) -> PointAnalysis:
    """Full classification of one parameter point.

    Diagonalizes the ring, tags special states, and evaluates the line gaps.
    On the closed ring the gap structure is read off the analytical bulk
    spectrum (the thermodynamic-limit object the region taxonomy refers to;
    finite-size straggler states and pseudospectral noise otherwise close
    gaps that are open in the limit).  Off the closed ring the numerical
    spectrum with special states excluded is used.
    """
    config = config or AnalysisConfig()
    if params.is_degenerate():
        return PointAnalysis(params=params, label=Region.DEGENERATE, report=None,
                             tags=SpecialStateSummary(), note="degenerate parameter line")
    curve = None
    note = ""
    if params.is_periodic:
        curve = gbz.gbz_curve(params, theta_steps=config.theta_steps,
                              screen_tol=config.screen_tol)
    elif params.epsilon != 0.0:
        note = "mixed tuning (epsilon != 0 and t_boundary != t2)"
    pairs = spectral.eigendecompose(build_hamiltonian(params))
    pairs = spectral.detect_special_states(pairs, params, tol_re=config.tol_re,
                                           tol_im=config.tol_im, curve=curve,
                                           theta_steps=config.theta_steps)
    tags = SpecialStateSummary.from_pairs(pairs)
    if curve is not None:
        gap_energies = curve.energies
    else:
        gap_energies = np.array([p.energy for p in pairs if p.tag == "bulk"])
    report = detect_gaps(gap_energies, rel_tol=config.rel_tol,
                         link_factor=config.link_factor)
    label = classify_region(params, report, tags)
    return PointAnalysis(params=params, label=label, report=report, tags=tags,
                         pairs=pairs if keep_pairs else [], curve=curve, note=note)
