"""Spectral laboratory for a gain/loss domain-wall non-reciprocal SSH ring."""

from .classify import (AnalysisConfig, GapReport, PhaseBoundaries, Region,
                       SpecialStateSummary, analytic_phase_boundaries,
                       classify_parameters, classify_region, detect_gaps)
from .gbz import (CharacteristicCoeffs, DegenerateModelError, GbzCurve, GbzPoint,
                  axis_state_energies, boundary_determinant_residual, boundary_matrix,
                  characteristic_roots, gbz_curve, obc_reference_modulus,
                  polish_ring_energies, screen_candidates, solve_equal_modulus_branch,
                  solve_product_one_branch)
from .model import ModelParams, bloch_curve, bloch_spectrum, build_hamiltonian, ring_momentum_grid
from .spectral import (EigenPair, EigensolverError, chain_weight, detect_special_states,
                       eigendecompose, localization_modulus, median_nn_spacing, wall_weight)
from .sweep import (AxisSpec, PhaseDiagramGrid, SweepSpec, export_grid, export_spectrum,
                    export_tearing_scan, import_grid, import_tearing_scan, read_grid_csv,
                    render_heatmap, run_sweep)
from .tearing import TearingScan, critical_epsilon, delta_gap

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig", "AxisSpec", "CharacteristicCoeffs", "DegenerateModelError",
    "EigenPair", "EigensolverError", "GapReport", "GbzCurve", "GbzPoint", "ModelParams",
    "PhaseBoundaries", "PhaseDiagramGrid", "Region", "SpecialStateSummary", "SweepSpec",
    "TearingScan", "analytic_phase_boundaries", "axis_state_energies", "bloch_curve",
    "bloch_spectrum", "boundary_determinant_residual", "boundary_matrix", "chain_weight",
    "characteristic_roots", "classify_parameters", "classify_region", "critical_epsilon",
    "delta_gap", "detect_gaps", "detect_special_states", "eigendecompose", "export_grid",
    "export_spectrum", "export_tearing_scan", "gbz_curve", "import_grid",
    "import_tearing_scan", "localization_modulus", "median_nn_spacing",
    "obc_reference_modulus", "polish_ring_energies", "read_grid_csv", "render_heatmap",
    "run_sweep", "screen_candidates", "solve_equal_modulus_branch",
    "solve_product_one_branch", "wall_weight",
]
