"""Batch phase-diagram sweeps, stable file formats, and heatmap rendering."""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .classify import AnalysisConfig, Region, classify_parameters
from .gbz import GbzPoint
from .model import ModelParams
from .spectral import EigenPair

AXIS_NAMES = ("t1", "t2", "gamma", "epsilon", "t_boundary")

MAX_CELLS = 10 ** 6

COLOR_TABLE = {
    1: (0, 0, 96),        # I: gapless
    2: (120, 180, 255),   # II: real gap
    3: (0, 160, 0),       # III: imaginary gap
    4: (255, 210, 0),     # IV: both gaps
    5: (200, 0, 0),       # V: both gaps + topological edges
    6: (40, 90, 200),     # VI: real gap + bound states
    7: (255, 140, 0),     # VII: real gap + topological edges
    0: (0, 0, 0),         # degenerate
}


@dataclass(frozen=True)
class AxisSpec:
    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis name must be one of {AXIS_NAMES}, got {self.name!r}")
        if self.steps < 2:
            raise ValueError("axis needs at least 2 steps")
        if not (self.min < self.max):
            raise ValueError("axis requires min < max")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    axis_x: AxisSpec
    axis_y: AxisSpec
    base: ModelParams
    classifier: AnalysisConfig = field(default_factory=AnalysisConfig)

    def __post_init__(self):
        if self.axis_x.name == self.axis_y.name:
            raise ValueError("sweep axes must differ")
        if self.axis_x.steps * self.axis_y.steps > MAX_CELLS:
            raise ValueError(f"grid exceeds {MAX_CELLS} cells")

    def cell_params(self, ix: int, iy: int) -> ModelParams:
        vx = float(self.axis_x.values()[ix])
        vy = float(self.axis_y.values()[iy])
        return self.base.with_(**{self.axis_x.name: vx, self.axis_y.name: vy})

    def to_dict(self) -> dict:
        base = self.base
        return {
            "axis_x": {"name": self.axis_x.name, "min": self.axis_x.min,
                       "max": self.axis_x.max, "steps": self.axis_x.steps},
            "axis_y": {"name": self.axis_y.name, "min": self.axis_y.min,
                       "max": self.axis_y.max, "steps": self.axis_y.steps},
            "base": {"t1": base.t1, "t2": base.t2, "gamma": base.gamma,
                     "epsilon": base.epsilon, "t_boundary": base.t_boundary,
                     "n_cells": base.n_cells},
            "classifier": self.classifier.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        def axis(d):
            return AxisSpec(name=d["name"], min=d["min"], max=d["max"], steps=int(d["steps"]))

        b = data["base"]
        base = ModelParams(t1=b["t1"], t2=b["t2"], gamma=b["gamma"], epsilon=b["epsilon"],
                           t_boundary=b["t_boundary"], n_cells=int(b["n_cells"]))
        return cls(axis_x=axis(data["axis_x"]), axis_y=axis(data["axis_y"]), base=base,
                   classifier=AnalysisConfig.from_dict(data["classifier"]))


@dataclass
class PhaseDiagramGrid:
    spec: SweepSpec
    labels: list[int]
    provenance: list[str]

    def __post_init__(self):
        n = self.spec.axis_x.steps * self.spec.axis_y.steps
        if len(self.labels) != n or len(self.provenance) != n:
            raise ValueError("labels/provenance length must equal steps_x * steps_y")

    def label_at(self, ix: int, iy: int) -> Region:
        return Region.from_serial(self.labels[iy * self.spec.axis_x.steps + ix])


def _classify_cell(spec: SweepSpec, ix: int, iy: int) -> tuple[int, str]:
    try:
        params = spec.cell_params(ix, iy)
    except ValueError as exc:
        return Region.DEGENERATE.value, f"invalid cell parameters: {exc}"
    note = ""
    if params.epsilon != 0.0 and not params.is_periodic:
        note = "mixed tuning"
    try:
        result = classify_parameters(params, spec.classifier)
    except Exception as exc:  # a failed cell must not abort the sweep
        return Region.DEGENERATE.value, f"cell failed: {type(exc).__name__}: {exc}"
    if result.note:
        note = result.note
    return result.label.value, note


def run_sweep(spec: SweepSpec, threads: int = 0) -> PhaseDiagramGrid:
    """Classify every grid cell independently; output is a pure function of
    the spec (byte-identical across runs and thread counts)."""
    nx, ny = spec.axis_x.steps, spec.axis_y.steps
    cells = [(ix, iy) for iy in range(ny) for ix in range(nx)]
    labels = [0] * len(cells)
    notes = [""] * len(cells)

    def work(k: int):
        ix, iy = cells[k]
        labels[k], notes[k] = _classify_cell(spec, ix, iy)

    with threadpool_limits(limits=1):
        if threads == 1:
            for k in range(len(cells)):
                work(k)
        else:
            workers = threads if threads > 0 else None
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(work, range(len(cells))))
    return PhaseDiagramGrid(spec=spec, labels=labels, provenance=notes)


# ---------------------------------------------------------------------------
# Serialization: floats at 17 significant digits round-trip 64-bit exactly
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    return format(float(x), ".17g")


def _dump_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(k)}:{_dump_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def export_grid(grid: PhaseDiagramGrid, format: str = "csv") -> bytes:
    """CSV: header x,y,label with x varying fastest, coordinates at 9
    significant digits.  JSON: spec, flat labels, provenance, version."""
    if format == "csv":
        xs = grid.spec.axis_x.values()
        ys = grid.spec.axis_y.values()
        out = io.StringIO()
        out.write("x,y,label\n")
        k = 0
        for y in ys:
            for x in xs:
                out.write(f"{x:.9g},{y:.9g},{grid.labels[k]}\n")
                k += 1
        return out.getvalue().encode()
    if format == "json":
        doc = {
            "spec": grid.spec.to_dict(),
            "labels": list(grid.labels),
            "provenance": list(grid.provenance),
            "version": 1,
        }
        return (_dump_json(doc) + "\n").encode()
    raise ValueError(f"unknown format {format!r}")


def import_grid(data: bytes) -> PhaseDiagramGrid:
    doc = json.loads(data.decode())
    if doc.get("version") != 1:
        raise ValueError(f"unsupported grid file version {doc.get('version')!r}")
    return PhaseDiagramGrid(spec=SweepSpec.from_dict(doc["spec"]),
                            labels=[int(v) for v in doc["labels"]],
                            provenance=[str(v) for v in doc["provenance"]])


def read_grid_csv(data: bytes) -> list[tuple[float, float, int]]:
    rows = []
    lines = data.decode().splitlines()
    if not lines or lines[0] != "x,y,label":
        raise ValueError("not a grid CSV (missing x,y,label header)")
    for line in lines[1:]:
        x, y, label = line.split(",")
        rows.append((float(x), float(y), int(label)))
    return rows


SPECTRUM_HEADER = "kind,re_e,im_e,rho_i,loc_modulus,tag,re_beta,im_beta,branch,theta"


def export_spectrum(pairs: list[EigenPair], points: list[GbzPoint],
                    format: str = "csv") -> bytes:
    """Serialize numerical eigenpairs and analytical GBZ points together.

    Numerical records carry (Re E, Im E, rho_I, |beta| estimate, tag);
    analytical records carry one row per defining beta with branch and theta.
    """
    if pairs:
        lengths = {len(p.vector) for p in pairs}
        if len(lengths) > 1:
            raise ValueError(f"mixed system sizes in eigenpairs: {sorted(lengths)}")
    if format == "csv":
        out = io.StringIO()
        out.write(SPECTRUM_HEADER + "\n")
        for p in pairs:
            loc = "" if p.loc_modulus is None else f"{p.loc_modulus:.9g}"
            out.write(f"numerical,{p.energy.real:.9g},{p.energy.imag:.9g},"
                      f"{p.rho_I:.9g},{loc},{p.tag},,,,\n")
        for pt in points:
            for beta in pt.defining_betas():
                out.write(f"analytical,{pt.energy.real:.9g},{pt.energy.imag:.9g},"
                          f",,,{beta.real:.9g},{beta.imag:.9g},{pt.branch},{pt.theta:.9g}\n")
        return out.getvalue().encode()
    if format == "json":
        doc = {
            "version": 1,
            "numerical": [
                {"re_e": p.energy.real, "im_e": p.energy.imag, "rho_i": p.rho_I,
                 "loc_modulus": p.loc_modulus, "tag": p.tag}
                for p in pairs
            ],
            "analytical": [
                {"re_e": pt.energy.real, "im_e": pt.energy.imag,
                 "re_beta": beta.real, "im_beta": beta.imag,
                 "branch": pt.branch, "theta": pt.theta}
                for pt in points
                for beta in pt.defining_betas()
            ],
        }
        return (_dump_json(doc) + "\n").encode()
    raise ValueError(f"unknown format {format!r}")


def export_tearing_scan(scan) -> bytes:
    """JSON serialization of a tearing scan; not-applicable gaps become null."""
    base = scan.params_base
    doc = {
        "version": 1,
        "base": {"t1": base.t1, "t2": base.t2, "gamma": base.gamma,
                 "epsilon": base.epsilon, "t_boundary": base.t_boundary,
                 "n_cells": base.n_cells},
        "epsilon_grid": list(scan.epsilon_grid),
        "delta_values": list(scan.delta_values),
        "epsilon_star": scan.epsilon_star,
    }
    return (_dump_json(doc) + "\n").encode()


def import_tearing_scan(data: bytes):
    from .tearing import TearingScan

    doc = json.loads(data.decode())
    if doc.get("version") != 1:
        raise ValueError(f"unsupported tearing file version {doc.get('version')!r}")
    b = doc["base"]
    base = ModelParams(t1=b["t1"], t2=b["t2"], gamma=b["gamma"], epsilon=b["epsilon"],
                       t_boundary=b["t_boundary"], n_cells=int(b["n_cells"]))
    deltas = [math.nan if v is None else float(v) for v in doc["delta_values"]]
    return TearingScan(params_base=base, epsilon_grid=[float(v) for v in doc["epsilon_grid"]],
                       delta_values=deltas, epsilon_star=doc["epsilon_star"])


def render_heatmap(grid: PhaseDiagramGrid) -> bytes:
    """Binary portable pixmap (P6), one pixel per cell, fixed color table.

    Pixel rows follow the grid's y index (first row = smallest y)."""
    nx, ny = grid.spec.axis_x.steps, grid.spec.axis_y.steps
    header = f"P6\n{nx} {ny}\n255\n".encode()
    payload = bytearray()
    for label in grid.labels:
        payload.extend(COLOR_TABLE[label])
    return header + bytes(payload)
