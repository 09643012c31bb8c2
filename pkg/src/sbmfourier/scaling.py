"""Quantitative reproduction of the example families: exact zero/one
coefficient values and power-law exponents recovered by log-log fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fourier as fr
from . import graphs as gr
from .sbm import ExampleFamily, ModelError, construct_example, example

SLOPE_TOL_STATED = 0.05
SLOPE_TOL_DERIVED = 0.02


@dataclass(frozen=True)
class ExponentReport:
    family: ExampleFamily
    graph: gr.PatternGraph
    n_grid: tuple[float, ...]
    phi_values: tuple[float, ...]
    psi_values: tuple[float, ...]
    fitted_slope: float
    predicted_slope: float | None
    provenance: str | None
    passes: bool | None


def predicted_slope(f: ExampleFamily, target: gr.PatternGraph):
    """(slope, provenance, tolerance) for targets with a known prediction.

    star1_dominant's edge exponent is the implementation-derived -beta/2
    (two vertices); the others are the stated family exponents.
    """
    prof = gr.profile(target)
    if f.name == "star1_dominant" and gr.is_star(target) and target.edge_count == 1:
        return -f.get("beta") / 2.0, "derived", SLOPE_TOL_DERIVED
    if f.name == "star2_dominant" and gr.is_star(target) and target.edge_count == 2:
        return -2.0 * f.get("beta") / 3.0, "stated", SLOPE_TOL_STATED
    if f.name == "large_star" and gr.is_star(target):
        D = int(f.get("D"))
        if target.edge_count == D:
            return (-0.5 + 1.0 / (8 * (D - 1) * (D + 1)), "stated",
                    SLOPE_TOL_STATED)
    if f.name == "planted_coloring" and prof.is_2connected:
        alpha = f.get("alpha")
        v = target.n
        return -alpha * (v - 1) / v, "stated", SLOPE_TOL_STATED
    if f.name == "quiet_4cycle" and gr.is_cycle(target) and target.n == 4:
        return -0.75, "stated", SLOPE_TOL_STATED
    return None


def _family_at(f: ExampleFamily, grid_value: float) -> ExampleFamily:
    """Instantiate the family at one grid point.  The grid parametrizes n
    for every family except quiet_4cycle, whose natural scale is q."""
    params = {k: v for k, v in f.params if k not in ("n", "q")}
    if f.name == "quiet_4cycle":
        params["q"] = int(grid_value)
    else:
        params["n"] = float(grid_value)
    return example(f.name, **params)


def run_example(f: ExampleFamily, targets, n_grid,
                budget: int = fr.DEFAULT_BUDGET) -> list[ExponentReport]:
    """Evaluate psi(target) exactly across the grid and fit log-log slopes.

    Grids must be strictly increasing with at least 4 points.  Reports
    carry the known predicted exponent where one exists; ``passes`` is
    None otherwise.
    """
    grid = [float(v) for v in n_grid]
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ModelError("grid must be strictly increasing with >= 4 points")
    out = []
    models = [construct_example(_family_at(f, v)) for v in grid]
    for target in targets:
        results = [fr.phi_auto(m, target, budget) for m in models]
        phis = [r.phi for r in results]
        psis = [r.psi for r in results]
        if any(v <= 0 for v in psis):
            raise ModelError(
                f"vanishing coefficient for {target.edge_string()!r}; "
                "no exponent to fit")
        slope = float(np.polyfit(np.log(grid), np.log(psis), 1)[0])
        pred = predicted_slope(f, target)
        if pred is None:
            out.append(ExponentReport(f, target, tuple(grid), tuple(phis),
                                      tuple(psis), slope, None, None, None))
        else:
            val, prov, tol = pred
            out.append(ExponentReport(f, target, tuple(grid), tuple(phis),
                                      tuple(psis), slope, val, prov,
                                      abs(slope - val) <= tol))
    return out


def default_grid(name: str) -> tuple[float, ...]:
    if name == "quiet_4cycle":
        return (8, 12, 16, 24, 32)
    if name == "planted_coloring":
        return tuple(np.logspace(2, 5, 6))
    return tuple(np.logspace(3, 6, 6))


def expected_exact_value(f: ExampleFamily, h: gr.PatternGraph) -> float | None:
    """The family's structural zero/one claim for shape h, if any."""
    prof = gr.profile(h)
    if f.name in ("diag_pm1", "one_to_one_gap_1"):
        return 1.0 if prof.all_degrees_even else 0.0
    if f.name == "quiet_4cycle":
        if h.edge_count % 2 == 1 or prof.leaf_vertices:
            return 0.0
        return None
    if f.name == "planted_coloring":
        if prof.is_connected and not prof.is_2connected:
            return 0.0
        if not prof.is_connected:
            # factorizes over components, zero once any component is
            # a non-2-connected connected graph
            if any(not gr.profile(c).is_2connected for c in gr.components(h)):
                return 0.0
        return None
    return None


@dataclass(frozen=True)
class DominanceRow:
    graph: gr.PatternGraph
    psi: float
    psi_sqrt_n: float
    above_threshold: bool


def dominance_table(f: ExampleFamily, n: int, dmax: int = 6,
                    threshold: float = 1.0,
                    budget: int = fr.DEFAULT_BUDGET) -> list[DominanceRow]:
    """psi and psi * sqrt(n) for the candidate dominating set
    {stars up to dmax, triangle, 4-cycle}, sorted by psi descending."""
    m = construct_example(f)
    shapes = [gr.star(t) for t in range(1, dmax + 1)] + [gr.cycle(3), gr.cycle(4)]
    rows = []
    for h in shapes:
        val = fr.phi_auto(m, h, budget).psi
        scaled = val * math.sqrt(n)
        rows.append(DominanceRow(h, val, scaled, scaled > threshold))
    rows.sort(key=lambda r: -r.psi)
    return rows


DOMINANT_SHAPE = {
    "star1_dominant": gr.star(1),
    "star2_dominant": gr.star(2),
    "large_star": None,  # star(D), depends on the parameter
    "quiet_4cycle": gr.cycle(4),
    "planted_coloring": gr.cycle(3),
}


def designated_dominant(f: ExampleFamily) -> gr.PatternGraph | None:
    if f.name == "large_star":
        return gr.star(int(f.get("D")))
    return DOMINANT_SHAPE.get(f.name)
