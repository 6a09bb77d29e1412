"""Design-space sweep, joint electrical/mechanical evaluation and
Pareto filtering.

Every grid point is evaluated independently (optionally in parallel);
results are always reduced in grid-index order so a sweep is
byte-reproducible regardless of the worker count.
"""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .em import analyze_device, shunt_parasitics, total_inductance
from .errors import SuspindError
from .geometry import (SpiralSpec, XBeamSpec, generate_layout,
                       winding_side_lengths)
from .mechanics import (DEFAULT_SHOCK_ACCEL, analyze_strip, build_frame,
                        max_impact_force)


@dataclass(frozen=True)
class ConstraintSet:
    """Feasibility thresholds for a design sweep.

    ``max_shock_deflection`` defaults (when None) to half the smaller of
    the turn spacing and the air gap, evaluated per device. The resonance
    floor keeps the structure above typical environmental vibration.
    """

    max_shock_deflection: float | None = None   # m
    min_resonant_frequency: float = 1e3         # Hz
    min_q: float | None = None
    min_inductance: float | None = None         # H
    shock_accel: float = DEFAULT_SHOCK_ACCEL    # m/s^2

    def __post_init__(self):
        for name in ("max_shock_deflection", "min_resonant_frequency",
                     "min_q", "min_inductance", "shock_accel"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise SuspindError(f"constraint {name} must be > 0")

    def deflection_budget(self, spec: SpiralSpec) -> float:
        if self.max_shock_deflection is not None:
            return self.max_shock_deflection
        return min(spec.spacing, spec.airgap_height) / 2.0


@dataclass(frozen=True)
class Metrics:
    l_total: float            # H
    q_max: float
    f_peak: float             # Hz
    kappa_outer: float        # N/m
    f_max_impact: float       # N
    f_resonant: float         # Hz
    shock_deflection: float   # m

    def to_dict(self) -> dict:
        return {
            "l_total_h": self.l_total,
            "q_max": self.q_max,
            "f_peak_hz": self.f_peak,
            "kappa_outer_n_per_m": self.kappa_outer,
            "f_max_impact_n": self.f_max_impact,
            "f_resonant_hz": self.f_resonant,
            "shock_deflection_m": self.shock_deflection,
        }


@dataclass(frozen=True)
class DesignPoint:
    spec: SpiralSpec
    metrics: Metrics | None
    feasible: bool
    violations: tuple[str, ...] = ()
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.metrics is None


def evaluate(spec: SpiralSpec,
             constraints: ConstraintSet = ConstraintSet()) -> DesignPoint:
    """Run the full electrical + mechanical pipeline on one spec.

    Pipeline errors do not raise; they return a failed point carrying the
    causal message so sweeps continue past broken corners of the grid.
    """
    try:
        segments = generate_layout(spec)
        _, _, curve = analyze_device(spec)
        sides = winding_side_lengths(segments)
        outer = analyze_strip(spec, float(sides.max()), constraints.shock_accel)
        model = build_frame(segments)
        f_impact = max_impact_force(model)
        metrics = Metrics(
            l_total=total_inductance(segments),
            q_max=curve.q_max,
            f_peak=curve.f_peak,
            kappa_outer=outer.stiffness,
            f_max_impact=f_impact,
            f_resonant=outer.f_resonant,
            shock_deflection=outer.deflection,
        )
    except SuspindError as exc:
        return DesignPoint(spec=spec, metrics=None, feasible=False,
                           error=f"{type(exc).__name__}: {exc}")

    violations = []
    budget = constraints.deflection_budget(spec)
    if metrics.shock_deflection > budget:
        violations.append(
            f"shock deflection {metrics.shock_deflection:.3e} m exceeds "
            f"budget {budget:.3e} m")
    if spec.airgap_height <= budget:
        violations.append(
            f"airgap {spec.airgap_height:.3e} m does not clear the "
            f"deflection budget {budget:.3e} m")
    if metrics.f_resonant < constraints.min_resonant_frequency:
        violations.append(
            f"resonance {metrics.f_resonant:.3e} Hz below floor "
            f"{constraints.min_resonant_frequency:.3e} Hz")
    if constraints.min_q is not None and metrics.q_max < constraints.min_q:
        violations.append(f"q_max {metrics.q_max:.3f} below {constraints.min_q}")
    if (constraints.min_inductance is not None
            and metrics.l_total < constraints.min_inductance):
        violations.append(
            f"inductance {metrics.l_total:.3e} H below "
            f"{constraints.min_inductance:.3e} H")

    return DesignPoint(spec=spec, metrics=metrics, feasible=not violations,
                       violations=tuple(violations))


_SWEEPABLE = ("inner_diameter", "trace_width", "spacing", "turns",
              "metal_thickness", "airgap_height", "lead_gap",
              "dielectric_mode", "xbeam")


def _apply_grid_values(base: SpiralSpec, names, values) -> SpiralSpec:
    spec = base
    for name, value in zip(names, values):
        if name == "xbeam":
            if isinstance(value, XBeamSpec) or value is None:
                spec = spec.with_xbeam(value)
            else:
                spec = spec.with_xbeam(XBeamSpec() if value else None)
        else:
            spec = replace(spec, **{name: value})
    return spec


def sweep(base: SpiralSpec, grid: dict[str, list],
          constraints: ConstraintSet = ConstraintSet(),
          jobs: int = 1) -> list[DesignPoint]:
    """Evaluate the Cartesian product of per-parameter value lists.

    Output order is lexicographic in the grid indices (first parameter
    slowest) independent of how many workers run the evaluations.
    """
    if not grid:
        raise SuspindError("sweep grid is empty")
    for name in grid:
        if name not in _SWEEPABLE:
            raise SuspindError(
                f"cannot sweep '{name}'; sweepable: {', '.join(_SWEEPABLE)}")
        if not grid[name]:
            raise SuspindError(f"grid for '{name}' has no values")
    names = list(grid)
    specs = [_apply_grid_values(base, names, combo)
             for combo in itertools.product(*(grid[n] for n in names))]
    if jobs <= 1 or len(specs) <= 1:
        return [evaluate(spec, constraints) for spec in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(evaluate, specs,
                             itertools.repeat(constraints),
                             chunksize=max(1, len(specs) // (4 * jobs))))


@dataclass(frozen=True)
class Objectives:
    """Maximization objectives for the Pareto front (metric field names)."""

    first: str = "q_max"
    second: str = "f_max_impact"


def pareto_front(points: list[DesignPoint],
                 objectives: Objectives = Objectives()) -> list[DesignPoint]:
    """Non-dominated feasible points, ordered by the first objective
    descending; ties are kept.

    p dominates q iff p is >= in both objectives and > in at least one.
    """
    feasible = [p for p in points if p.feasible and p.metrics is not None]
    if not feasible:
        warnings.warn("no feasible points; Pareto front is empty")
        return []

    def key(p: DesignPoint) -> tuple[float, float]:
        return (getattr(p.metrics, objectives.first),
                getattr(p.metrics, objectives.second))

    order = sorted(range(len(feasible)),
                   key=lambda i: (-key(feasible[i])[0], -key(feasible[i])[1], i))
    front: list[DesignPoint] = []
    best_second_above = -float("inf")
    i = 0
    while i < len(order):
        j = i
        group_first = key(feasible[order[i]])[0]
        group = []
        while j < len(order) and key(feasible[order[j]])[0] == group_first:
            group.append(order[j])
            j += 1
        group_max_second = max(key(feasible[g])[1] for g in group)
        if group_max_second > best_second_above:
            front.extend(sorted(g for g in group
                                if key(feasible[g])[1] == group_max_second))
            best_second_above = group_max_second
        i = j
    # restore "first objective descending, original order within ties"
    front_sorted = sorted(front, key=lambda g: (-key(feasible[g])[0], g))
    return [feasible[g] for g in front_sorted]


def compare_dielectric_modes(spec: SpiralSpec) -> dict:
    """Side-by-side airgap vs oxide electrical summary with ratios."""
    results = {}
    for mode in ("oxide", "airgap"):
        mspec = spec.with_mode(mode)
        _, _, curve = analyze_device(mspec)
        shunt = shunt_parasitics(mspec)
        results[mode] = {
            "q_max": curve.q_max,
            "f_peak_hz": curve.f_peak,
            "cox_per_port_f": shunt.cox_p1,
            "l_total_h": total_inductance(generate_layout(mspec)),
        }
    air, oxide = results["airgap"], results["oxide"]
    results["improvement"] = {
        "q_max_ratio": air["q_max"] / oxide["q_max"],
        "f_peak_ratio": air["f_peak_hz"] / oxide["f_peak_hz"],
        "cox_ratio": air["cox_per_port_f"] / oxide["cox_per_port_f"],
    }
    return results
