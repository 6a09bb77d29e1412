"""Electrical model: inductance, loss, parasitics and Q(f) extraction.

Inductance uses the segment-summation method: closed-form self terms for
straight rectangular bars plus signed pairwise mutual terms for parallel
filaments at the geometric mean distance. Loss combines DC resistance
with an exponential skin-depth thickness correction. The device is
condensed into a pi-topology two-port (series L/R/C branch, oxide +
substrate shunt branch per port) whose Y-parameters are evaluated in
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import FormulaDomainError, SingularityError
from .geometry import Segment, SegmentSet, SpiralSpec, generate_layout
from .materials import Material, get_material
from .network import QCurve, TwoPortNetwork

MU0 = 4e-7 * math.pi
EPS0 = 8.8541878128e-12

# Substrate shunt branch constants (bulk silicon under the device).
SUBSTRATE_REL_PERMITTIVITY = 11.9
SUBSTRATE_RESISTIVITY = 20.0        # ohm*m (2 kohm*cm)
SUBSTRATE_EFFECTIVE_DEPTH = 100e-6  # fitted one-pole model depth

_GROVER_CONST = 0.50049


def default_frequency_grid(f_min: float = 0.1e9, f_max: float = 10e9,
                           points: int = 200) -> np.ndarray:
    """Log-spaced analysis grid (defaults: 0.1-10 GHz, 200 points)."""
    if not (0 < f_min < f_max) or points < 2:
        raise FormulaDomainError("need 0 < f_min < f_max and points >= 2")
    return np.logspace(math.log10(f_min), math.log10(f_max), points)


def segment_self_inductance(length: float, width: float, thickness: float) -> float:
    """Self inductance (H) of a straight rectangular bar.

    L = 2e-7 * l * [ln(2l/(w+t)) + 0.50049 + (w+t)/(3l)], SI inputs.
    """
    if length <= 0:
        raise FormulaDomainError("length must be > 0")
    wt = width + thickness
    if wt >= 2.0 * length:
        raise FormulaDomainError(
            f"width + thickness = {wt:g} must be < 2*length = {2 * length:g}"
        )
    return 2e-7 * length * (math.log(2.0 * length / wt) + _GROVER_CONST
                            + wt / (3.0 * length))


def _axis_of(seg: Segment) -> int | None:
    dx = abs(seg.end[0] - seg.start[0])
    dy = abs(seg.end[1] - seg.start[1])
    if dx > 0 and dy == 0:
        return 0
    if dy > 0 and dx == 0:
        return 1
    return None


def segment_mutual_inductance(seg_i: Segment, seg_j: Segment,
                              use_gmd: bool = True) -> float:
    """Signed mutual inductance (H) between two axis-aligned segments.

    Perpendicular pairs return exactly 0. Parallel pairs use the equal
    parallel-filament form evaluated at the geometric mean distance, via
    the endpoint decomposition that covers arbitrary longitudinal offsets;
    the sign is +1 for co-directed current flow and -1 otherwise.
    """
    ai, aj = _axis_of(seg_i), _axis_of(seg_j)
    if ai is None or aj is None:
        raise FormulaDomainError("segments must be axis-aligned in the plane")
    if ai != aj:
        return 0.0
    arrays = _pair_arrays([seg_i, seg_j])
    width = 0.5 * (seg_i.width + seg_j.width)
    try:
        total = kernels.mutual_pair_sum(*arrays, width, use_gmd)
    except ValueError as exc:
        raise SingularityError(str(exc)) from exc
    return 0.5 * total  # kernel doubles each unordered pair


def _pair_arrays(segments) -> tuple[np.ndarray, ...]:
    n = len(segments)
    axis = np.empty(n, dtype=np.int64)
    lo = np.empty(n)
    hi = np.empty(n)
    perp = np.empty(n)
    dirsign = np.empty(n)
    for k, seg in enumerate(segments):
        a = _axis_of(seg)
        if a is None:
            raise FormulaDomainError(f"segment {k} is not axis-aligned")
        axis[k] = a
        s, e = seg.start[a], seg.end[a]
        lo[k] = min(s, e)
        hi[k] = max(s, e)
        perp[k] = seg.start[1 - a]
        dirsign[k] = 1.0 if e > s else -1.0
    return axis, lo, hi, perp, dirsign


def total_inductance(segments: SegmentSet, use_gmd: bool = True) -> float:
    """Total winding inductance (H): self terms plus signed mutuals.

    The pair sum runs in index order (i < j), so repeated evaluation of
    the same layout is bit-stable.
    """
    winding = segments.winding
    if not winding:
        raise FormulaDomainError("segment set contains no winding segments")
    self_part = sum(segment_self_inductance(s.length, s.width, s.thickness)
                    for s in winding)
    if len(winding) == 1:
        return self_part
    arrays = _pair_arrays(winding)
    width = winding[0].width
    try:
        mutual_part = kernels.mutual_pair_sum(*arrays, width, use_gmd)
    except ValueError as exc:
        raise SingularityError(str(exc)) from exc
    return self_part + mutual_part


def skin_depth(resistivity: float, frequency: float) -> float:
    return math.sqrt(resistivity / (math.pi * frequency * MU0))


def series_resistance(segments: SegmentSet, material: Material,
                      frequency: float) -> float:
    """Series resistance (ohm) of the conductor path at ``frequency``.

    R = rho * l_total / (w * t_eff) with t_eff = delta * (1 - exp(-t/delta));
    at f = 0 the full metal thickness conducts.
    """
    if frequency < 0:
        raise FormulaDomainError("frequency must be >= 0")
    conductors = segments.conductors
    l_total = sum(s.length for s in conductors)
    width = conductors[0].width
    thickness = conductors[0].thickness
    if frequency == 0.0:
        t_eff = thickness
    else:
        delta = skin_depth(material.resistivity, frequency)
        t_eff = delta * (1.0 - math.exp(-thickness / delta))
    return material.resistivity * l_total / (width * t_eff)


@dataclass(frozen=True)
class ShuntParasitics:
    """Per-port shunt branch values (port 1, port 2)."""

    cox_p1: float
    cox_p2: float
    csub_p1: float
    csub_p2: float
    rsub_p1: float
    rsub_p2: float


def shunt_parasitics(spec: SpiralSpec,
                     segments: SegmentSet | None = None) -> ShuntParasitics:
    """Conductor-to-substrate and substrate branch values.

    Cox uses the parallel-plate footprint capacitance through the gap
    dielectric (eps_eff = 1 in airgap mode, the oxide permittivity
    otherwise), split half per port. The substrate is a one-pole lossy
    branch parameterized by its bulk resistivity and a fitted effective
    depth.
    """
    if segments is None:
        segments = generate_layout(spec)
    area = sum(s.length * s.width for s in segments.winding)
    eps_eff = 1.0 if spec.dielectric_mode == "airgap" else spec.oxide_rel_permittivity
    cox_half = 0.5 * EPS0 * eps_eff * area / spec.airgap_height
    csub = EPS0 * SUBSTRATE_REL_PERMITTIVITY * (area / 2.0) / SUBSTRATE_EFFECTIVE_DEPTH
    rsub = 2.0 * SUBSTRATE_RESISTIVITY * SUBSTRATE_EFFECTIVE_DEPTH / area
    return ShuntParasitics(cox_half, cox_half, csub, csub, rsub, rsub)


def inter_winding_capacitance(segments: SegmentSet, eps_rel: float) -> float:
    """Sidewall capacitance (F) between adjacent turns.

    Parallel-plate across the turn spacing, summed over the facing
    overlap of each adjacent same-direction side pair.
    """
    winding = segments.winding
    total_overlap = 0.0
    spacing = None
    for i, seg in enumerate(winding):
        j = i + 4  # same side of the next turn outward
        if j >= len(winding):
            break
        other = winding[j]
        a = _axis_of(seg)
        lo = max(min(seg.start[a], seg.end[a]), min(other.start[a], other.end[a]))
        hi = min(max(seg.start[a], seg.end[a]), max(other.start[a], other.end[a]))
        if hi > lo:
            total_overlap += hi - lo
            gap = abs(seg.start[1 - a] - other.start[1 - a]) - seg.width
            spacing = gap if spacing is None else min(spacing, gap)
    if total_overlap == 0.0 or spacing is None or spacing <= 0:
        return 0.0
    thickness = winding[0].thickness
    return EPS0 * eps_rel * thickness * total_overlap / spacing


@dataclass(frozen=True)
class PiModel:
    """Lumped pi-topology equivalent circuit of the inductor two-port.

    The series branch is Ls in series with the (frequency dependent)
    conductor resistance, shunted by the inter-winding capacitance Cs.
    Each port carries Cox in series with the parallel (Csub, Rsub)
    substrate branch.

    ``skin_thickness`` and ``skin_resistivity`` drive the thickness
    correction; if ``skin_resistivity`` is None the resistance stays at
    its DC value for all frequencies.
    """

    ls: float
    rs_dc: float
    cs: float
    cox_p1: float
    cox_p2: float
    csub_p1: float
    csub_p2: float
    rsub_p1: float
    rsub_p2: float
    skin_resistivity: float | None = None
    skin_thickness: float | None = None

    def __post_init__(self):
        problems = []
        if self.ls <= 0:
            problems.append("ls must be > 0")
        if self.rs_dc <= 0:
            problems.append("rs_dc must be > 0")
        for name in ("cs", "cox_p1", "cox_p2", "csub_p1", "csub_p2"):
            if getattr(self, name) < 0:
                problems.append(f"{name} must be >= 0")
        if self.rsub_p1 <= 0 or self.rsub_p2 <= 0:
            problems.append("substrate resistances must be > 0")
        if problems:
            from .errors import SpecError
            raise SpecError(problems)

    def series_resistance(self, frequency: np.ndarray | float) -> np.ndarray:
        f = np.asarray(frequency, dtype=float)
        r = np.full(f.shape, self.rs_dc)
        if self.skin_resistivity is not None and self.skin_thickness is not None:
            nz = f > 0
            delta = np.sqrt(self.skin_resistivity / (np.pi * f[nz] * MU0))
            t_eff = delta * (1.0 - np.exp(-self.skin_thickness / delta))
            r[nz] = self.rs_dc * self.skin_thickness / t_eff
        return r


def device_pi_model(spec: SpiralSpec,
                    segments: SegmentSet | None = None) -> PiModel:
    """Condense a device description into its pi-model."""
    if segments is None:
        segments = generate_layout(spec)
    material = get_material(spec.conductor_material)
    ls = total_inductance(segments)
    rs_dc = series_resistance(segments, material, 0.0)
    eps_side = 1.0 if spec.dielectric_mode == "airgap" else spec.oxide_rel_permittivity
    cs = inter_winding_capacitance(segments, eps_side)
    shunt = shunt_parasitics(spec, segments)
    return PiModel(
        ls=ls, rs_dc=rs_dc, cs=cs,
        cox_p1=shunt.cox_p1, cox_p2=shunt.cox_p2,
        csub_p1=shunt.csub_p1, csub_p2=shunt.csub_p2,
        rsub_p1=shunt.rsub_p1, rsub_p2=shunt.rsub_p2,
        skin_resistivity=material.resistivity,
        skin_thickness=spec.metal_thickness,
    )


def pi_to_network(model: PiModel, frequencies: np.ndarray) -> TwoPortNetwork:
    """Exact nodal Y-parameters of the pi circuit on the given grid.

    Reciprocal by construction (Y12 == Y21 bitwise).
    """
    f = np.asarray(frequencies, dtype=float)
    omega = 2.0 * np.pi * f
    jw = 1j * omega
    r_series = model.series_resistance(f)
    y_series = 1.0 / (r_series + jw * model.ls) + jw * model.cs

    def shunt_branch(cox, csub, rsub):
        y_sub = 1.0 / rsub + jw * csub
        y_cox = jw * cox
        with np.errstate(divide="ignore", invalid="ignore"):
            combined = np.where(np.abs(y_cox + y_sub) > 0.0,
                                y_cox * y_sub / (y_cox + y_sub), 0.0)
        return combined

    ysh1 = shunt_branch(model.cox_p1, model.csub_p1, model.rsub_p1)
    ysh2 = shunt_branch(model.cox_p2, model.csub_p2, model.rsub_p2)

    mats = np.empty((f.size, 2, 2), dtype=complex)
    mats[:, 0, 0] = y_series + ysh1
    mats[:, 1, 1] = y_series + ysh2
    mats[:, 0, 1] = -y_series
    mats[:, 1, 0] = -y_series
    return TwoPortNetwork(frequencies=f, matrices=mats, kind="Y")


def q_factor(net: TwoPortNetwork, index: int) -> float:
    """Q = -Im(Y11) / Re(Y11) at one grid point."""
    if net.kind != "Y":
        raise FormulaDomainError("q_factor needs Y-parameters")
    y11 = net.matrices[index, 0, 0]
    if y11.real == 0.0:
        raise SingularityError(
            f"Re(Y11) = 0 at {net.frequencies[index]:g} Hz; Q undefined for a "
            "lossless branch"
        )
    return float(-y11.imag / y11.real)


def q_curve(net: TwoPortNetwork) -> QCurve:
    """Q and effective inductance over the grid, with the peak marker.

    l_eff(f) = Im(1/Y11) / (2 pi f). Grid points with Re(Y11) = 0 are
    skipped and reported; if every point is singular the curve is empty
    and an error is raised.
    """
    if net.kind != "Y":
        raise FormulaDomainError("q_curve needs Y-parameters")
    if net.n_points < 3:
        raise FormulaDomainError("q_curve needs at least 3 frequency points")
    y11 = net.matrices[:, 0, 0]
    good = y11.real != 0.0
    if not np.any(good):
        raise SingularityError("all grid points are lossless; empty Q curve")
    f = net.frequencies[good]
    y = y11[good]
    q = -y.imag / y.real
    l_eff = (1.0 / y).imag / (2.0 * np.pi * f)
    peak = int(np.argmax(q))
    return QCurve(
        frequencies=f,
        q_values=q,
        l_eff=l_eff,
        q_max=float(q[peak]),
        f_peak=float(f[peak]),
        skipped_frequencies=net.frequencies[~good],
    )


def analyze_device(spec: SpiralSpec,
                   frequencies: np.ndarray | None = None) -> tuple[PiModel, TwoPortNetwork, QCurve]:
    """Full electrical pipeline: layout -> pi-model -> Y(f) -> Q(f)."""
    if frequencies is None:
        frequencies = default_frequency_grid()
    segments = generate_layout(spec)
    model = device_pi_model(spec, segments)
    net = pi_to_network(model, frequencies)
    return model, net, q_curve(net)
