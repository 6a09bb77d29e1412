"""Parametric square-spiral layout generation and validation.

Winding convention (fixed for the whole toolkit): the spiral winds
outward counterclockwise starting along +x from the inner opening.
Side lengths grow by one pitch (trace width + spacing) every two sides:

    side(k) = inner_diameter + pitch * (k // 2),   k = 0 .. 4*turns-1

All coordinates are centerline coordinates in meters. The winding plane
sits at z = airgap_height + metal_thickness/2, the lead underpass at
z = lead_gap + metal_thickness/2, and the X-beam arms directly under the
winding at z = airgap_height - laminate_thickness/2.

The lead is a single straight segment running along -x from the spiral's
inner terminal to ``LEAD_OVERHANG`` beyond the winding's outer edge; pad
geometry is not modeled. Its two endpoints are the mechanically anchored
points of the basic suspended device (the inner one acts as the support
pillar under the spiral center). X-beam arms join opposite corners of
the winding bounding box and, when anchored, add four more anchor points.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import SpecError
from .materials import Material

# How far the lead extends past the outermost winding edge (m).
LEAD_OVERHANG = 20e-6

_DIRS = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


@dataclass(frozen=True)
class XBeamSpec:
    """Crossed stiffening beams under the winding.

    ``layers`` lists the laminate bottom-up as (material name, thickness in
    meters). The default is the 0.6 um oxide base with a 0.1 um nitride cap.
    """

    arm_width: float = 10e-6
    layers: tuple[tuple[str, float], ...] = (("SiO2", 0.6e-6), ("Si3N4", 0.1e-6))
    anchored: bool = True

    @property
    def thickness(self) -> float:
        return sum(t for _, t in self.layers)


@dataclass(frozen=True)
class SpiralSpec:
    """Full parametric description of one suspended spiral inductor.

    Lengths in meters; ``dielectric_mode`` selects what fills the gap
    under the winding ("airgap" or "oxide").
    """

    inner_diameter: float
    trace_width: float
    spacing: float
    turns: int
    metal_thickness: float
    airgap_height: float
    lead_gap: float
    dielectric_mode: str = "airgap"
    conductor_material: str = "Cu"
    xbeam: XBeamSpec | None = None
    oxide_rel_permittivity: float = 3.9

    @property
    def pitch(self) -> float:
        return self.trace_width + self.spacing

    def with_mode(self, mode: str) -> "SpiralSpec":
        return replace(self, dielectric_mode=mode)

    def with_xbeam(self, xbeam: XBeamSpec | None) -> "SpiralSpec":
        return replace(self, xbeam=xbeam)


@dataclass(frozen=True)
class Segment:
    """One straight rectangular conductor (or beam) segment, centerline
    coordinates in meters."""

    start: tuple[float, float, float]
    end: tuple[float, float, float]
    width: float
    thickness: float
    layer_tag: str  # winding | lead | xbeam_arm

    @property
    def length(self) -> float:
        dx = self.end[0] - self.start[0]
        dy = self.end[1] - self.start[1]
        dz = self.end[2] - self.start[2]
        return float(np.sqrt(dx * dx + dy * dy + dz * dz))

    @property
    def direction(self) -> tuple[float, float, float]:
        length = self.length
        return (
            (self.end[0] - self.start[0]) / length,
            (self.end[1] - self.start[1]) / length,
            (self.end[2] - self.start[2]) / length,
        )


@dataclass(frozen=True)
class SegmentSet:
    """The device unrolled into straight segments plus anchor points.

    ``anchors`` are the mechanically fixed points (3D, meters).
    ``conductor`` and ``xbeam_layers`` carry the material annotations the
    structural model needs to assemble sections.
    """

    segments: tuple[Segment, ...]
    anchors: tuple[tuple[float, float, float], ...]
    conductor: str = "Cu"
    xbeam_arm_width: float | None = None
    xbeam_layers: tuple[tuple[str, float], ...] | None = None

    def __post_init__(self):
        if not self.segments:
            raise SpecError(["segment set must contain at least one segment"])
        for i, seg in enumerate(self.segments):
            if seg.length <= 0.0:
                raise SpecError([f"segment {i} has zero length"])

    def by_tag(self, *tags: str) -> tuple[Segment, ...]:
        return tuple(s for s in self.segments if s.layer_tag in tags)

    @property
    def winding(self) -> tuple[Segment, ...]:
        return self.by_tag("winding")

    @property
    def conductors(self) -> tuple[Segment, ...]:
        return self.by_tag("winding", "lead")

    def winding_bbox(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) over winding centerline endpoints."""
        pts = [p for s in self.winding for p in (s.start, s.end)]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)


def validate_spec(spec: SpiralSpec) -> list[str]:
    """Return the list of violated invariants (empty when valid)."""
    v: list[str] = []
    for name in ("inner_diameter", "trace_width", "metal_thickness",
                 "airgap_height", "lead_gap"):
        if getattr(spec, name) <= 0:
            v.append(f"{name} must be > 0")
    if spec.spacing <= 0:
        v.append("spacing must be > 0 (adjacent turns would short)")
    if not isinstance(spec.turns, int) or spec.turns < 1:
        v.append("turns must be an integer >= 1")
    if spec.dielectric_mode not in ("airgap", "oxide"):
        v.append(f"dielectric_mode must be 'airgap' or 'oxide', got {spec.dielectric_mode!r}")
    if spec.oxide_rel_permittivity <= 0:
        v.append("oxide_rel_permittivity must be > 0")
    if spec.xbeam is not None:
        if not spec.xbeam.layers:
            v.append("xbeam must have at least one layer")
        elif any(t <= 0 for _, t in spec.xbeam.layers):
            v.append("xbeam layer thicknesses must be > 0")
        if spec.xbeam.arm_width <= 0:
            v.append("xbeam arm_width must be > 0")
    return v


def winding_path(spec: SpiralSpec) -> list[tuple[float, float]]:
    """Plan-view corner points of the winding centerline, inner terminal
    first. 4*turns segments connect consecutive points."""
    pts = [(0.0, 0.0)]
    x, y = 0.0, 0.0
    for k in range(4 * spec.turns):
        side = spec.inner_diameter + spec.pitch * (k // 2)
        dx, dy = _DIRS[k % 4]
        x, y = x + dx * side, y + dy * side
        pts.append((x, y))
    return pts


def generate_layout(spec: SpiralSpec) -> SegmentSet:
    """Realize a spec as segments: winding, lead underpass and optional
    X-beam arms, plus the anchored points.

    Raises SpecError listing every violated invariant when the spec is
    invalid.
    """
    violations = validate_spec(spec)
    if violations:
        raise SpecError(violations)

    t = spec.metal_thickness
    z_wind = spec.airgap_height + t / 2.0
    z_lead = spec.lead_gap + t / 2.0

    pts = winding_path(spec)
    segments = [
        Segment((x0, y0, z_wind), (x1, y1, z_wind), spec.trace_width, t, "winding")
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:])
    ]

    xmin = min(p[0] for p in pts)
    ymin = min(p[1] for p in pts)
    xmax = max(p[0] for p in pts)
    ymax = max(p[1] for p in pts)

    lead_end = (xmin - LEAD_OVERHANG, 0.0, z_lead)
    lead_start = (0.0, 0.0, z_lead)
    segments.append(Segment(lead_start, lead_end, spec.trace_width, t, "lead"))
    anchors = [lead_start, lead_end]

    arm_width = None
    layers = None
    if spec.xbeam is not None:
        arm_width = spec.xbeam.arm_width
        layers = tuple(spec.xbeam.layers)
        z_arm = spec.airgap_height - spec.xbeam.thickness / 2.0
        t_arm = spec.xbeam.thickness
        corners = [
            ((xmin, ymin, z_arm), (xmax, ymax, z_arm)),
            ((xmin, ymax, z_arm), (xmax, ymin, z_arm)),
        ]
        for a, b in corners:
            segments.append(Segment(a, b, arm_width, t_arm, "xbeam_arm"))
            if spec.xbeam.anchored:
                anchors.extend([a, b])

    return SegmentSet(
        segments=tuple(segments),
        anchors=tuple(anchors),
        conductor=spec.conductor_material,
        xbeam_arm_width=arm_width,
        xbeam_layers=layers,
    )


def winding_side_lengths(segments: SegmentSet) -> np.ndarray:
    return np.array([s.length for s in segments.winding])


def total_winding_length(segments: SegmentSet) -> float:
    return float(winding_side_lengths(segments).sum())


def conductor_mass(segments: SegmentSet, material: Material) -> tuple[float, np.ndarray]:
    """Mass of the conductor segments (winding + lead).

    Returns (total_kg, per_segment_kg) with per-segment masses in segment
    order, so individual strips can be pulled out for the stability
    analysis.
    """
    conductors = segments.conductors
    if not conductors:
        raise SpecError(["no conductor segments present"])
    per = np.array([s.length * s.width * s.thickness * material.density
                    for s in conductors])
    return float(per.sum()), per
