"""Structural model: analytic strip formulas and a 3D frame FEM.

The analytic layer brackets the winding between its most and least
compliant simple strips (longest and shortest sides). A strip is
idealized as a cantilever whose flexing length is the clear span between
the corner junction blocks: at each end the joint region spanning the
neighbouring trace width plus the turn spacing is treated as rigid,

    L_eff = side - 2 * (trace_width + spacing)

floored at 10% of the side for degenerate geometries. Tip stiffness
follows kappa = E * w * t^3 / (4 * L^3) (identical to 3EI/L^3 with
I = w t^3 / 12), shock deflection is b = m a / kappa and the resonance
estimate is f = sqrt(kappa / m) / 2pi with the strip's full mass.

The FEM layer discretizes the full segment geometry into 12-DOF
Euler-Bernoulli space-frame elements (axial + St. Venant torsion + two
bending planes; shear deformation neglected, slenderness ~300). Nodes
are merged by coordinate within 1e-12 m. X-beam crossings are meshed
exactly: the plan intersection point becomes a node of both the winding
and the arm chain, tied by a short vertical connector with the conductor
cross-section (its stiffness dwarfs the suspended spans). The winding's
inner terminal is tied to the anchored inner lead end the same way - the
support pillar of the basic suspended device.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .errors import FormulaDomainError, SpecError, StabilityError
from .geometry import SegmentSet, SpiralSpec, XBeamSpec, generate_layout, winding_side_lengths
from .materials import Material, default_table, get_material

STANDARD_GRAVITY = 9.8
DEFAULT_SHOCK_ACCEL = 20.0 * STANDARD_GRAVITY
DEFAULT_DEFLECTION_LIMIT = 1e-6

# junction allowance per strip end: neighbour trace width + spacing
_CLEAR_SPAN_FLOOR = 0.1
_NODE_KEY_SCALE = 1e12           # merge nodes within 1e-12 m
_RESIDUAL_TOL = 1e-8

_DOF_NAMES = ("ux", "uy", "uz", "rx", "ry", "rz")


# ---------------------------------------------------------------------------
# analytic strip formulas


def cantilever_stiffness(youngs_modulus: float, width: float,
                         thickness: float, length: float) -> float:
    """Tip stiffness (N/m) of a rectangular cantilever, deflection along
    the thickness direction: E w t^3 / (4 L^3)."""
    if min(youngs_modulus, width, thickness, length) <= 0:
        raise FormulaDomainError("all cantilever parameters must be > 0")
    return youngs_modulus * width * thickness ** 3 / (4.0 * length ** 3)


def shock_deflection(kappa: float, mass: float, accel: float) -> float:
    """Quasi-static deflection b = m a / kappa of a strip under a shock."""
    if kappa <= 0:
        raise FormulaDomainError("kappa must be > 0")
    return mass * accel / kappa


def resonant_frequency(kappa: float, mass: float) -> float:
    """Single-DOF resonance estimate f = sqrt(kappa/m) / 2pi."""
    if kappa <= 0 or mass <= 0:
        raise FormulaDomainError("kappa and mass must be > 0")
    return math.sqrt(kappa / mass) / (2.0 * math.pi)


def clear_span(side_length: float, trace_width: float, spacing: float) -> float:
    span = side_length - 2.0 * (trace_width + spacing)
    return max(span, _CLEAR_SPAN_FLOOR * side_length)


@dataclass(frozen=True)
class StripAnalysis:
    """Cantilever idealization of one winding strip."""

    side_length: float
    span: float
    stiffness: float
    mass: float
    deflection: float
    f_resonant: float


def analyze_strip(spec: SpiralSpec, side_length: float,
                  accel: float = DEFAULT_SHOCK_ACCEL,
                  material: Material | None = None) -> StripAnalysis:
    if material is None:
        material = get_material(spec.conductor_material)
    span = clear_span(side_length, spec.trace_width, spec.spacing)
    kappa = cantilever_stiffness(material.youngs_modulus, spec.trace_width,
                                 spec.metal_thickness, span)
    mass = material.density * span * spec.trace_width * spec.metal_thickness
    return StripAnalysis(
        side_length=side_length,
        span=span,
        stiffness=kappa,
        mass=mass,
        deflection=shock_deflection(kappa, mass, accel),
        f_resonant=resonant_frequency(kappa, mass),
    )


# ---------------------------------------------------------------------------
# sections and the frame model


def rectangle_torsion_constant(width: float, thickness: float) -> float:
    """St. Venant torsion constant of a solid rectangle (standard
    approximation, exact to ~0.1% for thin strips)."""
    a, b = max(width, thickness), min(width, thickness)
    return a * b ** 3 * (1.0 / 3.0 - 0.21 * (b / a) * (1.0 - b ** 4 / (12.0 * a ** 4)))


@dataclass(frozen=True)
class BeamSection:
    """Rectangular beam cross-section, optionally a bottom-up laminate.

    For laminates the bending rigidity about the in-plane axis uses the
    transformed-section method (modulus-weighted neutral axis); torsion
    sums the thin-strip contribution of each layer.
    """

    width: float
    thickness: float
    layers: tuple[tuple[Material, float], ...] | None = None

    def __post_init__(self):
        if self.width <= 0 or self.thickness <= 0:
            raise SpecError(["section width and thickness must be > 0"])
        if self.layers is not None and not self.layers:
            raise SpecError(["laminate section needs at least one layer"])

    @property
    def area(self) -> float:
        return self.width * self.thickness

    @property
    def inertia_y(self) -> float:
        """Bending about the in-plane transverse axis (out-of-plane
        deflection)."""
        return self.width * self.thickness ** 3 / 12.0

    @property
    def inertia_z(self) -> float:
        return self.thickness * self.width ** 3 / 12.0

    def rigidity(self, material: Material) -> tuple[float, float, float, float]:
        """(EA, EIy, EIz, GJ) for frame assembly."""
        w = self.width
        if self.layers is None:
            e = material.youngs_modulus
            g = material.shear_modulus
            return (e * self.area, e * self.inertia_y, e * self.inertia_z,
                    g * rectangle_torsion_constant(w, self.thickness))
        z = 0.0
        ea = 0.0
        moment = 0.0
        for mat, t in self.layers:
            ea_i = mat.youngs_modulus * w * t
            ea += ea_i
            moment += ea_i * (z + t / 2.0)
            z += t
        z_bar = moment / ea
        eiy = 0.0
        eiz = 0.0
        gj = 0.0
        z = 0.0
        for mat, t in self.layers:
            zc = z + t / 2.0
            eiy += mat.youngs_modulus * (w * t ** 3 / 12.0 + w * t * (zc - z_bar) ** 2)
            eiz += mat.youngs_modulus * t * w ** 3 / 12.0
            gj += mat.shear_modulus * w * t ** 3 / 3.0
            z += t
        return ea, eiy, eiz, gj


@dataclass(frozen=True)
class FrameElement:
    node_a: int
    node_b: int
    section: BeamSection
    material: Material
    tag: str


@dataclass
class FrameModel:
    """FEM discretization: nodes, elements, constraints and loads.

    ``fixed_dofs`` holds (node, dof) pairs with dof 0..5 = (ux, uy, uz,
    rx, ry, rz); ``loads`` maps node -> 6-component force/moment vector.
    ``winding_nodes`` are the candidate load points for the impact scan.
    """

    nodes: np.ndarray
    elements: list[FrameElement]
    fixed_dofs: set[tuple[int, int]]
    loads: dict[int, np.ndarray] = field(default_factory=dict)
    winding_nodes: tuple[int, ...] = ()

    @property
    def n_dofs(self) -> int:
        return 6 * self.nodes.shape[0]

    def add_load(self, node: int, force: np.ndarray) -> None:
        self.loads[node] = np.asarray(force, dtype=float)


class _Mesher:
    def __init__(self):
        self.points: list[tuple[float, float, float]] = []
        self._key_to_id: dict[tuple[int, int, int], int] = {}
        self.elements: list[FrameElement] = []

    def node(self, p: tuple[float, float, float]) -> int:
        key = (round(p[0] * _NODE_KEY_SCALE), round(p[1] * _NODE_KEY_SCALE),
               round(p[2] * _NODE_KEY_SCALE))
        nid = self._key_to_id.get(key)
        if nid is None:
            nid = len(self.points)
            self._key_to_id[key] = nid
            self.points.append(p)
        return nid

    def chain(self, p0, p1, n_elements: int, section: BeamSection,
              material: Material, tag: str,
              forced: list[float] | None = None) -> tuple[list[int], dict[float, int]]:
        """Subdivide p0->p1 into n_elements equal elements, additionally
        splitting at the ``forced`` parameters. Returns the chain node ids
        and the node id at each forced parameter."""
        length = math.dist(p0, p1)
        # split points closer than twice the node-key resolution would
        # collapse into one mesh node; merge them up front
        min_gap = max(1e-9, 4.0 / (length * _NODE_KEY_SCALE))
        params = [i / n_elements for i in range(n_elements + 1)]
        for t in forced or ():
            params.append(min(1.0, max(0.0, t)))
        params = sorted(set(params))
        merged = [params[0]]
        for t in params[1:]:
            if t - merged[-1] > min_gap:
                merged.append(t)
            # keep exact chain ends
        if merged[-1] != 1.0:
            merged[-1] = 1.0
        ids = []
        for t in merged:
            p = (p0[0] + (p1[0] - p0[0]) * t,
                 p0[1] + (p1[1] - p0[1]) * t,
                 p0[2] + (p1[2] - p0[2]) * t)
            ids.append(self.node(p))
        for a, b in zip(ids[:-1], ids[1:]):
            if a == b:
                continue
            self.elements.append(FrameElement(a, b, section, material, tag))
        forced_map = {}
        for t in forced or ():
            tc = min(1.0, max(0.0, t))
            pos = min(range(len(merged)), key=lambda i: abs(merged[i] - tc))
            forced_map[t] = ids[pos]
        return ids, forced_map


def _plan_intersection(a0, a1, b0, b1) -> tuple[float, float] | None:
    """Parameters (t on a, u on b) of the 2D intersection, or None."""
    rx, ry = a1[0] - a0[0], a1[1] - a0[1]
    qx, qy = b1[0] - b0[0], b1[1] - b0[1]
    denom = rx * qy - ry * qx
    if abs(denom) < 1e-30:
        return None
    dx, dy = b0[0] - a0[0], b0[1] - a0[1]
    t = (dx * qy - dy * qx) / denom
    u = (dx * ry - dy * rx) / denom
    eps = 1e-9
    if -eps <= t <= 1.0 + eps and -eps <= u <= 1.0 + eps:
        return min(1.0, max(0.0, t)), min(1.0, max(0.0, u))
    return None


def build_frame(segments: SegmentSet, elements_per_segment: int = 4,
                table: dict[str, Material] | None = None) -> FrameModel:
    """Discretize a segment set into a constrained frame model.

    Each segment is split into ``elements_per_segment`` equal elements;
    X-beam crossing points are inserted as extra nodes so the vertical
    connectors land exactly on both chains. Anchor points are fully fixed
    (all 6 DOFs).
    """
    if elements_per_segment < 1:
        raise FormulaDomainError("elements_per_segment must be >= 1")
    if not segments.anchors:
        raise StabilityError("segment set has no anchors; model would float")
    if table is None:
        table = default_table()
    conductor = get_material(segments.conductor, table)

    arm_section = None
    arm_material = conductor
    if segments.xbeam_layers is not None:
        layer_mats = tuple((get_material(name, table), t)
                           for name, t in segments.xbeam_layers)
        total_t = sum(t for _, t in segments.xbeam_layers)
        arm_section = BeamSection(width=segments.xbeam_arm_width,
                                  thickness=total_t, layers=layer_mats)
        arm_material = layer_mats[0][0]

    mesher = _Mesher()
    arms = segments.by_tag("xbeam_arm")
    seg_forced: dict[int, list[float]] = {}
    arm_forced: dict[int, list[float]] = {}
    crossings: list[tuple[int, float, int, float]] = []  # (seg idx, t, arm idx, u)
    for si, seg in enumerate(segments.segments):
        if seg.layer_tag != "winding":
            continue
        for ai, arm in enumerate(arms):
            hit = _plan_intersection(seg.start, seg.end, arm.start, arm.end)
            if hit is not None:
                t, u = hit
                seg_forced.setdefault(si, []).append(t)
                arm_forced.setdefault(ai, []).append(u)
                crossings.append((si, t, ai, u))
    if len(arms) == 2:
        hit = _plan_intersection(arms[0].start, arms[0].end,
                                 arms[1].start, arms[1].end)
        if hit is not None:
            arm_forced.setdefault(0, []).append(hit[0])
            arm_forced.setdefault(1, []).append(hit[1])

    winding_nodes: list[int] = []
    seg_maps: dict[int, dict[float, int]] = {}
    arm_maps: dict[int, dict[float, int]] = {}
    arm_idx = 0
    for si, seg in enumerate(segments.segments):
        if seg.layer_tag == "xbeam_arm":
            if arm_section is None:
                raise SpecError(["xbeam_arm segments but no laminate annotation"])
            ids, fmap = mesher.chain(seg.start, seg.end, elements_per_segment,
                                     arm_section, arm_material, "xbeam_arm",
                                     arm_forced.get(arm_idx))
            arm_maps[arm_idx] = fmap
            arm_idx += 1
        else:
            section = BeamSection(width=seg.width, thickness=seg.thickness)
            ids, fmap = mesher.chain(seg.start, seg.end, elements_per_segment,
                                     section, conductor, seg.layer_tag,
                                     seg_forced.get(si))
            seg_maps[si] = fmap
            if seg.layer_tag == "winding":
                winding_nodes.extend(ids)

    # vertical connectors: winding <-> arm at each crossing
    seen_pairs = set()
    for si, t, ai, u in crossings:
        na = seg_maps[si][t]
        nb = arm_maps[ai][u]
        if na == nb or (na, nb) in seen_pairs:
            continue
        seen_pairs.add((na, nb))
        seg = segments.segments[si]
        section = BeamSection(width=seg.width, thickness=seg.thickness)
        mesher.elements.append(FrameElement(na, nb, section, conductor, "connector"))

    # pillar connector: winding inner terminal -> anchored inner lead end
    winding_segs = [s for s in segments.segments if s.layer_tag == "winding"]
    lead_segs = [s for s in segments.segments if s.layer_tag == "lead"]
    if winding_segs and lead_segs:
        term = winding_segs[0].start
        lead_inner = lead_segs[0].start
        if term[:2] == lead_inner[:2] and term != lead_inner:
            na = mesher.node(term)
            nb = mesher.node(lead_inner)
            section = BeamSection(width=winding_segs[0].width,
                                  thickness=winding_segs[0].thickness)
            mesher.elements.append(FrameElement(na, nb, section, conductor,
                                                "connector"))

    fixed: set[tuple[int, int]] = set()
    for p in segments.anchors:
        nid = mesher._key_to_id.get((round(p[0] * _NODE_KEY_SCALE),
                                     round(p[1] * _NODE_KEY_SCALE),
                                     round(p[2] * _NODE_KEY_SCALE)))
        if nid is None:
            raise SpecError([f"anchor point {p} is not a mesh node"])
        fixed.update((nid, d) for d in range(6))
    if not fixed:
        raise StabilityError("no anchored nodes; model would float")

    nodes = np.array(mesher.points, dtype=float)
    uniq_winding = tuple(dict.fromkeys(winding_nodes))
    return FrameModel(nodes=nodes, elements=mesher.elements, fixed_dofs=fixed,
                      winding_nodes=uniq_winding)


# ---------------------------------------------------------------------------
# assembly and solving


def assemble_global_stiffness(model: FrameModel) -> np.ndarray:
    conn = np.empty((len(model.elements), 2), dtype=np.int64)
    props = np.empty((len(model.elements), 4))
    for i, el in enumerate(model.elements):
        conn[i, 0] = el.node_a
        conn[i, 1] = el.node_b
        props[i] = el.section.rigidity(el.material)
    coords = np.ascontiguousarray(model.nodes)
    return kernels.assemble_stiffness(coords, conn, props)


def _free_mask(model: FrameModel) -> np.ndarray:
    if not model.fixed_dofs:
        raise StabilityError(
            "model has no constrained DOFs; rigid-body modes present"
        )
    mask = np.ones(model.n_dofs, dtype=bool)
    for node, dof in model.fixed_dofs:
        mask[6 * node + dof] = False
    return mask


def _dof_name(model: FrameModel, free_index: int, free: np.ndarray) -> str:
    g = int(np.flatnonzero(free)[free_index])
    return f"node {g // 6} {_DOF_NAMES[g % 6]}"


def _factorize(model: FrameModel):
    K = assemble_global_stiffness(model)
    free = _free_mask(model)
    kff = K[np.ix_(free, free)]
    zero_diag = np.flatnonzero(np.diag(kff) == 0.0)
    if zero_diag.size:
        names = ", ".join(_dof_name(model, i, free) for i in zero_diag[:8])
        raise StabilityError(f"unconstrained DOFs with zero stiffness: {names}")
    try:
        factor = scipy.linalg.cho_factor(kff, check_finite=False)
    except np.linalg.LinAlgError as exc:
        match = re.match(r"(\d+)", str(exc))
        if match:
            name = _dof_name(model, int(match.group(1)) - 1, free)
            raise StabilityError(
                f"stiffness matrix is not positive definite near {name}; "
                "check constraints"
            ) from exc
        raise StabilityError(f"singular stiffness matrix: {exc}") from exc
    return kff, factor, free


def solve_static(model: FrameModel) -> np.ndarray:
    """Linear static solve; returns (n_nodes, 6) displacements.

    The reduced system is solved by Cholesky factorization and the
    residual |K u - F| / |F| is verified below 1e-8.
    """
    kff, factor, free = _factorize(model)
    f_full = np.zeros(model.n_dofs)
    for node, vec in model.loads.items():
        f_full[6 * node:6 * node + 6] += vec
    f_free = f_full[free]
    u_free = scipy.linalg.cho_solve(factor, f_free, check_finite=False)
    f_norm = np.linalg.norm(f_free)
    if f_norm > 0.0:
        residual = np.linalg.norm(kff @ u_free - f_free) / f_norm
        if residual >= _RESIDUAL_TOL:
            raise StabilityError(f"solver residual {residual:.2e} exceeds "
                                 f"{_RESIDUAL_TOL:.0e}")
    u = np.zeros(model.n_dofs)
    u[free] = u_free
    return u.reshape(-1, 6)


def impact_scan(model: FrameModel,
                deflection_limit: float = DEFAULT_DEFLECTION_LIMIT
                ) -> tuple[float, int]:
    """(force, worst node) of the unit-load scan over winding nodes.

    A unit vertical load is applied at every candidate winding node (one
    factorization, many right-hand sides); by linearity the limiting
    force is deflection_limit / max unit deflection. Candidates are
    scanned in node-index order, so ties resolve deterministically.
    """
    if deflection_limit <= 0:
        raise FormulaDomainError("deflection_limit must be > 0")
    kff, factor, free = _factorize(model)
    gmap = -np.ones(model.n_dofs, dtype=np.int64)
    gmap[free] = np.arange(int(free.sum()))
    rows = []
    candidates = []
    for node in model.winding_nodes:
        r = gmap[6 * node + 2]  # uz
        if r >= 0:
            rows.append(int(r))
            candidates.append(node)
    if not rows:
        raise StabilityError("no free winding nodes to load")
    rhs = np.zeros((int(free.sum()), len(rows)))
    for col, r in enumerate(rows):
        rhs[r, col] = 1.0
    sol = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    residual = np.linalg.norm(kff @ sol - rhs) / math.sqrt(len(rows))
    if residual >= _RESIDUAL_TOL:
        raise StabilityError(f"scan residual {residual:.2e} exceeds "
                             f"{_RESIDUAL_TOL:.0e}")
    unit_deflections = sol[rows, np.arange(len(rows))]
    worst = int(np.argmax(unit_deflections))
    max_deflection = float(unit_deflections[worst])
    if max_deflection <= 0.0:
        raise StabilityError("scan produced no positive deflection")
    return deflection_limit / max_deflection, candidates[worst]


def max_impact_force(model: FrameModel,
                     deflection_limit: float = DEFAULT_DEFLECTION_LIMIT) -> float:
    """Force (N) that deflects the most compliant winding point by the
    limit; see impact_scan."""
    force, _ = impact_scan(model, deflection_limit)
    return force


# ---------------------------------------------------------------------------
# report composition


@dataclass(frozen=True)
class MechReport:
    """Joint analytic + FEM stability summary for one device."""

    kappa_outer: float
    kappa_inner: float
    deflection_outer: float
    deflection_inner: float
    f_resonant: float
    accel: float
    deflection_limit: float
    f_max_impact_pillar: float | None = None
    f_max_impact_xbeam: float | None = None

    @property
    def enhancement_ratio(self) -> float | None:
        if self.f_max_impact_pillar and self.f_max_impact_xbeam:
            return self.f_max_impact_xbeam / self.f_max_impact_pillar
        return None

    def to_dict(self) -> dict:
        out = {
            "kappa_outer_n_per_m": self.kappa_outer,
            "kappa_inner_n_per_m": self.kappa_inner,
            "shock_deflection_outer_m": self.deflection_outer,
            "shock_deflection_inner_m": self.deflection_inner,
            "f_resonant_hz": self.f_resonant,
            "shock_accel_m_per_s2": self.accel,
            "deflection_limit_m": self.deflection_limit,
        }
        if self.f_max_impact_pillar is not None:
            out["f_max_impact_pillar_n"] = self.f_max_impact_pillar
        if self.f_max_impact_xbeam is not None:
            out["f_max_impact_xbeam_n"] = self.f_max_impact_xbeam
        if self.enhancement_ratio is not None:
            out["xbeam_enhancement_ratio"] = self.enhancement_ratio
        return out


def analyze_stability(spec: SpiralSpec, *, modes: tuple[str, ...] = ("auto",),
                      elements_per_segment: int = 4,
                      deflection_limit: float = DEFAULT_DEFLECTION_LIMIT,
                      accel: float = DEFAULT_SHOCK_ACCEL,
                      table: dict[str, Material] | None = None) -> MechReport:
    """Analytic strip metrics plus FEM impact forces.

    ``modes`` selects the FEM configurations: "pillar" (supports only),
    "xbeam" (crossed beams added; the default X-beam is used when the
    spec does not carry one) or "auto" (follow the spec).
    """
    material = get_material(spec.conductor_material, table)
    sides = winding_side_lengths(generate_layout(spec.with_xbeam(None)))
    outer = analyze_strip(spec, float(sides.max()), accel, material)
    inner = analyze_strip(spec, float(sides.min()), accel, material)

    f_pillar = None
    f_xbeam = None
    for mode in modes:
        if mode == "auto":
            mode = "xbeam" if spec.xbeam is not None else "pillar"
        if mode == "pillar":
            layout = generate_layout(spec.with_xbeam(None))
            model = build_frame(layout, elements_per_segment, table)
            f_pillar = max_impact_force(model, deflection_limit)
        elif mode == "xbeam":
            xspec = spec if spec.xbeam is not None else spec.with_xbeam(XBeamSpec())
            layout = generate_layout(xspec)
            model = build_frame(layout, elements_per_segment, table)
            f_xbeam = max_impact_force(model, deflection_limit)
        else:
            raise FormulaDomainError(f"unknown mode {mode!r}")

    return MechReport(
        kappa_outer=outer.stiffness,
        kappa_inner=inner.stiffness,
        deflection_outer=outer.deflection,
        deflection_inner=inner.deflection,
        f_resonant=outer.f_resonant,
        accel=accel,
        deflection_limit=deflection_limit,
        f_max_impact_pillar=f_pillar,
        f_max_impact_xbeam=f_xbeam,
    )
