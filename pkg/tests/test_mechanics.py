import math

import numpy as np
import pytest

from suspind.errors import FormulaDomainError, StabilityError
from suspind.geometry import Segment, SegmentSet, generate_layout
from suspind.materials import Material, get_material
from suspind.mechanics import (BeamSection, FrameElement, FrameModel,
                               analyze_stability, analyze_strip,
                               assemble_global_stiffness, build_frame,
                               cantilever_stiffness, clear_span, impact_scan,
                               max_impact_force, rectangle_torsion_constant,
                               resonant_frequency, shock_deflection,
                               solve_static)

CU = get_material("Cu")


class TestAnalyticFormulas:
    def test_cantilever_golden(self):
        # E w t^3 / (4 L^3) at E=130 GPa, w=10um, t=1um, L=340um
        k = cantilever_stiffness(130e9, 10e-6, 1e-6, 340e-6)
        assert k == pytest.approx(8.268878486e-3, rel=1e-9)

    def test_cantilever_matches_3ei_over_l3(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            e, w, t, ln = rng.uniform(0.1, 10, 4)
            i = w * t ** 3 / 12
            assert cantilever_stiffness(e, w, t, ln) == \
                pytest.approx(3 * e * i / ln ** 3, rel=1e-12)

    def test_cubic_thickness_scaling(self):
        base = cantilever_stiffness(130e9, 10e-6, 1e-6, 340e-6)
        assert cantilever_stiffness(130e9, 10e-6, 2e-6, 340e-6) == \
            pytest.approx(8 * base, rel=1e-12)

    def test_monotone_in_width_at_fixed_length(self):
        widths = np.linspace(5e-6, 20e-6, 7)
        values = [cantilever_stiffness(130e9, w, 1e-6, 300e-6) for w in widths]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_identity_normalization(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            e, w, t, ln = rng.uniform(0.5, 5, 4)
            k = cantilever_stiffness(e, w, t, ln)
            assert k * 4 * ln ** 3 / (e * w * t ** 3) == pytest.approx(1.0, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(FormulaDomainError):
            cantilever_stiffness(130e9, 0.0, 1e-6, 1e-4)

    def test_shock_deflection(self):
        assert shock_deflection(2.0, 4.0, 3.0) == 6.0
        assert shock_deflection(0.015, 1e-11, 0.0) == 0.0
        with pytest.raises(FormulaDomainError):
            shock_deflection(0.0, 1.0, 1.0)

    def test_resonant_frequency(self):
        assert resonant_frequency(1.0, 1.0) == pytest.approx(1 / (2 * math.pi))
        f1 = resonant_frequency(0.015, 3e-11)
        assert resonant_frequency(0.06, 3e-11) == pytest.approx(2 * f1, rel=1e-12)

    def test_clear_span(self):
        assert clear_span(328e-6, 10e-6, 2e-6) == pytest.approx(304e-6)
        # degenerate side falls back to the 10% floor
        assert clear_span(20e-6, 10e-6, 2e-6) == pytest.approx(2e-6)

    def test_strip_analysis_consistency(self, ref_spec):
        strip = analyze_strip(ref_spec, 328e-6)
        assert strip.span == pytest.approx(304e-6)
        assert strip.deflection == pytest.approx(
            strip.mass * 196.0 / strip.stiffness, rel=1e-12)


class TestSections:
    def test_torsion_constant_thin_strip(self):
        # J -> w t^3 / 3 for w >> t
        j = rectangle_torsion_constant(100e-6, 1e-6)
        assert j == pytest.approx(100e-6 * 1e-18 / 3, rel=0.01)

    def test_torsion_symmetric_in_arguments(self):
        assert rectangle_torsion_constant(3e-6, 10e-6) == \
            rectangle_torsion_constant(10e-6, 3e-6)

    def test_simple_rigidity(self):
        sec = BeamSection(width=10e-6, thickness=1e-6)
        ea, eiy, eiz, gj = sec.rigidity(CU)
        assert ea == pytest.approx(130e9 * 1e-11, rel=1e-12)
        assert eiy == pytest.approx(130e9 * 10e-6 * 1e-18 / 12, rel=1e-12)
        assert eiz > eiy

    def test_laminate_stiffer_than_any_layer_alone(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            mats = [Material(f"m{i}", youngs_modulus=rng.uniform(50e9, 300e9),
                             density=1000.0) for i in range(3)]
            thicknesses = rng.uniform(0.05e-6, 1e-6, 3)
            layers = tuple(zip(mats, thicknesses))
            sec = BeamSection(width=10e-6, thickness=float(thicknesses.sum()),
                              layers=layers)
            _, eiy, _, _ = sec.rigidity(mats[0])
            own = max(m.youngs_modulus * 10e-6 * t ** 3 / 12
                      for m, t in layers)
            assert eiy >= own

    def test_laminate_neutral_axis_weighting(self):
        # two identical layers of the same material == one solid section
        sec2 = BeamSection(width=10e-6, thickness=1e-6,
                           layers=((CU, 0.5e-6), (CU, 0.5e-6)))
        solid = BeamSection(width=10e-6, thickness=1e-6)
        assert sec2.rigidity(CU)[1] == pytest.approx(solid.rigidity(CU)[1],
                                                     rel=1e-12)


def strip_layout(length=300e-6, width=10e-6, thickness=1e-6):
    seg = Segment((0, 0, 0), (length, 0, 0), width, thickness, "winding")
    return SegmentSet((seg,), anchors=((0.0, 0.0, 0.0),))


class TestBuildFrame:
    def test_single_segment_counts(self):
        model = build_frame(strip_layout(), elements_per_segment=4)
        assert model.nodes.shape[0] == 5
        assert len(model.elements) == 4

    def test_reference_pillar_counts(self, ref_spec):
        # 40 winding segments * 4 + 161 shared-corner nodes, 1 lead segment
        # * 4 + 5 nodes, one pillar connector
        layout = generate_layout(ref_spec.with_xbeam(None))
        model = build_frame(layout, elements_per_segment=4)
        assert model.nodes.shape[0] == 166
        assert len(model.elements) == 165

    def test_xbeam_adds_elements(self, ref_spec):
        pillar = build_frame(generate_layout(ref_spec.with_xbeam(None)))
        xbeam = build_frame(generate_layout(ref_spec))
        assert len(xbeam.elements) > len(pillar.elements)
        assert any(el.tag == "connector" for el in xbeam.elements)
        assert any(el.tag == "xbeam_arm" for el in xbeam.elements)

    def test_anchors_fully_fixed(self, ref_spec):
        model = build_frame(generate_layout(ref_spec))
        fixed_nodes = {n for n, _ in model.fixed_dofs}
        assert len(fixed_nodes) == 6
        for node in fixed_nodes:
            assert {(node, d) for d in range(6)} <= model.fixed_dofs

    def test_no_anchors_rejected(self):
        seg = Segment((0, 0, 0), (1e-4, 0, 0), 1e-5, 1e-6, "winding")
        layout = SegmentSet((seg,), anchors=())
        with pytest.raises(StabilityError):
            build_frame(layout)

    def test_bad_element_count(self):
        with pytest.raises(FormulaDomainError):
            build_frame(strip_layout(), elements_per_segment=0)

    def test_winding_nodes_tracked(self, ref_spec):
        model = build_frame(generate_layout(ref_spec.with_xbeam(None)))
        assert len(model.winding_nodes) == 161


def cantilever_model(length=300e-6, n_elements=8, e_scale=1.0):
    material = Material("scaled", youngs_modulus=130e9 * e_scale, density=8960,
                        poisson_ratio=0.34)
    layout = strip_layout(length)
    model = build_frame(layout, n_elements)
    model.elements = [FrameElement(el.node_a, el.node_b, el.section, material,
                                   el.tag) for el in model.elements]
    return model


class TestSolveStatic:
    def test_cantilever_tip_deflection(self):
        model = cantilever_model()
        tip = model.nodes.shape[0] - 1
        force = 1e-9
        model.add_load(tip, np.array([0, 0, force, 0, 0, 0.0]))
        u = solve_static(model)
        ei = 130e9 * 10e-6 * (1e-6) ** 3 / 12
        expected = force * (300e-6) ** 3 / (3 * ei)
        assert u[tip, 2] == pytest.approx(expected, rel=0.01)

    def test_linearity(self):
        model = cantilever_model()
        tip = model.nodes.shape[0] - 1
        model.add_load(tip, np.array([0, 0, 1e-9, 0, 0, 0.0]))
        u1 = solve_static(model)
        model.add_load(tip, np.array([0, 0, 2e-9, 0, 0, 0.0]))
        u2 = solve_static(model)
        assert np.allclose(u2, 2 * u1, rtol=1e-12, atol=0.0)

    def test_simply_supported_center_deflection(self):
        length = 400e-6
        seg = Segment((0, 0, 0), (length, 0, 0), 10e-6, 1e-6, "winding")
        layout = SegmentSet((seg,), anchors=((0.0, 0.0, 0.0),))
        model = build_frame(layout, elements_per_segment=8)
        # pin both ends instead of the cantilever clamp
        end = model.nodes.shape[0] - 1
        model.fixed_dofs = {(0, 0), (0, 1), (0, 2), (0, 3),
                            (end, 1), (end, 2)}
        center = int(np.argmin(np.abs(model.nodes[:, 0] - length / 2)))
        force = 1e-9
        model.add_load(center, np.array([0, 0, -force, 0, 0, 0.0]))
        u = solve_static(model)
        ei = 130e9 * 10e-6 * (1e-6) ** 3 / 12
        expected = -force * length ** 3 / (48 * ei)
        assert u[center, 2] == pytest.approx(expected, rel=0.01)

    def test_l_frame_torsion_closed_form(self):
        # clamped L-frame, tip load out of plane: the first leg twists under
        # T = P*b, so delta_C = P*(a^3/3EI + b^3/3EI + a*b^2/GJ)
        # (Castigliano). Exercises the torsion terms the straight-beam
        # checks never touch.
        a, b = 200e-6, 120e-6
        w, t = 10e-6, 1e-6
        sec = BeamSection(width=w, thickness=t)
        segs = (Segment((0, 0, 0), (a, 0, 0), w, t, "winding"),
                Segment((a, 0, 0), (a, b, 0), w, t, "winding"))
        layout = SegmentSet(segs, anchors=((0.0, 0.0, 0.0),))
        model = build_frame(layout, elements_per_segment=4)
        tip = int(np.argmin(np.linalg.norm(model.nodes - np.array([a, b, 0]),
                                           axis=1)))
        force = 1e-9
        model.add_load(tip, np.array([0, 0, force, 0, 0, 0.0]))
        u = solve_static(model)
        e, g = CU.youngs_modulus, CU.shear_modulus
        ei = e * sec.inertia_y
        gj = g * rectangle_torsion_constant(w, t)
        expected = force * (a ** 3 / (3 * ei) + b ** 3 / (3 * ei)
                            + a * b ** 2 / gj)
        assert u[tip, 2] == pytest.approx(expected, rel=0.01)

    def test_stiffness_matrix_symmetric(self, ref_spec):
        model = build_frame(generate_layout(ref_spec), 2)
        k = assemble_global_stiffness(model)
        asym = np.abs(k - k.T).max()
        assert asym < 1e-10 * np.abs(k).max()

    def test_unconstrained_model_rejected(self):
        model = cantilever_model()
        model.fixed_dofs = set()
        with pytest.raises(StabilityError):
            solve_static(model)

    def test_floating_node_named(self):
        # a node with no element attached has zero stiffness rows
        sec = BeamSection(width=1e-5, thickness=1e-6)
        nodes = np.array([[0, 0, 0], [1e-4, 0, 0], [5e-4, 5e-4, 0.0]])
        elements = [FrameElement(0, 1, sec, CU, "winding")]
        model = FrameModel(nodes=nodes, elements=elements,
                           fixed_dofs={(0, d) for d in range(6)})
        model.add_load(1, np.array([0, 0, 1e-9, 0, 0, 0.0]))
        with pytest.raises(StabilityError, match="node 2"):
            solve_static(model)

    def test_agreement_with_cantilever_formula(self):
        # FEM single-strip tip stiffness vs the closed form
        model = cantilever_model(length=304e-6, n_elements=8)
        force, _ = impact_scan(model, 1e-6)
        kappa = cantilever_stiffness(130e9, 10e-6, 1e-6, 304e-6)
        assert force == pytest.approx(kappa * 1e-6, rel=0.01)


class TestImpactForce:
    def test_linear_in_limit(self, ref_spec):
        model = build_frame(generate_layout(ref_spec.with_xbeam(None)))
        f1 = max_impact_force(model, 1e-6)
        f2 = max_impact_force(model, 2e-6)
        assert f2 == pytest.approx(2 * f1, rel=1e-12)

    def test_doubling_modulus_doubles_force(self):
        f1 = max_impact_force(cantilever_model(e_scale=1.0), 1e-6)
        f2 = max_impact_force(cantilever_model(e_scale=2.0), 1e-6)
        assert f2 == pytest.approx(2 * f1, rel=1e-9)

    def test_worst_node_is_free_tip_for_cantilever(self):
        model = cantilever_model()
        _, worst = impact_scan(model, 1e-6)
        assert worst == model.nodes.shape[0] - 1

    def test_bad_limit(self, ref_spec):
        model = build_frame(generate_layout(ref_spec.with_xbeam(None)))
        with pytest.raises(FormulaDomainError):
            max_impact_force(model, 0.0)

    def test_mesh_convergence(self, ref_spec):
        layout = generate_layout(ref_spec)
        f4 = max_impact_force(build_frame(layout, 4))
        f8 = max_impact_force(build_frame(layout, 8))
        assert abs(f8 - f4) / f4 < 0.02

    def test_deterministic(self, ref_spec):
        layout = generate_layout(ref_spec)
        a = impact_scan(build_frame(layout, 4))
        b = impact_scan(build_frame(layout, 4))
        assert a == b


class TestStabilityReport:
    def test_reference_report(self, ref_spec):
        report = analyze_stability(ref_spec, modes=("pillar", "xbeam"))
        assert report.kappa_outer > 0
        assert report.kappa_inner > report.kappa_outer
        assert report.deflection_outer > report.deflection_inner
        assert report.f_resonant > 0
        assert report.f_max_impact_xbeam > report.f_max_impact_pillar
        assert report.enhancement_ratio > 1

    def test_auto_mode_follows_spec(self, ref_spec):
        with_beam = analyze_stability(ref_spec)
        assert with_beam.f_max_impact_xbeam is not None
        assert with_beam.f_max_impact_pillar is None
        without = analyze_stability(ref_spec.with_xbeam(None))
        assert without.f_max_impact_pillar is not None
        assert without.f_max_impact_xbeam is None

    def test_report_dict_keys(self, ref_spec):
        d = analyze_stability(ref_spec, modes=("pillar", "xbeam")).to_dict()
        assert "xbeam_enhancement_ratio" in d
        assert d["f_max_impact_xbeam_n"] > 0
