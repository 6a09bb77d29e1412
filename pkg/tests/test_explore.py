from dataclasses import replace

import numpy as np
import pytest

from suspind.explore import (ConstraintSet, DesignPoint, Metrics, Objectives,
                             compare_dielectric_modes, evaluate, pareto_front,
                             sweep)
from suspind.errors import SuspindError
from suspind.fixtures import reference_device


def make_point(q, f, feasible=True, tag=0):
    spec = replace(reference_device(), turns=max(1, tag % 19 + 1))
    metrics = Metrics(l_total=1e-9, q_max=q, f_peak=1e9, kappa_outer=0.01,
                      f_max_impact=f, f_resonant=3e3, shock_deflection=1e-7)
    return DesignPoint(spec=spec, metrics=metrics, feasible=feasible)


def brute_force_front(points):
    feasible = [p for p in points if p.feasible and p.metrics is not None]
    out = []
    for p in feasible:
        dominated = False
        for q in feasible:
            better_somewhere = (q.metrics.q_max > p.metrics.q_max or
                                q.metrics.f_max_impact > p.metrics.f_max_impact)
            at_least = (q.metrics.q_max >= p.metrics.q_max and
                        q.metrics.f_max_impact >= p.metrics.f_max_impact)
            if at_least and better_somewhere:
                dominated = True
                break
        if not dominated:
            out.append(p)
    return out


class TestParetoFront:
    def test_dominating_pair(self):
        a, b = make_point(7, 1e-8), make_point(5, 1e-9)
        assert pareto_front([a, b]) == [a]

    def test_trade_off_pair(self):
        a, b = make_point(7, 1e-9), make_point(5, 1e-8)
        assert pareto_front([a, b]) == [a, b]

    def test_ties_kept(self):
        a, b = make_point(7, 1e-8, tag=1), make_point(7, 1e-8, tag=2)
        front = pareto_front([a, b])
        assert len(front) == 2

    def test_same_first_objective_lower_second_dominated(self):
        a, b = make_point(7, 1e-8), make_point(7, 1e-9)
        assert pareto_front([a, b]) == [a]

    def test_infeasible_excluded(self):
        a = make_point(9, 1e-7, feasible=False)
        b = make_point(5, 1e-9)
        assert pareto_front([a, b]) == [b]

    def test_empty_front_warns(self):
        with pytest.warns(UserWarning, match="no feasible"):
            assert pareto_front([make_point(7, 1e-8, feasible=False)]) == []

    def test_failed_points_excluded(self):
        bad = DesignPoint(spec=reference_device(), metrics=None,
                          feasible=False, error="boom")
        good = make_point(5, 1e-9)
        assert pareto_front([bad, good]) == [good]

    def test_order_first_objective_descending(self):
        pts = [make_point(5, 1e-8), make_point(9, 1e-10), make_point(7, 1e-9)]
        front = pareto_front(pts)
        qs = [p.metrics.q_max for p in front]
        assert qs == sorted(qs, reverse=True)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = 200
        qs = rng.choice([1, 2, 3, 5, 7, 9, 11], size=n) * rng.uniform(0.5, 2)
        fs = rng.choice([1e-10, 1e-9, 1e-8, 3e-8], size=n)
        pts = [make_point(float(q), float(f), tag=i)
               for i, (q, f) in enumerate(zip(qs, fs))]
        got = pareto_front(pts)
        expected = brute_force_front(pts)
        assert {id(p) for p in got} == {id(p) for p in expected}

    def test_custom_objectives(self):
        a = make_point(3, 1e-9)
        b = make_point(5, 1e-9)
        front = pareto_front([a, b], Objectives("f_resonant", "l_total"))
        assert len(front) == 2  # identical under these objectives: tie


class TestEvaluate:
    def test_reference_feasible(self, ref_spec):
        point = evaluate(ref_spec)
        assert point.feasible
        assert point.violations == ()
        m = point.metrics
        assert 16e-9 < m.l_total < 31e-9
        assert m.q_max > 1
        assert m.shock_deflection < 1e-6
        assert m.f_resonant > 1e3

    def test_thin_airgap_infeasible(self, ref_spec):
        point = evaluate(replace(ref_spec, airgap_height=0.1e-6))
        assert not point.feasible
        assert any("deflection" in v for v in point.violations)

    def test_deterministic(self, ref_spec):
        assert evaluate(ref_spec) == evaluate(ref_spec)

    def test_invalid_spec_becomes_failed_point(self, ref_spec):
        point = evaluate(replace(ref_spec, spacing=-1e-6))
        assert point.failed
        assert not point.feasible
        assert "spacing" in point.error

    def test_min_q_constraint(self, ref_spec):
        point = evaluate(ref_spec, ConstraintSet(min_q=1e6))
        assert not point.feasible
        assert any("q_max" in v for v in point.violations)

    def test_constraint_validation(self):
        with pytest.raises(SuspindError):
            ConstraintSet(min_resonant_frequency=-5.0)

    def test_default_budget(self, ref_spec):
        c = ConstraintSet()
        assert c.deflection_budget(ref_spec) == pytest.approx(1e-6)
        assert c.deflection_budget(replace(ref_spec, airgap_height=1e-6)) == \
            pytest.approx(0.5e-6)


class TestSweep:
    def test_single_point_equals_evaluate(self, ref_spec):
        points = sweep(ref_spec, {"turns": [7]})
        assert len(points) == 1
        assert points[0] == evaluate(replace(ref_spec, turns=7))

    def test_lexicographic_order(self, ref_spec):
        small = replace(ref_spec, turns=2)
        points = sweep(small, {"turns": [2, 3], "dielectric_mode": ["airgap", "oxide"]})
        combos = [(p.spec.turns, p.spec.dielectric_mode) for p in points]
        assert combos == [(2, "airgap"), (2, "oxide"),
                          (3, "airgap"), (3, "oxide")]

    def test_xbeam_pseudo_parameter(self, ref_spec):
        points = sweep(replace(ref_spec, turns=2), {"xbeam": [False, True]})
        assert points[0].spec.xbeam is None
        assert points[1].spec.xbeam is not None

    def test_bad_parameter_rejected(self, ref_spec):
        with pytest.raises(SuspindError, match="cannot sweep"):
            sweep(ref_spec, {"conductor_material": ["Cu"]})
        with pytest.raises(SuspindError, match="no values"):
            sweep(ref_spec, {"turns": []})
        with pytest.raises(SuspindError, match="empty"):
            sweep(ref_spec, {})

    def test_broken_point_does_not_stop_sweep(self, ref_spec):
        points = sweep(replace(ref_spec, turns=2), {"turns": [0, 2]})
        assert points[0].failed
        assert not points[1].failed

    def test_parallel_matches_serial(self, ref_spec):
        grid = {"turns": [1, 2, 3], "xbeam": [False, True]}
        base = replace(ref_spec, turns=1)
        serial = sweep(base, grid, jobs=1)
        parallel = sweep(base, grid, jobs=2)
        assert serial == parallel

    def test_impact_force_nonincreasing_in_turns(self, ref_spec):
        points = sweep(ref_spec, {"turns": [1, 2, 3, 4], "xbeam": [False]})
        forces = [p.metrics.f_max_impact for p in points]
        assert all(b <= a * (1 + 1e-9) for a, b in zip(forces, forces[1:]))

    def test_xbeam_dominates_pillar(self, ref_spec):
        points = sweep(ref_spec, {"turns": [1, 3], "xbeam": [False, True]})
        by_key = {(p.spec.turns, p.spec.xbeam is not None): p for p in points}
        for turns in (1, 3):
            assert by_key[(turns, True)].metrics.f_max_impact >= \
                by_key[(turns, False)].metrics.f_max_impact

    def test_wider_trace_stiffens_inner_strip(self, ref_spec):
        # Note: kappa_outer is NOT monotone in trace width because the
        # outermost side grows by ~2*turns pitches while the junction
        # allowance only grows by 2; the inner strip (fixed side, shrinking
        # free span) is the monotone one.
        from suspind.mechanics import analyze_strip
        from suspind.geometry import winding_side_lengths, generate_layout
        from dataclasses import replace as _r
        kappas = []
        for w in (6e-6, 8e-6, 10e-6, 12e-6, 14e-6):
            spec = _r(ref_spec, trace_width=w)
            sides = winding_side_lengths(generate_layout(spec))
            kappas.append(analyze_strip(spec, float(sides.min())).stiffness)
        assert all(b >= a for a, b in zip(kappas, kappas[1:]))


def test_compare_modes(ref_spec):
    result = compare_dielectric_modes(ref_spec)
    imp = result["improvement"]
    assert imp["cox_ratio"] == pytest.approx(1 / 3.9, rel=1e-12)
    assert imp["q_max_ratio"] > 1
    assert imp["f_peak_ratio"] > 1
    assert result["airgap"]["l_total_h"] == result["oxide"]["l_total_h"]


def test_compare_modes_single_turn(ref_spec):
    result = compare_dielectric_modes(replace(ref_spec, turns=1))
    assert set(result) == {"airgap", "oxide", "improvement"}
