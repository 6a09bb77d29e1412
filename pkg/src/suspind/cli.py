"""Command-line interface.

Subcommands:
  analyze   electrical report (Q curve CSV + JSON summary)
  mech      structural report (stiffness, deflection, impact force)
  sweep     grid sweep with constraints -> CSV + Pareto JSON
  deembed   open de-embedding of a measured pair -> Q curve + summary
  compare   airgap vs oxide side-by-side report

All outputs are files; numeric formatting is fixed at 9 significant
digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .deembed import extract_metrics, open_deembed, parse_touchstone, s_to_y
from .em import analyze_device, default_frequency_grid
from .errors import SuspindError, TouchstoneError
from .explore import ConstraintSet, compare_dielectric_modes, pareto_front, sweep
from .fixtures import reference_device, write_fixtures
from .materials import MATERIALS_ENV_VAR
from .mechanics import (DEFAULT_DEFLECTION_LIMIT, STANDARD_GRAVITY,
                        analyze_stability, build_frame, impact_scan,
                        solve_static)
from .geometry import generate_layout
from .reports import spec_fields, write_csv, write_json
from .specfile import load_constraints, load_grid, load_spec


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_from_args(args) -> np.ndarray:
    return default_frequency_grid(args.fmin_ghz * 1e9, args.fmax_ghz * 1e9,
                                  args.points)


def _qcurve_outputs(net, curve, out: Path, csv_name: str, spot_hz: float) -> None:
    mask = net.matrices[:, 0, 0].real != 0.0
    y11 = net.matrices[mask, 0, 0]
    rows = zip(curve.frequencies, y11.real, y11.imag, curve.q_values, curve.l_eff)
    write_csv(out / csv_name,
              ["freq_hz", "re_y11", "im_y11", "q", "l_eff_h"], rows)
    write_json(out / "summary.json", {
        "q_max": curve.q_max,
        "f_peak_hz": curve.f_peak,
        "l_at_spot_hz": curve.l_at(spot_hz),
        "spot_hz": spot_hz,
    })


def cmd_analyze(args) -> int:
    spec = load_spec(args.spec_file)
    if args.mode:
        spec = spec.with_mode(args.mode)
    _, net, curve = analyze_device(spec, _grid_from_args(args))
    out = _outdir(args)
    _qcurve_outputs(net, curve, out, "qcurve.csv", args.spot_ghz * 1e9)
    print(f"wrote {out / 'qcurve.csv'} and {out / 'summary.json'}")
    return 0


def cmd_mech(args) -> int:
    spec = load_spec(args.spec_file)
    modes = {"auto": ("auto",), "on": ("xbeam",), "off": ("pillar",),
             "both": ("pillar", "xbeam")}[args.xbeam]
    report = analyze_stability(
        spec, modes=modes, elements_per_segment=args.elements,
        deflection_limit=args.limit * 1e-6,
        accel=args.accel_g * STANDARD_GRAVITY)
    out = _outdir(args)
    write_json(out / "mech.json", report.to_dict())
    written = [out / "mech.json"]
    if args.dump_displacements:
        layout = generate_layout(spec)
        model = build_frame(layout, args.elements)
        force, worst = impact_scan(model, args.limit * 1e-6)
        model.add_load(worst, np.array([0.0, 0.0, force, 0.0, 0.0, 0.0]))
        u = solve_static(model)
        rows = [(i, model.nodes[i, 0], model.nodes[i, 1], model.nodes[i, 2],
                 u[i, 2]) for i in range(model.nodes.shape[0])]
        write_csv(out / "displacements.csv",
                  ["node_id", "x", "y", "z", "uz"], rows)
        written.append(out / "displacements.csv")
    print("wrote " + " and ".join(str(p) for p in written))
    return 0


_SWEEP_COLUMNS = ["l_total_h", "q_max", "f_peak_hz", "kappa_outer_n_per_m",
                  "f_max_impact_n", "f_resonant_hz", "shock_deflection_m"]


def cmd_sweep(args) -> int:
    base, grid = load_grid(args.grid_file)
    constraints = (load_constraints(args.constraints)
                   if args.constraints else ConstraintSet())
    points = sweep(base, grid, constraints, jobs=args.jobs)
    out = _outdir(args)

    spec_cols = list(spec_fields(base))
    header = spec_cols + _SWEEP_COLUMNS + ["feasible", "error"]
    rows = []
    for p in points:
        row = [spec_fields(p.spec)[c] for c in spec_cols]
        if p.metrics is None:
            row += [""] * len(_SWEEP_COLUMNS)
        else:
            md = p.metrics.to_dict()
            row += [md[c] for c in _SWEEP_COLUMNS]
        note = p.error or "; ".join(p.violations)
        row += [p.feasible, note.replace(",", ";") if note else ""]
        rows.append(row)
    write_csv(out / "sweep.csv", header, rows)

    front = pareto_front(points)
    write_json(out / "pareto.json", {
        "objectives": ["q_max", "f_max_impact"],
        "constraints": {
            "max_shock_deflection_m": constraints.max_shock_deflection,
            "min_resonant_frequency_hz": constraints.min_resonant_frequency,
            "min_q": constraints.min_q,
            "min_inductance_h": constraints.min_inductance,
            "shock_accel_m_per_s2": constraints.shock_accel,
        },
        "n_points": len(points),
        "n_feasible": sum(1 for p in points if p.feasible),
        "front": [dict(**spec_fields(p.spec), **p.metrics.to_dict())
                  for p in front],
        "failures": [dict(**spec_fields(p.spec), error=p.error)
                     for p in points if p.failed],
    })
    print(f"wrote {out / 'sweep.csv'} and {out / 'pareto.json'}")
    return 0


def cmd_deembed(args) -> int:
    nets = []
    for path in (args.complete, args.open_dummy):
        try:
            record = parse_touchstone(Path(path).read_text())
        except TouchstoneError as exc:
            raise TouchstoneError(f"{path}: {exc}") from exc
        nets.append(s_to_y(record.to_network()))
    complete, pads = nets
    device = open_deembed(complete, pads)
    if np.all(device.matrices == 0):
        print("warning: de-embedded network is identically zero "
              "(complete and open dummy are the same measurement?)",
              file=sys.stderr)
        return 1
    curve, l_spot = extract_metrics(device, args.spot_ghz * 1e9)
    out = _outdir(args)
    rows = zip(curve.frequencies, curve.q_values, curve.l_eff)
    write_csv(out / "deembed.csv", ["freq_hz", "q", "l_eff_h"], rows)
    write_json(out / "summary.json", {
        "q_max": curve.q_max,
        "f_peak_hz": curve.f_peak,
        "l_at_spot_hz": l_spot,
        "spot_hz": args.spot_ghz * 1e9,
    })
    print(f"wrote {out / 'deembed.csv'} and {out / 'summary.json'}")
    return 0


def cmd_compare(args) -> int:
    spec = load_spec(args.spec_file)
    result = compare_dielectric_modes(spec)
    out = _outdir(args)
    payload = {
        mode: dict(**spec_fields(spec.with_mode(mode)), **result[mode])
        for mode in ("oxide", "airgap")
    }
    payload["improvement"] = result["improvement"]
    write_json(out / "compare.json", payload)
    print(f"wrote {out / 'compare.json'}")
    return 0


def cmd_seed_fixtures(args) -> int:
    paths = write_fixtures(args.outdir, reference_device())
    print("wrote " + " and ".join(str(p) for p in paths))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suspind",
        description="Suspended spiral inductor design toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--materials", metavar="FILE",
                        help="material table override (also honoured via "
                             f"the {MATERIALS_ENV_VAR} environment variable)")
    sub = parser.add_subparsers(
        dest="command", required=True,
        metavar="{analyze,mech,sweep,deembed,compare}")

    p = sub.add_parser("analyze", help="electrical Q/L analysis of a device file")
    p.add_argument("spec_file")
    p.add_argument("--mode", choices=("airgap", "oxide"),
                   help="override the device's dielectric mode")
    p.add_argument("--fmin-ghz", type=float, default=0.1)
    p.add_argument("--fmax-ghz", type=float, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spot-ghz", type=float, default=1.7,
                   help="frequency for the spot inductance readout")
    p.add_argument("-o", "--outdir", default="out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mech", help="structural stability analysis")
    p.add_argument("spec_file")
    p.add_argument("--xbeam", choices=("auto", "on", "off", "both"),
                   default="auto")
    p.add_argument("--limit", type=float,
                   default=DEFAULT_DEFLECTION_LIMIT * 1e6,
                   help="deflection limit in um defining the impact force")
    p.add_argument("--elements", type=int, default=4,
                   help="beam elements per segment")
    p.add_argument("--accel-g", type=float, default=20.0,
                   help="shock acceleration in g")
    p.add_argument("--dump-displacements", action="store_true")
    p.add_argument("-o", "--outdir", default="out")
    p.set_defaults(func=cmd_mech)

    p = sub.add_parser("sweep", help="evaluate a parameter grid")
    p.add_argument("grid_file")
    p.add_argument("--constraints", metavar="FILE")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--outdir", default="out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("deembed",
                       help="open de-embedding of complete + open dummy files")
    p.add_argument("complete")
    p.add_argument("open_dummy")
    p.add_argument("--spot-ghz", type=float, default=1.7)
    p.add_argument("-o", "--outdir", default="out")
    p.set_defaults(func=cmd_deembed)

    p = sub.add_parser("compare", help="airgap vs oxide side-by-side report")
    p.add_argument("spec_file")
    p.add_argument("-o", "--outdir", default="out")
    p.set_defaults(func=cmd_compare)

    # maintenance command: regenerate the synthetic measurement fixtures
    p = sub.add_parser("seed-fixtures")
    p.add_argument("-o", "--outdir", default="tests/fixtures")
    p.set_defaults(func=cmd_seed_fixtures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get(MATERIALS_ENV_VAR)
    if args.materials:
        os.environ[MATERIALS_ENV_VAR] = args.materials
    try:
        return args.func(args)
    except (SuspindError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.materials:
            if saved is None:
                os.environ.pop(MATERIALS_ENV_VAR, None)
            else:
                os.environ[MATERIALS_ENV_VAR] = saved


if __name__ == "__main__":
    sys.exit(main())
