"""Machine-readable report writers.

All numeric output is fixed-format scientific notation with 9
significant digits, locale-independent, so repeated runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .geometry import SpiralSpec


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.9e}"
    return str(value)


def round9(value: float) -> float:
    """Round a float to 9 significant digits (stable JSON encoding)."""
    return float(f"{value:.9e}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return round9(obj)
    return obj


def write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(cell) for cell in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(_jsonable(payload), indent=2) + "\n")


def spec_fields(spec: SpiralSpec) -> dict:
    """Flat, unit-annotated view of a spec for report echoing."""
    return {
        "inner_diameter_um": spec.inner_diameter * 1e6,
        "trace_width_um": spec.trace_width * 1e6,
        "spacing_um": spec.spacing * 1e6,
        "turns": spec.turns,
        "metal_thickness_um": spec.metal_thickness * 1e6,
        "airgap_height_um": spec.airgap_height * 1e6,
        "lead_gap_um": spec.lead_gap * 1e6,
        "dielectric_mode": spec.dielectric_mode,
        "conductor_material": spec.conductor_material,
        "oxide_rel_permittivity": spec.oxide_rel_permittivity,
        "xbeam": spec.xbeam is not None,
    }
