"""Device / grid / constraint file parsing.

Files are INI-style key = value sections. Lengths are micrometres and
frequencies GHz on disk (the human-friendly units); everything is
converted to SI at this boundary and stays SI inside the toolkit.

Device file::

    [spiral]
    inner_diameter = 100        ; um
    trace_width = 10
    spacing = 2
    turns = 10
    metal_thickness = 1
    airgap_height = 2.5
    lead_gap = 1.6
    dielectric_mode = airgap    ; airgap | oxide
    conductor_material = Cu
    oxide_rel_permittivity = 3.9

    [xbeam]                     ; optional section
    arm_width = 10              ; um
    layers = SiO2:0.6, Si3N4:0.1   ; bottom-up, material:thickness_um
    anchored = true

Grid files add a [grid] section whose keys are spiral parameters with
comma-separated value lists (plus the pseudo-parameter ``xbeam`` with
on/off values). Constraint files carry a [constraints] section with
``max_shock_deflection`` (um), ``min_resonant_frequency`` (kHz),
``min_q``, ``min_inductance`` (nH) and ``shock_accel_g``.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .errors import ConfigError
from .explore import ConstraintSet
from .geometry import SpiralSpec, XBeamSpec
from .mechanics import STANDARD_GRAVITY

_UM = 1e-6

_LENGTH_KEYS = ("inner_diameter", "trace_width", "spacing", "metal_thickness",
                "airgap_height", "lead_gap")


def _read(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    text = Path(path).read_text()
    if not text.strip():
        raise ConfigError(f"{path}: file is empty")
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parser


def _parse_xbeam(section) -> XBeamSpec:
    kwargs = {}
    if "arm_width" in section:
        kwargs["arm_width"] = float(section["arm_width"]) * _UM
    if "layers" in section:
        layers = []
        for item in section["layers"].split(","):
            item = item.strip()
            if not item:
                continue
            try:
                name, thick = item.split(":")
                layers.append((name.strip(), float(thick) * _UM))
            except ValueError:
                raise ConfigError(
                    f"bad xbeam layer {item!r}; expected material:thickness_um"
                ) from None
        kwargs["layers"] = tuple(layers)
    if "anchored" in section:
        kwargs["anchored"] = section.getboolean("anchored")
    return XBeamSpec(**kwargs)


def spec_from_parser(parser: configparser.ConfigParser, source: str) -> SpiralSpec:
    if "spiral" not in parser:
        raise ConfigError(f"{source}: missing [spiral] section")
    sec = parser["spiral"]
    kwargs = {}
    try:
        for key in _LENGTH_KEYS:
            kwargs[key] = float(sec[key]) * _UM
        kwargs["turns"] = int(sec["turns"])
    except KeyError as exc:
        raise ConfigError(f"{source}: missing spiral key {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    kwargs["dielectric_mode"] = sec.get("dielectric_mode", "airgap")
    kwargs["conductor_material"] = sec.get("conductor_material", "Cu")
    if "oxide_rel_permittivity" in sec:
        kwargs["oxide_rel_permittivity"] = float(sec["oxide_rel_permittivity"])
    if "xbeam" in parser:
        kwargs["xbeam"] = _parse_xbeam(parser["xbeam"])
    return SpiralSpec(**kwargs)


def load_spec(path) -> SpiralSpec:
    return spec_from_parser(_read(path), str(path))


_GRID_CONVERTERS = {
    "inner_diameter": lambda v: float(v) * _UM,
    "trace_width": lambda v: float(v) * _UM,
    "spacing": lambda v: float(v) * _UM,
    "metal_thickness": lambda v: float(v) * _UM,
    "airgap_height": lambda v: float(v) * _UM,
    "lead_gap": lambda v: float(v) * _UM,
    "turns": int,
    "dielectric_mode": str,
    "xbeam": lambda v: {"on": True, "off": False}[v],
}


def load_grid(path) -> tuple[SpiralSpec, dict[str, list]]:
    """Base spec plus the per-parameter sweep lists."""
    parser = _read(path)
    base = spec_from_parser(parser, str(path))
    if "grid" not in parser:
        raise ConfigError(f"{path}: missing [grid] section")
    grid: dict[str, list] = {}
    for key, raw in parser["grid"].items():
        conv = _GRID_CONVERTERS.get(key)
        if conv is None:
            raise ConfigError(f"{path}: parameter {key!r} is not sweepable")
        values = []
        for tok in raw.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                values.append(conv(tok))
            except (ValueError, KeyError):
                raise ConfigError(
                    f"{path}: bad value {tok!r} for grid parameter {key!r}"
                ) from None
        if not values:
            raise ConfigError(f"{path}: grid parameter {key!r} has no values")
        grid[key] = values
    if not grid:
        raise ConfigError(f"{path}: [grid] section is empty")
    return base, grid


def load_constraints(path) -> ConstraintSet:
    parser = _read(path)
    if "constraints" not in parser:
        raise ConfigError(f"{path}: missing [constraints] section")
    sec = parser["constraints"]
    kwargs = {}
    try:
        if sec.get("max_shock_deflection"):
            kwargs["max_shock_deflection"] = float(sec["max_shock_deflection"]) * _UM
        if sec.get("min_resonant_frequency"):
            kwargs["min_resonant_frequency"] = float(sec["min_resonant_frequency"]) * 1e3
        if sec.get("min_q"):
            kwargs["min_q"] = float(sec["min_q"])
        if sec.get("min_inductance"):
            kwargs["min_inductance"] = float(sec["min_inductance"]) * 1e-9
        if sec.get("shock_accel_g"):
            kwargs["shock_accel"] = float(sec["shock_accel_g"]) * STANDARD_GRAVITY
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return ConstraintSet(**kwargs)
