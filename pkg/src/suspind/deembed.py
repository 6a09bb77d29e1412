"""Measurement pipeline: Touchstone ingestion, S<->Y conversion, open
de-embedding and Q/L extraction.

Only Touchstone v1 two-port files are handled; v2 keyword files are
rejected. Frequency grids are never resampled - de-embedding two
networks on different grids is a hard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .em import q_curve
from .errors import (ConversionError, FormulaDomainError, GridAlignmentError,
                     TouchstoneError)
from .network import QCurve, TwoPortNetwork

_UNIT_SCALE = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_FORMATS = ("ri", "ma", "db")
# v1 two-port row order
_COLUMN_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class TouchstoneRecord:
    """Parsed two-port S-parameter file.

    ``frequencies`` are in Hz regardless of the source unit; the source
    unit and number format are kept so files can be round-tripped.
    """

    frequencies: np.ndarray
    s_matrices: np.ndarray
    z_ref: float
    unit: str = "hz"
    parameter: str = "s"
    data_format: str = "ri"

    def __post_init__(self):
        object.__setattr__(self, "frequencies",
                           np.asarray(self.frequencies, dtype=float))
        object.__setattr__(self, "s_matrices",
                           np.asarray(self.s_matrices, dtype=complex))
        if self.z_ref <= 0:
            raise TouchstoneError("reference impedance must be > 0")
        if np.any(np.diff(self.frequencies) <= 0):
            raise TouchstoneError("frequencies must be strictly increasing")

    def to_network(self) -> TwoPortNetwork:
        return TwoPortNetwork(frequencies=self.frequencies,
                              matrices=self.s_matrices, kind="S",
                              z_ref=self.z_ref)


def _parse_option_line(tokens: list[str], line_no: int) -> tuple[str, str, str, float]:
    unit, param, fmt, z_ref = "ghz", "s", "ma", 50.0
    i = 0
    while i < len(tokens):
        tok = tokens[i].lower()
        if tok in _UNIT_SCALE:
            unit = tok
        elif tok in ("s", "y", "z", "g", "h"):
            if tok != "s":
                raise TouchstoneError(
                    f"only S-parameter files are supported, got '{tok.upper()}'",
                    line_no)
            param = tok
        elif tok in _FORMATS:
            fmt = tok
        elif tok == "r":
            if i + 1 >= len(tokens):
                raise TouchstoneError("option 'R' without an impedance value",
                                      line_no)
            try:
                z_ref = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneError(
                    f"bad reference impedance {tokens[i + 1]!r}", line_no) from None
            i += 1
        else:
            raise TouchstoneError(f"unknown option token {tokens[i]!r}", line_no)
        i += 1
    return unit, param, fmt, z_ref


def _to_complex(a: float, b: float, fmt: str) -> complex:
    if fmt == "ri":
        return complex(a, b)
    if fmt == "ma":
        ang = math.radians(b)
        return complex(a * math.cos(ang), a * math.sin(ang))
    mag = 10.0 ** (a / 20.0)
    ang = math.radians(b)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def parse_touchstone(text: str) -> TouchstoneRecord:
    """Parse a Touchstone v1 two-port file.

    Supports the ``# <unit> S <RI|MA|DB> R <z>`` option line (tokens in
    any order, case-insensitive, with standard defaults), '!' comments
    and 9-column data lines in S11 S21 S12 S22 order. Raises
    TouchstoneError with the offending line number on malformed input.
    """
    option = None
    rows: list[tuple[float, np.ndarray]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            raise TouchstoneError(
                f"Touchstone v2 keyword {line.split(']')[0]}] is not supported",
                line_no)
        if line.startswith("#"):
            if option is not None:
                raise TouchstoneError("duplicate option line", line_no)
            option = _parse_option_line(line[1:].split(), line_no)
            continue
        if option is None:
            raise TouchstoneError("data before the option line", line_no)
        parts = line.split()
        if len(parts) != 9:
            raise TouchstoneError(
                f"expected 9 columns (freq + 4 complex pairs), got {len(parts)}",
                line_no)
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise TouchstoneError(f"non-numeric data: {exc}", line_no) from None
        unit, _, fmt, _ = option
        freq = values[0] * _UNIT_SCALE[unit]
        mat = np.empty((2, 2), dtype=complex)
        for k, (r, c) in enumerate(_COLUMN_ORDER):
            mat[r, c] = _to_complex(values[1 + 2 * k], values[2 + 2 * k], fmt)
        if rows and freq <= rows[-1][0]:
            raise TouchstoneError(
                f"frequency {values[0]!r} not strictly increasing", line_no)
        rows.append((freq, mat))
    if option is None:
        raise TouchstoneError("missing option line ('# <unit> S <fmt> R <z>')")
    if not rows:
        raise TouchstoneError("file contains no data points")
    unit, param, fmt, z_ref = option
    return TouchstoneRecord(
        frequencies=np.array([r[0] for r in rows]),
        s_matrices=np.array([r[1] for r in rows]),
        z_ref=z_ref, unit=unit, parameter=param, data_format=fmt,
    )


def serialize_touchstone(record: TouchstoneRecord) -> str:
    """Render a record as a v1 file: the source frequency unit is kept,
    data is always written RI with full round-trip precision."""
    scale = _UNIT_SCALE[record.unit.lower()]
    lines = [f"! two-port S-parameter data, {record.unit.upper()} / RI / "
             f"R {record.z_ref:g}",
             f"# {record.unit.upper()} S RI R {record.z_ref:g}"]
    for freq, mat in zip(record.frequencies, record.s_matrices):
        cells = [f"{freq / scale:.17e}"]
        for r, c in _COLUMN_ORDER:
            cells.append(f"{mat[r, c].real:.17e}")
            cells.append(f"{mat[r, c].imag:.17e}")
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def network_to_record(net: TwoPortNetwork) -> TouchstoneRecord:
    if net.kind != "S":
        raise FormulaDomainError("only S-parameter networks can be serialized")
    return TouchstoneRecord(frequencies=net.frequencies, s_matrices=net.matrices,
                            z_ref=net.z_ref, unit="hz", data_format="ri")


def s_to_y(net: TwoPortNetwork) -> TwoPortNetwork:
    """Y = (1/z_ref) (I - S) (I + S)^-1 per frequency point."""
    if net.kind != "S":
        raise FormulaDomainError("s_to_y needs an S-parameter network")
    eye = np.eye(2, dtype=complex)
    out = np.empty_like(net.matrices)
    for i, s in enumerate(net.matrices):
        m = eye + s
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det == 0:
            raise ConversionError(
                f"(I + S) singular at {net.frequencies[i]:g} Hz")
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
        out[i] = (eye - s) @ inv / net.z_ref
    return TwoPortNetwork(frequencies=net.frequencies, matrices=out, kind="Y",
                          z_ref=net.z_ref)


def y_to_s(net: TwoPortNetwork, z_ref: float = 50.0) -> TwoPortNetwork:
    """S = (I - z Y) (I + z Y)^-1 per frequency point."""
    if net.kind != "Y":
        raise FormulaDomainError("y_to_s needs a Y-parameter network")
    eye = np.eye(2, dtype=complex)
    out = np.empty_like(net.matrices)
    for i, y in enumerate(net.matrices):
        zy = z_ref * y
        m = eye + zy
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det == 0:
            raise ConversionError(
                f"(I + zY) singular at {net.frequencies[i]:g} Hz")
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
        out[i] = (eye - zy) @ inv
    return TwoPortNetwork(frequencies=net.frequencies, matrices=out, kind="S",
                          z_ref=z_ref)


def open_deembed(complete: TwoPortNetwork,
                 open_dummy: TwoPortNetwork) -> TwoPortNetwork:
    """Remove pad parasitics: Y_device = Y_complete - Y_open.

    Both inputs must be Y-parameter networks on exactly the same
    frequency grid; nothing is interpolated.
    """
    if complete.kind != "Y" or open_dummy.kind != "Y":
        raise FormulaDomainError("open_deembed needs Y-parameter networks")
    if complete.n_points != open_dummy.n_points or np.any(
            complete.frequencies != open_dummy.frequencies):
        raise GridAlignmentError(
            "complete and open dummy are on different frequency grids "
            f"({complete.n_points} vs {open_dummy.n_points} points); "
            "re-measure on a common grid"
        )
    return TwoPortNetwork(frequencies=complete.frequencies,
                          matrices=complete.matrices - open_dummy.matrices,
                          kind="Y", z_ref=complete.z_ref)


def extract_metrics(net: TwoPortNetwork,
                    spot_frequency: float = 1.7e9) -> tuple[QCurve, float]:
    """Q curve plus the effective inductance at the spot frequency."""
    curve = q_curve(net)
    return curve, curve.l_at(spot_frequency)
