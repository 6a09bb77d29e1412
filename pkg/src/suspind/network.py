"""Frequency-sampled two-port network data and Q-curve containers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError


@dataclass(frozen=True)
class TwoPortNetwork:
    """Complex 2x2 network data on a strictly increasing frequency grid.

    ``kind`` is "S" or "Y"; ``z_ref`` is the reference impedance and is
    only meaningful for S-parameters.
    """

    frequencies: np.ndarray          # Hz, shape (n,)
    matrices: np.ndarray             # complex, shape (n, 2, 2)
    kind: str                        # "S" | "Y"
    z_ref: float = 50.0

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        mats = np.asarray(self.matrices, dtype=complex)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "matrices", mats)
        problems = []
        if freqs.ndim != 1 or freqs.size < 1:
            problems.append("need at least one frequency")
        elif np.any(np.diff(freqs) <= 0):
            problems.append("frequencies must be strictly increasing")
        if mats.shape != (freqs.size, 2, 2):
            problems.append(f"matrix array must have shape (n, 2, 2), got {mats.shape}")
        if self.kind not in ("S", "Y"):
            problems.append(f"kind must be 'S' or 'Y', got {self.kind!r}")
        if self.z_ref <= 0:
            problems.append("z_ref must be > 0")
        if problems:
            raise SpecError(problems)

    @property
    def n_points(self) -> int:
        return int(self.frequencies.size)

    def is_reciprocal(self, rtol: float = 1e-9) -> bool:
        y12 = self.matrices[:, 0, 1]
        y21 = self.matrices[:, 1, 0]
        scale = np.maximum(np.abs(y12), np.abs(y21))
        scale[scale == 0.0] = 1.0
        return bool(np.all(np.abs(y12 - y21) <= rtol * scale))


@dataclass(frozen=True)
class QCurve:
    """Quality factor and effective inductance versus frequency.

    ``skipped_frequencies`` lists grid points where Re(Y11) vanished and
    no Q is defined. (q_max, f_peak) is the grid maximum, no
    interpolation.
    """

    frequencies: np.ndarray
    q_values: np.ndarray
    l_eff: np.ndarray
    q_max: float
    f_peak: float
    skipped_frequencies: np.ndarray = field(default_factory=lambda: np.array([]))

    def __post_init__(self):
        if not (len(self.frequencies) == len(self.q_values) == len(self.l_eff)):
            raise SpecError(["q-curve arrays must have equal length"])
        if self.f_peak not in self.frequencies:
            raise SpecError(["f_peak must be one of the sampled frequencies"])

    def l_at(self, frequency: float) -> float:
        """Effective inductance at the grid point nearest ``frequency``."""
        idx = int(np.argmin(np.abs(self.frequencies - frequency)))
        return float(self.l_eff[idx])
