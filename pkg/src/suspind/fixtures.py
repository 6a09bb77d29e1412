"""Synthetic measurement fixtures.

Real measured S-parameter data for this device family is not publicly
available, so the repository ships synthetic files produced by the
forward model: the device two-port plus a probe-pad parasitic network
("complete"), and the pads alone ("open"). Regenerating them through the
CLI keeps fixtures and model in lockstep.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .deembed import network_to_record, serialize_touchstone, y_to_s
from .em import default_frequency_grid, device_pi_model, pi_to_network
from .geometry import SpiralSpec, XBeamSpec
from .network import TwoPortNetwork

# probe-pad (GSG) parasitics: shunt pad capacitance with substrate loss
# at each port plus a small port-to-port coupling capacitance
PAD_CAPACITANCE = 25e-15        # F per port
PAD_LOSS_CONDUCTANCE = 5e-5     # S per port
PAD_COUPLING_CAPACITANCE = 2e-15

COMPLETE_NAME = "reference_device_complete.s2p"
OPEN_NAME = "reference_device_open.s2p"


def reference_device(mode: str = "airgap") -> SpiralSpec:
    """The canonical 10-turn suspended device used by examples and tests."""
    return SpiralSpec(
        inner_diameter=100e-6,
        trace_width=10e-6,
        spacing=2e-6,
        turns=10,
        metal_thickness=1e-6,
        airgap_height=2.5e-6,
        lead_gap=1.6e-6,
        dielectric_mode=mode,
        conductor_material="Cu",
        xbeam=XBeamSpec(),
    )


def pad_network(frequencies: np.ndarray) -> TwoPortNetwork:
    """Y-parameters of the pads-only (open dummy) structure."""
    omega = 2.0 * np.pi * np.asarray(frequencies, dtype=float)
    y_shunt = PAD_LOSS_CONDUCTANCE + 1j * omega * PAD_CAPACITANCE
    y_coupling = 1j * omega * PAD_COUPLING_CAPACITANCE
    mats = np.empty((omega.size, 2, 2), dtype=complex)
    mats[:, 0, 0] = y_shunt + y_coupling
    mats[:, 1, 1] = y_shunt + y_coupling
    mats[:, 0, 1] = -y_coupling
    mats[:, 1, 0] = -y_coupling
    return TwoPortNetwork(frequencies=frequencies, matrices=mats, kind="Y")


def fixture_networks(spec: SpiralSpec | None = None,
                     frequencies: np.ndarray | None = None
                     ) -> tuple[TwoPortNetwork, TwoPortNetwork, TwoPortNetwork]:
    """(complete, open, device) Y-parameter networks for a device."""
    if spec is None:
        spec = reference_device()
    if frequencies is None:
        frequencies = default_frequency_grid()
    device = pi_to_network(device_pi_model(spec), frequencies)
    pads = pad_network(frequencies)
    complete = TwoPortNetwork(frequencies=frequencies,
                              matrices=device.matrices + pads.matrices,
                              kind="Y")
    return complete, pads, device


def write_fixtures(out_dir, spec: SpiralSpec | None = None,
                   frequencies: np.ndarray | None = None) -> tuple[Path, Path]:
    """Serialize the complete/open fixture pair as Touchstone files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    complete, pads, _ = fixture_networks(spec, frequencies)
    paths = (out / COMPLETE_NAME, out / OPEN_NAME)
    for path, net in zip(paths, (complete, pads)):
        record = network_to_record(y_to_s(net))
        path.write_text(serialize_touchstone(record))
    return paths
