"""suspind: design toolkit for suspended on-chip square spiral inductors.

Jointly evaluates electrical quality factor (segment-summation
inductance, skin-effect loss, pi-model two-port) and mechanical
stability (analytic strip formulas plus a 3D Euler-Bernoulli frame FEM)
of air-gap spiral inductors with optional X-beam stiffeners, and
provides an S-parameter de-embedding pipeline and a constrained
design-space explorer.
"""

__version__ = "0.1.0"

from .errors import SuspindError
from .geometry import SegmentSet, SpiralSpec, XBeamSpec, generate_layout, validate_spec
from .kernels import backend_name
from .materials import Material, default_table

__all__ = [
    "Material",
    "SegmentSet",
    "SpiralSpec",
    "SuspindError",
    "XBeamSpec",
    "__version__",
    "backend_name",
    "default_table",
    "generate_layout",
    "validate_spec",
]
