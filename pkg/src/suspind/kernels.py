"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
reference implementation. Set ``SUSPIND_PURE_PYTHON=1`` to force the
fallback (used by the equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("SUSPIND_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
mutual_pair_sum = _impl.mutual_pair_sum
assemble_stiffness = _impl.assemble_stiffness


def backend_name() -> str:
    """'compiled' when the extension is active, 'python' otherwise."""
    return BACKEND
