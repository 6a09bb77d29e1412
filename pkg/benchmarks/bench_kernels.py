#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths (pairwise mutual-inductance summation and frame
stiffness assembly) plus an end-to-end design evaluation, on devices of
growing turn count. Run after building the extension:

    python benchmarks/bench_kernels.py
"""

import time
from dataclasses import replace

import numpy as np

from suspind import _kernels_py
from suspind.em import _pair_arrays
from suspind.fixtures import reference_device
from suspind.geometry import generate_layout
from suspind.mechanics import build_frame

try:
    from suspind import _kernels
except ImportError:
    _kernels = None


def timeit(fn, *args, repeat=5, **kwargs):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, result


def frame_arrays(model):
    conn = np.empty((len(model.elements), 2), dtype=np.int64)
    props = np.empty((len(model.elements), 4))
    for i, el in enumerate(model.elements):
        conn[i] = (el.node_a, el.node_b)
        props[i] = el.section.rigidity(el.material)
    return np.ascontiguousarray(model.nodes), conn, props


def main():
    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return

    print(f"{'kernel':<34}{'python':>12}{'compiled':>12}{'speedup':>9}")
    for turns in (5, 10, 20):
        spec = replace(reference_device(), turns=turns)
        layout = generate_layout(spec)
        arrays = _pair_arrays(layout.winding)
        width = layout.winding[0].width

        t_py, ref = timeit(_kernels_py.mutual_pair_sum, *arrays, width, True)
        t_c, got = timeit(_kernels.mutual_pair_sum, *arrays, width, True)
        assert abs(got - ref) <= 1e-12 * abs(ref)
        name = f"mutual_pair_sum (turns={turns}, n={len(layout.winding)})"
        print(f"{name:<34}{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms"
              f"{t_py / t_c:>8.1f}x")

    for turns in (5, 10):
        spec = replace(reference_device(), turns=turns)
        model = build_frame(generate_layout(spec), 4)
        coords, conn, props = frame_arrays(model)
        t_py, k_ref = timeit(_kernels_py.assemble_stiffness, coords, conn, props)
        t_c, k_got = timeit(_kernels.assemble_stiffness, coords, conn, props)
        assert np.abs(k_got - k_ref).max() <= 1e-12 * np.abs(k_ref).max()
        name = f"assemble_stiffness (turns={turns}, m={conn.shape[0]})"
        print(f"{name:<34}{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms"
              f"{t_py / t_c:>8.1f}x")

    # end to end: one full design evaluation (solver time dominates and is
    # LAPACK either way, so the gap narrows)
    import os
    import subprocess
    import sys

    code = ("import time; from suspind.explore import evaluate; "
            "from suspind.fixtures import reference_device; "
            "evaluate(reference_device()); t0=time.perf_counter(); "
            "evaluate(reference_device()); "
            "print(time.perf_counter()-t0)")
    times = {}
    for label, env_extra in (("python", {"SUSPIND_PURE_PYTHON": "1"}),
                             ("compiled", {})):
        env = dict(os.environ)
        env.pop("SUSPIND_PURE_PYTHON", None)
        env.update(env_extra)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        times[label] = float(out.stdout.strip())
    name = "evaluate() end-to-end (turns=10)"
    print(f"{name:<34}{times['python'] * 1e3:>10.2f}ms"
          f"{times['compiled'] * 1e3:>10.2f}ms"
          f"{times['python'] / times['compiled']:>8.1f}x")


if __name__ == "__main__":
    main()
