"""Backend equivalence: the compiled kernels must match the pure-Python
reference on identical inputs."""

import subprocess
import sys

import numpy as np
import pytest

from suspind import _kernels_py
from suspind import kernels


def _random_frame(rng, n_nodes=40, n_elems=60):
    coords = rng.uniform(-1e-3, 1e-3, size=(n_nodes, 3))
    conn = np.empty((n_elems, 2), dtype=np.int64)
    for i in range(n_elems):
        a, b = rng.choice(n_nodes, size=2, replace=False)
        conn[i] = (a, b)
    props = rng.uniform(1e-14, 1e-3, size=(n_elems, 4))
    return coords, conn, props


def _random_segments(rng, n=30):
    axis = rng.integers(0, 2, size=n).astype(np.int64)
    lo = rng.uniform(-500e-6, 0.0, size=n)
    hi = lo + rng.uniform(20e-6, 500e-6, size=n)
    perp = rng.uniform(0.0, 400e-6, size=n) + 15e-6 * np.arange(n)
    dirsign = rng.choice([-1.0, 1.0], size=n)
    return axis, lo, hi, perp, dirsign


compiled_only = pytest.mark.skipif(kernels.BACKEND != "compiled",
                                   reason="compiled extension not built")


@compiled_only
def test_assemble_matches_python():
    rng = np.random.default_rng(7)
    coords, conn, props = _random_frame(rng)
    k_c = kernels.assemble_stiffness(coords, conn, props)
    k_py = _kernels_py.assemble_stiffness(coords, conn, props)
    # norm-wise: structural zeros carry ~1e-16-scale cancellation residue
    assert np.abs(k_c - k_py).max() <= 1e-13 * np.abs(k_py).max()


@compiled_only
def test_mutual_matches_python():
    rng = np.random.default_rng(11)
    for trial in range(5):
        arrays = _random_segments(rng)
        for use_gmd in (True, False):
            got = kernels.mutual_pair_sum(*arrays, 10e-6, use_gmd)
            ref = _kernels_py.mutual_pair_sum(*arrays, 10e-6, use_gmd)
            assert got == pytest.approx(ref, rel=1e-13)


@compiled_only
def test_both_backends_raise_on_coincident_overlap():
    axis = np.zeros(2, dtype=np.int64)
    lo = np.array([0.0, 50e-6])
    hi = np.array([100e-6, 150e-6])
    perp = np.zeros(2)
    dirsign = np.ones(2)
    for impl in (kernels, _kernels_py):
        with pytest.raises(ValueError):
            impl.mutual_pair_sum(axis, lo, hi, perp, dirsign, 1e-6, True)


def test_local_stiffness_symmetric():
    k = _kernels_py.local_stiffness(1.3, 2.4e-3, 8.1e-2, 5e-4, 0.3)
    assert np.allclose(k, k.T, atol=0.0)


def test_element_rotation_orthonormal():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = rng.normal(size=3)
        length = float(np.linalg.norm(d))
        r = _kernels_py.element_rotation(d[0], d[1], d[2], length)
        assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)


def test_vertical_element_rotation_defined():
    r = _kernels_py.element_rotation(0.0, 0.0, 1e-6, 1e-6)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)


def test_env_var_forces_python_backend():
    import os

    code = "import suspind.kernels as k; print(k.backend_name())"
    env = dict(os.environ, SUSPIND_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"
