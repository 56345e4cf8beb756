import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ppnash import _pykernels as py
from ppnash import kernels
from ppnash.network import random_connected_graph

cy = pytest.importorskip("ppnash._ckernels", reason="compiled kernels not built")
finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_var_forces_python_backend():
    out = subprocess.run([sys.executable, "-c", "import ppnash.kernels as k; print(k.BACKEND)"],
                         env={**os.environ, "PPNASH_PURE_PYTHON": "1"}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@given(st.integers(1, 8), st.integers(1, 5), st.integers(0, 1000))
def test_mix_estimates_parity(N, n, seed):
    W = random_connected_graph(N, 0.4, seed).W
    X = np.random.default_rng(seed).normal(size=(N, n))
    a, b = py.mix_estimates(W, X), cy.mix_estimates(W, X)
    assert np.allclose(a, b, rtol=1e-14, atol=1e-15)
    assert np.allclose(a, 0.5 * (X + W @ X), rtol=1e-13, atol=1e-15)


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(arrays(float, (5, d), elements=finite),
                                                    arrays(float, (5, d), elements=finite))))
def test_pair_products_parity(ab):
    a, b = ab
    for u, v in zip(py.pair_products(a, b), cy.pair_products(a, b)):
        assert np.allclose(u, v, rtol=1e-12, atol=1e-9)


@given(arrays(float, (4, 3), elements=finite), arrays(float, (4, 3), elements=st.floats(0, 10)))
def test_interval_distance_parity(lo, width):
    hi = lo + width
    assert np.allclose(py.interval_distance(lo, hi), cy.interval_distance(lo, hi), rtol=1e-13)
    assert py.interval_distance(lo[0], hi[0]) == pytest.approx(cy.interval_distance(lo[0], hi[0]))


def test_interval_distance_with_infinite_ends():
    lo = np.array([-np.inf, 1.0, -2.0])
    hi = np.array([np.inf, np.inf, -1.0])
    for mod in (py, cy):
        assert mod.interval_distance(lo, hi) == pytest.approx(np.sqrt(2.0))


def test_read_only_inputs_accepted():
    W = random_connected_graph(3, seed=0).W.copy()
    W.setflags(write=False)
    assert np.allclose(cy.mix_estimates(W, np.ones((3, 2))), 1.0)


def test_benchmark_runs():
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--repeat", "1"], capture_output=True, text=True,
                         timeout=300)
    assert out.returncode == 0 and "mix_estimates" in out.stdout
