"""Dual-route checks for the subset-cost kernel: compiled extension vs numpy."""
import os
import subprocess
import sys

import numpy as np
import pytest

from ddlab import _kernels_py, kernels

try:
    from ddlab import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build environment
    _compiled = None


def _random_tables(rng, n, count=4):
    return [rng.integers(0, 2, size=1 << n).astype(np.uint8) for _ in range(count)]


@pytest.mark.parametrize("n", range(1, 11))
def test_routes_agree_on_random_tables(n):
    if _compiled is None:
        pytest.skip("compiled kernel unavailable")
    rng = np.random.default_rng(1000 + n)
    for table in _random_tables(rng, n):
        a = np.asarray(_compiled.all_subset_costs(table, n))
        b = np.asarray(_kernels_py.all_subset_costs(table, n))
        assert a.shape == (1 << n,)
        assert np.array_equal(a, b), "kernel routes disagree at n=%d" % n


def test_known_small_costs():
    # f = x1 AND x2: table [0,0,0,1]
    table = np.array([0, 0, 0, 1], dtype=np.uint8)
    costs = np.asarray(kernels.all_subset_costs(table, 2))
    # mask 0: one row (the whole table, not all equal -> 1 distinct row of length 4)
    assert costs[0] == 1
    # full mask: each input its own row -> distinct rows = distinct values = 2
    assert costs[3] == 2
    # single-variable masks: two rows [0,0],[0,1] -> both distinct = 2
    assert costs[1] == 2 and costs[2] == 2


def test_constant_table_costs_are_one():
    table = np.ones(16, dtype=np.uint8)
    costs = np.asarray(kernels.all_subset_costs(table, 4))
    assert costs.tolist() == [1] * 16


def test_backend_env_toggle():
    env = dict(os.environ, DDLAB_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from ddlab import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_reports_a_known_name():
    assert kernels.BACKEND in ("compiled", "python")
