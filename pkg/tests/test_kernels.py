import os
import subprocess
import sys

import numpy as np
import pytest

from dirichlet_cf import _kernels
from dirichlet_cf._kernels import compiled_backend, python_backend
from dirichlet_cf.combinatorics import cyclic_group, dihedral_group, symmetric_group

needs_compiled = pytest.mark.skipif(compiled_backend is None, reason="compiled extension not built")
BACKENDS = [python_backend] + ([compiled_backend] if compiled_backend is not None else [])


def _stick(backend, beta, eps, cdf, u, rows):
    out = np.zeros((rows, len(cdf) - 1))
    w1 = np.zeros(rows)
    na = np.zeros(rows, dtype=np.int64)
    row, used = backend.stick_breaking_cells(beta, eps, cdf, u, out, w1, na, 0)
    return row, used, out, w1, na


def test_backend_flag():
    assert _kernels.BACKEND in ("compiled", "python")
    assert (_kernels.BACKEND == "compiled") == (compiled_backend is not None)


@needs_compiled
def test_cycle_index_values_parity():
    rng = np.random.default_rng(0)
    p = rng.normal(size=25) + 1j * rng.normal(size=25)
    a = python_backend.cycle_index_values(p, 25)
    b = compiled_backend.cycle_index_values(p, 25)
    assert np.allclose(a, b, rtol=1e-13, atol=0)


@needs_compiled
@pytest.mark.parametrize("rho", [1.0, 3.5])
def test_degree_sums_parity(rho):
    rng = np.random.default_rng(1)
    alpha = rng.uniform(0.1, 2, 4).astype(complex)
    s = (rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4))
    a = python_backend.degree_sums(alpha, s, 12, rho)
    b = compiled_backend.degree_sums(alpha, s, 12, rho)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_compiled
@pytest.mark.parametrize("beta,eps", [(0.3, 1e-6), (1.0, 1e-10), (7.0, 1e-8)])
def test_stick_breaking_identical(beta, eps):
    cdf = np.array([0.0, 0.1, 0.35, 0.7, 1.0])
    u = np.random.default_rng(2).random(20_000)
    ra = _stick(python_backend, beta, eps, cdf, u, 300)
    rb = _stick(compiled_backend, beta, eps, cdf, u, 300)
    assert ra[0] == rb[0] and ra[1] == rb[1]
    for x, y in zip(ra[2:], rb[2:]):
        assert np.array_equal(x, y)


@pytest.mark.parametrize("backend", BACKENDS)
def test_stick_breaking_stops_before_running_out(backend):
    cdf = np.array([0.0, 0.5, 1.0])
    u = np.random.default_rng(3).random(51)
    row, used, out, w1, na = _stick(backend, 1.0, 1e-12, cdf, u, 100)
    assert row < 100 and used <= 51 and used % 2 == 0
    assert np.allclose(out[:row].sum(axis=1), 1)
    assert 2 * na[:row].sum() == used
    # resuming with the unused tail plus fresh numbers continues the stream
    u2 = np.concatenate([u[used:], np.random.default_rng(4).random(10_000)])
    row2, _ = backend.stick_breaking_cells(1.0, 1e-12, cdf, u2, out, w1, na, row)
    assert row2 == 100


@needs_compiled
@pytest.mark.parametrize("group,r", [(cyclic_group(5), 3), (dihedral_group(6), 2), (symmetric_group(4), 3)])
def test_orbit_representatives_parity(group, r):
    perms = np.array([[x - 1 for x in g.images] for g in group], dtype=np.int64)
    n = group[0].n
    ra, sa = python_backend.orbit_representatives(perms, r, n)
    rb, sb = compiled_backend.orbit_representatives(perms, r, n)
    assert list(ra) == list(rb) and list(sa) == list(sb)
    assert sum(sa) == r**n


@pytest.mark.parametrize("backend", BACKENDS)
def test_orbit_sizes_divide_group_order(backend):
    group = dihedral_group(5)
    perms = np.array([[x - 1 for x in g.images] for g in group], dtype=np.int64)
    reps, sizes = backend.orbit_representatives(perms, 2, 5)
    assert len(reps) == 8
    assert all(len(group) % s == 0 for s in sizes)


def test_pure_python_switch_gives_identical_draws():
    code = ("from dirichlet_cf import BACKEND; from dirichlet_cf.ferguson import *;"
            "m = ferguson_marginals(1.3, BasePartition([0.2, 0.6]), 5000, seed=11);"
            "print(BACKEND, m.masses.sum(axis=0).tobytes().hex())")
    env = dict(os.environ)
    env.pop("DIRICHLET_CF_PURE_PYTHON", None)
    fast = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    env["DIRICHLET_CF_PURE_PYTHON"] = "1"
    slow = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert slow.stdout.split()[0] == "python"
    assert fast.stdout.split()[1] == slow.stdout.split()[1]


@needs_compiled
def test_benchmark_script_runs(capsys):
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "benchmarks"))
    try:
        import bench_kernels
    finally:
        sys.path.pop(0)
    assert bench_kernels.main(["--quick", "--repeat", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("x\n") == 4
