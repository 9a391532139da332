"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each kernel runs on identical inputs in both backends; the table reports
the best wall time of ``--repeat`` runs and the speed-up.
"""
import argparse
import sys
import timeit

import numpy as np

from dirichlet_cf._kernels import compiled_backend, python_backend
from dirichlet_cf.combinatorics import dihedral_group


def cases(quick: bool):
    rng = np.random.default_rng(0)
    scale = 0.25 if quick else 1.0

    n_z = int(400 * scale)
    p = rng.normal(size=n_z) * 0.1 + 0j
    yield "cycle_index_values", f"nmax={n_z}", lambda b: b.cycle_index_values(p, n_z)

    alpha = rng.uniform(0.1, 2, 4).astype(complex)
    s = rng.uniform(-1, 1, 4).astype(complex)
    n_d = int(40 * scale)
    yield "degree_sums", f"k=4 nmax={n_d}", lambda b: b.degree_sums(alpha, s, n_d, 1.0)

    rows = int(20_000 * scale)
    cdf = np.linspace(0, 1, 9)
    u = rng.random(rows * 60)

    def stick(b):
        out = np.zeros((rows, 8))
        w1 = np.zeros(rows)
        na = np.zeros(rows, dtype=np.int64)
        return b.stick_breaking_cells(1.0, 1e-10, cdf, u, out, w1, na, 0)

    yield "stick_breaking_cells", f"rows={rows} beta=1", stick

    n_o = 7 if quick else 8
    perms = np.array([[x - 1 for x in g.images] for g in dihedral_group(n_o)], dtype=np.int64)
    yield "orbit_representatives", f"D_{n_o}, r=3", lambda b: b.orbit_representatives(perms, 3, n_o)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled backend not available; rebuild with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':24s} {'input':20s} {'python [s]':>11s} {'compiled [s]':>13s} {'speed-up':>9s}")
    for name, desc, fn in cases(args.quick):
        t_py = min(timeit.repeat(lambda: fn(python_backend), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(compiled_backend), number=1, repeat=args.repeat))
        print(f"{name:24s} {desc:20s} {t_py:11.4f} {t_c:13.5f} {t_py / t_c:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
