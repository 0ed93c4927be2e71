"""Compare the numba and numpy refinement kernels.

Two measurements per graph: the bare kernel on the unit partition with one
vertex individualised, and a full automorphism-group computation, which is run
in a child process so that ``STAB_DISABLE_NUMBA`` takes effect.

    python3 benchmarks/bench_refine.py --sizes 24 48 96 --repeat 20
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from stabgraph import _kernels
from stabgraph.graph import CirculantSpec, circulant
from stabgraph.stability import double_cover


def test_graph(n: int):
    # double cover of a circulant of valency 6: vertex-transitive, so refinement
    # from the unit partition does real work only after individualisation
    return double_cover(circulant(CirculantSpec.closed(n, [1, 2, n // 3])))


def individualised(n: int):
    lab = np.arange(n, dtype=np.int32)
    cell_of = np.ones(n, dtype=np.int32)
    cell_of[0] = 0
    cell_end = np.zeros(n, dtype=np.int32)
    cell_end[0], cell_end[1] = 1, n
    return lab, cell_of, cell_end


def time_kernel(fn, adj, repeat: int) -> tuple[float, int]:
    n = adj.shape[0]
    lab, cell_of, cell_end = individualised(n)
    trace = fn(adj, lab.copy(), cell_of.copy(), cell_end.copy(), np.array([0], dtype=np.int32))
    best = float("inf")
    for _ in range(repeat):
        a, b, c = lab.copy(), cell_of.copy(), cell_end.copy()
        t0 = time.perf_counter()
        fn(adj, a, b, c, np.array([0], dtype=np.int32))
        best = min(best, time.perf_counter() - t0)
    return best, int(trace)


AUT_SNIPPET = """
import sys, time
from stabgraph.search import automorphisms
sys.path.insert(0, {here!r})
from bench_refine import test_graph
adj = test_graph({n}).matrix
automorphisms(adj)
t0 = time.perf_counter()
res = automorphisms(adj)
print(time.perf_counter() - t0, res.order)
"""


def time_automorphisms(n: int, disable_numba: bool) -> tuple[float, int]:
    env = dict(os.environ)
    env["STAB_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    here = os.path.dirname(os.path.abspath(__file__))
    out = subprocess.run(
        [sys.executable, "-c", AUT_SNIPPET.format(here=here, n=n)],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    ).stdout.split()
    return float(out[0]), int(out[1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[12, 24, 48, 96])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--no-aut", action="store_true", help="skip the full automorphism timing")
    args = ap.parse_args()

    if _kernels.BACKEND != "numba":
        sys.exit("numba kernel unavailable; unset STAB_DISABLE_NUMBA")
    jit = _kernels.get_refiner("numba")
    npy = _kernels.get_refiner("numpy")

    print(f"{'n':>6} {'numba us':>10} {'numpy us':>10} {'speedup':>8}  {'aut numba s':>11} {'aut numpy s':>11}")
    for n in args.sizes:
        adj = test_graph(n).matrix
        tj, trace_j = time_kernel(jit, adj, args.repeat)
        tn, trace_n = time_kernel(npy, adj, args.repeat)
        if trace_j != trace_n:
            sys.exit(f"trace mismatch at n={n}: {trace_j} vs {trace_n}")
        row = f"{adj.shape[0]:>6} {tj * 1e6:>10.1f} {tn * 1e6:>10.1f} {tn / tj:>7.1f}x"
        if not args.no_aut:
            aj, oj = time_automorphisms(n, False)
            an, on = time_automorphisms(n, True)
            if oj != on:
                sys.exit(f"group order mismatch at n={n}: {oj} vs {on}")
            row += f"  {aj:>11.4f} {an:>11.4f}"
        print(row)


if __name__ == "__main__":
    main()
