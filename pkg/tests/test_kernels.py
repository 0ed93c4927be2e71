import os
import random
import subprocess
import sys

import numpy as np
import pytest

from oracles import random_graph

from stabgraph import _kernels
from stabgraph.graph import build_graph


def random_partition(rng: random.Random, n: int):
    lab = list(range(n))
    rng.shuffle(lab)
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1))) if n > 1 else []
    bounds = [0] + cuts + [n]
    lab = np.array(lab, dtype=np.int32)
    cell_of = np.empty(n, dtype=np.int32)
    cell_end = np.zeros(n, dtype=np.int32)
    starts = []
    for s, e in zip(bounds, bounds[1:]):
        cell_of[lab[s:e]] = s
        cell_end[s] = e
        starts.append(s)
    return lab, cell_of, cell_end, np.array(starts, dtype=np.int32)


def backends():
    out = ["numpy", "python"]
    if _kernels.BACKEND == "numba":
        out.append("numba")
    return out


def test_backends_agree_bit_for_bit():
    rng = random.Random(7)
    for trial in range(300):
        n = rng.randint(1, 14)
        adj = build_graph(n, random_graph(rng, n, rng.random())).matrix
        lab, cell_of, cell_end, starts = random_partition(rng, n)
        results = {}
        for b in backends():
            fn = _kernels.get_refiner(b)
            la, co, ce = lab.copy(), cell_of.copy(), cell_end.copy()
            trace = int(fn(adj, la, co, ce, starts.copy()))
            results[b] = (trace, la.tolist(), co.tolist(), [int(ce[s]) for s in sorted(set(co.tolist()))])
        first = next(iter(results.values()))
        assert all(r == first for r in results.values()), trial


def test_refinement_is_equitable():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(2, 12)
        adj = build_graph(n, random_graph(rng, n)).matrix
        lab, cell_of, cell_end, starts = random_partition(rng, n)
        _kernels.refine(adj, lab, cell_of, cell_end, starts)
        cells = {}
        for v in range(n):
            cells.setdefault(int(cell_of[v]), []).append(v)
        for a in cells.values():
            for b in cells.values():
                counts = {int(adj[v, b].sum()) for v in a}
                assert len(counts) == 1


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.get_refiner("fortran")


def test_numpy_fallback_selected_by_env():
    code = (
        "from stabgraph import _kernels; from stabgraph.graph import CirculantSpec, circulant;"
        "from stabgraph.stability import stability_status;"
        "v = stability_status(circulant(CirculantSpec.closed(10, [1, 2])));"
        "print(_kernels.BACKEND, v.aut_order, v.double_cover_aut_order)"
    )
    env = dict(os.environ, STAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "20", "80"]
