#!/usr/bin/env python3
"""Time the numba and numpy simulator kernels on the same ensembles.

    python3 benchmarks/bench_sim.py --runs 2000

Both backends consume the same random stream, so each scenario also checks
that the two summaries are identical.
"""
import argparse
import random
import time

from outbreaknet import fixtures
from outbreaknet.sim import ContactStructure, SimParams, ensemble, simulate
from outbreaknet.sim._kernels import HAVE_NUMBA


def sparse_town(n=500, mean_degree=6, seed=0):
    rnd = random.Random(seed)
    ids = [f"p{i:04d}" for i in range(n)]
    edges = set()
    while len(edges) < n * mean_degree // 2:
        a, b = rnd.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    return ContactStructure({p: "X" for p in ids},
                            [(ids[a], ids[b], "family") for a, b in sorted(edges)])


def scenarios():
    star = fixtures.sim_config("star")
    sat = fixtures.sim_config("saturated")
    yield "star-10", star.contacts, star.params, star.seed_person
    yield "complete-20", sat.contacts, sat.params, sat.seed_person
    yield "town-500", sparse_town(), SimParams(0.08, cfr=0.5), "p0000"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    # first call compiles (or loads the on-disk cache)
    c = fixtures.sim_config("star")
    _, compile_s = timed(lambda: simulate(c.contacts, c.params, c.seed_person, backend="numba"))
    print(f"numba warm-up: {compile_s:.2f}s")
    print(f"{'scenario':<12} {'runs':>6} {'numba s':>9} {'numpy s':>9} {'speed-up':>9}  same")
    for name, contacts, params, seed_person in scenarios():
        res = {}
        for backend in ("numba", "numpy"):
            res[backend] = timed(lambda: ensemble(contacts, params, seed_person,
                                                  n_runs=args.runs, master_seed=args.seed,
                                                  backend=backend, workers=args.workers))
        (a, ta), (b, tb) = res["numba"], res["numpy"]
        print(f"{name:<12} {args.runs:>6} {ta:>9.3f} {tb:>9.3f} {tb / ta:>8.1f}x  {a == b}")


if __name__ == "__main__":
    main()
