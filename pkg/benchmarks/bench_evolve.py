"""Compare the compiled and pure-Python evolution kernels.

    python3 benchmarks/bench_evolve.py [--repeat N]

Prints wall time per backend and the largest amplitude difference between
them for two lattice anneals.
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from fieldanneal import anneal, kernels, models

CASES = [
    ("3x3 arctan tau=1000", 3, 3, Fraction(3, 11), anneal.Schedule("arctan_finite", tau=1000.0), 1000.0),
    ("20x20 exp(-t) t=20", 20, 20, Fraction(1, 11), anneal.Schedule("exp_decay", a=1.0), 20.0),
]


def run_case(width, height, flux, sched, t_end, backend, repeat):
    spec = models.LatticeSpec(width, height, flux)
    prob = anneal.AnnealProblem(models.build_hofstadter_single_particle(spec),
                                models.build_xx_driver_single_particle(spec), sched)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        trace = anneal.evolve(prob, t_end, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, trace


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    print(f"{'case':24s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s} {'steps':>8s} {'max |diff|':>11s}")
    for name, w, h, flux, sched, t_end in CASES:
        tc, trc = run_case(w, h, flux, sched, t_end, "cython", args.repeat)
        tp, trp = run_case(w, h, flux, sched, t_end, "python", 1)
        diff = float(np.abs(trc.states - trp.states).max())
        print(f"{name:24s} {tc:10.3f} {tp:10.3f} {tp / tc:8.1f} {trc.accepted_steps:8d} {diff:11.2e}")


if __name__ == "__main__":
    main()
