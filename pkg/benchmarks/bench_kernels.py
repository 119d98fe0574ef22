"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from rcexp import kernels
from rcexp.codes import LinearCode, dual
from rcexp.ensemble import build_ensemble, companion_matrix, find_primitive_poly
from rcexp.field import rows_first
from rcexp.typeclasses import type_table


def workloads():
    t = companion_matrix(find_primitive_poly(2, 20))
    power = t
    for _ in range(4):
        power = power @ t
    c = LinearCode(rows_first(power, 10))
    tab = type_table(c.n, 2)
    chk = np.ascontiguousarray(dual(c).generator.array, dtype=np.int64)

    wide = LinearCode(rows_first(power, 18))
    wgen = np.ascontiguousarray(wide.generator.array, dtype=np.int64)

    ens = build_ensemble(companion_matrix(find_primitive_poly(2, 12)), 6, 6)
    gens = np.ascontiguousarray(np.stack([p.c1.generator.array for p in ens]), dtype=np.int64)
    return [
        ("type_histogram [20,18]", lambda m: m.type_histogram(wgen, 2, tab.rank_offsets, len(tab))),
        ("coset_leaders [20,10]", lambda m: m.coset_leaders(chk, 2, 20, tab.rank_offsets, tab.entropy_levels)),
        ("membership_counts 4095 x [12,6]", lambda m: m.membership_counts(gens, 2, 12)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    mods = kernels.available_backends()
    print("kernel," + ",".join(f"{m.NAME}_s" for m in mods) + ",speedup")
    for name, fn in workloads():
        times = []
        outputs = []
        for m in mods:
            best = float("inf")
            for _ in range(args.repeat):
                start = time.perf_counter()
                out = fn(m)
                best = min(best, time.perf_counter() - start)
            times.append(best)
            outputs.append(out)
        assert all(np.array_equal(outputs[0], o) for o in outputs[1:]), name
        speedup = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{name}," + ",".join(f"{t:.4f}" for t in times) + f",{speedup:.1f}")


if __name__ == "__main__":
    main()
