"""Compare the numba kernels with the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from pgrouplab import _kernels as K
from pgrouplab import parse_group
from pgrouplab.homset import aut_array, endo_array

CASES = ("2:[2,2,1]", "3:[2,1,1]", "5:[2,1]", "2:[3,2,1]")


def _best(fn, repeat):
    fn()  # warm-up (numba compilation, caches)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench(spec, repeat):
    G = parse_group(spec)
    mats = endo_array(G, bound=1 << 22)
    rng = np.random.default_rng(0)
    sample = mats[rng.integers(0, len(mats), 256)]
    autos = aut_array(G, bound=1 << 22)[:32]
    codes = np.arange(G.order)
    jobs = {
        "aut_mask": lambda nb: K.aut_mask(mats, G.lam, G.p, use_numba=nb),
        "apply_codes": lambda nb: K.apply_codes(sample, codes, G.moduli, use_numba=nb),
        "height_sequences": lambda nb: K.height_sequences(G.moduli, G.lam, G.p, use_numba=nb),
        "orbit_labels": lambda nb: K.orbit_labels(autos, G.moduli, use_numba=nb),
    }
    rows = []
    for name, job in jobs.items():
        t_np = _best(lambda: job(False), repeat)
        t_nb = _best(lambda: job(True), repeat) if K.HAVE_NUMBA else float("nan")
        rows.append((spec, name, len(mats), t_np, t_nb))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'group':<14}{'kernel':<18}{'|End|':>10}{'numpy s':>11}{'numba s':>11}{'speedup':>9}")
    for spec in CASES:
        for spec_, name, n, t_np, t_nb in bench(spec, args.repeat):
            print(f"{spec_:<14}{name:<18}{n:>10}{t_np:>11.4f}{t_nb:>11.4f}{t_np / t_nb:>9.1f}")


if __name__ == "__main__":
    main()
