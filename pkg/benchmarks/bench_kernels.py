"""Compare the compiled and numpy kernel backends.

Times triplet counting and the per-triplet measure table on a synthetic
raster, plus the full sweep, and checks that both backends agree.

    python3 benchmarks/bench_kernels.py --channels 60 --bins 100000
"""
import argparse
import timeit

import numpy as np

from mvinfo import ingest, kernels


def synthetic(n_ch, T, seed):
    rng = np.random.default_rng(seed)
    z = np.cumsum(rng.random(T) > 0.98) % 2
    rate = np.where(z == 1, rng.uniform(0.05, 0.4, (n_ch, 1)), rng.uniform(0.005, 0.05, (n_ch, 1)))
    bins = (rng.random((n_ch, T)) < rate).astype(np.uint8)
    return ingest.SpikeRaster(tuple(range(n_ch)), 0.016, bins)


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--channels", type=int, default=60)
    ap.add_argument("--bins", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    r = synthetic(args.channels, args.bins, args.seed)
    ys, x1, x2, rows = ingest.triplet_index(args.channels)
    counts = kernels.triplet_counts(r.bins)
    pmf = counts[rows, ys].astype(np.float64) / (r.n_bins - 1)
    print(f"raster {args.channels} channels x {args.bins} bins, {ys.size} triplets")

    timings = {}
    for b in kernels.available_backends():
        timings[b] = (
            best_of(lambda: kernels.triplet_counts(r.bins, b), args.repeat),
            best_of(lambda: kernels.binary_measures(pmf, b), args.repeat),
            best_of(lambda: ingest.sweep_table(r, backend=b), args.repeat),
        )

    print(f"{'backend':<8} {'counts s':>10} {'measures s':>11} {'sweep s':>9}")
    for b, (c, m, s) in timings.items():
        print(f"{b:<8} {c:>10.3f} {m:>11.3f} {s:>9.3f}")
    if {"cython", "python"} <= set(timings):
        ratio = [p / c for c, p in zip(timings["cython"], timings["python"])]
        print(f"{'speedup':<8} {ratio[0]:>9.1f}x {ratio[1]:>10.1f}x {ratio[2]:>8.1f}x")
        same = np.array_equal(kernels.triplet_counts(r.bins, "cython"), kernels.triplet_counts(r.bins, "python"))
        diff = np.max(np.abs(kernels.binary_measures(pmf, "cython") - kernels.binary_measures(pmf, "python")))
        print(f"counts identical: {same}; max measure difference: {diff:.1e} bits")


if __name__ == "__main__":
    main()
