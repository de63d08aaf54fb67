"""Time the numba and numpy backends on the hot kernels and two end-to-end calls.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends must give the same answers; the script checks that before
reporting timings.
"""

import argparse
import time

import numpy as np

from lorentzseq import EmbeddingSpec, SearchConfig, _kernels, estimate_operator_norm, lorentz
from lorentzseq.noncompact import build_constant_cover, verify_cover


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(1_000_000)
    y = rng.standard_normal(5_000)
    level = np.abs(rng.standard_normal(200_000)) * 0.05
    level[rng.random(level.size) < 0.5] = 1.0
    thr = np.full(2_000, 0.1)
    spec = EmbeddingSpec(lorentz(1, np.inf), lorentz(2, 2))
    cfg = SearchConfig(L=20_000, restarts=2, max_iters=200)
    s = lorentz(1, 2)
    return [
        ("compensated_cumsum 1e6", lambda: _kernels.compensated_cumsum(x)),
        ("pav_nonincreasing 5e3", lambda: _kernels.pav_nonincreasing(y)),
        ("greedy_indices 2e5/2e3", lambda: _kernels.greedy_indices(level, thr)),
        ("estimate_operator_norm L=2e4", lambda: estimate_operator_norm(spec, cfg).best_value),
        ("verify_cover 1e4 samples", lambda: verify_cover(
            build_constant_cover(s, 0.75, 64), s, 10_000, 7).max_observed_distance),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])
    results = {}
    for b in backends:
        _kernels.set_backend(b)
        _kernels.warmup()
        for name, fn in cases():
            results[name, b] = best_of(fn, args.repeat)

    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup  agree")
    for name, _ in cases():
        row = [results[name, b] for b in backends]
        line = f"{name:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t, _ in row)
        if len(row) == 2:
            a, b = row[0][1], row[1][1]
            agree = np.allclose(a, b, rtol=1e-12, atol=0) if isinstance(a, np.ndarray) else a == b
            line += f"{row[0][0] / row[1][0]:11.1f}x  {agree}"
        print(line)


if __name__ == "__main__":
    main()
