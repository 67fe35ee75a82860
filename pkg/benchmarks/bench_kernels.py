"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from trefoil_geom import holonomy
from trefoil_geom.kernels import backends
from trefoil_geom.metric import sample_chart


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    pair = holonomy.generators_ab(0.9, 0.4)
    S, L = pair.S, pair.a_lm
    mu, nu, zeta = sample_chart(np.random.default_rng(0), S, args.n)
    x = np.random.default_rng(1).uniform(-12, 12, args.n)
    y = np.random.default_rng(2).uniform(0, 4, args.n)
    cases = {
        "seifert_map": lambda k: k.seifert_map(L, mu, nu, zeta, S),
        "metric_batch": lambda k: k.metric_batch(mu, nu, S),
        "pullback_residuals": lambda k: k.pullback_residuals(L, mu, nu, zeta, S, 1e-6),
        "classify_p1": lambda k: k.classify_p1(x, y, 1e-12),
    }
    impls = backends()
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{name:>14}" for name in impls) + f"{'speedup':>10}")
    for label, fn in cases.items():
        times = {name: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for name, k in impls.items()}
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<20}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times.values()) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
