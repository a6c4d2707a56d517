"""Time the star product with the compiled and the numpy kernel.

    python benchmarks/bench_star.py [--repeat N] [--sizes 4,8,16]

For each support size the same random pairs are multiplied with both
backends; the results are compared entrywise before timings are reported.
"""

import argparse
import time

import numpy as np

from endocross import kernels
from endocross.matcalc import random_element, star
from endocross.sampling import random_system


def _time(pairs, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [star(a, b) for a, b in pairs]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--sizes", default="2,4,8")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'max index':>9}  {'backend':>8}  {'seconds':>10}  {'per pair (us)':>14}")
    for size in (int(s) for s in args.sizes.split(",")):
        endo = random_system(rng, max_blocks=3, max_dim=3)
        pairs = [(random_element(endo, rng, max_index=size, density=0.8),
                  random_element(endo, rng, max_index=size, density=0.8)) for _ in range(args.pairs)]
        results = {}
        for name in backends:
            prev = kernels.use_backend(name)
            try:
                secs, out = _time(pairs, args.repeat)
            finally:
                kernels.use_backend(prev)
            results[name] = out
            print(f"{size:>9}  {name:>8}  {secs:>10.4f}  {1e6 * secs / len(pairs):>14.1f}")
        if len(results) == 2:
            diff = max(x.max_abs_diff(y) for x, y in zip(results["compiled"], results["python"]))
            print(f"{'':>9}  max backend difference {diff:.2e}")


if __name__ == "__main__":
    main()
