"""Time the compiled graph kernels against their pure-Python twins.

Example:
    python benchmarks/bench_kernels.py --nh 300 --p 0.3 --repeats 5
"""
import argparse
import time

import numpy as np

from quditloops import _kernels_py as python
from quditloops.graph import masked_csr
from quditloops.lattice import PRIMAL, build
from quditloops.sampling import SeedSpec, sample_pattern

try:
    from quditloops import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nh", type=int, default=300)
    ap.add_argument("--nv", type=int, default=None, help="defaults to nh + 1")
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    lat = build((args.nh, args.nv or args.nh + 1))
    g = lat.side(PRIMAL)
    pattern = sample_pattern(lat, args.p, SeedSpec(args.seed, 0))
    csr = masked_csr(g, pattern.mask)
    call = (g.n_nodes, *csr, g.tail.size)
    print(f"shape=({lat.shape.n_h},{lat.shape.n_v}) p={args.p} error_edges={pattern.count}")

    # loop-edge kernel first: Paton only ever runs on the loop-edge subgraph
    loop_csr = masked_csr(g, pattern.mask & ~python.bridge_flags(*call)[0].view(bool))
    loop_call = (g.n_nodes, *loop_csr, g.tail.size)
    for fn, fargs in (("bridge_flags", call), ("paton_cycles", loop_call)):
        t_py = best_of(getattr(python, fn), fargs, args.repeats)
        if compiled is None:
            print(f"{fn:<14} python={t_py * 1e3:9.2f} ms  compiled=unavailable")
            continue
        out_py, out_c = getattr(python, fn)(*fargs), getattr(compiled, fn)(*fargs)
        same = all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(out_py, out_c))
        t_c = best_of(getattr(compiled, fn), fargs, args.repeats)
        print(f"{fn:<14} python={t_py * 1e3:9.2f} ms  compiled={t_c * 1e3:8.2f} ms  "
              f"speedup={t_py / t_c:6.1f}x  identical={same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
