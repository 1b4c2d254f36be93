"""Compare the compiled and pure-Python echelon kernels.

Two workloads: random sparse integer matrices, and the cohomology of an
End-valued complex of a random abelian extension (the real hot path).  Each backend must return the
same pivots; timings are best-of-repeats wall clock.

    python3 benchmarks/bench_echelon.py [--repeat 3] [--size 120]
"""
import argparse
import random
import time

from shatiyah import linalg
from shatiyah import complex as cx
from shatiyah.atiyah import coefficient_module
from shatiyah.generators import random_abelian_extension
from shatiyah.shlie import quotient_module


def random_rows(rng, n, m, density):
    rows = []
    for _ in range(n):
        r = {j: rng.randint(-9, 9) for j in range(m) if rng.random() < density}
        rows.append({j: v for j, v in r.items() if v})
    return rows


def best(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return out, min(times)


def workload_random(size, seed=0):
    rng = random.Random(seed)
    rows = random_rows(rng, size, size, 0.05)
    return lambda: linalg.echelon(rows)


def workload_cohomology(weight, seed=3):
    rng = random.Random(seed)
    pair, _ = random_abelian_extension(rng, (-1, -1, 0), (-1, 0))
    mod = coefficient_module(pair, quotient_module(pair))

    def run():
        c = cx.build(mod, weight)
        return [cx.cohomology(c, n).dimension for n in (0, 1, 2, 3)]
    return run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--size", type=int, default=120)
    ap.add_argument("--weight", type=int, default=5)
    args = ap.parse_args()
    try:
        linalg.use_backend("compiled")
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return
    cases = [("random %dx%d" % (args.size, args.size), workload_random(args.size)),
             ("extension cohomology N=%d" % args.weight, workload_cohomology(args.weight))]
    print("%-28s %10s %10s %8s" % ("workload", "python s", "compiled s", "speedup"))
    for name, fn in cases:
        linalg.use_backend("python")
        r_py, t_py = best(fn, args.repeat)
        linalg.use_backend("compiled")
        r_c, t_c = best(fn, args.repeat)
        assert r_py == r_c, "backends disagree on %s" % name
        print("%-28s %10.4f %10.4f %7.2fx" % (name, t_py, t_c, t_py / t_c))


if __name__ == "__main__":
    main()
