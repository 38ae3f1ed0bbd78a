"""Compare the compiled GF(p) kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--sizes 8 16 32 64] [--repeat 5]

Also times one oracle suite end to end under both settings, in a
subprocess so the kernel choice made at import is honoured.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from exactcat.linalg import KERNEL, _kernels_py


def _rows(rng, n, p):
    return [[rng.randrange(p) for _ in range(n)] for _ in range(n)]


def bench_rref(sizes, repeat, p=7):
    from exactcat.linalg import _kernels
    rng = random.Random(0)
    print(f"{'n':>5} {'python rref':>14} {'cython rref':>14} {'speedup':>8}")
    for n in sizes:
        rows = _rows(rng, n, p)
        assert _kernels.rref_modp(rows, p) == _kernels_py.rref_modp(rows, p)
        tp = min(timeit.repeat(lambda: _kernels_py.rref_modp(rows, p), number=1, repeat=repeat))
        tc = min(timeit.repeat(lambda: _kernels.rref_modp(rows, p), number=1, repeat=repeat))
        print(f"{n:>5} {tp * 1e3:>12.2f}ms {tc * 1e3:>12.2f}ms {tp / tc:>7.1f}x")


def bench_matmul(sizes, repeat, p=7):
    from exactcat.linalg import _kernels
    rng = random.Random(1)
    print(f"{'n':>5} {'python mul':>14} {'cython mul':>14} {'speedup':>8}")
    for n in sizes:
        a, b = _rows(rng, n, p), _rows(rng, n, p)
        assert _kernels.matmul_modp(a, b, n, n, p) == _kernels_py.matmul_modp(a, b, n, n, p)
        tp = min(timeit.repeat(lambda: _kernels_py.matmul_modp(a, b, n, n, p), number=1, repeat=repeat))
        tc = min(timeit.repeat(lambda: _kernels.matmul_modp(a, b, n, n, p), number=1, repeat=repeat))
        print(f"{n:>5} {tp * 1e3:>12.2f}ms {tc * 1e3:>12.2f}ms {tp / tc:>7.1f}x")


def bench_suite(name, cases):
    code = ("import time; from exactcat.oracles import run_suite; from exactcat.linalg import KERNEL;"
            f"t = time.perf_counter(); r = run_suite({name!r}, 1, {cases}); "
            "print(KERNEL, r.passed, round(time.perf_counter() - t, 2))")
    for pure in ("", "1"):
        env = dict(os.environ)
        env.pop("EXACTCAT_PURE_PYTHON", None)
        if pure:
            env["EXACTCAT_PURE_PYTHON"] = pure
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        kernel, ok, secs = out.stdout.split()
        print(f"suite {name} ({cases} cases) with {kernel:>6} kernels: {secs}s, passed={ok}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--suite", default="acyclicity")
    ap.add_argument("--cases", type=int, default=100)
    args = ap.parse_args()
    if KERNEL != "cython":
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
    bench_rref(args.sizes, args.repeat)
    print()
    bench_matmul(args.sizes, args.repeat)
    print()
    bench_suite(args.suite, args.cases)


if __name__ == "__main__":
    main()
