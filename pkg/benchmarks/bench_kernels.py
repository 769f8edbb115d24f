"""Compare the compiled and pure-Python congruence kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0] [--json]

Both backends run on the same inputs and their outputs must agree; the
script exits nonzero if they do not or if the compiled core is missing.
"""

import argparse
import json
import sys
import time

import numpy as np

from unifint import _pykernels, kernels
from unifint.finalg import FiniteAlgebra, free_algebra, load_algebra
from unifint.terms import Signature

try:
    from unifint import _kernels as _ckernels
except ImportError:
    _ckernels = None


def data(name):
    from importlib.resources import files

    return load_algebra(str(files("unifint") / "data" / f"{name}.json"))


def random_algebra(n, rng):
    sig = Signature("rand", (("f", 2), ("g", 1), ("c", 0)))
    tables = {
        "f": rng.integers(0, n, n * n).astype(np.int32),
        "g": rng.integers(0, n, n).astype(np.int32),
        "c": np.array([0], dtype=np.int32),
    }
    return FiniteAlgebra(sig, n, tables, f"random{n}")


def canonical_labels(labels):
    # block label -> least element carrying it
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    return first[inv].astype(np.int32)


def workloads(seed):
    rng = np.random.default_rng(seed)
    out = []
    F = free_algebra(data("ba2"), ["x", "y", "z"]).algebra
    n = F.size
    pairs = [(0, b) for b in range(1, n)]
    out.append((f"principal_batch F_BA(3), {len(pairs)} pairs", "batch", F.translation_generators, pairs))
    F = free_algebra(data("bdl2"), ["x", "y", "z", "w"]).algebra
    pairs = [(a, b) for a in range(F.size) for b in range(a + 1, F.size)][:4000]
    out.append((f"principal_batch F_BDL(4), {len(pairs)} pairs", "batch", F.translation_generators, pairs))
    for size in (200, 2000):
        A = random_algebra(size, rng)
        seeds = rng.integers(0, size, (4, 2))
        out.append((f"cg_close random algebra n={size}", "close", A.translation_generators, seeds))
    r1 = canonical_labels(rng.integers(0, 500, 200000))
    r2 = canonical_labels(rng.integers(0, 500, 200000))
    out.append(("partition_join n=200000", "join", r1, r2))
    return out


def run(kind, impl, a, b):
    if kind == "batch":
        return kernels.principal_batch(a, b, impl=impl)
    if kind == "close":
        n = a.shape[0]
        return kernels.cg_close(a, np.arange(n, dtype=np.int32), b, impl=impl)
    return kernels.partition_join(a, b, impl=impl)


def best_of(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 2

    rows, ok = [], True
    for label, kind, a, b in workloads(args.seed):
        tc, rc = best_of(lambda: run(kind, _ckernels, a, b), args.repeat)
        tp, rp = best_of(lambda: run(kind, _pykernels, a, b), max(1, args.repeat // 2))
        same = np.array_equal(np.asarray(rc), np.asarray(rp))
        ok &= same
        rows.append({"workload": label, "cython_s": round(tc, 6), "python_s": round(tp, 6),
                     "speedup": round(tp / tc, 1) if tc else None, "agree": same})

    if args.json:
        print(json.dumps({"seed": args.seed, "rows": rows}, indent=2))
    else:
        w = max(len(r["workload"]) for r in rows)
        print(f"{'workload':<{w}}  {'cython':>10}  {'python':>10}  {'speedup':>8}  agree")
        for r in rows:
            print(f"{r['workload']:<{w}}  {r['cython_s']:>9.4f}s  {r['python_s']:>9.4f}s  {r['speedup']:>7}x  {r['agree']}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
