"""Compiled kernels vs the pure-Python fallback on one workload.

Each backend runs in its own subprocess (the backend is chosen at import
time). Usage::

    python benchmarks/bench_backends.py [--base-len 2000] [--copies 20] [--queries 200]
"""
import argparse
import json
import os
import subprocess
import sys
import time


def workload(base_len, copies, queries, seed):
    import numpy as np

    from gindex import COMPILED, build_index
    from gindex.oracle import CorpusSpec, gen_corpus
    from gindex.succinct import BitVec

    text = gen_corpus(CorpusSpec(base_len=base_len, copies=copies, mutation_rate=0.001, seed=seed))
    rng = np.random.default_rng(seed)
    res = {"compiled": COMPILED, "n": len(text)}

    t0 = time.perf_counter()
    ix = build_index(text)
    res["build_s"] = time.perf_counter() - t0

    bv = BitVec(rng.integers(0, 2, 1 << 16))
    pos = rng.integers(0, bv.n, 20000).tolist()
    t0 = time.perf_counter()
    for p in pos:
        bv.rank1(p)
    res["rank_ns"] = 1e9 * (time.perf_counter() - t0) / len(pos)

    pats = [text[p:p + 10] for p in rng.integers(0, len(text) - 10, queries).tolist()]
    t0 = time.perf_counter()
    occ = sum(len(ix.locate(p)) for p in pats)
    el = time.perf_counter() - t0
    res["locate_us_per_occ"] = 1e6 * el / max(occ, 1)

    starts = rng.integers(0, len(text) - 100, queries).tolist()
    t0 = time.perf_counter()
    for p in starts:
        ix.extract(p, 100)
    res["extract_us_per_sym"] = 1e6 * (time.perf_counter() - t0) / (100 * queries)
    return res


def run_backend(pure, args):
    env = dict(os.environ, GINDEX_PURE="1" if pure else "0")
    cmd = [sys.executable, __file__, "--child", "--base-len", str(args.base_len),
           "--copies", str(args.copies), "--queries", str(args.queries), "--seed", str(args.seed)]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return json.loads(out.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--base-len", type=int, default=2000)
    ap.add_argument("--copies", type=int, default=20)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(workload(args.base_len, args.copies, args.queries, args.seed)))
        return
    comp = run_backend(False, args)
    pure = run_backend(True, args)
    if not comp["compiled"]:
        print("note: the extension is not built; both columns use the fallback")
    print(f"text length {comp['n']}")
    print(f"{'metric':<22}{'compiled':>12}{'pure':>12}{'speedup':>10}")
    for key in ("build_s", "rank_ns", "locate_us_per_occ", "extract_us_per_sym"):
        c, p = comp[key], pure[key]
        print(f"{key:<22}{c:>12.3f}{p:>12.3f}{p / c if c else float('nan'):>9.1f}x")


if __name__ == "__main__":
    main()
