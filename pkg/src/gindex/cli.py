"""``gindex`` command-line front end.

Exit codes: 0 success, 1 I/O error or unreadable index file, 2 bad input
(empty text, out-of-range request, text/index mismatch, empty workload).
"""
from __future__ import annotations

import argparse
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .grammar import GrammarWarning, read_grammar, write_grammar, repair_compress
from .index_build import IndexOptions, build_index
from .oracle import fuzz_roundtrip
from .serialize import IndexFormatError, load, save


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", 1) from e


def _load(path):
    try:
        return load(path)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", 1) from e
    except IndexFormatError as e:
        raise CliError(f"{path}: {e}", 1) from e


def _say(*parts):
    print(*parts, file=sys.stderr)


# -- commands -------------------------------------------------------------------

def cmd_build(a) -> int:
    if a.input is None and a.grammar_in is None:
        raise CliError("need an input text or --grammar-in", 2)
    text = _read(a.input) if a.input is not None else None
    if text is not None and not text:
        raise CliError(f"{a.input} is empty; nothing to index", 2)
    rate = None if a.no_patricia else a.sample_rate
    opts = IndexOptions(sample_rate=rate, with_trie=a.with_trie)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GrammarWarning)
        if a.grammar_in is not None:
            try:
                gr = read_grammar(_read(a.grammar_in).decode("ascii"))
            except (ValueError, UnicodeDecodeError) as e:
                raise CliError(f"{a.grammar_in}: {e}", 2) from e
        else:
            gr = repair_compress(text)
        try:
            ix = build_index(text, grammar=gr, options=opts)
        except ValueError as e:
            raise CliError(str(e), 2) from e
    for w in caught:
        _say(f"warning: {w.message}")
    if text is not None and ix.n != len(text):
        raise CliError(f"grammar generates {ix.n} bytes but {a.input} has {len(text)}", 2)
    if a.grammar_out is not None:
        try:
            Path(a.grammar_out).write_text(write_grammar(gr))
        except OSError as e:
            raise CliError(f"cannot write {a.grammar_out}: {e.strerror or e}", 1) from e
    try:
        nbytes = save(ix, a.output)
    except OSError as e:
        raise CliError(f"cannot write {a.output}: {e.strerror or e}", 1) from e
    print(f"n={ix.n} sigma={ix.sigma} g={ix.g} G_repair={ix.info['G_raw']} "
          f"G_proc={ix.info['G_proc']} G_tree={ix.G_tree} h={ix.height}")
    print(f"file={nbytes} bytes ({nbytes / ix.n:.4f} of the text) bps={ix.bps():.4f}")
    return 0


def _pattern(a) -> bytes:
    if a.pattern is not None:
        p = a.pattern.encode("utf-8", "surrogateescape")
    elif a.pattern_hex is not None:
        try:
            p = bytes.fromhex(a.pattern_hex)
        except ValueError as e:
            raise CliError(f"bad hex pattern: {e}", 2) from e
    else:
        p = _read(a.pattern_file)
    if not p:
        raise CliError("empty pattern", 2)
    return p


def cmd_locate(a) -> int:
    ix = _load(a.index)
    occ = ix.locate(_pattern(a))
    if a.count:
        print(len(occ))
    else:
        sys.stdout.write("".join(f"{p}\n" for p in occ))
    return 0


def cmd_extract(a) -> int:
    ix = _load(a.index)
    if a.start < 0 or a.length < 0 or a.start + a.length > ix.n:
        raise CliError(f"range [{a.start}, {a.start + a.length}) outside the text of length {ix.n}", 2)
    out = sys.stdout.buffer
    out.write(ix.extract(a.start, a.length))
    out.flush()
    return 0


def cmd_verify(a) -> int:
    text = _read(a.text)
    ix = _load(a.index)
    if len(text) != ix.n:
        raise CliError(f"text has {len(text)} bytes but the index was built for {ix.n}", 2)
    if a.patterns < 0 or a.plen < 1:
        raise CliError("--patterns must be >= 0 and --plen >= 1", 2)
    rep = fuzz_roundtrip(text, n_patterns=a.patterns, plen_range=(a.plen, a.plen),
                         seed=a.seed, index=ix)
    body = rep.text(only_failures=not a.verbose)
    if body:
        print(body)
    print(f"{'PASS' if rep.ok else 'FAIL'} verify checks={rep.checks} failures={rep.failures}")
    return 0 if rep.ok else 3


def cmd_stats(a) -> int:
    ix = _load(a.index)
    rep = ix.size_report()
    print(f"n={ix.n} sigma={ix.sigma} g={ix.g} G_tree={ix.G_tree} h={ix.height} "
          f"G_repair={ix.info.get('G_raw')} G_proc={ix.info.get('G_proc')}")
    width = max(len(k) for k in rep)
    for k, v in rep.items():
        print(f"{k:<{width}} {v:>12} bits  {v / ix.n:.4f} bps")
    total = sum(rep.values())
    print(f"{'total':<{width}} {total:>12} bits  {total / ix.n:.4f} bps")
    print(f"file {Path(a.index).stat().st_size} bytes")
    return 0


def cmd_bench(a) -> int:
    ix = _load(a.index)
    if a.queries <= 0:
        raise CliError("bench needs at least one query", 2)
    if a.plen < 1 or a.plen > ix.n:
        raise CliError(f"--plen must be within 1..{ix.n}", 2)
    rng = np.random.default_rng(a.seed)
    # patterns are cut from the indexed text itself
    starts = rng.integers(0, ix.n - a.plen + 1, a.queries)
    pats = [ix.extract(int(p), a.plen) for p in starts]
    workers = max(1, a.threads)

    def run(fn, items):
        t0 = time.perf_counter()
        if workers == 1:
            res = [fn(x) for x in items]
        else:
            with ThreadPoolExecutor(workers) as ex:
                res = list(ex.map(fn, items))
        return time.perf_counter() - t0, res

    el, res = run(ix.locate, pats)
    occ = sum(len(r) for r in res)
    print(f"locate: {a.queries} patterns of length {a.plen}, {occ} occurrences, "
          f"{el:.3f} s, {1e6 * el / max(occ, 1):.3f} us/occurrence")
    elen = min(a.extract_len, ix.n)
    spans = [int(p) for p in rng.integers(0, ix.n - elen + 1, a.queries)]
    el, _ = run(lambda p: ix.extract(p, elen), spans)
    print(f"extract: {a.queries} substrings of length {elen}, {el:.3f} s, "
          f"{1e6 * el / max(a.queries * elen, 1):.3f} us/symbol")
    return 0


# -- parser ---------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gindex", description="Grammar-compressed self-index.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="compress a text and write an index file")
    b.add_argument("input", nargs="?", help="text file (optional with --grammar-in)")
    b.add_argument("-o", "--output", required=True, help="index file to write")
    pat = b.add_mutually_exclusive_group()
    pat.add_argument("--sample-rate", type=int, metavar="K",
                     help="sample every K-th row/column into Patricia trees")
    pat.add_argument("--no-patricia", action="store_true",
                     help="plain binary search over rows and columns (the default)")
    b.add_argument("--with-trie", action="store_true", help="add leftmost/rightmost path tries")
    b.add_argument("--grammar-out", metavar="PATH", help="also write the RePair grammar")
    b.add_argument("--grammar-in", metavar="PATH", help="index this grammar instead of running RePair")
    b.set_defaults(func=cmd_build)

    lo = sub.add_parser("locate", help="print positions of a pattern")
    lo.add_argument("index")
    src = lo.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern", help="pattern as UTF-8 text")
    src.add_argument("--pattern-hex", help="pattern as hex bytes")
    src.add_argument("--pattern-file", help="read the pattern from a file")
    lo.add_argument("--count", action="store_true", help="print only the number of occurrences")
    lo.set_defaults(func=cmd_locate)

    ex = sub.add_parser("extract", help="write T[from : from + len] to stdout")
    ex.add_argument("index")
    ex.add_argument("--from", dest="start", type=int, required=True)
    ex.add_argument("--len", dest="length", type=int, required=True)
    ex.set_defaults(func=cmd_extract)

    ve = sub.add_parser("verify", help="check an index against its text with random queries")
    ve.add_argument("text")
    ve.add_argument("index")
    ve.add_argument("--patterns", type=int, default=1000)
    ve.add_argument("--plen", type=int, default=10)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("-v", "--verbose", action="store_true", help="print passing checks too")
    ve.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="space used by each structure")
    st.add_argument("index")
    st.set_defaults(func=cmd_stats)

    be = sub.add_parser("bench", help="time locate and extract")
    be.add_argument("index")
    be.add_argument("--queries", type=int, default=100)
    be.add_argument("--plen", type=int, default=10)
    be.add_argument("--extract-len", type=int, default=100)
    be.add_argument("--threads", type=int, default=1)
    be.add_argument("--seed", type=int, default=0)
    be.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "sample_rate", None) is not None and args.sample_rate < 1:
        _say("gindex: error: --sample-rate must be >= 1")
        return 2
    try:
        return args.func(args)
    except CliError as e:
        _say(f"gindex: error: {e}")
        return e.code


if __name__ == "__main__":
    sys.exit(main())
