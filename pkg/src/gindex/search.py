"""Pattern search: primary occurrences through the grid, secondary ones by
climbing the grammar tree."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .extract import new_counter

__all__ = ["LocateStats", "locate", "count", "row_range", "col_range",
           "primary_occurrences", "track_secondary", "build_patricia",
           "PatriciaIndex", "SampledPatricia"]


@dataclass
class LocateStats:
    """Instrumentation filled in by :func:`locate` when passed in."""

    splits: int = 0
    seeds: int = 0
    climb_steps: int = 0
    visits: int = 0
    occurrences: int = 0
    duplicates: int = 0
    max_primary_multiplicity: int = 0


def _as_pattern(pattern) -> bytes:
    if isinstance(pattern, str):
        pattern = pattern.encode()
    pattern = bytes(pattern)
    if not pattern:
        raise ValueError("empty pattern")
    return pattern


def _trie(ix) -> bool:
    return ix.options.with_trie and ix.has_trie


def _searchable(ix, pattern) -> bool:
    return len(pattern) <= ix.n and all(ix.symbol_of_byte(c) for c in set(pattern))


def row_range(ix, p1, counter=None) -> tuple[int, int]:
    """Rows X (1-based, inclusive) whose expansion ends with ``p1``.

    An empty range comes back as (a, a - 1).
    """
    p1 = _as_pattern(p1)
    ctr = new_counter() if counter is None else counter
    q = bytearray(p1[::-1])
    if ix.patricia is not None:
        return ix.patricia.row_range(ix, q, ctr)
    c = ix.core
    a1 = c.row_bound(q, 1, ix.g + 1, False, _trie(ix), ctr)
    a2 = c.row_bound(q, a1, ix.g + 1, True, _trie(ix), ctr)
    return a1, a2 - 1


def col_range(ix, p2, counter=None) -> tuple[int, int]:
    """Columns (1-based, inclusive) whose rule suffix expands to a string
    starting with ``p2``. An empty range comes back as (b, b - 1)."""
    p2 = _as_pattern(p2)
    ctr = new_counter() if counter is None else counter
    q = bytearray(p2)
    if ix.patricia is not None:
        return ix.patricia.col_range(ix, q, ctr)
    c = ix.core
    b1 = c.col_bound(q, 1, c.ncols + 1, False, _trie(ix), ctr)
    b2 = c.col_bound(q, b1, c.ncols + 1, True, _trie(ix), ctr)
    return b1, b2 - 1


def primary_occurrences(ix, pattern, counter=None) -> list[tuple[int, int]]:
    """(tree node, offset) for every occurrence that crosses a leaf boundary,
    over all m - 1 splits of the pattern."""
    pattern = _as_pattern(pattern)
    if len(pattern) < 2:
        raise ValueError("primary occurrences need a pattern of length >= 2")
    ctr = new_counter() if counter is None else counter
    if not _searchable(ix, pattern):
        return []
    flat = _primary_flat(ix, pattern, ctr)
    return list(zip(flat[0::2], flat[1::2]))


def _primary_flat(ix, pattern, ctr):
    c = ix.core
    if ix.patricia is None:
        return c.primary_seeds(bytearray(pattern), _trie(ix), ctr)
    out = []
    for i in range(1, len(pattern)):
        a1, a2 = row_range(ix, pattern[:i], ctr)
        if a1 > a2:
            continue
        b1, b2 = col_range(ix, pattern[i:], ctr)
        if b1 > b2:
            continue
        c.grid_seeds(a1, a2, b1, b2, i, out)
    return out


def track_secondary(ix, seeds, counter=None) -> list[int]:
    """Text positions of the occurrences represented by ``seeds``.

    Each seed (node, offset) is an occurrence starting ``offset`` bytes after
    the start of ``node``. Climbing to the root translates the offset; every
    ancestor's label copies the occurrence to the other leaves with that label.
    """
    ctr = new_counter() if counter is None else counter
    flat = []
    for v, off in seeds:
        flat.append(int(v))
        flat.append(int(off))
    return sorted(ix.core.track(flat, ctr))


def locate(ix, pattern, stats: LocateStats | None = None) -> list[int]:
    """Sorted 0-based positions of all occurrences of ``pattern``."""
    pattern = _as_pattern(pattern)
    if not _searchable(ix, pattern):
        return []
    ctr = new_counter()
    c = ix.core
    m = len(pattern)
    if m == 1:
        seeds = c.terminal_seeds(ix.symbol_of_byte(pattern[0]))
    else:
        seeds = _primary_flat(ix, pattern, ctr)
    pos = c.track(seeds, ctr)
    if stats is not None:
        stats.splits = m - 1
        stats.seeds = len(seeds) // 2
        stats.climb_steps = int(ctr[1])
        stats.visits = int(ctr[0])
        stats.occurrences = len(pos)
        stats.duplicates = len(pos) - len(set(pos))
        if m >= 2 and seeds:
            # an occurrence is identified by the node where it first spans a
            # leaf boundary and its offset there
            keys = Counter()
            for k in range(0, len(seeds), 2):
                v, off = seeds[k], seeds[k + 1]
                u = c.tree.parent(v)
                keys[(u, off + c.node_start(v) - c.node_start(u))] += 1
            stats.max_primary_multiplicity = max(keys.values())
    pos.sort()
    return pos


def count(ix, pattern) -> int:
    return len(locate(ix, pattern))


# -- sampled Patricia trees ---------------------------------------------------------

_END = -1   # the string ends here
_CUT = 256  # the string goes on past the stored depth


class _Node:
    __slots__ = ("depth", "lo", "hi", "keys", "kids")

    def __init__(self, depth, lo, hi):
        self.depth = depth
        self.lo = lo
        self.hi = hi
        self.keys = []
        self.kids = []


def _ext(s: bytes, closed: bool, d: int) -> int:
    if d < len(s):
        return s[d]
    return _END if closed else _CUT


class SampledPatricia:
    """Path-compressed trie over every k-th string of a sorted list.

    Only branching depths and sample ranges are kept; the strings themselves
    are read back from the index to verify each search.
    """

    def __init__(self, strings: list[bytes], closed: list[bool], k: int, total: int,
                 depth: int):
        self.k = k
        self.total = total
        self.depth = depth
        self.nsamples = len(strings)
        self.nnodes = 0
        self.root = self._build(strings, closed, 0, len(strings), 0) if strings else None

    def sample_item(self, s: int) -> int:
        """1-based item (row or column) of sample ``s``."""
        return 1 + s * self.k

    def _build(self, strs, closed, lo, hi, d):
        self.nnodes += 1
        a, b = strs[lo], strs[hi - 1]
        while True:
            ca, cb = _ext(a, closed[lo], d), _ext(b, closed[hi - 1], d)
            if ca != cb:
                break
            if ca in (_END, _CUT):
                node = _Node(1 << 30, lo, hi)  # identical stored strings
                return node
            d += 1
        node = _Node(d, lo, hi)
        i = lo
        while i < hi:
            key = _ext(strs[i], closed[i], d)
            j = i + 1
            while j < hi and _ext(strs[j], closed[j], d) == key:
                j += 1
            node.keys.append(key)
            node.kids.append(self._build(strs, closed, i, j, d))
            i = j
        return node

    def size_bits(self) -> int:
        # per node: branching depth, sample range, one child pointer
        w = max(1, self.total.bit_length())
        return self.nnodes * (3 * w + 8)

    @staticmethod
    def _child(node, key):
        for kk, kid in zip(node.keys, node.kids):
            if kk == key:
                return kid
        return None

    def _qkey(self, q, d):
        return q[d] if d < self.depth else _CUT

    def sample_bounds(self, q: bytes, fetch, cmp_sample):
        """(lb, ub): samples strictly below ``q`` and samples not above it,
        under truncated comparison."""
        m = len(q)
        node = self.root
        # blind descent
        while node.kids:
            d = node.depth
            kid = self._child(node, self._qkey(q, d)) if d < m else None
            node = kid if kid is not None else node.kids[0]
        r = fetch(node.lo, m)
        ell = 0
        while ell < len(r) and ell < m and r[ell] == q[ell]:
            ell += 1
        if ell == m and m <= self.depth:
            node = self.root
            while node.kids and node.depth < m:
                node = self._child(node, q[node.depth])
            return node.lo, node.hi
        if ell >= self.depth:
            # q agrees with the stored prefix; settle the rest by comparison
            node = self.root
            while node.kids and node.depth < self.depth:
                node = self._child(node, q[node.depth])
            lb = _first(node.lo, node.hi, lambda s: cmp_sample(s) >= 0)
            ub = _first(lb, node.hi, lambda s: cmp_sample(s) > 0)
            return lb, ub
        c = q[ell]
        node = self.root
        while node.kids and node.depth < ell:
            node = self._child(node, q[node.depth])
        if node.kids and node.depth == ell:
            for kk, kid in zip(node.keys, node.kids):
                if kk > c:
                    return kid.lo, kid.lo
            return node.hi, node.hi
        x = r[ell] if ell < len(r) else _END
        return (node.hi, node.hi) if x < c else (node.lo, node.lo)


def _first(lo, hi, pred):
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


class PatriciaIndex:
    """Sampled Patricia trees over reversed row expansions and column expansions."""

    def __init__(self, ix, k: int, depth: int):
        if k < 1:
            raise ValueError("sample rate must be >= 1")
        self.k = k
        self.depth = depth
        c = ix.core
        ctr = new_counter()
        rows, rclosed = [], []
        for x in range(1, ix.g + 1, k):
            rows.append(c.expand_suffix(x, depth, False, ctr)[::-1])
            rclosed.append(c.sym_len(x) <= depth)
        cols, cclosed = [], []
        for col in range(1, c.ncols + 1, k):
            lab = c.labels.get(col - 1)
            cols.append(c.column_prefix(lab, depth, False, ctr))
            v = c.tree.node(lab)
            cclosed.append(c.node_end(c.tree.parent(v)) - c.node_start(v) <= depth)
        self.rows = SampledPatricia(rows, rclosed, k, ix.g, depth)
        self.cols = SampledPatricia(cols, cclosed, k, c.ncols, depth)

    def size_bits(self) -> int:
        return self.rows.size_bits() + self.cols.size_bits()

    def row_range(self, ix, q: bytearray, ctr):
        c = ix.core
        trie = _trie(ix)
        pt = self.rows
        if pt.root is None:
            return 1, 0

        def fetch(s, m):
            return c.expand_suffix(pt.sample_item(s), m, trie, ctr)[::-1]

        def cmp_sample(s):
            return c.cmp_row(pt.sample_item(s), q, trie, ctr)

        lb, ub = pt.sample_bounds(bytes(q), fetch, cmp_sample)
        return self._finish(pt, lb, ub, ix.g,
                            lambda lo, hi, strict: c.row_bound(q, lo, hi, strict, trie, ctr))

    def col_range(self, ix, q: bytearray, ctr):
        c = ix.core
        trie = _trie(ix)
        pt = self.cols
        if pt.root is None:
            return 1, 0

        def fetch(s, m):
            return c.column_prefix(c.labels.get(pt.sample_item(s) - 1), m, trie, ctr)

        def cmp_sample(s):
            return c.cmp_col(pt.sample_item(s), q, trie, ctr)

        lb, ub = pt.sample_bounds(bytes(q), fetch, cmp_sample)
        return self._finish(pt, lb, ub, c.ncols,
                            lambda lo, hi, strict: c.col_bound(q, lo, hi, strict, trie, ctr))

    @staticmethod
    def _finish(pt, lb, ub, total, bound):
        def gap(s):
            lo = pt.sample_item(s - 1) + 1 if s > 0 else 1
            hi = pt.sample_item(s) if s < pt.nsamples else total + 1
            return lo, hi

        lo, hi = gap(lb)
        a1 = bound(lo, hi, False)
        lo, hi = gap(ub)
        a2 = bound(max(lo, a1), hi, True)
        return a1, a2 - 1


def build_patricia(ix, k: int, depth: int = 128) -> PatriciaIndex:
    return PatriciaIndex(ix, k, depth)
