"""Brute-force oracles shared by the tests. Nothing here calls the index."""
from __future__ import annotations

import random


class PtrTree:
    """Pointer-based ordinal tree parsed from a 0/1 parenthesis list."""

    def __init__(self, bits):
        self.bits = list(bits)
        self.opens = []           # node ids (open positions) in preorder
        self.parent = {}
        self.children = {}
        self.close = {}
        stack = []
        for i, b in enumerate(self.bits):
            if b:
                if stack:
                    self.parent[i] = stack[-1]
                    self.children[stack[-1]].append(i)
                self.children[i] = []
                self.opens.append(i)
                stack.append(i)
            else:
                self.close[stack.pop()] = i
        self.pre = {v: k + 1 for k, v in enumerate(self.opens)}

    def is_leaf(self, v):
        return not self.children[v]

    def depth(self, v):
        d = 0
        while v in self.parent:
            v = self.parent[v]
            d += 1
        return d

    def leafrank(self, v):
        return sum(1 for u in self.opens if self.pre[u] < self.pre[v] and self.is_leaf(u))

    def intrank(self, v):
        return sum(1 for u in self.opens if self.pre[u] < self.pre[v] and not self.is_leaf(u))

    def leaves(self):
        return [v for v in self.opens if self.is_leaf(v)]

    def internals(self):
        return [v for v in self.opens if not self.is_leaf(v)]

    def numleaves(self, v):
        return sum(1 for u in self.opens
                   if v <= u <= self.close[v] and self.is_leaf(u))


def random_tree_bits(rng: random.Random, nodes: int):
    """Random ordinal tree with ``nodes`` nodes, as parenthesis bits."""
    kids = {0: []}
    for v in range(1, nodes):
        kids[v] = []
        kids[rng.randrange(v)].append(v)
    out = []

    def emit(v):
        out.append(1)
        for c in kids[v]:
            emit(c)
        out.append(0)

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * nodes + 100))
    try:
        emit(0)
    finally:
        sys.setrecursionlimit(old)
    return out


def expand_all(pg) -> list[bytes]:
    """F(X_i) for every symbol, by direct recursive unrolling with memoization."""
    memo = {}

    def f(x):
        if x in memo:
            return memo[x]
        c = pg.chars[x - 1]
        r = bytes([c]) if c >= 0 else b"".join(f(s) for s in pg.rules[x - 1])
        memo[x] = r
        return r

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * pg.g + 100))
    try:
        return [f(x) for x in range(1, pg.g + 1)]
    finally:
        sys.setrecursionlimit(old)


def grammar_tree_oracle(pg):
    """Unroll the pruned parse tree; return per-node (preorder, label, start, is_leaf)
    in preorder, plus the grid points (row, label, suffix expansion)."""
    exp = expand_all(pg)
    nodes = []
    points = []
    defined = set()

    def visit(x, start):
        pre = len(nodes) + 1
        leaf = pg.chars[x - 1] >= 0 or x in defined
        nodes.append((pre, x, start, leaf))
        if leaf:
            return
        defined.add(x)
        rhs = pg.rules[x - 1]
        pos = start
        for j, s in enumerate(rhs):
            if j >= 1:
                suffix = b"".join(exp[t - 1] for t in rhs[j:])
                points.append((rhs[j - 1], len(nodes) + 1, suffix))
            visit(s, pos)
            pos += len(exp[s - 1])

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * pg.g + 100))
    try:
        visit(pg.start, 0)
    finally:
        sys.setrecursionlimit(old)
    return nodes, points


def naive_scan(text: bytes, pat: bytes) -> list[int]:
    """Window-by-window comparison; independent of bytes.find."""
    m = len(pat)
    return [i for i in range(len(text) - m + 1) if text[i:i + m] == pat]
