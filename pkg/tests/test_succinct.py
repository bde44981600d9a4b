import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gindex.succinct import BitVec, LabelSeq, ParenTree, PermInv, RangeGrid, SparseBitVec

from helpers import PtrTree, random_tree_bits


# -- bitvectors -------------------------------------------------------------------

def check_bitvec(bv, bits):
    ones = [i for i, b in enumerate(bits) if b]
    zeros = [i for i, b in enumerate(bits) if not b]
    r = 0
    for i in range(len(bits) + 1):
        assert bv.rank1(i) == r
        assert bv.rank0(i) == i - r
        if i < len(bits):
            assert bv.access(i) == bits[i]
            r += bits[i]
    for k, p in enumerate(ones, 1):
        assert bv.select1(k) == p
    for k, p in enumerate(zeros, 1):
        assert bv.select0(k) == p


def test_bitvec_examples():
    b = BitVec("10110")
    assert b.rank1(3) == 2
    assert b.rank1(0) == 0
    assert b.select1(2) == 2
    assert b.select1(3) == 3


@pytest.mark.parametrize("cls", [BitVec, SparseBitVec.from_bits])
def test_bitvectors_exhaustive_short(cls):
    for n in range(0, 11):
        for bits in itertools.product((0, 1), repeat=n):
            check_bitvec(cls(list(bits)), bits)


@pytest.mark.parametrize("density", [0.001, 0.05, 0.5, 0.97])
@pytest.mark.parametrize("cls", [BitVec, SparseBitVec.from_bits])
def test_bitvectors_random(cls, density):
    rng = np.random.default_rng(7)
    bits = (rng.random(5000) < density).astype(int).tolist()
    check_bitvec(cls(bits), bits)


def test_bitvec_large_against_cumsum():
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, 100_000)
    bv = BitVec(bits)
    pref = np.concatenate([[0], np.cumsum(bits)])
    for i in rng.integers(0, len(bits) + 1, 3000):
        assert bv.rank1(int(i)) == pref[i]
    ones = np.flatnonzero(bits)
    for k in rng.integers(1, len(ones) + 1, 3000):
        assert bv.select1(int(k)) == ones[k - 1]


def test_sparse_space_grows_with_ones_not_universe():
    small = SparseBitVec([5, 1000, 70_000], 1_000_000)
    dense = BitVec(np.zeros(1_000_000, dtype=np.uint8))
    assert small.size_bits() < dense.size_bits() / 50


@pytest.mark.parametrize("bad", [-1, 6])
def test_bitvec_rank_out_of_range(bad):
    with pytest.raises(IndexError):
        BitVec("10110").rank1(bad)


def test_bitvec_select_out_of_range():
    b = BitVec("10110")
    with pytest.raises(IndexError):
        b.select1(4)
    with pytest.raises(IndexError):
        b.select1(0)
    with pytest.raises(IndexError):
        SparseBitVec([1, 3], 5).select1(3)


@given(st.lists(st.booleans(), max_size=1500))
def test_sparse_matches_plain(bits):
    bits = [int(b) for b in bits]
    a, b = BitVec(bits), SparseBitVec.from_bits(bits)
    for i in range(len(bits) + 1):
        assert a.rank1(i) == b.rank1(i)
    for k in range(1, a.ones + 1):
        assert a.select1(k) == b.select1(k)
        assert a.rank1(a.select1(k) + 1) == k


# -- parentheses trees ------------------------------------------------------------

def all_trees(nodes):
    """Every ordinal tree with ``nodes`` nodes, as parenthesis bits."""
    if nodes == 1:
        yield [1, 0]
        return
    # the root's children form a forest of nodes - 1 nodes
    for forest in all_forests(nodes - 1):
        yield [1] + forest + [0]


def all_forests(n):
    if n == 0:
        yield []
        return
    for first in range(1, n + 1):
        for t in all_trees(first):
            for rest in all_forests(n - first):
                yield t + rest


def check_tree(bits):
    t = ParenTree(bits)
    o = PtrTree(bits)
    assert len(t) == len(o.opens)
    leaves, internals = o.leaves(), o.internals()
    assert t.n_leaves == len(leaves)
    assert t.n_internal == len(internals)
    for v in o.opens:
        p = o.pre[v]
        assert t.node(p) == v
        assert t.preorder(v) == p
        assert t.is_leaf(v) == o.is_leaf(v)
        assert t.leafrank(v) == o.leafrank(v)
        assert t.intrank(v) == o.intrank(v)
        assert t.numleaves(v) == o.numleaves(v)
        assert t.findclose(v) == o.close[v]
        assert t.depth(v) == o.depth(v)
        kids = o.children[v]
        assert t.degree(v) == len(kids)
        for k, c in enumerate(kids, 1):
            assert t.child(v, k) == c
        if v in o.parent:
            par = o.parent[v]
            assert t.parent(v) == par
            sib = o.children[par]
            i = sib.index(v)
            assert t.nextsibling(v) == (sib[i + 1] if i + 1 < len(sib) else -1)
            assert t.prevsibling(v) == (sib[i - 1] if i > 0 else -1)
        u = v
        for d in range(o.depth(v) + 1):
            assert t.level_ancestor(v, d) == u
            u = o.parent.get(u)
    for j, v in enumerate(leaves, 1):
        assert t.leafselect(j) == v
    for j, v in enumerate(internals, 1):
        assert t.intselect(j) == v


def test_tree_examples():
    t = ParenTree("((()())())")
    assert t.leafrank(t.node(5)) == 2
    assert t.parent(t.node(3)) == t.node(2)
    assert t.parens() == "((()())())"


def test_trees_exhaustive_small():
    count = 0
    for nodes in range(1, 9):
        for bits in all_trees(nodes):
            check_tree(bits)
            count += 1
    assert count == sum([1, 1, 2, 5, 14, 42, 132, 429])


@pytest.mark.parametrize("nodes,seed", [(50, 0), (500, 1), (1000, 2), (1000, 3)])
def test_trees_random(nodes, seed):
    check_tree(random_tree_bits(random.Random(seed), nodes))


def test_tree_deep_path():
    # a path stresses excess searches across many min-max blocks
    n = 3000
    check_tree([1] * n + [0] * n)


def test_level_ancestor_large_random():
    rng = random.Random(11)
    bits = random_tree_bits(rng, 100_000)
    t, o = ParenTree(bits), PtrTree(bits)
    for _ in range(2000):
        v = rng.choice(o.opens[1:])
        d = o.depth(v)
        a = t.level_ancestor(v, d - 1)
        assert o.parent.get(a) == o.opens[0]
        u = v
        while o.parent[u] != o.opens[0]:
            u = o.parent[u]
        assert a == u


@given(st.integers(1, 300), st.integers(0, 10**6))
def test_tree_structural_properties(nodes, seed):
    bits = random_tree_bits(random.Random(seed), nodes)
    t = ParenTree(bits)
    total_degree = 0
    for p in range(1, nodes + 1):
        v = t.node(p)
        total_degree += t.degree(v)
        if p > 1:
            assert t.preorder(t.parent(v)) < p
        if t.is_leaf(v):
            assert t.leafselect(t.leafrank(v) + 1) == v
        else:
            assert t.intselect(t.intrank(v) + 1) == v
    assert total_degree == nodes - 1


@pytest.mark.parametrize("bad", ["(()", "())(", "()()", ""])
def test_tree_rejects_unbalanced(bad):
    with pytest.raises(ValueError):
        ParenTree(bad)


def test_tree_invalid_arguments():
    t = ParenTree("((()())())")
    with pytest.raises(ValueError):
        t.parent(0)
    with pytest.raises(ValueError):
        t.preorder(3)           # a closing parenthesis
    with pytest.raises(ValueError):
        t.child(0, 3)
    with pytest.raises(ValueError):
        t.level_ancestor(t.node(3), 3)


# -- sequences ---------------------------------------------------------------------

def check_seq(vals):
    s = LabelSeq(vals)
    assert len(s) == len(vals)
    for i, a in enumerate(vals):
        assert s[i] == a
    for a in set(vals) | {max(vals, default=0) + 1}:
        pos = [i for i, x in enumerate(vals) if x == a]
        assert s.count(a) == len(pos)
        for j, p in enumerate(pos, 1):
            assert s.select(a, j) == p
            assert s.rank(a, p) == j - 1
        c = 0
        for i in range(len(vals) + 1):
            assert s.rank(a, i) == c
            if i < len(vals) and vals[i] == a:
                c += 1


def test_seq_examples():
    s = LabelSeq([3, 1, 3, 2])
    assert s.select(3, 2) == 2
    assert s.rank(3, 3) == 2


def test_seq_exhaustive_small():
    for n in range(0, 6):
        for vals in itertools.product(range(1, 4), repeat=n):
            check_seq(list(vals))


@pytest.mark.parametrize("sigma", [1, 2, 64, 5000])
def test_seq_random(sigma):
    rng = random.Random(sigma)
    check_seq([rng.randint(1, sigma) for _ in range(1000)])


def test_seq_large_random():
    rng = np.random.default_rng(5)
    vals = rng.integers(1, 65, 100_000)
    s = LabelSeq(vals)
    for a in range(1, 65, 7):
        pos = np.flatnonzero(vals == a)
        for j in rng.integers(1, len(pos) + 1, 100):
            assert s.select(a, int(j)) == pos[j - 1]
        for i in rng.integers(0, len(vals) + 1, 100):
            assert s.rank(a, int(i)) == int(np.count_nonzero(vals[:i] == a))


def test_seq_errors():
    s = LabelSeq([3, 1, 3, 2])
    with pytest.raises(IndexError):
        s.select(3, 3)
    with pytest.raises(IndexError):
        s[4]
    with pytest.raises(ValueError):
        LabelSeq([1, -2])


# -- permutations -------------------------------------------------------------------

@pytest.mark.parametrize("t", [1, 4, 32])
@pytest.mark.parametrize("m", [1, 2, 10, 1000])
def test_perm_inverse_identity(m, t):
    rng = random.Random(m * 100 + t)
    perm = list(range(1, m + 1))
    rng.shuffle(perm)
    p = PermInv(perm, t)
    for i in range(1, m + 1):
        assert p.apply(i) == perm[i - 1]
        assert p.inverse(p.apply(i)) == i
        assert p.inverse_steps(i) <= t


def test_perm_exhaustive_small():
    for m in range(1, 7):
        for perm in itertools.permutations(range(1, m + 1)):
            for t in (1, 2, 3):
                p = PermInv(perm, t)
                inv = {v: i for i, v in enumerate(perm, 1)}
                for j in range(1, m + 1):
                    assert p.inverse(j) == inv[j]
                    assert p.inverse_steps(j) <= t


def test_perm_large_random():
    rng = np.random.default_rng(3)
    perm = rng.permutation(100_000) + 1
    p = PermInv(perm, 32)
    inv = np.empty_like(perm)
    inv[perm - 1] = np.arange(1, len(perm) + 1)
    for j in rng.integers(1, len(perm) + 1, 5000):
        assert p.inverse(int(j)) == inv[j - 1]


@given(st.permutations(list(range(1, 60))), st.integers(1, 40))
def test_perm_property(perm, t):
    p = PermInv(perm, t)
    assert all(p.inverse(p.apply(i)) == i for i in range(1, len(perm) + 1))


# -- grid ---------------------------------------------------------------------------

def grid_scan(rows, labels, r1, r2, c1, c2):
    return [(c, rows[c - 1], labels[c - 1]) for c in range(c1, c2 + 1)
            if r1 <= rows[c - 1] <= r2]


def test_grid_examples():
    g = RangeGrid([3, 1], [5, 4])
    assert g.report(2, 3, 1, 1) == [(1, 3, 5)]
    assert g.report(4, 9, 1, 2) == []
    assert g.report(1, 3, 1, 2) == [(1, 3, 5), (2, 1, 4)]


def test_grid_exhaustive_queries():
    rng = random.Random(2)
    for n in (1, 2, 7, 40):
        rows = [rng.randint(1, 9) for _ in range(n)]
        labels = [rng.randint(2, 500) for _ in range(n)]
        g = RangeGrid(rows, labels)
        for r1 in range(1, 11):
            for r2 in range(r1 - 1, 11):
                for c1 in range(1, n + 1):
                    for c2 in range(c1 - 1, n + 1):
                        assert g.report(r1, r2, c1, c2) == grid_scan(rows, labels, r1, r2, c1, c2)


def test_grid_random_large():
    rng = random.Random(9)
    n = 1000
    rows = [rng.randint(1, 300) for _ in range(n)]
    labels = list(range(2, n + 2))
    g = RangeGrid(rows, labels)
    for _ in range(500):
        r1 = rng.randint(1, 300)
        r2 = rng.randint(r1, 300)
        c1 = rng.randint(1, n)
        c2 = rng.randint(c1, n)
        assert g.report(r1, r2, c1, c2) == grid_scan(rows, labels, r1, r2, c1, c2)


def test_grid_bounds():
    g = RangeGrid([3, 1], [5, 4])
    with pytest.raises(ValueError):
        g.report(1, 3, 1, 3)
    with pytest.raises(ValueError):
        g.report(0, 3, 1, 2)
    with pytest.raises(ValueError):
        RangeGrid([1, 2], [5])
