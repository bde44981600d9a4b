"""Succinct building blocks with argument checking.

Thin wrappers around the kernel classes. The index itself talks to the
kernels directly; these wrappers are the public, validated surface.
Positions are 0-based, ranks and preorders 1-based.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ._backend import K

__all__ = ["BitVec", "SparseBitVec", "ParenTree", "LabelSeq", "PermInv", "RangeGrid"]


def _bits_array(bits) -> np.ndarray:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError("bit string must contain only 0 and 1")
        return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(list(bits) if not hasattr(bits, "__len__") else bits).astype(np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


class _RankSelect:
    n: int
    ones: int

    def _check_rank(self, i):
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside 0..{self.n}")

    def _check_select(self, k, total):
        if not 1 <= k <= total:
            raise IndexError(f"select rank {k} outside 1..{total}")

    def __len__(self):
        return self.n


class BitVec(_RankSelect):
    """Plain bitvector with rank/select directories."""

    def __init__(self, bits):
        arr = _bits_array(bits)
        self.n = len(arr)
        self._b = K.Bits(K.pack_bits(arr), self.n)
        self.ones = self._b.ones

    @classmethod
    def _wrap(cls, kbits):
        obj = cls.__new__(cls)
        obj._b = kbits
        obj.n = kbits.n
        obj.ones = kbits.ones
        return obj

    def access(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside 0..{self.n - 1}")
        return self._b.access(i)

    __getitem__ = access

    def rank1(self, i: int) -> int:
        self._check_rank(i)
        return self._b.rank1(i)

    def rank0(self, i: int) -> int:
        self._check_rank(i)
        return self._b.rank0(i)

    def select1(self, k: int) -> int:
        self._check_select(k, self.ones)
        return self._b.select1(k)

    def select0(self, k: int) -> int:
        self._check_select(k, self.n - self.ones)
        return self._b.select0(k)

    def size_bits(self) -> int:
        return self._b.size_bits()


class SparseBitVec(_RankSelect):
    """Elias-Fano bitvector given by its set positions."""

    def __init__(self, ones: Iterable[int], universe: int):
        pos = np.asarray(list(ones) if not hasattr(ones, "__len__") else ones, dtype=np.int64)
        if universe < 0:
            raise ValueError("universe must be non-negative")
        self._e = K.EliasFano(pos, universe)
        self.n = int(universe)
        self.ones = len(pos)

    @classmethod
    def from_bits(cls, bits) -> "SparseBitVec":
        arr = _bits_array(bits)
        return cls(np.flatnonzero(arr), len(arr))

    @classmethod
    def _wrap(cls, ef):
        obj = cls.__new__(cls)
        obj._e = ef
        obj.n = ef.u
        obj.ones = ef.m
        return obj

    def access(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside 0..{self.n - 1}")
        return self._e.access(i)

    __getitem__ = access

    def rank1(self, i: int) -> int:
        self._check_rank(i)
        return self._e.rank1(i)

    def rank0(self, i: int) -> int:
        self._check_rank(i)
        return i - self._e.rank1(i)

    def select1(self, k: int) -> int:
        self._check_select(k, self.ones)
        return self._e.select1(k)

    def select0(self, k: int) -> int:
        self._check_select(k, self.n - self.ones)
        return self._e.select0(k)

    def positions(self) -> np.ndarray:
        return self._e.positions()

    def size_bits(self) -> int:
        return self._e.size_bits()


class ParenTree:
    """Ordinal tree in balanced-parentheses form.

    A node is the position of its opening parenthesis; the root is 0.
    """

    def __init__(self, parens):
        if isinstance(parens, str) and set(parens) <= {"(", ")"}:
            arr = np.frombuffer(parens.encode(), dtype=np.uint8) == ord("(")
        else:
            arr = _bits_array(parens)
        arr = np.asarray(arr, dtype=np.uint8)
        exc = np.cumsum(np.where(arr == 1, 1, -1))
        if len(arr) == 0 or exc[-1] != 0 or exc.min() < 0 or np.any(exc[:-1] == 0):
            raise ValueError("not a balanced sequence describing a single tree")
        self._t = K.BP(arr)
        self.n_nodes = len(arr) // 2

    @classmethod
    def _wrap(cls, bp):
        obj = cls.__new__(cls)
        obj._t = bp
        obj.n_nodes = bp.n // 2
        return obj

    def __len__(self):
        return self.n_nodes

    def _node(self, v):
        if not (0 <= v < self._t.n and self._t.bit(v)):
            raise ValueError(f"{v} is not a node")
        return v

    def parens(self) -> str:
        return "".join("(" if b else ")" for b in self._t.raw_bits())

    def node(self, p: int) -> int:
        if not 1 <= p <= self.n_nodes:
            raise ValueError(f"preorder {p} outside 1..{self.n_nodes}")
        return self._t.node(p)

    def preorder(self, v: int) -> int:
        return self._t.preorder(self._node(v))

    def is_leaf(self, v: int) -> bool:
        return bool(self._t.is_leaf(self._node(v)))

    def leafrank(self, v: int) -> int:
        """Number of leaves strictly before ``v`` in preorder."""
        return self._t.leafrank(self._node(v))

    def leafselect(self, j: int) -> int:
        if not 1 <= j <= self._t.p10.ones:
            raise ValueError(f"leaf number {j} outside 1..{self._t.p10.ones}")
        return self._t.leafselect(j)

    def intrank(self, v: int) -> int:
        """Number of internal nodes strictly before ``v`` in preorder."""
        return self._t.intrank(self._node(v))

    def intselect(self, j: int) -> int:
        if not 1 <= j <= self._t.p11.ones:
            raise ValueError(f"internal-node number {j} outside 1..{self._t.p11.ones}")
        return self._t.intselect(j)

    @property
    def n_leaves(self) -> int:
        return self._t.p10.ones

    @property
    def n_internal(self) -> int:
        return self._t.p11.ones

    def numleaves(self, v: int) -> int:
        return self._t.numleaves(self._node(v))

    def parent(self, v: int) -> int:
        if self._node(v) == 0:
            raise ValueError("the root has no parent")
        return self._t.parent(v)

    def findclose(self, v: int) -> int:
        return self._t.findclose(self._node(v))

    def degree(self, v: int) -> int:
        return self._t.degree(self._node(v))

    def child(self, v: int, k: int) -> int:
        d = self.degree(v)
        if not 1 <= k <= d:
            raise ValueError(f"child index {k} outside 1..{d}")
        return self._t.child(v, k)

    def nextsibling(self, v: int) -> int:
        """Next sibling of ``v``, or -1 if it is the last child."""
        return self._t.nextsibling(self._node(v))

    def prevsibling(self, v: int) -> int:
        return self._t.prevsibling(self._node(v))

    def depth(self, v: int) -> int:
        return self._t.depth(self._node(v))

    def level_ancestor(self, v: int, d: int) -> int:
        """Ancestor ``d`` levels above ``v`` (d = 0 gives ``v``)."""
        dv = self.depth(v)
        if not 0 <= d <= dv:
            raise ValueError(f"level {d} outside 0..{dv}")
        return self._t.level_ancestor(v, d)

    def size_bits(self) -> int:
        return self._t.size_bits()


class LabelSeq:
    """Integer sequence with access, rank and select."""

    def __init__(self, values: Sequence[int]):
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and arr.min() < 0:
            raise ValueError("labels must be non-negative")
        self._w = K.WaveletMatrix(arr)
        self.n = len(arr)

    @classmethod
    def _wrap(cls, wm):
        obj = cls.__new__(cls)
        obj._w = wm
        obj.n = wm.n
        return obj

    def __len__(self):
        return self.n

    def access(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside 0..{self.n - 1}")
        return self._w.access(i)

    __getitem__ = access

    def rank(self, a: int, i: int) -> int:
        """Occurrences of ``a`` strictly before position ``i``."""
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside 0..{self.n}")
        return self._w.rank(a, i)

    def count(self, a: int) -> int:
        return self._w.count(a)

    def select(self, a: int, j: int) -> int:
        """Position of the ``j``-th occurrence of ``a``."""
        c = self._w.count(a)
        if not 1 <= j <= c:
            raise IndexError(f"occurrence {j} of {a} outside 1..{c}")
        return self._w.select(a, j)

    def to_list(self) -> list[int]:
        return self._w.to_numpy().tolist()

    def size_bits(self) -> int:
        return self._w.size_bits()


class PermInv:
    """Permutation of 1..M with inverse in at most ``t`` forward steps."""

    def __init__(self, perm: Sequence[int], t: int = 32):
        arr = np.asarray(perm, dtype=np.int64) - 1
        self._p = K.Perm(arr, t)
        self.m = len(arr)
        self.t = t

    @classmethod
    def _wrap(cls, p):
        obj = cls.__new__(cls)
        obj._p = p
        obj.m = p.m
        obj.t = p.t
        return obj

    def __len__(self):
        return self.m

    def _chk(self, i):
        if not 1 <= i <= self.m:
            raise IndexError(f"{i} outside 1..{self.m}")

    def apply(self, i: int) -> int:
        self._chk(i)
        return self._p.apply(i - 1) + 1

    def inverse(self, j: int) -> int:
        self._chk(j)
        return self._p.inverse(j - 1) + 1

    def inverse_steps(self, j: int) -> int:
        self._chk(j)
        return self._p.inverse_steps(j - 1)

    def size_bits(self) -> int:
        return self._p.size_bits()


class RangeGrid:
    """One point per column: ``rows[c-1]`` is the row of column c, with a label."""

    def __init__(self, rows: Sequence[int], labels: Sequence[int]):
        r = np.asarray(rows, dtype=np.int64)
        lab = np.asarray(labels, dtype=np.int64)
        if len(r) != len(lab):
            raise ValueError("rows and labels differ in length")
        if r.size and r.min() < 1:
            raise ValueError("rows are 1-based")
        self._rows = K.WaveletMatrix(r)
        self._labels = K.Packed(lab)
        self.n_cols = len(r)
        self.n_rows = int(r.max()) if r.size else 0

    @classmethod
    def _wrap(cls, rows, labels, n_rows):
        obj = cls.__new__(cls)
        obj._rows = rows
        obj._labels = labels
        obj.n_cols = labels.n
        obj.n_rows = n_rows
        return obj

    def row(self, c: int) -> int:
        if not 1 <= c <= self.n_cols:
            raise IndexError(f"column {c} outside 1..{self.n_cols}")
        return self._rows.access(c - 1)

    def label(self, c: int) -> int:
        if not 1 <= c <= self.n_cols:
            raise IndexError(f"column {c} outside 1..{self.n_cols}")
        return self._labels.get(c - 1)

    def report(self, r1: int, r2: int, c1: int, c2: int) -> list[tuple[int, int, int]]:
        """Points (col, row, label) with r1 <= row <= r2 and c1 <= col <= c2."""
        if r1 < 1 or c1 < 1 or c2 > self.n_cols:
            raise ValueError("query range outside the grid")
        if r1 > r2 or c1 > c2:
            return []
        flat = self._rows.report(c1 - 1, c2, r1, r2)
        pts = sorted(zip(flat[0::2], flat[1::2]))
        return [(c + 1, r, self._labels.get(c)) for c, r in pts]

    def size_bits(self) -> int:
        return self._rows.size_bits() + self._labels.size_bits()
