"""Substring extraction and prefix/suffix expansion of symbols."""
from __future__ import annotations

import numpy as np

__all__ = ["extract", "expand_prefix", "expand_suffix", "expand_column_prefix",
           "first_terminal", "new_counter"]


def new_counter() -> np.ndarray:
    """Step counters shared with the kernels: [node visits, climb steps]."""
    return np.zeros(2, dtype=np.int64)


def _ctr(counter):
    return new_counter() if counter is None else counter


def _check_symbol(ix, x):
    if not 1 <= x <= ix.g:
        raise ValueError(f"symbol {x} outside 1..{ix.g}")


def _use_trie(ix, use_trie):
    if use_trie is None:
        return ix.has_trie and ix.options.with_trie
    if use_trie and not ix.has_trie:
        raise ValueError("index was built without path tries")
    return bool(use_trie)


def extract(ix, p: int, length: int, method: str = "rank", counter=None) -> bytes:
    """T[p : p + length].

    ``method="rank"`` locates each leaf with rank on L; ``"children"``
    binary-searches the children of every internal node on the way down.
    """
    if length < 0 or p < 0 or p + length > ix.n:
        raise IndexError(f"range [{p}, {p + length}) outside the text of length {ix.n}")
    if method not in ("rank", "children"):
        raise ValueError(f"unknown extraction method {method!r}")
    if length == 0:
        return b""
    return ix.core.extract(p, length, method == "rank", _ctr(counter))


def expand_prefix(ix, x: int, length: int, use_trie: bool | None = None,
                  counter=None) -> bytes:
    """First ``min(length, |F(x)|)`` bytes of F(x)."""
    _check_symbol(ix, x)
    if length < 0:
        raise ValueError("length must be non-negative")
    return ix.core.expand_prefix(x, length, _use_trie(ix, use_trie), _ctr(counter))


def expand_suffix(ix, x: int, length: int, use_trie: bool | None = None,
                  counter=None) -> bytes:
    """Last ``min(length, |F(x)|)`` bytes of F(x)."""
    _check_symbol(ix, x)
    if length < 0:
        raise ValueError("length must be non-negative")
    return ix.core.expand_suffix(x, length, _use_trie(ix, use_trie), _ctr(counter))


def expand_column_prefix(ix, label: int, length: int, use_trie: bool | None = None,
                         counter=None) -> bytes:
    """First bytes of the rule suffix starting at the tree node with preorder ``label``."""
    t = ix.core.tree
    nodes = t.n // 2
    if not 2 <= label <= nodes or t.prevsibling(t.node(label)) < 0:
        raise ValueError(f"{label} is not a grid label")
    if length < 0:
        raise ValueError("length must be non-negative")
    return ix.core.column_prefix(label, length, _use_trie(ix, use_trie), _ctr(counter))


def first_terminal(ix, x: int) -> int:
    """First byte of F(x), read off the leftmost-path trie."""
    _check_symbol(ix, x)
    if not ix.has_trie:
        raise ValueError("index was built without path tries")
    c = ix.core
    if c.is_term(x):
        return c.term_char(x)
    ts = c.tsl
    v = ts.bp.node(ts.xs.inverse(x - 1) + 2)
    va = ts.bp.level_ancestor(v, ts.bp.depth(v) - 1)
    return c.term_char(ts.xs.apply(ts.bp.preorder(va) - 2) + 1)
