"""Assemble the self-index from a normalized grammar."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ._backend import K
from .grammar import (Grammar, PreprocessedGrammar, block_keys, expand, grammar_stats,
                      preprocess, repair_compress, suffix_structures)
from .succinct import LabelSeq, ParenTree, PermInv, RangeGrid, SparseBitVec

__all__ = ["IndexOptions", "TreeParts", "GridParts", "GrammarIndex", "build_tree",
           "build_grid", "build_trie", "build_index", "node_start"]


@dataclass(frozen=True)
class IndexOptions:
    """Build and query knobs.

    ``sample_rate`` enables Patricia sampling of rows and columns (every k-th
    string); ``None`` means plain binary search. ``with_trie`` adds the
    leftmost/rightmost path tries for prefix and suffix expansion.
    """

    sample_rate: int | None = None
    with_trie: bool = False
    perm_step: int = 32
    patricia_depth: int = 128

    def __post_init__(self):
        if self.sample_rate is not None and self.sample_rate < 1:
            raise ValueError("sample rate must be >= 1")
        if self.perm_step < 1:
            raise ValueError("permutation sampling step must be >= 1")
        if self.patricia_depth < 1:
            raise ValueError("Patricia depth must be >= 1")


@dataclass
class TreeParts:
    """Plain arrays describing the grammar tree and its companions."""

    parens: np.ndarray          # 1 = open
    xprime: np.ndarray          # leaf labels in preorder
    y_ones: np.ndarray          # 0-based positions of terminal rules in 1..g
    pi: np.ndarray              # nonterminal rank -> internal-node rank (0-based)
    l_ones: np.ndarray          # leaf start positions in T
    alphabet: bytes
    n: int
    g: int
    # grid candidates in tree order, one per proper rule suffix
    col_rows: np.ndarray = field(repr=False, default=None)
    col_labels: np.ndarray = field(repr=False, default=None)
    col_starts: np.ndarray = field(repr=False, default=None)
    col_lens: np.ndarray = field(repr=False, default=None)


@dataclass
class GridParts:
    rows: np.ndarray
    labels: np.ndarray


def build_tree(gr: PreprocessedGrammar) -> TreeParts:
    """Grammar tree by depth-first unrolling: the first visit of a nonterminal
    becomes an internal node, later visits and terminal rules become leaves."""
    g = gr.g
    chars = gr.chars
    rules = gr.rules
    length = gr.lengths
    defined = bytearray(g + 1)
    parens = []
    xprime = []
    l_ones = []
    internal = []
    crow, clab, cstart, clen = [], [], [], []
    stack = []
    pre = 0

    def open_node(sym, pos):
        nonlocal pre
        pre += 1
        parens.append(1)
        if chars[sym - 1] < 0 and not defined[sym]:
            defined[sym] = 1
            internal.append(sym)
            stack.append([sym, 0, pos, pos + length[sym - 1]])
        else:
            xprime.append(sym)
            l_ones.append(pos)
            parens.append(0)

    open_node(gr.start, 0)
    while stack:
        fr = stack[-1]
        sym, i, pos, end = fr
        rhs = rules[sym - 1]
        if i == len(rhs):
            parens.append(0)
            stack.pop()
            continue
        c = rhs[i]
        fr[1] = i + 1
        fr[2] = pos + length[c - 1]
        if i >= 1:
            crow.append(rhs[i - 1])
            clab.append(pre + 1)
            cstart.append(pos)
            clen.append(end - pos)
        open_node(c, pos)

    y_ones = np.array([i for i in range(g) if chars[i] >= 0], dtype=np.int64)
    is_nt = np.array([c < 0 for c in chars], dtype=bool)
    nt_rank = np.cumsum(is_nt)  # rank among nonterminals, 1-based at NT positions
    pi = np.empty(len(internal), dtype=np.int64)
    for k, sym in enumerate(internal):
        pi[nt_rank[sym - 1] - 1] = k
    return TreeParts(
        parens=np.array(parens, dtype=np.uint8),
        xprime=np.array(xprime, dtype=np.int64),
        y_ones=y_ones,
        pi=pi,
        l_ones=np.array(l_ones, dtype=np.int64),
        alphabet=gr.alphabet,
        n=gr.n,
        g=g,
        col_rows=np.array(crow, dtype=np.int64),
        col_labels=np.array(clab, dtype=np.int64),
        col_starts=np.array(cstart, dtype=np.int64),
        col_lens=np.array(clen, dtype=np.int64),
    )


def build_grid(parts: TreeParts, text: bytes) -> GridParts:
    """Sort proper rule suffixes by expansion; ties go to the smaller label."""
    if len(parts.col_rows) == 0:
        return GridParts(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    _, isa, lcp_prev = suffix_structures(text)
    keys = block_keys(isa, lcp_prev, parts.col_starts, parts.col_lens)
    order = np.lexsort((parts.col_labels, parts.col_lens, keys))
    return GridParts(parts.col_rows[order], parts.col_labels[order])


def build_trie(gr: PreprocessedGrammar, rightmost: bool = False):
    """Trie of leftmost (or rightmost) paths: the parent of X_i is the first
    (last) symbol of its rule; terminal rules hang from the root.

    Returns (parens, labels) with labels[p - 2] = symbol at preorder p.
    """
    g = gr.g
    children = [[] for _ in range(g + 1)]  # index 0 is the root
    for x in range(1, g + 1):
        rhs = gr.rules[x - 1]
        par = 0 if gr.chars[x - 1] >= 0 else (rhs[-1] if rightmost else rhs[0])
        children[par].append(x)
    parens = []
    labels = []
    stack = [(0, 0)]
    parens.append(1)
    while stack:
        v, i = stack.pop()
        if i < len(children[v]):
            stack.append((v, i + 1))
            c = children[v][i]
            parens.append(1)
            labels.append(c)
            stack.append((c, 0))
        else:
            parens.append(0)
    return np.array(parens, dtype=np.uint8), np.array(labels, dtype=np.int64)


class GrammarIndex:
    """Grammar-based self-index over a byte text.

    Build with :func:`build_index`; query with :meth:`locate`,
    :meth:`count` and :meth:`extract`.
    """

    def __init__(self, core, options: IndexOptions, info: dict):
        self.core = core
        self.options = options
        self.info = dict(info)
        self.n = core.n
        self.g = core.g
        self.alphabet = core.alphabet
        self.sigma = len(self.alphabet)
        self.G_tree = core.tree.n // 2 - 1
        self._byte_sym = {}
        for k, c in enumerate(self.alphabet):
            self._byte_sym[c] = core.y.select1(k + 1) + 1
        self.patricia = None
        if options.sample_rate is not None:
            from .search import build_patricia
            self.patricia = build_patricia(self, options.sample_rate, options.patricia_depth)

    # components, wrapped for inspection
    @property
    def tree(self) -> ParenTree:
        return ParenTree._wrap(self.core.tree)

    @property
    def xprime(self) -> LabelSeq:
        return LabelSeq._wrap(self.core.xp)

    @property
    def y(self) -> SparseBitVec:
        return SparseBitVec._wrap(self.core.y)

    @property
    def pi(self) -> PermInv:
        return PermInv._wrap(self.core.pi)

    @property
    def l(self) -> SparseBitVec:
        return SparseBitVec._wrap(self.core.lmap)

    @property
    def grid(self) -> RangeGrid:
        return RangeGrid._wrap(self.core.rows, self.core.labels, self.g)

    @property
    def height(self) -> int:
        return self.info.get("h", -1)

    @property
    def has_trie(self) -> bool:
        return self.core.tsl is not None

    def symbol_of_byte(self, c: int) -> int:
        """Terminal-rule symbol for byte ``c``, or 0 if ``c`` is not in the text."""
        return self._byte_sym.get(c, 0)

    def with_options(self, **kw) -> "GrammarIndex":
        """Same structures, different query options (Patricia rebuilt if asked)."""
        opts = replace(self.options, **kw)
        if opts.with_trie != self.options.with_trie and opts.with_trie and not self.has_trie:
            raise ValueError("index was built without path tries")
        return GrammarIndex(self.core, opts, self.info)

    # queries
    def locate(self, pattern: bytes, stats=None) -> list[int]:
        from .search import locate
        return locate(self, pattern, stats=stats)

    def count(self, pattern: bytes) -> int:
        from .search import count
        return count(self, pattern)

    def extract(self, p: int, length: int, method: str = "rank") -> bytes:
        from .extract import extract
        return extract(self, p, length, method=method)

    def size_report(self) -> dict[str, int]:
        """Bits used by each in-memory structure."""
        c = self.core
        rep = {
            "tree": c.tree.size_bits(),
            "xprime": c.xp.size_bits(),
            "y": c.y.size_bits(),
            "pi": c.pi.size_bits(),
            "l": c.lmap.size_bits(),
            "grid_rows": c.rows.size_bits(),
            "grid_labels": c.labels.size_bits(),
            "alphabet": 8 * self.sigma,
        }
        if c.tsl is not None:
            rep["trie_left"] = c.tsl.bp.size_bits() + c.tsl.xs.size_bits()
            rep["trie_right"] = c.tsr.bp.size_bits() + c.tsr.xs.size_bits()
        if self.patricia is not None:
            rep["patricia"] = self.patricia.size_bits()
        return rep

    def size_bits(self) -> int:
        return sum(self.size_report().values())

    def bps(self) -> float:
        return self.size_bits() / self.n


def node_start(ix: GrammarIndex, v: int) -> int:
    """0-based text position where the expansion of tree node ``v`` starts."""
    t = ix.core.tree
    if not (0 <= v < t.n and t.bit(v)):
        raise ValueError(f"{v} is not a node")
    return ix.core.node_start(v)


def _trie_core(parens, labels, step):
    return K.TrieCore(K.BP(parens), K.Perm(labels - 1, step))


def assemble(parts: TreeParts, grid: GridParts, options: IndexOptions, info: dict,
             tries=None) -> GrammarIndex:
    """Wrap plain arrays into kernel structures."""
    nl = max(1, int(parts.g).bit_length())
    tsl = tsr = None
    if tries is not None:
        (pl, ll), (pr, lr) = tries
        tsl = _trie_core(pl, ll, options.perm_step)
        tsr = _trie_core(pr, lr, options.perm_step)
    core = K.IndexCore(
        K.BP(parts.parens),
        K.WaveletMatrix(parts.xprime, nl),
        K.EliasFano(parts.y_ones, parts.g),
        K.Perm(parts.pi, options.perm_step),
        K.EliasFano(parts.l_ones, parts.n),
        parts.alphabet,
        K.WaveletMatrix(grid.rows, nl),
        K.Packed(grid.labels, width=max(1, (len(parts.parens) // 2).bit_length())),
        parts.n,
        parts.g,
        tsl,
        tsr,
    )
    return GrammarIndex(core, options, info)


def build_index(text: bytes | None = None, *, grammar: Grammar | None = None,
                options: IndexOptions | None = None, **kw) -> GrammarIndex:
    """Compress ``text`` with RePair (or take ``grammar``) and build the index.

    Keyword arguments are forwarded to :class:`IndexOptions`.
    """
    options = options or IndexOptions(**kw)
    if grammar is None:
        if text is None:
            raise ValueError("need a text or a grammar")
        text = bytes(text)
        if not text:
            raise ValueError("cannot index an empty text")
        grammar = repair_compress(text)
    pg = preprocess(grammar, text)
    if text is None:
        text = expand(pg)
    return build_from_preprocessed(pg, text, options, G_raw=grammar.size)


def build_from_preprocessed(pg: PreprocessedGrammar, text: bytes, options: IndexOptions,
                            G_raw: int | None = None) -> GrammarIndex:
    parts = build_tree(pg)
    grid = build_grid(parts, text)
    tries = None
    if options.with_trie:
        tries = (build_trie(pg, False), build_trie(pg, True))
    st = grammar_stats(pg)
    info = {"h": st["h"], "G_raw": G_raw if G_raw is not None else pg.G_tree,
            "G_proc": pg.G_tree}
    return assemble(parts, grid, options, info, tries)
