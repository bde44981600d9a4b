"""Grammars for byte texts: RePair construction, normalization, renumbering.

Raw grammars (``Grammar``) use byte values 0..255 as terminals and ids
>= 256 for nonterminals. Normalized grammars (``PreprocessedGrammar``) number
every symbol 1..g, terminal rules included, in the order of their reversed
expansions.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from pydivsufsort import divsufsort, kasai

from ._backend import K

NT_BASE = 256

__all__ = [
    "Grammar",
    "PreprocessedGrammar",
    "GrammarWarning",
    "repair_compress",
    "preprocess",
    "expand",
    "grammar_stats",
    "check_invariants",
    "read_grammar",
    "write_grammar",
    "suffix_structures",
]


class GrammarWarning(UserWarning):
    """A loaded grammar needed fixing (empty rules, duplicate expansions)."""


@dataclass
class Grammar:
    """Raw rule set: ``rules[id]`` is the right-hand side of nonterminal ``id``."""

    rules: dict[int, tuple[int, ...]]
    start: int
    n: int

    @property
    def sigma(self) -> bytes:
        seen = set()
        for rhs in self.rules.values():
            seen.update(s for s in rhs if s < NT_BASE)
        return bytes(sorted(seen))

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rules.values())

    def expand(self, sym: int | None = None) -> bytes:
        sym = self.start if sym is None else sym
        order = _topo_order(self.rules, sym)
        return _expand_all(self.rules, order, sym)


@dataclass(frozen=True)
class PreprocessedGrammar:
    """Normalized grammar over symbols 1..g.

    ``rules[i - 1]`` is the right-hand side of X_i, empty for terminal rules;
    ``chars[i - 1]`` is the byte of a terminal rule and -1 otherwise.
    """

    rules: tuple[tuple[int, ...], ...]
    chars: tuple[int, ...]
    start: int
    n: int
    lengths: tuple[int, ...] = field(repr=False, default=())

    @property
    def g(self) -> int:
        return len(self.rules)

    @property
    def sigma(self) -> int:
        return sum(1 for c in self.chars if c >= 0)

    @property
    def alphabet(self) -> bytes:
        return bytes(c for c in self.chars if c >= 0)

    @property
    def G_tree(self) -> int:
        return sum(len(r) for r in self.rules)

    def is_terminal(self, x: int) -> bool:
        return self.chars[x - 1] >= 0

    def sym_len(self, x: int) -> int:
        return self.lengths[x - 1]

    def rhs(self, x: int) -> tuple[int, ...]:
        return self.rules[x - 1]

    def terminal_symbol(self, byte: int) -> int:
        """Symbol id of the terminal rule for ``byte``, or 0 if absent."""
        try:
            return self.chars.index(byte) + 1
        except ValueError:
            return 0

    def to_grammar(self) -> Grammar:
        """Raw form with terminal rules folded back into byte literals."""
        def conv(s):
            c = self.chars[s - 1]
            return c if c >= 0 else NT_BASE + s

        rules = {NT_BASE + i + 1: tuple(conv(s) for s in rhs)
                 for i, rhs in enumerate(self.rules) if self.chars[i] < 0}
        return Grammar(rules, NT_BASE + self.start, self.n)


# -- helpers ------------------------------------------------------------------

def _topo_order(rules, start):
    """Nonterminals reachable from ``start``, children before parents."""
    order = []
    state = {}
    stack = [(start, 0)]
    while stack:
        sym, i = stack.pop()
        if i == 0:
            st = state.get(sym)
            if st == 2:
                continue
            if st == 1:
                raise ValueError(f"grammar is cyclic at symbol {sym}")
            if sym not in rules:
                raise ValueError(f"undefined nonterminal {sym}")
            state[sym] = 1
        rhs = rules[sym]
        while i < len(rhs) and (rhs[i] < NT_BASE or state.get(rhs[i]) == 2):
            i += 1
        if i < len(rhs):
            child = rhs[i]
            if state.get(child) == 1:
                raise ValueError(f"grammar is cyclic at symbol {child}")
            stack.append((sym, i + 1))
            stack.append((child, 0))
        else:
            state[sym] = 2
            order.append(sym)
    return order


_CACHE_LIMIT = 1 << 12


def _expand_all(rules, order, target):
    # short expansions are cached; long ones are rebuilt from parts on demand
    cache = {}
    lens = {}
    for sym in order:
        lens[sym] = sum(1 if s < NT_BASE else lens[s] for s in rules[sym])
        if lens[sym] <= _CACHE_LIMIT:
            cache[sym] = b"".join(bytes((s,)) if s < NT_BASE else cache[s]
                                  for s in rules[sym])

    def build(sym, out):
        stack = [iter(rules[sym])]
        while stack:
            for s in stack[-1]:
                if s < NT_BASE:
                    out.append(s)
                elif s in cache:
                    out += cache[s]
                else:
                    stack.append(iter(rules[s]))
                    break
            else:
                stack.pop()

    if target < NT_BASE:
        return bytes((target,))
    if target in cache:
        return cache[target]
    out = bytearray()
    build(target, out)
    return bytes(out)


# -- RePair ------------------------------------------------------------------

def repair_compress(text: bytes) -> Grammar:
    """Deterministic RePair: repeatedly replace the most frequent pair.

    Ties between equally frequent pairs go to the smallest (left, right);
    overlapping occurrences of a pair like ``aa`` are counted left to right.
    """
    text = bytes(text)
    if not text:
        raise ValueError("cannot compress an empty text")
    pairs, seq = K.repair(text)
    rules = {NT_BASE + k: (int(a), int(b)) for k, (a, b) in enumerate(pairs)}
    start = NT_BASE + len(pairs)
    rules[start] = tuple(int(s) for s in seq)
    return Grammar(rules, start, len(text))


# -- preprocessing ---------------------------------------------------------------

def _resolve_units_and_empties(gr: Grammar):
    rules = {k: tuple(v) for k, v in gr.rules.items()}
    order = _topo_order(rules, gr.start)
    empty = set()
    for sym in order:
        rhs = tuple(s for s in rules[sym] if s not in empty)
        rules[sym] = rhs
        if not rhs:
            empty.add(sym)
    if empty:
        warnings.warn(f"{len(empty)} rule(s) expand to the empty string and were removed",
                      GrammarWarning, stacklevel=3)
    if gr.start in empty:
        raise ValueError("grammar generates the empty string")
    # unit rules: A -> B is replaced by B everywhere (children first)
    alias = {}
    for sym in order:
        if sym in empty:
            continue
        rhs = tuple(alias.get(s, s) for s in rules[sym])
        rules[sym] = rhs
        if len(rhs) == 1 and sym != gr.start:
            alias[sym] = rhs[0]
    start = gr.start
    while len(rules[start]) == 1 and rules[start][0] >= NT_BASE:
        alias[start] = rules[start][0]
        start = rules[start][0]
    if alias:
        warnings.warn(f"{len(alias)} unit rule(s) were replaced by their right-hand side",
                      GrammarWarning, stacklevel=3)
    keep = _topo_order(rules, start)
    return {s: rules[s] for s in keep}, start, keep


def _inline_single_use(rules, start, order):
    uses = {}
    for sym in order:
        for s in rules[sym]:
            if s >= NT_BASE:
                uses[s] = uses.get(s, 0) + 1
    single = {s for s, c in uses.items() if c == 1}
    flat = {}
    for sym in order:  # children first, so inlined bodies are final
        out = []
        for s in rules[sym]:
            if s in single:
                out.extend(flat[s])
            else:
                out.append(s)
        flat[sym] = tuple(out)
    return {s: flat[s] for s in order if s not in single}


def suffix_structures(text: bytes):
    """Suffix array, inverse and previous-LCP array of ``text``."""
    arr = np.frombuffer(text, dtype=np.uint8).copy()
    sa = np.asarray(divsufsort(arr), dtype=np.int64)
    lcp = np.asarray(kasai(arr, sa), dtype=np.int64)
    lcp_prev = np.zeros(len(sa), dtype=np.int64)
    lcp_prev[1:] = lcp[:-1]
    isa = np.empty(len(sa), dtype=np.int64)
    isa[sa] = np.arange(len(sa), dtype=np.int64)
    return sa, isa, lcp_prev


def block_keys(isa, lcp_prev, starts, lengths):
    """Sort keys for substrings text[s:s+l]: equal keys mean equal strings,
    and key order is lexicographic order of the substrings."""
    starts = np.asarray(starts, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    ranks = isa[starts]
    order = np.argsort(ranks, kind="stable")
    res = np.empty(len(starts), dtype=np.int64)
    res[order] = K.interval_starts(lcp_prev, ranks[order], lengths[order])
    return res


def preprocess(gr: Grammar, text: bytes | None = None) -> PreprocessedGrammar:
    """Normalize a raw grammar and renumber its symbols.

    The result has one rule X_a -> a per byte, no empty or unit rules (the
    start rule may stay unit when it derives a single byte), every other
    nonterminal used at least twice, and symbols numbered so that i < j
    exactly when the reversal of F(X_i) sorts before that of F(X_j).
    """
    rules, start, order = _resolve_units_and_empties(gr)
    rules = _inline_single_use(rules, start, order)
    order = [s for s in order if s in rules]
    if text is None:
        text = _expand_all(rules, order, start)
    text = bytes(text)
    n = len(text)
    if n != gr.n:
        raise ValueError(f"grammar generates {n} bytes, header says {gr.n}")

    alphabet = sorted({s for r in rules.values() for s in r if s < NT_BASE})
    # symbol lengths and one occurrence (end position) of each symbol in T
    length = {a: 1 for a in alphabet}
    for sym in order:
        length[sym] = sum(length[s] for s in rules[sym])
    first = {start: 0}
    stack = [start]
    while stack:
        sym = stack.pop()
        pos = first[sym]
        for s in rules[sym]:
            if s not in first:
                first[s] = pos
                if s >= NT_BASE:
                    stack.append(s)
            pos += length[s]
    syms = list(alphabet) + order
    ends = np.array([first[s] + length[s] - 1 for s in syms], dtype=np.int64)
    lens = np.array([length[s] for s in syms], dtype=np.int64)
    # reversed expansions are substrings of reversed T starting at n-1-end
    _, isa, lcp_prev = suffix_structures(text[::-1])
    keys = block_keys(isa, lcp_prev, n - 1 - ends, lens)
    old = np.array([s for s in syms], dtype=np.int64)
    perm = np.lexsort((old, lens, keys))
    skeys = list(zip(keys[perm].tolist(), lens[perm].tolist()))
    dups = sum(1 for a, b in zip(skeys, skeys[1:]) if a == b)
    if len(rules[start]) == 1:
        dups -= 1  # S -> X_a necessarily ties with X_a
    if dups:
        warnings.warn(f"{dups} pair(s) of symbols have identical expansions",
                      GrammarWarning, stacklevel=2)
    newid = {syms[p]: i + 1 for i, p in enumerate(perm.tolist())}
    g = len(syms)
    new_rules = [()] * g
    chars = [-1] * g
    lengths = [0] * g
    for s in syms:
        i = newid[s] - 1
        lengths[i] = length[s]
        if s < NT_BASE:
            chars[i] = s
        else:
            new_rules[i] = tuple(newid[c] for c in rules[s])
    return PreprocessedGrammar(tuple(new_rules), tuple(chars), newid[start], n,
                               tuple(lengths))


# -- utilities -------------------------------------------------------------------

def expand(gr: PreprocessedGrammar, x: int | None = None) -> bytes:
    """Expansion F(X) of symbol ``x`` (the start symbol by default)."""
    x = gr.start if x is None else x
    if not 1 <= x <= gr.g:
        raise ValueError(f"symbol {x} outside 1..{gr.g}")
    if gr.chars[x - 1] >= 0:
        return bytes((gr.chars[x - 1],))
    out = bytearray()
    stack = [iter(gr.rules[x - 1])]
    while stack:
        for s in stack[-1]:
            c = gr.chars[s - 1]
            if c >= 0:
                out.append(c)
            else:
                stack.append(iter(gr.rules[s - 1]))
                break
        else:
            stack.pop()
    return bytes(out)


def expansions(gr: PreprocessedGrammar) -> list[bytes]:
    """F(X_i) for every symbol, index i-1. Materializes all of them."""
    out = [b""] * gr.g
    done = [False] * gr.g
    for x in range(1, gr.g + 1):
        stack = [x]
        while stack:
            y = stack[-1]
            if done[y - 1]:
                stack.pop()
                continue
            pending = [s for s in gr.rules[y - 1] if not done[s - 1]]
            if pending and gr.chars[y - 1] < 0:
                stack.extend(pending)
                continue
            stack.pop()
            if gr.chars[y - 1] >= 0:
                out[y - 1] = bytes((gr.chars[y - 1],))
            else:
                out[y - 1] = b"".join(out[s - 1] for s in gr.rules[y - 1])
            done[y - 1] = True
    return out


def grammar_stats(gr: PreprocessedGrammar) -> dict:
    """Counts: g, G_tree, sigma, parse-tree height h (edges) and n."""
    h = [0] * gr.g
    for x in _children_first(gr):
        if gr.chars[x - 1] < 0:
            h[x - 1] = 1 + max(h[s - 1] for s in gr.rules[x - 1])
    return {"g": gr.g, "G_tree": gr.G_tree, "sigma": gr.sigma,
            "h": h[gr.start - 1], "n": gr.n}


def _children_first(gr: PreprocessedGrammar):
    seen = [False] * gr.g
    order = []
    for root in range(1, gr.g + 1):
        if seen[root - 1]:
            continue
        stack = [(root, 0)]
        seen[root - 1] = True
        while stack:
            x, i = stack.pop()
            rhs = gr.rules[x - 1]
            while i < len(rhs) and seen[rhs[i] - 1]:
                i += 1
            if i < len(rhs):
                stack.append((x, i + 1))
                seen[rhs[i] - 1] = True
                stack.append((rhs[i], 0))
            else:
                order.append(x)
    return order


def check_invariants(gr: PreprocessedGrammar, text: bytes | None = None) -> list[str]:
    """Violations of the normal form, by materialized comparison (empty if none)."""
    bad = []
    exp = expansions(gr)
    if text is not None and exp[gr.start - 1] != text:
        bad.append("start symbol does not generate the text")
    seen_chars = set()
    uses = [0] * gr.g
    for i, rhs in enumerate(gr.rules):
        x = i + 1
        c = gr.chars[i]
        if c >= 0:
            if rhs:
                bad.append(f"terminal rule X{x} has a right-hand side")
            if c in seen_chars:
                bad.append(f"byte {c} has two terminal rules")
            seen_chars.add(c)
            continue
        if len(rhs) <= 1 and not (x == gr.start and len(rhs) == 1
                                   and gr.chars[rhs[0] - 1] >= 0):
            bad.append(f"rule X{x} has length {len(rhs)}")
        for s in rhs:
            uses[s - 1] += 1
    for i, u in enumerate(uses):
        x = i + 1
        if x == gr.start:
            if u:
                bad.append("start symbol is referenced")
        elif gr.chars[i] < 0 and u < 2:
            bad.append(f"nonterminal X{x} used {u} time(s)")
        elif gr.chars[i] >= 0 and u < 1:
            bad.append(f"terminal rule X{x} is never used")
    rev = [e[::-1] for e in exp]
    unit_start = len(gr.rules[gr.start - 1]) == 1
    for i in range(gr.g - 1):
        if unit_start and gr.start in (i + 1, i + 2) and rev[i] == rev[i + 1]:
            continue
        if not rev[i] < rev[i + 1]:
            bad.append(f"reverse order violated between X{i + 1} and X{i + 2}")
    return bad


# -- interchange format -------------------------------------------------------------

def _sym_str(s: int) -> str:
    if s >= NT_BASE:
        return f"X{s - NT_BASE}"
    ch = chr(s)
    if 33 <= s < 127 and ch not in "\\'":
        return "'" + ch
    return f"'\\x{s:02x}"


def _parse_sym(tok: str) -> int:
    if tok.startswith("'"):
        body = tok[1:]
        if len(body) == 1:
            return ord(body)
        if len(body) == 4 and body.startswith("\\x"):
            return int(body[2:], 16)
        raise ValueError(f"bad terminal literal {tok!r}")
    if tok.startswith("X") and tok[1:].isdigit():
        return NT_BASE + int(tok[1:])
    raise ValueError(f"bad symbol {tok!r}")


def write_grammar(gr: Grammar) -> str:
    """Text form: header ``GRM1 <sigma> <start> <n>`` then ``Xi -> s1 s2 ...``."""
    sig = ",".join(f"{c:02x}" for c in gr.sigma) or "-"
    lines = [f"GRM1 {sig} {_sym_str(gr.start)} {gr.n}"]
    for k in sorted(gr.rules):
        lines.append(f"{_sym_str(k)} -> " + " ".join(_sym_str(s) for s in gr.rules[k]))
    return "\n".join(lines) + "\n"


def read_grammar(src: str) -> Grammar:
    lines = [ln for ln in src.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty grammar file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "GRM1":
        raise ValueError("missing GRM1 header")
    start = _parse_sym(head[2])
    n = int(head[3])
    rules = {}
    for ln in lines[1:]:
        lhs, arrow, *rhs = ln.split()
        if arrow != "->":
            raise ValueError(f"bad rule line {ln!r}")
        x = _parse_sym(lhs)
        if x < NT_BASE:
            raise ValueError(f"left-hand side must be a nonterminal: {ln!r}")
        if x in rules:
            raise ValueError(f"rule {lhs} defined twice")
        rules[x] = tuple(_parse_sym(t) for t in rhs)
    if start < NT_BASE or start not in rules:
        raise ValueError("start symbol has no rule")
    gr = Grammar(rules, start, n)
    if head[1] != "-":
        declared = bytes(int(h, 16) for h in head[1].split(","))
        if declared != gr.sigma:
            raise ValueError("declared alphabet does not match the rules")
    return gr
