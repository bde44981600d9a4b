"""Ground truth for testing: naive scanners, corpus generation, fuzzing."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["CorpusSpec", "FuzzReport", "naive_locate", "naive_locate_windowed",
           "gen_corpus", "fuzz_roundtrip"]


def naive_locate(text: bytes, pattern: bytes) -> list[int]:
    """All occurrence positions, overlaps included, by repeated ``find``."""
    if not pattern:
        raise ValueError("empty pattern")
    out = []
    i = text.find(pattern)
    while i >= 0:
        out.append(i)
        i = text.find(pattern, i + 1)
    return out


def naive_locate_windowed(text: bytes, pattern: bytes) -> list[int]:
    """Second, independent scan: compare every window with numpy."""
    if not pattern:
        raise ValueError("empty pattern")
    m = len(pattern)
    if m > len(text):
        return []
    t = np.frombuffer(text, dtype=np.uint8)
    win = np.lib.stride_tricks.sliding_window_view(t, m)
    hit = np.all(win == np.frombuffer(pattern, dtype=np.uint8), axis=1)
    return np.flatnonzero(hit).tolist()


@dataclass(frozen=True)
class CorpusSpec:
    """A base string followed by mutated copies of it.

    ``indels`` switches mutations from substitutions to a mix of
    substitutions, insertions and deletions (output length then varies).
    """

    base_len: int = 1000
    copies: int = 10
    mutation_rate: float = 0.0
    alphabet: bytes = b"ACGT"
    seed: int = 0
    indels: bool = False

    def label(self) -> str:
        return (f"base={self.base_len} copies={self.copies} "
                f"rate={self.mutation_rate} sigma={len(self.alphabet)} seed={self.seed}")


def gen_corpus(spec: CorpusSpec) -> bytes:
    if not spec.alphabet:
        raise ValueError("empty alphabet")
    if spec.base_len < 1 or spec.copies < 1:
        raise ValueError("base length and copies must be positive")
    if not 0.0 <= spec.mutation_rate <= 1.0:
        raise ValueError("mutation rate must be within [0, 1]")
    rng = np.random.default_rng(spec.seed)
    alpha = np.frombuffer(bytes(spec.alphabet), dtype=np.uint8)
    base = alpha[rng.integers(0, len(alpha), spec.base_len)]
    parts = [base]
    for _ in range(spec.copies - 1):
        cp = base.copy()
        hit = rng.random(spec.base_len) < spec.mutation_rate
        idx = np.flatnonzero(hit)
        if not spec.indels:
            cp[idx] = alpha[rng.integers(0, len(alpha), len(idx))]
        else:
            kinds = rng.integers(0, 3, len(idx))
            out = []
            prev = 0
            for i, kd in zip(idx.tolist(), kinds.tolist()):
                out.append(cp[prev:i])
                if kd == 0:
                    out.append(alpha[rng.integers(0, len(alpha), 1)])
                elif kd == 1:
                    out.append(alpha[rng.integers(0, len(alpha), 1)])
                    out.append(cp[i:i + 1])
                prev = i + 1
            out.append(cp[prev:])
            cp = np.concatenate(out) if out else cp
        parts.append(cp)
    return np.concatenate(parts).tobytes()


@dataclass
class FuzzReport:
    lines: list[str] = field(default_factory=list)
    failures: int = 0
    checks: int = 0

    def add(self, ok: bool, case: str, detail: str = ""):
        self.checks += 1
        if not ok:
            self.failures += 1
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {case} {detail}".rstrip())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def text(self, only_failures: bool = False) -> str:
        lines = [ln for ln in self.lines if not only_failures or ln.startswith("FAIL")]
        return "\n".join(lines)


def fuzz_roundtrip(text_or_spec, n_patterns: int = 200, plen_range=(1, 20), seed: int = 0,
                   index=None, n_extracts: int | None = None) -> FuzzReport:
    """Compare locate and extract with the naive oracles.

    Half of the patterns are cut from the text, half are random over its
    alphabet. ``index`` may be passed to test an already built (or loaded)
    index against ``text``.
    """
    from .index_build import build_index

    text = gen_corpus(text_or_spec) if isinstance(text_or_spec, CorpusSpec) else bytes(text_or_spec)
    ix = index if index is not None else build_index(text)
    rep = FuzzReport()
    if ix.n != len(text):
        rep.add(False, "length", f"index n={ix.n} text n={len(text)}")
        return rep
    rng = np.random.default_rng(seed)
    alpha = sorted(set(text)) or [0]
    lo, hi = plen_range
    for k in range(n_patterns):
        m = int(rng.integers(lo, hi + 1))
        if k % 2 == 0 and m <= len(text):
            p = int(rng.integers(0, len(text) - m + 1))
            pat = text[p:p + m]
        else:
            pat = bytes(int(alpha[i]) for i in rng.integers(0, len(alpha), m))
        got = ix.locate(pat)
        exp = naive_locate(text, pat)
        rep.add(got == exp, f"locate#{k}", f"m={m} occ={len(exp)} got={len(got)}")
    for k in range(n_patterns if n_extracts is None else n_extracts):
        ln = int(rng.integers(0, min(len(text), 100) + 1))
        p = int(rng.integers(0, len(text) - ln + 1))
        ok = ix.extract(p, ln) == text[p:p + ln]
        rep.add(ok, f"extract#{k}", f"p={p} len={ln}")
    return rep
