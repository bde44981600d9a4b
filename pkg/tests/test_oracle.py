import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gindex import build_index
from gindex.grammar import repair_compress
from gindex.oracle import (CorpusSpec, FuzzReport, fuzz_roundtrip, gen_corpus, naive_locate,
                           naive_locate_windowed)

from helpers import naive_scan


@pytest.mark.parametrize("text,pat,want", [
    (b"abab", b"ab", [0, 2]),
    (b"aaaa", b"aa", [0, 1, 2]),
    (b"abab", b"ba", [1]),
    (b"abab", b"abc", []),
    (b"ab", b"abc", []),
])
def test_naive_locate_examples(text, pat, want):
    assert naive_locate(text, pat) == want
    assert naive_locate_windowed(text, pat) == want


def test_naive_locate_empty_pattern():
    with pytest.raises(ValueError):
        naive_locate(b"abc", b"")
    with pytest.raises(ValueError):
        naive_locate_windowed(b"abc", b"")


def test_scanners_agree_exhaustively():
    # every text up to length 7 and pattern up to length 3 over {a, b}
    for n in range(0, 8):
        for t in itertools.product(b"ab", repeat=n):
            text = bytes(t)
            for m in range(1, 4):
                for p in itertools.product(b"ab", repeat=m):
                    pat = bytes(p)
                    want = naive_scan(text, pat)
                    assert naive_locate(text, pat) == want
                    assert naive_locate_windowed(text, pat) == want


@given(st.binary(max_size=200), st.binary(min_size=1, max_size=5))
def test_scanners_agree_property(text, pat):
    assert naive_locate(text, pat) == naive_locate_windowed(text, pat) == naive_scan(text, pat)


def test_gen_corpus_shape_and_determinism():
    spec = CorpusSpec(base_len=100, copies=7, mutation_rate=0.1, seed=3)
    t = gen_corpus(spec)
    assert len(t) == 700
    assert set(t) <= set(b"ACGT")
    assert gen_corpus(spec) == t
    assert gen_corpus(CorpusSpec(base_len=100, copies=7, mutation_rate=0.1, seed=4)) != t


def test_gen_corpus_single_copy_is_base():
    t = gen_corpus(CorpusSpec(base_len=50, copies=1, mutation_rate=0.5, seed=1))
    assert len(t) == 50
    assert t == gen_corpus(CorpusSpec(base_len=50, copies=3, mutation_rate=0.5, seed=1))[:50]


def test_gen_corpus_zero_mutation_repeats_and_compresses():
    t = gen_corpus(CorpusSpec(base_len=1000, copies=20, mutation_rate=0.0, seed=2))
    assert t == t[:1000] * 20
    assert repair_compress(t).size < len(t) / 10


def test_gen_corpus_indels_change_length():
    t = gen_corpus(CorpusSpec(base_len=500, copies=10, mutation_rate=0.05, seed=2, indels=True))
    assert len(t) != 5000


@pytest.mark.parametrize("bad", [
    CorpusSpec(alphabet=b""), CorpusSpec(base_len=0), CorpusSpec(copies=0),
    CorpusSpec(mutation_rate=1.5),
])
def test_gen_corpus_rejects(bad):
    with pytest.raises(ValueError):
        gen_corpus(bad)


def test_fuzz_default_spec_passes():
    rep = fuzz_roundtrip(CorpusSpec(), n_patterns=200)
    assert rep.ok, rep.text(only_failures=True)
    assert rep.checks == 400
    assert all(ln.startswith("PASS ") for ln in rep.lines)


def test_fuzz_sigma_one():
    rep = fuzz_roundtrip(CorpusSpec(base_len=50, copies=4, alphabet=b"x"), n_patterns=100)
    assert rep.ok, rep.text(only_failures=True)


def test_fuzz_patterns_longer_than_text():
    rep = fuzz_roundtrip(b"abcab", n_patterns=30, plen_range=(6, 9))
    assert rep.ok


def test_fuzz_detects_a_wrong_index():
    text = b"abcabcabd"
    wrong = build_index(b"abcabcabc")
    rep = fuzz_roundtrip(text, n_patterns=60, index=wrong)
    assert not rep.ok
    assert any(ln.startswith("FAIL ") for ln in rep.lines)


def test_fuzz_length_mismatch():
    rep = fuzz_roundtrip(b"abcd", index=build_index(b"abc"))
    assert not rep.ok and rep.lines[0].startswith("FAIL length")


def test_report_text():
    r = FuzzReport()
    r.add(True, "a")
    r.add(False, "b", "why")
    assert r.text() == "PASS a\nFAIL b why"
    assert r.text(only_failures=True) == "FAIL b why"
    assert (r.checks, r.failures, r.ok) == (2, 1, False)
