import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gindex import build_index
from gindex.extract import (expand_column_prefix, expand_prefix, expand_suffix, extract,
                            first_terminal, new_counter)
from gindex.grammar import preprocess, repair_compress
from gindex.oracle import CorpusSpec, gen_corpus

from helpers import expand_all, grammar_tree_oracle


def test_extract_examples(e1):
    assert extract(e1, 0, 4) == b"abab"
    assert extract(e1, 1, 2) == b"ba"
    assert extract(e1, 3, 1) == b"b"
    assert extract(e1, 2, 0) == b""


@pytest.mark.parametrize("p,ln", [(-1, 1), (0, 5), (4, 1), (2, -1)])
def test_extract_range_errors(e1, p, ln):
    with pytest.raises(IndexError):
        extract(e1, p, ln)


def test_extract_unknown_method(e1):
    with pytest.raises(ValueError):
        extract(e1, 0, 1, method="scan")


def test_expand_examples(e1, e1_trie):
    for ix in (e1, e1_trie):
        assert expand_prefix(ix, 3, 1) == b"a"
        assert expand_prefix(ix, 4, 3) == b"aba"
        assert expand_prefix(ix, 1, 5) == b"a"
        assert expand_suffix(ix, 3, 1) == b"b"
        assert expand_suffix(ix, 4, 2) == b"ab"
        assert expand_suffix(ix, 4, 4) == b"abab"
        assert expand_column_prefix(ix, 5, 2) == b"ab"
        assert expand_column_prefix(ix, 4, 1) == b"b"
        assert expand_column_prefix(ix, 4, 0) == b""


def test_first_terminal(e1, e1_trie):
    assert first_terminal(e1_trie, 3) == ord("a")
    assert first_terminal(e1_trie, 4) == ord("a")
    assert first_terminal(e1_trie, 2) == ord("b")
    with pytest.raises(ValueError):
        first_terminal(e1, 3)


def test_expand_errors(e1):
    with pytest.raises(ValueError):
        expand_prefix(e1, 0, 1)
    with pytest.raises(ValueError):
        expand_suffix(e1, 5, 1)
    with pytest.raises(ValueError):
        expand_prefix(e1, 1, -1)
    with pytest.raises(ValueError):
        expand_column_prefix(e1, 3, 1)     # first child, not a grid label
    with pytest.raises(ValueError):
        expand_prefix(e1, 3, 1, use_trie=True)


CORPORA = [
    CorpusSpec(base_len=200, copies=8, mutation_rate=0.01, seed=1),
    CorpusSpec(base_len=500, copies=5, mutation_rate=0.0, seed=2),
    CorpusSpec(base_len=100, copies=20, mutation_rate=0.05, alphabet=b"ab", seed=3, indels=True),
    CorpusSpec(base_len=60, copies=4, mutation_rate=0.0, alphabet=b"a", seed=4),
]


@pytest.fixture(scope="module", params=CORPORA, ids=lambda s: s.label())
def built(request):
    text = gen_corpus(request.param)
    pg = preprocess(repair_compress(text), text)
    return text, pg, build_index(text, with_trie=True)


def test_extract_against_plaintext(built):
    text, _, ix = built
    rng = random.Random(0)
    assert extract(ix, 0, len(text)) == text
    for _ in range(300):
        ln = rng.choice([0, 1, 2, 10, 100, 333])
        ln = min(ln, len(text))
        p = rng.randint(0, len(text) - ln)
        want = text[p:p + ln]
        assert extract(ix, p, ln, method="rank") == want
        assert extract(ix, p, ln, method="children") == want


def test_expansions_against_oracle(built):
    text, pg, ix = built
    exp = expand_all(pg)
    plain = ix.with_options(with_trie=False)
    h = ix.height
    for x in range(1, pg.g + 1):
        f = exp[x - 1]
        for ln in sorted({0, 1, 2, 7, len(f) // 2, len(f), len(f) + 3}):
            for use in (plain, ix):
                ctr = new_counter()
                assert expand_prefix(use, x, ln, counter=ctr) == f[:ln]
                assert ctr[0] <= 4 * (ln + h)
                assert expand_suffix(use, x, ln) == f[max(0, len(f) - ln):]
        if ix.has_trie:
            assert first_terminal(ix, x) == f[0]


def test_column_prefix_against_oracle(built):
    _, pg, ix = built
    _, points = grammar_tree_oracle(pg)
    plain = ix.with_options(with_trie=False)
    for _, label, suffix in points:
        for ln in (1, 3, len(suffix), len(suffix) + 5):
            want = suffix[:ln]
            assert expand_column_prefix(plain, label, ln) == want
            assert expand_column_prefix(ix, label, ln) == want


@given(st.binary(min_size=1, max_size=200), st.data())
def test_extract_property(text, data):
    ix = build_index(text)
    p = data.draw(st.integers(0, len(text)))
    ln = data.draw(st.integers(0, len(text) - p))
    assert extract(ix, p, ln) == text[p:p + ln]
    assert extract(ix, p, ln, method="children") == text[p:p + ln]
