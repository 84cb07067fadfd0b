import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polylm.corpus import (
    Corpus,
    corpus_summary,
    load_corpus,
    mean_distance_to_novel,
    type_token_ratio,
)

token_seqs = st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=200)


def ttr_oracle(tokens):
    return len(set(tokens)) / len(tokens)


def mdn_oracle(tokens):
    # Independent formulation: gaps between consecutive first-occurrence
    # indices, not a counter walk.
    first = []
    seen = set()
    for i, t in enumerate(tokens):
        if t not in seen:
            seen.add(t)
            first.append(i)
    gaps = [0] + [b - a - 1 for a, b in zip(first, first[1:])]
    return sum(gaps) / len(gaps)


class TestLoadCorpus:
    def test_whitespace_splitting(self, tmp_path):
        p = tmp_path / "c.txt"
        p.write_text("a b\n\nc", encoding="utf-8")
        assert load_corpus(p).sentences == (("a", "b"), ("c",))

    def test_empty_file(self, tmp_path):
        p = tmp_path / "c.txt"
        p.write_text("", encoding="utf-8")
        assert load_corpus(p).sentences == ()

    def test_single_token(self, tmp_path):
        p = tmp_path / "c.txt"
        p.write_text("x", encoding="utf-8")
        assert load_corpus(p).sentences == (("x",),)

    def test_bad_utf8_names_offset(self, tmp_path):
        p = tmp_path / "c.txt"
        p.write_bytes(b"ok \xff bad")
        with pytest.raises(ValueError, match="offset 3"):
            load_corpus(p)

    def test_nfc_normalization_merges_variants(self, tmp_path):
        p = tmp_path / "c.txt"
        # "ñ" precomposed vs combining tilde; both normalize to one type.
        p.write_text("ñe ñe", encoding="utf-8")
        c = load_corpus(p)
        assert type_token_ratio(c.tokens()) == 0.5

    def test_invariants_rejected(self):
        with pytest.raises(ValueError):
            Corpus((("a", ""),))
        with pytest.raises(ValueError):
            Corpus(((),))


class TestTypeTokenRatio:
    def test_examples(self):
        assert type_token_ratio(["a", "b", "a", "c"]) == 0.75
        assert type_token_ratio(["a", "a", "a", "a"]) == 0.25
        assert type_token_ratio(["a", "b", "c"]) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            type_token_ratio([])

    @given(token_seqs)
    def test_matches_oracle(self, tokens):
        assert type_token_ratio(tokens) == ttr_oracle(tokens)

    @given(token_seqs, st.integers(min_value=2, max_value=5))
    def test_duplication_divides_ttr(self, tokens, k):
        assert type_token_ratio(tokens * k) == pytest.approx(type_token_ratio(tokens) / k)

    @given(token_seqs, st.randoms())
    def test_permutation_invariant(self, tokens, rnd):
        shuffled = list(tokens)
        rnd.shuffle(shuffled)
        assert type_token_ratio(shuffled) == type_token_ratio(tokens)


class TestMeanDistanceToNovel:
    def test_examples(self):
        assert mean_distance_to_novel(["a", "b", "a", "c"]) == pytest.approx(1 / 3)
        assert mean_distance_to_novel(["a", "b", "c"]) == 0.0
        assert mean_distance_to_novel(["a", "a", "a", "b"]) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_distance_to_novel([])

    @given(token_seqs)
    def test_matches_oracle(self, tokens):
        assert mean_distance_to_novel(tokens) == mdn_oracle(tokens)

    @given(token_seqs)
    def test_all_novel_gives_zero(self, tokens):
        distinct = list(dict.fromkeys(tokens))
        assert mean_distance_to_novel(distinct) == 0.0

    def test_trailing_run_discarded(self):
        # Seen tokens after the last novel type do not count.
        assert mean_distance_to_novel(["a", "b", "b", "b"]) == 0.0


class TestCorpusSummary:
    def test_composition(self):
        r = corpus_summary(Corpus.from_sentences([["a", "b"], ["a", "c"]]))
        assert (r.sentences, r.tokens, r.types) == (2, 4, 3)
        assert r.ttr == 0.75
        assert r.mdn == pytest.approx(1 / 3)

    def test_singleton(self):
        r = corpus_summary(Corpus.from_sentences([["x"]]))
        assert (r.sentences, r.tokens, r.types, r.ttr, r.mdn) == (1, 1, 1, 1.0, 0.0)

    def test_heavy_duplication(self):
        r = corpus_summary(Corpus.from_sentences([["a"]] * 1000))
        assert r.ttr == pytest.approx(0.001)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            corpus_summary(Corpus(()))

    @given(st.lists(token_seqs, min_size=1, max_size=8))
    def test_token_count_is_sum_of_lengths(self, sents):
        c = Corpus.from_sentences(sents)
        assert corpus_summary(c).tokens == sum(len(s) for s in sents)
        assert math.isclose(
            corpus_summary(c).ttr, corpus_summary(c).types / corpus_summary(c).tokens
        )
