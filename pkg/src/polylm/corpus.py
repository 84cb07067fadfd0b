"""Corpus loading and descriptive statistics.

The two metrics of interest are the type-token ratio (TTR) and the mean
distance to the next novel type (MDN): the average number of already-seen
tokens encountered between first occurrences of new types.  Both are
cheap to compute and give a quick picture of how sparse a corpus is.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

__all__ = [
    "Corpus",
    "StatsReport",
    "load_corpus",
    "type_token_ratio",
    "mean_distance_to_novel",
    "corpus_summary",
]


@dataclass(frozen=True)
class Corpus:
    """Sentence-segmented, whitespace-tokenized text.

    ``sentences`` is a list of sentences, each a list of word tokens.
    Tokens never contain whitespace; sentences and tokens are non-empty.
    """

    sentences: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for sent in self.sentences:
            if not sent:
                raise ValueError("corpus contains an empty sentence")
            for tok in sent:
                if not tok:
                    raise ValueError("corpus contains an empty token")
                if any(ch.isspace() for ch in tok):
                    raise ValueError(f"token contains whitespace: {tok!r}")

    @classmethod
    def from_sentences(cls, sentences) -> "Corpus":
        return cls(tuple(tuple(s) for s in sentences))

    def tokens(self) -> list[str]:
        """All tokens in corpus order, flattened."""
        return [tok for sent in self.sentences for tok in sent]

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class StatsReport:
    sentences: int
    tokens: int
    types: int
    ttr: float
    mdn: float


def load_corpus(path) -> Corpus:
    """Read a one-sentence-per-line UTF-8 file.

    Tokens are split on runs of whitespace and NFC-normalized so that
    visually identical forms count as one type.  Blank lines are skipped.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ValueError(
            f"{path}: not valid UTF-8 (bad byte at offset {e.start})"
        ) from e
    sentences = []
    for line in text.splitlines():
        toks = line.split()
        if toks:
            sentences.append(tuple(unicodedata.normalize("NFC", t) for t in toks))
    return Corpus(tuple(sentences))


def type_token_ratio(tokens) -> float:
    """|unique tokens| / |tokens| for a non-empty token sequence."""
    tokens = list(tokens)
    if not tokens:
        raise ValueError("type_token_ratio of an empty sequence")
    return len(set(tokens)) / len(tokens)


def mean_distance_to_novel(tokens) -> float:
    """Mean run of already-seen tokens between first occurrences of new types.

    Walks the sequence with a seen-type set.  Each time a novel token
    appears, the count of consecutively seen tokens since the previous
    novel one is recorded and the counter resets.  Tokens trailing the
    last novel type are discarded.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("mean_distance_to_novel of an empty sequence")
    seen = set()
    distances = []
    run = 0
    for tok in tokens:
        if tok in seen:
            run += 1
        else:
            distances.append(run)
            run = 0
            seen.add(tok)
    return sum(distances) / len(distances)


def corpus_summary(corpus: Corpus) -> StatsReport:
    """Aggregate sentence/token/type counts, TTR and MDN over a corpus."""
    if not corpus.sentences:
        raise ValueError("corpus_summary of an empty corpus")
    tokens = corpus.tokens()
    return StatsReport(
        sentences=len(corpus.sentences),
        tokens=len(tokens),
        types=len(set(tokens)),
        ttr=type_token_ratio(tokens),
        mdn=mean_distance_to_novel(tokens),
    )
