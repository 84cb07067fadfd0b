"""Weighted morphological analysis lexicons.

An analysis lexicon maps surface wordforms to candidate analyses, each a
sequence of morphemes with optional lemmas and feature tags.  Weights
are costs: lower is better.  Every candidate starts at cost 1; observing
a (wordform, analysis) pair in a disambiguated corpus lowers its cost to
1 - count(analysis, wordform) / count(wordform), and a heuristic of +1
per morpheme boundary pushes multi-morpheme readings below lexicalized
alternatives only when nothing cheaper exists.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

__all__ = [
    "Morpheme",
    "Analysis",
    "AnalysisLexicon",
    "supervised_weights",
    "bpe_unit_weights",
    "boundary_penalty",
    "select_analysis",
    "read_lexicon",
    "write_lexicon",
]


@dataclass(frozen=True)
class Morpheme:
    surface: str
    lemma: str | None = None
    tags: tuple[str, ...] = ()

    def spelled(self) -> str:
        """Render as lemma plus angle-bracket tags, e.g. ``ho<v><iv>``."""
        base = self.lemma if self.lemma is not None else self.surface
        return base + "".join(f"<{t}>" for t in self.tags)


@dataclass(frozen=True)
class Analysis:
    morphemes: tuple[Morpheme, ...]
    weight: float = 1.0

    def __post_init__(self):
        if not self.morphemes:
            raise ValueError("analysis needs at least one morpheme")

    def spelled(self) -> str:
        """The '+'-joined analysis string, e.g. ``re<prn><p2>+ho<v>``."""
        return "+".join(m.spelled() for m in self.morphemes)

    def surface_segmentation(self) -> str:
        return ">".join(m.surface for m in self.morphemes)

    def surface(self) -> str:
        return "".join(m.surface for m in self.morphemes)


@dataclass
class AnalysisLexicon:
    """Map from wordform to its candidate analyses."""

    entries: dict[str, list[Analysis]] = field(default_factory=dict)

    def add(self, wordform: str, analysis: Analysis) -> None:
        self.entries.setdefault(wordform, []).append(analysis)

    def __contains__(self, wordform: str) -> bool:
        return wordform in self.entries

    def __getitem__(self, wordform: str) -> list[Analysis]:
        return self.entries[wordform]


def boundary_penalty(analysis: Analysis) -> int:
    """Cost increment of one per morpheme boundary."""
    return len(analysis.morphemes) - 1


def supervised_weights(annotated, lexicon: AnalysisLexicon) -> AnalysisLexicon:
    """Reweight a lexicon from a disambiguated (wordform, analysis) corpus.

    Pairs never observed keep weight 1; observed pairs get
    1 - count(a, w) / count(w), so anything attested costs strictly less
    than an unseen alternative for the same wordform.  Annotations whose
    analysis string is missing from the lexicon are logged and skipped.
    """
    word_counts: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    for wordform, spelled in annotated:
        word_counts[wordform] = word_counts.get(wordform, 0) + 1
        pair_counts[(wordform, spelled)] = pair_counts.get((wordform, spelled), 0) + 1
        known = {a.spelled() for a in lexicon.entries.get(wordform, [])}
        if spelled not in known:
            logger.warning(
                "annotated analysis %r for %r not in lexicon (coverage gap)",
                spelled,
                wordform,
            )
    out = AnalysisLexicon()
    for wordform, candidates in lexicon.entries.items():
        total = word_counts.get(wordform, 0)
        for a in candidates:
            seen = pair_counts.get((wordform, a.spelled()), 0)
            weight = 1.0 - seen / total if total and seen else 1.0
            out.add(wordform, Analysis(a.morphemes, weight))
    return out


def bpe_unit_weights(lexicon: AnalysisLexicon, table) -> AnalysisLexicon:
    """Unsupervised stand-in weighting: cost = BPE unit count.

    Scores each analysis by the number of BPE units its morpheme
    surfaces split into under a learned merge table, preferring
    candidates the data treats as lexicalized chunks.  This is an
    extension with no published recipe behind it; it is never applied
    unless explicitly requested.
    """
    from .tokenization import bpe_apply

    out = AnalysisLexicon()
    for wordform, candidates in lexicon.entries.items():
        for a in candidates:
            units = sum(len(bpe_apply(m.surface, table).units) for m in a.morphemes)
            out.add(wordform, Analysis(a.morphemes, float(units)))
    return out


def select_analysis(
    wordform: str, lexicon: AnalysisLexicon, policy: str = "min_weight"
) -> Analysis:
    """Pick one analysis for a wordform.

    ``min_weight`` minimizes weight + boundary penalty; ``shortest``
    minimizes morpheme count.  Ties break on the spelled analysis string,
    so selection is total.  Raises ``KeyError`` for unknown wordforms,
    which is the caller's cue to back off to another segmenter.
    """
    if wordform not in lexicon:
        raise KeyError(wordform)
    candidates = lexicon[wordform]
    if policy == "min_weight":
        key = lambda a: (a.weight + boundary_penalty(a), a.spelled())
    elif policy == "shortest":
        key = lambda a: (len(a.morphemes), a.spelled())
    else:
        raise ValueError(f"unknown policy {policy!r}")
    return min(candidates, key=key)


# --- lexicon files -------------------------------------------------------
#
# TSV columns: wordform, analysis string ('+'-joined morphemes with
# angle-bracket tags), surface segmentation ('>'-joined), optional weight.

def parse_analysis(spelled: str, segmentation: str, weight: float = 1.0) -> Analysis:
    surfaces = segmentation.split(">")
    parts = spelled.split("+")
    if len(parts) != len(surfaces):
        raise ValueError(
            f"analysis {spelled!r} and segmentation {segmentation!r} disagree on morpheme count"
        )
    morphemes = []
    for part, surf in zip(parts, surfaces):
        if "<" in part:
            lemma, _, rest = part.partition("<")
            tags = tuple(t.rstrip(">") for t in ("<" + rest).split("<") if t)
        else:
            lemma, tags = part, ()
        morphemes.append(Morpheme(surface=surf, lemma=lemma or None, tags=tags))
    return Analysis(tuple(morphemes), weight)


def read_lexicon(path) -> AnalysisLexicon:
    lex = AnalysisLexicon()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) not in (3, 4):
                raise ValueError(f"{path}:{lineno}: expected 3 or 4 columns")
            weight = float(cols[3]) if len(cols) == 4 else 1.0
            lex.add(cols[0], parse_analysis(cols[1], cols[2], weight))
    return lex


def write_lexicon(lexicon: AnalysisLexicon, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for wordform, candidates in lexicon.entries.items():
            for a in candidates:
                fh.write(
                    f"{wordform}\t{a.spelled()}\t{a.surface_segmentation()}\t{a.weight:g}\n"
                )
