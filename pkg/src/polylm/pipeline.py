"""Glue between raw text, segmenter configurations, and saved models.

A segmenter configuration is a small JSON-able dict that fully
determines a word segmenter, with any merge table or lexicon embedded
inline so a saved model file is self-contained:

    {"mode": "char"}
    {"mode": "bpe", "merges": [["a", "b"], ...]}
    {"mode": "lexicon", "entries": [[wordform, analysis, segmentation, weight], ...],
     "backoff": "char" | "bpe", "policy": "min_weight", "merges": [...]}
"""

from __future__ import annotations

from .analyses import AnalysisLexicon, parse_analysis
from .ngram import SymbolLM, load_lm
from .tokenization import (
    WORD_SEP,
    MergeTable,
    SegmenterFn,
    Symbol,
    bpe_apply,
    char_segment,
    mark_boundaries,
    segment_with_lexicon,
)

__all__ = ["build_segmenter", "segmenter_config_for", "preprocess_context", "load_model"]


def segmenter_config_for(
    mode: str,
    table: MergeTable | None = None,
    lexicon: AnalysisLexicon | None = None,
    backoff: str = "char",
    policy: str = "min_weight",
) -> dict:
    """Assemble the inline configuration dict for a segmenter."""
    if mode == "char":
        return {"mode": "char"}
    if mode == "bpe":
        if table is None:
            raise ValueError("bpe mode requires a merge table")
        return {"mode": "bpe", "merges": [list(m) for m in table.merges]}
    if mode == "lexicon":
        if lexicon is None:
            raise ValueError("lexicon mode requires a lexicon")
        entries = [
            [w, a.spelled(), a.surface_segmentation(), a.weight]
            for w, cands in lexicon.entries.items()
            for a in cands
        ]
        cfg = {"mode": "lexicon", "entries": entries, "backoff": backoff, "policy": policy}
        if backoff == "bpe":
            if table is None:
                raise ValueError("bpe backoff requires a merge table")
            cfg["merges"] = [list(m) for m in table.merges]
        return cfg
    raise ValueError(f"unknown segmenter mode {mode!r}")


def build_segmenter(config: dict) -> SegmenterFn:
    """Turn a configuration dict back into a word segmenter."""
    mode = config.get("mode")
    if mode == "char":
        return char_segment
    if mode == "bpe":
        table = MergeTable(tuple(tuple(m) for m in config["merges"]))
        return lambda w: bpe_apply(w, table)
    if mode == "lexicon":
        lexicon = AnalysisLexicon()
        for row in config["entries"]:
            w, spelled, seg = row[0], row[1], row[2]
            weight = float(row[3]) if len(row) > 3 else 1.0
            lexicon.add(w, parse_analysis(spelled, seg, weight))
        backoff = config.get("backoff", "char")
        policy = config.get("policy", "min_weight")
        table = None
        if backoff == "bpe":
            table = MergeTable(tuple(tuple(m) for m in config["merges"]))
        return lambda w: segment_with_lexicon(w, lexicon, backoff, table, policy)
    raise ValueError(f"unknown segmenter mode {mode!r}")


def preprocess_context(text: str, segmenter: SegmenterFn) -> list[Symbol]:
    """Turn a raw typed buffer into the model's symbol stream.

    Boundary markers never appear in user input, so literal '@' is
    dropped defensively.  Complete words are segmented and boundary
    marked; the trailing word is treated as unfinished (its final symbol
    keeps no boundary flag) unless the buffer ends in whitespace, in
    which case a word separator closes the stream.
    """
    text = text.replace("@", "")
    words = text.split()
    if not words:
        return []
    if text[-1].isspace():
        return mark_boundaries([segmenter(w) for w in words]) + [WORD_SEP]
    stream: list[Symbol] = []
    if words[:-1]:
        stream = mark_boundaries([segmenter(w) for w in words[:-1]]) + [WORD_SEP]
    partial = mark_boundaries([segmenter(words[-1])])
    partial[-1] = Symbol(partial[-1].char, False)
    return stream + partial


def load_model(path) -> tuple[SymbolLM, SegmenterFn, dict]:
    """Load a saved model plus the segmenter it was trained with."""
    lm, config = load_lm(path)
    if config is None:
        config = {"mode": "char"}
    return lm, build_segmenter(config), config
