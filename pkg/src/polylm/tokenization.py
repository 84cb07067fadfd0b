"""Segmentation strategies and the boundary-marked symbol stream.

Three segmenters are provided, all emitting :class:`Segmentation` objects
whose units concatenate back to the original word:

* character segmentation (one unit per Unicode scalar),
* learned byte-pair encoding (greedy most-frequent-pair merges),
* lexicon segmentation from precomputed morphological analyses, with a
  character or BPE backoff for unknown words.

Segmented sentences are flattened into a stream of symbols where the
final character of every subword unit carries a boundary flag (rendered
``x@`` in text form) and words are joined by a separator symbol
(rendered ``_``).  A character model trained on such a stream can tell
when it has finished a morpheme, which is what makes morpheme-level
prediction possible from a character vocabulary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .corpus import Corpus

__all__ = [
    "Segmentation",
    "Symbol",
    "WORD_SEP",
    "EOS",
    "UNK",
    "MergeTable",
    "char_segment",
    "bpe_learn",
    "bpe_apply",
    "segment_with_lexicon",
    "mark_boundaries",
    "unit_symbols",
    "join",
    "symbol_to_text",
    "text_to_symbol",
    "stream_to_text",
    "text_to_stream",
    "write_symbol_file",
    "read_symbol_file",
    "format_merge",
    "write_merge_file",
    "read_merge_file",
    "format_segmented",
    "parse_segmented",
]

# Internal end-of-word sentinel used while learning/applying merges.  It
# never appears in Segmentation units, vocab entries, or merge files
# (files render it as the conventional </w>).
_EOW = "\x00"
_EOW_TEXT = "</w>"


class Symbol(NamedTuple):
    """One stream symbol: its text plus a unit-final boundary flag.

    Fine-grained streams hold one character per symbol; coarse streams
    (see :func:`unit_symbols`) hold one subword unit per symbol.
    """

    char: str
    boundary: bool = False


# Distinguished symbols.  Tokens never contain whitespace, so a space and
# a newline cannot collide with real characters.
WORD_SEP = Symbol(" ", False)
EOS = Symbol("\n", False)
UNK = Symbol("", False)


@dataclass(frozen=True)
class Segmentation:
    """An ordered split of one word into non-empty subword units."""

    units: tuple[str, ...]

    def __post_init__(self):
        if not self.units or any(not u for u in self.units):
            raise ValueError("segmentation units must be non-empty")

    @property
    def joined(self) -> str:
        return "".join(self.units)


def join(seg: Segmentation) -> str:
    """Concatenate units back into the original word."""
    return seg.joined


def char_segment(word: str) -> Segmentation:
    """One unit per Unicode scalar value."""
    if not word:
        raise ValueError("cannot segment an empty word")
    return Segmentation(tuple(word))


@dataclass(frozen=True)
class MergeTable:
    """Ordered BPE merges plus the subword vocabulary they induce."""

    merges: tuple[tuple[str, str], ...]
    vocab: frozenset[str] = field(default_factory=frozenset)


def _apply_merge(seq: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    # Merge non-overlapping occurrences left to right.
    left, right = pair
    out = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and seq[i] == left and seq[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return tuple(out)


def _pair_counts(words: dict[tuple[str, ...], int]) -> Counter:
    counts = Counter()
    for seq, freq in words.items():
        for i in range(len(seq) - 1):
            counts[(seq[i], seq[i + 1])] += freq
    return counts


def bpe_learn(corpus: Corpus, num_merges: int) -> MergeTable:
    """Learn a merge table by greedy byte-pair encoding.

    Each word starts as its character sequence plus an end-of-word
    sentinel.  The most frequent adjacent pair (weighted by word count,
    ties broken lexicographically) is merged until ``num_merges`` merges
    are recorded or no pair occurs at least twice.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be >= 0")
    word_freqs = Counter(corpus.tokens())
    if not word_freqs:
        raise ValueError("cannot learn BPE from an empty corpus")
    words = {tuple(w) + (_EOW,): f for w, f in word_freqs.items()}
    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        counts = _pair_counts(words)
        if not counts:
            break
        top = max(counts.values())
        if top < 2:
            break
        # Deterministic tie-break: lexicographically smallest (left, right).
        best = min(p for p, c in counts.items() if c == top)
        merges.append(best)
        words = {_apply_merge(seq, best): f for seq, f in words.items()}
    vocab = set()
    for seq in words:
        vocab.update(_strip_eow(seq))
    return MergeTable(tuple(merges), frozenset(vocab))


def _strip_eow(seq: Iterable[str]) -> list[str]:
    units = []
    for sym in seq:
        if sym == _EOW:
            continue
        units.append(sym[:-1] if sym.endswith(_EOW) else sym)
    return units


def bpe_apply(word: str, table: MergeTable) -> Segmentation:
    """Replay learned merges, in order, on a character-split word."""
    if not word:
        raise ValueError("cannot segment an empty word")
    seq = tuple(word) + (_EOW,)
    for pair in table.merges:
        seq = _apply_merge(seq, pair)
    return Segmentation(tuple(_strip_eow(seq)))


def segment_with_lexicon(
    word: str,
    lexicon,
    backoff: str = "char",
    table: MergeTable | None = None,
    policy: str = "min_weight",
) -> Segmentation:
    """Segment via the lexicon's best analysis, else fall back.

    ``backoff`` is ``"char"`` or ``"bpe"``; BPE backoff needs ``table``.
    """
    if backoff not in ("char", "bpe"):
        raise ValueError(f"unknown backoff {backoff!r}")
    if backoff == "bpe" and table is None:
        raise ValueError("bpe backoff requires a merge table")
    if not word:
        raise ValueError("cannot segment an empty word")
    from .analyses import select_analysis

    try:
        analysis = select_analysis(word, lexicon, policy=policy)
    except KeyError:
        if backoff == "char":
            return char_segment(word)
        return bpe_apply(word, table)
    return Segmentation(tuple(m.surface for m in analysis.morphemes))


def mark_boundaries(segmented_sentence: list[Segmentation]) -> list[Symbol]:
    """Flatten segmented words into one boundary-marked symbol stream.

    The final character of each unit carries the boundary flag; words are
    joined by the separator symbol.  The stream holds exactly
    (total characters + word count - 1) symbols.
    """
    stream: list[Symbol] = []
    for w, seg in enumerate(segmented_sentence):
        if w > 0:
            stream.append(WORD_SEP)
        for unit in seg.units:
            for i, ch in enumerate(unit):
                stream.append(Symbol(ch, i == len(unit) - 1))
    return stream


def unit_symbols(segmented_sentence: list[Segmentation]) -> list[Symbol]:
    """One symbol per whole subword unit, words joined by the separator.

    The coarse-grained counterpart of :func:`mark_boundaries` for models
    that predict a unit at a time; every unit symbol is unit-final, so
    all carry the boundary flag.
    """
    stream: list[Symbol] = []
    for w, seg in enumerate(segmented_sentence):
        if w > 0:
            stream.append(WORD_SEP)
        stream.extend(Symbol(unit, True) for unit in seg.units)
    return stream


# --- text renderings ---------------------------------------------------
#
# Boundary-marked symbol files hold one symbol per whitespace-separated
# token: unit-final characters get an '@' suffix, the word separator is
# '_', end of sentence '</s>'.

def symbol_to_text(sym: Symbol) -> str:
    if sym == WORD_SEP:
        return "_"
    if sym == EOS:
        return "</s>"
    if sym == UNK:
        return "<unk>"
    return sym.char + "@" if sym.boundary else sym.char


def text_to_symbol(text: str) -> Symbol:
    if text == "_":
        return WORD_SEP
    if text == "</s>":
        return EOS
    if text == "<unk>":
        return UNK
    if not text:
        raise ValueError("empty symbol token")
    if len(text) > 1 and text.endswith("@"):
        return Symbol(text[:-1], True)
    return Symbol(text, False)


def stream_to_text(stream: Iterable[Symbol]) -> str:
    return " ".join(symbol_to_text(s) for s in stream)


def text_to_stream(text: str) -> list[Symbol]:
    return [text_to_symbol(t) for t in text.split()]


def write_symbol_file(streams: Iterable[Iterable[Symbol]], path) -> None:
    """One boundary-marked symbol stream per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for stream in streams:
            fh.write(stream_to_text(stream) + "\n")


def read_symbol_file(path) -> list[list[Symbol]]:
    with open(path, encoding="utf-8") as fh:
        return [text_to_stream(line) for line in fh if line.strip()]


def format_merge(pair: tuple[str, str]) -> str:
    """Render one merge as two space-separated symbols (end of word as </w>)."""
    return f"{_render_merge_symbol(pair[0])} {_render_merge_symbol(pair[1])}"


def write_merge_file(table: MergeTable, path) -> None:
    """One merge per line, two space-separated symbols, learned order."""
    with open(path, "w", encoding="utf-8") as fh:
        for pair in table.merges:
            fh.write(format_merge(pair) + "\n")


def read_merge_file(path) -> MergeTable:
    merges = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != 2:
                raise ValueError(f"malformed merge line: {line!r}")
            merges.append((_parse_merge_symbol(parts[0]), _parse_merge_symbol(parts[1])))
    return MergeTable(tuple(merges))


def _render_merge_symbol(sym: str) -> str:
    return sym.replace(_EOW, _EOW_TEXT)


def _parse_merge_symbol(text: str) -> str:
    return text.replace(_EOW_TEXT, _EOW)


def format_segmented(segmented_sentence: list[Segmentation]) -> str:
    """Render a sentence with '@@ ' joining subwords inside a word."""
    return " ".join("@@ ".join(seg.units) for seg in segmented_sentence)


def parse_segmented(line: str) -> list[Segmentation]:
    words: list[list[str]] = []
    open_word = False
    for tok in line.split():
        cont = tok.endswith("@@")
        unit = tok[:-2] if cont else tok
        if open_word:
            words[-1].append(unit)
        else:
            words.append([unit])
        open_word = cont
    return [Segmentation(tuple(u)) for u in words]


SegmenterFn = Callable[[str], Segmentation]


def segment_corpus(corpus: Corpus, segmenter: SegmenterFn) -> list[list[Segmentation]]:
    """Apply a word segmenter to every sentence of a corpus."""
    return [[segmenter(w) for w in sent] for sent in corpus.sentences]
