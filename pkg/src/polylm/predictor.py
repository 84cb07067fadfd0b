"""Greedy prediction over a boundary-marked symbol model.

Candidate generation asks the model for the next-symbol distribution
over the last ``context_window`` symbols, takes the top N symbols as
continuation points, and unrolls each greedily (always the single most
probable next symbol) until a boundary is produced: a boundary-flagged
character, the word separator, or end of sentence.  The N candidates
therefore always start with distinct symbols.  A hard ``max_unroll`` cap
bounds degenerate loops; capped candidates carry a ``truncated`` flag.

Two optional stopping variants exist: ``min_length`` ignores boundaries
until the candidate is long enough, and ``logprob_floor`` keeps
unrolling through boundaries until the candidate's cumulative log
probability falls below the floor.  Both are off by default.

The evaluation half replays a fixed script against the model: top-N
recall is the fraction of unit starts where the true next unit was
offered, and keystroke savings counts one touch per accepted prediction
against typing the unit out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import Corpus
from .ngram import EOS
from .tokenization import WORD_SEP, SegmenterFn, Symbol, mark_boundaries, symbol_to_text

__all__ = ["PredictorConfig", "Candidate", "SavingsReport", "predict", "keystroke_savings", "top_n_recall"]


@dataclass(frozen=True)
class PredictorConfig:
    context_window: int = 30
    n_candidates: int = 3
    max_unroll: int = 40
    min_length: int | None = None
    logprob_floor: float | None = None

    def __post_init__(self):
        if self.context_window < 1 or self.n_candidates < 1 or self.max_unroll < 1:
            raise ValueError("context_window, n_candidates, max_unroll must be >= 1")


@dataclass(frozen=True)
class Candidate:
    symbols: tuple[Symbol, ...]
    cumulative_logprob: float
    truncated: bool = False

    def display_text(self) -> str:
        """The candidate without boundary markup, as shown to a user."""
        return "".join(" " if s == WORD_SEP else s.char for s in self.symbols)


def _is_boundary(sym: Symbol) -> bool:
    return sym.boundary or sym == WORD_SEP or sym == EOS


def _ranked(dist: dict[Symbol, float]) -> list[tuple[Symbol, float]]:
    # Probability descending, serialized symbol as the total tie-break.
    return sorted(dist.items(), key=lambda kv: (-kv[1], symbol_to_text(kv[0])))


def predict(lm, context, cfg: PredictorConfig) -> list[Candidate]:
    """Generate up to N prediction candidates for a symbol context."""
    context = list(context)
    if not getattr(lm, "vocab", None):
        raise ValueError("model has an empty vocabulary")
    window = cfg.context_window
    first = _ranked(lm.next_distribution(context[-window:]))[: cfg.n_candidates]
    candidates = []
    for sym, prob in first:
        text = [sym]
        logprob = math.log(prob)
        truncated = False
        tmp = (context + [sym])[-window:]
        while not _stop(text, logprob, cfg):
            if len(text) >= cfg.max_unroll:
                truncated = True
                break
            nxt, p = _ranked(lm.next_distribution(tmp))[0]
            text.append(nxt)
            logprob += math.log(p)
            tmp = (tmp + [nxt])[-window:]
        candidates.append(Candidate(tuple(text), logprob, truncated))
    return candidates


def _stop(text, logprob: float, cfg: PredictorConfig) -> bool:
    if cfg.logprob_floor is not None:
        return logprob < cfg.logprob_floor
    if not _is_boundary(text[-1]):
        return False
    if cfg.min_length is not None and len(text) < cfg.min_length:
        return False
    return True


@dataclass(frozen=True)
class SavingsReport:
    keystrokes_typed: int
    keystrokes_saved: int

    @property
    def savings_ratio(self) -> float:
        total = self.keystrokes_typed + self.keystrokes_saved
        return self.keystrokes_saved / total if total else 0.0


def _script_streams(script: Corpus, segmenter: SegmenterFn) -> list[list[Symbol]]:
    return [mark_boundaries([segmenter(w) for w in sent]) for sent in script.sentences]


def _pending_unit(stream, pos: int) -> tuple[Symbol, ...]:
    """Symbols from pos through the next boundary symbol, inclusive."""
    unit = []
    for sym in stream[pos:]:
        unit.append(sym)
        if _is_boundary(sym):
            break
    return tuple(unit)


def keystroke_savings(lm, script: Corpus, segmenter: SegmenterFn, cfg: PredictorConfig) -> SavingsReport:
    """Simulate typing the script with the prediction strip available.

    At every position the remaining symbols of the current unit are
    compared against the candidates; a match costs one touch instead of
    typing them out, anything else types one symbol and moves on.
    """
    typed = 0
    saved = 0
    for stream in _script_streams(script, segmenter):
        pos = 0
        while pos < len(stream):
            pending = _pending_unit(stream, pos)
            offered = {c.symbols for c in predict(lm, stream[:pos], cfg)}
            typed += 1
            if pending in offered:
                saved += len(pending) - 1
                pos += len(pending)
            else:
                pos += 1
    return SavingsReport(typed, saved)


def top_n_recall(lm, script: Corpus, segmenter: SegmenterFn, cfg: PredictorConfig) -> float:
    """Fraction of unit starts where the true next unit was offered."""
    hits = 0
    total = 0
    for stream in _script_streams(script, segmenter):
        starts = [0] + [
            i + 1
            for i, sym in enumerate(stream[:-1])
            if _is_boundary(sym) and stream[i + 1] != WORD_SEP
        ]
        for pos in starts:
            if stream[pos] == WORD_SEP:
                continue
            unit = _pending_unit(stream, pos)
            total += 1
            offered = {c.symbols for c in predict(lm, stream[:pos], cfg)}
            if unit in offered:
                hits += 1
    return hits / total if total else 0.0
