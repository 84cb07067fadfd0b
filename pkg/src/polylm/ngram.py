"""Backoff n-gram language model over boundary-marked symbols.

The model interpolates maximum-likelihood estimates with lower orders
using Witten-Bell weights:

    P(w | ctx) = (c(ctx, w) + T(ctx) * P(w | ctx')) / (c(ctx) + T(ctx))

where ``ctx'`` drops the oldest symbol and ``T(ctx)`` counts distinct
continuations of ``ctx``.  At the bottom, unigrams interpolate with a
uniform distribution over the vocabulary (which always includes the
end-of-sentence symbol and a reserved unknown symbol), so every
probability is strictly positive and every distribution sums to one.
Contexts never observed at some order fall through to the next lower
order unchanged.

Perplexity accounting
---------------------
Perplexities over differently-tokenized versions of the same text are
not comparable: longer units mean fewer, harder prediction events.  All
evaluation therefore reports, from one total negative log-likelihood:

* ``token_ppl``  = exp(total_nll / prediction events), the conventional figure;
* ``char_ppl``   = exp(total_nll / character count), where the character
  count includes one slot per word separator and one end-of-sentence
  symbol per sentence (separators and sentence ends count as typed
  symbols, exactly as they count as prediction events);
* ``word_ppl``   = exp(total_nll / (words + sentence ends)).

``char_ppl`` and ``word_ppl`` use denominators that depend only on the
raw test text, never on the segmentation, so two models over different
tokenizations of the same text can be compared directly.  Note the total
loss is divided by the character count once; it is *not* additionally
rescaled by the event count.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field

from .corpus import Corpus
from .tokenization import (
    EOS,
    UNK,
    SegmenterFn,
    Symbol,
    mark_boundaries,
    symbol_to_text,
    text_to_symbol,
    unit_symbols,
)

__all__ = ["SymbolLM", "UniformLM", "EvalReport", "train", "evaluate", "save_lm", "load_lm"]


@dataclass
class SymbolLM:
    """Trained n-gram model; immutable after construction."""

    order: int
    vocab: frozenset[Symbol]
    # counts[k] maps a length-k context tuple to {symbol: count}.
    counts: dict[int, dict[tuple[Symbol, ...], dict[Symbol, int]]]
    # context_totals[k][ctx] = sum of counts; continuations[k][ctx] = distinct symbols.
    context_totals: dict[int, dict[tuple[Symbol, ...], int]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.context_totals:
            self.context_totals = {
                k: {ctx: sum(row.values()) for ctx, row in table.items()}
                for k, table in self.counts.items()
            }

    def _lookup(self, symbol: Symbol) -> Symbol:
        return symbol if symbol in self.vocab else UNK

    def _prob(self, symbol: Symbol, context: tuple[Symbol, ...]) -> float:
        if context:
            table = self.counts[len(context)]
            row = table.get(context)
            if row is None:
                return self._prob(symbol, context[1:])
            total = self.context_totals[len(context)][context]
            distinct = len(row)
            return (row.get(symbol, 0) + distinct * self._prob(symbol, context[1:])) / (
                total + distinct
            )
        row = self.counts[0][()]
        total = self.context_totals[0][()]
        distinct = len(row)
        uniform = 1.0 / len(self.vocab)
        return (row.get(symbol, 0) + distinct * uniform) / (total + distinct)

    def _truncate(self, context) -> tuple[Symbol, ...]:
        if self.order == 1:
            return ()
        tail = list(context)[-(self.order - 1):]
        return tuple(self._lookup(s) for s in tail)

    def probability(self, symbol: Symbol, context) -> float:
        """P(symbol | context); the context is truncated to order-1 symbols."""
        return self._prob(self._lookup(symbol), self._truncate(context))

    def next_distribution(self, context) -> dict[Symbol, float]:
        """Full next-symbol distribution given a (possibly empty) context."""
        ctx = self._truncate(context)
        return {sym: self._prob(sym, ctx) for sym in self.vocab}

    def sequence_nll(self, stream) -> float:
        """-sum(log P) in nats over the stream plus end-of-sentence."""
        nll = 0.0
        history: deque[Symbol] = deque(maxlen=max(1, self.order - 1))
        for sym in list(stream) + [EOS]:
            nll -= math.log(self._prob(self._lookup(sym), self._truncate(history)))
            history.append(sym)
        return nll

    def count_oov(self, stream) -> int:
        return sum(1 for s in stream if s not in self.vocab)


def train(streams, order: int) -> SymbolLM:
    """Estimate count tables of every order <= ``order`` from symbol streams.

    An end-of-sentence symbol is appended to each stream.  The vocabulary
    is the observed symbols plus the reserved unknown symbol.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    streams = [list(s) for s in streams]
    if not streams or all(len(s) == 0 for s in streams):
        raise ValueError("no training data")
    counts: dict[int, dict[tuple[Symbol, ...], dict[Symbol, int]]] = {
        k: {} for k in range(order)
    }
    vocab = {EOS, UNK}
    for stream in streams:
        symbols = list(stream) + [EOS]
        vocab.update(symbols)
        for i, sym in enumerate(symbols):
            for k in range(min(i, order - 1) + 1):
                ctx = tuple(symbols[i - k:i])
                row = counts[k].setdefault(ctx, {})
                row[sym] = row.get(sym, 0) + 1
    return SymbolLM(order=order, vocab=frozenset(vocab), counts=counts)


@dataclass(frozen=True)
class UniformLM:
    """Reference model assigning 1/|vocab| to every event."""

    vocab: frozenset[Symbol]

    def probability(self, symbol, context) -> float:
        return 1.0 / len(self.vocab)

    def next_distribution(self, context) -> dict[Symbol, float]:
        p = 1.0 / len(self.vocab)
        return {sym: p for sym in self.vocab}

    def sequence_nll(self, stream) -> float:
        return (len(list(stream)) + 1) * math.log(len(self.vocab))

    def count_oov(self, stream) -> int:
        return sum(1 for s in stream if s not in self.vocab)


@dataclass(frozen=True)
class EvalReport:
    total_nll: float
    token_count: int
    char_count: int
    word_count: int
    token_ppl: float
    char_ppl: float
    word_ppl: float
    oov_count: int = 0

    def as_tsv(self) -> str:
        cols = [
            f"{self.total_nll:.6f}",
            str(self.token_count),
            str(self.char_count),
            str(self.word_count),
            f"{self.token_ppl:.6f}",
            f"{self.char_ppl:.6f}",
            f"{self.word_ppl:.6f}",
        ]
        return "\t".join(cols)


def evaluate(lm, test: Corpus, segmenter: SegmenterFn, counting: str = "chars") -> EvalReport:
    """Score a test corpus under a model and report all three perplexities.

    ``counting`` selects the stream granularity the model was trained on:
    ``"chars"`` for boundary-marked characters (token count equals the
    character count by construction) or ``"units"`` for one symbol per
    subword unit (fewer, harder prediction events).  The character and
    word denominators are computed from the raw test text (characters +
    separators + sentence ends; words + sentence ends), so they are
    identical for every segmentation and granularity of that text.
    Symbols outside the model's vocabulary are counted and scored through
    the unknown-symbol floor rather than rejected.
    """
    if counting not in ("chars", "units"):
        raise ValueError(f"unknown counting mode {counting!r}")
    symbolize = mark_boundaries if counting == "chars" else unit_symbols
    total_nll = 0.0
    token_count = 0
    char_count = 0
    word_count = 0
    oov = 0
    for sent in test.sentences:
        stream = symbolize([segmenter(w) for w in sent])
        total_nll += lm.sequence_nll(stream)
        token_count += len(stream) + 1
        char_count += sum(len(w) for w in sent) + (len(sent) - 1) + 1
        word_count += len(sent) + 1
        oov += lm.count_oov(stream)
    return EvalReport(
        total_nll=total_nll,
        token_count=token_count,
        char_count=char_count,
        word_count=word_count,
        token_ppl=math.exp(total_nll / token_count),
        char_ppl=math.exp(total_nll / char_count),
        word_ppl=math.exp(total_nll / word_count),
        oov_count=oov,
    )


# --- persistence ---------------------------------------------------------

_FORMAT = "polylm-symbol-lm"
_VERSION = 1


def save_lm(lm: SymbolLM, path, segmenter_config: dict | None = None) -> None:
    """Write a model (and optionally its segmenter pipeline) as JSON."""
    doc = {
        "format": _FORMAT,
        "version": _VERSION,
        "order": lm.order,
        "vocab": sorted(symbol_to_text(s) for s in lm.vocab),
        "counts": {
            str(k): {
                " ".join(symbol_to_text(s) for s in ctx): {
                    symbol_to_text(sym): n for sym, n in row.items()
                }
                for ctx, row in table.items()
            }
            for k, table in lm.counts.items()
        },
    }
    if segmenter_config is not None:
        doc["segmenter"] = segmenter_config
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False)


def load_lm(path) -> tuple[SymbolLM, dict | None]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != _FORMAT:
        raise ValueError(f"{path}: not a symbol LM file")
    if doc.get("version") != _VERSION:
        raise ValueError(f"{path}: unsupported version {doc.get('version')}")
    counts = {
        int(k): {
            tuple(text_to_symbol(t) for t in ctx.split()): {
                text_to_symbol(sym): n for sym, n in row.items()
            }
            for ctx, row in table.items()
        }
        for k, table in doc["counts"].items()
    }
    lm = SymbolLM(
        order=doc["order"],
        vocab=frozenset(text_to_symbol(t) for t in doc["vocab"]),
        counts=counts,
    )
    return lm, doc.get("segmenter")
