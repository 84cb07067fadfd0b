"""Comparing language models across tokenizations, fairly.

A perplexity per prediction event is incomparable between segmentations
(character models take many easy steps; unit models few hard ones).
Dividing each model's total loss by the character count of the same
test text puts them on one scale, and by the word count on another.
"""

import random

from polylm.analyses import AnalysisLexicon, parse_analysis
from polylm.corpus import Corpus
from polylm.ngram import evaluate, train
from polylm.tokenization import (
    char_segment,
    mark_boundaries,
    segment_with_lexicon,
    unit_symbols,
)

rng = random.Random(7)

### Build a corpus from templated morphology so held-out text stays
### in-distribution.
roots = ["negh", "qikmi", "yug", "aghna"]
infl = ["tuq", "uq", "et", "haak", "llru"]
words = [r + s for r in roots for s in infl]
sentences = [[rng.choice(words) for _ in range(5)] for _ in range(150)]
train_corpus = Corpus.from_sentences(sentences[:130])
test_corpus = Corpus.from_sentences(sentences[130:])

### The lexicon knows every root+inflection split.
lexicon = AnalysisLexicon()
for r in roots:
    for s in infl:
        lexicon.add(r + s, parse_analysis(f"{r}<root>+{s}<infl>", f"{r}>{s}"))

def lexicon_segment(w):
    return segment_with_lexicon(w, lexicon, backoff="char")

configs = [
    ("character", char_segment, mark_boundaries, "chars", 5),
    ("morpheme", lexicon_segment, unit_symbols, "units", 3),
]
print(f"{'model':<12}{'events':>8}{'chars':>7}{'token ppl':>11}{'char ppl':>10}{'word ppl':>11}")
for name, segmenter, symbolize, counting, order in configs:
    streams = [symbolize([segmenter(w) for w in sent]) for sent in train_corpus.sentences]
    lm = train(streams, order=order)
    r = evaluate(lm, test_corpus, segmenter, counting=counting)
    print(
        f"{name:<12}{r.token_count:>8}{r.char_count:>7}"
        f"{r.token_ppl:>11.3f}{r.char_ppl:>10.3f}{r.word_ppl:>11.3f}"
    )

print()
print("Per-event perplexities are not comparable: the morpheme model takes")
print("far fewer, harder steps per sentence.  Both rows share the chars")
print("column, so the char-level perplexities compare directly.")
