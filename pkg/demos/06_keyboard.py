"""The predictive keyboard pipeline, end to end.

A character model with morpheme boundaries marked on its symbols is
trained from lexicon-segmented text.  The greedy generator then offers
morpheme-sized completions while a fixed script is "typed", and the
replay metrics say how often the right suggestion was on the strip and
how many touches it saved.
"""

import random

from polylm.analyses import AnalysisLexicon, parse_analysis
from polylm.corpus import Corpus
from polylm.ngram import train
from polylm.pipeline import preprocess_context
from polylm.predictor import PredictorConfig, keystroke_savings, predict, top_n_recall
from polylm.tokenization import mark_boundaries, segment_with_lexicon

rng = random.Random(5)

### Vocabulary: roots times inflections, all known to the lexicon.
roots = ["negh", "qikmi", "aghna"]
infl = ["tuq", "uq", "haak", "llru"]
lexicon = AnalysisLexicon()
for r in roots:
    for s in infl:
        lexicon.add(r + s, parse_analysis(f"{r}<root>+{s}<infl>", f"{r}>{s}"))

def segmenter(w):
    return segment_with_lexicon(w, lexicon, backoff="char")

sentences = [[rng.choice(roots) + rng.choice(infl) for _ in range(4)] for _ in range(200)]
corpus = Corpus.from_sentences(sentences)
streams = [mark_boundaries([segmenter(w) for w in s]) for s in corpus.sentences]
lm = train(streams, order=5)
print(f"keyboard model: order 5 over {len(lm.vocab)} boundary-marked symbols")

### Type a word and watch the strip after every keystroke.
cfg = PredictorConfig(n_candidates=3)
buffer = ""
print()
print("typing 'neghtuq aghnahaak':")
for ch in "neghtuq a":
    buffer += ch
    stream = preprocess_context(buffer, segmenter)
    cands = predict(lm, stream, cfg)
    strip = "  |  ".join(f"{c.display_text()!r} ({c.cumulative_logprob:.2f})" for c in cands)
    print(f"  [{buffer:<10}] -> {strip}")

### Replay a held-out script for the headline metrics.
script = Corpus.from_sentences(
    [[rng.choice(roots) + rng.choice(infl) for _ in range(4)] for _ in range(10)]
)
recall = top_n_recall(lm, script, segmenter, cfg)
savings = keystroke_savings(lm, script, segmenter, cfg)
print()
print(f"top-{cfg.n_candidates} recall on the script: {recall:.3f}")
print(
    f"keystrokes: {savings.keystrokes_typed} typed, {savings.keystrokes_saved} saved "
    f"-> savings ratio {savings.savings_ratio:.3f}"
)
