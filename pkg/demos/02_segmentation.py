"""Three ways to split a word: characters, learned merges, or a lexicon.

The same words go through each segmenter.  BPE discovers frequent
chunks with no linguistic knowledge; an analysis lexicon applies real
morpheme boundaries and falls back to BPE or characters for words it
does not know.
"""

from polylm.analyses import AnalysisLexicon, parse_analysis
from polylm.corpus import Corpus
from polylm.tokenization import (
    bpe_apply,
    bpe_learn,
    char_segment,
    format_merge,
    format_segmented,
    segment_with_lexicon,
)

### Training text for BPE: morphologically related forms of two roots.
training = Corpus.from_sentences(
    [
        ["neghtuq", "neghllruuq", "neghyugtuq"],
        ["qikmigh", "qikmighhaak", "qikmighet"],
        ["neghtuq", "qikmighhaak", "neghtuq"],
    ]
)

table = bpe_learn(training, num_merges=12)
print("learned merges, in order (</w> marks end of word):")
for i, merge in enumerate(table.merges, 1):
    print(f"  {i:2d}. {format_merge(merge)}")

### A small analysis lexicon with genuine morpheme boundaries.
lexicon = AnalysisLexicon()
lexicon.add("neghtuq", parse_analysis("negh<v>+tuq<ind.3sg>", "negh>tuq"))
lexicon.add("qikmighhaak", parse_analysis("qikmigh<n>+haak<du>", "qikmigh>haak"))

words = ["neghtuq", "qikmighhaak", "neghyugtuq"]
print()
for w in words:
    print(f"{w}:")
    print(f"  characters  {format_segmented([char_segment(w)])}")
    print(f"  bpe         {format_segmented([bpe_apply(w, table)])}")
    seg = segment_with_lexicon(w, lexicon, backoff="bpe", table=table)
    print(f"  lexicon     {format_segmented([seg])}")

print()
print("Known words get their true morpheme split; the unknown form falls")
print("back to BPE chunks, which often (but not always) land near real")
print("boundaries when the training data supports them.")
