"""Subword language modelling toolkit for morphologically complex languages.

Segmentation pipelines (character, BPE, weighted analysis lexicons),
a Witten-Bell symbol n-gram model with tokenization-independent
perplexity accounting, tensor product representations of morpheme
structure with an unbinding loss and autoencoder, and a greedy
morpheme-level predictive-text engine with CLI and HTTP frontends.
"""

from .corpus import Corpus, StatsReport, corpus_summary, load_corpus, mean_distance_to_novel, type_token_ratio
from .tokenization import (
    EOS,
    UNK,
    WORD_SEP,
    MergeTable,
    Segmentation,
    Symbol,
    bpe_apply,
    bpe_learn,
    char_segment,
    join,
    mark_boundaries,
    segment_with_lexicon,
)
from .analyses import Analysis, AnalysisLexicon, Morpheme, boundary_penalty, select_analysis, supervised_weights
from .ngram import EvalReport, SymbolLM, UniformLM, evaluate, train
from .predictor import Candidate, PredictorConfig, keystroke_savings, predict, top_n_recall
from .tpr import (
    FillerVocab,
    MorphemeStructure,
    RoleSpace,
    TprTensor,
    bind,
    bind_hierarchical,
    make_role_space,
    morpheme_tpr,
    nearest_filler,
    similarity_vector,
    unbind,
    unbinding_log_probs,
    unbinding_loss,
)
from .autoencoder import AutoencoderParams, decode, encode, gradient_check, train_autoencoder

__version__ = "0.1.0"
