"""Unsupervised premise/conclusion segmentation of scientific abstracts.

Abstracts are treated as cycles of sentences; the engine enumerates the
constrained conclusion windows, scores corpus-wide assignments by the
normalized mutual information between the premise and conclusion spaces, and
fixes segmentations greedily. Baselines, evaluation metrics and
information-theoretic analyses are included.
"""

from .corpus import (
    CorpusStats,
    RawAbstract,
    TokenizedAbstract,
    build_corpus,
    corpus_stats,
    load_corpus,
    load_stopwords,
    preprocess_sentence,
    split_sentences,
)
from .cycle import (
    CandidateSegmentation,
    SegmentationAssignment,
    apply_segmentation,
    boundary_labeling,
    conclusion_indices_from_labeling,
    conclusion_set_from_labeling,
    enumerate_candidates,
)
from .errors import ContractError, DegenerateSpaceError, ParseError, ValidationError
from .greedy import (
    GreedyConfig,
    SimilarityProvider,
    build_tfidf_provider,
    greedy_base,
    greedy_nn,
    nn_search,
)
from .information import (
    CountTable,
    NmiReport,
    build_counts,
    counts_from_segments,
    entropy,
    joint_prob,
    marginal_prob,
    mutual_information,
    nmi,
    top_contributing_pairs,
    word_boundary_sweep,
)
from .metrics import (
    HypothesisSegmentation,
    MetricReport,
    evaluate_run,
    jaccard,
    pearson,
    pk,
    rouge_mean,
    wilcoxon_signed_rank,
    window_diff,
)

__version__ = "0.1.0"
