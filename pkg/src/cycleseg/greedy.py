"""Greedy NMI-maximizing segmentation, plain and nearest-neighbor-batched.

The base algorithm visits the batch in seeded-random order and fixes one
abstract at a time: over a configured number of epochs, the not-yet-fixed
abstracts are given random candidate segmentations (one shared draw per
epoch), already-fixed abstracts keep their commitments, and each of the
current abstract's candidates is scored by the NMI of the induced
premise/conclusion spaces. The best-scoring candidate across all epochs is
fixed (ties go to the lowest config_rank).

The NN variant splits the corpus into chunks, repeatedly draws a seed
abstract from the chunk's remaining pool, forms a batch from the seed and
its nearest pool-mates by embedding cosine similarity, and runs the base
algorithm per batch; batches partition the corpus so every abstract is
assigned exactly once.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import TokenizedAbstract
from .cycle import (
    CandidateSegmentation,
    SegmentationAssignment,
    apply_segmentation,
    enumerate_candidates,
)
from .errors import ContractError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyConfig:
    epochs: int = 5
    batch_size: int = 12
    chunk_size: int = 48
    rng_seed: int = 0
    similarity_backend: str = "lexical-tfidf"
    renormalize_joint: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")
        if not (2 <= self.batch_size <= self.chunk_size):
            raise ValidationError("require 2 <= batch_size <= chunk_size")


@dataclass(frozen=True)
class SimilarityProvider:
    """Dense per-abstract vectors backing cosine similarity."""

    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        dims = {v.shape for v in self.vectors.values()}
        if len(dims) > 1:
            raise ValidationError(f"inconsistent vector dimensions: {sorted(dims)}")
        for k, v in self.vectors.items():
            if not np.any(v):
                raise ValidationError(f"zero vector for abstract {k!r}")

    def cosine(self, a: str, b: str) -> float:
        u, v = self.vectors[a], self.vectors[b]
        return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def build_tfidf_provider(corpus: Sequence[TokenizedAbstract]) -> SimilarityProvider:
    """Term-frequency / inverse-document-frequency vectors over the corpus.

    Weight per (abstract, token) is tf * (ln((1+N)/(1+df)) + 1); vectors are
    L2-normalized. An abstract with no surviving tokens gets a uniform vector
    (with a warning) so downstream cosine similarity stays defined.
    """
    if not corpus:
        raise ValidationError("empty corpus")
    vocab = sorted({t for a in corpus for t in a.tokens()})
    index = {t: i for i, t in enumerate(vocab)}
    n_docs = len(corpus)
    df = np.zeros(len(vocab))
    token_sets = []
    for a in corpus:
        toks = a.tokens()
        token_sets.append(toks)
        for t in set(toks):
            df[index[t]] += 1
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
    vectors: dict[str, np.ndarray] = {}
    for a, toks in zip(corpus, token_sets):
        vec = np.zeros(max(len(vocab), 1))
        for t in toks:
            vec[index[t]] += 1.0
        vec = vec * idf if len(vocab) else vec
        norm = np.linalg.norm(vec)
        if norm == 0:
            logger.warning("abstract %s has no tokens; using a uniform similarity vector", a.id)
            vec = np.full(max(len(vocab), 1), 1.0)
            norm = np.linalg.norm(vec)
        vectors[a.id] = vec / norm
    return SimilarityProvider(vectors=vectors)


def nn_search(seed_id: str, pool: Sequence[str], b: int, provider: SimilarityProvider) -> list[str]:
    """The seed plus its b-1 most cosine-similar pool members.

    Ties break by lexicographic id. Asking for more than the pool holds
    returns the whole pool (seed first).
    """
    if seed_id not in pool:
        raise ContractError(f"seed {seed_id!r} not in pool")
    if b < 1:
        raise ValidationError("b must be >= 1")
    others = [p for p in pool if p != seed_id]
    ranked = sorted(others, key=lambda p: (-provider.cosine(seed_id, p), p))
    return [seed_id] + ranked[: max(0, b - 1)]


class _BatchScorer:
    """Vectorized NMI evaluation over a fixed batch of abstracts.

    Precomputes, per abstract and candidate, sparse premise/conclusion count
    vectors and the within-abstract pair-count block; scoring an assignment
    then reduces to array concatenation and a grouped sum. Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, batch: Sequence[TokenizedAbstract], renormalize_joint: bool = False):
        self.renormalize_joint = renormalize_joint
        vocab = sorted({t for a in batch for t in a.tokens()})
        self._index = {t: i for i, t in enumerate(vocab)}
        self._v = len(vocab)
        self.candidates: dict[str, list[CandidateSegmentation]] = {
            a.id: enumerate_candidates(a.n, a.id) for a in batch
        }
        self._parts: dict[tuple[str, int], tuple] = {}
        for a in batch:
            for c in self.candidates[a.id]:
                prem, concl = apply_segmentation(a, c)
                p_idx, p_cnt = self._sparse(prem)
                c_idx, c_cnt = self._sparse(concl)
                rows = np.repeat(p_idx, len(c_idx))
                cols = np.tile(c_idx, len(p_idx))
                vals = np.outer(p_cnt, c_cnt).ravel()
                self._parts[(a.id, c.config_rank)] = (
                    p_idx, p_cnt, c_idx, c_cnt, rows * self._v + cols, vals,
                    float(p_cnt.sum() * c_cnt.sum()),
                )

    def _sparse(self, tokens: list[str]) -> tuple[np.ndarray, np.ndarray]:
        counts: dict[int, int] = {}
        for t in tokens:
            i = self._index[t]
            counts[i] = counts.get(i, 0) + 1
        idx = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
        cnt = np.array([counts[i] for i in idx], dtype=float)
        return idx, cnt

    def score(self, choice: dict[str, int]) -> float:
        """NMI of the assignment {abstract_id: config_rank}; -inf if degenerate."""
        parts = [self._parts[(aid, rank)] for aid, rank in sorted(choice.items())]
        c_p = np.zeros(self._v)
        c_c = np.zeros(self._v)
        for p_idx, p_cnt, c_idx, c_cnt, _, _, _ in parts:
            np.add.at(c_p, p_idx, p_cnt)
            np.add.at(c_c, c_idx, c_cnt)
        t_p = c_p.sum()
        t_c = c_c.sum()
        if t_p <= 0 or t_c <= 0:
            return -math.inf
        denom = t_p * t_c
        keys = np.concatenate([p[4] for p in parts])
        vals = np.concatenate([p[5] for p in parts])
        uniq, inv = np.unique(keys, return_inverse=True)
        joint = np.bincount(inv, weights=vals)
        scale = 1.0
        if self.renormalize_joint:
            mass = sum(p[6] for p in parts) / denom
            if mass <= 0:
                return -math.inf
            scale = 1.0 / mass
        marg = c_p[uniq // self._v] * c_c[uniq % self._v]
        mi = float(np.sum((joint * scale / denom) * np.log2(joint * scale / marg)))
        h_p = self._entropy(c_p, t_p)
        h_c = self._entropy(c_c, t_c)
        normalizer = min(h_p, h_c)
        if normalizer <= 0:
            return -math.inf
        return mi / normalizer

    @staticmethod
    def _entropy(counts: np.ndarray, total: float) -> float:
        p = counts[counts > 0] / total
        return float(-np.sum(p * np.log2(p)))


def greedy_base(
    batch: Sequence[TokenizedAbstract],
    cfg: GreedyConfig,
) -> SegmentationAssignment:
    """Fix one best-NMI candidate per abstract, greedily (base algorithm).

    Seeds a fresh RNG from the config, so equal (batch, cfg) pairs always
    produce the same assignment, also when invoked per batch from the NN
    variant.
    """
    if not batch:
        raise ValidationError("empty batch")
    rng = random.Random(cfg.rng_seed)
    scorer = _BatchScorer(batch, cfg.renormalize_joint)
    order = list(range(len(batch)))
    rng.shuffle(order)
    n_by_id = {a.id: len(scorer.candidates[a.id]) for a in batch}
    fixed: dict[str, int] = {}
    scores: dict[str, float] = {}
    for pos in order:
        current = batch[pos]
        cands = scorer.candidates[current.id]
        best_rank: int | None = None
        best_score = -math.inf
        for _ in range(cfg.epochs):
            residual = {
                a.id: rng.randrange(n_by_id[a.id])
                for a in batch
                if a.id != current.id and a.id not in fixed
            }
            for cand in cands:
                choice = {**fixed, **residual, current.id: cand.config_rank}
                s = scorer.score(choice)
                if (
                    best_rank is None
                    or s > best_score
                    or (s == best_score and cand.config_rank < best_rank)
                ):
                    best_score, best_rank = s, cand.config_rank
        fixed[current.id] = best_rank
        scores[current.id] = best_score
    choices = {a.id: scorer.candidates[a.id][fixed[a.id]] for a in batch}
    return SegmentationAssignment(choices=choices, scores=scores)


def greedy_nn(
    corpus: Sequence[TokenizedAbstract],
    cfg: GreedyConfig,
    provider: SimilarityProvider,
) -> SegmentationAssignment:
    """Chunk the corpus, batch by nearest-neighbor search, segment per batch."""
    if not corpus:
        raise ValidationError("empty corpus")
    missing = [a.id for a in corpus if a.id not in provider.vectors]
    if missing:
        raise ValidationError(f"similarity provider missing abstracts: {missing[:5]}")
    if cfg.chunk_size > len(corpus):
        raise ValidationError(
            f"chunk_size {cfg.chunk_size} exceeds corpus size {len(corpus)}"
        )
    rng = random.Random(cfg.rng_seed)
    by_id = {a.id: a for a in corpus}
    choices: dict[str, CandidateSegmentation] = {}
    scores: dict[str, float] = {}
    for start in range(0, len(corpus), cfg.chunk_size):
        pool = [a.id for a in corpus[start : start + cfg.chunk_size]]
        while pool:
            seed_id = pool[rng.randrange(len(pool))]
            batch_ids = nn_search(seed_id, pool, min(cfg.batch_size, len(pool)), provider)
            taken = set(batch_ids)
            pool = [p for p in pool if p not in taken]
            sub = greedy_base([by_id[i] for i in batch_ids], cfg)
            choices.update(sub.choices)
            scores.update(sub.scores)
    return SegmentationAssignment(choices=choices, scores=scores)
