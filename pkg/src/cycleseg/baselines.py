"""Unsupervised segmentation baselines.

All baselines emit two-boundary labelings comparable to the cycled
candidates: any method that natively yields a single linear split gets an
additional boundary at the final sentence (the patch rule), and lexical
topic-shift detection is capped at its two deepest boundaries.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .corpus import TokenizedAbstract
from .cycle import CandidateSegmentation, enumerate_candidates
from .errors import ContractError, ValidationError


@dataclass(frozen=True)
class TextTilingParams:
    block_size: int = 2
    smoothing_width: int = 1
    depth_cutoff_multiplier: float = 0.5

    def __post_init__(self):
        if self.block_size < 1:
            raise ValidationError("block_size must be >= 1")
        if self.smoothing_width < 0:
            raise ValidationError("smoothing_width must be >= 0")


def random_base(a: TokenizedAbstract, rng: random.Random) -> str:
    """Boundaries after two uniformly chosen distinct sentences."""
    if a.n < 2:
        raise ValidationError("need at least 2 sentences")
    picks = rng.sample(range(a.n), 2)
    bits = ["0"] * a.n
    for p in picks:
        bits[p] = "1"
    return "".join(bits)


def random_plus(a: TokenizedAbstract, rng: random.Random) -> CandidateSegmentation:
    """A uniform draw from the cycled candidate set."""
    cands = enumerate_candidates(a.n, a.id)
    return cands[rng.randrange(len(cands))]


def _block_vectors(a: TokenizedAbstract, gap: int, block_size: int) -> tuple[dict, dict]:
    left: dict[str, int] = {}
    for i in range(max(0, gap - block_size + 1), gap + 1):
        for t in a.sentences[i]:
            left[t] = left.get(t, 0) + 1
    right: dict[str, int] = {}
    for i in range(gap + 1, min(a.n, gap + 1 + block_size)):
        for t in a.sentences[i]:
            right[t] = right.get(t, 0) + 1
    return left, right


def _cosine_counts(u: dict, v: dict) -> float:
    nu = math.sqrt(sum(x * x for x in u.values()))
    nv = math.sqrt(sum(x * x for x in v.values()))
    if nu == 0 or nv == 0:
        return 0.0
    dot = sum(c * v[t] for t, c in u.items() if t in v)
    return dot / (nu * nv)


def gap_depth_scores(a: TokenizedAbstract, p: TextTilingParams) -> list[float]:
    """Smoothed lexical depth score per inter-sentence gap (gap g sits after sentence g)."""
    gaps = a.n - 1
    sims = []
    for g in range(gaps):
        left, right = _block_vectors(a, g, p.block_size)
        sims.append(_cosine_counts(left, right))
    if p.smoothing_width > 0:
        w = p.smoothing_width
        sims = [
            sum(sims[max(0, g - w) : g + w + 1]) / len(sims[max(0, g - w) : g + w + 1])
            for g in range(gaps)
        ]
    depths = []
    for g in range(gaps):
        lpeak = sims[g]
        for l in range(g - 1, -1, -1):
            if sims[l] >= lpeak:
                lpeak = sims[l]
            else:
                break
        rpeak = sims[g]
        for r in range(g + 1, gaps):
            if sims[r] >= rpeak:
                rpeak = sims[r]
            else:
                break
        depth = (lpeak - sims[g]) + (rpeak - sims[g])
        # cosine rounding noise must not register as a lexical depth signal
        depths.append(depth if depth > 1e-12 else 0.0)
    return depths


def texttiling(a: TokenizedAbstract, p: TextTilingParams | None = None) -> str:
    """Lexical-cohesion topic-shift segmentation, patched to two boundaries.

    Gaps whose depth exceeds mean - multiplier * stddev become boundaries;
    more than two are reduced to the two deepest, exactly one gains the
    end-of-abstract boundary, and none falls back to the deepest gap plus the
    end boundary. Deterministic (no RNG).
    """
    if a.n < 2:
        raise ValidationError("need at least 2 sentences")
    if p is None:
        p = TextTilingParams()
    depths = gap_depth_scores(a, p)
    arr = np.asarray(depths)
    cutoff = float(arr.mean() - p.depth_cutoff_multiplier * arr.std())
    chosen = [g for g, d in enumerate(depths) if d > cutoff]
    if len(chosen) > 2:
        chosen = sorted(sorted(chosen, key=lambda g: (-depths[g], g))[:2])
    if len(chosen) == 1:
        chosen.append(a.n - 1)
    elif not chosen:
        fallback = min(range(len(depths)), key=lambda g: (-depths[g], g))
        chosen = [fallback, a.n - 1]
    bits = ["0"] * a.n
    for g in chosen:
        bits[g] = "1"
    return "".join(bits)


def embed_sim_baseline(a: TokenizedAbstract, sentence_vecs: Mapping[int, np.ndarray]) -> str:
    """Linear split maximizing cosine similarity between the two segments.

    Segment vectors are means of their member sentence vectors; the winning
    split's boundary is emitted together with the end boundary per the patch
    rule. Ties go to the earliest split.
    """
    if a.n < 2:
        raise ValidationError("need at least 2 sentences")
    missing = [i for i in range(a.n) if i not in sentence_vecs]
    if missing:
        raise ContractError(f"abstract {a.id!r} lacks sentence vectors for {missing}")
    mat = np.stack([np.asarray(sentence_vecs[i], dtype=float) for i in range(a.n)])
    best_i = 1
    best_cos = -math.inf
    for i in range(1, a.n):
        u = mat[:i].mean(axis=0)
        v = mat[i:].mean(axis=0)
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        cos = float(np.dot(u, v) / (nu * nv)) if nu > 0 and nv > 0 else 0.0
        if cos > best_cos:
            best_cos, best_i = cos, i
    bits = ["0"] * a.n
    bits[best_i - 1] = "1"
    bits[a.n - 1] = "1"
    return "".join(bits)
