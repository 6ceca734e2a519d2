"""Segmentation scoring against gold labels, plus the statistical tests.

Pk and WindowDiff slide a window of k sentences over the boundary labelings;
Jaccard compares conclusion index sets; the ROUGE score is the arithmetic
mean of unigram, bigram and LCS f-measures over preprocessed conclusion
tokens. Corpus-level values are unweighted means of per-abstract values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .corpus import TokenizedAbstract
from .cycle import (
    CandidateSegmentation,
    SegmentationAssignment,
    boundary_labeling,
    candidate_from_window,
    conclusion_indices_from_labeling,
)
from .errors import ContractError, DegenerateSpaceError, ValidationError
from .information import segments_from_gold


@dataclass(frozen=True)
class HypothesisSegmentation:
    """A scored hypothesis: its labeling plus the conclusion in reading order."""

    labeling: str
    conclusion_indices: tuple[int, ...]

    @classmethod
    def from_candidate(cls, c: CandidateSegmentation, n: int) -> "HypothesisSegmentation":
        return cls(boundary_labeling(c, n), tuple(c.conclusion_window))

    @classmethod
    def from_labeling(cls, bits: str) -> "HypothesisSegmentation":
        return cls(bits, conclusion_indices_from_labeling(bits))


@dataclass
class PerAbstractMetrics:
    id: str
    pk: float
    window_diff: float
    jaccard: float
    rouge_mean: float
    window_k: int


@dataclass
class MetricReport:
    pk: float
    window_diff: float
    jaccard: float
    rouge_mean: float
    window_k: int
    per_abstract: list[PerAbstractMetrics]

    def to_dict(self) -> dict:
        return {
            "pk": self.pk,
            "window_diff": self.window_diff,
            "jaccard": self.jaccard,
            "rouge_mean": self.rouge_mean,
            "window_k": self.window_k,
            "per_abstract": [vars(m) for m in self.per_abstract],
        }


def _check_labeling(bits: str) -> None:
    if not bits or any(b not in "01" for b in bits):
        raise ValidationError(f"not a 0/1 labeling: {bits!r}")


def _num_segments(bits: str) -> int:
    # a trailing 0 means the final linear segment has no marked end
    return bits.count("1") + (0 if bits.endswith("1") else 1)


def default_window_size(ref: str) -> int:
    """Half the mean reference segment length, at least 1."""
    segments = max(1, _num_segments(ref))
    return max(1, int(round(len(ref) / (2.0 * segments))))


def pk(ref: str, hyp: str, k: int | None = None) -> float:
    """Probability that a width-k probe disagrees on same-segment membership."""
    _check_labeling(ref)
    _check_labeling(hyp)
    if len(ref) != len(hyp):
        raise ContractError(f"labeling lengths differ: {len(ref)} != {len(hyp)}")
    if k is None:
        k = default_window_size(ref)
    n = len(ref)
    if k < 1 or k >= n:
        raise ValidationError(f"window size {k} invalid for length {n}")
    err = 0
    for i in range(n - k):
        same_ref = "1" not in ref[i : i + k]
        same_hyp = "1" not in hyp[i : i + k]
        if same_ref != same_hyp:
            err += 1
    return err / (n - k)


def window_diff(ref: str, hyp: str, k: int | None = None) -> float:
    """Fraction of width-k probes whose enclosed boundary counts differ."""
    _check_labeling(ref)
    _check_labeling(hyp)
    if len(ref) != len(hyp):
        raise ContractError(f"labeling lengths differ: {len(ref)} != {len(hyp)}")
    if k is None:
        k = default_window_size(ref)
    n = len(ref)
    if k < 1 or k >= n:
        raise ValidationError(f"window size {k} invalid for length {n}")
    err = 0
    for i in range(n - k):
        if ref[i : i + k].count("1") != hyp[i : i + k].count("1"):
            err += 1
    return err / (n - k)


def _ngram_f(hyp: Sequence[str], ref: Sequence[str], n: int) -> float:
    hyp_grams: dict[tuple, int] = {}
    for i in range(len(hyp) - n + 1):
        g = tuple(hyp[i : i + n])
        hyp_grams[g] = hyp_grams.get(g, 0) + 1
    ref_grams: dict[tuple, int] = {}
    for i in range(len(ref) - n + 1):
        g = tuple(ref[i : i + n])
        ref_grams[g] = ref_grams.get(g, 0) + 1
    if not hyp_grams or not ref_grams:
        return 0.0
    match = sum(min(c, ref_grams.get(g, 0)) for g, c in hyp_grams.items())
    prec = match / sum(hyp_grams.values())
    rec = match / sum(ref_grams.values())
    return 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0


def _lcs_len(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_mean(hyp_tokens: Sequence[str], ref_tokens: Sequence[str]) -> float:
    """Mean of unigram, bigram and LCS f-measures on token sequences."""
    if not ref_tokens:
        raise ValidationError("reference token sequence is empty")
    if not hyp_tokens:
        return 0.0
    f1 = _ngram_f(hyp_tokens, ref_tokens, 1)
    f2 = _ngram_f(hyp_tokens, ref_tokens, 2)
    lcs = _lcs_len(hyp_tokens, ref_tokens)
    p = lcs / len(hyp_tokens)
    r = lcs / len(ref_tokens)
    fl = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return (f1 + f2 + fl) / 3.0


def jaccard(hyp_indices: set[int] | frozenset[int], ref_indices: set[int] | frozenset[int]) -> float:
    """Intersection over union of conclusion sentence index sets."""
    if not ref_indices:
        raise ValidationError("reference index set is empty")
    union = set(hyp_indices) | set(ref_indices)
    inter = set(hyp_indices) & set(ref_indices)
    return len(inter) / len(union)


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson correlation with a two-sided t-distribution p-value."""
    if len(x) != len(y):
        raise ContractError("series lengths differ")
    if len(x) < 3:
        raise ValidationError("need at least 3 points")
    if np.var(x) == 0 or np.var(y) == 0:
        raise DegenerateSpaceError("zero variance series")
    r, p = stats.pearsonr(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(r), float(p)


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Signed-rank test with average ranks for ties and a normal-approximation
    two-sided p-value (tie-corrected variance, no continuity correction).

    Zero differences are dropped; the statistic is min(W+, W-).
    """
    if len(a) != len(b):
        raise ContractError("paired series lengths differ")
    d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    d = d[d != 0]
    if d.size == 0:
        raise DegenerateSpaceError("all paired differences are zero")
    if d.size < 6:
        raise ValidationError("need at least 6 nonzero differences")
    ranks = stats.rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    t = min(w_plus, w_minus)
    n = d.size
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if var <= 0:
        raise DegenerateSpaceError("zero variance in signed ranks")
    z = (t - mean) / np.sqrt(var)
    p = min(1.0, 2.0 * float(stats.norm.cdf(z)))
    return t, p


def gold_labeling(a: TokenizedAbstract) -> str:
    """Boundary labeling of an abstract's gold conclusion set.

    Gold sets forming a cyclic window that contains the final sentence use
    the two-boundary window convention; any other set is labeled by marking
    each maximal linear run's final sentence (the last sentence included).
    """
    if a.gold is None:
        raise ValidationError(f"abstract {a.id!r} has no gold labels")
    window = _as_cyclic_window(a.gold, a.n)
    if window is not None:
        bits = ["0"] * a.n
        bits[window[-1]] = "1"
        bits[(window[0] - 1) % a.n] = "1"
        return "".join(bits)
    bits = ["0"] * a.n
    for i in range(a.n - 1):
        if (i in a.gold) != ((i + 1) in a.gold):
            bits[i] = "1"
    bits[a.n - 1] = "1"
    return "".join(bits)


def _as_cyclic_window(indices: frozenset[int], n: int) -> tuple[int, ...] | None:
    """The cyclic reading order of a contiguous window containing n-1, else None."""
    if not indices or len(indices) >= n or (n - 1) not in indices:
        return None
    start = n - 1
    while (start - 1) % n in indices:
        start = (start - 1) % n
        if start == n - 1:  # full circle
            return None
    window = tuple((start + i) % n for i in range(len(indices)))
    return window if set(window) == set(indices) else None


def gold_conclusion_tokens(a: TokenizedAbstract) -> list[str]:
    """Gold conclusion token stream, in window reading order when applicable."""
    return segments_from_gold(a)[1]


def _normalize_hypothesis(
    hyp, n_by_id: Mapping[str, int]
) -> dict[str, HypothesisSegmentation]:
    if isinstance(hyp, SegmentationAssignment):
        items = hyp.choices.items()
    else:
        items = hyp.items()
    out: dict[str, HypothesisSegmentation] = {}
    for aid, value in items:
        if isinstance(value, HypothesisSegmentation):
            out[aid] = value
        elif isinstance(value, CandidateSegmentation):
            out[aid] = HypothesisSegmentation.from_candidate(value, n_by_id[aid])
        elif isinstance(value, str):
            out[aid] = HypothesisSegmentation.from_labeling(value)
        else:
            raise ContractError(f"cannot interpret hypothesis for {aid!r}: {value!r}")
    return out


def evaluate_run(
    corpus: Sequence[TokenizedAbstract],
    hyp: SegmentationAssignment | Mapping[str, HypothesisSegmentation | CandidateSegmentation | str],
) -> MetricReport:
    """Score a hypothesis assignment against every abstract's gold labels."""
    missing_gold = [a.id for a in corpus if a.gold is None]
    if missing_gold:
        raise ValidationError(f"abstracts without gold labels: {missing_gold}")
    n_by_id = {a.id: a.n for a in corpus}
    normalized = _normalize_hypothesis(hyp, n_by_id)
    missing_hyp = [a.id for a in corpus if a.id not in normalized]
    if missing_hyp:
        raise ContractError(f"hypothesis missing abstracts: {missing_hyp}")

    rows: list[PerAbstractMetrics] = []
    for a in corpus:
        h = normalized[a.id]
        if len(h.labeling) != a.n:
            raise ContractError(
                f"hypothesis labeling length {len(h.labeling)} != {a.n} for {a.id!r}"
            )
        ref = gold_labeling(a)
        k = default_window_size(ref)
        hyp_tokens = [t for i in h.conclusion_indices for t in a.sentences[i]]
        rows.append(
            PerAbstractMetrics(
                id=a.id,
                pk=pk(ref, h.labeling, k),
                window_diff=window_diff(ref, h.labeling, k),
                jaccard=jaccard(set(h.conclusion_indices), set(a.gold)),
                rouge_mean=rouge_mean(hyp_tokens, gold_conclusion_tokens(a)),
                window_k=k,
            )
        )
    return MetricReport(
        pk=float(np.mean([m.pk for m in rows])),
        window_diff=float(np.mean([m.window_diff for m in rows])),
        jaccard=float(np.mean([m.jaccard for m in rows])),
        rouge_mean=float(np.mean([m.rouge_mean for m in rows])),
        window_k=int(round(float(np.mean([m.window_k for m in rows])))),
        per_abstract=rows,
    )
