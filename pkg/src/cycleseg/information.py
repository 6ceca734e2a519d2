"""Word-count probability estimation, mutual information and NMI.

Given a corpus-wide segmentation, the premise segments of all abstracts form
the premise space and the conclusion segments the conclusion space. Marginal
probabilities are occurrence frequencies within a space. The joint
probability of a (premise word, conclusion word) pair is

    sum_i c(w_p, P_i) * c(w_c, C_i)  /  sum_{(w_p', w_c')} c(w_p', P) * c(w_c', C)

i.e. within-abstract co-occurrence mass over the product of the space totals.
This joint does not sum to 1 in general (the per-pair masses it drops are
exactly the cross-abstract products), so the mutual information it induces
can be negative; ``joint_mass`` is reported as a diagnostic and an opt-in
renormalization divides it out. All logarithms are base 2.

NMI divides mutual information by a normalizer from the power-mean family
over the two space entropies; the default (order -inf) is their minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from scipy.ndimage import gaussian_filter1d

from .corpus import TokenizedAbstract
from .cycle import SegmentationAssignment, apply_segmentation, candidate_from_window
from .errors import ContractError, DegenerateSpaceError, ValidationError

Space = Literal["premise", "conclusion"]


@dataclass(frozen=True)
class CountTable:
    """Unigram occurrence counts per abstract and per space."""

    per_abstract_premise_counts: dict[str, dict[str, int]]
    per_abstract_conclusion_counts: dict[str, dict[str, int]]
    premise_totals: dict[str, int]
    conclusion_totals: dict[str, int]
    premise_grand_total: int
    conclusion_grand_total: int


@dataclass(frozen=True)
class NmiReport:
    mi_bits: float
    entropy_premise_bits: float
    entropy_conclusion_bits: float
    normalizer_bits: float
    nmi: float
    joint_mass: float


@dataclass(frozen=True)
class SweepSeries:
    """NMI as a function of a word-level split position in one abstract."""

    target_id: str
    positions: tuple[int, ...]
    nmi: tuple[float, ...]
    nmi_smoothed: tuple[float, ...]
    sigma: float
    sentence_token_ends: tuple[int, ...]


def counts_from_segments(segments: Mapping[str, tuple[Sequence[str], Sequence[str]]]) -> CountTable:
    """Build a CountTable from explicit (premise, conclusion) token streams."""
    per_p: dict[str, dict[str, int]] = {}
    per_c: dict[str, dict[str, int]] = {}
    tot_p: dict[str, int] = {}
    tot_c: dict[str, int] = {}
    for aid in sorted(segments):
        prem, concl = segments[aid]
        pc: dict[str, int] = {}
        for t in prem:
            pc[t] = pc.get(t, 0) + 1
        cc: dict[str, int] = {}
        for t in concl:
            cc[t] = cc.get(t, 0) + 1
        per_p[aid] = pc
        per_c[aid] = cc
        for t, n in pc.items():
            tot_p[t] = tot_p.get(t, 0) + n
        for t, n in cc.items():
            tot_c[t] = tot_c.get(t, 0) + n
    return CountTable(
        per_abstract_premise_counts=per_p,
        per_abstract_conclusion_counts=per_c,
        premise_totals=tot_p,
        conclusion_totals=tot_c,
        premise_grand_total=sum(tot_p.values()),
        conclusion_grand_total=sum(tot_c.values()),
    )


def build_counts(corpus: Sequence[TokenizedAbstract], assignment: SegmentationAssignment) -> CountTable:
    """Count table induced by applying an assignment to every corpus abstract."""
    segments: dict[str, tuple[Sequence[str], Sequence[str]]] = {}
    for a in corpus:
        c = assignment.choices.get(a.id)
        if c is None:
            raise ContractError(f"assignment is missing abstract {a.id!r}")
        segments[a.id] = apply_segmentation(a, c)
    return counts_from_segments(segments)


def marginal_prob(t: CountTable, w: str, space: Space) -> float:
    """Occurrence frequency of a token within one space. Absent tokens are 0."""
    totals, grand = _space(t, space)
    if grand <= 0:
        raise DegenerateSpaceError(f"{space} space is empty")
    return totals.get(w, 0) / grand


def joint_prob(t: CountTable, w_p: str, w_c: str) -> float:
    """Within-abstract co-occurrence probability of a (premise, conclusion) pair."""
    denom = t.premise_grand_total * t.conclusion_grand_total
    if denom <= 0:
        raise DegenerateSpaceError("cannot form joint probabilities over an empty space")
    num = 0
    for aid in sorted(t.per_abstract_premise_counts):
        num += t.per_abstract_premise_counts[aid].get(w_p, 0) * t.per_abstract_conclusion_counts[aid].get(w_c, 0)
    return num / denom


def joint_mass(t: CountTable) -> float:
    """Total mass of the joint distribution (1 only for single-abstract corpora)."""
    denom = t.premise_grand_total * t.conclusion_grand_total
    if denom <= 0:
        raise DegenerateSpaceError("cannot form joint probabilities over an empty space")
    num = 0
    for aid in sorted(t.per_abstract_premise_counts):
        p_tot = sum(t.per_abstract_premise_counts[aid].values())
        c_tot = sum(t.per_abstract_conclusion_counts[aid].values())
        num += p_tot * c_tot
    return num / denom


def _joint_numerators(t: CountTable) -> dict[tuple[str, str], int]:
    joint: dict[tuple[str, str], int] = {}
    for aid in sorted(t.per_abstract_premise_counts):
        pc = t.per_abstract_premise_counts[aid]
        cc = t.per_abstract_conclusion_counts[aid]
        for wp in sorted(pc):
            np_ = pc[wp]
            for wc in sorted(cc):
                key = (wp, wc)
                joint[key] = joint.get(key, 0) + np_ * cc[wc]
    return joint


def mutual_information(t: CountTable, renormalize_joint: bool = False) -> float:
    """Mutual information in bits between the premise and conclusion spaces.

    Sums p(w_p; w_c) * log2(p(w_p; w_c) / (p(w_p) p(w_c))) over pairs with
    positive joint probability, in sorted pair order. With
    ``renormalize_joint`` the joint is first scaled to unit mass.
    """
    denom = t.premise_grand_total * t.conclusion_grand_total
    if denom <= 0:
        raise DegenerateSpaceError("mutual information undefined over an empty space")
    joint = _joint_numerators(t)
    scale = 1.0
    if renormalize_joint:
        mass = sum(joint.values()) / denom
        if mass <= 0:
            raise DegenerateSpaceError("joint distribution has zero mass")
        scale = 1.0 / mass
    mi = 0.0
    for wp, wc in sorted(joint):
        num = joint[(wp, wc)]
        if num == 0:
            continue
        p = num * scale / denom
        ratio = num * scale / (t.premise_totals[wp] * t.conclusion_totals[wc])
        mi += p * math.log2(ratio)
    return mi


def entropy(t: CountTable, space: Space) -> float:
    """Shannon entropy of one space's unigram distribution, in bits."""
    totals, grand = _space(t, space)
    if grand <= 0:
        raise DegenerateSpaceError(f"{space} space is empty")
    h = 0.0
    for w in sorted(totals):
        c = totals[w]
        if c == 0:
            continue
        p = c / grand
        h -= p * math.log2(p)
    return h


def nmi(t: CountTable, renormalize_joint: bool = False, norm_order: float | None = None) -> NmiReport:
    """Normalized mutual information report for a count table.

    The normalizer is the power mean of order ``norm_order`` over the two
    space entropies; ``None`` means order -inf, i.e. their minimum (the least
    upper bound of the mutual information). Raises DegenerateSpaceError when
    the normalizer is zero.
    """
    h_p = entropy(t, "premise")
    h_c = entropy(t, "conclusion")
    if norm_order == 0:
        raise ValidationError("normalizer order must be nonzero (use None for -inf)")
    if min(h_p, h_c) <= 0:
        raise DegenerateSpaceError("NMI normalizer is zero (a space has a single token type)")
    if norm_order is None:
        normalizer = min(h_p, h_c)
    else:
        normalizer = ((h_p**norm_order + h_c**norm_order) / 2.0) ** (1.0 / norm_order)
    mi = mutual_information(t, renormalize_joint=renormalize_joint)
    return NmiReport(
        mi_bits=mi,
        entropy_premise_bits=h_p,
        entropy_conclusion_bits=h_c,
        normalizer_bits=normalizer,
        nmi=mi / normalizer,
        joint_mass=joint_mass(t),
    )


def top_contributing_pairs(t: CountTable, k: int) -> list[tuple[str, str, float]]:
    """The k word pairs with the largest pointwise mutual-information terms.

    Terms are p(w_p; w_c) * log2(p(w_p; w_c) / (p(w_p) p(w_c))) for pairs
    with positive joint probability; ties break lexicographically.
    """
    denom = t.premise_grand_total * t.conclusion_grand_total
    if denom <= 0:
        raise DegenerateSpaceError("no pairs over an empty space")
    joint = _joint_numerators(t)
    scored: list[tuple[str, str, float]] = []
    for wp, wc in sorted(joint):
        num = joint[(wp, wc)]
        if num == 0:
            continue
        p = num / denom
        term = p * math.log2(num / (t.premise_totals[wp] * t.conclusion_totals[wc]))
        scored.append((wp, wc, term))
    scored.sort(key=lambda x: (-x[2], x[0], x[1]))
    return scored[:k]


def segments_from_gold(a: TokenizedAbstract) -> tuple[list[str], list[str]]:
    """Premise/conclusion token streams from an abstract's gold labels.

    Gold sets matching a valid cyclic window are ordered like the window;
    other (e.g. non-contiguous) sets fall back to ascending sentence order.
    """
    if a.gold is None:
        raise ValidationError(f"abstract {a.id!r} has no gold labels")
    try:
        cand = candidate_from_window(a.gold, a.n, a.id)
    except ValidationError:
        concl = [t for i in sorted(a.gold) for t in a.sentences[i]]
        prem = [t for i in range(a.n) if i not in a.gold for t in a.sentences[i]]
        return prem, concl
    return apply_segmentation(a, cand)


def word_boundary_sweep(
    corpus: Sequence[TokenizedAbstract],
    target_id: str,
    assignment: SegmentationAssignment | None = None,
    sigma: float = 3.0,
) -> SweepSeries:
    """NMI as one abstract's boundary moves word by word.

    All abstracts except the target keep their assigned (or gold)
    segmentation. The target is flattened to its token sequence; for each
    split position p the conclusion is the suffix starting at word p and the
    NMI is recomputed from scratch. Positions with an empty premise or an
    empty conclusion are excluded, so the series covers p = 1 .. W-1.
    A Gaussian-smoothed copy is returned alongside the raw series.
    """
    by_id = {a.id: a for a in corpus}
    if target_id not in by_id:
        raise ValidationError(f"unknown target abstract {target_id!r}")
    target = by_id[target_id]
    words = target.tokens()
    if len(words) < 2:
        raise ValidationError(f"target {target_id!r} has fewer than 2 tokens")

    segments: dict[str, tuple[Sequence[str], Sequence[str]]] = {}
    for a in corpus:
        if a.id == target_id:
            continue
        if assignment is not None and a.id in assignment.choices:
            segments[a.id] = apply_segmentation(a, assignment.choices[a.id])
        else:
            segments[a.id] = segments_from_gold(a)

    positions = list(range(1, len(words)))
    series = []
    for p in positions:
        segments[target_id] = (words[:p], words[p:])
        series.append(nmi(counts_from_segments(segments)).nmi)

    if sigma > 0:
        smoothed = gaussian_filter1d(series, sigma=sigma, mode="reflect").tolist()
    else:
        smoothed = list(series)

    ends = []
    acc = 0
    for sent in target.sentences:
        acc += len(sent)
        ends.append(acc)
    return SweepSeries(
        target_id=target_id,
        positions=tuple(positions),
        nmi=tuple(series),
        nmi_smoothed=tuple(smoothed),
        sigma=sigma,
        sentence_token_ends=tuple(ends),
    )


def _space(t: CountTable, space: Space) -> tuple[dict[str, int], int]:
    if space == "premise":
        return t.premise_totals, t.premise_grand_total
    if space == "conclusion":
        return t.conclusion_totals, t.conclusion_grand_total
    raise ValidationError(f"unknown space {space!r}")
