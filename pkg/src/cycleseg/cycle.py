"""Cycled-abstract candidate segmentations and boundary labelings.

An abstract of n sentences is treated as a cycle (the end stitched to the
start). A candidate conclusion is a cyclically contiguous window of 1 to
min(3, n-1) sentences that always contains the final sentence n-1; the
premise is everything else. For n >= 4 this yields exactly six candidates.

Boundary labelings are plain '0'/'1' strings of length n where a 1 marks a
sentence that is the final sentence of its segment, reading the cycle in
sentence order. Every valid candidate produces exactly two 1 bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import TokenizedAbstract
from .errors import ContractError, ValidationError

MAX_CONCLUSION_SENTENCES = 3


@dataclass(frozen=True)
class CandidateSegmentation:
    """One conclusion window on the cycle, in cyclic reading order.

    ``alpha`` is the window's first sentence index, ``xi`` its last (which
    may be smaller than ``alpha`` when the window wraps past the end).
    ``config_rank`` is the position in the canonical enumeration order:
    window length ascending, then wrapped-sentence count ascending.
    """

    abstract_id: str
    conclusion_window: tuple[int, ...]
    alpha: int
    xi: int
    config_rank: int

    @property
    def window_set(self) -> frozenset[int]:
        return frozenset(self.conclusion_window)


@dataclass(frozen=True)
class SegmentationAssignment:
    """A corpus-wide choice of one candidate per abstract."""

    choices: dict[str, CandidateSegmentation]
    scores: dict[str, float] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.choices.items())

    def __len__(self):
        return len(self.choices)


def enumerate_candidates(n: int, abstract_id: str = "") -> list[CandidateSegmentation]:
    """All valid conclusion windows for an n-sentence cycled abstract.

    Canonical order: by window length ascending, then by the number of
    wrapped sentences ascending. For n >= 4 there are exactly six.
    """
    if n < 2:
        raise ValidationError(f"no valid segmentation for an abstract of {n} sentence(s)")
    out: list[CandidateSegmentation] = []
    seen: set[tuple[int, ...]] = set()
    for length in range(1, min(MAX_CONCLUSION_SENTENCES, n - 1) + 1):
        for wrapped in range(length):
            # window covers [alpha, n-1] then wraps to [0, wrapped-1]
            alpha = n - (length - wrapped)
            window = tuple(range(alpha, n)) + tuple(range(wrapped))
            if window in seen:
                continue
            seen.add(window)
            out.append(
                CandidateSegmentation(
                    abstract_id=abstract_id,
                    conclusion_window=window,
                    alpha=alpha,
                    xi=window[-1],
                    config_rank=len(out),
                )
            )
    return out


def boundary_labeling(c: CandidateSegmentation, n: int) -> str:
    """Render a candidate as its 0/1 boundary string.

    Bits are set at the final sentence of the conclusion (``xi``) and at the
    final sentence of the premise (the sentence cyclically preceding
    ``alpha``).
    """
    _check_window(c, n)
    bits = ["0"] * n
    bits[c.xi] = "1"
    bits[(c.alpha - 1) % n] = "1"
    return "".join(bits)


def conclusion_indices_from_labeling(bits: str) -> tuple[int, ...]:
    """Invert a two-boundary labeling into its conclusion, in reading order.

    Of the two cyclic segments the boundaries delimit, the one containing the
    final sentence is the conclusion (the window convention used throughout).
    """
    n = len(bits)
    ones = [i for i, b in enumerate(bits) if b == "1"]
    if len(ones) != 2 or any(b not in "01" for b in bits):
        raise ValidationError(f"expected a length-{n} labeling with exactly two 1 bits, got {bits!r}")
    b1, b2 = ones
    if b2 == n - 1:
        return tuple(range(b1 + 1, n))
    return tuple(range(b2 + 1, n)) + tuple(range(0, b1 + 1))


def conclusion_set_from_labeling(bits: str) -> frozenset[int]:
    """Set form of :func:`conclusion_indices_from_labeling`."""
    return frozenset(conclusion_indices_from_labeling(bits))


def candidate_from_window(window: frozenset[int] | set[int], n: int, abstract_id: str = "") -> CandidateSegmentation:
    """Find the enumerated candidate matching a conclusion index set."""
    target = frozenset(window)
    for c in enumerate_candidates(n, abstract_id):
        if c.window_set == target:
            return c
    raise ValidationError(f"{sorted(target)} is not a valid conclusion window for n={n}")


def apply_segmentation(a: TokenizedAbstract, c: CandidateSegmentation) -> tuple[list[str], list[str]]:
    """Split an abstract's tokens into (premise, conclusion) streams.

    Each stream concatenates its member sentences' tokens in cyclic segment
    order (the conclusion starts at ``alpha``). Together the two streams
    contain every token exactly once.
    """
    if c.abstract_id and c.abstract_id != a.id:
        raise ContractError(f"candidate is for abstract {c.abstract_id!r}, got {a.id!r}")
    _check_window(c, a.n)
    concl = [t for i in c.conclusion_window for t in a.sentences[i]]
    in_window = c.window_set
    premise_order = [i for i in _cyclic_order_from((c.xi + 1) % a.n, a.n) if i not in in_window]
    prem = [t for i in premise_order for t in a.sentences[i]]
    return prem, concl


def _cyclic_order_from(start: int, n: int) -> list[int]:
    return [(start + i) % n for i in range(n)]


def _check_window(c: CandidateSegmentation, n: int) -> None:
    w = c.conclusion_window
    if not w or len(w) > min(MAX_CONCLUSION_SENTENCES, n - 1):
        raise ValidationError(f"window length {len(w)} invalid for n={n}")
    if (n - 1) not in w:
        raise ValidationError("conclusion window must contain the final sentence")
    for prev, cur in zip(w, w[1:]):
        if cur != (prev + 1) % n:
            raise ValidationError(f"conclusion window {w} is not cyclically contiguous")
