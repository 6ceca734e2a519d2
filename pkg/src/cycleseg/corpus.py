"""Corpus loading, validation, preprocessing and summary statistics.

The corpus format is JSONL, one record per line:

    {"id": str, "title": str, "sentences": [str] | "body": str,
     "gold_conclusion_indices": [int]?, "section_tags": [str]?}

Records may carry pre-split sentences (preferred) or a raw ``body`` that is
split here. Preprocessing lowercases, strips punctuation, and removes
stopwords and digit-bearing tokens; the stopword list is a frozen resource
vendored with the package (see README for its hash).
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError

_PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") | set("‘’“”–—…·")
_PUNCT_TABLE = {ord(ch): " " for ch in _PUNCT}
_DIGITS = re.compile(r"\d")
_TERMINAL = set(".!?")
_CLOSERS = set(")]\"'’”")

_CONCLUSION_TAGS = {"conclusion", "conclusions"}


def _load_resource_lines(name: str) -> list[str]:
    text = resources.files("cycleseg.resources").joinpath(name).read_text("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def load_stopwords() -> frozenset[str]:
    """Return the frozen stopword list shipped with the package."""
    return frozenset(_load_resource_lines("stopwords.txt"))


def load_abbreviations() -> frozenset[str]:
    """Return the sentence-splitter abbreviation list (lowercase, no final dot)."""
    return frozenset(_load_resource_lines("abbreviations.txt"))


@dataclass(frozen=True)
class RawAbstract:
    """One corpus record before tokenization."""

    id: str
    title: str
    sentences: tuple[str, ...]
    gold_conclusion_indices: frozenset[int] | None = None
    section_tags: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class TokenizedAbstract:
    """An abstract as ordered sentences of preprocessed tokens.

    Sentence positions are preserved even when preprocessing empties a
    sentence. ``gold`` is the set of 0-based conclusion sentence indices when
    known.
    """

    id: str
    sentences: tuple[tuple[str, ...], ...]
    gold: frozenset[int] | None = None

    @property
    def n(self) -> int:
        return len(self.sentences)

    def tokens(self) -> list[str]:
        """All tokens in sentence order."""
        return [t for sent in self.sentences for t in sent]


@dataclass
class CorpusStats:
    num_abstracts: int
    num_conclusion_sentences: int
    num_premise_sentences: int
    avg_sentences_per_abstract: float
    conclusion_position_histogram: dict[int, int] = field(default_factory=dict)


def split_sentences(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    """Split raw text into sentences at terminal punctuation.

    Rule-based: a split happens after a run of ``.!?`` (plus trailing closing
    quotes/brackets) that is followed by whitespace, unless the period ends a
    known abbreviation, a single-letter initial, or the next word starts
    lowercase. Joining the result with single spaces reproduces the input
    modulo whitespace.
    """
    if not text or not text.strip():
        raise ValidationError("cannot split empty text")
    if abbreviations is None:
        abbreviations = load_abbreviations()

    flat = " ".join(text.split())
    breaks = []
    i = 0
    while i < len(flat):
        ch = flat[i]
        if ch not in _TERMINAL:
            i += 1
            continue
        j = i
        while j < len(flat) and flat[j] in _TERMINAL:
            j += 1
        k = j
        while k < len(flat) and flat[k] in _CLOSERS:
            k += 1
        if k >= len(flat) or flat[k] != " ":
            i = j
            continue
        nxt = k + 1
        if nxt >= len(flat):
            i = j
            continue
        if flat[i] == "." and j - i == 1 and not _is_sentence_final_period(flat, i, nxt, abbreviations):
            i = j
            continue
        breaks.append(k)
        i = j
    out = []
    start = 0
    for b in breaks:
        out.append(flat[start:b].strip())
        start = b
    out.append(flat[start:].strip())
    return [s for s in out if s]


def _is_sentence_final_period(flat: str, dot: int, nxt: int, abbreviations: frozenset[str]) -> bool:
    # word immediately before the dot, e.g. "al" in "et al." or "e.g"
    w = dot - 1
    while w >= 0 and flat[w] != " ":
        w -= 1
    word = flat[w + 1 : dot].strip("([\"'‘“")
    if word and word.lower() in abbreviations:
        return False
    if len(word) == 1 and word.isalpha():
        return False
    if flat[nxt].islower():
        return False
    return True


def preprocess_sentence(sentence: str, stopwords: frozenset[str]) -> list[str]:
    """Lowercase and tokenize one sentence for counting.

    Punctuation is replaced by whitespace, the result is whitespace-split,
    and tokens that are stopwords or contain a digit are dropped. May return
    an empty list.
    """
    lowered = sentence.lower().translate(_PUNCT_TABLE)
    out = []
    for tok in lowered.split():
        if tok in stopwords or _DIGITS.search(tok):
            continue
        out.append(tok)
    return out


def load_corpus(path: str | Path) -> list[RawAbstract]:
    """Load and validate a JSONL corpus file.

    Returns records in file order. Raises ParseError for malformed lines and
    ValidationError for duplicate ids, out-of-range gold indices, or
    section-tag length mismatches.
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"corpus file not found: {path}")
    records: list[RawAbstract] = []
    seen: set[str] = set()
    abbreviations = load_abbreviations()
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(path), line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise ParseError(str(path), line_no, "record is not an object")
            rec = _validate_record(obj, str(path), line_no, abbreviations)
            if rec.id in seen:
                raise ValidationError(f"{path}:{line_no}: duplicate abstract id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records


def _validate_record(obj: dict, path: str, line_no: int, abbreviations: frozenset[str]) -> RawAbstract:
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise ParseError(path, line_no, "missing or empty 'id'")
    title = obj.get("title", "")
    if "sentences" in obj:
        sentences = obj["sentences"]
        if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
            raise ParseError(path, line_no, "'sentences' must be a list of strings")
        if not sentences:
            raise ParseError(path, line_no, "'sentences' is empty")
    elif "body" in obj:
        body = obj["body"]
        if not isinstance(body, str) or not body.strip():
            raise ParseError(path, line_no, "'body' must be non-empty text")
        sentences = split_sentences(body, abbreviations)
    else:
        raise ParseError(path, line_no, "record has neither 'sentences' nor 'body'")
    n = len(sentences)

    tags = obj.get("section_tags")
    if tags is not None:
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise ParseError(path, line_no, "'section_tags' must be a list of strings")
        if len(tags) != n:
            raise ValidationError(
                f"{path}:{line_no}: section_tags length {len(tags)} != sentence count {n}"
            )

    gold = obj.get("gold_conclusion_indices")
    if gold is not None:
        if not isinstance(gold, list) or not all(isinstance(g, int) for g in gold):
            raise ParseError(path, line_no, "'gold_conclusion_indices' must be a list of ints")
        if not gold:
            raise ValidationError(f"{path}:{line_no}: gold_conclusion_indices is empty")
        if any(g < 0 or g >= n for g in gold):
            raise ValidationError(
                f"{path}:{line_no}: gold index out of range [0, {n - 1}]"
            )
        gold_set = frozenset(gold)
    elif tags is not None:
        derived = frozenset(i for i, t in enumerate(tags) if t.lower() in _CONCLUSION_TAGS)
        gold_set = derived or None
    else:
        gold_set = None

    return RawAbstract(
        id=rid,
        title=title if isinstance(title, str) else "",
        sentences=tuple(sentences),
        gold_conclusion_indices=gold_set,
        section_tags=tuple(tags) if tags is not None else None,
    )


def tokenize_abstract(raw: RawAbstract, stopwords: frozenset[str]) -> TokenizedAbstract:
    return TokenizedAbstract(
        id=raw.id,
        sentences=tuple(tuple(preprocess_sentence(s, stopwords)) for s in raw.sentences),
        gold=raw.gold_conclusion_indices,
    )


def build_corpus(path: str | Path, stopwords: frozenset[str] | None = None) -> list[TokenizedAbstract]:
    """Load, validate and tokenize a corpus in one call."""
    if stopwords is None:
        stopwords = load_stopwords()
    return [tokenize_abstract(r, stopwords) for r in load_corpus(path)]


def corpus_stats(corpus: list[TokenizedAbstract] | list[RawAbstract]) -> CorpusStats:
    """Summarize a corpus: sizes plus a conclusion-position histogram.

    Histogram keys count positions both from the start (0, 1, ...) and from
    the end (-1 is the last sentence); every gold conclusion sentence
    increments one bucket of each kind.
    """
    if not corpus:
        raise ValidationError("empty corpus")
    total_sentences = 0
    n_concl = 0
    n_prem = 0
    hist: Counter[int] = Counter()
    for a in corpus:
        n = a.n
        total_sentences += n
        gold = a.gold if isinstance(a, TokenizedAbstract) else a.gold_conclusion_indices
        if gold is None:
            continue
        n_concl += len(gold)
        n_prem += n - len(gold)
        for i in sorted(gold):
            hist[i] += 1
            hist[i - n] += 1
    return CorpusStats(
        num_abstracts=len(corpus),
        num_conclusion_sentences=n_concl,
        num_premise_sentences=n_prem,
        avg_sentences_per_abstract=total_sentences / len(corpus),
        conclusion_position_histogram=dict(sorted(hist.items())),
    )
