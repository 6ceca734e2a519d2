"""Export embedding vectors for a corpus to the engine's vector file format.

Reads the corpus JSONL schema ({"id", "title", "sentences": [...]}) and
writes JSONL vector records closed by a manifest line:

    {"id": "<abstract_id>", "vector": [...]}            abstract level
    {"id": "<abstract_id>#<sentence_index>", ...}       sentence level
    {"manifest": {"model": ..., "dimension": ..., "count": ...}}

With --granularity both, two files are written next to --out with
``.abstracts.jsonl`` and ``.sentences.jsonl`` suffixes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .encoders import EncoderLoadError, load_encoder

DEFAULT_MODEL = "sentence-transformers/all-MiniLM-L6-v2"


class CorpusError(ValueError):
    pass


def read_corpus(path: str | Path) -> list[dict]:
    """Minimal reader for the corpus JSONL schema (pre-split records only)."""
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    records = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: invalid JSON ({exc.msg})") from exc
            rid = obj.get("id")
            if not isinstance(rid, str) or not rid:
                raise CorpusError(f"{path}:{line_no}: missing or empty 'id'")
            if rid in seen:
                raise CorpusError(f"{path}:{line_no}: duplicate id {rid!r}")
            seen.add(rid)
            sentences = obj.get("sentences")
            if sentences is None:
                raise CorpusError(
                    f"{path}:{line_no}: record has no 'sentences'; the exporter needs "
                    "pre-split corpora so sentence indices match the engine's"
                )
            if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
                raise CorpusError(f"{path}:{line_no}: 'sentences' must be a list of strings")
            if not sentences:
                raise CorpusError(f"{path}:{line_no}: 'sentences' is empty")
            records.append({"id": rid, "sentences": sentences})
    if not records:
        raise CorpusError(f"{path}: empty corpus")
    return records


def _write(path: Path, rows: list[tuple[str, list[float]]], model: str, dimension: int) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for rid, vec in rows:
            fh.write(json.dumps({"id": rid, "vector": vec}) + "\n")
        fh.write(
            json.dumps({"manifest": {"model": model, "dimension": dimension, "count": len(rows)}})
            + "\n"
        )


def export_embeddings(
    corpus_path: str | Path,
    model_id: str,
    out_path: str | Path,
    granularity: str = "both",
) -> list[Path]:
    """Encode the corpus and write vector file(s); returns the written paths."""
    if granularity not in ("abstract", "sentence", "both"):
        raise CorpusError(f"unknown granularity {granularity!r}")
    records = read_corpus(corpus_path)
    encoder = load_encoder(model_id)
    out_path = Path(out_path)
    written: list[Path] = []

    if granularity in ("abstract", "both"):
        texts = [" ".join(r["sentences"]) for r in records]
        vectors = encoder.encode(texts)
        rows = [
            (r["id"], [float(x) for x in vec]) for r, vec in zip(records, vectors)
        ]
        path = out_path if granularity == "abstract" else out_path.with_suffix(".abstracts.jsonl")
        _write(path, rows, encoder.name, encoder.dimension)
        written.append(path)

    if granularity in ("sentence", "both"):
        ids = [f"{r['id']}#{i}" for r in records for i in range(len(r["sentences"]))]
        texts = [s for r in records for s in r["sentences"]]
        vectors = encoder.encode(texts)
        rows = [(rid, [float(x) for x in vec]) for rid, vec in zip(ids, vectors)]
        path = out_path if granularity == "sentence" else out_path.with_suffix(".sentences.jsonl")
        _write(path, rows, encoder.name, encoder.dimension)
        written.append(path)

    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="export-embeddings",
        description="Export per-abstract / per-sentence embedding vectors for a corpus.",
    )
    parser.add_argument("--corpus", required=True, help="corpus JSONL path (pre-split sentences)")
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help=f"model id (default {DEFAULT_MODEL}) or token-hash-<D> for the offline encoder")
    parser.add_argument("--out", required=True, help="output vector file path")
    parser.add_argument("--granularity", choices=["abstract", "sentence", "both"], default="both")
    args = parser.parse_args(argv)
    try:
        written = export_embeddings(args.corpus, args.model, args.out, args.granularity)
    except (CorpusError, EncoderLoadError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
