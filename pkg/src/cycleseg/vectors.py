"""Embedding vector file IO.

The shared format is JSONL: one ``{"id": str, "vector": [float, ...]}``
record per line, closed by a trailing ``{"manifest": {"model": str,
"dimension": int, "count": int}}`` line. Abstract-level records use the bare
abstract id; sentence-level records use ``"<abstract_id>#<sentence_index>"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError


def load_vector_file(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    """Read a vector file; returns (id -> vector, manifest).

    Validates uniform dimensionality, unique ids, nonzero norms, and the
    manifest's dimension/count when a manifest line is present (it then must
    be the last line).
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"vector file not found: {path}")
    vectors: dict[str, np.ndarray] = {}
    manifest: dict = {}
    dim: int | None = None
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if manifest:
                raise ParseError(str(path), line_no, "records after the manifest line")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(path), line_no, f"invalid JSON ({exc.msg})") from exc
            if "manifest" in obj:
                manifest = obj["manifest"]
                continue
            rid = obj.get("id")
            vec = obj.get("vector")
            if not isinstance(rid, str) or not isinstance(vec, list):
                raise ParseError(str(path), line_no, "expected {'id': str, 'vector': [...]}")
            if rid in vectors:
                raise ValidationError(f"{path}:{line_no}: duplicate vector id {rid!r}")
            arr = np.asarray(vec, dtype=float)
            if dim is None:
                dim = arr.size
            elif arr.size != dim:
                raise ValidationError(
                    f"{path}:{line_no}: vector dimension {arr.size} != {dim}"
                )
            if not np.any(arr):
                raise ValidationError(f"{path}:{line_no}: zero vector for id {rid!r}")
            vectors[rid] = arr
    if not vectors:
        raise ValidationError(f"{path}: no vector records")
    if manifest:
        if manifest.get("dimension") not in (None, dim):
            raise ValidationError(f"{path}: manifest dimension {manifest.get('dimension')} != {dim}")
        if manifest.get("count") not in (None, len(vectors)):
            raise ValidationError(f"{path}: manifest count {manifest.get('count')} != {len(vectors)}")
    return vectors, manifest


def abstract_vectors(vectors: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """The abstract-level records (ids without a '#' sentence suffix)."""
    return {k: v for k, v in vectors.items() if "#" not in k}


def sentence_vectors(vectors: dict[str, np.ndarray]) -> dict[str, dict[int, np.ndarray]]:
    """The sentence-level records, grouped by abstract id."""
    out: dict[str, dict[int, np.ndarray]] = {}
    for k, v in vectors.items():
        if "#" not in k:
            continue
        aid, _, idx = k.rpartition("#")
        try:
            out.setdefault(aid, {})[int(idx)] = v
        except ValueError as exc:
            raise ValidationError(f"bad sentence vector id {k!r}") from exc
    return out


def write_vector_file(path: str | Path, records: list[tuple[str, np.ndarray]], model: str) -> None:
    """Write records plus the trailing manifest line."""
    if not records:
        raise ValidationError("no vector records to write")
    dim = len(records[0][1])
    with Path(path).open("w", encoding="utf-8") as fh:
        for rid, vec in records:
            fh.write(json.dumps({"id": rid, "vector": [float(x) for x in vec]}) + "\n")
        fh.write(
            json.dumps({"manifest": {"model": model, "dimension": dim, "count": len(records)}}) + "\n"
        )
