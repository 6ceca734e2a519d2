"""Text encoders behind a single interface.

Two families are supported: pretrained sentence-embedding models loaded via
sentence-transformers (the default), and the built-in ``token-hash-<D>``
encoder, a deterministic feature-hashing encoder that needs no model files
or network access. The latter keeps exports reproducible in offline
environments and in tests; it is not a semantic model.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

_TOKEN_HASH = re.compile(r"^token-hash-(\d+)$")
_WORDS = re.compile(r"[a-z0-9]+")


class EncoderLoadError(RuntimeError):
    """The requested model could not be loaded."""


class TokenHashEncoder:
    """Feature hashing of lowercased alphanumeric tokens, L2-normalized.

    Each token is hashed (sha256) to a bucket and a sign; a text with no
    tokens maps to a fixed unit vector so downstream cosine stays defined.
    """

    def __init__(self, dimension: int):
        if dimension < 2:
            raise EncoderLoadError("token-hash dimension must be >= 2")
        self.dimension = dimension
        self.name = f"token-hash-{dimension}"

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension))
        for row, text in enumerate(texts):
            for tok in _WORDS.findall(text.lower()):
                digest = hashlib.sha256(tok.encode("utf-8")).digest()
                bucket = int.from_bytes(digest[:8], "big") % self.dimension
                sign = 1.0 if digest[8] % 2 == 0 else -1.0
                out[row, bucket] += sign
            norm = np.linalg.norm(out[row])
            if norm == 0:
                out[row, 0] = 1.0
            else:
                out[row] /= norm
        return out


class SentenceTransformerEncoder:
    """Thin wrapper over a pretrained sentence-transformers model."""

    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer

            self._model = SentenceTransformer(model_id)
        except Exception as exc:  # model missing, no network, bad id ...
            raise EncoderLoadError(f"cannot load model {model_id!r}: {exc}") from exc
        self.name = model_id
        self.dimension = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str]) -> np.ndarray:
        vectors = self._model.encode(
            texts, convert_to_numpy=True, show_progress_bar=False, normalize_embeddings=False
        )
        return np.asarray(vectors, dtype=float)


def load_encoder(model_id: str):
    m = _TOKEN_HASH.match(model_id)
    if m:
        return TokenHashEncoder(int(m.group(1)))
    return SentenceTransformerEncoder(model_id)
