"""Deterministic feature-hash text embeddings.

The shipped embedder hashes unigrams and adjacent bigrams of the content
tokens into a fixed-dimension count vector and L2-normalizes it. It is
bit-stable across processes and platforms for a given (dim, seed), which is
what the merge, clustering, and retrieval tests rely on. A learned embedding
service can replace it behind the same two-method surface (`dim`, `embed`).
"""

from __future__ import annotations

import hashlib

import numpy as np

from .textutils import content_sequence


class HashingEmbedder:
    """Seeded feature-hash embedder producing unit vectors.

    Counts are non-negative, so cosine similarity between any two embeddings
    lies in [0, 1]. Empty texts hash a single sentinel token so the unit-norm
    invariant holds for every input.
    """

    def __init__(self, dim: int = 256, seed: int = 7):
        if dim < 8:
            raise ValueError("embedding dim must be at least 8")
        self.dim = int(dim)
        self.seed = int(seed)
        self._key = f"emb-{self.seed}".encode()

    def _bucket(self, feature: str) -> int:
        digest = hashlib.blake2b(feature.encode(), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "big") % self.dim

    def features(self, text: str) -> list[str]:
        tokens = content_sequence(text)
        if not tokens:
            tokens = ["<empty>"]
        feats = list(tokens)
        feats.extend(f"{a}_{b}" for a, b in zip(tokens, tokens[1:]))
        return feats

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for feature in self.features(text):
            vec[self._bucket(feature)] += 1.0
        return vec / np.linalg.norm(vec)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity for already-normalized vectors."""
    return float(np.dot(a, b))
