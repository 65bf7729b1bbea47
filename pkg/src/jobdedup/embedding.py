"""Embedding providers, persistent vector cache and clamped-cosine scores.

Two providers are available: a deterministic local hashed-trigram encoder
(no model download, used by the test suite and offline runs) and a remote
HTTP provider for plugging in a real sentence-embedding service.
"""

from __future__ import annotations

import hashlib
import json
import struct
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CacheFingerprintError, ScoringUnavailableError


class EmbeddingProvider:
    """Deterministic text -> vector encoder; embed("") is the zero vector."""

    name: str
    dim: int

    @property
    def fingerprint(self) -> str:
        return f"{self.name}:{self.dim}"

    def embed(self, text: str) -> np.ndarray:
        raise NotImplementedError


class LocalTrigramProvider(EmbeddingProvider):
    """Seeded hashed character-trigram embedder.

    Every trigram hashes to an index in [0, dim) and a sign; counts
    accumulate and the result is L2-normalized (zero vector if the text
    has no trigram). Same (dim, seed, text) always yields the same vector.
    """

    def __init__(self, dim: int = 256, seed: int = 0):
        if dim < 16:
            raise ValueError("dim must be >= 16")
        self.dim = dim
        self.seed = seed
        self.name = f"local-trigram-s{seed}"
        self._salt = struct.pack("<q", seed)

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for i in range(len(text) - 2):
            digest = hashlib.blake2b(
                text[i:i + 3].encode("utf-8"), key=self._salt, digest_size=8
            ).digest()
            h = int.from_bytes(digest, "little")
            idx = (h >> 1) % self.dim
            sign = 1.0 if h & 1 else -1.0
            vec[idx] += sign
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec


class RemoteHttpProvider(EmbeddingProvider):
    """Client for an embedding service speaking the JSON wire format
    POST {"texts": [...]} -> {"vectors": [[...]]}."""

    def __init__(self, endpoint: str, dim: int, timeout: float = 10.0, name: str = "remote"):
        self.endpoint = endpoint
        self.dim = dim
        self.timeout = timeout
        self.name = name

    def embed(self, text: str) -> np.ndarray:
        if not text:
            return np.zeros(self.dim, dtype=np.float64)
        import httpx

        try:
            resp = httpx.post(self.endpoint, json={"texts": [text]}, timeout=self.timeout)
            resp.raise_for_status()
            vectors = resp.json()["vectors"]
        except Exception as exc:
            raise ScoringUnavailableError(f"embedding provider failed: {exc}") from exc
        vec = np.asarray(vectors[0], dtype=np.float64)
        if vec.shape != (self.dim,) or not np.all(np.isfinite(vec)):
            raise ScoringUnavailableError(
                f"provider returned a bad vector (expected dim {self.dim})"
            )
        return vec


_CACHE_MAGIC = b"JDEMB1\n"


class EmbeddingCache:
    """Content-hash -> vector cache, bound to one provider fingerprint.

    Persisted as a binary file: magic, JSON header line (fingerprint, dim,
    count), fixed-size records of sha256(text) + float64 values, and a
    trailing sha256 checksum over everything before it.
    """

    def __init__(self, fingerprint: str, dim: int):
        self.fingerprint = fingerprint
        self.dim = dim
        self._entries: dict[bytes, np.ndarray] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    @staticmethod
    def _key(text: str) -> bytes:
        return hashlib.sha256(text.encode("utf-8")).digest()

    def get(self, text: str) -> np.ndarray | None:
        return self._entries.get(self._key(text))

    def put(self, text: str, vector: np.ndarray) -> None:
        with self._lock:
            self._entries[self._key(text)] = np.asarray(vector, dtype=np.float64)

    def save(self, path: str | Path) -> None:
        header = json.dumps(
            {"fingerprint": self.fingerprint, "dim": self.dim, "count": len(self._entries)}
        ).encode("utf-8")
        body = bytearray()
        body += _CACHE_MAGIC
        body += header + b"\n"
        for key in sorted(self._entries):
            body += key
            body += self._entries[key].tobytes()
        body += hashlib.sha256(bytes(body)).digest()
        Path(path).write_bytes(bytes(body))

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingCache":
        blob = Path(path).read_bytes()
        if len(blob) < len(_CACHE_MAGIC) + 32 or not blob.startswith(_CACHE_MAGIC):
            raise ValueError(f"not an embedding cache file: {path}")
        payload, checksum = blob[:-32], blob[-32:]
        if hashlib.sha256(payload).digest() != checksum:
            raise ValueError(f"embedding cache is corrupt: {path}")
        rest = payload[len(_CACHE_MAGIC):]
        header_end = rest.index(b"\n")
        header = json.loads(rest[:header_end].decode("utf-8"))
        cache = cls(header["fingerprint"], header["dim"])
        record = 32 + header["dim"] * 8
        data = rest[header_end + 1:]
        if len(data) != header["count"] * record:
            raise ValueError(f"embedding cache is truncated: {path}")
        for off in range(0, len(data), record):
            key = data[off:off + 32]
            vec = np.frombuffer(data[off + 32:off + record], dtype=np.float64).copy()
            cache._entries[key] = vec
        return cache

    @classmethod
    def for_provider(cls, provider: EmbeddingProvider) -> "EmbeddingCache":
        return cls(provider.fingerprint, provider.dim)


def embed_cached(text: str, provider: EmbeddingProvider, cache: EmbeddingCache) -> np.ndarray:
    """Return the cached vector for text, computing and storing it on a miss."""
    if cache.fingerprint != provider.fingerprint or cache.dim != provider.dim:
        raise CacheFingerprintError(
            f"cache fingerprint {cache.fingerprint!r} does not match provider {provider.fingerprint!r}"
        )
    hit = cache.get(text)
    if hit is not None:
        return hit
    if not text:
        vec = np.zeros(provider.dim, dtype=np.float64)
    else:
        vec = provider.embed(text)
    cache.put(text, vec)
    return vec


def cosine_clamped(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity with negatives mapped to 0; 0 for zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.dot(u, u))
    nv = float(np.dot(v, v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    if np.array_equal(u, v):
        return 1.0
    c = float(np.dot(u, v)) / float(np.sqrt(nu) * np.sqrt(nv))
    return min(1.0, max(0.0, c))


def embedding_scores(a, b, provider: EmbeddingProvider, cache: EmbeddingCache) -> tuple[float, float, float, float]:
    """(TES, SES, TTES, AES) for a pair of normalized postings.

    TES: full descriptions; SES: skill texts; TTES: titles; AES: the
    concatenation title + " " + description + " " + skill_text. A score is
    0 when its text is empty on either side.
    """
    def score(text_a: str, text_b: str) -> float:
        if not text_a.strip() or not text_b.strip():
            return 0.0
        return cosine_clamped(
            embed_cached(text_a, provider, cache),
            embed_cached(text_b, provider, cache),
        )

    def all_text(p) -> str:
        return f"{p.norm_title} {p.norm_description} {p.skill_text}"

    tes = score(a.norm_description, b.norm_description)
    ses = score(a.skill_text, b.skill_text)
    ttes = score(a.norm_title, b.norm_title)
    aes = score(all_text(a), all_text(b))
    return tes, ses, ttes, aes
