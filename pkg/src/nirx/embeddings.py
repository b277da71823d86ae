"""Term vector storage and cosine similarity.

Vectors are unit-normalized once at load time so that cosine similarity
between any two stored terms is a plain dot product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np


class EmbeddingLoadError(ValueError):
    """Raised when an embedding stream cannot be parsed."""


@dataclass(frozen=True)
class TermVector:
    term: str
    vector: np.ndarray  # unit length
    norm: float  # Euclidean length of the raw vector

    def __post_init__(self):
        if self.norm <= 0:
            raise EmbeddingLoadError(f"zero vector for term {self.term!r}")


@dataclass
class EmbeddingTable:
    dimension: int
    entries: dict[str, TermVector] = field(default_factory=dict)
    duplicate_count: int = 0

    def lookup(self, term: str) -> TermVector | None:
        """Return the stored unit vector, or None for OOV terms."""
        return self.entries.get(term)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def dump(self, out: IO[str]) -> None:
        """Debug dump in the same word-vector text format load accepts."""
        out.write(f"{len(self.entries)} {self.dimension}\n")
        for term, tv in self.entries.items():
            comps = " ".join(repr(float(c)) for c in tv.vector)
            out.write(f"{term} {comps}\n")


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Dot product of two unit vectors, clamped to [-1, 1]."""
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(min(1.0, max(-1.0, float(np.dot(u, v)))))


def _is_header(fields: list[str]) -> bool:
    if len(fields) != 2:
        return False
    try:
        int(fields[0]), int(fields[1])
    except ValueError:
        return False
    return True


def load_embeddings(lines: Iterable[str]) -> EmbeddingTable:
    """Parse a word-vector text stream into a normalized EmbeddingTable.

    Accepts an optional "V d" header line (auto-detected: a first line of
    exactly two integer fields). Each data line is "term c1 ... cd".
    Duplicate terms keep the first occurrence; the count of dropped
    duplicates is reported on the table.
    """
    table: EmbeddingTable | None = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        fields = line.split()
        if table is None and lineno == 1 and _is_header(fields):
            continue
        term = fields[0]
        try:
            comps = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingLoadError(f"line {lineno}: bad component: {exc}") from None
        if comps.size == 0:
            raise EmbeddingLoadError(f"line {lineno}: no vector components")
        if table is None:
            table = EmbeddingTable(dimension=comps.size)
        elif comps.size != table.dimension:
            raise EmbeddingLoadError(
                f"line {lineno}: dimension mismatch "
                f"(expected {table.dimension}, got {comps.size})"
            )
        norm = float(np.linalg.norm(comps))
        if norm == 0.0:
            raise EmbeddingLoadError(f"line {lineno}: zero vector for term {term!r}")
        if term in table.entries:
            table.duplicate_count += 1
            continue
        # skip the division for already-unit vectors so that dumping and
        # reloading a table reproduces identical bits
        unit = comps if abs(norm - 1.0) < 1e-12 else comps / norm
        table.entries[term] = TermVector(term=term, vector=unit, norm=norm)
    if table is None or not table.entries:
        raise EmbeddingLoadError("empty embedding stream")
    return table


def load_embeddings_file(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as fh:
        return load_embeddings(fh)
