"""Gaussian kernel pooling: similarity matrices, kernel activations,
soft-TF pooling, and the decomposed per-kernel document score.

All operations are pure functions over immutable inputs. Summation order
is fixed (doc terms ascending, then query terms ascending, then kernels
ascending) so results do not depend on evaluation strategy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingTable

LOG_CLAMP = 1e-10  # floor for soft-TF sums before the log


@dataclass(frozen=True)
class Kernel:
    mu: float
    sigma: float
    weight: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"kernel sigma must be > 0, got {self.sigma}")
        if not -1.0 <= self.mu <= 1.0:
            raise ValueError(f"kernel mu must be in [-1, 1], got {self.mu}")


@dataclass(frozen=True)
class KernelBank:
    kernels: tuple[Kernel, ...]
    bias: float = 0.0

    def __post_init__(self):
        if not self.kernels:
            raise ValueError("kernel bank must contain at least one kernel")
        mus = [k.mu for k in self.kernels]
        if any(a <= b for a, b in zip(mus, mus[1:])):
            raise ValueError("kernel mus must be strictly decreasing")
        if sum(1 for m in mus if m == 1.0) > 1:
            raise ValueError("at most one exact-match (mu=1.0) kernel allowed")

    def __len__(self) -> int:
        return len(self.kernels)

    @property
    def exact_match_index(self) -> int | None:
        for i, k in enumerate(self.kernels):
            if k.mu == 1.0:
                return i
        return None


def default_bank(weights: Sequence[float] | None = None, bias: float = 0.0) -> KernelBank:
    """Standard KNRM configuration: mus 1.0 down to -0.9, sigma 0.1
    everywhere except 0.001 for the exact-match kernel."""
    mus = [1.0, 0.9, 0.7, 0.5, 0.3, 0.1, -0.1, -0.3, -0.5, -0.7, -0.9]
    if weights is None:
        weights = [1.0] * len(mus)
    if len(weights) != len(mus):
        raise ValueError("need one weight per kernel")
    kernels = tuple(
        Kernel(mu=m, sigma=0.001 if m == 1.0 else 0.1, weight=w)
        for m, w in zip(mus, weights)
    )
    return KernelBank(kernels=kernels, bias=bias)


class ModelConfigError(ValueError):
    """Raised for malformed or unrecognized model config content."""


def load_model_config(text: str) -> KernelBank:
    """Parse the model config (JSON key/value tree) into a KernelBank.

    Expected shape: {"kernels": [{"mu":..,"sigma":..,"weight":..}, ...],
    "bias": ..}. Unknown fields are rejected with an error naming them.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelConfigError(f"invalid model config: {exc}") from None
    if not isinstance(data, dict):
        raise ModelConfigError("model config root must be a key/value tree")
    unknown = set(data) - {"kernels", "bias"}
    if unknown:
        raise ModelConfigError(f"unknown model config field: {sorted(unknown)[0]}")
    if "kernels" not in data:
        raise ModelConfigError("model config missing 'kernels'")
    kernels = []
    for i, entry in enumerate(data["kernels"]):
        if not isinstance(entry, dict):
            raise ModelConfigError(f"kernel {i} must be a mapping")
        extra = set(entry) - {"mu", "sigma", "weight"}
        if extra:
            raise ModelConfigError(f"unknown model config field: kernels[{i}].{sorted(extra)[0]}")
        missing = {"mu", "sigma", "weight"} - set(entry)
        if missing:
            raise ModelConfigError(f"kernel {i} missing field: {sorted(missing)[0]}")
        kernels.append(Kernel(mu=float(entry["mu"]), sigma=float(entry["sigma"]),
                              weight=float(entry["weight"])))
    try:
        return KernelBank(kernels=tuple(kernels), bias=float(data.get("bias", 0.0)))
    except ValueError as exc:
        raise ModelConfigError(str(exc)) from None


@dataclass(frozen=True)
class SimilarityMatrix:
    query_terms: tuple[str, ...]
    doc_terms: tuple[str, ...]
    values: np.ndarray  # (n, m) in [-1, 1]
    query_oov: tuple[bool, ...]
    doc_oov: tuple[bool, ...]


@dataclass(frozen=True)
class KernelActivations:
    values: np.ndarray  # (n, m, K) in [0, 1]


@dataclass(frozen=True)
class ScoreBreakdown:
    overall: float
    features: tuple[float, ...]  # phi_k per kernel
    contributions: tuple[float, ...]  # weight_k * phi_k
    bias: float
    # per-query-term soft-TF sums S(i, k); summary the UI displays
    soft_tf: tuple[tuple[float, ...], ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ScoredDocument:
    doc_id: str
    rank: int
    baseline_rank: int
    breakdown: ScoreBreakdown


def build_similarity_matrix(
    query: Sequence[str], doc: Sequence[str], table: EmbeddingTable
) -> SimilarityMatrix:
    """Cosine similarity of every (query term, doc term) pair; OOV pairs 0."""
    if not query or not doc:
        raise ValueError("query and document token lists must be nonempty")
    qvecs = [table.lookup(t) for t in query]
    dvecs = [table.lookup(t) for t in doc]
    q_oov = tuple(v is None for v in qvecs)
    d_oov = tuple(v is None for v in dvecs)
    zero = np.zeros(table.dimension)
    qm = np.stack([zero if v is None else v.vector for v in qvecs])
    dm = np.stack([zero if v is None else v.vector for v in dvecs])
    values = np.clip(qm @ dm.T, -1.0, 1.0)
    return SimilarityMatrix(
        query_terms=tuple(query),
        doc_terms=tuple(doc),
        values=values,
        query_oov=q_oov,
        doc_oov=d_oov,
    )


def kernel_value(u: float, kernel: Kernel) -> float:
    """Gaussian activation exp(-(u - mu)^2 / (2 sigma^2))."""
    d = u - kernel.mu
    return math.exp(-(d * d) / (2.0 * kernel.sigma * kernel.sigma))


def apply_kernels(matrix: SimilarityMatrix, bank: KernelBank) -> KernelActivations:
    """Evaluate every kernel at every similarity entry."""
    u = matrix.values[:, :, None]
    mus = np.array([k.mu for k in bank.kernels])
    sigmas = np.array([k.sigma for k in bank.kernels])
    acts = np.exp(-((u - mus) ** 2) / (2.0 * sigmas**2))
    return KernelActivations(values=acts)


def soft_tf(activations: KernelActivations) -> np.ndarray:
    """Per-query-term, per-kernel sums S(i, k) over document terms."""
    return activations.values.sum(axis=1)


def pool(activations: KernelActivations) -> tuple[float, ...]:
    """Soft-TF features: phi_k = sum_i log(max(S(i,k), eps))."""
    s = soft_tf(activations)
    phi = np.log(np.maximum(s, LOG_CLAMP)).sum(axis=0)
    return tuple(float(p) for p in phi)


def score(features: Sequence[float], bank: KernelBank) -> ScoreBreakdown:
    """Affine combination bias + sum_k weight_k * phi_k."""
    if len(features) != len(bank.kernels):
        raise ValueError(
            f"feature count {len(features)} != kernel count {len(bank.kernels)}"
        )
    contributions = tuple(k.weight * f for k, f in zip(bank.kernels, features))
    overall = bank.bias + sum(contributions)
    return ScoreBreakdown(
        overall=overall,
        features=tuple(float(f) for f in features),
        contributions=contributions,
        bias=bank.bias,
    )


def score_document(
    query: Sequence[str], doc: Sequence[str], table: EmbeddingTable, bank: KernelBank
) -> tuple[ScoreBreakdown, SimilarityMatrix]:
    """Full pipeline for one candidate; returns the breakdown plus the
    similarity matrix so callers can retain it for display."""
    matrix = build_similarity_matrix(query, doc, table)
    acts = apply_kernels(matrix, bank)
    s = soft_tf(acts)
    phi = pool(acts)
    breakdown = score(phi, bank)
    breakdown = ScoreBreakdown(
        overall=breakdown.overall,
        features=breakdown.features,
        contributions=breakdown.contributions,
        bias=breakdown.bias,
        soft_tf=tuple(tuple(float(x) for x in row) for row in s),
    )
    return breakdown, matrix


def rerank_with_matrices(
    query: Sequence[str],
    candidates: Sequence[tuple[str, Sequence[str]]],
    table: EmbeddingTable,
    bank: KernelBank,
    baseline_ranks: Sequence[int] | None = None,
) -> tuple[list[ScoredDocument], dict[str, SimilarityMatrix]]:
    """Score all candidates, sort by overall score descending, and keep
    each candidate's similarity matrix for display.

    Ties break by ascending baseline rank, then lexicographic doc id.
    When baseline_ranks is omitted, input order (1-based) stands in.
    """
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    if baseline_ranks is None:
        baseline_ranks = list(range(1, len(candidates) + 1))
    scored = []
    matrices: dict[str, SimilarityMatrix] = {}
    for (doc_id, tokens), base in zip(candidates, baseline_ranks):
        breakdown, matrix = score_document(query, tokens, table, bank)
        matrices[doc_id] = matrix
        scored.append((doc_id, base, breakdown))
    scored.sort(key=lambda t: (-t[2].overall, t[1], t[0]))
    ranked = [
        ScoredDocument(doc_id=d, rank=i, baseline_rank=b, breakdown=br)
        for i, (d, b, br) in enumerate(scored, start=1)
    ]
    return ranked, matrices


def rerank(
    query: Sequence[str],
    candidates: Sequence[tuple[str, Sequence[str]]],
    table: EmbeddingTable,
    bank: KernelBank,
    baseline_ranks: Sequence[int] | None = None,
) -> list[ScoredDocument]:
    ranked, _ = rerank_with_matrices(query, candidates, table, bank, baseline_ranks)
    return ranked
