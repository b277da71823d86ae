"""Evaluation metrics, query clustering, and kernel diagnostics.

Ranks that contain no relevant document are reported as UNFOUND
(represented as None); medians treat UNFOUND as larger than every finite
rank rather than imputing a penalty value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingTable

UNFOUND = None

# ~120 English function words used to keep auto-titles content-bearing
STOPWORDS = frozenset(
    """a about above after again against all am an and any are as at be because
    been before being below between both but by can cannot could did do does
    doing down during each few for from further had has have having he her here
    hers herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own same she should so some such than that the their
    theirs them themselves then there these they this those through to too
    under until up very was we were what when where which while who whom why
    will with would you your yours yourself yourselves""".split()
)


@dataclass
class QuerySummary:
    query_id: str
    text: str
    first_relevant_rank: int | None
    baseline_first_relevant_rank: int | None
    delta: int | None
    judged_count: int

    @property
    def unjudged(self) -> bool:
        return self.judged_count == 0


@dataclass
class Cluster:
    cluster_id: str
    title: str
    member_query_ids: list[str]
    median_first_relevant_rank: float | None = None
    median_delta: float | None = None


@dataclass
class KernelDiagnostics:
    mean_abs_contribution: list[float]  # per kernel, over all (query, candidate)
    mean_within_query_variance: list[float]  # per kernel
    unjudged_above_judged: int
    flagged_query_ids: list[str]
    kernel_mus: list[float]


def first_relevant_rank(
    ranking: Sequence[str], qrels: Mapping[str, int], threshold: int = 1
) -> int | None:
    """1-based position of the first doc with relevance >= threshold."""
    for pos, doc_id in enumerate(ranking, start=1):
        if qrels.get(doc_id, 0) >= threshold:
            return pos
    return UNFOUND


def median_metric(values: Sequence[int | float | None]) -> float | None:
    """Median with UNFOUND (None) sorting after every finite rank.

    If a middle element is UNFOUND the median is UNFOUND; otherwise the
    usual mean-of-middle-two for even lengths.
    """
    if not values:
        raise ValueError("median of empty list")
    ordered = sorted(values, key=lambda v: (v is None, 0 if v is None else v))
    n = len(ordered)
    if n % 2 == 1:
        mid = ordered[n // 2]
        return None if mid is None else float(mid)
    lo, hi = ordered[n // 2 - 1], ordered[n // 2]
    if lo is None or hi is None:
        return UNFOUND
    return (lo + hi) / 2.0


def query_vector(query: Sequence[str], table: EmbeddingTable) -> np.ndarray | None:
    """Renormalized mean of in-vocabulary term vectors; None if all OOV."""
    if not query:
        raise ValueError("query token list must be nonempty")
    vecs = [tv.vector for tv in (table.lookup(t) for t in query) if tv is not None]
    if not vecs:
        return None
    mean = np.mean(vecs, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        return None
    return mean / norm


def spherical_kmeans(
    points: np.ndarray, k: int, seed: int, max_iters: int = 100
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Spherical k-means over unit vectors (cost = 1 - dot).

    k-means++ initialization from a seeded RNG; Lloyd iterations until
    assignments are stable or max_iters; centroids renormalized each
    step; an emptied cluster is reseeded with the point farthest from
    its current centroid. Returns (labels, centroids, per-iteration cost
    history).
    """
    n = points.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"need at least {k} points for k={k}, got {n}")
    rng = np.random.default_rng(seed)

    # k-means++ seeding with cosine distance
    centroids = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = points[first]
    dists = 1.0 - points @ centroids[0]
    for c in range(1, k):
        weights = np.maximum(dists, 0.0)
        total = weights.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=weights / total))
        centroids[c] = points[idx]
        dists = np.minimum(dists, 1.0 - points @ centroids[c])

    labels = np.full(n, -1, dtype=int)
    costs: list[float] = []
    for _ in range(max_iters):
        sims = points @ centroids.T
        new_labels = np.argmax(sims, axis=1)
        for c in range(k):
            if not np.any(new_labels == c):
                assigned = sims[np.arange(n), new_labels]
                far = int(np.argmin(assigned))
                new_labels[far] = c
                centroids[c] = points[far]
        costs.append(float(np.sum(1.0 - (points * centroids[new_labels]).sum(axis=1))))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = points[labels == c]
            mean = members.mean(axis=0)
            norm = np.linalg.norm(mean)
            if norm > 0:
                centroids[c] = mean / norm
    return labels, centroids, costs


def cluster_queries(
    vectors: Mapping[str, np.ndarray], k: int, seed: int
) -> list[Cluster]:
    """Deterministically cluster query vectors into k groups."""
    qids = sorted(vectors)
    if not qids:
        return []
    points = np.stack([vectors[q] for q in qids])
    labels, _, _ = spherical_kmeans(points, k, seed)
    clusters = []
    for c in range(k):
        members = [q for q, lab in zip(qids, labels) if lab == c]
        if members:
            clusters.append(
                Cluster(cluster_id=f"c{c}", title="", member_query_ids=members)
            )
    return clusters


def auto_title(
    cluster: Cluster,
    query_tokens: Mapping[str, Sequence[str]],
    overrides: Mapping[str, str] | None = None,
) -> str:
    """Override title if present, else the 3 most frequent non-stopword
    member terms hyphen-joined (frequency desc, then alphabetical)."""
    if overrides and cluster.cluster_id in overrides:
        return overrides[cluster.cluster_id]
    counts: dict[str, int] = {}
    for qid in cluster.member_query_ids:
        for tok in query_tokens[qid]:
            if tok not in STOPWORDS:
                counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        return f"cluster-{cluster.cluster_id}"
    top = sorted(counts, key=lambda t: (-counts[t], t))[:3]
    return "-".join(top)


def default_cluster_count(num_vectors: int) -> int:
    """sqrt heuristic, at least 2, never more than the vector count."""
    if num_vectors == 0:
        return 0
    k = max(2, math.ceil(math.sqrt(num_vectors / 2)))
    return min(k, num_vectors)


def kernel_diagnostics(snapshot) -> KernelDiagnostics:
    """Aggregate per-kernel contribution statistics and the pool-bias
    signal (queries where an unjudged candidate outranks every judged
    relevant one; queries with zero judged-relevant candidates count)."""
    num_kernels = len(snapshot.bank.kernels)
    all_contribs: list[list[float]] = [[] for _ in range(num_kernels)]
    per_query_vars = np.zeros(num_kernels)
    query_count = 0
    flagged: list[str] = []
    for qid, ranked in snapshot.reranked.items():
        if not ranked:
            continue
        query_count += 1
        contribs = np.array([d.breakdown.contributions for d in ranked])
        per_query_vars += contribs.var(axis=0)
        for k in range(num_kernels):
            all_contribs[k].extend(contribs[:, k])
        qrels = snapshot.qrels.get(qid, {})
        best_judged = math.inf
        best_unjudged = math.inf
        for d in ranked:
            if d.doc_id in qrels:
                if qrels[d.doc_id] >= 1:
                    best_judged = min(best_judged, d.rank)
            else:
                best_unjudged = min(best_unjudged, d.rank)
        if best_unjudged < best_judged:
            flagged.append(qid)
    mean_abs = [float(np.mean(np.abs(c))) if c else 0.0 for c in all_contribs]
    mean_var = list(per_query_vars / query_count) if query_count else [0.0] * num_kernels
    return KernelDiagnostics(
        mean_abs_contribution=mean_abs,
        mean_within_query_variance=[float(v) for v in mean_var],
        unjudged_above_judged=len(flagged),
        flagged_query_ids=sorted(flagged),
        kernel_mus=[k.mu for k in snapshot.bank.kernels],
    )


def annotate_snapshot(snapshot, cfg) -> None:
    """Fill summaries, clusters, and the unclustered bucket on a freshly
    built snapshot. Called once at build time."""
    summaries: dict[str, QuerySummary] = {}
    for qid in snapshot.baseline:
        qrels = snapshot.qrels.get(qid, {})
        model_ranking = [d.doc_id for d in snapshot.reranked[qid]]
        base_ranking = [e.doc_id for e in snapshot.baseline[qid]]
        frr = first_relevant_rank(model_ranking, qrels)
        base_frr = first_relevant_rank(base_ranking, qrels)
        delta = None if frr is None or base_frr is None else base_frr - frr
        summaries[qid] = QuerySummary(
            query_id=qid,
            text=snapshot.queries[qid].text,
            first_relevant_rank=frr,
            baseline_first_relevant_rank=base_frr,
            delta=delta,
            judged_count=len(qrels),
        )
    snapshot.summaries = summaries

    vectors: dict[str, np.ndarray] = {}
    unclustered: list[str] = []
    for qid in snapshot.baseline:
        toks = [t.text for t in snapshot.queries[qid].tokens]
        vec = query_vector(toks, snapshot.table)
        if vec is None:
            unclustered.append(qid)
        else:
            vectors[qid] = vec
    k = cfg.k if cfg.k is not None else default_cluster_count(len(vectors))
    clusters = cluster_queries(vectors, k, cfg.seed) if vectors else []
    for cluster in clusters:
        cluster.title = auto_title(
            cluster,
            {q: [t.text for t in snapshot.queries[q].tokens] for q in cluster.member_query_ids},
            cfg.title_overrides,
        )
        cluster.median_first_relevant_rank = median_metric(
            [summaries[q].first_relevant_rank for q in cluster.member_query_ids]
        )
        deltas = [summaries[q].delta for q in cluster.member_query_ids]
        cluster.median_delta = median_metric(deltas)
    snapshot.clusters = clusters
    snapshot.unclustered = sorted(unclustered)
