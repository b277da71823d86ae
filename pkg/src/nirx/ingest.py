"""Input parsing and snapshot assembly.

Parses run files, qrels, TSV text collections, embeddings and the model
config; tokenizes all texts; re-ranks every query's candidates at build
time; and materializes the immutable RunSnapshot the service reads.
"""

from __future__ import annotations

import pickle
import re
import time
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .embeddings import EmbeddingTable, load_embeddings_file
from .kernels import (
    KernelBank,
    ScoredDocument,
    SimilarityMatrix,
    load_model_config,
    rerank_with_matrices,
)

SNAPSHOT_MAGIC = b"NIRX1"

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class IngestError(ValueError):
    """Raised for malformed input files or unresolvable references."""


@dataclass(frozen=True)
class Token:
    text: str  # lowercased
    start: int  # character offset into the raw text
    end: int


def tokenize(text: str) -> list[Token]:
    """Lowercase, split on runs of non-alphanumeric characters, keep
    original character offsets for UI highlighting."""
    return [
        Token(text=m.group(0).lower(), start=m.start(), end=m.end())
        for m in _TOKEN_RE.finditer(text)
    ]


@dataclass(frozen=True)
class RunEntry:
    query_id: str
    doc_id: str
    rank: int
    score: float
    tag: str


@dataclass(frozen=True)
class QrelEntry:
    query_id: str
    doc_id: str
    relevance: int


def parse_run(lines: Iterable[str]) -> list[RunEntry]:
    """Parse TREC run lines "queryId Q0 docId rank score tag"."""
    entries: list[RunEntry] = []
    seen_ranks: dict[str, set[int]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 6:
            raise IngestError(f"run line {lineno}: expected 6 fields, got {len(fields)}")
        qid, _q0, did, rank_s, score_s, tag = fields
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError:
            raise IngestError(f"run line {lineno}: bad rank or score") from None
        if rank < 1:
            raise IngestError(f"run line {lineno}: rank must be positive")
        ranks = seen_ranks.setdefault(qid, set())
        if rank in ranks:
            raise IngestError(f"run line {lineno}: duplicate rank {rank} for query {qid}")
        ranks.add(rank)
        entries.append(RunEntry(query_id=qid, doc_id=did, rank=rank, score=score, tag=tag))
    return entries


def parse_qrels(lines: Iterable[str]) -> list[QrelEntry]:
    """Parse qrels lines "queryId 0 docId relevance"."""
    entries: list[QrelEntry] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise IngestError(f"qrels line {lineno}: expected 4 fields, got {len(fields)}")
        qid, _iter, did, rel_s = fields
        try:
            rel = int(rel_s)
        except ValueError:
            raise IngestError(f"qrels line {lineno}: bad relevance {rel_s!r}") from None
        if rel < 0:
            raise IngestError(f"qrels line {lineno}: negative relevance")
        if (qid, did) in seen:
            raise IngestError(f"qrels line {lineno}: duplicate pair ({qid}, {did})")
        seen.add((qid, did))
        entries.append(QrelEntry(query_id=qid, doc_id=did, relevance=rel))
    return entries


def parse_tsv_texts(lines: Iterable[str]) -> dict[str, str]:
    """Parse "id<TAB>text" lines; extra tabs belong to the text."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line:
            continue
        if "\t" not in line:
            raise IngestError(f"tsv line {lineno}: missing tab separator")
        ident, text = line.split("\t", 1)
        if ident in out:
            raise IngestError(f"tsv line {lineno}: duplicate id {ident!r}")
        out[ident] = text
    return out


@dataclass
class QueryData:
    query_id: str
    text: str
    tokens: list[Token]


@dataclass
class DocData:
    doc_id: str
    text: str
    tokens: list[Token]


@dataclass
class RunSnapshot:
    """The fully ingested, immutable dataset the service reads."""

    collection_name: str
    built_at: float
    candidate_depth: int
    queries: dict[str, QueryData]
    docs: dict[str, DocData]
    baseline: dict[str, list[RunEntry]]
    qrels: dict[str, dict[str, int]]
    reranked: dict[str, list[ScoredDocument]]
    matrices: dict[str, dict[str, SimilarityMatrix]]
    bank: KernelBank
    table: EmbeddingTable
    # filled by analytics during build
    summaries: dict = field(default_factory=dict)
    clusters: list = field(default_factory=list)
    unclustered: list = field(default_factory=list)


@dataclass
class ClusterConfig:
    k: int | None = None  # None = sqrt heuristic
    seed: int = 42
    candidate_depth: int = 100
    title_overrides: dict[str, str] = field(default_factory=dict)


def parse_title_overrides(lines: Iterable[str]) -> dict[str, str]:
    """Parse "clusterId<TAB>title" override lines."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line:
            continue
        if "\t" not in line:
            raise IngestError(f"override line {lineno}: missing tab separator")
        cid, title = line.split("\t", 1)
        out[cid] = title
    return out


def build_snapshot(
    queries_file,
    docs_file,
    run_file,
    qrels_file,
    embeddings_file,
    model_config_file,
    cluster_config: ClusterConfig | None = None,
    collection_name: str = "collection",
) -> RunSnapshot:
    """Parse every input, re-rank all queries, cluster, and return the
    materialized snapshot."""
    from . import analytics  # deferred: analytics imports nothing from here

    cfg = cluster_config or ClusterConfig()

    def _read(path, parser, label):
        try:
            with open(path, encoding="utf-8") as fh:
                return parser(fh)
        except IngestError as exc:
            raise IngestError(f"{label} ({path}): {exc}") from None

    query_texts = _read(queries_file, parse_tsv_texts, "queries")
    doc_texts = _read(docs_file, parse_tsv_texts, "docs")
    run_entries = _read(run_file, parse_run, "run")
    qrel_entries = _read(qrels_file, parse_qrels, "qrels")
    table = load_embeddings_file(embeddings_file)
    with open(model_config_file, encoding="utf-8") as fh:
        bank = load_model_config(fh.read())

    baseline: dict[str, list[RunEntry]] = {}
    for e in run_entries:
        baseline.setdefault(e.query_id, []).append(e)
    for qid in baseline:
        baseline[qid].sort(key=lambda e: e.rank)
        baseline[qid] = baseline[qid][: cfg.candidate_depth]

    dangling = sorted(
        {e.query_id for es in baseline.values() for e in es if e.query_id not in query_texts}
        | {e.doc_id for es in baseline.values() for e in es if e.doc_id not in doc_texts}
    )
    if dangling:
        raise IngestError(f"run references unknown ids: {', '.join(dangling)}")

    queries = {
        qid: QueryData(query_id=qid, text=text, tokens=tokenize(text))
        for qid, text in query_texts.items()
    }
    docs = {
        did: DocData(doc_id=did, text=text, tokens=tokenize(text))
        for did, text in doc_texts.items()
    }

    empty = [qid for qid in baseline if not [t.text for t in queries[qid].tokens]]
    if empty:
        raise IngestError(f"queries with no tokens: {', '.join(sorted(empty))}")

    qrels: dict[str, dict[str, int]] = {}
    for e in qrel_entries:
        qrels.setdefault(e.query_id, {})[e.doc_id] = e.relevance

    reranked: dict[str, list[ScoredDocument]] = {}
    matrices: dict[str, dict[str, SimilarityMatrix]] = {}
    for qid, entries in baseline.items():
        q_tokens = [t.text for t in queries[qid].tokens]
        usable = [(e.doc_id, [t.text for t in docs[e.doc_id].tokens]) for e in entries]
        skipped = [d for d, toks in usable if not toks]
        if skipped:
            raise IngestError(f"documents with no tokens for query {qid}: {', '.join(skipped)}")
        ranks = [e.rank for e in entries]
        reranked[qid], matrices[qid] = rerank_with_matrices(
            q_tokens, usable, table, bank, baseline_ranks=ranks
        )

    snapshot = RunSnapshot(
        collection_name=collection_name,
        built_at=time.time(),
        candidate_depth=cfg.candidate_depth,
        queries=queries,
        docs=docs,
        baseline=baseline,
        qrels=qrels,
        reranked=reranked,
        matrices=matrices,
        bank=bank,
        table=table,
    )
    analytics.annotate_snapshot(snapshot, cfg)
    return snapshot


def save_snapshot(snapshot: RunSnapshot, path) -> None:
    """Write the versioned single-file snapshot cache."""
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        pickle.dump(snapshot, fh, protocol=pickle.HIGHEST_PROTOCOL)


def load_snapshot(path) -> RunSnapshot:
    with open(path, "rb") as fh:
        magic = fh.read(len(SNAPSHOT_MAGIC))
        if magic != SNAPSHOT_MAGIC:
            raise IngestError(f"{path}: not a snapshot cache (bad magic {magic!r})")
        snapshot = pickle.load(fh)
    if not isinstance(snapshot, RunSnapshot):
        raise IngestError(f"{path}: snapshot cache has unexpected payload")
    return snapshot
