"""JSON-over-HTTP service for a built RunSnapshot.

The server is read-only: every handler reads the immutable snapshot and
performs no numeric recomputation, so response bodies are deterministic
(the seeded random sort included).
"""

from __future__ import annotations

import random
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .analytics import Cluster, median_metric
from .ingest import RunSnapshot

COLLAPSED_COUNT = 3

SORT_KEYS = ("median", "delta", "alpha", "random")


def _snapshot(request: Request) -> RunSnapshot:
    snap = request.app.state.snapshot
    if snap is None:
        raise HTTPException(status_code=503, detail="snapshot is still building")
    return snap


def _bank_dto(bank) -> dict:
    return {
        "mus": [k.mu for k in bank.kernels],
        "sigmas": [k.sigma for k in bank.kernels],
        "weights": [k.weight for k in bank.kernels],
        "bias": bank.bias,
    }


def _all_clusters(snap: RunSnapshot) -> list[Cluster]:
    clusters = list(snap.clusters)
    if snap.unclustered:
        bucket = Cluster(
            cluster_id="unclustered",
            title="unclustered",
            member_query_ids=list(snap.unclustered),
            median_first_relevant_rank=median_metric(
                [snap.summaries[q].first_relevant_rank for q in snap.unclustered]
            ),
            median_delta=median_metric(
                [snap.summaries[q].delta for q in snap.unclustered]
            ),
        )
        clusters.append(bucket)
    return clusters


def _doc_dto(snap: RunSnapshot, query_id: str, scored) -> dict:
    doc = snap.docs[scored.doc_id]
    matrix = snap.matrices[query_id][scored.doc_id]
    qrels = snap.qrels.get(query_id, {})
    judged = scored.doc_id in qrels
    bd = scored.breakdown
    return {
        "docId": scored.doc_id,
        "rank": scored.rank,
        "baselineRank": scored.baseline_rank,
        "overall": bd.overall,
        "bias": bd.bias,
        "perKernel": [
            {
                "mu": k.mu,
                "sigma": k.sigma,
                "weight": k.weight,
                "feature": f,
                "contribution": c,
            }
            for k, f, c in zip(snap.bank.kernels, bd.features, bd.contributions)
        ],
        "judged": judged,
        "grade": qrels.get(scored.doc_id),
        "tokens": [
            {"term": t.text, "start": t.start, "end": t.end, "oov": oov}
            for t, oov in zip(doc.tokens, matrix.doc_oov)
        ],
        "similarityMatrix": [[float(v) for v in row] for row in matrix.values],
        "softTf": [list(row) for row in bd.soft_tf],
    }


def create_app(snapshot: RunSnapshot | None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="neural re-ranking explorer")
    app.state.snapshot = snapshot
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/meta")
    def meta(request: Request):
        snap = _snapshot(request)
        return {
            "collection": snap.collection_name,
            "queryCount": len(snap.baseline),
            "candidateDepth": snap.candidate_depth,
            "kernelBank": _bank_dto(snap.bank),
            "clusterCount": len(_all_clusters(snap)),
            "builtAt": snap.built_at,
        }

    @app.get("/api/clusters")
    def clusters(
        request: Request,
        sort: str = "median",
        order: str = "asc",
        filter: str = "",
        seed: int = 0,
    ):
        snap = _snapshot(request)
        if sort not in SORT_KEYS:
            raise HTTPException(status_code=400, detail=f"unknown sort key {sort!r}")
        if order not in ("asc", "desc"):
            raise HTTPException(status_code=400, detail=f"unknown order {order!r}")
        cards = []
        for cluster in _all_clusters(snap):
            qids = cluster.member_query_ids
            if filter:
                qids = [
                    q
                    for q in qids
                    if any(
                        t.text.startswith(filter.lower())
                        for t in snap.queries[q].tokens
                    )
                ]
                if not qids:
                    continue
            queries = [
                {
                    "queryId": q,
                    "text": snap.summaries[q].text,
                    "firstRelevantRank": snap.summaries[q].first_relevant_rank,
                    "delta": snap.summaries[q].delta,
                    "judgedCount": snap.summaries[q].judged_count,
                }
                for q in qids
            ]
            cards.append(
                {
                    "clusterId": cluster.cluster_id,
                    "title": cluster.title,
                    "medianFirstRelevantRank": cluster.median_first_relevant_rank,
                    "medianDelta": cluster.median_delta,
                    "queries": queries,
                    "collapsedCount": COLLAPSED_COUNT,
                }
            )
        reverse = order == "desc"
        if sort == "random":
            rng = random.Random(seed)
            rng.shuffle(cards)
            for card in cards:
                rng.shuffle(card["queries"])
        elif sort == "alpha":
            cards.sort(key=lambda c: c["title"], reverse=reverse)
            for card in cards:
                card["queries"].sort(key=lambda q: q["text"], reverse=reverse)
        else:
            ckey = "medianFirstRelevantRank" if sort == "median" else "medianDelta"
            qkey = "firstRelevantRank" if sort == "median" else "delta"

            def none_last(v):
                return (v is None, 0 if v is None else v)

            cards.sort(key=lambda c: none_last(c[ckey]), reverse=reverse)
            for card in cards:
                card["queries"].sort(key=lambda q: none_last(q[qkey]), reverse=reverse)
        return cards

    @app.get("/api/query/{query_id}")
    def query_view(request: Request, query_id: str, offset: int = 0, count: int = 10):
        snap = _snapshot(request)
        if offset < 0 or count < 0:
            raise HTTPException(status_code=400, detail="paging values must be >= 0")
        if query_id not in snap.baseline:
            raise HTTPException(status_code=404, detail=f"unknown query {query_id!r}")
        ranked = snap.reranked[query_id]
        page = ranked[offset : offset + count]
        qdata = snap.queries[query_id]
        return {
            "queryId": query_id,
            "queryText": qdata.text,
            "queryTerms": [
                {
                    "term": t.text,
                    "start": t.start,
                    "end": t.end,
                    "oov": snap.table.lookup(t.text) is None,
                }
                for t in qdata.tokens
            ],
            "totalDocuments": len(ranked),
            "offset": offset,
            "summary": {
                "firstRelevantRank": snap.summaries[query_id].first_relevant_rank,
                "baselineFirstRelevantRank": snap.summaries[query_id].baseline_first_relevant_rank,
                "delta": snap.summaries[query_id].delta,
                "judgedCount": snap.summaries[query_id].judged_count,
            },
            "documents": [_doc_dto(snap, query_id, d) for d in page],
            "kernelBank": _bank_dto(snap.bank),
        }

    @app.get("/api/compare/{query_id}/{doc_a}/{doc_b}")
    def compare(request: Request, query_id: str, doc_a: str, doc_b: str):
        snap = _snapshot(request)
        if query_id not in snap.baseline:
            raise HTTPException(status_code=404, detail=f"unknown query {query_id!r}")
        by_id = {d.doc_id: d for d in snap.reranked[query_id]}
        for did in (doc_a, doc_b):
            if did not in by_id:
                raise HTTPException(
                    status_code=404,
                    detail=f"document {did!r} is not a candidate for query {query_id!r}",
                )
        left, right = by_id[doc_a], by_id[doc_b]
        qdata = snap.queries[query_id]
        return {
            "queryId": query_id,
            "queryText": qdata.text,
            "queryTerms": [
                {
                    "term": t.text,
                    "start": t.start,
                    "end": t.end,
                    "oov": snap.table.lookup(t.text) is None,
                }
                for t in qdata.tokens
            ],
            "left": _doc_dto(snap, query_id, left),
            "right": _doc_dto(snap, query_id, right),
            "perKernelPairs": [
                {
                    "mu": k.mu,
                    "leftContribution": lc,
                    "rightContribution": rc,
                }
                for k, lc, rc in zip(
                    snap.bank.kernels,
                    left.breakdown.contributions,
                    right.breakdown.contributions,
                )
            ],
            "kernelBank": _bank_dto(snap.bank),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
