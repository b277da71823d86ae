"""Command line entry point: build | serve | diag."""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys

from .analytics import kernel_diagnostics
from .embeddings import EmbeddingLoadError
from .ingest import (
    ClusterConfig,
    IngestError,
    build_snapshot,
    load_snapshot,
    parse_title_overrides,
    save_snapshot,
)
from .kernels import ModelConfigError


def _add_build_inputs(parser, require: bool):
    parser.add_argument("--queries", required=require, help="queries TSV (id<TAB>text)")
    parser.add_argument("--docs", required=require, help="documents TSV (id<TAB>text)")
    parser.add_argument("--run", required=require, help="baseline TREC run file")
    parser.add_argument("--qrels", required=require, help="qrels file")
    parser.add_argument("--embeddings", required=require, help="word-vector text file")
    parser.add_argument("--model-config", required=require, help="kernel bank config (JSON)")
    parser.add_argument("--clusters-k", type=int, default=None, help="cluster count (default: sqrt heuristic)")
    parser.add_argument("--seed", type=int, default=42, help="clustering RNG seed")
    parser.add_argument("--candidate-depth", type=int, default=100, help="max candidates per query")
    parser.add_argument("--titles-override", default=None, help="clusterId<TAB>title override file")
    parser.add_argument("--collection", default="collection", help="collection display name")


def _build_from_args(args):
    overrides = {}
    if args.titles_override:
        with open(args.titles_override, encoding="utf-8") as fh:
            overrides = parse_title_overrides(fh)
    cfg = ClusterConfig(
        k=args.clusters_k,
        seed=args.seed,
        candidate_depth=args.candidate_depth,
        title_overrides=overrides,
    )
    return build_snapshot(
        args.queries,
        args.docs,
        args.run,
        args.qrels,
        args.embeddings,
        args.model_config,
        cluster_config=cfg,
        collection_name=args.collection,
    )


def _load_or_build(args):
    if getattr(args, "snapshot", None):
        return load_snapshot(args.snapshot)
    missing = [
        flag
        for flag, value in (
            ("--queries", args.queries),
            ("--docs", args.docs),
            ("--run", args.run),
            ("--qrels", args.qrels),
            ("--embeddings", args.embeddings),
            ("--model-config", args.model_config),
        )
        if value is None
    ]
    if missing:
        raise IngestError(f"missing required flags: {' '.join(missing)} (or pass --snapshot)")
    return _build_from_args(args)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="explorer", description="neural re-ranking result explorer")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="ingest inputs and write a snapshot cache")
    _add_build_inputs(p_build, require=True)
    p_build.add_argument("--out", required=True, help="snapshot output path")

    p_serve = sub.add_parser("serve", help="serve the HTTP API (and UI, if built)")
    p_serve.add_argument("--snapshot", default=None, help="snapshot cache from `build`")
    _add_build_inputs(p_serve, require=False)
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("NIRX_PORT", "8080")))
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, help="static UI directory to serve at /")

    p_diag = sub.add_parser("diag", help="print the kernel diagnostics report")
    p_diag.add_argument("--snapshot", default=None)
    _add_build_inputs(p_diag, require=False)
    p_diag.add_argument("--json", action="store_true", help="emit the report as JSON")

    args = parser.parse_args(argv)

    try:
        if args.command == "build":
            snapshot = _build_from_args(args)
            save_snapshot(snapshot, args.out)
            print(f"snapshot written to {args.out} "
                  f"({len(snapshot.baseline)} queries, {len(snapshot.docs)} docs)")
            return 0

        if args.command == "serve":
            snapshot = _load_or_build(args)
            # fail fast with a clear message when the port is taken
            probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            try:
                probe.bind((args.host, args.port))
            except OSError as exc:
                print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
                return 1
            finally:
                probe.close()
            from .api import create_app
            import uvicorn

            app = create_app(snapshot, ui_dir=args.ui_dir)
            uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
            return 0

        if args.command == "diag":
            snapshot = _load_or_build(args)
            diag = kernel_diagnostics(snapshot)
            if args.json:
                print(json.dumps({
                    "kernelMus": diag.kernel_mus,
                    "meanAbsContribution": diag.mean_abs_contribution,
                    "meanWithinQueryVariance": diag.mean_within_query_variance,
                    "unjudgedAboveJudged": diag.unjudged_above_judged,
                    "flaggedQueryIds": diag.flagged_query_ids,
                }, indent=2))
                return 0
            print(f"{'mu':>6}  {'mean |contribution|':>20}  {'within-query variance':>22}")
            for mu, mean_abs, var in zip(
                diag.kernel_mus, diag.mean_abs_contribution, diag.mean_within_query_variance
            ):
                print(f"{mu:>6.2f}  {mean_abs:>20.6g}  {var:>22.6g}")
            by_mu = dict(zip(diag.kernel_mus, diag.mean_within_query_variance))
            if 1.0 in by_mu and 0.9 in by_mu and by_mu[1.0] < by_mu[0.9]:
                print("exact-match kernel variance < 0.9-kernel variance: "
                      "exact matching is not a deciding factor here")
            print(f"pool bias: unjudged-above-judged queries: {diag.unjudged_above_judged}")
            if diag.flagged_query_ids:
                print("flagged queries: " + " ".join(diag.flagged_query_ids))
            return 0
    except (IngestError, EmbeddingLoadError, ModelConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
