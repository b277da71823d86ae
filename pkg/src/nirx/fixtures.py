"""Synthetic desk-scale fixture generator.

Writes a complete input set (queries, docs, run, qrels, embeddings,
model config) small enough for tests and demos. The fixture is
constructed so that:

- every candidate document contains exactly one occurrence of each of
  its query's content terms, which pins the exact-match kernel's
  soft-TF and makes its within-query contribution variance collapse;
- query "q00" has a relevant judged document and an unjudged duplicate
  of it at a better baseline rank, so the duplicate re-ranks above the
  judged one (the pool-bias plant);
- query "q05" carries no judgments at all.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

POOL_BIAS_QUERY = "q00"
UNJUDGED_QUERY = "q05"

DEFAULT_WEIGHTS = [0.4, 1.2, 0.9, 0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005]
DEFAULT_MUS = [1.0, 0.9, 0.7, 0.5, 0.3, 0.1, -0.1, -0.3, -0.5, -0.7, -0.9]


def write_desk_fixture(
    out_dir,
    num_queries: int = 20,
    num_candidates: int = 100,
    dim: int = 50,
    seed: int = 7,
) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    query_terms = {
        f"q{i:02d}": [f"topic{i:02d}a", f"topic{i:02d}b"] for i in range(num_queries)
    }
    fillers = [f"filler{j:03d}" for j in range(150)]
    vocab = sorted({t for ts in query_terms.values() for t in ts} | set(fillers))

    emb_path = out / "embeddings.txt"
    with open(emb_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vocab)} {dim}\n")
        for term in vocab:
            vec = rng.standard_normal(dim)
            fh.write(term + " " + " ".join(f"{c:.6f}" for c in vec) + "\n")

    queries_path = out / "queries.tsv"
    with open(queries_path, "w", encoding="utf-8") as fh:
        for qid, terms in query_terms.items():
            fh.write(f"{qid}\twhat is {terms[0]} {terms[1]}\n")

    docs_path = out / "docs.tsv"
    run_path = out / "run.trec"
    qrels_path = out / "qrels.txt"
    with open(docs_path, "w", encoding="utf-8") as docs_fh, open(
        run_path, "w", encoding="utf-8"
    ) as run_fh, open(qrels_path, "w", encoding="utf-8") as qrels_fh:
        for qi, (qid, terms) in enumerate(query_terms.items()):
            texts = []
            for j in range(num_candidates):
                n_fill = int(rng.integers(8, 21))
                body = list(rng.choice(fillers, size=n_fill))
                # one exact occurrence of each query term, positions fixed
                body.insert(0, terms[0])
                body.insert(len(body) // 2, terms[1])
                texts.append(" ".join(body))
            # plant: candidate 2 duplicates candidate 5's text (the judged
            # relevant one); identical scores tie-break on baseline rank
            if qid == POOL_BIAS_QUERY:
                texts[2] = texts[5]
            for j, text in enumerate(texts):
                did = f"d{qi:02d}_{j:03d}"
                docs_fh.write(f"{did}\t{text}\n")
                run_fh.write(f"{qid} Q0 {did} {j + 1} {100.0 - j:.2f} bm25\n")
            if qid == UNJUDGED_QUERY:
                continue
            qrels_fh.write(f"{qid} 0 d{qi:02d}_005 1\n")
            qrels_fh.write(f"{qid} 0 d{qi:02d}_010 1\n")
            qrels_fh.write(f"{qid} 0 d{qi:02d}_001 0\n")

    config_path = out / "model.json"
    with open(config_path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "kernels": [
                    {"mu": m, "sigma": 0.001 if m == 1.0 else 0.1, "weight": w}
                    for m, w in zip(DEFAULT_MUS, DEFAULT_WEIGHTS)
                ],
                "bias": 0.1,
            },
            fh,
            indent=2,
        )

    return {
        "queries": queries_path,
        "docs": docs_path,
        "run": run_path,
        "qrels": qrels_path,
        "embeddings": emb_path,
        "model_config": config_path,
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description="generate a synthetic desk fixture")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--queries", type=int, default=20)
    parser.add_argument("--candidates", type=int, default=100)
    parser.add_argument("--dim", type=int, default=50)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)
    paths = write_desk_fixture(
        args.out, args.queries, args.candidates, args.dim, args.seed
    )
    for name, path in paths.items():
        print(f"{name}: {path}")


if __name__ == "__main__":
    main()
