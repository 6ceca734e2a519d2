"""Command-line driver: segment / baseline / eval / sweep / pairs / correlate / stats.

Every run echoes its fully resolved configuration into a ``*.manifest.json``
next to the output so results are reproducible byte for byte. Exit codes:
0 ok, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from pathlib import Path

from . import baselines, plots
from .corpus import build_corpus, corpus_stats
from .cycle import SegmentationAssignment, boundary_labeling
from .errors import ContractError, DegenerateSpaceError, ValidationError
from .greedy import GreedyConfig, SimilarityProvider, build_tfidf_provider, greedy_base, greedy_nn
from .information import build_counts, nmi, top_contributing_pairs, word_boundary_sweep
from .metrics import HypothesisSegmentation, evaluate_run, pearson
from .vectors import abstract_vectors, load_vector_file, sentence_vectors

logger = logging.getLogger(__name__)

DATA_ERRORS = (ValidationError, ContractError, DegenerateSpaceError, OSError)


def _finite_or_none(x: float | None):
    if x is None:
        return None
    return x if x == x and abs(x) != float("inf") else None


def save_assignment(path: Path, assignment: SegmentationAssignment, n_by_id: dict[str, int]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for aid in assignment.choices:
            c = assignment.choices[aid]
            rec = {
                "id": aid,
                "conclusion_indices": list(c.conclusion_window),
                "labeling": boundary_labeling(c, n_by_id[aid]),
                "nmi_at_fix": _finite_or_none(assignment.scores.get(aid)),
            }
            fh.write(json.dumps(rec) + "\n")


def load_assignment(path: Path) -> dict[str, HypothesisSegmentation]:
    out: dict[str, HypothesisSegmentation] = {}
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "id" not in obj or "labeling" not in obj or "conclusion_indices" not in obj:
                raise ValidationError(f"{path}:{line_no}: not an assignment record")
            out[obj["id"]] = HypothesisSegmentation(
                labeling=obj["labeling"],
                conclusion_indices=tuple(obj["conclusion_indices"]),
            )
    if not out:
        raise ValidationError(f"{path}: empty assignment file")
    return out


def _write_manifest(out_path: Path, payload: dict) -> Path:
    manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json") if out_path.suffix != ".json" else out_path.with_name(out_path.stem + ".manifest.json")
    manifest_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path


def _load_provider(args, corpus) -> SimilarityProvider:
    if args.backend == "tfidf":
        return build_tfidf_provider(corpus)
    if not args.embeddings_file:
        raise ValidationError("--backend embeddings requires --embeddings-file")
    vecs, _ = load_vector_file(args.embeddings_file)
    return SimilarityProvider(vectors=abstract_vectors(vecs))


def cmd_segment(args, parser) -> int:
    corpus = build_corpus(args.input)
    chunk = args.chunk_size if args.chunk_size is not None else min(48, len(corpus))
    batch = args.batch_size if args.batch_size is not None else min(12, chunk)
    if batch > chunk:
        parser.error(f"--batch-size {batch} exceeds --chunk-size {chunk}")
    cfg = GreedyConfig(
        epochs=args.epochs,
        batch_size=max(2, batch),
        chunk_size=max(2, chunk),
        rng_seed=args.seed,
        similarity_backend="lexical-tfidf" if args.backend == "tfidf" else "external-embeddings",
        renormalize_joint=args.renormalize_joint,
    )
    if args.algo == "base":
        assignment = greedy_base(corpus, cfg)
    else:
        provider = _load_provider(args, corpus)
        assignment = greedy_nn(corpus, cfg, provider)
    out = Path(args.output)
    save_assignment(out, assignment, {a.id: a.n for a in corpus})
    final = nmi(build_counts(corpus, assignment), renormalize_joint=cfg.renormalize_joint)
    manifest = {
        "command": "segment",
        "algo": args.algo,
        "input": str(args.input),
        "output": str(out),
        "config": {
            "epochs": cfg.epochs,
            "batch_size": cfg.batch_size,
            "chunk_size": cfg.chunk_size,
            "seed": cfg.rng_seed,
            "backend": cfg.similarity_backend,
            "renormalize_joint": cfg.renormalize_joint,
        },
        "num_abstracts": len(corpus),
        "final_nmi": _finite_or_none(final.nmi),
        "final_mi_bits": final.mi_bits,
        "trace": [
            {"id": aid, "nmi_at_fix": _finite_or_none(assignment.scores.get(aid))}
            for aid in assignment.choices
        ],
    }
    _write_manifest(out, manifest)
    logger.info("segmented %d abstracts -> %s (NMI %.6f)", len(corpus), out, final.nmi)
    return 0


def cmd_baseline(args, parser) -> int:
    corpus = build_corpus(args.input)
    rng = random.Random(args.seed)
    records: dict[str, HypothesisSegmentation] = {}
    if args.baseline == "embed-sim":
        if not args.embeddings_file:
            parser.error("--baseline embed-sim requires --embeddings-file")
        vecs, _ = load_vector_file(args.embeddings_file)
        by_abstract = sentence_vectors(vecs)
    for a in corpus:
        if args.baseline == "random-base":
            bits = baselines.random_base(a, rng)
            records[a.id] = HypothesisSegmentation.from_labeling(bits)
        elif args.baseline == "random-plus":
            cand = baselines.random_plus(a, rng)
            records[a.id] = HypothesisSegmentation.from_candidate(cand, a.n)
        elif args.baseline == "texttiling":
            bits = baselines.texttiling(a)
            records[a.id] = HypothesisSegmentation.from_labeling(bits)
        else:
            if a.id not in by_abstract:
                raise ValidationError(f"no sentence vectors for abstract {a.id!r}")
            bits = baselines.embed_sim_baseline(a, by_abstract[a.id])
            records[a.id] = HypothesisSegmentation.from_labeling(bits)
    out = Path(args.output)
    with out.open("w", encoding="utf-8") as fh:
        for aid, h in records.items():
            fh.write(
                json.dumps(
                    {
                        "id": aid,
                        "conclusion_indices": list(h.conclusion_indices),
                        "labeling": h.labeling,
                        "nmi_at_fix": None,
                    }
                )
                + "\n"
            )
    _write_manifest(
        out,
        {
            "command": "baseline",
            "baseline": args.baseline,
            "input": str(args.input),
            "output": str(out),
            "seed": args.seed,
            "num_abstracts": len(corpus),
        },
    )
    return 0


def cmd_eval(args, parser) -> int:
    corpus = build_corpus(args.input)
    hyp = load_assignment(Path(args.assignment))
    report = evaluate_run(corpus, hyp)
    out = Path(args.output)
    out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(
        out,
        {
            "command": "eval",
            "input": str(args.input),
            "assignment": str(args.assignment),
            "output": str(out),
            "num_abstracts": len(corpus),
        },
    )
    logger.info(
        "pk=%.4f wd=%.4f jaccard=%.4f rouge=%.4f",
        report.pk, report.window_diff, report.jaccard, report.rouge_mean,
    )
    return 0


def cmd_sweep(args, parser) -> int:
    corpus = build_corpus(args.input)
    series = word_boundary_sweep(corpus, args.target_id, sigma=args.sigma)
    out = Path(args.output)
    with out.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["position", "nmi", "nmi_smoothed"])
        for p, raw, smooth in zip(series.positions, series.nmi, series.nmi_smoothed):
            w.writerow([p, repr(raw), repr(smooth)])
    _write_manifest(
        out,
        {
            "command": "sweep",
            "input": str(args.input),
            "output": str(out),
            "target_id": args.target_id,
            "sigma": args.sigma,
            "sentence_token_ends": list(series.sentence_token_ends),
        },
    )
    if not args.no_plots:
        plots.save_sweep_figure(series, out.with_suffix(".png"))
    return 0


def cmd_pairs(args, parser) -> int:
    from .information import counts_from_segments, segments_from_gold

    corpus = build_corpus(args.input)
    if args.assignment:
        hyp = load_assignment(Path(args.assignment))
        segs = {}
        for a in corpus:
            if a.id not in hyp:
                raise ContractError(f"assignment missing abstract {a.id!r}")
            idx = hyp[a.id].conclusion_indices
            concl = [t for i in idx for t in a.sentences[i]]
            prem = [t for i in range(a.n) if i not in set(idx) for t in a.sentences[i]]
            segs[a.id] = (prem, concl)
    else:
        segs = {a.id: segments_from_gold(a) for a in corpus}
    table = counts_from_segments(segs)
    pairs = top_contributing_pairs(table, args.top_k)
    out = Path(args.output)
    with out.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["premise_word", "conclusion_word", "term_bits"])
        for wp, wc, term in pairs:
            w.writerow([wp, wc, repr(term)])
    _write_manifest(
        out,
        {
            "command": "pairs",
            "input": str(args.input),
            "output": str(out),
            "top_k": args.top_k,
            "assignment": str(args.assignment) if args.assignment else None,
        },
    )
    if not args.no_plots and pairs:
        plots.save_pair_contributions(pairs, out.with_suffix(".png"))
    return 0


def cmd_correlate(args, parser) -> int:
    if args.batch_min < 2 or args.batch_min > args.batch_max:
        parser.error(f"invalid batch-size range {args.batch_min}..{args.batch_max}")
    corpus = build_corpus(args.input)
    chunk = args.chunk_size if args.chunk_size is not None else min(48, len(corpus))
    provider = None
    rows = []
    for b in range(args.batch_min, args.batch_max + 1):
        cfg = GreedyConfig(
            epochs=args.epochs,
            batch_size=min(b, chunk),
            chunk_size=chunk,
            rng_seed=args.seed,
            similarity_backend="lexical-tfidf" if args.backend == "tfidf" else "external-embeddings",
            renormalize_joint=args.renormalize_joint,
        )
        if provider is None:
            provider = _load_provider(args, corpus)
        assignment = greedy_nn(corpus, cfg, provider)
        report = evaluate_run(corpus, assignment)
        run_nmi = nmi(build_counts(corpus, assignment), renormalize_joint=cfg.renormalize_joint)
        rows.append(
            {
                "batch_size": b,
                "nmi": run_nmi.nmi,
                "pk": report.pk,
                "window_diff": report.window_diff,
                "jaccard": report.jaccard,
                "rouge_mean": report.rouge_mean,
            }
        )
        logger.info("batch_size=%d nmi=%.6f pk=%.4f", b, run_nmi.nmi, report.pk)
    summary = {}
    xs = [r["nmi"] for r in rows]
    for metric in ("pk", "window_diff", "jaccard", "rouge_mean"):
        r, p = pearson(xs, [row[metric] for row in rows])
        summary[metric] = {"r": r, "p": p}
    out = Path(args.output)
    with out.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["batch_size", "nmi", "pk", "wd", "jaccard", "rouge"])
        for row in rows:
            w.writerow(
                [row["batch_size"]]
                + [repr(row[m]) for m in ("nmi", "pk", "window_diff", "jaccard", "rouge_mean")]
            )
    _write_manifest(
        out,
        {
            "command": "correlate",
            "input": str(args.input),
            "output": str(out),
            "batch_range": [args.batch_min, args.batch_max],
            "chunk_size": chunk,
            "epochs": args.epochs,
            "seed": args.seed,
            "backend": args.backend,
            "renormalize_joint": args.renormalize_joint,
            "pearson": summary,
            "rows": rows,
        },
    )
    if not args.no_plots:
        plots.save_correlation_figure(rows, summary, out.with_suffix(".png"))
    return 0


def cmd_stats(args, parser) -> int:
    corpus = build_corpus(args.input)
    stats = corpus_stats(corpus)
    out = Path(args.output)
    payload = {
        "num_abstracts": stats.num_abstracts,
        "num_conclusion_sentences": stats.num_conclusion_sentences,
        "num_premise_sentences": stats.num_premise_sentences,
        "avg_sentences_per_abstract": stats.avg_sentences_per_abstract,
        "conclusion_position_histogram": {str(k): v for k, v in stats.conclusion_position_histogram.items()},
    }
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(
        out, {"command": "stats", "input": str(args.input), "output": str(out)}
    )
    if not args.no_plots and stats.num_conclusion_sentences:
        plots.save_position_histogram(stats, out.with_suffix(".png"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycleseg",
        description="Unsupervised premise/conclusion segmentation of scientific abstracts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p, output_required=True):
        p.add_argument("--input", required=True, help="corpus JSONL path")
        p.add_argument("--output", required=output_required, help="output path")

    seg = sub.add_parser("segment", help="run the greedy NMI segmentation")
    io_args(seg)
    seg.add_argument("--algo", choices=["base", "nn"], default="base")
    seg.add_argument("--epochs", type=int, default=5)
    seg.add_argument("--batch-size", type=int, default=None)
    seg.add_argument("--chunk-size", type=int, default=None)
    seg.add_argument("--seed", type=int, default=0)
    seg.add_argument("--backend", choices=["tfidf", "embeddings"], default="tfidf")
    seg.add_argument("--embeddings-file", default=None)
    seg.add_argument("--renormalize-joint", action="store_true")
    seg.set_defaults(func=cmd_segment)

    base = sub.add_parser("baseline", help="run one of the baseline segmenters")
    io_args(base)
    base.add_argument(
        "--baseline",
        required=True,
        choices=["random-base", "random-plus", "texttiling", "embed-sim"],
    )
    base.add_argument("--seed", type=int, default=0)
    base.add_argument("--embeddings-file", default=None)
    base.set_defaults(func=cmd_baseline)

    ev = sub.add_parser("eval", help="score an assignment against gold labels")
    io_args(ev)
    ev.add_argument("--assignment", required=True, help="assignment JSONL to score")
    ev.set_defaults(func=cmd_eval)

    sw = sub.add_parser("sweep", help="word-level NMI boundary sweep for one abstract")
    io_args(sw)
    sw.add_argument("--target-id", required=True)
    sw.add_argument("--sigma", type=float, default=3.0)
    sw.add_argument("--no-plots", action="store_true")
    sw.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("pairs", help="top contributing word pairs")
    io_args(pr)
    pr.add_argument("--assignment", default=None, help="assignment JSONL (default: gold)")
    pr.add_argument("--top-k", type=int, default=20)
    pr.add_argument("--no-plots", action="store_true")
    pr.set_defaults(func=cmd_pairs)

    co = sub.add_parser("correlate", help="NMI-vs-metric study over batch sizes")
    io_args(co)
    co.add_argument("--batch-min", type=int, default=2)
    co.add_argument("--batch-max", type=int, default=12)
    co.add_argument("--chunk-size", type=int, default=None)
    co.add_argument("--epochs", type=int, default=5)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--backend", choices=["tfidf", "embeddings"], default="tfidf")
    co.add_argument("--embeddings-file", default=None)
    co.add_argument("--renormalize-joint", action="store_true")
    co.add_argument("--no-plots", action="store_true")
    co.set_defaults(func=cmd_correlate)

    st = sub.add_parser("stats", help="corpus statistics and position histogram")
    io_args(st)
    st.add_argument("--no-plots", action="store_true")
    st.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
