"""Command line front end.

Subcommands:

    convert   turn an AS2 table (or the synthetic corpus) into JSONL
    train     train or load the configured technique heads
    score     score one dataset with one technique, write JSONL scores
    evaluate  full experiment: train/load, score, report
    ablate    fixed five-row reference-budget ablation
    report    re-render a report.json as an aligned text table

Exit codes: 0 success, 2 config error (bad flags, bad config file),
3 data error (missing or malformed dataset), 4 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .data import DataError, InvalidRecord, UnknownFormatError, adapt_as2_table, save_jsonl
from .harness import (
    TECHNIQUES,
    ConfigError,
    StageFailure,
    load_config,
    render_text,
    resolve_dataset,
    run_ablation_matrix,
    run_experiment,
    score_technique,
    train_or_load,
)
from .scorer import get_backbone

CONVERT_FORMATS = ("wikiqa_tsv", "trecqa", "synthetic")


def _cmd_convert(args) -> int:
    if args.format == "synthetic":
        ds = resolve_dataset(args.in_path if args.in_path else "synthetic")
    else:
        if not args.in_path:
            raise ConfigError("--in is required for table formats")
        ds = adapt_as2_table(args.in_path, args.format, dataset_name=args.name, split=args.split)
    save_jsonl(ds, args.out_path)
    rejects = len(ds.provenance.get("rejects", ()))
    print(f"wrote {len(ds)} examples to {args.out_path} ({rejects} rejected)")
    return 0


def _cmd_train(args) -> int:
    cfg = load_config(args.config)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    backbone = get_backbone(cfg.backbone)
    train_ds = resolve_dataset(cfg.train_dataset)
    for tech in cfg.techniques_to_run():
        model, did_train, key, log = train_or_load(cfg, tech, train_ds, backbone)
        if did_train:
            from .training import write_trainlog

            write_trainlog(log, out_dir / f"trainlog_{tech}.jsonl")
            print(f"{tech}: trained, checkpoint {key[:12]}, best epoch {log.selected_epoch}")
        else:
            print(f"{tech}: cached checkpoint {key[:12]}")
    return 0


def _cmd_score(args) -> int:
    cfg = load_config(args.config)
    technique = args.technique or cfg.technique
    if technique not in TECHNIQUES:
        raise ConfigError(f"unknown technique {technique!r}")
    cfg = replace(cfg, technique=technique)
    backbone = get_backbone(cfg.backbone)
    train_ds = resolve_dataset(cfg.train_dataset)
    model, _, _, _ = train_or_load(cfg, technique, train_ds, backbone)
    ds = resolve_dataset(args.dataset)
    examples = ds.examples if args.split == "all" else ds.subset(args.split).examples
    scored = score_technique(cfg, technique, model, examples)
    lines = [
        json.dumps({"example_id": i, "score": s, "label": y}, sort_keys=True)
        for i, s, y in zip(scored.example_ids, scored.scores, scored.labels)
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out_path == "-":
        sys.stdout.write(text)
    else:
        Path(args.out_path).write_text(text, encoding="utf-8")
        print(f"wrote {len(lines)} scores to {args.out_path}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = load_config(args.config)
    if args.baseline:
        if args.baseline not in TECHNIQUES:
            raise ConfigError(f"unknown baseline technique {args.baseline!r}")
        cfg = replace(cfg, baseline_technique=args.baseline)
    report = run_experiment(cfg)
    n_rows = sum(len(g["rows"]) for g in report.groups)
    print(f"evaluated {len(report.groups)} dataset(s), {n_rows} row(s); report in {cfg.output_dir}")
    return 0


def _cmd_ablate(args) -> int:
    cfg = load_config(args.config)
    report = run_ablation_matrix(cfg)
    failed = sum(1 for g in report.groups for r in g["rows"] if r.get("failed"))
    print(f"ablation finished; {failed} failed row(s); report in {cfg.output_dir}")
    return 0


def _cmd_report(args) -> int:
    p = Path(args.in_path)
    if not p.is_file():
        raise DataError(f"no such report: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
        text = render_text(doc)
    except (json.JSONDecodeError, KeyError, TypeError) as err:
        raise DataError(f"{p}: not a valid report: {err}") from err
    if args.out_path == "-":
        sys.stdout.write(text)
    else:
        Path(args.out_path).write_text(text, encoding="utf-8")
        print(f"wrote {args.out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squareval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert an AS2 table to canonical JSONL")
    p.add_argument("--format", required=True, choices=CONVERT_FORMATS)
    p.add_argument("--in", dest="in_path", default=None, help="input table path")
    p.add_argument("--out", dest="out_path", required=True, help="output JSONL path")
    p.add_argument("--name", default=None, help="dataset name override")
    p.add_argument("--split", default="test", choices=("train", "dev", "test"))
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("train", help="train (or load cached) technique heads")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("score", help="score a dataset with one technique")
    p.add_argument("--config", required=True)
    p.add_argument("--dataset", required=True, help="JSONL path or synthetic[:seed]")
    p.add_argument("--technique", default=None, choices=sorted(TECHNIQUES))
    p.add_argument("--split", default="test", choices=("train", "dev", "test", "all"))
    p.add_argument("--out", dest="out_path", default="-", help="output path or - for stdout")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("evaluate", help="run the configured experiment end to end")
    p.add_argument("--config", required=True)
    p.add_argument("--baseline", default=None, help="override the baseline technique")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("ablate", help="run the five-row reference-budget ablation")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("report", help="render a report.json as text")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", default="-")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (DataError, InvalidRecord, UnknownFormatError, FileNotFoundError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return 3
    except StageFailure as err:
        if err.stage == "config":
            print(f"config error: {err}", file=sys.stderr)
            return 2
        if err.stage == "data":
            print(f"data error: {err}", file=sys.stderr)
            return 3
        print(f"runtime failure: {err}", file=sys.stderr)
        return 4
    except Exception as err:
        print(f"runtime failure: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
