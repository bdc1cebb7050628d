"""Command-line entry point.

Subcommands map one-to-one onto library operations; the CLI only parses
flags, moves files and formats output.  Exit codes: 0 success, 1 usage
error, 2 data error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import features, ngrams, signature
from . import scanner as scanlib
from .cfg import build_cfg
from .listing import ListingError, parse_listing
from .signature import CodecError

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
DATA_ERROR = 2


@dataclass(frozen=True)
class Config:
    threshold: float = 0.5
    ngram_size: int = 2
    reference_k: int = 100
    seed: int = 42
    api_blocklist: tuple[str, ...] = ngrams.DEFAULT_BLOCKLIST
    jobs: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _load_config(path: str | None) -> Config:
    if path is None:
        return Config()
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    valid = {f.name for f in fields(Config)}
    unknown = set(data) - valid
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "api_blocklist" in data:
        data["api_blocklist"] = tuple(data["api_blocklist"])
    return replace(Config(), **data)


def _merge(config: Config, args: argparse.Namespace) -> Config:
    updates = {}
    for name, attr in (
        ("threshold", "threshold"),
        ("ngram_size", "ngram_size"),
        ("reference_k", "k"),
        ("seed", "seed"),
        ("jobs", "jobs"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            updates[name] = value
    if getattr(args, "blocklist", None) is not None:
        updates["api_blocklist"] = tuple(p for p in args.blocklist.split(",") if p)
    return replace(config, **updates)


def _require_dict_path(args) -> Path:
    path = args.dict or os.environ.get("OPSIG_DICT")
    if not path:
        raise ValueError("no dictionary given: pass --dict or set OPSIG_DICT")
    return Path(path)


def _sign_files(paths: list[str], family: str | None) -> list[signature.Signature]:
    sigs = []
    for path in paths:
        for method in parse_listing(Path(path).read_text(encoding="utf-8")):
            sigs.append(signature.from_cfg(build_cfg(method), family))
    return sigs


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_sign(args, config: Config) -> int:
    for sig in _sign_files(args.listing, args.family):
        print(signature.encode(sig))
    return 0


def _cmd_dict_add(args, config: Config) -> int:
    path = _require_dict_path(args)
    sigs = _sign_files(args.listing, args.family)
    before = len(signature.dict_load(path).entries) if path.exists() else 0
    dictionary = signature.dict_add(path, sigs)
    print(f"{len(dictionary.entries) - before} signature(s) added to {path}")
    return 0


def _cmd_dict_list(args, config: Config) -> int:
    for descriptor, family, node_count in signature.dict_list(_require_dict_path(args)):
        print(f"{family or '-'}\t{node_count}\t{descriptor}")
    return 0


def _cmd_mine(args, config: Config) -> int:
    corpus = ngrams.load_manifest(args.manifest, config.api_blocklist)
    if not corpus:
        raise ValueError("manifest yielded no documents")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    if args.census:
        census = ngrams.ngram_census(corpus)
        if out_dir:
            ngrams.write_census_csv(census, out_dir / "census.csv")
            written = [str(out_dir / "census.csv")]
            if not args.no_plot:
                from . import plots

                written.append(str(plots.save_census_plot(census, out_dir / "census.png")))
            print("\n".join(written))
        else:
            writer = csv.writer(sys.stdout)
            writer.writerow(["size", "distinct_ngrams"])
            for size in sorted(census):
                writer.writerow([size, census[size]])
        return 0

    scores = ngrams.discriminance_scores(corpus, config.ngram_size)
    reference = ngrams.select_reference(corpus, config.ngram_size, config.reference_k)
    if out_dir:
        ngrams.write_selection_csv(reference, scores, out_dir / "reference.csv")
        written = [str(out_dir / "reference.csv")]
        if not args.no_plot:
            from . import plots

            written.append(
                str(plots.save_selection_plot(reference, scores, out_dir / "reference.png"))
            )
        print("\n".join(written))
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(["rank", "ngram", "score"])
        for rank, g in enumerate(reference):
            writer.writerow([rank, g, scores[g]])
    return 0


def _read_reference(path: str) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if lines and lines[0].startswith("rank,"):
        return [row.split(",")[1] for row in lines[1:] if row]
    return [line for line in lines if line]


def _cmd_featurize(args, config: Config) -> int:
    corpus = ngrams.load_manifest(args.manifest, config.api_blocklist)
    reference = _read_reference(args.reference)
    vectors = features.featurize_corpus(corpus, reference)
    features.write_dataset(args.out, vectors, reference)
    print(f"{len(vectors)} vectors x {len(reference)} bits written to {args.out}")
    return 0


def _cmd_train(args, config: Config) -> int:
    vectors, _ = features.read_dataset(args.dataset)
    spec = features.ClassifierSpec(
        kind=args.classifier, max_depth=args.max_depth, k=args.knn_k
    )
    report = features.split_and_crossvalidate(vectors, spec, seed=config.seed)
    mean_f1 = sum(s.f1 for s in report.fold_scores) / len(report.fold_scores)
    print(
        f"holdout: precision={report.precision:g} recall={report.recall:g} f1={report.f1:g}"
    )
    print(f"cv: folds={report.folds} mean_f1={mean_f1:g}")

    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with (out_dir / "cv_report.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fold", "precision", "recall", "f1"])
            for i, s in enumerate(report.fold_scores, start=1):
                writer.writerow([i, s.precision, s.recall, s.f1])
            writer.writerow(["holdout", report.precision, report.recall, report.f1])
        if not args.no_plot:
            from . import plots

            plots.save_fold_plot(
                [s.f1 for s in report.fold_scores], report.f1, out_dir / "cv_report.png"
            )

    if args.flag_out:
        model = features.fit_classifier(spec, vectors)
        flagged = features.flag_characteristic_methods(vectors, model)
        Path(args.flag_out).write_text("".join(d + "\n" for d in flagged), encoding="utf-8")
        print(f"{len(flagged)} flagged doc id(s) written to {args.flag_out}")
    return 0


def _cmd_scan(args, config: Config) -> int:
    dictionary = signature.dict_load(_require_dict_path(args))
    report = scanlib.scan(args.program, dictionary, config.threshold, config.jobs)
    sys.stdout.write(
        scanlib.report_to_json(report) + "\n" if args.json else scanlib.report_to_text(report)
    )
    return 0


def _cmd_evaluate(args, config: Config) -> int:
    labdir = Path(args.labdir)
    dictionary = signature.dict_load(_require_dict_path(args))
    labeled = [
        (program, scanlib.load_program(labdir / program), label)
        for program, label in scanlib.load_labels(labdir / "labels.tsv")
    ]
    result = scanlib.evaluate(labeled, dictionary, config.threshold, config.jobs)
    if args.json:
        print(
            json.dumps(
                {
                    "precision": result.precision,
                    "recall": result.recall,
                    "f_measure": result.f_measure,
                }
            )
        )
    else:
        print("precision recall f_measure")
        print(f"{result.precision:g} {result.recall:g} {result.f_measure:g}")

    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with (out_dir / "metrics.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["precision", "recall", "f_measure"])
            writer.writerow([result.precision, result.recall, result.f_measure])
        if not args.no_plot:
            from . import plots

            plots.save_metrics_plot(
                result.precision, result.recall, result.f_measure, out_dir / "metrics.png"
            )
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser, *, dict_flag=False, report_flags=False):
    sub.add_argument("--config", help="JSON config file (flags override it)")
    sub.add_argument("--seed", type=int, help="RNG seed (default 42)")
    sub.add_argument("--jobs", type=int, help="worker cap for parallel stages")
    if dict_flag:
        sub.add_argument("--dict", help="dictionary file (default: $OPSIG_DICT)")
    if report_flags:
        sub.add_argument("--out-dir", help="write CSV/figure reports into this directory")
        sub.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def build_parser() -> _Parser:
    parser = _Parser(prog="opsig", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("sign", help="print marked-CFG signatures for listing files")
    p.add_argument("listing", nargs="+")
    p.add_argument("--family")
    _add_common(p)
    p.set_defaults(handler=_cmd_sign)

    p = commands.add_parser("dict-add", help="sign listings and append to a dictionary")
    p.add_argument("listing", nargs="+")
    p.add_argument("--family")
    _add_common(p, dict_flag=True)
    p.set_defaults(handler=_cmd_dict_add)

    p = commands.add_parser("dict-list", help="list dictionary entries")
    _add_common(p, dict_flag=True)
    p.set_defaults(handler=_cmd_dict_list)

    p = commands.add_parser("mine", help="select reference ngrams (or census with --census)")
    p.add_argument("manifest")
    p.add_argument(
        "--ngram-size", type=int, dest="ngram_size", choices=range(1, 10), metavar="1..9"
    )
    p.add_argument("--k", type=int, help="reference size (default 100)")
    p.add_argument("--census", action="store_true", help="emit the per-size census instead")
    p.add_argument("--blocklist", help="comma-separated descriptor prefixes to drop")
    _add_common(p, report_flags=True)
    p.set_defaults(handler=_cmd_mine)

    p = commands.add_parser("featurize", help="turn a corpus into presence vectors (CSV)")
    p.add_argument("manifest")
    p.add_argument("--reference", required=True, help="reference ngrams (CSV or plain lines)")
    p.add_argument("--out", required=True, help="dataset CSV path")
    p.add_argument("--blocklist")
    _add_common(p)
    p.set_defaults(handler=_cmd_featurize)

    p = commands.add_parser("train", help="train/evaluate a classifier on a dataset CSV")
    p.add_argument("dataset")
    p.add_argument("--classifier", choices=("tree", "knn"), default="tree")
    p.add_argument("--max-depth", type=int, default=12)
    p.add_argument("--knn-k", type=int, default=3)
    p.add_argument("--flag-out", help="write doc ids classified malicious to this file")
    _add_common(p, report_flags=True)
    p.set_defaults(handler=_cmd_train)

    p = commands.add_parser("scan", help="scan a program directory against a dictionary")
    p.add_argument("program")
    p.add_argument("--threshold", type=float)
    p.add_argument("--json", action="store_true")
    _add_common(p, dict_flag=True)
    p.set_defaults(handler=_cmd_scan)

    p = commands.add_parser("evaluate", help="score a labeled program tree against a dictionary")
    p.add_argument("labdir")
    p.add_argument("--threshold", type=float)
    p.add_argument("--json", action="store_true")
    _add_common(p, dict_flag=True, report_flags=True)
    p.set_defaults(handler=_cmd_evaluate)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _merge(_load_config(args.config), args)
        if config.threshold < 0:
            raise ValueError("threshold must be >= 0")
        return args.handler(args, config)
    except (OSError, ValueError, KeyError, ListingError, CodecError) as exc:
        print(f"opsig: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
