"""End-to-end program scanning against a signature dictionary.

A program is a directory of ``.lst`` listing files.  Every method CFG is
compared against every dictionary entry that shares at least one block
fingerprint with it; pairs without a shared fingerprint are skipped, which
is sound because such a pair can never reach a nonzero score.  The program
verdict is the strongest method verdict (KNOWN_MALWARE > VARIANT > CLEAN).
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import matching
from .cfg import Cfg, build_cfg
from .listing import ListingError, MethodListing, parse_listing
from .signature import Dictionary

logger = logging.getLogger(__name__)

KNOWN_MALWARE = "KNOWN_MALWARE"
VARIANT = "VARIANT"
CLEAN = "CLEAN"


@dataclass(frozen=True)
class MethodHit:
    method: str
    referent: str
    family: str | None
    structural: bool
    score: float
    verdict: str


@dataclass(frozen=True)
class ScanStats:
    methods: int
    comparisons: int
    prefilter_skips: int


@dataclass(frozen=True)
class ScanReport:
    program: str
    verdict: str
    hits: tuple[MethodHit, ...]
    families: tuple[str, ...]
    stats: ScanStats
    empty_dictionary: bool = False


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f_measure: float
    true_positives: int
    false_positives: int
    false_negatives: int


def _scan_method(cfg: Cfg, dictionary: Dictionary, threshold: float):
    hits = []
    comparisons = 0
    skips = 0
    fingerprints = set(cfg.fingerprints)
    for entry in dictionary.entries:
        if fingerprints.isdisjoint(entry.fingerprints):
            skips += 1
            continue
        comparisons += 1
        result = matching.match(entry, cfg, threshold)
        if result.verdict != matching.NO_MATCH:
            hits.append(
                MethodHit(
                    method=cfg.descriptor,
                    referent=entry.descriptor,
                    family=entry.family,
                    structural=result.structural,
                    score=result.score,
                    verdict=result.verdict,
                )
            )
    return hits, comparisons, skips


def scan_methods(
    program_id: str,
    methods: list[MethodListing],
    dictionary: Dictionary,
    threshold: float = 0.5,
    jobs: int = 1,
) -> ScanReport:
    cfgs = [build_cfg(m) for m in methods]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(lambda c: _scan_method(c, dictionary, threshold), cfgs)
            )
    else:
        results = [_scan_method(c, dictionary, threshold) for c in cfgs]

    hits: list[MethodHit] = []
    comparisons = 0
    skips = 0
    for method_hits, n_comp, n_skip in results:
        hits.extend(method_hits)
        comparisons += n_comp
        skips += n_skip
    hits.sort(key=lambda h: (h.method, h.family or "", h.referent))

    if any(h.verdict == matching.KNOWN for h in hits):
        verdict = KNOWN_MALWARE
    elif hits:
        verdict = VARIANT
    else:
        verdict = CLEAN
    families = tuple(sorted({h.family for h in hits if h.family}))
    return ScanReport(
        program=program_id,
        verdict=verdict,
        hits=tuple(hits),
        families=families,
        stats=ScanStats(len(cfgs), comparisons, skips),
        empty_dictionary=not dictionary.entries,
    )


def load_program(path: str | Path) -> list[MethodListing]:
    """All methods from the directory's ``.lst`` files; unreadable files are skipped."""
    methods: list[MethodListing] = []
    for listing_path in sorted(Path(path).glob("*.lst")):
        try:
            methods.extend(parse_listing(listing_path.read_text(encoding="utf-8")))
        except (OSError, ListingError) as exc:
            logger.warning("skipping %s: %s", listing_path, exc)
    return methods


def scan(
    program_dir: str | Path,
    dictionary: Dictionary,
    threshold: float = 0.5,
    jobs: int = 1,
) -> ScanReport:
    program_dir = Path(program_dir)
    return scan_methods(program_dir.name, load_program(program_dir), dictionary, threshold, jobs)


def evaluate(
    labeled_programs: list[tuple[str, list[MethodListing], int]],
    dictionary: Dictionary,
    threshold: float = 0.5,
    jobs: int = 1,
) -> EvalResult:
    """Precision/recall/F-measure over program verdicts; hits of either kind count as positive."""
    tp = fp = fn = 0
    for program_id, methods, label in labeled_programs:
        report = scan_methods(program_id, methods, dictionary, threshold, jobs)
        positive = report.verdict in (KNOWN_MALWARE, VARIANT)
        if positive and label == 1:
            tp += 1
        elif positive and label == 0:
            fp += 1
        elif not positive and label == 1:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f_measure = (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return EvalResult(precision, recall, f_measure, tp, fp, fn)


def load_labels(path: str | Path) -> list[tuple[str, int]]:
    """Read ``<program-dir>\\t<0|1>`` lines (1 = infected)."""
    out = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or fields[1] not in ("0", "1"):
            raise ValueError(f"{path}:{lineno}: expected '<program>\\t<0|1>'")
        out.append((fields[0], int(fields[1])))
    return out


def report_to_json(report: ScanReport) -> str:
    payload = {
        "program": report.program,
        "verdict": report.verdict,
        "hits": [
            {
                "method": h.method,
                "referent": h.referent,
                "family": h.family,
                "structural": h.structural,
                "score": h.score,
                "verdict": h.verdict,
            }
            for h in report.hits
        ],
        "stats": {
            "methods": report.stats.methods,
            "comparisons": report.stats.comparisons,
            "prefilter_skips": report.stats.prefilter_skips,
        },
    }
    return json.dumps(payload, indent=2)


def report_to_text(report: ScanReport) -> str:
    lines = [f"program: {report.program}", f"verdict: {report.verdict}"]
    if report.empty_dictionary:
        lines.append("note: dictionary is empty; verdict is trivially CLEAN")
    if report.families:
        lines.append("families: " + ", ".join(report.families))
    for h in report.hits:
        family = h.family or "-"
        lines.append(
            f"  {h.verdict:8s} {h.score:.3f} {h.method} ~ {h.referent} [{family}]"
        )
    stats = report.stats
    lines.append(
        f"stats: methods={stats.methods} comparisons={stats.comparisons} "
        f"prefilter_skips={stats.prefilter_skips}"
    )
    return "\n".join(lines) + "\n"
