import json
import random

import pytest

from opsig.cfg import build_cfg
from opsig.listing import parse_listing
from opsig.matching import match
from opsig.signature import Dictionary, Signature, from_cfg
from opsig.scanner import (
    CLEAN,
    KNOWN_MALWARE,
    VARIANT,
    evaluate,
    load_labels,
    load_program,
    report_to_json,
    report_to_text,
    scan,
    scan_methods,
)

import labgen
from conftest import Z_RUN_LISTING, random_method


@pytest.fixture(scope="module")
def lab(tmp_path_factory):
    root = tmp_path_factory.mktemp("lab")
    labels = labgen.build_lab_corpus(root, seed=42)
    programs = [
        (name, load_program(root / name), label) for name, label in labels
    ]
    return root, labels, programs


def dictionary_for(variant):
    return Dictionary(entries=[labgen.payload_signature(variant)])


def test_exact_copy_is_known_malware(z_run_cfg):
    dictionary = Dictionary(entries=[from_cfg(z_run_cfg, family="DroidJack")])
    methods = parse_listing(Z_RUN_LISTING)
    report = scan_methods("prog", methods, dictionary)
    assert report.verdict == KNOWN_MALWARE
    assert report.families == ("DroidJack",)
    assert report.hits[0].score == 1.0
    assert report.stats.methods == 1 and report.stats.comparisons == 1


def test_injected_variant_is_variant(lab):
    root, _, _ = lab
    dictionary = dictionary_for(1)
    report = scan(root / "infected_03_v2", dictionary)
    assert report.verdict == VARIANT
    assert any(h.verdict == VARIANT and h.score >= 0.5 for h in report.hits)
    assert report.families == (labgen.FAMILY,)


def test_disjoint_program_is_clean_with_zero_comparisons(lab):
    root, _, _ = lab
    dictionary = dictionary_for(1)
    report = scan(root / "clean_000", dictionary)
    assert report.verdict == CLEAN
    assert report.stats.comparisons == 0
    assert report.stats.prefilter_skips == report.stats.methods


def test_empty_dictionary_is_flagged_clean(z_run_cfg):
    methods = parse_listing(Z_RUN_LISTING)
    report = scan_methods("prog", methods, Dictionary())
    assert report.verdict == CLEAN
    assert report.empty_dictionary
    assert "dictionary is empty" in report_to_text(report)


def test_prefilter_skips_only_zero_score_pairs(lab):
    # every skipped (method, entry) pair force-matched must give x = 0
    _, _, programs = lab
    for variant in (1, 2, 3):
        entry = labgen.payload_signature(variant)
        for name, methods, _ in programs[:20]:
            for method in methods:
                cfg = build_cfg(method)
                if set(cfg.fingerprints).isdisjoint(entry.fingerprints):
                    assert match(entry, cfg, 0.5).x == 0


def test_lab_evaluation_is_perfect_for_each_variant_dictionary(lab):
    _, _, programs = lab
    for variant in (1, 2, 3):
        result = evaluate(programs, dictionary_for(variant), threshold=0.5)
        assert (result.precision, result.recall, result.f_measure) == (1.0, 1.0, 1.0)
        assert result.true_positives == 30


def test_empty_dictionary_has_zero_recall(lab):
    _, _, programs = lab
    result = evaluate(programs, Dictionary(), threshold=0.5)
    assert result.recall == 0.0
    assert result.true_positives == 0


def test_threshold_above_one_counts_only_exact_hits(lab):
    _, _, programs = lab
    result = evaluate(programs, dictionary_for(1), threshold=1.01)
    # only the 10 programs carrying variant 1 itself remain detectable
    assert result.true_positives == 10
    assert result.false_positives == 0
    assert result.recall == pytest.approx(10 / 30)


def test_threshold_monotonicity(lab):
    _, _, programs = lab
    dictionary = dictionary_for(2)
    positives = []
    for threshold in (0.0, 0.25, 0.5, 0.75, 1.0):
        result = evaluate(programs, dictionary, threshold)
        positives.append(result.true_positives + result.false_positives)
    assert positives == sorted(positives, reverse=True)


def test_scan_reports_are_deterministic(lab):
    root, _, _ = lab
    dictionary = dictionary_for(1)
    a = scan(root / "infected_00_v1", dictionary)
    b = scan(root / "infected_00_v1", dictionary)
    assert report_to_json(a) == report_to_json(b)
    assert report_to_text(a) == report_to_text(b)
    c = scan(root / "infected_00_v1", dictionary, jobs=4)
    assert report_to_json(c) == report_to_json(a)


def test_json_report_schema(lab):
    root, _, _ = lab
    payload = json.loads(report_to_json(scan(root / "infected_01_v3", dictionary_for(3))))
    assert set(payload) == {"program", "verdict", "hits", "stats"}
    assert payload["program"] == "infected_01_v3"
    assert payload["verdict"] == "KNOWN_MALWARE"
    assert set(payload["stats"]) == {"methods", "comparisons", "prefilter_skips"}
    hit = payload["hits"][0]
    assert set(hit) == {"method", "referent", "family", "structural", "score", "verdict"}
    assert hit["structural"] is True


def test_unreadable_listing_skipped_with_warning(tmp_path, caplog):
    (tmp_path / "good.lst").write_text(
        ".method La/A.a()V\n0000 0e RETURN_VOID\n.end method\n", encoding="utf-8"
    )
    (tmp_path / "bad.lst").write_text("0000 garbage\n", encoding="utf-8")
    with caplog.at_level("WARNING"):
        methods = load_program(tmp_path)
    assert len(methods) == 1
    assert "bad.lst" in caplog.text


def test_load_labels(tmp_path):
    (tmp_path / "labels.tsv").write_text("# c\np1\t1\np2\t0\n", encoding="utf-8")
    assert load_labels(tmp_path / "labels.tsv") == [("p1", 1), ("p2", 0)]
    (tmp_path / "labels.tsv").write_text("p1\tyes\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_labels(tmp_path / "labels.tsv")


def test_program_verdict_is_strongest_hit():
    rng = random.Random(1)
    host = random_method(rng, "Lh/H.h()V", 8)
    payload = parse_listing(labgen.PAYLOAD_VARIANTS[1])[0]
    variant2 = parse_listing(labgen.PAYLOAD_VARIANTS[2])[0]
    dictionary = Dictionary(
        entries=[labgen.payload_signature(1), labgen.payload_signature(2)]
    )
    # program holds variant 1: KNOWN against entry 1, VARIANT against entry 2
    report = scan_methods("p", [host, payload], dictionary)
    assert report.verdict == KNOWN_MALWARE
    verdicts = {h.verdict for h in report.hits}
    assert verdicts == {"KNOWN", "VARIANT"}
    # program holding only a cross variant stays VARIANT
    report2 = scan_methods("q", [host, variant2], Dictionary(entries=[labgen.payload_signature(1)]))
    assert report2.verdict == VARIANT
