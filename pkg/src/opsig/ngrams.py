"""Opcode-ngram statistics: TF-IDF scoring and reference-set selection.

Documents are methods; tokens are opcode byte values rendered as two hex
digits ("22", "07", ...).  An ngram is a space-joined window of tokens.
TF is the occurrence share of an ngram among all same-size windows of one
document; IDF is ln(total documents / documents containing the ngram).
The reference set keeps the ngrams whose mean TF-IDF differs most between
the malware and benign classes.
"""
from __future__ import annotations

import csv
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .listing import MethodListing, parse_listing

logger = logging.getLogger(__name__)

DEFAULT_BLOCKLIST: tuple[str, ...] = ("Landroid/", "Ljava/", "Lcom/google/")


@dataclass(frozen=True)
class Document:
    doc_id: str
    tokens: tuple[str, ...]
    label: int  # 0 benign, 1 malware
    family: str | None = None


@dataclass(frozen=True)
class NgramStats:
    ngram: str
    tf: dict[str, float]  # doc_id -> term frequency
    idf: float
    tfidf: dict[str, float]  # doc_id -> tf * idf
    doc_count: int


def document_from_method(
    method: MethodListing, source: str, label: int, family: str | None = None
) -> Document:
    tokens = tuple(f"{ins.opcode:02x}" for ins in method.instructions)
    return Document(f"{source}::{method.descriptor}", tokens, label, family)


def extract_ngrams(doc: Document, size: int) -> Counter:
    """All contiguous token windows of the given size, with multiplicity."""
    if size < 1:
        raise ValueError("ngram size must be >= 1")
    return Counter(
        " ".join(doc.tokens[i : i + size]) for i in range(len(doc.tokens) - size + 1)
    )


def tf(ngram: str, doc: Document) -> float:
    """Occurrences of the ngram over all windows of its size; 0 for short docs."""
    counts = extract_ngrams(doc, len(ngram.split(" ")))
    total = sum(counts.values())
    return counts[ngram] / total if total else 0.0


def idf(ngram: str, corpus: list[Document]) -> float:
    """ln(|D| / document frequency); 0 when the ngram appears nowhere."""
    if not corpus:
        raise ValueError("corpus must be non-empty")
    size = len(ngram.split(" "))
    df = sum(1 for doc in corpus if ngram in extract_ngrams(doc, size))
    return math.log(len(corpus) / df) if df else 0.0


def tfidf(ngram: str, doc: Document, corpus: list[Document]) -> float:
    return tf(ngram, doc) * idf(ngram, corpus)


def collect_stats(ngram: str, corpus: list[Document]) -> NgramStats:
    idf_value = idf(ngram, corpus)
    tf_map = {doc.doc_id: tf(ngram, doc) for doc in corpus}
    return NgramStats(
        ngram=ngram,
        tf=tf_map,
        idf=idf_value,
        tfidf={doc_id: value * idf_value for doc_id, value in tf_map.items()},
        doc_count=sum(1 for value in tf_map.values() if value > 0),
    )


def _doc_counts(corpus: list[Document], size: int) -> list[tuple[Counter, int]]:
    out = []
    for doc in corpus:
        counts = extract_ngrams(doc, size)
        out.append((counts, sum(counts.values())))
    return out


def discriminance_scores(corpus: list[Document], size: int) -> dict[str, float]:
    """|mean tfidf over malware docs - mean tfidf over benign docs| per ngram.

    Ngrams present in every document have idf 0 and therefore score 0.
    """
    per_doc = _doc_counts(corpus, size)
    df: Counter = Counter()
    for counts, _ in per_doc:
        df.update(counts.keys())

    n_docs = len(corpus)
    n_mal = sum(1 for doc in corpus if doc.label == 1)
    n_ben = n_docs - n_mal
    if n_mal == 0 or n_ben == 0:
        raise ValueError("corpus must contain both classes")

    sums: dict[str, list[float]] = {g: [0.0, 0.0] for g in df}
    for doc, (counts, total) in zip(corpus, per_doc):
        if not total:
            continue
        for g, c in counts.items():
            sums[g][doc.label] += c / total
    return {
        g: math.log(n_docs / df[g]) * abs(mal_sum / n_mal - ben_sum / n_ben)
        for g, (ben_sum, mal_sum) in sums.items()
    }


def select_reference(corpus: list[Document], size: int, k: int = 100) -> list[str]:
    """Top-k ngrams by discriminance, descending, ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = discriminance_scores(corpus, size)
    ranked = sorted(scores, key=lambda g: (-scores[g], g))
    if len(ranked) < k:
        logger.warning("only %d distinct ngrams available, requested %d", len(ranked), k)
    return ranked[:k]


def ngram_census(corpus: list[Document], sizes: range = range(1, 10)) -> dict[int, int]:
    """Distinct-ngram count per size."""
    census = {}
    for size in sizes:
        distinct: set[str] = set()
        for doc in corpus:
            distinct.update(extract_ngrams(doc, size).keys())
        census[size] = len(distinct)
    return census


def load_manifest(
    path: str | Path, blocklist: tuple[str, ...] = DEFAULT_BLOCKLIST
) -> list[Document]:
    """Read a corpus manifest: one ``<listing-path>\\t<class>[\\t<family>]`` per line.

    Paths are resolved relative to the manifest.  Every method of every
    listed file becomes one document, minus methods whose descriptor starts
    with a blocklisted prefix (platform API code).
    """
    path = Path(path)
    documents: list[Document] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
        listing_path = path.parent / fields[0]
        label = int(fields[1])
        if label not in (0, 1):
            raise ValueError(f"{path}:{lineno}: class must be 0 or 1")
        family = fields[2] if len(fields) == 3 else None
        for method in parse_listing(listing_path.read_text(encoding="utf-8")):
            if any(method.descriptor.startswith(prefix) for prefix in blocklist):
                continue
            documents.append(document_from_method(method, fields[0], label, family))
    return documents


def write_census_csv(census: dict[int, int], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "distinct_ngrams"])
        for size in sorted(census):
            writer.writerow([size, census[size]])


def write_selection_csv(
    reference: list[str], scores: dict[str, float], path: str | Path
) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "ngram", "score"])
        for rank, g in enumerate(reference):
            writer.writerow([rank, g, scores[g]])
