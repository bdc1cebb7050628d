"""Presence vectors over a reference ngram set, plus desk-scale classifiers.

Vectors are binary: bit i says whether reference ngram i occurs as a
contiguous window in the document.  Two classifiers are built in, a
Gini-split decision tree and a Hamming-distance KNN; anything heavier is
expected to run outside on the exported CSV.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ngrams import Document


@dataclass(frozen=True)
class FeatureVector:
    doc_id: str
    bits: tuple[bool, ...]
    label: int


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    folds: int
    fold_scores: tuple[Scores, ...]


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "tree"  # "tree" | "knn"
    max_depth: int = 12
    k: int = 3


def featurize(doc: Document, reference: list[str]) -> FeatureVector:
    """Presence bit per reference ngram, by contiguous window containment."""
    if not reference:
        raise ValueError("reference must be non-empty")
    bits = []
    for ngram in reference:
        window = tuple(ngram.split(" "))
        size = len(window)
        bits.append(
            any(doc.tokens[i : i + size] == window for i in range(len(doc.tokens) - size + 1))
        )
    return FeatureVector(doc.doc_id, tuple(bits), doc.label)


def featurize_corpus(corpus: list[Document], reference: list[str]) -> list[FeatureVector]:
    return [featurize(doc, reference) for doc in corpus]


# ---------------------------------------------------------------------------
# Decision tree (CART on boolean features, Gini impurity)
# ---------------------------------------------------------------------------

@dataclass
class _Node:
    label: int | None = None
    feature: int | None = None
    left: "_Node | None" = None  # feature bit false
    right: "_Node | None" = None  # feature bit true


@dataclass
class DecisionTree:
    max_depth: int = 12
    root: _Node = field(default_factory=_Node)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        self.root = self._grow(X, y, depth=0)
        return self

    def _grow(self, X: np.ndarray, y: np.ndarray, depth: int) -> _Node:
        majority = int(np.bincount(y, minlength=2).argmax())
        if depth >= self.max_depth or len(np.unique(y)) == 1:
            return _Node(label=majority)
        feature, gain = self._best_split(X, y)
        if feature is None or gain <= 0.0:
            return _Node(label=majority)
        mask = X[:, feature]
        return _Node(
            feature=feature,
            left=self._grow(X[~mask], y[~mask], depth + 1),
            right=self._grow(X[mask], y[mask], depth + 1),
        )

    @staticmethod
    def _gini(y: np.ndarray) -> float:
        if len(y) == 0:
            return 0.0
        p = np.bincount(y, minlength=2) / len(y)
        return float(1.0 - np.sum(p**2))

    def _best_split(self, X: np.ndarray, y: np.ndarray) -> tuple[int | None, float]:
        parent = self._gini(y)
        n = len(y)
        best_feature, best_gain = None, 0.0
        for f in range(X.shape[1]):
            mask = X[:, f]
            n_right = int(mask.sum())
            if n_right == 0 or n_right == n:
                continue
            gain = parent - (
                (n - n_right) / n * self._gini(y[~mask]) + n_right / n * self._gini(y[mask])
            )
            if gain > best_gain:
                best_feature, best_gain = f, gain
        return best_feature, best_gain

    def predict_one(self, bits) -> int:
        node = self.root
        while node.label is None:
            node = node.right if bits[node.feature] else node.left
        return node.label

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict_one(row) for row in X], dtype=int)


def train_tree(vectors: list[FeatureVector], max_depth: int = 12) -> DecisionTree:
    X = np.array([v.bits for v in vectors], dtype=bool)
    y = np.array([v.label for v in vectors], dtype=int)
    return DecisionTree(max_depth=max_depth).fit(X, y)


# ---------------------------------------------------------------------------
# KNN (Hamming distance, odd k, majority vote)
# ---------------------------------------------------------------------------

def knn_classify(vectors: list[FeatureVector], query, k: int) -> int:
    if k % 2 == 0:
        raise ValueError("k must be odd")
    if k >= len(vectors):
        raise ValueError("k must be smaller than the training set")
    query = tuple(bool(b) for b in query)
    ranked = sorted(
        range(len(vectors)),
        key=lambda i: (sum(a != b for a, b in zip(vectors[i].bits, query)), i),
    )
    votes = [vectors[i].label for i in ranked[:k]]
    return int(sum(votes) * 2 > len(votes))


@dataclass
class KnnModel:
    vectors: list[FeatureVector]
    k: int

    def predict_one(self, bits) -> int:
        return knn_classify(self.vectors, bits, self.k)

    def predict(self, X) -> np.ndarray:
        return np.array([self.predict_one(row) for row in X], dtype=int)


def fit_classifier(spec: ClassifierSpec, vectors: list[FeatureVector]):
    if spec.kind == "tree":
        return train_tree(vectors, max_depth=spec.max_depth)
    if spec.kind == "knn":
        return KnnModel(vectors, spec.k)
    raise ValueError(f"unknown classifier kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def prf_scores(y_true, y_pred) -> Scores:
    tp = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 1)
    fp = sum(1 for t, p in zip(y_true, y_pred) if t == 0 and p == 1)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 0)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Scores(precision, recall, f1)


def _stratified_split(labels: list[int], test_share: float, rng: random.Random):
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in (0, 1):
        members = [i for i, lab in enumerate(labels) if lab == cls]
        rng.shuffle(members)
        n_test = round(len(members) * test_share)
        test_idx.extend(members[:n_test])
        train_idx.extend(members[n_test:])
    return sorted(train_idx), sorted(test_idx)


def stratified_folds(labels: list[int], n_folds: int, rng: random.Random) -> list[list[int]]:
    """Fold sizes differ by at most 1 and class ratios stay within one sample."""
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    position = 0
    for cls in (0, 1):
        members = [i for i, lab in enumerate(labels) if lab == cls]
        rng.shuffle(members)
        for idx in members:
            folds[position % n_folds].append(idx)
            position += 1
    return [sorted(f) for f in folds]


def split_and_crossvalidate(
    vectors: list[FeatureVector],
    spec: ClassifierSpec = ClassifierSpec(),
    seed: int = 42,
    n_folds: int = 10,
) -> EvalReport:
    """Stratified 80/20 holdout plus stratified k-fold CV on the training part."""
    labels = [v.label for v in vectors]
    if len(vectors) < 20:
        raise ValueError("need at least 20 vectors")
    if len(set(labels)) < 2:
        raise ValueError("both classes must be present")

    rng = random.Random(seed)
    train_idx, test_idx = _stratified_split(labels, 0.2, rng)
    train = [vectors[i] for i in train_idx]
    test = [vectors[i] for i in test_idx]

    model = fit_classifier(spec, train)
    holdout = prf_scores(
        [v.label for v in test], [model.predict_one(v.bits) for v in test]
    )

    fold_scores = []
    folds = stratified_folds([v.label for v in train], n_folds, rng)
    for fold in folds:
        fold_set = set(fold)
        fit_part = [v for i, v in enumerate(train) if i not in fold_set]
        eval_part = [train[i] for i in fold]
        fold_model = fit_classifier(spec, fit_part)
        fold_scores.append(
            prf_scores(
                [v.label for v in eval_part],
                [fold_model.predict_one(v.bits) for v in eval_part],
            )
        )
    return EvalReport(
        precision=holdout.precision,
        recall=holdout.recall,
        f1=holdout.f1,
        folds=n_folds,
        fold_scores=tuple(fold_scores),
    )


def flag_characteristic_methods(vectors: list[FeatureVector], model) -> list[str]:
    """Doc ids the model classifies as malicious, in input order."""
    return [v.doc_id for v in vectors if model.predict_one(v.bits) == 1]


# ---------------------------------------------------------------------------
# CSV dataset export / import
# ---------------------------------------------------------------------------

def write_dataset(path: str | Path, vectors: list[FeatureVector], reference: list[str]) -> None:
    """Write ``doc_id,g0..g{k-1},class`` rows plus a ``.ngrams`` sidecar."""
    path = Path(path)
    k = len(reference)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id"] + [f"g{i}" for i in range(k)] + ["class"])
        for v in vectors:
            if len(v.bits) != k:
                raise ValueError(f"vector {v.doc_id} has {len(v.bits)} bits, reference has {k}")
            writer.writerow([v.doc_id] + [int(b) for b in v.bits] + [v.label])
    path.with_name(path.name + ".ngrams").write_text(
        "".join(g + "\n" for g in reference), encoding="utf-8"
    )


def read_dataset(path: str | Path) -> tuple[list[FeatureVector], list[str] | None]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[0] != "doc_id" or header[-1] != "class":
            raise ValueError(f"{path}: not a feature dataset (bad header)")
        vectors = [
            FeatureVector(row[0], tuple(cell == "1" for cell in row[1:-1]), int(row[-1]))
            for row in reader
        ]
    sidecar = path.with_name(path.name + ".ngrams")
    reference = (
        sidecar.read_text(encoding="utf-8").splitlines() if sidecar.exists() else None
    )
    return vectors, reference
