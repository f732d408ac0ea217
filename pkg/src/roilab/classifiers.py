"""From-scratch text classifiers with probability outputs.

Two learners are implemented directly (no ML library behind them): a
multinomial naive Bayes with Laplace smoothing, computed in log space, and
a random forest of CART trees grown on Gini impurity over bootstrap
samples. Both expose calibrated-enough class probabilities for the active
learning loop: NB posteriors, and vote fractions for the forest.

All randomness is reproducible: tree ``t`` of a forest draws from
``default_rng([spec.seed, t])``, so results are independent of build order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .corpus import ordered_classes

NB = "nb"
RF = "rf"


@dataclass(frozen=True)
class ModelSpec:
    """Hyper-parameters for one learner configuration."""

    kind: str
    nb_alpha: float = 1.0
    rf_n_trees: int = 100
    rf_max_depth: int | None = None
    rf_min_samples_split: int = 2
    rf_max_features: str | int = "sqrt"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).lower())
        if self.kind not in (NB, RF):
            raise ValueError(f"unknown model kind: {self.kind!r}")
        if self.nb_alpha <= 0:
            raise ValueError("nb_alpha must be > 0")
        if self.rf_n_trees < 1:
            raise ValueError("rf_n_trees must be >= 1")
        if self.rf_max_depth is not None and self.rf_max_depth < 1:
            raise ValueError("rf_max_depth must be >= 1 or None")
        if self.rf_min_samples_split < 2:
            raise ValueError("rf_min_samples_split must be >= 2")
        if isinstance(self.rf_max_features, str):
            if self.rf_max_features not in ("sqrt", "all"):
                raise ValueError("rf_max_features must be 'sqrt', 'all' or a positive int")
        elif self.rf_max_features < 1:
            raise ValueError("rf_max_features must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


def default_nb_grid(seed: int = 0) -> list[ModelSpec]:
    return [ModelSpec(NB, nb_alpha=a, seed=seed) for a in (0.1, 0.5, 1.0)]


def default_rf_grid(seed: int = 0) -> list[ModelSpec]:
    return [
        ModelSpec(RF, rf_n_trees=t, rf_max_depth=d, seed=seed)
        for t in (50, 100)
        for d in (8, None)
    ]


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError("expected a vector or a (n, V) matrix")
    return X


def _encode_labels(y: Sequence[str], classes: tuple[str, ...]) -> np.ndarray:
    lookup = {c: i for i, c in enumerate(classes)}
    try:
        return np.array([lookup[label] for label in y], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"label {exc.args[0]!r} not in class set {classes}") from None


def _resolve_classes(y: Sequence[str], classes: Sequence[str] | None) -> tuple[str, ...]:
    resolved = tuple(classes) if classes is not None else ordered_classes(y)
    if len(set(y)) < 2:
        raise ValueError("training set contains a single class")
    return resolved


# ---------------------------------------------------------------------------
# Multinomial naive Bayes
# ---------------------------------------------------------------------------


@dataclass
class NaiveBayesModel:
    classes: tuple[str, ...]
    alpha: float
    class_log_prior: np.ndarray
    feature_log_prob: np.ndarray  # (C, V)

    @property
    def n_features(self) -> int:
        return self.feature_log_prob.shape[1]

    def _check(self, X) -> np.ndarray:
        X = _as_matrix(X)
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"vector dimension {X.shape[1]} does not match model dimension {self.n_features}"
            )
        return X

    def predict_log_proba(self, X) -> np.ndarray:
        X = self._check(X)
        joint = X @ self.feature_log_prob.T + self.class_log_prior
        peak = joint.max(axis=1, keepdims=True)
        log_norm = peak + np.log(np.exp(joint - peak).sum(axis=1, keepdims=True))
        return joint - log_norm

    def predict_proba(self, X) -> np.ndarray:
        return np.exp(self.predict_log_proba(X))

    def predict(self, X) -> np.ndarray:
        idx = np.argmax(self.predict_log_proba(X), axis=1)
        return np.array([self.classes[i] for i in idx])


def train_nb(
    X, y: Sequence[str], alpha: float = 1.0, classes: Sequence[str] | None = None
) -> NaiveBayesModel:
    """Fit multinomial NB with Laplace smoothing ``alpha``; priors are the
    empirical class frequencies."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    X = _as_matrix(X)
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    cls = _resolve_classes(y, classes)
    y_idx = _encode_labels(y, cls)
    n, V = X.shape
    C = len(cls)

    counts = np.zeros(C, dtype=np.float64)
    token_counts = np.zeros((C, V), dtype=np.float64)
    for c in range(C):
        rows = y_idx == c
        counts[c] = rows.sum()
        if counts[c]:
            token_counts[c] = X[rows].sum(axis=0)
    if np.count_nonzero(counts) < 2:
        raise ValueError("training set contains a single class")

    with np.errstate(divide="ignore"):
        log_prior = np.log(counts / n)
    feature_log_prob = np.log(token_counts + alpha) - np.log(
        token_counts.sum(axis=1, keepdims=True) + alpha * V
    )
    return NaiveBayesModel(cls, alpha, log_prior, feature_log_prob)


# ---------------------------------------------------------------------------
# Random forest
# ---------------------------------------------------------------------------


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "label_idx")

    def __init__(self):
        self.feature = None
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.label_idx = -1


def _best_split(sub: np.ndarray, onehot: np.ndarray) -> tuple[int, float] | None:
    """Gini-optimal (column, threshold) over candidate columns ``sub``.

    Ties resolve to the lowest column then the lowest threshold position,
    which keeps tree growth deterministic. Class counts are integer-valued,
    so float32 accumulation is exact at this scale.
    """
    n = sub.shape[0]
    if n < 2:
        return None
    order = np.argsort(sub, axis=0, kind="stable")
    xs = np.take_along_axis(sub, order, axis=0)
    left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, m, C)
    total = onehot.sum(axis=0)  # (C,)
    n_left = np.arange(1, n, dtype=np.float32)[:, None]
    n_right = np.float32(n) - n_left
    sumsq_left = np.einsum("ijk,ijk->ij", left, left)
    cross = left @ total  # sum_c left_c * total_c per position/column
    sumsq_right = float(total @ total) - 2.0 * cross + sumsq_left
    # n * weighted Gini, dropping the constant 1/n factor
    score = n_left - sumsq_left / n_left + n_right - sumsq_right / n_right
    valid = xs[1:] > xs[:-1]
    score = np.where(valid, score, np.inf)
    flat = score.T.reshape(-1)  # column-major: column precedence on ties
    k = int(np.argmin(flat))
    if not np.isfinite(flat[k]):
        return None
    col, pos = divmod(k, n - 1)
    threshold = 0.5 * (xs[pos, col] + xs[pos + 1, col])
    return col, float(threshold)


def _grow(
    X: np.ndarray,
    y_idx: np.ndarray,
    onehot: np.ndarray,
    idx: np.ndarray,
    rng: np.random.Generator,
    depth: int,
    max_depth: int | None,
    min_split: int,
    n_candidates: int,
    n_classes: int,
) -> _Node:
    node = _Node()
    counts = np.bincount(y_idx[idx], minlength=n_classes)
    node.label_idx = int(np.argmax(counts))  # majority; ties -> lowest class index
    if counts.max() == idx.size or idx.size < min_split:
        return node
    if max_depth is not None and depth >= max_depth:
        return node

    feats = np.sort(rng.choice(X.shape[1], size=n_candidates, replace=False))
    found = _best_split(X[np.ix_(idx, feats)], onehot[idx])
    if found is None:
        return node
    col, threshold = found
    node.feature = int(feats[col])
    node.threshold = threshold
    mask = X[idx, node.feature] <= threshold
    node.left = _grow(X, y_idx, onehot, idx[mask], rng, depth + 1,
                      max_depth, min_split, n_candidates, n_classes)
    node.right = _grow(X, y_idx, onehot, idx[~mask], rng, depth + 1,
                       max_depth, min_split, n_candidates, n_classes)
    return node


def _tree_predict(root: _Node, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.int64)
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.feature is None:
            out[idx] = node.label_idx
        else:
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
    return out


@dataclass
class RandomForestModel:
    classes: tuple[str, ...]
    spec: ModelSpec
    n_features: int
    trees: list[_Node] = field(repr=False)
    in_bag: list[np.ndarray] = field(repr=False)

    def _check(self, X) -> np.ndarray:
        X = _as_matrix(X)
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"vector dimension {X.shape[1]} does not match model dimension {self.n_features}"
            )
        return X

    def tree_votes(self, X) -> np.ndarray:
        """Per-tree predicted class indices, shape (n_trees, n_samples)."""
        X = self._check(X)
        return np.stack([_tree_predict(t, X) for t in self.trees])

    def predict_proba(self, X) -> np.ndarray:
        votes = self.tree_votes(X)
        C = len(self.classes)
        return (votes[:, :, None] == np.arange(C)[None, None, :]).mean(axis=0)

    def predict(self, X) -> np.ndarray:
        idx = np.argmax(self.predict_proba(X), axis=1)
        return np.array([self.classes[i] for i in idx])


def _n_candidates(rule: str | int, V: int) -> int:
    if rule == "sqrt":
        return max(1, int(round(math.sqrt(V))))
    if rule == "all":
        return V
    return min(int(rule), V)


def train_rf(
    X, y: Sequence[str], spec: ModelSpec, classes: Sequence[str] | None = None
) -> RandomForestModel:
    """Fit a random forest: seeded bootstrap per tree, Gini CART growth,
    ``spec.rf_max_features`` candidate features per split."""
    if spec.kind != RF:
        raise ValueError("spec.kind must be 'rf'")
    X = _as_matrix(X)
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    cls = _resolve_classes(y, classes)
    y_idx = _encode_labels(y, cls)
    n, V = X.shape
    C = len(cls)
    onehot = np.eye(C, dtype=np.float32)[y_idx]
    n_candidates = _n_candidates(spec.rf_max_features, V)

    trees: list[_Node] = []
    in_bag: list[np.ndarray] = []
    for t in range(spec.rf_n_trees):
        rng = np.random.default_rng([spec.seed, t])
        bag = np.sort(rng.integers(0, n, size=n))
        trees.append(
            _grow(X, y_idx, onehot, bag, rng, 0, spec.rf_max_depth,
                  spec.rf_min_samples_split, n_candidates, C)
        )
        in_bag.append(bag)
    return RandomForestModel(cls, spec, V, trees, in_bag)


def train_model(
    X, y: Sequence[str], spec: ModelSpec, classes: Sequence[str] | None = None
):
    if spec.kind == NB:
        return train_nb(X, y, spec.nb_alpha, classes)
    return train_rf(X, y, spec, classes)


def predict_proba(model, X) -> np.ndarray:
    """Class probabilities aligned with ``model.classes``; rows sum to 1."""
    return model.predict_proba(X)


def predict(model, X) -> np.ndarray:
    """Argmax labels; probability ties resolve to the lowest class index."""
    return model.predict(X)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class EvalMetrics:
    """Per-class confusion counts with derived precision/recall/F1."""

    classes: tuple[str, ...]
    tp: tuple[int, ...]
    fp: tuple[int, ...]
    fn: tuple[int, ...]
    tn: tuple[int, ...]

    def _i(self, label: str) -> int:
        try:
            return self.classes.index(label)
        except ValueError:
            raise KeyError(f"label {label!r} not in {self.classes}") from None

    def precision(self, label: str) -> float:
        i = self._i(label)
        return _safe_div(self.tp[i], self.tp[i] + self.fp[i])

    def recall(self, label: str) -> float:
        i = self._i(label)
        return _safe_div(self.tp[i], self.tp[i] + self.fn[i])

    def f1(self, label: str) -> float:
        p, r = self.precision(label), self.recall(label)
        return _safe_div(2 * p * r, p + r)

    @property
    def macro_f1(self) -> float:
        return sum(self.f1(c) for c in self.classes) / len(self.classes)

    @property
    def n_test(self) -> int:
        return self.tp[0] + self.fp[0] + self.fn[0] + self.tn[0]

    def counts(self, label: str) -> dict[str, int]:
        i = self._i(label)
        return {"tp": self.tp[i], "fp": self.fp[i], "fn": self.fn[i], "tn": self.tn[i]}

    def as_dict(self) -> dict:
        per_class = {}
        for c in self.classes:
            per_class[c] = dict(
                self.counts(c),
                precision=self.precision(c),
                recall=self.recall(c),
                f1=self.f1(c),
            )
        return {"classes": list(self.classes), "per_class": per_class,
                "macro_f1": self.macro_f1, "n_test": self.n_test}


def confusion_metrics(
    y_true: Sequence[str], y_pred: Sequence[str], classes: Sequence[str]
) -> EvalMetrics:
    cls = tuple(classes)
    t = _encode_labels(y_true, cls)
    p = _encode_labels(y_pred, cls)
    tp, fp, fn, tn = [], [], [], []
    for c in range(len(cls)):
        tp.append(int(np.sum((p == c) & (t == c))))
        fp.append(int(np.sum((p == c) & (t != c))))
        fn.append(int(np.sum((p != c) & (t == c))))
        tn.append(int(np.sum((p != c) & (t != c))))
    return EvalMetrics(cls, tuple(tp), tuple(fp), tuple(fn), tuple(tn))


def evaluate(model, X, y_true: Sequence[str]) -> EvalMetrics:
    """Confusion counts and per-class P/R/F1 of ``model`` on a test set."""
    if len(y_true) == 0:
        raise ValueError("empty test set")
    y_pred = model.predict(X)
    return confusion_metrics(list(y_true), list(y_pred), model.classes)


# ---------------------------------------------------------------------------
# Cross-validation and tuning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TuneResult:
    best_spec: ModelSpec
    best_mean_macro_f1: float
    pooled_metrics: EvalMetrics
    per_spec: tuple[tuple[ModelSpec, float], ...]


def stratified_folds(y: Sequence[str], k: int, seed: int) -> list[np.ndarray]:
    """Seeded stratified k-fold assignment; every datum lands in exactly
    one test fold. Raises when a class has fewer than ``k`` members."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(y) < k:
        raise ValueError("need at least k data points")
    y = list(y)
    classes = ordered_classes(y)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0  # rolling start keeps fold sizes balanced across classes
    for c in classes:
        idx = [i for i, label in enumerate(y) if label == c]
        if len(idx) < k:
            raise ValueError(
                f"class {c} has only {len(idx)} members; choose k <= {len(idx)}"
            )
        perm = rng.permutation(idx)
        for pos, i in enumerate(perm):
            folds[(pos + offset) % k].append(int(i))
        offset = (offset + len(perm)) % k
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def cross_validate_tune(
    grid: Sequence[ModelSpec], X, y: Sequence[str], k: int = 10, seed: int = 0
) -> TuneResult:
    """Grid search by mean macro-F1 over stratified k-fold CV.

    Ties go to the earliest spec in the grid. The returned pooled metrics
    sum the best spec's confusion counts over all folds.
    """
    if not grid:
        raise ValueError("empty spec grid")
    X = _as_matrix(X)
    y = list(y)
    classes = ordered_classes(y)
    folds = stratified_folds(y, k, seed)
    all_idx = np.arange(len(y))

    results = []
    for spec in grid:
        fold_f1 = []
        pooled = np.zeros((4, len(classes)), dtype=np.int64)
        for fold in folds:
            train_mask = ~np.isin(all_idx, fold)
            model = train_model(X[train_mask], [y[i] for i in all_idx[train_mask]],
                                spec, classes=classes)
            m = evaluate(model, X[fold], [y[i] for i in fold])
            fold_f1.append(m.macro_f1)
            pooled += np.array([m.tp, m.fp, m.fn, m.tn])
        results.append((spec, float(np.mean(fold_f1)), pooled))

    best_spec, best_f1, best_pooled = results[0]
    for spec, mean_f1, pooled in results[1:]:
        if mean_f1 > best_f1:
            best_spec, best_f1, best_pooled = spec, mean_f1, pooled
    metrics = EvalMetrics(
        tuple(classes),
        tuple(int(v) for v in best_pooled[0]),
        tuple(int(v) for v in best_pooled[1]),
        tuple(int(v) for v in best_pooled[2]),
        tuple(int(v) for v in best_pooled[3]),
    )
    return TuneResult(
        best_spec=best_spec,
        best_mean_macro_f1=best_f1,
        pooled_metrics=metrics,
        per_spec=tuple((spec, f1) for spec, f1, _ in results),
    )


def model_summary(model, metrics: EvalMetrics | None = None) -> dict:
    """JSON-serializable description of a trained model (+ optional report)."""
    if isinstance(model, NaiveBayesModel):
        spec: dict = {"kind": NB, "nb_alpha": model.alpha}
    else:
        spec = asdict(model.spec)
    out = {"spec": spec, "classes": list(model.classes)}
    if metrics is not None:
        out["metrics"] = metrics.as_dict()
    return out
