"""Pool-based active learning with a simulated oracle.

The harness keeps the ground-truth labels behind :class:`OracleSim`; the
learner only ever sees labels for instances it has queried (the seed set
counts as queried). Each iteration scores the remaining pool with the
current model, queries a batch, and retrains from scratch, so runs with
different query strategies but equal seeds share the initial seed set and
the held-out test set.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classifiers import ModelSpec, evaluate, train_model
from .corpus import (
    REQUIRES,
    RequirementPair,
    open_text,
    ordered_classes,
    stratified_split,
)
from .errors import SchemaError
from .textprep import Vocabulary, build_vocab, vectorize_pairs

logger = logging.getLogger(__name__)

MIN_MARGIN = "min_margin"
LEAST_CONFIDENCE = "least_confidence"
ENTROPY = "entropy"
RANDOM = "random"
STRATEGIES = (MIN_MARGIN, LEAST_CONFIDENCE, ENTROPY, RANDOM)


def normalize_strategy(name: str) -> str:
    key = str(name).lower().replace("-", "").replace("_", "").replace(" ", "")
    mapping = {
        "minmargin": MIN_MARGIN,
        "margin": MIN_MARGIN,
        "leastconfidence": LEAST_CONFIDENCE,
        "entropy": ENTROPY,
        "random": RANDOM,
        "baseline": RANDOM,
    }
    if key not in mapping:
        raise ValueError(f"unknown query strategy: {name!r}")
    return mapping[key]


def uncertainty_score(probs, strategy: str):
    """Score class-probability vectors; higher means more uncertain.

    min_margin: 1 - (p1 - p2) for the two largest entries.
    least_confidence: 1 - max p.
    entropy: -sum p ln p, with 0 ln 0 := 0.
    """
    strategy = normalize_strategy(strategy)
    if strategy == RANDOM:
        raise ValueError("random selection has no uncertainty score")
    p = np.asarray(probs, dtype=np.float64)
    single = p.ndim == 1
    if single:
        p = p[None, :]
    if p.ndim != 2 or p.shape[1] < 2:
        raise ValueError("need probability vectors over at least 2 classes")
    if np.any(p < -1e-12) or np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-6):
        raise ValueError("invalid probability vector")

    if strategy == MIN_MARGIN:
        top = np.sort(p, axis=1)[:, ::-1]
        scores = 1.0 - (top[:, 0] - top[:, 1])
    elif strategy == LEAST_CONFIDENCE:
        scores = 1.0 - p.max(axis=1)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log(p), 0.0)
        scores = -terms.sum(axis=1)
    return float(scores[0]) if single else scores


def select_batch(
    ids: Sequence[str],
    X: np.ndarray,
    model,
    strategy: str,
    k: int,
    seed=0,
) -> list[str]:
    """Pick ``k`` pool instances to query.

    Uncertainty strategies take the top-k scores with ties broken by
    ascending instance id; the random strategy samples uniformly without
    replacement from the id-sorted pool.
    """
    strategy = normalize_strategy(strategy)
    if len(ids) < k:
        raise ValueError(f"pool of {len(ids)} cannot supply a batch of {k}")
    if strategy == RANDOM:
        ordered = sorted(ids)
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(ordered), size=k, replace=False)
        return sorted(ordered[int(i)] for i in picks)
    scores = uncertainty_score(model.predict_proba(X), strategy)
    ranked = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    return [ids[i] for i in ranked[:k]]


class OracleSim:
    """Ground-truth label source; counts each distinct queried instance once."""

    def __init__(self, labels: Mapping[str, str]):
        self._labels = dict(labels)
        self._revealed: set[str] = set()

    @property
    def query_count(self) -> int:
        return len(self._revealed)

    @property
    def revealed_ids(self) -> frozenset[str]:
        return frozenset(self._revealed)

    def query(self, ids: Iterable[str]) -> dict[str, str]:
        out = {}
        for iid in ids:
            if iid not in self._labels:
                raise KeyError(f"unknown instance id: {iid}")
            self._revealed.add(iid)
            out[iid] = self._labels[iid]
        return out

    def stratified_seed(self, per_class: int, seed=0) -> list[str]:
        """Seeded sample of ``per_class`` instance ids for every class."""
        by_class: dict[str, list[str]] = {}
        for iid in sorted(self._labels):
            by_class.setdefault(self._labels[iid], []).append(iid)
        rng = np.random.default_rng(seed)
        chosen: list[str] = []
        for c in ordered_classes(by_class):
            idx = by_class[c]
            if len(idx) < per_class:
                raise ValueError(
                    f"class {c} has only {len(idx)} pool instances; need {per_class}"
                )
            picks = rng.choice(len(idx), size=per_class, replace=False)
            chosen += [idx[int(i)] for i in picks]
        return chosen


@dataclass(frozen=True)
class ALConfig:
    """Settings for one active-learning run."""

    model_spec: ModelSpec
    strategy: str = MIN_MARGIN
    seed_per_class: int = 60
    batch_size: int = 20
    iterations: int = 20
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", normalize_strategy(self.strategy))
        if self.seed_per_class < 1:
            raise ValueError("seed_per_class must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    n_train: int
    n_test: int
    f1_requires: float
    macro_f1: float
    queried_ids: tuple[str, ...] = ()


@dataclass
class ALDataset:
    """Unlabeled pool (labels held by the oracle builder) plus fixed test set."""

    pool_ids: tuple[str, ...]
    pool_X: np.ndarray
    pool_labels: dict[str, str]
    test_X: np.ndarray
    test_y: tuple[str, ...]
    classes: tuple[str, ...]
    vocab: Vocabulary


def make_al_dataset(
    pairs: Sequence[RequirementPair],
    test_ratio: float = 0.2,
    min_df: int = 1,
    seed: int = 0,
    stopwords=None,
) -> ALDataset:
    """Hold out a stratified test split, then vectorize pool and test with a
    vocabulary fitted on pool texts only."""
    if not 0 < test_ratio < 1:
        raise ValueError("test_ratio must be in (0, 1)")
    pool, test = stratified_split(pairs, 1.0 - test_ratio, seed)
    vocab = build_vocab(pool, min_df=min_df, stopwords=stopwords)
    return ALDataset(
        pool_ids=tuple(p.instance_id for p in pool),
        pool_X=vectorize_pairs(pool, vocab, stopwords=stopwords),
        pool_labels={p.instance_id: p.label for p in pool},
        test_X=vectorize_pairs(test, vocab, stopwords=stopwords),
        test_y=tuple(p.label for p in test),
        classes=ordered_classes(p.label for p in pool),
        vocab=vocab,
    )


@dataclass
class LearningRun:
    records: list[IterationRecord]
    truncated: bool
    oracle: OracleSim
    config: ALConfig


def run_learning(dataset: ALDataset, config: ALConfig) -> LearningRun:
    """Run the seeded query-label-retrain loop.

    Iteration 0 trains on the stratified seed set; each later iteration
    queries ``batch_size`` instances (strategy-dependent), reveals their
    labels through the oracle, retrains from scratch and evaluates on the
    fixed test set. If the pool runs dry mid-run the record list is
    truncated and the run is flagged.
    """
    oracle = OracleSim(dataset.pool_labels)
    # The seed set depends on (dataset, config.seed) only, never on the
    # strategy, so runs with different strategies stay comparable.
    seed_ids = oracle.stratified_seed(config.seed_per_class, seed=config.seed)
    labeled = oracle.query(seed_ids)
    row_of = {iid: i for i, iid in enumerate(dataset.pool_ids)}

    def fit():
        ids_sorted = sorted(labeled)
        rows = [row_of[i] for i in ids_sorted]
        return train_model(
            dataset.pool_X[rows],
            [labeled[i] for i in ids_sorted],
            config.model_spec,
            classes=dataset.classes,
        )

    def snapshot(model, iteration: int, queried: Sequence[str]) -> IterationRecord:
        m = evaluate(model, dataset.test_X, dataset.test_y)
        f1_req = m.f1(REQUIRES) if REQUIRES in dataset.classes else 0.0
        return IterationRecord(
            iteration=iteration,
            n_train=len(labeled),
            n_test=len(dataset.test_y),
            f1_requires=f1_req,
            macro_f1=m.macro_f1,
            queried_ids=tuple(queried),
        )

    model = fit()
    records = [snapshot(model, 0, seed_ids)]
    truncated = False
    for iteration in range(1, config.iterations + 1):
        remaining = [iid for iid in dataset.pool_ids if iid not in labeled]
        if len(remaining) < config.batch_size:
            logger.warning(
                "pool exhausted after %d iterations (%d instances left)",
                iteration - 1, len(remaining),
            )
            truncated = True
            break
        rows = [row_of[i] for i in remaining]
        batch = select_batch(
            remaining,
            dataset.pool_X[rows],
            model,
            config.strategy,
            config.batch_size,
            seed=[config.seed, iteration],
        )
        labeled.update(oracle.query(batch))
        model = fit()
        records.append(snapshot(model, iteration, batch))
    return LearningRun(records=records, truncated=truncated, oracle=oracle, config=config)


ITERATION_COLUMNS = ("iteration", "n_train", "n_test", "f1_requires", "macro_f1")


def write_iteration_records(path, records: Sequence[IterationRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ITERATION_COLUMNS)
        for r in records:
            writer.writerow(
                [r.iteration, r.n_train, r.n_test, repr(r.f1_requires), repr(r.macro_f1)]
            )


def load_iteration_records(source) -> list[IterationRecord]:
    with open_text(source) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in ITERATION_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"iterations file missing column(s): {', '.join(missing)}")
        return [
            IterationRecord(
                iteration=int(row["iteration"]),
                n_train=int(row["n_train"]),
                n_test=int(row["n_test"]),
                f1_requires=float(row["f1_requires"]),
                macro_f1=float(row["macro_f1"]),
            )
            for row in reader
        ]
