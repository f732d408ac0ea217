"""Active learning: uncertainty scores, batch selection, the oracle
boundary, and the query-label-retrain loop."""

import math

import numpy as np
import pytest

from roilab.active import (
    ALConfig,
    OracleSim,
    load_iteration_records,
    make_al_dataset,
    normalize_strategy,
    run_learning,
    select_batch,
    uncertainty_score,
    write_iteration_records,
)
from roilab.classifiers import ModelSpec, train_nb
from roilab.corpus import SynthConfig, build_pairs, filter_and_binarize, synth_corpus


class TestUncertaintyScore:
    def test_min_margin_examples(self):
        close = uncertainty_score((0.4, 0.39, 0.21), "MinMargin")
        clear = uncertainty_score((0.5, 0.3, 0.2), "MinMargin")
        assert close == pytest.approx(0.99)
        assert clear == pytest.approx(0.8)
        assert close > clear

    def test_least_confidence(self):
        assert uncertainty_score((0.9, 0.1), "LeastConfidence") == pytest.approx(0.1)

    def test_entropy_uniform(self):
        score = uncertainty_score((1 / 3, 1 / 3, 1 / 3), "Entropy")
        assert score == pytest.approx(math.log(3), rel=1e-12)

    def test_entropy_zero_term(self):
        assert uncertainty_score((1.0, 0.0), "Entropy") == pytest.approx(0.0)

    def test_invalid_vector(self):
        with pytest.raises(ValueError):
            uncertainty_score((0.9, 0.3), "MinMargin")
        with pytest.raises(ValueError):
            uncertainty_score((1.0,), "MinMargin")
        with pytest.raises(ValueError):
            uncertainty_score((-0.1, 1.1), "Entropy")

    def test_random_has_no_score(self):
        with pytest.raises(ValueError):
            uncertainty_score((0.5, 0.5), "Random")

    def test_matrix_input(self):
        scores = uncertainty_score(np.array([[0.9, 0.1], [0.6, 0.4]]), "MinMargin")
        np.testing.assert_allclose(scores, [0.2, 0.8])

    def test_strategy_normalization(self):
        assert normalize_strategy("MinMargin") == "min_margin"
        assert normalize_strategy("least-confidence") == "least_confidence"
        assert normalize_strategy("Baseline") == "random"
        with pytest.raises(ValueError):
            normalize_strategy("oracle")


class FixedProbaModel:
    def __init__(self, probs):
        self.probs = np.asarray(probs, dtype=float)

    def predict_proba(self, X):
        return self.probs


class TestSelectBatch:
    def test_top_k(self):
        model = FixedProbaModel([[0.9, 0.1], [0.5, 0.5]])  # scores 0.2, 1.0
        picked = select_batch(["A", "B"], np.zeros((2, 1)), model, "MinMargin", 1)
        assert picked == ["B"]

    def test_tie_break_by_id(self):
        model = FixedProbaModel([[0.5, 0.5], [0.5, 0.5]])
        picked = select_batch(["B", "A"], np.zeros((2, 1)), model, "MinMargin", 1)
        assert picked == ["A"]

    def test_random_deterministic(self):
        ids = [f"i{i}" for i in range(10)]
        one = select_batch(ids, np.zeros((10, 1)), None, "Random", 4, seed=3)
        two = select_batch(ids, np.zeros((10, 1)), None, "Random", 4, seed=3)
        assert one == two
        assert len(set(one)) == 4

    def test_pool_too_small(self):
        with pytest.raises(ValueError):
            select_batch(["A"], np.zeros((1, 1)), None, "Random", 2)


class TestOracleSim:
    def test_counts_distinct_queries_once(self):
        oracle = OracleSim({"a": "X", "b": "Y"})
        assert oracle.query(["a"]) == {"a": "X"}
        oracle.query(["a", "a"])
        assert oracle.query_count == 1
        oracle.query(["b"])
        assert oracle.query_count == 2
        assert oracle.revealed_ids == {"a", "b"}

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            OracleSim({"a": "X"}).query(["zzz"])

    def test_stratified_seed(self):
        labels = {f"x{i}": "X" for i in range(5)}
        labels.update({f"y{i}": "Y" for i in range(5)})
        oracle = OracleSim(labels)
        seed_ids = oracle.stratified_seed(2, seed=0)
        assert len(seed_ids) == 4
        got = oracle.query(seed_ids)
        assert sorted(got.values()) == ["X", "X", "Y", "Y"]

    def test_stratified_seed_insufficient(self):
        oracle = OracleSim({"a": "X", "b": "Y"})
        with pytest.raises(ValueError, match="X"):
            oracle.stratified_seed(2, seed=0)


def ternary_dataset(n_records=400, seed=0, min_df=1):
    cfg = SynthConfig(n_records=n_records, seed=seed, class_mix=(0.5, 0.3, 0.2),
                      link_density=0.8)
    records = synth_corpus(cfg)
    pairs = filter_and_binarize(build_pairs(records, cfg.independent_ratio, seed=seed), 3)
    return make_al_dataset(pairs, test_ratio=0.2, min_df=min_df, seed=seed)


SMALL_SPEC = ModelSpec("nb", nb_alpha=1.0)


def small_config(**kw):
    base = dict(model_spec=SMALL_SPEC, strategy="min_margin", seed_per_class=5,
                batch_size=3, iterations=3, seed=1)
    base.update(kw)
    return ALConfig(**base)


class TestRunLearning:
    def test_training_size_arithmetic(self):
        # three classes at 60 seeds each, two batches of 20
        cfg = SynthConfig(n_records=1200, seed=3, class_mix=(0.5, 0.3, 0.2),
                          link_density=0.8)
        records = synth_corpus(cfg)
        pairs = filter_and_binarize(build_pairs(records, cfg.independent_ratio, seed=3), 3)
        dataset = make_al_dataset(pairs, test_ratio=0.2, min_df=1, seed=3)
        config = ALConfig(model_spec=SMALL_SPEC, strategy="min_margin",
                          seed_per_class=60, batch_size=20, iterations=2, seed=3)
        run = run_learning(dataset, config)
        assert [r.n_train for r in run.records] == [180, 200, 220]
        assert not run.truncated

    def test_zero_iterations(self):
        run = run_learning(ternary_dataset(), small_config(iterations=0))
        assert len(run.records) == 1
        assert run.records[0].iteration == 0

    def test_deterministic(self):
        dataset = ternary_dataset()
        one = run_learning(dataset, small_config())
        two = run_learning(dataset, small_config())
        assert one.records == two.records

    def test_nested_growth_and_disjoint_batches(self):
        run = run_learning(ternary_dataset(), small_config(iterations=4))
        seen = set()
        for i, rec in enumerate(run.records):
            assert rec.iteration == i
            assert rec.n_train == 15 + 3 * i
            assert not seen & set(rec.queried_ids)
            seen |= set(rec.queried_ids)

    def test_oracle_boundary(self):
        dataset = ternary_dataset()
        run = run_learning(dataset, small_config(iterations=4))
        queried = set()
        for rec in run.records:
            queried |= set(rec.queried_ids)
        assert run.oracle.revealed_ids == queried
        assert run.oracle.query_count == run.records[-1].n_train
        assert queried <= set(dataset.pool_ids)

    def test_strategies_share_seed_set_and_test_set(self):
        dataset = ternary_dataset()
        al = run_learning(dataset, small_config(strategy="min_margin"))
        base = run_learning(dataset, small_config(strategy="random"))
        assert al.records[0] == base.records[0]
        assert al.records[0].n_test == len(dataset.test_y)

    def test_pool_exhaustion_truncates(self, caplog):
        dataset = ternary_dataset(n_records=120)
        config = small_config(batch_size=30, iterations=50)
        with caplog.at_level("WARNING"):
            run = run_learning(dataset, config)
        assert run.truncated
        assert len(run.records) < 51
        assert "exhausted" in caplog.text

    def test_f1_requires_tracked(self):
        run = run_learning(ternary_dataset(), small_config())
        assert all(0.0 <= r.f1_requires <= 1.0 for r in run.records)


class TestIterationCsv:
    def test_roundtrip(self, tmp_path):
        run = run_learning(ternary_dataset(), small_config())
        path = tmp_path / "iterations.csv"
        write_iteration_records(path, run.records)
        loaded = load_iteration_records(path)
        assert [r.iteration for r in loaded] == [r.iteration for r in run.records]
        np.testing.assert_allclose(
            [r.f1_requires for r in loaded],
            [r.f1_requires for r in run.records],
            rtol=0,
        )
        header = path.read_text().splitlines()[0]
        assert header == "iteration,n_train,n_test,f1_requires,macro_f1"


class TestALConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ALConfig(model_spec=SMALL_SPEC, batch_size=0)
        with pytest.raises(ValueError):
            ALConfig(model_spec=SMALL_SPEC, iterations=-1)
        with pytest.raises(ValueError):
            ALConfig(model_spec=SMALL_SPEC, strategy="mystery")

    def test_strategy_normalized(self):
        config = ALConfig(model_spec=SMALL_SPEC, strategy="MinMargin")
        assert config.strategy == "min_margin"
