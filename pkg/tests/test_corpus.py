"""Corpus construction: record loading, pair building, balancing, synthesis."""

import io
from collections import Counter

import numpy as np
import pytest

from roilab.corpus import (
    BINARY_LABELS,
    DEPENDENT,
    INDEPENDENT,
    OTHER,
    REQUIRES,
    RequirementRecord,
    SynthConfig,
    balance_and_split,
    binary_view,
    build_pairs,
    filter_and_binarize,
    load_pairs,
    load_records,
    make_pair,
    ordered_classes,
    stratified_split,
    synth_corpus,
    write_pairs,
    write_records,
)
from roilab.errors import DataError, EmptyCorpusError, IntegrityError, SchemaError

RECORDS_CSV = """id,title,product,priority,type,depends_on,see_also
7,Add sync,core,P1,enhancement,3;5,
3,Improve cache,core,P2,enhancement,,
5,Support offline mode,ui,P3,enhancement,,7
"""


def rec(rid, title="one two three", dep=(), see=()):
    return RequirementRecord(
        id=rid, title=title, depends_on=list(dep), see_also=list(see)
    )


class TestLoadRecords:
    def test_field_mapping(self):
        records = load_records(io.StringIO(RECORDS_CSV))
        assert [r.id for r in records] == ["7", "3", "5"]
        assert records[0].depends_on == ["3", "5"]
        assert records[0].title == "Add sync"
        assert records[0].issue_type == "enhancement"

    def test_empty_link_cell(self):
        records = load_records(io.StringIO(RECORDS_CSV))
        assert records[1].depends_on == []
        assert records[1].see_also == []

    def test_missing_column(self):
        bad = RECORDS_CSV.replace("id,title,", "id,name,")
        with pytest.raises(SchemaError, match="title"):
            load_records(io.StringIO(bad))

    def test_duplicate_id(self):
        bad = RECORDS_CSV + "7,Another,core,P1,enhancement,,\n"
        with pytest.raises(IntegrityError, match="7"):
            load_records(io.StringIO(bad))

    def test_self_link_dropped(self):
        text = "id,title,product,priority,type,depends_on,see_also\n1,A title here,,,,1;2,1\n2,B title here,,,,,\n"
        records = load_records(io.StringIO(text))
        assert records[0].depends_on == ["2"]
        assert records[0].see_also == []

    def test_roundtrip(self, tmp_path):
        records = load_records(io.StringIO(RECORDS_CSV))
        path = tmp_path / "records.csv"
        write_records(path, records)
        assert load_records(path) == records


class TestLabels:
    def test_binary_view(self):
        assert binary_view(REQUIRES) == DEPENDENT
        assert binary_view(OTHER) == DEPENDENT
        assert binary_view(INDEPENDENT) == INDEPENDENT
        with pytest.raises(ValueError):
            binary_view("BOGUS")

    def test_ordered_classes(self):
        assert ordered_classes([OTHER, INDEPENDENT, REQUIRES]) == (
            INDEPENDENT, REQUIRES, OTHER,
        )
        assert ordered_classes([DEPENDENT, INDEPENDENT]) == BINARY_LABELS
        assert ordered_classes(["Z", REQUIRES, "A"]) == (REQUIRES, "A", "Z")

    def test_make_pair_canonical(self):
        p = make_pair("b", "a", "text b", "text a", REQUIRES)
        assert (p.id_a, p.id_b) == ("a", "b")
        assert (p.text_a, p.text_b) == ("text a", "text b")
        with pytest.raises(ValueError):
            make_pair("a", "a", "x", "x", REQUIRES)


class TestBuildPairs:
    def test_depends_on_becomes_requires(self):
        pairs = build_pairs([rec("a", dep=["b"]), rec("b"), rec("c"), rec("d")], 1.0, seed=0)
        requires = [p for p in pairs if p.label == REQUIRES]
        assert [(p.id_a, p.id_b) for p in requires] == [("a", "b")]

    def test_see_also_becomes_other(self):
        pairs = build_pairs(
            [rec("a", dep=["b"], see=["c"]), rec("b"), rec("c"), rec("d")], 1.0, seed=0
        )
        other = [p for p in pairs if p.label == OTHER]
        assert [(p.id_a, p.id_b) for p in other] == [("a", "c")]

    def test_see_also_never_overrides_requires(self):
        pairs = build_pairs(
            [rec("a", dep=["b"], see=["b"]), rec("b"), rec("c"), rec("d")], 1.0, seed=0
        )
        labels = {(p.id_a, p.id_b): p.label for p in pairs}
        assert labels[("a", "b")] == REQUIRES

    def test_independent_count_arithmetic(self):
        records = [rec(f"r{i:02d}", dep=[f"r{i + 50:02d}"]) for i in range(10)]
        records += [rec(f"r{i + 50:02d}") for i in range(10)]
        records += [rec(f"x{i:02d}") for i in range(30)]
        pairs = build_pairs(records, independent_ratio=2.0, seed=3)
        counts = Counter(p.label for p in pairs)
        assert counts[REQUIRES] == 10
        assert counts[INDEPENDENT] == 20

    def test_unknown_link_skipped_with_warning(self, caplog):
        with caplog.at_level("WARNING"):
            pairs = build_pairs(
                [rec("a", dep=["b", "zzz"]), rec("b"), rec("c"), rec("d")], 1.0, seed=0
            )
        assert "zzz" in caplog.text
        assert Counter(p.label for p in pairs)[REQUIRES] == 1

    def test_zero_dependent_pairs(self):
        with pytest.raises(EmptyCorpusError):
            build_pairs([rec("a"), rec("b"), rec("c")], 1.0, seed=0)

    def test_bad_ratio(self):
        with pytest.raises(ValueError):
            build_pairs([rec("a", dep=["b"]), rec("b")], 0.0, seed=0)

    def test_no_duplicate_unordered_pairs(self):
        # reciprocal links and repeated links must collapse to one pair
        records = [
            rec("a", dep=["b", "b"]), rec("b", dep=["a"]),
            rec("c", see=["a"]), rec("d"), rec("e"),
        ]
        pairs = build_pairs(records, 2.0, seed=1)
        keys = [p.key for p in pairs]
        assert len(keys) == len(set(keys))

    def test_link_reversal_invariance(self):
        forward = [rec("a", dep=["b"]), rec("b"), rec("c", see=["d"]), rec("d"), rec("e"), rec("f")]
        backward = [rec("a"), rec("b", dep=["a"]), rec("c"), rec("d", see=["c"]), rec("e"), rec("f")]
        assert build_pairs(forward, 2.0, seed=9) == build_pairs(backward, 2.0, seed=9)

    def test_deterministic(self):
        records = synth_corpus(SynthConfig(n_records=60, seed=4))
        assert build_pairs(records, 2.0, seed=7) == build_pairs(records, 2.0, seed=7)

    def test_duplicate_record_ids(self):
        with pytest.raises(IntegrityError):
            build_pairs([rec("a", dep=["b"]), rec("a"), rec("b")], 1.0, seed=0)


class TestFilterAndBinarize:
    def test_short_text_dropped(self):
        pairs = [make_pair("a", "b", "fix crash", "one two three", REQUIRES)]
        assert filter_and_binarize(pairs, min_words=3) == []

    def test_boundary_kept(self):
        pairs = [make_pair("a", "b", "one two three", "four five six", REQUIRES)]
        assert len(filter_and_binarize(pairs, min_words=3)) == 1

    def test_binarize_other(self):
        pairs = [make_pair("a", "b", "one two three", "four five six", OTHER)]
        out = filter_and_binarize(pairs, min_words=3, binary=True)
        assert out[0].label == DEPENDENT

    def test_binarize_preserves_count(self):
        records = synth_corpus(SynthConfig(n_records=80, seed=2))
        pairs = build_pairs(records, 1.5, seed=2)
        plain = filter_and_binarize(pairs, 3, binary=False)
        binary = filter_and_binarize(pairs, 3, binary=True)
        assert len(plain) == len(binary) <= len(pairs)

    def test_min_words_validation(self):
        with pytest.raises(ValueError):
            filter_and_binarize([], min_words=0)


def balanced_pairs(n_dep=100, n_ind=300):
    pairs = [
        make_pair(f"a{i:03d}", f"b{i:03d}", "one two three", "four five six", DEPENDENT)
        for i in range(n_dep)
    ]
    pairs += [
        make_pair(f"c{i:03d}", f"d{i:03d}", "one two three", "four five six", INDEPENDENT)
        for i in range(n_ind)
    ]
    return pairs


class TestBalanceAndSplit:
    def test_count_arithmetic(self):
        split = balance_and_split(balanced_pairs(100, 300), ratio=0.8, seed=0)
        assert len(split.train) == 160
        assert len(split.test) == 40
        train_counts = Counter(p.label for p in split.train)
        assert train_counts == {DEPENDENT: 80, INDEPENDENT: 80}

    def test_already_balanced_is_fixpoint(self):
        pairs = balanced_pairs(50, 50)
        split = balance_and_split(pairs, ratio=0.8, seed=1)
        assert Counter(p.key for p in split.train + split.test) == Counter(
            p.key for p in pairs
        )

    def test_same_seed_identical(self):
        pairs = balanced_pairs(60, 200)
        one = balance_and_split(pairs, 0.8, seed=5)
        two = balance_and_split(pairs, 0.8, seed=5)
        assert one.train == two.train and one.test == two.test

    def test_disjoint_for_any_seed(self):
        pairs = balanced_pairs(40, 90)
        for seed in range(10):
            split = balance_and_split(pairs, 0.75, seed=seed)
            assert not set(p.key for p in split.train) & set(p.key for p in split.test)

    def test_missing_class_named(self):
        pairs = balanced_pairs(10, 0)
        with pytest.raises(DataError, match=INDEPENDENT):
            balance_and_split(pairs, 0.8, seed=0, expected_classes=BINARY_LABELS)

    def test_ratio_within_one_pair(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n_dep = int(rng.integers(10, 60))
            n_ind = int(rng.integers(10, 60))
            ratio = float(rng.uniform(0.5, 0.9))
            split = balance_and_split(balanced_pairs(n_dep, n_ind), ratio, seed=0)
            total = len(split.train) + len(split.test)
            assert abs(len(split.train) - ratio * total) <= 1

    def test_stratified_split_partition(self):
        pairs = balanced_pairs(30, 30)
        train, test = stratified_split(pairs, 0.8, seed=3)
        assert len(train) + len(test) == len(pairs)
        assert not set(p.key for p in train) & set(p.key for p in test)


class TestSynthCorpus:
    def test_deterministic_byte_identical(self, tmp_path):
        cfg = SynthConfig(n_records=40, seed=1)
        one, two = synth_corpus(cfg), synth_corpus(cfg)
        assert one == two
        p1, p2 = tmp_path / "one.csv", tmp_path / "two.csv"
        write_records(p1, one)
        write_records(p2, two)
        assert p1.read_bytes() == p2.read_bytes()

    def test_full_signal_shares_topic_token(self):
        cfg = SynthConfig(n_records=60, seed=3, signal_strength=1.0)
        records = synth_corpus(cfg)
        by_id = {r.id: r for r in records}
        requires = [(r, by_id[r.depends_on[0]]) for r in records if r.depends_on]
        assert requires
        for a, b in requires:
            assert set(a.title.split()) & set(b.title.split())

    def test_zero_other_share(self):
        cfg = SynthConfig(n_records=60, seed=2, class_mix=(0.5, 0.5, 0.0))
        records = synth_corpus(cfg)
        assert all(not r.see_also for r in records)
        assert any(r.depends_on for r in records)

    def test_too_small(self):
        with pytest.raises(ValueError):
            SynthConfig(n_records=5)

    def test_minimum_seats_all_classes(self):
        cfg = SynthConfig(n_records=6, seed=0, class_mix=(1 / 3, 1 / 3, 1 / 3))
        records = synth_corpus(cfg)
        assert sum(bool(r.depends_on) for r in records) == 1
        assert sum(bool(r.see_also) for r in records) == 1
        pairs = build_pairs(records, 1.0, seed=0)
        assert set(ordered_classes(p.label for p in pairs)) == {
            INDEPENDENT, REQUIRES, OTHER,
        }

    def test_invalid_mix(self):
        with pytest.raises(ValueError):
            SynthConfig(n_records=20, class_mix=(0.5, 0.2, 0.2))

    def test_titles_pass_min_words(self):
        records = synth_corpus(SynthConfig(n_records=50, seed=8))
        assert all(len(r.title.split()) >= 3 for r in records)


class TestPairsCsv:
    def test_roundtrip(self, tmp_path):
        records = synth_corpus(SynthConfig(n_records=40, seed=6))
        pairs = build_pairs(records, 1.0, seed=6)
        path = tmp_path / "pairs.csv"
        write_pairs(path, pairs)
        assert load_pairs(path) == pairs

    def test_missing_column(self):
        with pytest.raises(SchemaError, match="label"):
            load_pairs(io.StringIO("id_a,id_b,text_a,text_b\n"))

    def test_unknown_label(self):
        text = "id_a,id_b,text_a,text_b,label\na,b,x,y,SOMETIMES\n"
        with pytest.raises(SchemaError, match="SOMETIMES"):
            load_pairs(io.StringIO(text))
