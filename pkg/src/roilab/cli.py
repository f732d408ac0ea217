"""Experiment orchestration and the ``roilab`` console entry point.

Commands (``synth``, ``prepare``, ``eas1``, ``eas2``, ``report``) are plain
functions over a :class:`RunConfig`, so library users can drive them
programmatically; ``main`` wraps them with config-file parsing, flags and
exit codes (0 ok, 2 config error, 3 data error, 4 runtime error).

Every command is a pure function of (config, input files, seed): re-runs
write byte-identical output files. Nothing here injects timestamps,
absolute paths or environment detail into the outputs.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .active import (
    ALConfig,
    MIN_MARGIN,
    RANDOM,
    normalize_strategy,
    make_al_dataset,
    run_learning,
    write_iteration_records,
)
from .classifiers import (
    ModelSpec,
    NB,
    RF,
    cross_validate_tune,
    evaluate,
    train_model,
)
from .corpus import (
    BINARY_LABELS,
    DEPENDENT,
    SynthConfig,
    balance_and_split,
    build_pairs,
    filter_and_binarize,
    load_pairs,
    load_records,
    ordered_classes,
    synth_corpus,
    write_pairs,
    write_records,
)
from .errors import ConfigError, DataError
from .roi import (
    BenefitParams,
    CUMULATIVE,
    CostParams,
    INCREMENTAL,
    analyze_curve,
    analyze_roi_series,
    build_curve_eas1,
    build_curve_eas2,
    params_from_mapping,
    write_curve,
)
from .textprep import build_vocab, load_stopwords, vectorize_pairs

DEFAULT_FRACTIONS = tuple(round(0.1 * i, 1) for i in range(1, 9))


@dataclass
class RunConfig:
    """Aggregated settings for one experiment run."""

    seed: int = 7
    out_dir: str = "runs/latest"
    # corpus source: a records CSV, a pairs CSV, or the synthetic generator
    records_path: str | None = None
    pairs_path: str | None = None
    synth: SynthConfig = field(default_factory=lambda: SynthConfig(n_records=3000, seed=7))
    independent_ratio: float | None = None
    min_words: int = 3
    # text features
    min_df: int = 1
    stopwords_path: str | None = None
    # training-fraction sweep
    fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    train_ratio: float = 0.8
    cv_folds: int = 10
    nb_alphas: tuple[float, ...] = (0.1, 0.5, 1.0)
    rf_n_trees: tuple[int, ...] = (50, 100)
    rf_max_depths: tuple[int | None, ...] = (8, None)
    # active learning study
    seed_per_class: int = 60
    batch_size: int = 20
    iterations: int = 20
    strategy: str = MIN_MARGIN
    test_ratio: float = 0.2
    mode: str = CUMULATIVE
    al_rf_n_trees: int = 100
    al_rf_max_depth: int | None = None
    # economics
    cost_params: CostParams = field(default_factory=CostParams)
    benefit_params: BenefitParams = field(default_factory=BenefitParams)
    literal_eas1_cost: bool = False
    # raw config file bytes, kept for snapshotting
    config_bytes: bytes | None = None

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if not self.fractions:
            raise ConfigError("fraction grid is empty")
        if any(not 0 < f <= 1 for f in self.fractions):
            raise ConfigError("fractions must lie in (0, 1]")
        if any(b <= a for a, b in zip(self.fractions, self.fractions[1:])):
            raise ConfigError("fractions must be strictly increasing")
        if self.mode not in (CUMULATIVE, INCREMENTAL):
            raise ConfigError(f"unknown roi mode: {self.mode!r}")
        if self.records_path and self.pairs_path:
            raise ConfigError("configure either a records file or a pairs file, not both")
        try:
            self.strategy = normalize_strategy(self.strategy)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def replace(self, **kw) -> "RunConfig":
        if "seed" in kw and "synth" not in kw:
            kw["synth"] = dataclasses.replace(self.synth, seed=kw["seed"])
        return dataclasses.replace(self, **kw)


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_depth(token: str) -> int | None:
    if token.lower() in ("none", "null", "unlimited"):
        return None
    return int(token)


def load_config(path=None) -> RunConfig:
    """Parse the INI-style run configuration; missing keys keep defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = path.read_bytes()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(raw.decode("utf-8"))
    except (UnicodeDecodeError, configparser.Error) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from None

    known = {"run", "corpus", "textprep", "eas1", "eas2", "roi"}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(unknown))}")

    def get(section, key, cast, default):
        if not parser.has_option(section, key):
            return default
        text = parser.get(section, key)
        try:
            return cast(text)
        except (ValueError, TypeError):
            raise ConfigError(f"[{section}] {key}: cannot parse {text!r}") from None

    seed = get("run", "seed", int, 7)
    kw: dict = {
        "seed": seed,
        "out_dir": get("run", "out", str, "runs/latest"),
        "records_path": get("corpus", "records", str, None),
        "pairs_path": get("corpus", "pairs", str, None),
        "independent_ratio": get("corpus", "independent_ratio", float, None),
        "min_words": get("corpus", "min_words", int, 3),
        "min_df": get("textprep", "min_df", int, 1),
        "stopwords_path": get("textprep", "stopwords", str, None),
        "train_ratio": get("eas1", "train_ratio", float, 0.8),
        "cv_folds": get("eas1", "cv_folds", int, 10),
        "literal_eas1_cost": get("eas1", "literal_cost", lambda s: s.lower() == "true", False),
        "seed_per_class": get("eas2", "seed_per_class", int, 60),
        "batch_size": get("eas2", "batch_size", int, 20),
        "iterations": get("eas2", "iterations", int, 20),
        "strategy": get("eas2", "strategy", str, MIN_MARGIN),
        "test_ratio": get("eas2", "test_ratio", float, 0.2),
        "mode": get("eas2", "mode", str, CUMULATIVE),
        "al_rf_n_trees": get("eas2", "rf_n_trees", int, 100),
        "al_rf_max_depth": get("eas2", "rf_max_depth", _parse_depth, None),
        "config_bytes": raw,
    }
    kw["fractions"] = tuple(
        get("eas1", "fractions", lambda s: [float(t) for t in _split_list(s)],
            list(DEFAULT_FRACTIONS))
    )
    kw["nb_alphas"] = tuple(
        get("eas1", "nb_alphas", lambda s: [float(t) for t in _split_list(s)], [0.1, 0.5, 1.0])
    )
    kw["rf_n_trees"] = tuple(
        get("eas1", "rf_n_trees", lambda s: [int(t) for t in _split_list(s)], [50, 100])
    )
    kw["rf_max_depths"] = tuple(
        get("eas1", "rf_max_depths", lambda s: [_parse_depth(t) for t in _split_list(s)],
            [8, None])
    )

    synth_kw: dict = {"seed": seed}
    synth_casts = {
        "n_records": int,
        "signal_strength": float,
        "noise_words": int,
        "topic_size": int,
        "req_topics": int,
        "other_topics": int,
        "ind_topics": int,
        "link_density": float,
    }
    for key, cast in synth_casts.items():
        value = get("corpus", key, cast, None)
        if value is not None:
            synth_kw[key] = value
    mix = get("corpus", "class_mix", lambda s: tuple(float(t) for t in _split_list(s)), None)
    if mix is not None:
        synth_kw["class_mix"] = mix
    title_words = get(
        "corpus", "title_words", lambda s: tuple(int(t) for t in _split_list(s)), None
    )
    if title_words is not None:
        synth_kw["title_words"] = title_words
    synth_kw.setdefault("n_records", 3000)
    try:
        kw["synth"] = SynthConfig(**synth_kw)
    except ValueError as exc:
        raise ConfigError(f"[corpus] {exc}") from None

    if parser.has_section("roi"):
        values = {}
        for key in parser["roi"]:
            values[key] = get("roi", key, float, None)
        try:
            kw["cost_params"], kw["benefit_params"] = params_from_mapping(values)
        except ValueError as exc:
            raise ConfigError(f"[roi] {exc}") from None

    return RunConfig(**kw)


def render_config(config: RunConfig) -> str:
    """Canonical INI rendering of a config (used as the snapshot when the
    run was configured programmatically rather than from a file)."""
    s = config.synth
    depth = lambda d: "none" if d is None else str(d)  # noqa: E731
    lines = [
        "[run]",
        f"seed = {config.seed}",
        f"out = {config.out_dir}",
        "",
        "[corpus]",
    ]
    if config.records_path:
        lines.append(f"records = {config.records_path}")
    if config.pairs_path:
        lines.append(f"pairs = {config.pairs_path}")
    lines += [
        f"n_records = {s.n_records}",
        f"signal_strength = {s.signal_strength!r}",
        f"class_mix = {', '.join(repr(p) for p in s.class_mix)}",
        f"noise_words = {s.noise_words}",
        f"topic_size = {s.topic_size}",
        f"req_topics = {s.req_topics}",
        f"other_topics = {s.other_topics}",
        f"ind_topics = {s.ind_topics}",
        f"link_density = {s.link_density!r}",
        f"title_words = {s.title_words[0]}, {s.title_words[1]}",
        f"min_words = {config.min_words}",
    ]
    if config.independent_ratio is not None:
        lines.append(f"independent_ratio = {config.independent_ratio!r}")
    lines += [
        "",
        "[textprep]",
        f"min_df = {config.min_df}",
    ]
    if config.stopwords_path:
        lines.append(f"stopwords = {config.stopwords_path}")
    lines += [
        "",
        "[eas1]",
        f"fractions = {', '.join(repr(f) for f in config.fractions)}",
        f"train_ratio = {config.train_ratio!r}",
        f"cv_folds = {config.cv_folds}",
        f"nb_alphas = {', '.join(repr(a) for a in config.nb_alphas)}",
        f"rf_n_trees = {', '.join(str(t) for t in config.rf_n_trees)}",
        f"rf_max_depths = {', '.join(depth(d) for d in config.rf_max_depths)}",
        f"literal_cost = {str(config.literal_eas1_cost).lower()}",
        "",
        "[eas2]",
        f"seed_per_class = {config.seed_per_class}",
        f"batch_size = {config.batch_size}",
        f"iterations = {config.iterations}",
        f"strategy = {config.strategy}",
        f"test_ratio = {config.test_ratio!r}",
        f"mode = {config.mode}",
        f"rf_n_trees = {config.al_rf_n_trees}",
        f"rf_max_depth = {depth(config.al_rf_max_depth)}",
        "",
        "[roi]",
        f"c_fixed = {config.cost_params.c_fixed!r}",
        f"c_l = {config.cost_params.c_l!r}",
        f"c_resource = {config.cost_params.c_resource!r}",
        f"h = {config.cost_params.h}",
        f"n = {config.cost_params.n_total}",
        f"b_reward = {config.benefit_params.b_reward!r}",
        f"b_penalty = {config.benefit_params.b_penalty!r}",
        f"p_value = {config.benefit_params.p_value!r}",
        "",
    ]
    return "\n".join(lines)


def _prepare_out(config: RunConfig, out_dir) -> Path:
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    snapshot = config.config_bytes
    if snapshot is None:
        snapshot = render_config(config).encode("utf-8")
    (out / "config_snapshot").write_bytes(snapshot)
    return out


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _stopwords(config: RunConfig):
    return load_stopwords(config.stopwords_path) if config.stopwords_path else None


def _corpus_pairs(config: RunConfig, binary: bool):
    if config.pairs_path:
        pairs = load_pairs(config.pairs_path)
    else:
        if config.records_path:
            records = load_records(config.records_path)
            ratio = config.independent_ratio if config.independent_ratio else 2.0
        else:
            records = synth_corpus(config.synth)
            ratio = (
                config.independent_ratio
                if config.independent_ratio
                else config.synth.independent_ratio
            )
        pairs = build_pairs(records, ratio, seed=config.seed)
    pairs = filter_and_binarize(pairs, config.min_words, binary=binary)
    if not pairs:
        raise DataError("no pairs remain after the min-words filter")
    return pairs


def cmd_synth(config: RunConfig, out_dir=None) -> dict:
    """Generate a synthetic records CSV."""
    out = _prepare_out(config, out_dir)
    records = synth_corpus(config.synth)
    write_records(out / "records.csv", records)
    summary = {
        "command": "synth",
        "n_records": len(records),
        "n_depends_on_links": sum(len(r.depends_on) for r in records),
        "n_see_also_links": sum(len(r.see_also) for r in records),
        "seed": config.seed,
    }
    _write_json(out / "summary.json", summary)
    return summary


def cmd_prepare(config: RunConfig, out_dir=None) -> dict:
    """Build and filter labeled pairs from the configured corpus source."""
    out = _prepare_out(config, out_dir)
    pairs = _corpus_pairs(config, binary=False)
    write_pairs(out / "pairs.csv", pairs)
    counts: dict[str, int] = {}
    for p in pairs:
        counts[p.label] = counts.get(p.label, 0) + 1
    summary = {"command": "prepare", "n_pairs": len(pairs), "label_counts": counts,
               "seed": config.seed}
    _write_json(out / "summary.json", summary)
    return summary


def _min_viable_message(config: RunConfig, per_class: dict[str, int]) -> str:
    worst = min(per_class.values())
    f_min = config.fractions[0]
    needed = int(np.ceil(config.cv_folds / f_min))
    return (
        f"corpus too small for fraction {f_min}: smallest class has {worst} "
        f"training pairs, so the subsample gets {round(f_min * worst)} per class "
        f"but {config.cv_folds}-fold tuning needs >= {config.cv_folds}; "
        f"provide at least {needed} balanced training pairs per class"
    )


def cmd_eas1(config: RunConfig, out_dir=None) -> dict:
    """Training-fraction sweep of the NB and RF learners with ROI curves.

    For each fraction: subsample the balanced training split (nested across
    fractions), tune each learner by cross-validation, evaluate on the
    fixed test split, and price the fraction into an ROI point.
    """
    out = _prepare_out(config, out_dir)
    stopwords = _stopwords(config)
    pairs = _corpus_pairs(config, binary=True)
    split = balance_and_split(pairs, config.train_ratio, config.seed,
                              expected_classes=BINARY_LABELS)
    train, test = split.train, split.test
    classes = ordered_classes(p.label for p in train)
    y_test = [p.label for p in test]

    rng = np.random.default_rng([config.seed, 1])
    order_by_class = {}
    per_class = {}
    for c in classes:
        idx = [i for i, p in enumerate(train) if p.label == c]
        per_class[c] = len(idx)
        order_by_class[c] = [idx[int(k)] for k in rng.permutation(len(idx))]
    if min(round(config.fractions[0] * n) for n in per_class.values()) < config.cv_folds:
        raise DataError(_min_viable_message(config, per_class))

    grids = {
        NB: [ModelSpec(NB, nb_alpha=a, seed=config.seed) for a in config.nb_alphas],
        RF: [
            ModelSpec(RF, rf_n_trees=t, rf_max_depth=d, seed=config.seed)
            for t in config.rf_n_trees
            for d in config.rf_max_depths
        ],
    }
    sweeps: dict[str, list] = {NB: [], RF: []}
    chosen_specs: dict[str, dict[str, dict]] = {NB: {}, RF: {}}
    sweep_rows = []
    for fraction in config.fractions:
        sub_idx = sorted(
            i
            for c in classes
            for i in order_by_class[c][: round(fraction * per_class[c])]
        )
        sub = [train[i] for i in sub_idx]
        y_sub = [p.label for p in sub]
        vocab = build_vocab(sub, config.min_df, stopwords)
        X_sub = vectorize_pairs(sub, vocab, stopwords)
        X_test = vectorize_pairs(test, vocab, stopwords)
        for learner in (NB, RF):
            tune = cross_validate_tune(grids[learner], X_sub, y_sub,
                                       k=config.cv_folds, seed=config.seed)
            model = train_model(X_sub, y_sub, tune.best_spec, classes=classes)
            metrics = evaluate(model, X_test, y_test)
            sweeps[learner].append((fraction, metrics))
            spec_dict = dataclasses.asdict(tune.best_spec)
            chosen_specs[learner][repr(fraction)] = spec_dict
            counts = metrics.counts(DEPENDENT)
            sweep_rows.append(
                [learner, repr(fraction), len(sub), repr(metrics.f1(DEPENDENT)),
                 repr(metrics.macro_f1), counts["tp"], counts["fp"], counts["fn"],
                 counts["tn"]]
            )

    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["learner", "fraction", "n_train", "f1", "macro_f1", "tp", "fp", "fn", "tn"]
        )
        writer.writerows(sweep_rows)

    summary: dict = {
        "command": "eas1",
        "seed": config.seed,
        "n_train": len(train),
        "n_test": len(test),
        "learners": {},
    }
    for learner in (NB, RF):
        curve = build_curve_eas1(
            sweeps[learner], config.cost_params, config.benefit_params,
            positive_class=DEPENDENT, literal=config.literal_eas1_cost,
        )
        write_curve(out / f"roi_eas1_{learner}.csv", curve)
        analysis = analyze_curve(curve)
        summary["learners"][learner] = {
            "peak_fraction": analysis.peak.x,
            "peak_roi": analysis.peak.roi,
            "f1_at_peak": analysis.peak.f1,
            "break_even_x": analysis.break_even_x,
            "tuned_specs": chosen_specs[learner],
        }
    _write_json(out / "summary.json", summary)
    return summary


def cmd_eas2(config: RunConfig, out_dir=None) -> dict:
    """Active learning vs the random baseline, with per-iteration ROI.

    The configured strategy and the random baseline run over the same pool,
    seed set and test set; each run's oracle access is audited against the
    final training-set size.
    """
    out = _prepare_out(config, out_dir)
    stopwords = _stopwords(config)
    pairs = _corpus_pairs(config, binary=False)
    dataset = make_al_dataset(
        pairs, test_ratio=config.test_ratio, min_df=config.min_df,
        seed=config.seed, stopwords=stopwords,
    )
    spec = ModelSpec(
        RF, rf_n_trees=config.al_rf_n_trees, rf_max_depth=config.al_rf_max_depth,
        seed=config.seed,
    )
    strategies = [config.strategy]
    if config.strategy != RANDOM:
        strategies.append(RANDOM)

    summary: dict = {
        "command": "eas2",
        "seed": config.seed,
        "n_pool": len(dataset.pool_ids),
        "n_test": len(dataset.test_y),
        "mode": config.mode,
        "strategies": {},
    }
    for strategy in strategies:
        al_config = ALConfig(
            model_spec=spec,
            strategy=strategy,
            seed_per_class=config.seed_per_class,
            batch_size=config.batch_size,
            iterations=config.iterations,
            seed=config.seed,
        )
        run = run_learning(dataset, al_config)
        if run.oracle.query_count != run.records[-1].n_train:
            raise RuntimeError(
                "oracle audit failed: "
                f"{run.oracle.query_count} labels revealed for a training set of "
                f"{run.records[-1].n_train}"
            )
        write_iteration_records(out / f"iterations_{strategy}.csv", run.records)
        entry = {
            "truncated": run.truncated,
            "labels_revealed": run.oracle.query_count,
            "final_n_train": run.records[-1].n_train,
        }
        if len(run.records) >= 2:
            curve = build_curve_eas2(
                run.records, config.cost_params, config.benefit_params, mode=config.mode
            )
            write_curve(out / f"roi_eas2_{strategy}.csv", curve)
            analysis = analyze_curve(curve)
            entry.update(
                peak_iteration=int(analysis.peak.x),
                peak_roi=analysis.peak.roi,
                f1_at_peak=analysis.peak.f1,
                break_even_x=analysis.break_even_x,
            )
        summary["strategies"][strategy] = entry
    _write_json(out / "summary.json", summary)
    return summary


def _read_series_file(path: Path, series: dict[str, list]) -> None:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in ("x", "roi"):
            if column not in header:
                raise DataError(f"{path}: missing column {column!r}")
        for lineno, row in enumerate(reader, start=2):
            name = (row.get("series") or "").strip() or path.stem
            try:
                x = float(row["x"])
                r = float(row["roi"])
                f1_cell = (row.get("f1") or "").strip()
                f1 = float(f1_cell) if f1_cell else 0.0
            except (TypeError, ValueError):
                raise DataError(f"{path}, row {lineno}: malformed numeric value") from None
            bucket = series.setdefault(name, [])
            if bucket and x <= bucket[-1][0]:
                raise DataError(
                    f"{path}, row {lineno}: x values must increase within series {name!r}"
                )
            bucket.append((x, f1, r))


def cmd_report(curve_files: Sequence, out_dir) -> dict:
    """Merge curve files into one long-format CSV with per-series peak and
    break-even annotations."""
    if not curve_files:
        raise DataError("no curve files given")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    series: dict[str, list] = {}
    for file in curve_files:
        path = Path(file)
        if not path.is_file():
            raise DataError(f"curve file not found: {path}")
        _read_series_file(path, series)

    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["series", "x", "f1", "roi"])
        for name, rows in series.items():
            for x, f1, r in rows:
                writer.writerow([name, repr(x), repr(f1), repr(r)])

    annotations = {}
    for name, rows in series.items():
        xs = [x for x, _, _ in rows]
        rois = [r for _, _, r in rows]
        peak_index, break_even = analyze_roi_series(xs, rois)
        annotations[name] = {
            "peak_x": xs[peak_index],
            "peak_roi": rois[peak_index],
            "f1_at_peak": rows[peak_index][1],
            "break_even_x": break_even,
        }
    summary = {"command": "report", "series": annotations}
    _write_json(out / "report_summary.json", summary)
    return summary


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roilab",
        description="Cost/benefit experiments for requirements-dependency classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="INI run configuration")
        sp.add_argument("--seed", type=int, help="override the run seed")
        sp.add_argument("--out", help="output directory")

    for name, doc in (
        ("synth", "generate a synthetic records CSV"),
        ("prepare", "build labeled pairs from the configured corpus"),
        ("eas1", "training-fraction sweep with ROI curves"),
        ("eas2", "active learning vs random baseline with ROI curves"),
    ):
        sp = sub.add_parser(name, help=doc)
        common(sp)
        if name == "eas2":
            sp.add_argument("--strategy", help="query strategy (MinMargin, LeastConfidence, Entropy, Random)")
            sp.add_argument("--mode", choices=(CUMULATIVE, INCREMENTAL),
                            help="benefit accumulation mode")

    sp = sub.add_parser("report", help="merge ROI curve files into a comparison report")
    sp.add_argument("files", nargs="+", help="curve CSV files")
    sp.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "report":
            summary = cmd_report(args.files, args.out)
        else:
            config = load_config(args.config)
            overrides: dict = {}
            if args.seed is not None:
                overrides["seed"] = args.seed
            if getattr(args, "strategy", None):
                overrides["strategy"] = args.strategy
            if getattr(args, "mode", None):
                overrides["mode"] = args.mode
            if overrides:
                config = config.replace(**overrides)
            command = {
                "synth": cmd_synth,
                "prepare": cmd_prepare,
                "eas1": cmd_eas1,
                "eas2": cmd_eas2,
            }[args.command]
            summary = command(config, args.out)
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
