"""Cost, benefit and return-on-investment models for analysis workloads.

Two costing schemes are provided. The sweep scheme prices processing a
fraction of an ``n_total``-sample corpus at per-sample minute rates; the
iteration scheme prices a train set (processing + labeling) plus a test
set (processing only). Benefits are either confusion-count based (dollars
per true positive minus dollars per false negative) or F1-delta based
(dollars per percentage point of F1 improvement). ROI is always
``(benefit - cost) / cost``.

Curves assemble one (x, cost, benefit, roi) point per sweep fraction or
per learning iteration; ``analyze_curve`` locates the ROI peak and the
break-even crossing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .active import IterationRecord
from .corpus import DEPENDENT, open_text
from .errors import ConfigError, SchemaError

CUMULATIVE = "cumulative"
INCREMENTAL = "incremental"

CURVE_COLUMNS = ("x", "f1", "cost", "benefit", "roi")


@dataclass(frozen=True)
class CostParams:
    """Per-sample analysis costs (minutes) and staffing rates.

    ``c_fixed`` is the non-labeling processing time per sample; when the
    ``c_dg``/``c_pp``/``c_e`` components are all given, ``c_fixed`` is
    derived from (or checked against) their sum.
    """

    c_fixed: float | None = None
    c_l: float = 0.5
    c_resource: float = 400.0
    h: int = 1
    n_total: int = 4586
    c_dg: float | None = None
    c_pp: float | None = None
    c_e: float | None = None

    def __post_init__(self):
        parts = (self.c_dg, self.c_pp, self.c_e)
        if all(p is not None for p in parts):
            if any(p < 0 for p in parts):
                raise ValueError("cost components must be nonnegative")
            total = self.c_dg + self.c_pp + self.c_e
            if self.c_fixed is None:
                object.__setattr__(self, "c_fixed", total)
            elif abs(self.c_fixed - total) > 1e-9:
                raise ValueError(
                    f"c_fixed={self.c_fixed} inconsistent with c_dg+c_pp+c_e={total}"
                )
        elif self.c_fixed is None:
            object.__setattr__(self, "c_fixed", 1.0)
        if self.c_fixed < 0 or self.c_l < 0 or self.c_resource < 0:
            raise ValueError("costs must be nonnegative")
        if self.h < 1:
            raise ValueError("h (number of human resources) must be >= 1")
        if self.n_total < 1:
            raise ValueError("n_total must be >= 1")


@dataclass(frozen=True)
class BenefitParams:
    """Dollar values: per TP reward, per FN penalty, per 1% F1 improvement."""

    b_reward: float = 500.0
    b_penalty: float = 500.0
    p_value: float = 10000.0

    def __post_init__(self):
        if self.b_reward < 0 or self.b_penalty < 0 or self.p_value < 0:
            raise ValueError("benefit parameters must be nonnegative")


def roi(benefit: float, cost: float) -> float:
    """(benefit - cost) / cost; undefined (raises) for cost <= 0."""
    if cost <= 0:
        raise ValueError("roi is undefined for cost <= 0")
    return (benefit - cost) / cost


def cost_eas1(fraction: float, params: CostParams, literal: bool = False) -> float:
    """Dollar cost of processing a training fraction of the corpus.

    Default: fraction * n_total samples, each costing
    ``(c_fixed + c_l)`` minutes, at ``h * c_resource`` dollars per hour.
    ``literal=True`` drops the n_total factor and prices the bare fraction
    (useful only for sensitivity checks).
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    minutes = params.c_fixed + params.c_l
    base = fraction * (minutes / 60.0) * params.h * params.c_resource
    return base if literal else base * params.n_total


def benefit_eas1(tp: int, fn: int, params: BenefitParams) -> float:
    """Reward true positives, penalize false negatives; may be negative."""
    if tp < 0 or fn < 0:
        raise ValueError("tp and fn must be nonnegative counts")
    return tp * params.b_reward - fn * params.b_penalty


def cost_eas2(n_train: int, n_test: int, params: CostParams) -> float:
    """Dollar cost of one learning iteration: the train set pays processing
    plus labeling, the test set pays processing only."""
    if n_train <= 0:
        raise ValueError("n_train must be > 0")
    if n_test < 0:
        raise ValueError("n_test must be >= 0")
    hours = (n_train * (params.c_fixed + params.c_l) + n_test * params.c_fixed) / 60.0
    return hours * params.h * params.c_resource


def benefit_eas2(f1_cur: float, f1_ref: float, params: BenefitParams) -> float:
    """Value of an F1 change, expressed in percentage points."""
    return (f1_cur - f1_ref) * 100.0 * params.p_value


@dataclass(frozen=True)
class RoiPoint:
    x: float
    f1: float
    cost: float
    benefit: float
    roi: float


@dataclass(frozen=True)
class RoiCurve:
    """Ordered ROI points plus the parameter snapshot that produced them."""

    points: tuple[RoiPoint, ...]
    cost_params: CostParams | None = None
    benefit_params: BenefitParams | None = None
    label: str = ""

    def __post_init__(self):
        xs = [p.x for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("curve x values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def rois(self) -> np.ndarray:
        return np.array([p.roi for p in self.points])


def build_curve_eas1(
    sweep: Sequence[tuple[float, "EvalMetrics"]],
    cost_params: CostParams,
    benefit_params: BenefitParams,
    positive_class: str = DEPENDENT,
    literal: bool = False,
) -> RoiCurve:
    """One ROI point per (fraction, metrics) sweep entry.

    Benefit uses the positive class's TP/FN counts; cost prices the
    fraction of the corpus.
    """
    if not sweep:
        raise ValueError("empty sweep")
    points = []
    for fraction, metrics in sweep:
        counts = metrics.counts(positive_class)
        benefit = benefit_eas1(counts["tp"], counts["fn"], benefit_params)
        cost = cost_eas1(fraction, cost_params, literal)
        points.append(
            RoiPoint(
                x=float(fraction),
                f1=metrics.f1(positive_class),
                cost=cost,
                benefit=benefit,
                roi=roi(benefit, cost),
            )
        )
    return RoiCurve(tuple(points), cost_params, benefit_params, label="eas1")


def build_curve_eas2(
    records: Sequence[IterationRecord],
    cost_params: CostParams,
    benefit_params: BenefitParams,
    mode: str = CUMULATIVE,
) -> RoiCurve:
    """One ROI point per learning iteration.

    Cumulative mode scores each iteration's F1 against iteration 0;
    incremental mode scores it against the previous iteration. Iteration 0
    has zero benefit in both modes.
    """
    if mode not in (CUMULATIVE, INCREMENTAL):
        raise ValueError(f"unknown mode: {mode!r}")
    if len(records) < 2:
        raise ValueError("need at least 2 iteration records")
    points = []
    for i, rec in enumerate(records):
        if mode == CUMULATIVE or i == 0:
            ref = records[0].f1_requires
        else:
            ref = records[i - 1].f1_requires
        benefit = benefit_eas2(rec.f1_requires, ref, benefit_params)
        cost = cost_eas2(rec.n_train, rec.n_test, cost_params)
        points.append(
            RoiPoint(
                x=float(rec.iteration),
                f1=rec.f1_requires,
                cost=cost,
                benefit=benefit,
                roi=roi(benefit, cost),
            )
        )
    return RoiCurve(tuple(points), cost_params, benefit_params, label=f"eas2-{mode}")


@dataclass(frozen=True)
class CurveAnalysis:
    peak_index: int
    peak: RoiPoint
    break_even_x: float | None


def analyze_roi_series(xs: Sequence[float], rois: Sequence[float]) -> tuple[int, float | None]:
    """Peak index (first maximum) and break-even x of a roi-vs-x series.

    Break-even is the first x with roi >= 0; when the series crosses zero
    between samples the crossing is linearly interpolated. None when the
    series is negative everywhere.
    """
    if len(xs) == 0 or len(xs) != len(rois):
        raise ValueError("need matching nonempty x and roi sequences")
    rois = [float(r) for r in rois]
    xs = [float(x) for x in xs]
    peak_index = int(np.argmax(rois))

    break_even = None
    for i, r in enumerate(rois):
        if r >= 0:
            if i == 0:
                break_even = xs[0]
            else:
                prev_x, prev_r = xs[i - 1], rois[i - 1]
                break_even = prev_x + (0.0 - prev_r) / (r - prev_r) * (xs[i] - prev_x)
            break
    return peak_index, break_even


def analyze_curve(curve: RoiCurve) -> CurveAnalysis:
    """Locate the ROI peak (first point attaining the maximum) and the
    break-even point of a curve."""
    if len(curve) == 0:
        raise ValueError("empty curve")
    peak_index, break_even = analyze_roi_series(curve.xs, curve.rois)
    return CurveAnalysis(peak_index, curve.points[peak_index], break_even)


def write_curve(path, curve: RoiCurve) -> None:
    """Serialize to CSV at full float precision so re-import is lossless."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for p in curve.points:
            writer.writerow([repr(p.x), repr(p.f1), repr(p.cost), repr(p.benefit), repr(p.roi)])


def _cell(row: dict, key: str) -> str | None:
    value = row.get(key)
    if value is None:
        return None
    value = value.strip()
    return value or None


def import_external_curve(
    source,
    cost_params: CostParams,
    benefit_params: BenefitParams,
    literal: bool = False,
) -> RoiCurve:
    """Build an ROI curve from an externally produced accuracy file.

    Rows must carry ``x`` (training fraction) and either ``tp``/``fn``
    counts or a precomputed ``benefit``; an explicit benefit (or cost)
    column passes through unchanged, otherwise benefit comes from the
    TP/FN rates and cost from the fraction pricing. ROI is always
    recomputed, so exporting a curve and re-importing it is lossless.
    """
    points = []
    with open_text(source) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "x" not in header:
            raise SchemaError("curve file missing column: x")
        prev_x = None
        for lineno, row in enumerate(reader, start=2):
            x_cell = _cell(row, "x")
            if x_cell is None:
                raise SchemaError(f"row {lineno}: missing x value")
            x = float(x_cell)
            if prev_x is not None and x <= prev_x:
                raise ValueError(f"row {lineno}: x values must be strictly increasing")
            prev_x = x

            benefit_cell = _cell(row, "benefit")
            tp_cell, fn_cell = _cell(row, "tp"), _cell(row, "fn")
            if benefit_cell is not None:
                benefit = float(benefit_cell)
            elif tp_cell is not None and fn_cell is not None:
                benefit = benefit_eas1(int(tp_cell), int(fn_cell), benefit_params)
            else:
                raise SchemaError(f"row {lineno}: need tp and fn counts or a benefit value")

            cost_cell = _cell(row, "cost")
            cost = float(cost_cell) if cost_cell is not None else cost_eas1(x, cost_params, literal)
            f1_cell = _cell(row, "f1")
            f1 = float(f1_cell) if f1_cell is not None else 0.0
            points.append(RoiPoint(x=x, f1=f1, cost=cost, benefit=benefit, roi=roi(benefit, cost)))
    if not points:
        raise SchemaError("curve file has no data rows")
    return RoiCurve(tuple(points), cost_params, benefit_params, label="imported")


PARAM_KEYS = (
    "c_dg", "c_pp", "c_e", "c_l", "c_fixed", "c_resource", "h", "n",
    "b_reward", "b_penalty", "p_value",
)


def params_from_mapping(values: dict[str, float]) -> tuple[CostParams, BenefitParams]:
    """Build parameter objects from lower-cased symbol keys; unspecified
    keys keep their defaults."""
    unknown = sorted(set(values) - set(PARAM_KEYS))
    if unknown:
        raise ConfigError(f"unknown parameter key(s): {', '.join(unknown)}")
    cost = CostParams(
        c_fixed=values.get("c_fixed"),
        c_l=values.get("c_l", 0.5),
        c_resource=values.get("c_resource", 400.0),
        h=int(values.get("h", 1)),
        n_total=int(values.get("n", 4586)),
        c_dg=values.get("c_dg"),
        c_pp=values.get("c_pp"),
        c_e=values.get("c_e"),
    )
    benefit = BenefitParams(
        b_reward=values.get("b_reward", 500.0),
        b_penalty=values.get("b_penalty", 500.0),
        p_value=values.get("p_value", 10000.0),
    )
    return cost, benefit


def load_params(source) -> tuple[CostParams, BenefitParams]:
    """Read a ``key = value`` parameter file (# comments allowed; section
    headers in brackets are ignored)."""
    values: dict[str, float] = {}
    with open_text(source) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith("["):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().lower()
            try:
                values[key] = float(value.strip())
            except ValueError:
                raise ConfigError(f"line {lineno}: bad numeric value for {key!r}") from None
    return params_from_mapping(values)
