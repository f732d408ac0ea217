"""Requirement corpora: issue records, labeled requirement pairs, dataset
balancing/splitting, and a deterministic synthetic corpus generator.

A corpus starts as a list of :class:`RequirementRecord` (one per issue).
`build_pairs` turns link fields into labeled unordered pairs:
``depends_on`` links become REQUIRES pairs, ``see_also`` links become OTHER
pairs, and INDEPENDENT pairs are sampled from the unlinked remainder.
"""

from __future__ import annotations

import contextlib
import csv
import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, EmptyCorpusError, IntegrityError, SchemaError

logger = logging.getLogger(__name__)

REQUIRES = "REQUIRES"
OTHER = "OTHER"
INDEPENDENT = "INDEPENDENT"
DEPENDENT = "DEPENDENT"

TERNARY_LABELS = (INDEPENDENT, REQUIRES, OTHER)
BINARY_LABELS = (INDEPENDENT, DEPENDENT)
PAIR_LABELS = frozenset((REQUIRES, OTHER, INDEPENDENT, DEPENDENT))

# Canonical class ordering: probability vectors, tie-breaking and stratified
# iteration all follow this order so results are reproducible.
CLASS_ORDER = (INDEPENDENT, REQUIRES, OTHER, DEPENDENT)

RECORD_COLUMNS = ("id", "title", "product", "priority", "type", "depends_on", "see_also")
PAIR_COLUMNS = ("id_a", "id_b", "text_a", "text_b", "label")


def binary_view(label: str) -> str:
    """Collapse the ternary label set to {DEPENDENT, INDEPENDENT}."""
    if label in (REQUIRES, OTHER, DEPENDENT):
        return DEPENDENT
    if label == INDEPENDENT:
        return INDEPENDENT
    raise ValueError(f"unknown dependency label: {label!r}")


def ordered_classes(labels: Iterable[str]) -> tuple[str, ...]:
    """Distinct labels in canonical order (unknown labels sorted last)."""
    present = set(labels)
    known = [c for c in CLASS_ORDER if c in present]
    extra = sorted(present - set(CLASS_ORDER))
    return tuple(known + extra)


@dataclass
class RequirementRecord:
    """One issue/enhancement with its outgoing link lists."""

    id: str
    title: str
    product: str = ""
    priority: str = ""
    issue_type: str = ""
    depends_on: list[str] = field(default_factory=list)
    see_also: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class RequirementPair:
    """Unordered requirement pair in canonical id order (id_a < id_b)."""

    id_a: str
    id_b: str
    text_a: str
    text_b: str
    label: str

    @property
    def key(self) -> tuple[str, str]:
        return (self.id_a, self.id_b)

    @property
    def instance_id(self) -> str:
        return f"{self.id_a}~{self.id_b}"


def make_pair(id_a: str, id_b: str, text_a: str, text_b: str, label: str) -> RequirementPair:
    """Build a pair, swapping the two sides into canonical order."""
    if label not in PAIR_LABELS:
        raise ValueError(f"unknown dependency label: {label!r}")
    if id_a == id_b:
        raise ValueError(f"pair cannot reference the same record twice: {id_a!r}")
    if id_b < id_a:
        id_a, id_b, text_a, text_b = id_b, id_a, text_b, text_a
    return RequirementPair(id_a, id_b, text_a, text_b, label)


@dataclass
class DatasetSplit:
    """Stratified train/test partition of a pair list."""

    train: list[RequirementPair]
    test: list[RequirementPair]
    seed: int
    ratio: float


def open_text(source):
    if hasattr(source, "read"):
        return contextlib.nullcontext(source)
    return open(source, newline="", encoding="utf-8")


def _parse_links(cell: str | None, self_id: str) -> list[str]:
    # Link cells hold semicolon-separated ids; self-references are dropped.
    tokens = [t.strip() for t in (cell or "").split(";")]
    return [t for t in tokens if t and t != self_id]


def load_records(source) -> list[RequirementRecord]:
    """Read a records CSV (columns ``id,title,product,priority,type,
    depends_on,see_also``) into RequirementRecord objects.

    Raises SchemaError when a required column is missing and IntegrityError
    on duplicate or empty ids.
    """
    with open_text(source) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in RECORD_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"records file missing column(s): {', '.join(missing)}")
        records: list[RequirementRecord] = []
        seen: set[str] = set()
        for row in reader:
            rid = (row["id"] or "").strip()
            if not rid:
                raise IntegrityError("record with empty id")
            if rid in seen:
                raise IntegrityError(f"duplicate record id: {rid}")
            seen.add(rid)
            records.append(
                RequirementRecord(
                    id=rid,
                    title=row["title"] or "",
                    product=row["product"] or "",
                    priority=row["priority"] or "",
                    issue_type=row["type"] or "",
                    depends_on=_parse_links(row["depends_on"], rid),
                    see_also=_parse_links(row["see_also"], rid),
                )
            )
    return records


def write_records(path, records: Sequence[RequirementRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow(
                [r.id, r.title, r.product, r.priority, r.issue_type,
                 ";".join(r.depends_on), ";".join(r.see_also)]
            )


def build_pairs(
    records: Sequence[RequirementRecord],
    independent_ratio: float = 2.0,
    seed: int = 0,
) -> list[RequirementPair]:
    """Turn record links into labeled pairs.

    Every ``depends_on`` link yields a REQUIRES pair; every ``see_also``
    link not already REQUIRES yields an OTHER pair; INDEPENDENT pairs are
    sampled uniformly (seeded) from the unlinked remainder, with count
    ``round(independent_ratio * n_dependent)``. Output is deduplicated and
    sorted by canonical pair key within each label group.
    """
    if independent_ratio <= 0:
        raise ValueError("independent_ratio must be > 0")
    by_id = {r.id: r for r in records}
    if len(by_id) != len(records):
        raise IntegrityError("duplicate record ids in corpus")

    def resolve(owner: RequirementRecord, target: str) -> tuple[str, str] | None:
        if target == owner.id:
            return None
        if target not in by_id:
            logger.warning("record %s links to unknown id %s; link skipped", owner.id, target)
            return None
        return (owner.id, target) if owner.id < target else (target, owner.id)

    requires: set[tuple[str, str]] = set()
    for r in records:
        for target in r.depends_on:
            key = resolve(r, target)
            if key is not None:
                requires.add(key)
    other: set[tuple[str, str]] = set()
    for r in records:
        for target in r.see_also:
            key = resolve(r, target)
            if key is not None and key not in requires:
                other.add(key)

    n_dependent = len(requires) + len(other)
    if n_dependent == 0:
        raise EmptyCorpusError("corpus yields no dependent pairs")

    n_independent = int(round(independent_ratio * n_dependent))
    ids = sorted(by_id)
    n = len(ids)
    linked = requires | other
    available = n * (n - 1) // 2 - len(linked)
    if n_independent > available:
        raise DataError(
            f"cannot sample {n_independent} independent pairs; only {available} unlinked pairs exist"
        )

    rng = np.random.default_rng(seed)
    chosen: set[tuple[str, str]] = set()
    if n * (n - 1) // 2 <= 200_000:
        universe = [
            (ids[i], ids[j])
            for i in range(n)
            for j in range(i + 1, n)
            if (ids[i], ids[j]) not in linked
        ]
        picks = rng.choice(len(universe), size=n_independent, replace=False)
        chosen = {universe[k] for k in picks}
    else:
        # Rejection sampling: cheap because the unlinked population vastly
        # outnumbers the requested sample at this scale.
        while len(chosen) < n_independent:
            i, j = rng.integers(0, n, size=2)
            if i == j:
                continue
            a, b = ids[i], ids[j]
            key = (a, b) if a < b else (b, a)
            if key in linked or key in chosen:
                continue
            chosen.add(key)

    def pair(key: tuple[str, str], label: str) -> RequirementPair:
        a, b = key
        return RequirementPair(a, b, by_id[a].title, by_id[b].title, label)

    out = [pair(k, REQUIRES) for k in sorted(requires)]
    out += [pair(k, OTHER) for k in sorted(other)]
    out += [pair(k, INDEPENDENT) for k in sorted(chosen)]
    return out


def filter_and_binarize(
    pairs: Sequence[RequirementPair], min_words: int = 3, binary: bool = False
) -> list[RequirementPair]:
    """Drop pairs where either raw text has fewer than ``min_words``
    whitespace tokens; optionally collapse labels to the binary view."""
    if min_words < 1:
        raise ValueError("min_words must be >= 1")
    out = []
    for p in pairs:
        if len(p.text_a.split()) < min_words or len(p.text_b.split()) < min_words:
            continue
        if binary:
            label = binary_view(p.label)
            p = p if label == p.label else replace(p, label=label)
        out.append(p)
    return out


def stratified_split(
    pairs: Sequence[RequirementPair], ratio: float, seed: int
) -> tuple[list[RequirementPair], list[RequirementPair]]:
    """Seeded stratified partition; |train| = round(ratio * len(pairs))."""
    if not 0 < ratio < 1:
        raise ValueError("split ratio must be in (0, 1)")
    classes = ordered_classes(p.label for p in pairs)
    idx_by_class = {c: [i for i, p in enumerate(pairs) if p.label == c] for c in classes}

    target = round(ratio * len(pairs))
    base = {c: int(ratio * len(idx_by_class[c])) for c in classes}
    extras = target - sum(base.values())
    by_remainder = sorted(
        classes,
        key=lambda c: (-(ratio * len(idx_by_class[c]) - base[c]), classes.index(c)),
    )
    for c in by_remainder[:extras]:
        base[c] += 1

    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for c in classes:
        perm = rng.permutation(idx_by_class[c])
        train_idx += [int(i) for i in perm[: base[c]]]
        test_idx += [int(i) for i in perm[base[c]:]]
    train = [pairs[i] for i in sorted(train_idx)]
    test = [pairs[i] for i in sorted(test_idx)]
    return train, test


def balance_and_split(
    pairs: Sequence[RequirementPair],
    ratio: float = 0.8,
    seed: int = 0,
    expected_classes: Sequence[str] | None = None,
) -> DatasetSplit:
    """Undersample majority classes to the minority count (seeded, without
    replacement), then split stratified at ``ratio``."""
    labels = [p.label for p in pairs]
    classes = tuple(expected_classes) if expected_classes else ordered_classes(labels)
    counts = {c: labels.count(c) for c in classes}
    for c in classes:
        if counts[c] == 0:
            raise DataError(f"class {c} has no pairs")
    if len(classes) < 2:
        raise DataError("need at least two classes to balance")

    m = min(counts.values())
    rng = np.random.default_rng(seed)
    keep: list[int] = []
    for c in classes:
        idx = [i for i, lab in enumerate(labels) if lab == c]
        picks = rng.choice(len(idx), size=m, replace=False)
        keep += [idx[k] for k in picks]
    balanced = [pairs[i] for i in sorted(keep)]
    train, test = stratified_split(balanced, ratio, seed)
    return DatasetSplit(train=train, test=test, seed=seed, ratio=ratio)


def write_pairs(path, pairs: Sequence[RequirementPair]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PAIR_COLUMNS)
        for p in pairs:
            writer.writerow([p.id_a, p.id_b, p.text_a, p.text_b, p.label])


def load_pairs(source) -> list[RequirementPair]:
    with open_text(source) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in PAIR_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"pairs file missing column(s): {', '.join(missing)}")
        pairs = []
        for lineno, row in enumerate(reader, start=2):
            label = (row["label"] or "").strip()
            if label not in PAIR_LABELS:
                raise SchemaError(f"row {lineno}: unknown label {label!r}")
            pairs.append(make_pair(row["id_a"], row["id_b"], row["text_a"], row["text_b"], label))
    return pairs


# ---------------------------------------------------------------------------
# Synthetic corpus generation
# ---------------------------------------------------------------------------

_CONSONANTS = "bcdfghjklmnpqrstvwz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS]


def _word(i: int) -> str:
    """Deterministic pronounceable 6-letter word for index ``i``."""
    n = len(_SYLLABLES)
    return _SYLLABLES[i % n] + _SYLLABLES[(i // n) % n] + _SYLLABLES[(i // (n * n)) % n]


@dataclass(frozen=True)
class SynthConfig:
    """Settings for the synthetic requirement-corpus generator.

    ``class_mix`` gives target proportions over pair labels in canonical
    order (INDEPENDENT, REQUIRES, OTHER); feeding the generated corpus to
    ``build_pairs`` with ``independent_ratio`` recovers the mix.
    ``signal_strength`` in [0, 1] scales how much of each title is drawn
    from topic vocabulary rather than shared background noise; linked
    records of one couple share a topic, so higher values make labels
    easier to recover from text.
    """

    n_records: int
    signal_strength: float = 0.9
    class_mix: tuple[float, float, float] = (0.5, 0.3, 0.2)
    seed: int = 0
    noise_words: int = 400
    topic_size: int = 6
    req_topics: int = 40
    other_topics: int = 20
    ind_topics: int = 80
    link_density: float = 0.5
    title_words: tuple[int, int] = (5, 9)

    def __post_init__(self):
        if self.n_records < 6:
            raise ValueError("n_records must be >= 6 (cannot seat all classes)")
        if not 0.0 <= self.signal_strength <= 1.0:
            raise ValueError("signal_strength must be in [0, 1]")
        if len(self.class_mix) != 3 or any(p < 0 for p in self.class_mix):
            raise ValueError("class_mix must be three nonnegative proportions")
        if abs(sum(self.class_mix) - 1.0) > 1e-9:
            raise ValueError("class_mix proportions must sum to 1")
        if not 0 < self.link_density <= 1:
            raise ValueError("link_density must be in (0, 1]")
        lo, hi = self.title_words
        if lo < 3 or hi < lo:
            raise ValueError("title_words must satisfy 3 <= lo <= hi")

    @property
    def independent_ratio(self) -> float:
        """ratio for build_pairs that realizes class_mix's INDEPENDENT share."""
        p_ind, p_req, p_oth = self.class_mix
        dep = p_req + p_oth
        if dep == 0:
            raise ValueError("class_mix has no dependent share")
        return p_ind / dep


def _couple_counts(config: SynthConfig) -> tuple[int, int]:
    p_ind, p_req, p_oth = config.class_mix
    budget = config.n_records // 2
    c_req = int(round(budget * p_req * config.link_density))
    c_oth = int(round(budget * p_oth * config.link_density))
    if p_req > 0:
        c_req = max(1, c_req)
    if p_oth > 0:
        c_oth = max(1, c_oth)
    # keep at least two unlinked records so independent pairs can be seated
    while 2 * (c_req + c_oth) > config.n_records - 2:
        if c_req >= c_oth and c_req > (1 if p_req > 0 else 0):
            c_req -= 1
        elif c_oth > (1 if p_oth > 0 else 0):
            c_oth -= 1
        else:
            break
    return c_req, c_oth


def synth_corpus(config: SynthConfig) -> list[RequirementRecord]:
    """Generate a deterministic corpus whose pair labels are recoverable.

    Linked couples (REQUIRES via depends_on, OTHER via see_also) draw both
    titles from one shared topic; unlinked records draw from a pool of
    topics disjoint from every linked-class pool. At signal_strength 1.0
    both members of a REQUIRES couple are guaranteed to share the topic's
    anchor token.
    """
    rng = np.random.default_rng(config.seed)
    c_req, c_oth = _couple_counts(config)

    cursor = 0

    def take_words(k: int) -> list[str]:
        nonlocal cursor
        words = [_word(cursor + i) for i in range(k)]
        cursor += k
        return words

    noise = take_words(config.noise_words)
    pools = {
        "req": [take_words(config.topic_size) for _ in range(config.req_topics)],
        "oth": [take_words(config.topic_size) for _ in range(config.other_topics)],
        "ind": [take_words(config.topic_size) for _ in range(config.ind_topics)],
    }

    lo, hi = config.title_words
    products = ("browser", "toolkit", "devtools")

    def title(topic: list[str]) -> str:
        length = int(rng.integers(lo, hi + 1))
        k = int(round(config.signal_strength * min(4, length)))
        tokens: list[str] = []
        if k >= 1:
            tokens.append(topic[0])  # anchor: shared by both couple members
            n_extra = min(k - 1, len(topic) - 1)
            if n_extra > 0:
                picks = rng.choice(len(topic) - 1, size=n_extra, replace=False)
                tokens += [topic[1 + int(e)] for e in picks]
        while len(tokens) < length:
            tokens.append(noise[int(rng.integers(0, len(noise)))])
        order = rng.permutation(len(tokens))
        return " ".join(tokens[int(i)] for i in order)

    def new_record(rid: str, topic: list[str]) -> RequirementRecord:
        return RequirementRecord(
            id=rid,
            title=title(topic),
            product=products[int(rng.integers(0, len(products)))],
            priority=f"P{int(rng.integers(1, 6))}",
            issue_type="enhancement",
        )

    records: list[RequirementRecord] = []
    serial = 0

    def next_id() -> str:
        nonlocal serial
        serial += 1
        return f"{serial:06d}"

    for kind, count in (("req", c_req), ("oth", c_oth)):
        pool = pools[kind]
        for _ in range(count):
            topic = pool[int(rng.integers(0, len(pool)))]
            a = new_record(next_id(), topic)
            b = new_record(next_id(), topic)
            if kind == "req":
                a.depends_on.append(b.id)
            else:
                a.see_also.append(b.id)
            records += [a, b]

    while len(records) < config.n_records:
        topic = pools["ind"][int(rng.integers(0, len(pools["ind"])))]
        records.append(new_record(next_id(), topic))

    return records
