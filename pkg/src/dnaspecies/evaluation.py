"""Metrics, diagnostics and seeded synthetic corpora."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .classifier import SPAMBOT, ClassificationResult
from .ingest import DigitalDna
from .lcs import compute_lcs_curve

POSITIVE = {"bot", "spambot", "1", "true"}
NEGATIVE = {"genuine", "human", "0", "false"}


def is_bot(label) -> bool:
    key = str(label).strip().lower()
    if key in POSITIVE:
        return True
    if key in NEGATIVE:
        return False
    raise ValueError(f"unknown label {label!r}")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    f1: float
    mcc: float

    def rounded(self) -> dict:
        """Integer percentages, half rounded up."""
        return {k: int(math.floor(100 * v + 0.5)) for k, v in vars(self).items()}


def confusion(labels: Mapping, truth: Mapping) -> ConfusionCounts:
    """Confusion counts with spambot as the positive class."""
    missing = sorted(set(truth) - set(labels))
    extra = sorted(set(labels) - set(truth))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"unlabeled: {', '.join(map(str, missing[:10]))}")
        if extra:
            parts.append(f"no truth for: {', '.join(map(str, extra[:10]))}")
        raise KeyError("; ".join(parts))
    tp = tn = fp = fn = 0
    for key, predicted in labels.items():
        p, t = is_bot(predicted), is_bot(truth[key])
        if p and t:
            tp += 1
        elif p:
            fp += 1
        elif t:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, tn, fp, fn)


def metrics(c: ConfusionCounts) -> MetricReport:
    if c.total == 0:
        raise ValueError("no evaluated accounts")
    accuracy = (c.tp + c.tn) / c.total
    denom = 2 * c.tp + c.fp + c.fn
    f1 = 2 * c.tp / denom if denom else 0.0
    factors = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    mcc = (c.tp * c.tn - c.fp * c.fn) / math.sqrt(factors) if factors else 0.0
    return MetricReport(accuracy, f1, mcc)


def curve_diagnostic(dnas: Sequence[DigitalDna], truth: Mapping) -> list[dict]:
    """Per group size: LCS length and share of that entry's members that are bots."""
    missing = [d.account_id for d in dnas if d.account_id not in truth]
    if missing:
        raise KeyError(f"no truth for: {', '.join(missing[:10])}")
    rows = []
    for e in compute_lcs_curve(dnas).entries:
        bots = sum(is_bot(truth[m]) for m in e.members)
        rows.append({"k": e.group_size, "lcs_length": e.length, "bot_fraction": bots / len(e.members)})
    return rows


def classification_trend(result: ClassificationResult, truth: Mapping) -> list[dict]:
    """Cumulative accuracy/F1 over the accounts labeled up to each round."""
    labeled: dict = {}
    for m in result.initial_spambot:
        labeled[m] = result.labels[m]
    for m in result.initial_genuine:
        labeled[m] = result.labels[m]
    rows = []
    for snap in result.iterations:
        for kind in ("genuine", "spambot"):
            for sp in snap[kind]:
                for m in sp["members"]:
                    labeled[m] = result.labels[m]
        for m in snap.get("stalled", []):
            labeled[m] = result.labels[m]
        row = {"round": snap["round"], "labeled": len(labeled), "cumulative_accuracy": None, "cumulative_f1": None}
        if labeled:
            rep = metrics(confusion(labeled, {k: truth[k] for k in labeled}))
            row["cumulative_accuracy"] = rep.accuracy
            row["cumulative_f1"] = rep.f1
        rows.append(row)
    return rows


@dataclass(frozen=True)
class SynthSpec:
    n_bots: int = 200
    n_genuine: int = 200
    dna_length_range: tuple = (100, 100)
    template_length: int = 60
    noise_rate: float = 0.05
    rng_seed: int = 0
    symbols: str = "ATC"

    def __post_init__(self):
        lo, hi = self.dna_length_range
        if not 1 <= lo <= hi:
            raise ValueError("bad dna_length_range")
        if not 0 <= self.template_length <= lo:
            raise ValueError("template_length must not exceed the shortest DNA length")
        if not 0 <= self.noise_rate < 1:
            raise ValueError("noise_rate must be in [0, 1)")
        if self.n_bots < 0 or self.n_genuine < 0:
            raise ValueError("negative account count")


def generate_synthetic(spec: SynthSpec) -> tuple[list[DigitalDna], dict]:
    """Planted-template bots plus i.i.d. genuine accounts, shuffled, seeded."""
    rng = np.random.default_rng(spec.rng_seed)
    alphabet = np.array(list(spec.symbols))
    n_sym = len(alphabet)
    lo, hi = spec.dna_length_range
    template = rng.integers(0, n_sym, spec.template_length)

    rows = []
    for _ in range(spec.n_bots):
        length = int(rng.integers(lo, hi + 1))
        pad = length - spec.template_length
        left = int(rng.integers(0, pad + 1))
        seq = rng.integers(0, n_sym, length)
        seq[left : left + spec.template_length] = template
        # noisy positions are redrawn uniformly (may keep their symbol)
        noisy = rng.random(length) < spec.noise_rate
        seq[noisy] = rng.integers(0, n_sym, int(noisy.sum()))
        rows.append(("bot", "".join(alphabet[seq])))
    for _ in range(spec.n_genuine):
        length = int(rng.integers(lo, hi + 1))
        rows.append(("genuine", "".join(alphabet[rng.integers(0, n_sym, length)])))

    order = rng.permutation(len(rows))
    width = len(str(max(len(rows), 1)))
    dnas, truth = [], {}
    for i, idx in enumerate(order):
        label, seq = rows[idx]
        acc = f"acct{i:0{width}d}"
        dnas.append(DigitalDna(acc, seq, "synthetic"))
        truth[acc] = label
    return dnas, truth


def read_truth(path) -> dict:
    truth = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"account_id", "label"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected header account_id,label")
        for row in reader:
            label = row["label"].strip()
            is_bot(label)
            truth[row["account_id"]] = label
    return truth


def write_truth(path, truth: Mapping) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["account_id", "label"])
        for k, v in truth.items():
            w.writerow([k, "bot" if is_bot(v) else "genuine"])


def write_rows(path, rows: Sequence[dict], fields: Sequence[str] | None = None) -> None:
    fields = list(fields or (rows[0].keys() if rows else []))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)


def report(labels: Mapping, truth: Mapping) -> dict:
    c = confusion(labels, truth)
    m = metrics(c)
    return {"confusion": vars(c), "metrics": vars(m), "percent": m.rounded(), "n_accounts": c.total}
