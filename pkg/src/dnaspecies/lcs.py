"""Longest-common-substring curve and species extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .ingest import DigitalDna

DEFAULT_TAU = 2.0
DEFAULT_MIN_GROUP_SIZE = 20


@dataclass(frozen=True)
class CurveEntry:
    group_size: int
    length: int
    witness: str
    members: frozenset


@dataclass
class LcsCurve:
    entries: list[CurveEntry]

    @property
    def lengths(self) -> list[int]:
        return [e.length for e in self.entries]

    @property
    def witnesses(self) -> list[str]:
        return [e.witness for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass
class RelativeChangeSeries:
    values: list[float]
    sigma: float
    threshold: float
    group_sizes: list[int] = field(default_factory=list)


@dataclass
class Species:
    id: int
    members: frozenset
    lcs: str
    mean_dna_length: float

    def __len__(self):
        return len(self.members)


def _encode_corpus(seqs: Sequence[str]):
    """Concatenate sequences with unique separators into one int64 text."""
    symbols = sorted(set("".join(seqs)))
    code = {c: i + 1 for i, c in enumerate(symbols)}
    sep = len(symbols) + 1
    total = sum(len(s) for s in seqs) + len(seqs)
    text = np.empty(total, dtype=np.int64)
    doc_of = np.empty(total, dtype=np.int64)
    pos = 0
    for d, s in enumerate(seqs):
        n = len(s)
        text[pos : pos + n] = [code[c] for c in s]
        text[pos + n] = sep + d
        doc_of[pos : pos + n + 1] = d
        pos += n + 1
    return text, doc_of


def compute_lcs_curve(dnas: Sequence[DigitalDna]) -> LcsCurve:
    """For k = 2..N, the longest substring present in at least k sequences.

    Built from one generalized suffix array.  Ties between equally long
    witnesses go to the lexicographically smallest; ``members`` lists every
    sequence containing the witness.
    """
    n_docs = len(dnas)
    if n_docs < 2:
        raise ValueError("curve undefined: need at least 2 sequences")
    seqs = [d.sequence for d in dnas]
    if any(not s for s in seqs):
        raise ValueError("curve undefined: empty sequence")
    ids = [d.account_id for d in dnas]

    text, doc_of = _encode_corpus(seqs)
    sa = kernels.suffix_array(text)
    lcp = kernels.lcp_array(text, sa)
    best_len, best_lb, best_rb = kernels.best_common_per_count(sa, lcp, doc_of, n_docs)

    starts = np.concatenate(([0], np.cumsum([len(s) + 1 for s in seqs])))
    everyone = frozenset(ids)
    member_cache: dict[tuple, frozenset] = {}
    entries = []
    for k in range(2, n_docs + 1):
        length = int(best_len[k])
        if length == 0:
            entries.append(CurveEntry(k, 0, "", everyone))
            continue
        lb, rb = int(best_lb[k]), int(best_rb[k])
        members = member_cache.get((lb, rb))
        if members is None:
            docs = np.unique(doc_of[sa[lb : rb + 1]])
            members = frozenset(ids[d] for d in docs)
            member_cache[lb, rb] = members
        start = int(sa[lb])
        d0 = int(doc_of[start])
        offset = start - int(starts[d0])
        witness = seqs[d0][offset : offset + length]
        entries.append(CurveEntry(k, length, witness, members))
    return LcsCurve(entries)


def common_substring(seqs: Sequence[str]) -> str:
    """Longest substring shared by all of ``seqs`` (lexicographically smallest on ties)."""
    seqs = list(seqs)
    if not seqs:
        return ""
    if len(seqs) == 1:
        return seqs[0]
    curve = compute_lcs_curve([DigitalDna(str(i), s) for i, s in enumerate(seqs)])
    return curve.entries[-1].witness


def relative_changes(curve: LcsCurve | Sequence[int], tau: float = DEFAULT_TAU) -> RelativeChangeSeries:
    """Relative length changes between consecutive curve entries and the drop threshold."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if isinstance(curve, LcsCurve):
        lengths = curve.lengths
        sizes = [e.group_size for e in curve.entries]
    else:
        lengths = list(curve)
        sizes = list(range(2, len(lengths) + 2))
    if len(lengths) < 2:
        raise ValueError("need at least 2 curve entries")
    values = [
        (lengths[j + 1] - lengths[j]) / lengths[j] if lengths[j] > 0 else 0.0
        for j in range(len(lengths) - 1)
    ]
    sigma = float(np.std(values))
    return RelativeChangeSeries(values, sigma, -tau * sigma, sizes)


def first_significant_drop(series: RelativeChangeSeries, min_group_size: int = DEFAULT_MIN_GROUP_SIZE):
    """Index of the curve entry just before the first drop below threshold, or None."""
    if min_group_size < 2:
        raise ValueError("min_group_size must be >= 2")
    sizes = series.group_sizes or list(range(2, len(series.values) + 2))
    for j, r in enumerate(series.values):
        if r < series.threshold and sizes[j] >= min_group_size:
            return j
    return None


def _species(sid: int, members, lcs: str, lengths: dict[str, int]) -> Species:
    members = frozenset(members)
    mean = sum(lengths[m] for m in members) / len(members)
    return Species(sid, members, lcs, mean)


def extract_species(
    dnas: Sequence[DigitalDna],
    tau: float = DEFAULT_TAU,
    min_group_size: int = DEFAULT_MIN_GROUP_SIZE,
) -> list[Species]:
    """Peel off species at successive significant drops; leftovers form one last species."""
    if len(dnas) < 1:
        return []
    lengths = {d.account_id: len(d.sequence) for d in dnas}
    remaining = list(dnas)
    species: list[Species] = []
    while len(remaining) >= max(min_group_size + 1, 2):
        curve = compute_lcs_curve(remaining)
        j = first_significant_drop(relative_changes(curve, tau), min_group_size)
        if j is None:
            break
        entry = curve.entries[j]
        species.append(_species(len(species), entry.members, entry.witness, lengths))
        remaining = [d for d in remaining if d.account_id not in entry.members]
    if remaining:
        lcs = common_substring([d.sequence for d in remaining])
        species.append(_species(len(species), (d.account_id for d in remaining), lcs, lengths))
    return species
