"""Affine-gap global alignment and the normalised DNA similarity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels


@dataclass(frozen=True)
class ScoringScheme:
    match: int = 0
    mismatch: int = -5
    open_gap: int = -4
    extend_gap: int = -5

    def __post_init__(self):
        for name in ("match", "mismatch", "open_gap", "extend_gap"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.match != 0:
            raise ValueError("match score must be 0")
        if max(self.mismatch, self.open_gap, self.extend_gap) > 0:
            raise ValueError("penalties must be <= 0")

    @property
    def worst(self) -> int:
        return min(self.mismatch, self.open_gap, self.extend_gap)

    @classmethod
    def levenshtein(cls) -> "ScoringScheme":
        return cls(0, -1, -1, -1)

    def as_tuple(self):
        return (self.match, self.mismatch, self.open_gap, self.extend_gap)


DEFAULT_SCHEME = ScoringScheme()


@dataclass(frozen=True)
class AlignmentResult:
    score: int
    aligned_length: int
    n_matches: int
    n_mismatches: int
    n_open_gaps: int
    n_extended_gaps: int

    def recomputed_score(self, scheme: ScoringScheme) -> int:
        return (
            self.n_matches * scheme.match
            + self.n_mismatches * scheme.mismatch
            + self.n_open_gaps * scheme.open_gap
            + self.n_extended_gaps * scheme.extend_gap
        )


def _codes(a: str, b: str):
    table = {c: i for i, c in enumerate(sorted(set(a) | set(b)))}
    return (
        np.fromiter((table[c] for c in a), dtype=np.int64, count=len(a)),
        np.fromiter((table[c] for c in b), dtype=np.int64, count=len(b)),
    )


def global_align(a: str, b: str, scheme: ScoringScheme = DEFAULT_SCHEME) -> AlignmentResult:
    """Optimal global alignment; ties resolved to the shortest alignment."""
    if not a or not b:
        raise ValueError("empty sequence")
    ca, cb = _codes(a, b)
    out = kernels.affine_align(ca, cb, scheme.match, scheme.mismatch, scheme.open_gap, scheme.extend_gap)
    return AlignmentResult(*(int(v) for v in out))


def similarity_from(result: AlignmentResult, scheme: ScoringScheme, exact: bool = False):
    lowest = result.aligned_length * scheme.worst
    if lowest == 0:
        return Fraction(1) if exact else 1.0
    value = Fraction(result.score - lowest, -lowest)
    return value if exact else float(value)


def similarity(a: str, b: str, scheme: ScoringScheme = DEFAULT_SCHEME, exact: bool = False):
    """Min-max normalised alignment score in [0, 1]; 1 for identical sequences.

    The lower bound is ``aligned_length * min(penalties)`` of the returned
    alignment.  ``exact=True`` returns a Fraction.
    """
    return similarity_from(global_align(a, b, scheme), scheme, exact)


def levenshtein(a: str, b: str) -> int:
    if not a or not b:
        return max(len(a), len(b))
    ca, cb = _codes(a, b)
    return int(kernels.edit_distance(ca, cb))
