"""Key groups and iterative species classification."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from typing import Mapping, Sequence

from .alignment import DEFAULT_SCHEME, ScoringScheme, similarity
from .ingest import DigitalDna
from .lcs import DEFAULT_MIN_GROUP_SIZE, DEFAULT_TAU, Species, common_substring, extract_species

SPAMBOT = "spambot"
GENUINE = "genuine"


@dataclass(frozen=True)
class ClassifierParams:
    tau: float = DEFAULT_TAU
    x: float = 2.0
    pareto_fraction: float = 0.2
    weighted_low: float = 2.0
    weighted_high: float = 4.0
    ratio_cap: float = 0.9
    min_group_size: int = DEFAULT_MIN_GROUP_SIZE
    scheme: ScoringScheme = DEFAULT_SCHEME

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if not 0 < self.pareto_fraction <= 1:
            raise ValueError("pareto_fraction must be in (0, 1]")
        if self.weighted_low >= self.weighted_high:
            raise ValueError("weighted_low must be below weighted_high")
        if self.min_group_size < 2:
            raise ValueError("min_group_size must be >= 2")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheme"] = list(self.scheme.as_tuple())
        return d


@dataclass
class KeyGroup:
    kind: str
    members: set = field(default_factory=set)
    lcs: str = ""
    species_ids: list = field(default_factory=list)

    def add(self, species: Species) -> None:
        self.members |= species.members


@dataclass
class ClassificationResult:
    labels: dict
    iterations: list
    params: ClassifierParams
    initial_spambot: list = field(default_factory=list)
    initial_genuine: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "initial_spambot": self.initial_spambot,
            "initial_genuine": self.initial_genuine,
            "iterations": self.iterations,
            "counts": dict(sorted(Counter(self.labels.values()).items())),
        }


def weighted_lcs(species: Species) -> float:
    """LCS length over mean member DNA length, scaled by member count."""
    return len(species.lcs) / species.mean_dna_length * len(species.members)


def similarity_limit(m_sim: float, x: float) -> float:
    """Spambot-inclusion threshold; equals ``m_sim`` at x = 1 and tends to 1."""
    return 1 - (1 - m_sim) / x


def _sim(a: str, b: str, scheme: ScoringScheme) -> float:
    # empty LCS against anything non-empty is all gaps
    if a and b:
        return similarity(a, b, scheme)
    return 1.0 if a == b else 0.0


def initial_gspambot(
    species: Sequence[Species],
    pareto_fraction: float = 0.2,
    dnas: Mapping[str, str] | None = None,
) -> KeyGroup:
    """Heaviest species (|LCS| x size) among the largest ``pareto_fraction`` of species."""
    if not species:
        raise ValueError("no species")
    ranked = sorted(species, key=lambda s: (-len(s.members), s.id))
    p = max(1, math.ceil(pareto_fraction * len(ranked)))
    top = ranked[:p]
    weights = [len(s.lcs) * len(s.members) for s in top]
    best = max(weights)
    chosen = [s for s, w in zip(top, weights) if w == best]
    group = KeyGroup(SPAMBOT)
    for s in chosen:
        group.add(s)
        group.species_ids.append(s.id)
    if len(chosen) == 1 or dnas is None:
        group.lcs = chosen[0].lcs
    else:
        group.lcs = common_substring([dnas[m] for m in sorted(group.members)])
        if not group.lcs:
            group.lcs = min((s.lcs for s in chosen), key=lambda w: (-len(w), w))
    return group


def initial_ggenuine(species: Sequence[Species], exclude: KeyGroup | None = None) -> KeyGroup:
    """All remaining species whose LCS is as short as the shortest one."""
    taken = set(exclude.species_ids) if exclude is not None else set()
    pool = [s for s in species if s.id not in taken]
    group = KeyGroup(GENUINE)
    if not pool:
        return group
    shortest = min(len(s.lcs) for s in pool)
    chosen = [s for s in pool if len(s.lcs) == shortest]
    for s in chosen:
        group.add(s)
        group.species_ids.append(s.id)
    group.lcs = min(s.lcs for s in chosen)
    return group


def _partition(species: Sequence[Species]) -> Counter:
    return Counter(s.members for s in species)


def _row(s: Species, sim: float, w: float) -> dict:
    return {
        "id": s.id,
        "size": len(s.members),
        "lcs": s.lcs,
        "similarity": sim,
        "weighted_lcs": w,
        "members": sorted(s.members),
    }


def classify_unlabeled(
    gen: KeyGroup,
    spam: KeyGroup,
    species_left: Sequence[Species],
    params: ClassifierParams,
    dnas: Mapping[str, str],
) -> list[dict]:
    """Label leftover species in rounds; mutates the key groups' member sets.

    Returns one snapshot per round.  Deferred species are pooled and
    re-clustered; if re-clustering reproduces the deferred partition, the
    pool is labeled genuine.
    """
    scheme = params.scheme
    # key-group LCSs are frozen, so M and the limit are fixed for all rounds
    m_sim = _sim(gen.lcs, spam.lcs, scheme)
    limit = similarity_limit(m_sim, params.x)
    left = list(species_left)
    next_id = max((s.id for s in left), default=-1) + 1
    rounds = []
    r = 0
    while left:
        r += 1
        snap = {"round": r, "M": m_sim, "limit": limit, "genuine": [], "spambot": [], "deferred": [], "stalled": []}
        deferred = []
        for s in left:
            sim = _sim(s.lcs, spam.lcs, scheme)
            w = weighted_lcs(s)
            if (sim <= m_sim and w <= len(s.members) * params.ratio_cap) or w < params.weighted_low:
                gen.add(s)
                snap["genuine"].append(_row(s, sim, w))
            elif sim >= limit or w > params.weighted_high:
                spam.add(s)
                snap["spambot"].append(_row(s, sim, w))
            else:
                deferred.append(s)
                snap["deferred"].append(_row(s, sim, w))
        rounds.append(snap)
        if not deferred:
            break
        pool = [DigitalDna(m, dnas[m]) for s in deferred for m in sorted(s.members)]
        regrouped = extract_species(pool, params.tau, params.min_group_size)
        if _partition(regrouped) == _partition(deferred):
            stalled = sorted(m for s in deferred for m in s.members)
            gen.members.update(stalled)
            snap["stalled"] = stalled
            break
        left = [replace(s, id=next_id + i) for i, s in enumerate(regrouped)]
        next_id += len(regrouped)
    return rounds


def classify_dataset(dnas: Sequence[DigitalDna], params: ClassifierParams | None = None) -> ClassificationResult:
    """Species extraction, key-group seeding, then round-based labeling."""
    params = params or ClassifierParams()
    if len(dnas) < 2:
        raise ValueError("need at least 2 accounts")
    seqs = {d.account_id: d.sequence for d in dnas}
    if len(seqs) != len(dnas):
        raise ValueError("duplicate account ids")
    species = extract_species(dnas, params.tau, params.min_group_size)
    spam = initial_gspambot(species, params.pareto_fraction, seqs)
    gen = initial_ggenuine(species, exclude=spam)
    keyed = set(spam.species_ids) | set(gen.species_ids)
    init_spam = sorted(spam.members)
    init_gen = sorted(gen.members)
    left = [s for s in species if s.id not in keyed]
    rounds = classify_unlabeled(gen, spam, left, params, seqs)
    if not rounds:
        m_sim = _sim(gen.lcs, spam.lcs, params.scheme)
        rounds = [{"round": 1, "M": m_sim, "limit": similarity_limit(m_sim, params.x),
                   "genuine": [], "spambot": [], "deferred": [], "stalled": []}]
    labels = {}
    for d in dnas:
        if d.account_id in spam.members:
            labels[d.account_id] = SPAMBOT
        elif d.account_id in gen.members:
            labels[d.account_id] = GENUINE
    missing = [d.account_id for d in dnas if d.account_id not in labels]
    if missing:
        raise RuntimeError(f"unlabeled accounts: {missing[:5]}")
    return ClassificationResult(labels, rounds, params, init_spam, init_gen)
