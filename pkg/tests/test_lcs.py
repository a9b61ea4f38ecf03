import random
import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_dnas
from dnaspecies.lcs import (
    RelativeChangeSeries,
    compute_lcs_curve,
    extract_species,
    first_significant_drop,
    relative_changes,
)
from oracles import brute_curve


def test_worked_example_curve(example_dnas):
    curve = compute_lcs_curve(example_dnas)
    assert curve.witnesses == ["TTC", "TT", "T"]
    assert [e.group_size for e in curve.entries] == [2, 3, 4]
    assert curve.entries[0].members == {"user1", "user2"}
    assert curve.entries[1].members == {"user1", "user2", "user3"}


def test_identical_pair():
    curve = compute_lcs_curve(make_dnas(["AAA", "AAA"]))
    assert [(e.group_size, e.length, e.witness) for e in curve.entries] == [(2, 3, "AAA")]


def test_curve_needs_two():
    with pytest.raises(ValueError, match="curve undefined"):
        compute_lcs_curve(make_dnas(["ATC"]))


def test_disjoint_symbols_give_empty_witness():
    curve = compute_lcs_curve(make_dnas(["AAA", "TTT", "AT"]))
    assert curve.lengths == [1, 0]
    assert curve.entries[1].members == {"u0", "u1", "u2"}


def test_random_against_brute_force():
    rng = random.Random(7)
    for _ in range(50):
        seqs = ["".join(rng.choice("ATC") for _ in range(rng.randint(1, 12))) for _ in range(6)]
        curve = compute_lcs_curve(make_dnas(seqs))
        expected = brute_curve(seqs)
        assert curve.lengths == [e[0] for e in expected]
        assert curve.witnesses == [e[1] for e in expected]
        assert [e.members for e in curve.entries] == [{f"u{d}" for d in e[2]} for e in expected]


corpus_st = st.lists(st.text(alphabet="ATC", min_size=1, max_size=12), min_size=2, max_size=8)


@settings(max_examples=200, deadline=None)
@given(corpus_st)
def test_curve_properties(seqs):
    curve = compute_lcs_curve(make_dnas(seqs))
    lengths = curve.lengths
    assert lengths == [e[0] for e in brute_curve(seqs)]
    assert all(a >= b for a, b in zip(lengths, lengths[1:]))
    for e in curve.entries:
        assert len(e.witness) == e.length
        assert len(e.members) >= e.group_size
        assert all(e.witness in seqs[int(m[1:])] for m in e.members)


def test_relative_changes_simple():
    s = relative_changes([100, 98], tau=2)
    assert s.values == pytest.approx([-0.02])


def test_relative_changes_constant():
    s = relative_changes([5, 5, 5, 5], tau=2)
    assert s.values == [0, 0, 0]
    assert s.sigma == 0 and s.threshold == 0
    assert first_significant_drop(s, 2) is None


LENGTHS = [50, 49, 48, 47, 10, 9, 8]


def test_relative_changes_against_recomputation():
    s = relative_changes(LENGTHS, tau=2)
    expected = [(b - a) / a for a, b in zip(LENGTHS, LENGTHS[1:])]
    sigma = statistics.pstdev(expected)
    assert s.values == pytest.approx(expected)
    assert s.values == pytest.approx([-0.02, -0.0204, -0.0208, -0.787, -0.1, -0.111], abs=5e-4)
    assert s.sigma == pytest.approx(sigma)
    assert s.threshold == pytest.approx(-2 * sigma)


def test_zero_length_denominator():
    assert relative_changes([3, 0, 0], tau=1).values == [-1.0, 0.0]


def test_first_drop_hand_trace():
    s = relative_changes(LENGTHS, tau=2)
    j = first_significant_drop(s, 2)
    assert j == 3
    assert LENGTHS[j] == 47


def test_size_guard():
    # group sizes 2..20 at length 50, then a cliff
    lengths = [50] * 19 + [5, 5, 5]
    s = relative_changes(lengths, tau=2)
    assert s.group_sizes[18] == 20
    assert first_significant_drop(s, 20) == 18
    assert first_significant_drop(s, 21) is None


def test_drop_is_strict():
    s = RelativeChangeSeries([-0.5, -1.0], sigma=0.25, threshold=-0.5, group_sizes=[2, 3])
    assert first_significant_drop(s, 2) == 1


def _planted_corpus(seed=3):
    rng = random.Random(seed)

    def rand(n):
        return "".join(rng.choice("ATC") for _ in range(n))

    tmpl_a, tmpl_b = rand(60), rand(45)
    seqs, blocks = {}, {"a": set(), "b": set()}
    for i in range(30):
        seqs[f"a{i}"] = rand(20) + tmpl_a + rand(20)
        blocks["a"].add(f"a{i}")
    for i in range(30):
        seqs[f"b{i}"] = rand(30) + tmpl_b + rand(25)
        blocks["b"].add(f"b{i}")
    for i in range(40):
        seqs[f"r{i}"] = rand(100)
    return seqs, blocks


def test_extract_planted_blocks():
    seqs, blocks = _planted_corpus()
    species = extract_species(make_dnas(seqs), tau=2, min_group_size=20)
    member_sets = [s.members for s in species]
    assert blocks["a"] in member_sets
    assert blocks["b"] in member_sets
    assert len(species) >= 3
    covered = [m for s in species for m in s.members]
    assert sorted(covered) == sorted(seqs)
    for s in species:
        assert all(s.lcs in seqs[m] for m in s.members)
        assert s.mean_dna_length == pytest.approx(statistics.mean(len(seqs[m]) for m in s.members))


def test_random_users_single_residual():
    rng = random.Random(11)
    seqs = ["".join(rng.choice("ATC") for _ in range(40)) for _ in range(15)]
    species = extract_species(make_dnas(seqs), tau=2, min_group_size=20)
    assert len(species) == 1
    assert len(species[0].members) == 15


def test_worked_example_first_species(example_dnas):
    species = extract_species(example_dnas, tau=2, min_group_size=2)
    assert species[0].members == {"user1", "user2"}
    assert species[0].lcs == "TTC"
    assert sorted(m for s in species for m in s.members) == ["user1", "user2", "user3", "user4"]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.text(alphabet="ATC", min_size=1, max_size=15), min_size=1, max_size=30),
    st.sampled_from([2, 3, 5]),
)
def test_species_partition(seqs, min_size):
    dnas = make_dnas(seqs)
    species = extract_species(dnas, tau=2, min_group_size=min_size)
    covered = [m for s in species for m in s.members]
    assert len(covered) == len(set(covered)) == len(seqs)
    assert extract_species(dnas, tau=2, min_group_size=min_size) == species
