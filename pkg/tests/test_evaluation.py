import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_dnas
from dnaspecies.classifier import ClassificationResult, ClassifierParams
from dnaspecies.evaluation import (
    ConfusionCounts,
    SynthSpec,
    classification_trend,
    confusion,
    curve_diagnostic,
    generate_synthetic,
    metrics,
    read_truth,
    write_truth,
)


def test_perfect():
    truth = {f"b{i}": "bot" for i in range(50)} | {f"g{i}": "genuine" for i in range(50)}
    labels = {k: ("spambot" if v == "bot" else "genuine") for k, v in truth.items()}
    c = confusion(labels, truth)
    assert c == ConfusionCounts(tp=50, tn=50, fp=0, fn=0)
    m = metrics(c)
    assert (m.accuracy, m.f1, m.mcc) == (1, 1, 1)


def test_reference_row():
    m = metrics(ConfusionCounts(tp=1076, tn=753, fp=387, fn=64))
    assert m.accuracy == pytest.approx(0.802, abs=5e-4)
    assert m.f1 == pytest.approx(0.827, abs=5e-4)
    assert m.rounded() == {"accuracy": 80, "f1": 83, "mcc": 63}


def test_reference_confusion_from_labels():
    truth, labels = {}, {}
    cells = [("bot", "spambot", 1076), ("genuine", "genuine", 753), ("genuine", "spambot", 387), ("bot", "genuine", 64)]
    for t, p, n in cells:
        for i in range(n):
            key = f"{t}-{p}-{i}"
            truth[key], labels[key] = t, p
    assert confusion(labels, truth) == ConfusionCounts(1076, 753, 387, 64)


def test_single_wrong():
    assert confusion({"a": "genuine"}, {"a": "bot"}) == ConfusionCounts(fn=1)


def test_zero_factor_convention():
    m = metrics(ConfusionCounts(tp=0, fp=0, fn=10, tn=10))
    assert m.f1 == 0 and m.mcc == 0
    assert m.accuracy == 0.5


def test_key_mismatch():
    with pytest.raises(KeyError, match="x2"):
        confusion({"x1": "bot"}, {"x1": "bot", "x2": "genuine"})


def test_empty_metrics():
    with pytest.raises(ValueError):
        metrics(ConfusionCounts())


counts = st.builds(ConfusionCounts, *(st.integers(0, 500) for _ in range(4))).filter(lambda c: c.total > 0)


@given(counts)
def test_metric_definitions(c):
    m = metrics(c)
    assert m.accuracy == (c.tp + c.tn) / c.total
    assert 0 <= m.accuracy <= 1 and 0 <= m.f1 <= 1 and -1 <= m.mcc <= 1
    if 2 * c.tp + c.fp + c.fn:
        assert m.f1 == 2 * c.tp / (2 * c.tp + c.fp + c.fn)


@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=50), st.randoms())
def test_relabel_invariance(pairs, rnd):
    labels = {f"a{i}": ("bot" if p else "genuine") for i, (p, _) in enumerate(pairs)}
    truth = {f"a{i}": ("bot" if t else "genuine") for i, (_, t) in enumerate(pairs)}
    perm = list(range(len(pairs)))
    rnd.shuffle(perm)
    rename = {f"a{i}": f"z{perm[i]}" for i in range(len(pairs))}
    labels2 = {rename[k]: v for k, v in labels.items()}
    truth2 = {rename[k]: v for k, v in truth.items()}
    assert metrics(confusion(labels, truth)) == metrics(confusion(labels2, truth2))


def test_curve_diagnostic_all_bots(example_dnas):
    truth = {d.account_id: "bot" for d in example_dnas}
    assert all(r["bot_fraction"] == 1 for r in curve_diagnostic(example_dnas, truth))


def test_curve_diagnostic_worked_example(example_dnas):
    truth = {"user1": "bot", "user2": "bot", "user3": "genuine", "user4": "genuine"}
    rows = curve_diagnostic(example_dnas, truth)
    assert [(r["k"], r["lcs_length"]) for r in rows] == [(2, 3), (3, 2), (4, 1)]
    assert [r["bot_fraction"] for r in rows] == pytest.approx([1.0, 2 / 3, 0.5])


def test_curve_diagnostic_genuine_head():
    rng = random.Random(8)

    def rand(n):
        return "".join(rng.choice("ATC") for _ in range(n))

    pattern = rand(50)
    seqs, truth = {}, {}
    for i in range(6):
        seqs[f"g{i}"] = rand(10) + pattern + rand(10)
        truth[f"g{i}"] = "genuine"
    bot_pattern = rand(15)
    for i in range(10):
        seqs[f"b{i}"] = rand(30) + bot_pattern + rand(25)
        truth[f"b{i}"] = "bot"
    rows = curve_diagnostic(make_dnas(seqs), truth)
    small_k = [r for r in rows if r["k"] <= 6]
    assert all(r["bot_fraction"] < 0.5 for r in small_k)
    assert any(r["bot_fraction"] > 0.5 for r in rows if r["k"] > 6)


def _snap(rnd, genuine=(), spambot=(), deferred=()):
    def rows(groups):
        return [{"id": i, "members": list(g)} for i, g in enumerate(groups)]

    return {"round": rnd, "genuine": rows(genuine), "spambot": rows(spambot), "deferred": rows(deferred), "stalled": []}


def test_trend_constructed():
    truth = {}
    init_bot = [f"ib{i}" for i in range(5)]
    init_gen = [f"ig{i}" for i in range(5)]
    wrong = [f"w{i}" for i in range(10)]  # genuine, labeled spambot in round 1
    r2 = [f"c{i}" for i in range(20)]
    r3 = [f"d{i}" for i in range(20)]
    for k in init_bot:
        truth[k] = "bot"
    for k in init_gen + wrong + r2 + r3:
        truth[k] = "genuine"
    labels = {k: "spambot" for k in init_bot + wrong} | {k: "genuine" for k in init_gen + r2 + r3}
    result = ClassificationResult(
        labels,
        [_snap(1, spambot=[wrong], deferred=[r2 + r3]), _snap(2, genuine=[r2], deferred=[r3]), _snap(3, genuine=[r3])],
        ClassifierParams(),
        init_bot,
        init_gen,
    )
    rows = classification_trend(result, truth)
    assert [r["labeled"] for r in rows] == [20, 40, 60]
    acc = [r["cumulative_accuracy"] for r in rows]
    assert acc == pytest.approx([0.5, 0.75, 50 / 60])
    assert acc == sorted(acc)


def test_trend_single_round_matches_final():
    truth = {"a": "bot", "b": "genuine", "c": "genuine"}
    labels = {"a": "spambot", "b": "spambot", "c": "genuine"}
    result = ClassificationResult(labels, [_snap(1, genuine=[["c"]], spambot=[["b"]])], ClassifierParams(), ["a"], [])
    rows = classification_trend(result, truth)
    assert len(rows) == 1
    final = metrics(confusion(labels, truth))
    assert rows[0]["cumulative_accuracy"] == final.accuracy
    assert rows[0]["cumulative_f1"] == final.f1


def test_synth_deterministic():
    spec = SynthSpec(n_bots=20, n_genuine=20, rng_seed=42)
    assert generate_synthetic(spec) == generate_synthetic(spec)
    other = generate_synthetic(SynthSpec(n_bots=20, n_genuine=20, rng_seed=43))
    assert other != generate_synthetic(spec)


def test_synth_noiseless_full_template():
    spec = SynthSpec(n_bots=15, n_genuine=5, dna_length_range=(40, 40), template_length=40, noise_rate=0)
    dnas, truth = generate_synthetic(spec)
    bots = {d.sequence for d in dnas if truth[d.account_id] == "bot"}
    assert len(bots) == 1
    assert sum(v == "bot" for v in truth.values()) == 15


def test_synth_validation():
    with pytest.raises(ValueError):
        SynthSpec(dna_length_range=(50, 60), template_length=55)
    with pytest.raises(ValueError):
        SynthSpec(noise_rate=1.0)


def test_truth_roundtrip(tmp_path):
    p = tmp_path / "truth.csv"
    write_truth(p, {"a": "spambot", "b": "genuine"})
    assert p.read_text() == "account_id,label\na,bot\nb,genuine\n"
    assert read_truth(p) == {"a": "bot", "b": "genuine"}
