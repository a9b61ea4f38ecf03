"""Command-line entry point: ``dnaspecies <subcommand>``."""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .alignment import ScoringScheme, global_align, similarity_from
from .classifier import ClassificationResult, ClassifierParams, classify_dataset
from .evaluation import (
    SynthSpec,
    classification_trend,
    confusion,
    curve_diagnostic,
    generate_synthetic,
    metrics,
    read_truth,
    report,
    write_rows,
    write_truth,
)
from .ingest import IngestError, builtin_alphabet, encode_dataset, parse_dataset, read_dna_file, write_dna_file
from .lcs import compute_lcs_curve

logger = logging.getLogger("dnaspecies")

OUT_ENV = "DNASPECIES_OUT"

# config key -> (ClassifierParams field, type)
PARAM_KEYS = {
    "tau": ("tau", float),
    "x": ("x", float),
    "pareto_fraction": ("pareto_fraction", float),
    "min_species_size": ("min_group_size", int),
    "weighted_low": ("weighted_low", float),
    "weighted_high": ("weighted_high", float),
    "ratio_cap": ("ratio_cap", float),
}
SCHEME_KEYS = ("match", "mismatch", "open_gap", "extend_gap")


class CliError(Exception):
    pass


def load_config(path) -> dict:
    """Flat ``key = value`` file; an optional ``[section]`` header is ignored."""
    if path is None:
        return {}
    text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    parser.read_string(text)
    conf = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            conf[key.replace("-", "_")] = value
    return conf


def _pick(args, conf, key, cast, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in conf:
        try:
            return cast(conf[key])
        except ValueError:
            raise CliError(f"config: bad value for {key}: {conf[key]!r}") from None
    return default


def _floats(text) -> list[float]:
    if isinstance(text, list):
        return text
    try:
        return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise CliError(f"bad number list {text!r}") from None


def _triples(text) -> list[tuple[int, int, int]]:
    if isinstance(text, list):
        return text
    out = []
    for chunk in str(text).split(";"):
        if not chunk.strip():
            continue
        parts = [p for p in chunk.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise CliError(f"penalty triple needs 3 values: {chunk!r}")
        try:
            out.append(tuple(int(p) for p in parts))
        except ValueError:
            raise CliError(f"penalties must be integers: {chunk!r}") from None
    return out


def scheme_from(args, conf) -> ScoringScheme:
    base = ScoringScheme()
    values = {k: _pick(args, conf, k, int, getattr(base, k)) for k in SCHEME_KEYS}
    return ScoringScheme(**values)


def params_from(args, conf) -> ClassifierParams:
    kwargs = {}
    for key, (field_name, cast) in PARAM_KEYS.items():
        value = _pick(args, conf, key, cast)
        if value is not None:
            kwargs[field_name] = value
    return ClassifierParams(scheme=scheme_from(args, conf), **kwargs)


def out_dir_from(args, conf) -> Path:
    path = Path(_pick(args, conf, "out_dir", str, os.environ.get(OUT_ENV, "out")))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_dnas(path):
    if not Path(path).exists():
        raise CliError(f"no such file: {path}")
    dnas = read_dna_file(path)
    if len(dnas) < 2:
        raise CliError(f"{path}: need at least 2 accounts, found {len(dnas)}")
    return dnas


def _load_truth(path, dnas=None):
    if not Path(path).exists():
        raise CliError(f"no such file: {path}")
    truth = read_truth(path)
    if dnas is not None:
        missing = [d.account_id for d in dnas if d.account_id not in truth]
        if missing:
            raise CliError(f"{path}: no truth label for {', '.join(missing[:10])}")
        truth = {d.account_id: truth[d.account_id] for d in dnas}
    return truth


# --- subcommands -----------------------------------------------------------


def cmd_encode(args, conf) -> int:
    alphabet = builtin_alphabet(_pick(args, conf, "alphabet", str, "type3"))
    groups = parse_dataset(args.dataset, args.format)
    dnas = encode_dataset(groups, alphabet)
    out = args.output or (out_dir_from(args, conf) / "dna.tsv")
    write_dna_file(out, dnas)
    if not dnas:
        print(f"warning: {args.dataset}: 0 accounts", file=sys.stderr)
    logger.info("wrote %d sequences to %s", len(dnas), out)
    return 0


def cmd_curve(args, conf) -> int:
    dnas = _load_dnas(args.dna)
    curve = compute_lcs_curve(dnas)
    rows = [
        {"k": e.group_size, "length": e.length, "witness": e.witness, "member_count": len(e.members)}
        for e in curve.entries
    ]
    fields = ["k", "length", "witness", "member_count"]
    if args.output == "-":
        _print_csv(rows, fields)
    else:
        out = args.output or (out_dir_from(args, conf) / "curve.csv")
        write_rows(out, rows, fields)
    return 0


def _print_csv(rows, fields) -> None:
    w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def cmd_align(args, conf) -> int:
    scheme = scheme_from(args, conf)
    res = global_align(args.a, args.b, scheme)
    sim = similarity_from(res, scheme)
    print(f"score\t{res.score}")
    print(f"aligned_length\t{res.aligned_length}")
    print(f"matches\t{res.n_matches}")
    print(f"mismatches\t{res.n_mismatches}")
    print(f"open_gaps\t{res.n_open_gaps}")
    print(f"extended_gaps\t{res.n_extended_gaps}")
    print(f"similarity\t{sim:.6f}")
    return 0


def cmd_classify(args, conf) -> int:
    dnas = _load_dnas(args.dna)
    params = params_from(args, conf)
    result = classify_dataset(dnas, params)
    out = out_dir_from(args, conf)
    write_rows(out / "labels.csv", [{"account_id": k, "label": v} for k, v in result.labels.items()],
               ["account_id", "label"])
    _write_json(out / "trace.json", result.to_dict())
    if args.truth:
        truth = _load_truth(args.truth, dnas)
        rep = report(result.labels, truth)
        _write_json(out / "report.json", rep)
        write_rows(out / "trend.csv", classification_trend(result, truth))
    counts = result.to_dict()["counts"]
    print(", ".join(f"{k}={v}" for k, v in counts.items()))
    return 0


def cmd_evaluate(args, conf) -> int:
    labels = _load_truth(args.labels)
    truth = _load_truth(args.truth)
    out = out_dir_from(args, conf)
    rep = report(labels, truth)
    _write_json(out / "report.json", rep)
    row = {**rep["confusion"], **rep["metrics"], **{f"{k}_pct": v for k, v in rep["percent"].items()}}
    write_rows(out / "report.csv", [row])
    if args.trace:
        trace = json.loads(Path(args.trace).read_text(encoding="utf-8"))
        write_rows(out / "trend.csv", _trend_from_trace(trace, labels, truth))
    if args.dna:
        dnas = _load_dnas(args.dna)
        write_rows(out / "curve.csv", curve_diagnostic(dnas, truth))
    p = rep["percent"]
    print(f"ACC {p['accuracy']}  F1 {p['f1']}  MCC {p['mcc']}  " + " ".join(f"{k}={v}" for k, v in rep["confusion"].items()))
    return 0


def _trend_from_trace(trace, labels, truth):
    result = ClassificationResult(
        labels=labels,
        iterations=trace["iterations"],
        params=ClassifierParams(),
        initial_spambot=trace.get("initial_spambot", []),
        initial_genuine=trace.get("initial_genuine", []),
    )
    return classification_trend(result, truth)


def cmd_synth(args, conf) -> int:
    seed = _pick(args, conf, "seed", int, 0)
    spec = SynthSpec(
        n_bots=args.n_bots,
        n_genuine=args.n_genuine,
        dna_length_range=(args.length_min, args.length_max),
        template_length=args.template_length,
        noise_rate=args.noise,
        rng_seed=seed,
    )
    dnas, truth = generate_synthetic(spec)
    out = out_dir_from(args, conf)
    write_dna_file(out / "dna.tsv", dnas)
    write_truth(out / "truth.csv", truth)
    print(f"wrote {len(dnas)} accounts to {out}")
    return 0


def _sweep_cell(job):
    dnas, truth, params = job
    result = classify_dataset(dnas, params)
    c = confusion(result.labels, truth)
    m = metrics(c)
    pct = m.rounded()
    return {
        "accuracy": m.accuracy, "f1": m.f1, "mcc": m.mcc,
        "acc_pct": pct["accuracy"], "f1_pct": pct["f1"], "mcc_pct": pct["mcc"],
        "tp": c.tp, "tn": c.tn, "fp": c.fp, "fn": c.fn,
    }


def run_sweep(dnas, truth, grid, jobs: int = 1) -> list[dict]:
    """Classify once per ClassifierParams in ``grid``; rows keep grid order."""
    work = [(dnas, truth, p) for p in grid]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, work))
    return [_sweep_cell(w) for w in work]


def _sweep_inputs(args, conf):
    dnas = _load_dnas(args.dna)
    truth = _load_truth(args.truth, dnas)
    return dnas, truth, params_from(args, conf)


def _print_table(rows, fields) -> None:
    print("\t".join(fields))
    for r in rows:
        print("\t".join(f"{r[f]:.4f}" if isinstance(r[f], float) else str(r[f]) for f in fields))


def cmd_sweep_tau(args, conf) -> int:
    dnas, truth, base = _sweep_inputs(args, conf)
    grid = _floats(_pick(args, conf, "tau_grid", str, "1,1.5,2,2.5,3,3.5"))
    if not grid:
        raise CliError("empty tau grid")
    cells = run_sweep(dnas, truth, [replace(base, tau=t) for t in grid], args.jobs)
    rows = [{"tau": t, **c} for t, c in zip(grid, cells)]
    write_rows(out_dir_from(args, conf) / "sweep_tau.csv", rows)
    _print_table(rows, ["tau", "acc_pct", "f1_pct", "mcc_pct"])
    return 0


def cmd_sweep_x(args, conf) -> int:
    dnas, truth, base = _sweep_inputs(args, conf)
    grid = _floats(_pick(args, conf, "x_grid", str, "1,2,3,4"))
    if not grid:
        raise CliError("empty x grid")
    cells = run_sweep(dnas, truth, [replace(base, x=x) for x in grid], args.jobs)
    rows = [{"x": x, **c} for x, c in zip(grid, cells)]
    write_rows(out_dir_from(args, conf) / "sweep_x.csv", rows)
    _print_table(rows, ["x", "acc_pct", "f1_pct", "fp", "fn"])
    return 0


def full_penalty_grid(low: int = -5, high: int = -1) -> list[tuple[int, int, int]]:
    vals = range(low, high + 1)
    return [(mm, og, eg) for mm in vals for og in vals for eg in vals]


def cmd_sweep_scores(args, conf) -> int:
    dnas, truth, base = _sweep_inputs(args, conf)
    spec = _pick(args, conf, "score_triples", str, None)
    triples = _triples(spec) if spec else full_penalty_grid()
    if not triples:
        raise CliError("empty penalty grid")
    grid = [replace(base, scheme=ScoringScheme(0, *t)) for t in triples]
    cells = run_sweep(dnas, truth, grid, args.jobs)
    best = max(c["f1"] for c in cells)
    rows = [
        {"mismatch": t[0], "open_gap": t[1], "extend_gap": t[2], **c, "best": int(c["f1"] == best)}
        for t, c in zip(triples, cells)
    ]
    write_rows(out_dir_from(args, conf) / "sweep_scores.csv", rows)
    _print_table(rows, ["mismatch", "open_gap", "extend_gap", "f1_pct", "best"])
    return 0


# --- parser ----------------------------------------------------------------


def _add_scheme_flags(p) -> None:
    g = p.add_argument_group("scoring scheme (default 0,-5,-4,-5)")
    g.add_argument("--match", type=int)
    g.add_argument("--mismatch", type=int)
    g.add_argument("--open-gap", dest="open_gap", type=int)
    g.add_argument("--extend-gap", dest="extend_gap", type=int)


def _add_param_flags(p) -> None:
    g = p.add_argument_group("classifier parameters")
    g.add_argument("--tau", type=float)
    g.add_argument("--x", type=float)
    g.add_argument("--pareto-fraction", dest="pareto_fraction", type=float)
    g.add_argument("--min-species-size", dest="min_species_size", type=int)
    g.add_argument("--weighted-low", dest="weighted_low", type=float)
    g.add_argument("--weighted-high", dest="weighted_high", type=float)
    g.add_argument("--ratio-cap", dest="ratio_cap", type=float)
    _add_scheme_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dnaspecies", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--out-dir", dest="out_dir", help=f"output directory (default ${OUT_ENV} or ./out)")
        return p

    p = common(sub.add_parser("encode", help="timeline dataset -> DNA file"))
    p.add_argument("dataset")
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--alphabet", help="type3 (default) or content3")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = common(sub.add_parser("curve", help="LCS curve as CSV"))
    p.add_argument("dna")
    p.add_argument("-o", "--output", help="'-' for stdout")
    p.set_defaults(func=cmd_curve)

    p = common(sub.add_parser("align", help="align two sequences"))
    p.add_argument("a")
    p.add_argument("b")
    _add_scheme_flags(p)
    p.set_defaults(func=cmd_align)

    p = common(sub.add_parser("classify", help="label every account"))
    p.add_argument("dna")
    p.add_argument("--truth", help="optional truth CSV for report.json/trend.csv")
    _add_param_flags(p)
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("evaluate", help="score labels against truth"))
    p.add_argument("--labels", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--trace", help="trace.json from classify, for trend.csv")
    p.add_argument("--dna", help="DNA file, for the curve diagnostic")
    p.set_defaults(func=cmd_evaluate)

    p = common(sub.add_parser("synth", help="seeded synthetic corpus"))
    p.add_argument("--n-bots", type=int, default=200)
    p.add_argument("--n-genuine", type=int, default=200)
    p.add_argument("--length-min", type=int, default=100)
    p.add_argument("--length-max", type=int, default=100)
    p.add_argument("--template-length", type=int, default=60)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    for name, func, grid_flag, desc, grid_help in (
        ("sweep-tau", cmd_sweep_tau, "--tau-grid", "accuracy per tau", "comma list (default 1,1.5,2,2.5,3,3.5)"),
        ("sweep-x", cmd_sweep_x, "--x-grid", "accuracy, FP and FN per x", "comma list (default 1,2,3,4)"),
        ("sweep-scores", cmd_sweep_scores, "--score-triples", "F1 per penalty triple",
         "'mm,og,eg;...' (default: every triple in -5..-1); use --score-triples=-5,-4,-5"),
    ):
        p = common(sub.add_parser(name, help=desc))
        p.add_argument("dna")
        p.add_argument("truth")
        p.add_argument(grid_flag, dest=grid_flag[2:].replace("-", "_"), help=grid_help)
        p.add_argument("--jobs", type=int, default=1)
        _add_param_flags(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        conf = load_config(args.config)
        return args.func(args, conf)
    except (CliError, IngestError, ValueError, KeyError, OSError, configparser.Error) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
