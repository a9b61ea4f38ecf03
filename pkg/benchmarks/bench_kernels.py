#!/usr/bin/env python3
"""Compare the numba kernels with the pure-numpy fallback.

Each mode runs in its own interpreter because the switch is read at import:

    python benchmarks/bench_kernels.py            # both modes, side by side
    python benchmarks/bench_kernels.py --worker   # one mode, JSON to stdout
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def worker(n_accounts, repeat):
    import numpy as np

    from dnaspecies import _accel
    from dnaspecies.alignment import ScoringScheme, global_align
    from dnaspecies.evaluation import SynthSpec, generate_synthetic
    from dnaspecies.lcs import compute_lcs_curve

    dnas, _ = generate_synthetic(SynthSpec(n_bots=n_accounts // 2, n_genuine=n_accounts - n_accounts // 2))
    rng = np.random.default_rng(0)
    pairs = ["".join(rng.choice(list("ATC"), int(rng.integers(10, 40)))) for _ in range(200)]
    scheme = ScoringScheme()

    # compile outside the timed region
    compute_lcs_curve(dnas[:4])
    global_align("ACT", "ATT", scheme)

    def align_batch():
        for a, b in zip(pairs[::2], pairs[1::2]):
            global_align(a, b, scheme)

    result = {
        "numba": _accel.USE_NUMBA,
        "curve_s": _best_of(lambda: compute_lcs_curve(dnas), repeat),
        "align_100_pairs_s": _best_of(align_batch, repeat),
        "total_chars": sum(len(d.sequence) for d in dnas),
    }
    json.dump(result, sys.stdout)


def run_mode(disable, n_accounts, repeat):
    env = dict(os.environ)
    if disable:
        env["DNASPECIES_DISABLE_NUMBA"] = "1"
    else:
        env.pop("DNASPECIES_DISABLE_NUMBA", None)
    out = subprocess.run(
        [sys.executable, __file__, "--worker", "--accounts", str(n_accounts), "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--accounts", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if args.worker:
        worker(args.accounts, args.repeat)
        return
    fast = run_mode(False, args.accounts, args.repeat)
    slow = run_mode(True, args.accounts, args.repeat)
    print(f"{args.accounts} accounts, {fast['total_chars']} symbols")
    print(f"{'kernel':<20}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key in ("curve_s", "align_100_pairs_s"):
        a, b = fast[key], slow[key]
        print(f"{key:<20}{a:>12.4f}{b:>12.4f}{b / a:>9.1f}x")
    if not fast["numba"]:
        print("note: numba unavailable, both columns ran the fallback")


if __name__ == "__main__":
    main()
