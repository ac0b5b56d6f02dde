"""Run every preset for a range of seeds and write the outputs per seed.

    python scripts/run_presets.py --seeds 1 2 3 --out results [--quick]
"""
import argparse
import time
from pathlib import Path

from ldis import harness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs="+", default=[1])
    ap.add_argument("--out", default="results")
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--presets", nargs="+", default=list(harness.PRESETS), choices=harness.PRESETS)
    args = ap.parse_args()
    for name in args.presets:
        for seed in args.seeds:
            t0 = time.perf_counter()
            run = harness.run_preset(name, (seed,), quick=args.quick)
            harness.write_preset(run, Path(args.out) / f"seed{seed}")
            print(f"{name} seed={seed}: {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
