"""BLER sweep for one rate-matching configuration.

    python scripts/run_bler.py --M 96 --K 48 --grid 0 1 2 3 --trials 20000
"""

import argparse
import json
import time

from polar_rm.linksim import SimSpec, simulate
from polar_rm.ratematch import RmConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=128)
    ap.add_argument("--K", type=int, default=64)
    ap.add_argument("--mode", default="auto", choices=["auto", "puncture", "shorten", "repeat"])
    ap.add_argument("--grid", type=float, nargs="+", default=[0.0, 1.0, 2.0, 3.0])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--target-errors", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", action="store_true")
    args = ap.parse_args()

    cfg = RmConfig.build(args.M, args.K, args.mode)
    spec = SimSpec(cfg, tuple(args.grid), args.trials, args.target_errors, args.seed)
    t0 = time.perf_counter()
    res = simulate(spec)
    if args.csv:
        print(res.to_csv(), end="")
    else:
        print(json.dumps({"mode": cfg.mode, "N": cfg.N, **res.to_json()}, indent=1))
    print(f"# {time.perf_counter() - t0:.1f}s", flush=True)


if __name__ == "__main__":
    main()
