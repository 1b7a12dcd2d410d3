"""Run all three synthetic sweeps in one process so embeddings are reused.

    python benchmarks/full_scale_run.py configs/paper.cfg results/paper --repetitions 1
"""

import argparse
import logging
import pathlib
import time

from kgorient.experiments import SWEEPS, emit_report, format_summary, load_config


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("outdir")
    ap.add_argument("--repetitions", type=int, default=None)
    ap.add_argument("--sweeps", nargs="+", default=list(SWEEPS))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = load_config(args.config)
    if args.repetitions:
        cfg = cfg.replace(repetitions=args.repetitions)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.sweeps:
        t0 = time.perf_counter()
        result = SWEEPS[name](cfg)
        emit_report(result, out / f"{name}.csv", out / f"{name}.summary.csv")
        print(f"== {name} ({time.perf_counter() - t0:.0f} s)")
        print(format_summary(result), flush=True)


if __name__ == "__main__":
    main()
