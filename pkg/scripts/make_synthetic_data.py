#!/usr/bin/env python3
"""Regenerate data/synthetic_x1.csv and data/synthetic_x2.csv.

The files are a deterministic forward-model run at the benchmark
parameters (``wetlandsim.fitting.SYNTHETIC_TRUTH``); rerunning this
script reproduces them bit for bit.
"""

from pathlib import Path

from wetlandsim import fitting

ROOT = Path(__file__).resolve().parents[1]


def main():
    obs = fitting.benchmark_observations()
    out = ROOT / "data"
    out.mkdir(exist_ok=True)
    fitting.save_observations(obs, out / "synthetic_x1.csv", out / "synthetic_x2.csv")
    print(f"wrote {out / 'synthetic_x1.csv'} and {out / 'synthetic_x2.csv'}")


if __name__ == "__main__":
    main()
