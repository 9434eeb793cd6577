"""Line up the classification facets of the Gödel and Som-Raychaudhuri metrics.

    python3 scripts/compare_godel_som_raychaudhuri.py [--seed N]
"""
from __future__ import annotations

import argparse

from curvkit.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    argv = ["compare", "godel", "som-raychaudhuri", "--seed", str(args.seed)]
    raise SystemExit(cli_main(argv + (["--json"] if args.json else [])))
