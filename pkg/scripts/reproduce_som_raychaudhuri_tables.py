"""Recompute every Som-Raychaudhuri component table and diff it against the listed values.

    python3 scripts/reproduce_som_raychaudhuri_tables.py [--json]
"""
from __future__ import annotations

import argparse
import json
import time

from curvkit import catalog as cat
from curvkit.cli import golden_comparison
from curvkit.curvature import CurvatureBundle
from curvkit.tensorlab import build_metric


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    entry = cat.get_entry("som-raychaudhuri")
    spec = entry.spec()
    bundle = CurvatureBundle(build_metric(spec))
    diff = golden_comparison(bundle, entry, spec)
    diff["scalar curvature"] = {"computed": str(bundle.kappa)}
    elapsed = time.perf_counter() - t0

    if args.json:
        print(json.dumps(diff, indent=2, ensure_ascii=False))
        return
    print(f"{'table':<8} {'listed':>6}  mismatched / unlisted nonzero orbits")
    for name, row in diff.items():
        if "listed_components" not in row:
            continue
        flag = "ok" if not row["mismatched"] and not row["unlisted_nonzero"] else ""
        print(f"{name:<8} {row['listed_components']:>6}  {row['mismatched'] or '-'} / {row['unlisted_nonzero'] or '-'}  {flag}")
    print(f"scalar curvature = {bundle.kappa}")
    print(f"({elapsed:.1f} s)")


if __name__ == "__main__":
    main()
