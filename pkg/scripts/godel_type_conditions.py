"""Evaluate the conditional Gödel-type clauses on a few profile pairs.

Each row: clause, whether its hypothesis holds for (h, f), and whether the
pipeline confirms the conclusion.

    python3 scripts/godel_type_conditions.py [--profiles "h;f" ...]
"""
from __future__ import annotations

import argparse
import time

from curvkit import catalog as cat

DEFAULT_PROFILES = {
    "som-raychaudhuri": ("a*r^2", "r"),
    "godel": ("2*sqrt(2)*sinh(m*r/2)^2/m", "2*sinh(m*r/2)*cosh(m*r/2)/m"),
    # f = c h' and h' = c^2 h''' with c = 2
    "semisymmetric": ("2*cosh(r/2)", "2*sinh(r/2)"),
    "polynomial": ("r^3 + r", "r^2 + 1"),
    "generic": ("h", "f"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--profiles", action="append", metavar="H;F", help="extra profile pair")
    args = ap.parse_args()
    cases = dict(DEFAULT_PROFILES)
    for k, text in enumerate(args.profiles or ()):
        h, f = text.split(";")
        cases[f"user-{k}"] = (h.strip(), f.strip())

    for label, (h, f) in cases.items():
        t0 = time.perf_counter()
        spec = cat.godel_type_from_strings(h, f, name=label)
        clauses = cat.godel_type_conditions(spec)
        print(f"== {label}: h = {h}, f = {f}  ({time.perf_counter() - t0:.1f} s)")
        for c in clauses:
            hyp = "holds" if c.hypothesis_holds else "fails"
            conf = {True: "confirmed", False: "NOT confirmed", None: "-"}[c.confirmed]
            print(f"  {c.name:<42} hypothesis {hyp:<5}  {conf}")
            if c.name == "generalized Roter" and c.hypothesis_holds:
                print(f"      published coefficients hold: {c.confirmed}; with L1 halved: {c.detail.get('holds_with_L1_halved')}")


if __name__ == "__main__":
    main()
