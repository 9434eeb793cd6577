"""Command-line entry point.

Exit codes: 0 success, 1 verdict mismatch against ``--expect``, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .catalog import CATALOG, get_entry, golden_tables, godel_type_conditions
from .classify import ALL_CHECKS, TENSOR_SELECTORS, classify_metric, select_tensor
from .curvature import CurvatureBundle
from .exprcore.numeric import ZeroTestConfig
from .exprcore.parser import ParseError
from .reportio import (
    MetricFileError,
    Report,
    compare_expectations,
    component_table,
    emit_report,
    load_expectations,
    load_metric_file,
)
from .tensorlab import DegenerateMetricError, build_metric

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class MetricSource:
    """A catalog name with bindings (``godel-type:h=a*r^2,f=r``) or a file."""

    name: str | None = None
    params: dict = field(default_factory=dict)
    path: str | None = None
    inline: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str, extra_params: dict) -> "MetricSource":
        name, _, rest = text.partition(":")
        inline = _bindings(rest.split(",")) if rest else {}
        return cls(name=name, params=dict(extra_params), inline=inline)

    def resolve(self, config: ZeroTestConfig):
        """(spec, catalog entry or None)."""
        if self.path is not None:
            return load_metric_file(self.path, config), None
        try:
            entry = get_entry(self.name)
        except KeyError as e:
            raise InputError(e.args[0]) from None
        # --param applies to every metric that takes it; inline bindings must all match
        params = {k: v for k, v in self.params.items() if k in entry.parameters}
        params.update(self.inline)
        try:
            return entry.spec(**params), entry
        except (ValueError, KeyError, ParseError) as e:
            raise InputError(f"{self.name}: {e}") from None


def _bindings(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"parameter binding {item!r} is not of the form name=value")
        out[key.strip()] = value.strip()
    return out


@dataclass
class CommandConfig:
    subcommand: str
    sources: list
    checks: list
    fmt: str
    zero_test: ZeroTestConfig
    tensors: list = field(default_factory=list)
    expect: str | None = None
    goldens: bool = False
    conditions: bool = False

    @classmethod
    def from_args(cls, args) -> "CommandConfig":
        zt = ZeroTestConfig(samples=args.samples, precision=args.precision, seed=args.seed)
        params = _bindings(args.param or [])
        if args.command == "catalog":
            return cls("catalog", [], [], "json" if args.json else "text", zt)
        if args.command == "compare":
            sources = [MetricSource.parse(args.metric_a, params), MetricSource.parse(args.metric_b, params)]
        else:
            if (args.metric is None) == (args.file is None):
                raise InputError("give exactly one metric source: a catalog name or --file")
            sources = [MetricSource(path=args.file) if args.file else MetricSource.parse(args.metric, params)]
        checks = []
        if args.command == "classify":
            if args.checks is not None:
                checks = [c.strip() for c in args.checks.split(",") if c.strip()]
            else:
                checks = list(ALL_CHECKS)
            unknown = [c for c in checks if c not in ALL_CHECKS]
            if unknown:
                raise InputError(f"unknown checks {unknown}; choose from {', '.join(ALL_CHECKS)}")
        tensors = []
        if args.command == "components":
            tensors = [t.strip() for t in args.tensor.split(",") if t.strip()]
            bad = [t for t in tensors if t not in TENSOR_SELECTORS]
            if bad:
                raise InputError(f"unknown tensor selectors {bad}; choose from {', '.join(TENSOR_SELECTORS)}")
        return cls(
            args.command, sources, checks, "json" if args.json else "text", zt, tensors,
            getattr(args, "expect", None), getattr(args, "goldens", False), getattr(args, "conditions", False),
        )


# -- commands ------------------------------------------------------------------------


def _bundle(spec, config):
    try:
        return CurvatureBundle(build_metric(spec, config))
    except DegenerateMetricError as e:
        raise InputError(str(e)) from None


def golden_comparison(bundle, entry, spec) -> dict:
    """Per tensor: listed components that disagree, and nonzero orbits the table omits."""
    out = {}
    for name, table in golden_tables(entry, spec).items():
        T = select_tensor(bundle, name)
        wrong = sorted(k for k, v in table.items() if T[k] != v)
        missing = sorted(idx for idx, v in T.representatives() if idx not in table and not v.is_zero())
        out[name] = {
            "listed_components": len(table),
            "mismatched": ["".join(map(str, k)) for k in wrong],
            "unlisted_nonzero": ["".join(map(str, k)) for k in missing],
        }
    return out


def cmd_components(cfg: CommandConfig) -> tuple[int, str]:
    spec, _ = cfg.sources[0].resolve(cfg.zero_test)
    bundle = _bundle(spec, cfg.zero_test)
    tables = {t: component_table(select_tensor(bundle, t), spec.symbols, cfg.zero_test) for t in cfg.tensors}
    report = Report.build(spec, cfg.zero_test, components=tables, checks=[])
    return EXIT_OK, emit_report(report, cfg.fmt)


def run_classification(spec, entry, cfg: CommandConfig, checks=None):
    bundle = _bundle(spec, cfg.zero_test)
    ingredients = entry.ingredients_for(spec) if entry is not None else {}
    checks = cfg.checks if checks is None else checks
    structure = classify_metric(bundle, checks, ingredients, cfg.zero_test)
    extra = {}
    if cfg.goldens and entry is not None and entry.goldens:
        extra["goldens"] = golden_comparison(bundle, entry, spec)
    if cfg.conditions:
        if not {"h", "f"} <= set(spec.profiles) or spec.symbols.coordinates != ("t", "phi", "r", "z"):
            raise InputError("--conditions needs a Gödel-type chart with h and f profiles")
        extra["conditions"] = {c.name: c.to_dict() for c in godel_type_conditions(spec, cfg.zero_test)}
    return structure, extra


def cmd_classify(cfg: CommandConfig) -> tuple[int, str]:
    spec, entry = cfg.sources[0].resolve(cfg.zero_test)
    expected = load_expectations(cfg.expect) if cfg.expect else None
    structure, extra = run_classification(spec, entry, cfg)
    report = Report.build(spec, cfg.zero_test, structure, extra=extra, checks=cfg.checks)
    code = EXIT_OK
    if expected is not None:
        problems = compare_expectations(report.results, expected, spec.symbols, cfg.zero_test)
        report.extra["expectations"] = {"matched": not problems, "mismatches": problems}
        code = EXIT_MISMATCH if problems else EXIT_OK
    return code, emit_report(report, cfg.fmt)


COMPARE_CHECKS = (
    "cyclic_parallel", "codazzi", "ricci_generalized_pseudosymmetric", "weyl_pseudosymmetric",
    "ricci_compatibility", "quasi_einstein", "conharmonic_pseudosymmetric", "generalized_roter", "ein",
)


def comparison_facets(results: dict) -> dict:
    """Facet name -> short verdict string, used to line two metrics up."""
    yn = lambda name: "yes" if results[name]["holds"] else "no"
    qe = results["quasi_einstein"]
    k = qe.get("k")
    kk = results["conharmonic_pseudosymmetric"]
    if kk["holds"]:
        c = kk.get("particular", {}).get("QgK", "0")
        kk_text = "K·K = 0" if c == "0" else f"K·K = ({c}) Q(g,K)"
    else:
        kk_text = "no relation K·K = L Q(g,K)"
    ein = results["ein"].get("level")
    return {
        "Ricci tensor cyclic parallel": yn("cyclic_parallel"),
        "Ricci tensor of Codazzi type": yn("codazzi"),
        "R·R = Q(S,R)": yn("ricci_generalized_pseudosymmetric"),
        "pseudosymmetric Weyl tensor": yn("weyl_pseudosymmetric"),
        "Ricci compatibility": results["ricci_compatibility"]["summary"],
        "quasi-Einstein type": {0: "Einstein", 1: "quasi-Einstein"}.get(k, f"{k}-quasi-Einstein"),
        "conharmonic relation": kk_text,
        "generalized Roter type": yn("generalized_roter"),
        "Ein level": f"Ein({ein})" if ein else "none up to Ein(4)",
    }


def cmd_compare(cfg: CommandConfig) -> tuple[int, str]:
    facets, names = [], []
    for src in cfg.sources:
        spec, entry = src.resolve(cfg.zero_test)
        structure, _ = run_classification(spec, entry, cfg, COMPARE_CHECKS)
        facets.append(comparison_facets(structure.to_dict()))
        names.append(spec.name if src.path else src.name)
    a, b = facets
    similar = {k: a[k] for k in a if a[k] == b[k]}
    different = {k: {names[0]: a[k], names[1]: b[k]} for k in a if a[k] != b[k]}
    doc = {"metrics": names, "seed": cfg.zero_test.seed, "similarity": similar, "dissimilarity": different}
    if cfg.fmt == "json":
        return EXIT_OK, json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    lines = [f"{names[0]} vs {names[1]}", "", "Similarity:"]
    lines += [f"  {k}: {v}" for k, v in similar.items()] or ["  none"]
    lines += ["", "Dissimilarity:"]
    lines += [f"  {k}: {v[names[0]]} | {v[names[1]]}" for k, v in different.items()] or ["  none"]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_catalog(cfg: CommandConfig) -> tuple[int, str]:
    rows = [
        {"name": e.name, "parameters": list(e.parameters), "description": e.description,
         "goldens": sorted(e.goldens) if e.goldens else []}
        for e in CATALOG.values()
    ]
    if cfg.fmt == "json":
        return EXIT_OK, json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    width = max(len(r["name"]) for r in rows)
    lines = [f"{r['name']:<{width}}  ({', '.join(r['parameters'])})  {r['description']}" for r in rows]
    return EXIT_OK, "\n".join(lines) + "\n"


COMMANDS = {"components": cmd_components, "classify": cmd_classify, "compare": cmd_compare, "catalog": cmd_catalog}


# -- argument parsing ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="zero-test sampling seed (default 0)")
    common.add_argument("--precision", type=int, default=50, help="working decimal digits (default 50)")
    common.add_argument("--samples", type=int, default=8, help="sample points per zero test (default 8)")
    common.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="bind a catalog parameter; a name keeps it symbolic, a rational specializes it")

    p = _Parser(prog="curvkit", description="Curvature tensors and curvature-condition checks for metrics.")
    p.add_argument("--version", action="version", version=f"curvkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def metric_args(sp):
        sp.add_argument("metric", nargs="?", help="catalog name, optionally NAME:k=v,k=v")
        sp.add_argument("--file", help="metric definition file (YAML)")

    c = sub.add_parser("components", parents=[common], help="print nonzero tensor components")
    metric_args(c)
    c.add_argument("--tensor", required=True, help=f"comma-separated selectors from {', '.join(TENSOR_SELECTORS)}")

    k = sub.add_parser("classify", parents=[common], help="run classification checks")
    metric_args(k)
    grp = k.add_mutually_exclusive_group()
    grp.add_argument("--all", action="store_true", help="run every check (the default)")
    grp.add_argument("--checks", help=f"comma-separated subset of {', '.join(ALL_CHECKS)}")
    k.add_argument("--expect", help="YAML/JSON file of expected verdicts; exit 1 on mismatch")
    k.add_argument("--goldens", action="store_true", help="compare against the catalog's reference tables")
    k.add_argument("--conditions", action="store_true", help="evaluate the Gödel-type conditional clauses")

    m = sub.add_parser("compare", parents=[common], help="line up the verdicts of two metrics")
    m.add_argument("metric_a")
    m.add_argument("metric_b")

    cat = sub.add_parser("catalog", parents=[common], help="built-in metrics")
    cat.add_argument("action", choices=["list"])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CommandConfig.from_args(args)
        code, text = COMMANDS[cfg.subcommand](cfg)
    except (InputError, MetricFileError) as e:
        print(f"curvkit: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
