"""Metric definition files and classification reports.

Metric files are YAML::

    version: 1
    name: som-raychaudhuri
    coordinates: [t, phi, r, z]
    parameters:
      a: [nonzero]
    components:          # lower triangle "i,j" with i >= j; omitted entries are 0
      "1,1": "1"
      "2,1": "a*r^2"
      "2,2": "a^2*r^4 - r^2"
      "3,3": "-1"
      "4,4": "-1"

Optional keys: ``functions`` (profile name -> coordinate, or
``{of: r, assume: [nonzero]}``) and ``profiles`` (``h``/``f`` expressions
for Gödel-type charts).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import __version__
from .exprcore import SymbolTable, parse_expr, zero_test
from .exprcore.numeric import DEFAULT_CONFIG, ZeroTestConfig
from .exprcore.parser import ParseError
from .tensorlab import DegenerateMetricError, MetricSpec, build_metric

METRIC_FILE_VERSION = 1
REPORT_SCHEMA_VERSION = 1


class MetricFileError(ValueError):
    """Schema violation or unparsable expression, with a source location."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None, column: int | None = None):
        self.source, self.line, self.column = source, line, column
        where = source if line is None else f"{source}:{line}:{column}"
        super().__init__(f"{where}: {message}")


# -- reading ----------------------------------------------------------------------


def _child(node, key):
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            if k.value == key:
                return v
    return None


def _index_pair(key: str, n: int, err):
    try:
        i, j = (int(x) for x in str(key).split(","))
    except ValueError:
        raise err(f"component key {key!r} is not of the form 'i,j'")
    if not (1 <= j <= i <= n):
        raise err(f"component key {key!r} must satisfy 1 <= j <= i <= {n}")
    return i, j


def parse_metric_text(text: str, source: str = "<string>", config: ZeroTestConfig = DEFAULT_CONFIG) -> MetricSpec:
    def err(msg, node=None, offset=0):
        if node is None:
            return MetricFileError(msg, source)
        m = node.start_mark
        quoted = 1 if getattr(node, "style", None) in ("'", '"') else 0
        return MetricFileError(msg, source, m.line + 1, m.column + 1 + quoted + offset)

    try:
        root = yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise MetricFileError(str(e).splitlines()[0], source,
                              mark.line + 1 if mark else None, mark.column + 1 if mark else None) from None
    if not isinstance(root, yaml.MappingNode):
        raise err("metric file must be a mapping")
    doc = yaml.safe_load(text)

    allowed = {"version", "name", "coordinates", "parameters", "functions", "components", "profiles"}
    extra = set(doc) - allowed
    if extra:
        raise err(f"unknown keys {sorted(extra)}", _child(root, sorted(extra)[0]))
    for key in ("version", "coordinates", "components"):
        if key not in doc:
            raise err(f"missing required key {key!r}")
    if doc["version"] != METRIC_FILE_VERSION:
        raise err(f"unsupported version {doc['version']!r}", _child(root, "version"))

    coords = doc["coordinates"]
    if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
        raise err("coordinates must be a list of names", _child(root, "coordinates"))
    params = doc.get("parameters") or {}
    if isinstance(params, list):
        params = {p: [] for p in params}
    if not isinstance(params, dict):
        raise err("parameters must be a mapping name -> assumptions", _child(root, "parameters"))
    assumptions = {p: set(tags or []) for p, tags in params.items()}
    functions = {}
    for fname, spec in (doc.get("functions") or {}).items():
        if isinstance(spec, dict):
            functions[fname] = spec.get("of")
            if spec.get("assume"):
                assumptions[fname] = set(spec["assume"])
        else:
            functions[fname] = spec
    try:
        table = SymbolTable(tuple(coords), tuple(params), functions, assumptions)
    except ValueError as e:
        raise err(str(e)) from None

    comp_node = _child(root, "components")
    if not isinstance(comp_node, yaml.MappingNode):
        raise err("components must be a mapping 'i,j' -> expression", comp_node)
    n = len(coords)
    entries = {}
    for knode, vnode in comp_node.value:
        i, j = _index_pair(knode.value, n, lambda m: err(m, knode))
        if (i, j) in entries:
            raise err(f"component {i},{j} given twice", knode)
        try:
            entries[(i, j)] = parse_expr(str(vnode.value), table)
        except ParseError as e:
            raise err(str(e), vnode, e.pos) from None

    profiles = {}
    for pname, ptext in (doc.get("profiles") or {}).items():
        pnode = _child(_child(root, "profiles"), pname)
        try:
            profiles[pname] = parse_expr(str(ptext), table)
        except ParseError as e:
            raise err(str(e), pnode, e.pos) from None

    try:
        spec = MetricSpec.from_lower(table, entries, doc.get("name", Path(source).stem), profiles)
        build_metric(spec, config)
    except DegenerateMetricError as e:
        raise MetricFileError(f"degenerate metric: {e}", source) from None
    except ValueError as e:
        raise MetricFileError(str(e), source) from None
    return spec


def load_metric_file(path, config: ZeroTestConfig = DEFAULT_CONFIG) -> MetricSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MetricFileError(f"cannot read file: {e.strerror}", str(path)) from None
    return parse_metric_text(text, str(path), config)


def _metric_document(spec: MetricSpec) -> dict:
    T = spec.symbols
    doc = {"version": METRIC_FILE_VERSION, "name": spec.name, "coordinates": list(T.coordinates)}
    if T.parameters:
        doc["parameters"] = {p: sorted(T.assumed(p)) for p in T.parameters}
    if T.functions:
        doc["functions"] = {
            f: ({"of": c, "assume": sorted(T.assumed(f))} if T.assumed(f) else c) for f, c in T.functions.items()
        }
    doc["components"] = {f"{i},{j}": str(v) for (i, j), v in spec.lower_entries().items()}
    # profiles written in another chart (Cartesian Gödel) are not expressible here
    names = T.names()
    own = {k: v for k, v in spec.profiles.items() if all(getattr(a, "name", "") in names for a in v.free_atoms())}
    if own:
        doc["profiles"] = {k: str(v) for k, v in own.items()}
    return doc


class _Quoted(str):
    pass


class _MetricDumper(yaml.SafeDumper):
    pass


_MetricDumper.add_representer(_Quoted, lambda d, v: d.represent_scalar("tag:yaml.org,2002:str", v, style='"'))
_MetricDumper.add_representer(list, lambda d, v: d.represent_sequence("tag:yaml.org,2002:seq", v, flow_style=True))


def dump_metric_file(spec: MetricSpec) -> str:
    """YAML text that :func:`parse_metric_text` reads back to an equal spec."""
    doc = _metric_document(spec)
    for key in ("components", "profiles"):
        if key in doc:
            doc[key] = {_Quoted(k): _Quoted(v) for k, v in doc[key].items()}
    return yaml.dump(doc, Dumper=_MetricDumper, sort_keys=False, allow_unicode=True, width=100)


# -- reports --------------------------------------------------------------------------


def index_label(idx) -> str:
    return "".join(map(str, idx)) if max(idx, default=0) < 10 else ",".join(map(str, idx))


def component_table(T, chart=None, config: ZeroTestConfig = DEFAULT_CONFIG) -> dict:
    """Nonzero representatives, one per symmetry orbit, sorted by index."""
    out = {}
    for idx, v in T.representatives():
        if v.is_zero():
            continue
        if v.has_kernels() and zero_test(v, chart, config).is_zero:
            continue
        out[index_label(idx)] = str(v)
    return out


@dataclass
class Report:
    metric: dict
    zero_test: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    tool: dict = field(default_factory=lambda: {"name": "curvkit", "version": __version__})
    schema: int = REPORT_SCHEMA_VERSION

    @classmethod
    def build(cls, spec: MetricSpec, config: ZeroTestConfig, structure=None, components=None, extra=None, checks=None):
        zt = {"seed": config.seed, "precision": config.precision, "samples": config.samples, "tol": config.tol}
        results = structure.to_dict() if structure is not None else {}
        checks = list(checks if checks is not None else results)
        return cls(_metric_document(spec), zt, checks, results, dict(components or {}), dict(extra or {}))

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "tool": dict(self.tool),
            "metric": self.metric,
            "zero_test": self.zero_test,
            "checks": list(self.checks),
            "results": self.results,
            "components": self.components,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        validate_report(doc)
        return cls(doc["metric"], doc["zero_test"], doc["checks"], doc["results"], doc["components"],
                   doc.get("extra", {}), doc["tool"], doc["schema"])


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "curvkit report",
    "type": "object",
    "required": ["schema", "tool", "metric", "zero_test", "checks", "results", "components"],
    "properties": {
        "schema": {"const": REPORT_SCHEMA_VERSION},
        "tool": {"type": "object", "required": ["name", "version"]},
        "metric": {"type": "object", "required": ["version", "name", "coordinates", "components"]},
        "zero_test": {"type": "object", "required": ["seed", "precision", "samples", "tol"]},
        "checks": {"type": "array", "items": {"type": "string"}},
        "results": {
            "type": "object",
            "additionalProperties": {"type": "object", "required": ["holds", "summary"]},
        },
        "components": {"type": "object", "additionalProperties": {"type": "object"}},
        "extra": {"type": "object"},
    },
}

_JSON_TYPES = {"object": dict, "array": list, "string": str}


def validate_report(doc) -> None:
    """Check ``doc`` against :data:`REPORT_SCHEMA` (the subset of JSON Schema it uses)."""

    def check(value, schema, path):
        if "const" in schema and value != schema["const"]:
            raise ValueError(f"{path}: expected {schema['const']!r}")
        t = schema.get("type")
        if t and not isinstance(value, _JSON_TYPES[t]):
            raise ValueError(f"{path}: expected {t}")
        for key in schema.get("required", ()):
            if key not in value:
                raise ValueError(f"{path}: missing {key!r}")
        for key, sub in schema.get("properties", {}).items():
            if key in value:
                check(value[key], sub, f"{path}.{key}")
        if "additionalProperties" in schema:
            for key, v in value.items():
                check(v, schema["additionalProperties"], f"{path}.{key}")
        if "items" in schema:
            for k, v in enumerate(value):
                check(v, schema["items"], f"{path}[{k}]")

    check(doc, REPORT_SCHEMA, "$")


def _verdict_word(holds) -> str:
    return {True: "yes", False: "no", None: "skipped"}[holds]


def render_text(report: Report) -> str:
    m = report.metric
    zt = report.zero_test
    lines = [
        f"metric: {m['name']}  coordinates ({', '.join(m['coordinates'])})",
        f"zero test: seed {zt['seed']}, {zt['samples']} samples at {zt['precision']} digits",
    ]
    if report.results:
        lines.append("")
        width = max(len(k) for k in report.results)
        for name, res in report.results.items():
            lines.append(f"{name:<{width}}  {_verdict_word(res['holds']):<7}  {res['summary']}")
    for sel, table in report.components.items():
        lines.append("")
        if not table:
            lines.append(f"{sel}: all components zero")
        for idx, value in table.items():
            lines.append(f"{sel}_{idx} = {value}")
    for key, value in report.extra.items():
        lines.append("")
        lines.append(f"{key}:")
        lines.extend("  " + ln for ln in yaml.safe_dump(value, sort_keys=False, allow_unicode=True).splitlines())
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


# -- expectations ---------------------------------------------------------------------------


def load_expectations(path) -> dict:
    """``{check: bool | {field: value}}`` from a YAML/JSON file (top-level ``checks`` optional)."""
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise MetricFileError(f"cannot read expectations: {e}", str(path)) from None
    if isinstance(doc, dict) and "checks" in doc:
        doc = doc["checks"]
    if not isinstance(doc, dict):
        raise MetricFileError("expectations must map check names to verdicts", str(path))
    return doc


def _same_value(expected, actual, chart, config) -> bool:
    if isinstance(expected, bool) or expected is None or isinstance(actual, (bool, type(None))):
        return expected == actual
    if str(expected) == str(actual):
        return True
    if chart is None or not isinstance(actual, str):
        return False
    try:
        diff = parse_expr(str(expected), chart) - parse_expr(actual, chart)
    except (ParseError, KeyError):
        return False
    return zero_test(diff, chart, config).is_zero


def compare_expectations(results: dict, expected: dict, chart=None, config: ZeroTestConfig = DEFAULT_CONFIG) -> list:
    """Human-readable mismatches between a report's results and expectations."""
    problems = []
    for name, want in expected.items():
        got = results.get(name)
        if got is None:
            problems.append(f"{name}: not run")
            continue
        want = {"holds": want} if not isinstance(want, dict) else want
        for key, value in want.items():
            actual = got.get(key)
            if isinstance(value, dict) and isinstance(actual, dict):
                for k2, v2 in value.items():
                    if not _same_value(v2, actual.get(k2), chart, config):
                        problems.append(f"{name}.{key}.{k2}: expected {v2!r}, got {actual.get(k2)!r}")
            elif not _same_value(value, actual, chart, config):
                problems.append(f"{name}.{key}: expected {value!r}, got {actual!r}")
    return problems
