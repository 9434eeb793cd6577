from __future__ import annotations

import json
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvkit import catalog as cat
from curvkit.classify import classify_metric
from curvkit.curvature import CurvatureBundle
from curvkit.exprcore import DEFAULT_CONFIG
from curvkit.reportio import (
    MetricFileError,
    Report,
    compare_expectations,
    component_table,
    dump_metric_file,
    emit_report,
    load_metric_file,
    parse_metric_text,
    render_text,
    validate_report,
)
from curvkit.tensorlab import build_metric

SR_TEXT = """\
version: 1
name: sr
coordinates: [t, phi, r, z]
parameters:
  a: [nonzero]
components:
  "1,1": "1"
  "2,1": "a*r^2"
  "2,2": "a^2*r^4 - r^2"
  "3,3": "-1"
  "4,4": "-1"
"""


def data_file(name):
    return resources.files("curvkit") / "data" / name


def test_shipped_fixture_equals_catalog_entry():
    spec = load_metric_file(data_file("som-raychaudhuri.yaml"))
    assert spec == cat.som_raychaudhuri()
    assert spec.profiles["h"] == cat.som_raychaudhuri().profiles["h"]


def test_godel_fixture_equals_catalog_entry():
    assert load_metric_file(data_file("godel.yaml")) == cat.godel()


@pytest.mark.parametrize("name", ["minkowski", "som-raychaudhuri", "godel", "godel-cylindrical", "godel-type"])
def test_dump_then_parse_round_trips(name):
    spec = cat.CATALOG[name].spec()
    back = parse_metric_text(dump_metric_file(spec))
    assert back == spec


def test_omitted_component_makes_metric_degenerate():
    text = SR_TEXT.replace('  "3,3": "-1"\n', "")
    with pytest.raises(MetricFileError, match="degenerate"):
        parse_metric_text(text)


def test_unknown_symbol_is_named_with_position():
    text = SR_TEXT.replace('"a*r^2"', '"b*r^2"')
    with pytest.raises(MetricFileError) as info:
        parse_metric_text(text, "sr.yaml")
    err = info.value
    assert "'b'" in str(err)
    assert (err.line, err.column) == (8, 11)
    assert str(err).startswith("sr.yaml:8:11")


def test_upper_triangle_key_rejected():
    with pytest.raises(MetricFileError, match="1 <= j <= i"):
        parse_metric_text(SR_TEXT.replace('"2,1"', '"1,2"'))


@pytest.mark.parametrize(
    "edit",
    [
        lambda t: t.replace("version: 1", "version: 7"),
        lambda t: t.replace("coordinates: [t, phi, r, z]\n", ""),
        lambda t: t + "colour: blue\n",
        lambda t: t.replace('"a^2*r^4 - r^2"', '"a^2*r^4 - "'),
        lambda t: t.replace('"a*r^2"', '"a*r^(1/2)"'),
        lambda t: "[1, 2]\n",
        lambda t: t.replace("components:", "components: [\n"),
    ],
)
def test_malformed_files_raise_metric_file_errors(edit):
    with pytest.raises(MetricFileError):
        parse_metric_text(edit(SR_TEXT))


def test_parameters_as_a_list():
    text = SR_TEXT.replace("parameters:\n  a: [nonzero]\n", "parameters: [a]\n")
    spec = parse_metric_text(text)
    assert spec.symbols.parameters == ("a",)


def test_profile_functions_in_files():
    text = """\
version: 1
coordinates: [t, phi, r, z]
functions:
  h: r
  f: {of: r, assume: [nonzero]}
components:
  "1,1": "1"
  "2,1": "h"
  "2,2": "h^2 - f^2"
  "3,3": "-1"
  "4,4": "-1"
"""
    spec = parse_metric_text(text, "gt.yaml")
    assert spec.name == "gt"
    assert spec.matrix == cat.godel_type().matrix


# -- reports ---------------------------------------------------------------------------

SR = cat.som_raychaudhuri()
SR_BUNDLE = CurvatureBundle(build_metric(SR))


def _report(checks):
    structure = classify_metric(SR_BUNDLE, checks)
    return Report.build(SR, DEFAULT_CONFIG, structure, checks=checks)


def test_empty_check_list_gives_metadata_only():
    doc = _report([]).to_dict()
    validate_report(doc)
    assert doc["results"] == {} and doc["checks"] == []
    assert doc["metric"]["name"] == "som-raychaudhuri"


def test_report_json_is_deterministic_and_valid():
    a = emit_report(_report(["quasi_einstein", "ein"]), "json")
    b = emit_report(_report(["quasi_einstein", "ein"]), "json")
    assert a == b
    doc = json.loads(a)
    validate_report(doc)
    assert doc["results"]["ein"]["level"] == 3
    assert Report.from_dict(doc).to_dict() == doc


def test_schema_violations():
    doc = _report([]).to_dict()
    for breaker in (
        lambda d: d.pop("metric"),
        lambda d: d.__setitem__("schema", 99),
        lambda d: d.__setitem__("checks", "ein"),
        lambda d: d["results"].__setitem__("ein", {"holds": True}),
    ):
        bad = json.loads(json.dumps(doc))
        breaker(bad)
        with pytest.raises(ValueError):
            validate_report(bad)


def test_text_rendering_lists_components():
    rep = Report.build(SR, DEFAULT_CONFIG, components={"C": component_table(SR_BUNDLE.C, SR.symbols)})
    assert "C_1212 = -2/3*a^2*r^2" in render_text(rep)


def test_expectations_compare_values_up_to_zero_test():
    results = _report(["quasi_einstein"]).to_dict()["results"]
    good = {"quasi_einstein": {"holds": False, "k": 2, "alpha": "a^2 + a^2"}}
    assert compare_expectations(results, good, SR.symbols) == []
    bad = {"quasi_einstein": {"k": 1}, "codazzi": True}
    problems = compare_expectations(results, bad, SR.symbols)
    assert len(problems) == 2


@settings(max_examples=25)
@given(st.dictionaries(st.sampled_from(["1,1", "2,2", "3,3", "2,1", "3,1"]), st.sampled_from(["1", "-1", "r", "a*r^2", "2"]), min_size=1))
def test_parsed_files_dump_back_identically(components):
    comps = "\n".join(f'  "{k}": "{v}"' for k, v in components.items())
    text = f"version: 1\ncoordinates: [t, r, z]\nparameters: [a]\ncomponents:\n{comps}\n"
    try:
        spec = parse_metric_text(text)
    except MetricFileError:
        return
    assert parse_metric_text(dump_metric_file(spec)) == spec
