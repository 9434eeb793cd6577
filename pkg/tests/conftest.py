from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

from curvkit.catalog import CATALOG, godel, som_raychaudhuri
from curvkit.classify import classify_metric
from curvkit.curvature import CurvatureBundle
from curvkit.tensorlab import build_metric

settings.register_profile(
    "curvkit", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("curvkit")

CRITERIA = {
    1: "golden curvature components (R, S, dR, dS, C, W, K, scalar curvature)",
    2: "golden derivation-tensor components",
    3: "Som-Raychaudhuri clause suite",
    4: "Gödel suite",
    5: "conharmonic pseudosymmetry of Som-Raychaudhuri",
    6: "Gödel-type closed forms vs pipeline",
    7: "Gödel-type conditional clauses",
    8: "property suites on every catalog metric",
    9: "determinism across runs and seeds",
}

_outcomes: dict = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes[marker.args[0]].append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        if not runs:
            tr.write_line(f"criterion {n}: NOT RUN  {title}")
            continue
        failed = [name for name, ok in runs if not ok]
        verdict = "FAIL" if failed else "PASS"
        line = f"criterion {n}: {verdict}  {title} ({len(runs) - len(failed)}/{len(runs)} tests passed)"
        tr.write_line(line)
        for name in failed:
            tr.write_line(f"    failed: {name}")


# -- shared fixtures ------------------------------------------------------------------


@pytest.fixture(scope="session")
def sr_spec():
    return som_raychaudhuri()


@pytest.fixture(scope="session")
def sr_bundle(sr_spec):
    return CurvatureBundle(build_metric(sr_spec))


@pytest.fixture(scope="session")
def sr_report(sr_bundle, sr_spec):
    ingredients = CATALOG["som-raychaudhuri"].ingredients_for(sr_spec)
    return classify_metric(sr_bundle, ingredients=ingredients)


@pytest.fixture(scope="session")
def godel_spec():
    return godel()


@pytest.fixture(scope="session")
def godel_bundle(godel_spec):
    return CurvatureBundle(build_metric(godel_spec))


@pytest.fixture(scope="session")
def godel_report(godel_bundle, godel_spec):
    ingredients = CATALOG["godel"].ingredients_for(godel_spec)
    return classify_metric(godel_bundle, ingredients=ingredients)
