from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvkit import catalog as cat
from curvkit.classify import derivation, kn_term
from curvkit.curvature import CurvatureBundle
from curvkit.exprcore import parse_expr, sym, zero_test
from curvkit.goldens import SOM_RAYCHAUDHURI_TABLES, TableConflict, expand_table, parse_chain
from curvkit.relations import linear_combination
from curvkit.tensorlab import build_metric, zero_test_tensor

SR = cat.som_raychaudhuri()


def test_godel_type_with_som_raychaudhuri_profiles_is_som_raychaudhuri():
    spec = cat.godel_type("a*r^2", "r", parameters=("a",), assumptions={"a": {"nonzero"}})
    assert spec.matrix == SR.matrix
    assert spec.symbols == SR.symbols


def test_godel_type_from_strings_declares_parameters():
    spec = cat.godel_type_from_strings("a*r^2", "r")
    assert spec.symbols.parameters == ("a",)
    assert spec.matrix == SR.matrix


@pytest.mark.parametrize("h, f", [("t*r", "r"), ("r", "z + r"), ("phi", "1")])
def test_profiles_on_other_coordinates_rejected(h, f):
    with pytest.raises(ValueError):
        cat.godel_type(h, f)


def test_generic_godel_type_uses_profile_functions():
    spec = cat.godel_type()
    assert spec.symbols.functions == {"h": "r", "f": "r"}
    assert "nonzero" in spec.symbols.assumed("f")


def test_entry_parameters_are_validated():
    entry = cat.get_entry("godel")
    assert entry.spec(m="2").matrix[0][0] == -1
    with pytest.raises(ValueError):
        entry.spec(q=1)
    with pytest.raises(KeyError):
        cat.get_entry("schwarzschild")


def test_godel_profiles_are_ricci_simple_in_closed_form():
    h, f = cat.godel_profiles("m")
    spec = cat.godel_cylindrical()
    assert zero_test(cat.tau(h, f), spec.symbols).is_zero
    comps = cat.godel_type_closed_forms(h, f)
    assert (3, 3) not in comps["S"]


@settings(max_examples=6)
@given(st.integers(1, 4), st.integers(1, 3))
def test_polynomial_profiles_agree_with_closed_forms(p, q):
    spec = cat.godel_type_from_strings(f"r^{p + 1} + {q}*r", f"r^{q} + 2")
    b = CurvatureBundle(build_metric(spec))
    closed = cat.godel_type_closed_forms(spec.profiles["h"], spec.profiles["f"])
    for name in ("R", "S", "C"):
        T = getattr(b, name)
        for idx, v in closed[name].items():
            assert zero_test(T[idx] - v, spec.symbols).is_zero, (name, idx)


# -- golden tables ---------------------------------------------------------------------


def test_parse_chain_divides_by_the_listed_factor():
    (name, idx, value), (_, idx2, value2) = parse_chain("-1/2 dS_223 = dS_232 = 4*a^4*r^3", SR.symbols)
    assert (name, idx, idx2) == ("dS", (2, 2, 3), (2, 3, 2))
    assert value == parse_expr("-8*a^4*r^3", SR.symbols)
    assert value2 == parse_expr("4*a^4*r^3", SR.symbols)


def test_table_conflicts_are_detected():
    with pytest.raises(TableConflict):
        expand_table("R", ["R_1212 = a", "R_2121 = b*a"], SR.symbols.extend(("b",)))
    with pytest.raises(TableConflict):
        expand_table("R", ["R_1123 = a"], SR.symbols)


def test_every_table_expands_without_conflict():
    for name, lines in SOM_RAYCHAUDHURI_TABLES.items():
        assert expand_table(name, lines, SR.symbols)


BUNDLE = CurvatureBundle(build_metric(SR))
DERIVATION_TABLES = ["RR", "RS", "RC", "CR", "CS", "CC", "QgR", "QSR", "QgC", "QSC"]


@pytest.mark.parametrize("name", DERIVATION_TABLES)
def test_unlisted_derivation_components_vanish(name):
    """Every nonzero pipeline component is covered by the expanded published table.

    The C·S table leaves out three nonzero orbits, so that case fails.
    """
    table = expand_table(name, SOM_RAYCHAUDHURI_TABLES[name], SR.symbols)
    T = derivation(BUNDLE, name)
    missing = {idx: str(v) for idx, v in T.components.items() if idx not in table}
    assert not missing


def test_unlisted_cs_orbits_have_the_computed_values():
    T = derivation(BUNDLE, "CS")
    expected = {(2, 2, 1, 2): "16/3*a^5*r^4", (2, 3, 1, 3): "8/3*a^5*r^2", (2, 4, 1, 4): "-8/3*a^5*r^2"}
    for idx, text in expected.items():
        assert T[idx] == parse_expr(text, SR.symbols)


def test_roter_family_holds_at_sampled_coefficients():
    for L1, L3 in [(0, 0), (1, Fraction(-2, 3)), (sym("a"), 2)]:
        coeffs = cat.som_raychaudhuri_roter_family(L1, L3)
        combo = linear_combination([(c, kn_term(BUNDLE, label)) for label, c in coeffs.items()], BUNDLE.R)
        assert zero_test_tensor(combo - BUNDLE.R.with_components(BUNDLE.R.components, ())).is_zero


def test_ingredients_as_printed_differ_only_in_one_sign():
    printed = cat.som_raychaudhuri_ingredients(SR, corrected=False)["chaki"]
    fixed = cat.som_raychaudhuri_ingredients(SR, corrected=True)["chaki"]
    assert "note" in fixed and "note" not in printed
    assert printed["Phi"].components == fixed["Phi"].components
    differing = [i for i in range(1, 5) if printed["Pi"][i] != fixed["Pi"][i]]
    assert differing == [4]
    assert printed["Pi"][4] == -fixed["Pi"][4]
