from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvkit import catalog as cat
from curvkit.curvature import CurvatureBundle, kulkarni_nomizu, trace
from curvkit.exprcore import ZERO, SymbolTable, parse_expr, sym, zero_test
from curvkit.operators import EndoKind, endo_action, tachibana
from curvkit.tensorlab import (
    RIEMANN,
    SYMMETRIC_PAIR,
    ChartMismatchError,
    DegenerateMetricError,
    MetricSpec,
    build_metric,
    check_symmetries,
    contract,
    covariant_derivative,
    covector,
    from_components,
    kronecker_check,
    lower_index,
    matrix_of,
    orbit,
    raise_index,
    symmetric_from_matrix,
    tensor_product,
    zero_test_tensor,
)

CHART3 = SymbolTable(("x", "y", "r"), ("a",), {}, {"a": {"nonzero"}})


def metric3(entries):
    return MetricSpec.from_lower(CHART3, {k: parse_expr(v, CHART3) for k, v in entries.items()})


# -- orbits ---------------------------------------------------------------------------


def test_riemann_orbit_of_a_generic_index():
    members, forced = orbit((1, 2, 1, 3), RIEMANN)
    signs = dict(members)
    assert not forced
    assert signs[(2, 1, 1, 3)] == -1
    assert signs[(1, 3, 1, 2)] == 1
    assert signs[(3, 1, 2, 1)] == 1
    assert len(members) == 8


def test_riemann_orbit_forced_zero():
    assert orbit((1, 1, 2, 3), RIEMANN)[1]


def test_symmetric_pair_orbit():
    members, forced = orbit((2, 1), SYMMETRIC_PAIR)
    assert dict(members) == {(1, 2): 1, (2, 1): 1} and not forced


# -- metric --------------------------------------------------------------------------


def test_som_raychaudhuri_inverse_and_determinant():
    spec = cat.som_raychaudhuri()
    M = build_metric(spec)
    assert M.det == -sym("r") ** 2
    assert kronecker_check(M).is_zero


def test_christoffel_of_som_raychaudhuri():
    spec = cat.som_raychaudhuri()
    M = build_metric(spec)
    assert M.christoffel(3, 2, 2) == parse_expr("2*a^2*r^3 - r", spec.symbols)


def test_minkowski_christoffels_vanish():
    M = build_metric(cat.minkowski())
    assert all(x.is_zero() for plane in M.gamma for row in plane for x in row)


def test_degenerate_metric_rejected():
    with pytest.raises(DegenerateMetricError):
        build_metric(metric3({(1, 1): "1", (2, 2): "r^2"}))


def test_asymmetric_matrix_rejected():
    one, zero = parse_expr("1", CHART3), ZERO
    with pytest.raises(ValueError):
        MetricSpec(CHART3, ((one, one, zero), (zero, one, zero), (zero, zero, one)))


def test_low_dimension_rejected():
    with pytest.raises(ValueError):
        MetricSpec.from_lower(SymbolTable(("x", "y")), {(1, 1): 1, (2, 2): 1})


# -- index gymnastics -----------------------------------------------------------------


def test_raise_then_lower_is_identity():
    spec = cat.som_raychaudhuri()
    M = build_metric(spec)
    S = CurvatureBundle(M).S
    back = lower_index(raise_index(S, 1, M), 1, M)
    assert back.equals(S.with_components(S.components, ()))


def test_slot_out_of_range():
    M = build_metric(cat.minkowski())
    with pytest.raises((ValueError, IndexError)):
        raise_index(M.metric_tensor(), 3, M)


def test_contracting_inverse_with_metric_gives_kronecker():
    M = build_metric(cat.som_raychaudhuri())
    ginv_g = tensor_product(M.inverse_tensor(), M.metric_tensor())
    mixed = contract(ginv_g, 2, 3)
    assert matrix_of(mixed) == [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def test_chart_mismatch():
    a = covector(cat.minkowski().symbols, [1, 0, 0, 0])
    b = covector(cat.som_raychaudhuri().symbols, [1, 0, 0, 0])
    with pytest.raises(ChartMismatchError):
        a + b


def test_from_components_fills_orbits():
    spec = cat.som_raychaudhuri()
    T = from_components(spec.symbols, 4, {(1, 2, 1, 2): sym("a")}, RIEMANN)
    assert T[2, 1, 2, 1] == sym("a")
    assert T[2, 1, 1, 2] == -sym("a")


# -- curvature -------------------------------------------------------------------------


def test_two_sphere_cross_line():
    """S² × R: R_1212 = sin², and the scalar curvature is -2 in the sign convention used throughout."""
    chart = SymbolTable(("th", "ph", "z"))
    spec = MetricSpec.from_lower(
        chart, {(1, 1): 1, (2, 2): parse_expr("sin(th)^2", chart), (3, 3): 1}
    )
    b = CurvatureBundle(build_metric(spec))
    assert zero_test(b.R[1, 2, 1, 2] - parse_expr("sin(th)^2", chart), chart).is_zero
    assert b.kappa == -2


def test_three_dimensional_weyl_vanishes():
    b = CurvatureBundle(build_metric(metric3({(1, 1): "r^2", (2, 2): "a*r", (3, 3): "1 + r^2"})))
    assert zero_test_tensor(b.C).is_zero


def test_einstein_tensor_trace():
    spec = cat.som_raychaudhuri()
    b = CurvatureBundle(build_metric(spec))
    assert trace(b.S, b.M) == b.kappa == 2 * sym("a") ** 2


def test_kulkarni_nomizu_is_symmetric_in_factors():
    b = CurvatureBundle(build_metric(cat.som_raychaudhuri()))
    assert kulkarni_nomizu(b.g, b.S).equals(kulkarni_nomizu(b.S, b.g))


def test_derivation_of_metric_vanishes():
    b = CurvatureBundle(build_metric(cat.som_raychaudhuri()))
    # P is not skew in its last pair, so P·g is left out
    for sel in ("R", "C", "W", "K"):
        assert zero_test_tensor(endo_action(EndoKind(sel), b.g, b.M, b)).is_zero


def test_tachibana_needs_symmetric_argument():
    spec = cat.minkowski()
    M = build_metric(spec)
    A = from_components(spec.symbols, 2, {(1, 2): sym("t")})
    with pytest.raises(ValueError):
        tachibana(A, M.metric_tensor(), M)


def test_endo_kind_validation():
    with pytest.raises(ValueError):
        EndoKind("Z")
    with pytest.raises(ValueError):
        EndoKind()


def test_tachibana_is_antisymmetric_in_last_slots():
    b = CurvatureBundle(build_metric(cat.som_raychaudhuri()))
    Q = tachibana(b.S, b.R, b.M)
    for idx, v in Q.components.items():
        swapped = idx[:-2] + (idx[-1], idx[-2])
        assert Q[swapped] == -v


# -- properties over random metrics ----------------------------------------------------

COEFFS = st.integers(-3, 3)


@st.composite
def warped_metrics(draw):
    """diag(±1 + c r^k, p(r), q(r)) on (x, y, r) with nonzero polynomial entries."""
    entries = {}
    for i in (1, 2, 3):
        c0 = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
        c1, c2 = draw(COEFFS), draw(COEFFS)
        entries[(i, i)] = f"{c0} + {c1}*r^2 + {c2}*a*r^3"
    if draw(st.booleans()):
        entries[(2, 1)] = f"{draw(COEFFS)}*r"
    return metric3(entries)


@settings(max_examples=15)
@given(warped_metrics())
def test_random_metric_identities(spec):
    try:
        M = build_metric(spec)
    except DegenerateMetricError:
        return
    b = CurvatureBundle(M)
    assert kronecker_check(M).is_zero
    assert zero_test_tensor(covariant_derivative(b.g, M)).is_zero
    assert check_symmetries(b.R, RIEMANN).is_zero
    assert check_symmetries(b.S, SYMMETRIC_PAIR).is_zero
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    s = b.R[i, j, k, l] + b.R[j, k, i, l] + b.R[k, i, j, l]
                    assert zero_test(s, spec.symbols).is_zero


@st.composite
def constant_symmetric(draw, chart):
    vals = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            vals[i][j] = vals[j][i] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return symmetric_from_matrix(chart, vals)


SR = cat.som_raychaudhuri()
SR_BUNDLE = CurvatureBundle(build_metric(SR))


@settings(max_examples=20)
@given(constant_symmetric(SR.symbols), constant_symmetric(SR.symbols))
def test_kulkarni_nomizu_bilinear_and_symmetric(A, E):
    assert kulkarni_nomizu(A, E).equals(kulkarni_nomizu(E, A))
    assert check_symmetries(kulkarni_nomizu(A, E), RIEMANN).is_zero
    lhs = kulkarni_nomizu(A + E, A)
    rhs = kulkarni_nomizu(A, A) + kulkarni_nomizu(E, A)
    assert lhs.with_components(lhs.components, ()).equals(rhs.with_components(rhs.components, ()))


@settings(max_examples=10)
@given(constant_symmetric(SR.symbols), st.integers(-3, 3))
def test_tachibana_linear_in_first_argument(A, c):
    M, g = SR_BUNDLE.M, SR_BUNDLE.g
    lhs = tachibana(A.scale(c) + g, SR_BUNDLE.S, M)
    rhs = tachibana(A, SR_BUNDLE.S, M).scale(c) + tachibana(g, SR_BUNDLE.S, M)
    assert zero_test_tensor(lhs.with_components(lhs.components, ()) - rhs.with_components(rhs.components, ())).is_zero
