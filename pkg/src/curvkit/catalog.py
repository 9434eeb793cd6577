"""Built-in metrics and closed-form component oracles for Gödel-type charts.

Gödel-type metrics live on the chart (t, φ, r, z) with

    ds² = (dt + h(r) dφ)² - f(r)² dφ² - dr² - dz²,

so g11 = 1, g12 = h, g22 = h² - f², g33 = g44 = -1.  ``h`` and ``f`` are
either explicit expressions in r (and parameters) or the generic profile
functions ``h``, ``f`` whose derivatives appear as jets h', h'', ...
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exprcore import (
    ONE,
    ZERO,
    Expr,
    SymbolTable,
    cosh,
    differentiate,
    exp,
    parse_expr,
    sinh,
    sqrt,
    substitute,
    sym,
    zero_test,
)
from .exprcore.expr import _coerce
from .exprcore.numeric import DEFAULT_CONFIG, Verdict, ZeroTestConfig
from .goldens import SOM_RAYCHAUDHURI_TABLES, expand_table
from .tensorlab import RIEMANN, SYMMETRIC_PAIR, MetricSpec, covector, symmetric_from_matrix

GODEL_TYPE_COORDS = ("t", "phi", "r", "z")


def _param(value, name: str):
    """A parameter given by name stays symbolic; a number specializes it."""
    if isinstance(value, str):
        return sym(value), (value,)
    q = Fraction(value)
    if q == 0:
        raise ValueError(f"parameter {name} must be nonzero")
    return Expr(q), ()


# -- constructors ------------------------------------------------------------------


def minkowski(n: int = 4) -> MetricSpec:
    coords = ("t", "x", "y", "z") if n == 4 else tuple(f"x{i}" for i in range(1, n + 1))
    table = SymbolTable(coords)
    entries = {(i, i): (ONE if i == 1 else -ONE) for i in range(1, n + 1)}
    return MetricSpec.from_lower(table, entries, "minkowski")


def godel_type(h="h", f="f", parameters=(), assumptions=None, name="godel-type") -> MetricSpec:
    """Gödel-type metric for profiles ``h`` and ``f`` of r.

    Strings are parsed on the chart; a bare name that is not a declared
    parameter becomes a generic profile function of r.  ``f`` is assumed
    nonzero.
    """
    parameters = tuple(parameters)
    assumptions = dict(assumptions or {})
    functions = {}
    for label, prof in (("h", h), ("f", f)):
        if isinstance(prof, str) and prof.isidentifier() and prof not in parameters and prof not in GODEL_TYPE_COORDS:
            functions[prof] = "r"
    if isinstance(f, str) and f in functions:
        assumptions.setdefault(f, {"nonzero"})
    table = SymbolTable(GODEL_TYPE_COORDS, parameters, functions, assumptions)
    H = parse_expr(h, table) if isinstance(h, str) else h
    F = parse_expr(f, table) if isinstance(f, str) else f
    for label, prof in (("h", H), ("f", F)):
        bad = {str(a) for a in prof.free_atoms() if getattr(a, "name", None) in ("t", "phi", "z")}
        if bad:
            raise ValueError(f"profile {label} may depend on r only, found {sorted(bad)}")
    entries = {(1, 1): ONE, (2, 1): H, (2, 2): H * H - F * F, (3, 3): -ONE, (4, 4): -ONE}
    return MetricSpec.from_lower(table, entries, name, {"h": H, "f": F})


_KERNEL_NAMES = {"exp", "sinh", "cosh", "sin", "cos", "sqrt"}


def godel_type_from_strings(h: str = "h", f: str = "f", name: str = "godel-type") -> MetricSpec:
    """Like :func:`godel_type`, declaring every unknown identifier a nonzero parameter."""
    params = []
    for text, bare in ((h, "h"), (f, "f")):
        if text.strip() in (bare,):
            continue
        for ident in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text):
            if ident not in GODEL_TYPE_COORDS and ident not in _KERNEL_NAMES and ident not in params:
                params.append(ident)
    bad = [p for p in params if p in ("h", "f")]
    if bad:
        raise ValueError("a profile expression may not mention the other profile")
    return godel_type(h.strip(), f.strip(), tuple(params), {p: {"nonzero"} for p in params}, name)


def som_raychaudhuri(a="a") -> MetricSpec:
    A, params = _param(a, "a")
    table = SymbolTable(GODEL_TYPE_COORDS, params, assumptions={p: {"nonzero"} for p in params})
    r = sym("r")
    entries = {(1, 1): ONE, (2, 1): A * r**2, (2, 2): A**2 * r**4 - r**2, (3, 3): -ONE, (4, 4): -ONE}
    return MetricSpec.from_lower(table, entries, "som-raychaudhuri", {"h": A * r**2, "f": r})


def godel_profiles(m="m"):
    """h = (2√2/m) sinh²(mr/2), f = (2/m) sinh(mr/2) cosh(mr/2)."""
    M, _ = _param(m, "m")
    u = M * sym("r") / 2
    h = 2 * sqrt(2) / M * sinh(u) ** 2
    f = Expr(2) / M * sinh(u) * cosh(u)
    return h, f


def godel(m="m") -> MetricSpec:
    """Cartesian chart (x, y, z, t): ds² = dt² + ½e^{2mx}dy² - dx² - dz² + 2e^{mx}dt dy."""
    M, params = _param(m, "m")
    table = SymbolTable(("x", "y", "z", "t"), params, assumptions={p: {"nonzero"} for p in params})
    E = exp(M * sym("x"))
    entries = {(1, 1): -ONE, (2, 2): E * E / 2, (4, 2): E, (3, 3): -ONE, (4, 4): ONE}
    h, f = godel_profiles(m)
    return MetricSpec.from_lower(table, entries, "godel", {"h": h, "f": f})


def godel_cylindrical(m="m") -> MetricSpec:
    """The Gödel metric as a Gödel-type chart with its sinh/cosh profiles."""
    M, params = _param(m, "m")
    h, f = godel_profiles(m)
    return godel_type(h, f, params, {p: {"nonzero"} for p in params}, "godel-cylindrical")


# -- closed forms ------------------------------------------------------------------------

_CLOSED_FORMS = {
    "R": {
        (1, 2, 1, 2): "-(h')^2/4",
        (1, 3, 1, 3): "-(h')^2/(4*f^2)",
        (1, 3, 2, 3): "-(2*f^2*h'' - 2*f*f'*h' + h*(h')^2)/(4*f^2)",
        (2, 3, 2, 3): "(-4*f^2*h*h'' - 3*f^2*(h')^2 + 4*f*h*f'*h' + 4*f^3*f'' - h^2*(h')^2)/(4*f^2)",
    },
    "S": {
        (1, 1): "-(h')^2/(2*f^2)",
        (1, 2): "-(f^2*h'' - f*f'*h' + h*(h')^2)/(2*f^2)",
        (2, 2): "(-2*f^2*h*h'' - f^2*(h')^2 + 2*f*h*f'*h' + 2*f^3*f'' - h^2*(h')^2)/(2*f^2)",
        (3, 3): "(2*f*f'' - (h')^2)/(2*f^2)",
    },
    "C": {
        (1, 2, 1, 2): "-1/6*((h')^2 - f*f'')",
        (1, 3, 1, 3): "(f*f'' - (h')^2)/(6*f^2)",
        (1, 4, 1, 4): "-2*(f*f'' - (h')^2)/(6*f^2)",
        (3, 4, 3, 4): "-(f*f'' - (h')^2)/(6*f^2)",
        (1, 3, 2, 3): "-(3*f^2*h'' - 2*f*h*f'' - 3*f*f'*h' + 2*h*(h')^2)/(12*f^2)",
        (1, 4, 2, 4): "(3*f^2*h'' - 4*f*h*f'' - 3*f*f'*h' + 4*h*(h')^2)/(12*f^2)",
        (2, 3, 2, 3): "(-3*f^2*h*h'' + f*h^2*f'' - 2*f^2*(h')^2 + 3*f*h*f'*h' + 2*f^3*f'' - h^2*(h')^2)/(6*f^2)",
        (2, 4, 2, 4): "-(-3*f^2*h*h'' + 2*f*h^2*f'' - f^2*(h')^2 + 3*f*h*f'*h' + f^3*f'' - 2*h^2*(h')^2)/(6*f^2)",
    },
}

_CONDITION_FORMS = {
    "tau": "((h')^2 - 2*f*f'')*(f^2*(h'')^2 - 2*f*f'*h'*h'' - (h')^4 + 2*f*f''*(h')^2 + (f')^2*(h')^2)",
    "L1_numerator": "f^2*(2*f^2*(h'')^2 - 4*f*f'*h'*h'' - 3*(h')^4 + 8*f*f''*(h')^2 + 2*(f')^2*(h')^2 - 8*f^2*(f'')^2)",
    "L2_numerator": "2*f^4*((h')^2 - 4*f*f'')",
    "L3_numerator": "-4*f^6",
    "L_weyl": "(f*f'' - (h')^2)/(6*f^2)",
    "two_qe": "f*h'' - f'*h'",
    "ricci_simple": "(h')^2 - 2*f*f''",
    "cyclic": "h''''*h' - h'''*h''",
}

_PROFILE_TABLE = SymbolTable(GODEL_TYPE_COORDS, (), {"h": "r", "f": "r"}, {"f": {"nonzero"}})


def _specialize(text: str, h: Expr, f: Expr) -> Expr:
    e = parse_expr(text, _PROFILE_TABLE)
    generic_h = h == _PROFILE_TABLE.resolve("h")
    generic_f = f == _PROFILE_TABLE.resolve("f")
    if generic_h and generic_f:
        return e
    mapping = {}
    if not generic_h:
        mapping["h"] = h
    if not generic_f:
        mapping["f"] = f
    return substitute(e, mapping)


def godel_type_closed_forms(h: Expr, f: Expr) -> dict:
    """Reference closed-form R, S, C components of the Gödel-type metric, as full tables.

    Built directly from the closed forms, independently of the curvature
    pipeline.
    """
    from .tensorlab import orbit

    out = {}
    for name, reps in _CLOSED_FORMS.items():
        gens = SYMMETRIC_PAIR if name == "S" else RIEMANN
        comps = {}
        for idx, text in reps.items():
            v = _specialize(text, h, f)
            for m, sign in orbit(idx, gens)[0]:
                comps[m] = v if sign == 1 else -v
        out[name] = {k: v for k, v in comps.items() if not v.is_zero()}
    return out


def tau(h: Expr, f: Expr) -> Expr:
    return _specialize(_CONDITION_FORMS["tau"], h, f)


def roter_coefficients_closed_form(h: Expr, f: Expr) -> dict:
    """L1, L2, L3 of R = L1 S∧S + L2 S∧S² + L3 S²∧S² in closed form (reference values)."""
    t = tau(h, f)
    return {
        "S∧S": _specialize(_CONDITION_FORMS["L1_numerator"], h, f) / t,
        "S∧S2": _specialize(_CONDITION_FORMS["L2_numerator"], h, f) / t,
        "S2∧S2": _specialize(_CONDITION_FORMS["L3_numerator"], h, f) / t,
    }


def weyl_coefficient_closed_form(h: Expr, f: Expr) -> Expr:
    """L = (f f'' - h'^2)/(6 f^2) of C·C = L Q(g, C)."""
    return _specialize(_CONDITION_FORMS["L_weyl"], h, f)


# -- conditional results ---------------------------------------------------------------------


@dataclass
class Clause:
    name: str
    hypothesis: str
    hypothesis_holds: bool
    conclusion: str
    confirmed: bool | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "hypothesis": self.hypothesis,
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion": self.conclusion,
            "confirmed": self.confirmed,
            **self.detail,
        }


def _constant_ratio(f: Expr, h: Expr, symbols, config):
    """c with f = c h' if f/h' does not depend on r, else None."""
    dh = differentiate(h, "r")
    if dh.is_zero():
        return None
    c = f / dh
    if zero_test(differentiate(c, "r"), symbols, config).is_zero:
        return c
    return None


def godel_type_conditions(spec: MetricSpec, config: ZeroTestConfig = DEFAULT_CONFIG) -> list:
    """Evaluate each conditional clause for a Gödel-type metric.

    When a hypothesis holds, the matching classification is run to confirm
    the conclusion.
    """
    from .classify import (
        check_codazzi_and_cyclic,
        check_semisymmetric_type,
        quasi_einstein_rank,
        relation_check,
        REDUCED_ROTER_BASIS,
        check_compatibility,
        kn_term,
        roter_decomposition,
    )
    from .relations import Term, verify
    from .curvature import CurvatureBundle
    from .operators import EndoKind
    from .tensorlab import build_metric

    h, f = spec.profiles["h"], spec.profiles["f"]
    chart = spec.symbols
    bundle = CurvatureBundle(build_metric(spec, config))
    isz = lambda e: zero_test(e, chart, config).is_zero
    clauses = []

    qe = quasi_einstein_rank(bundle, config)
    clauses.append(Clause("3-quasi-Einstein", "always", True, "rank(S - αg) <= 3", qe.k <= 3,
                          {"quasi_einstein": qe.to_dict()}))
    res = relation_check(bundle, "ricci_generalized_pseudosymmetric", "RR", ["QSR"], config, {"QSR": ONE})
    clauses.append(Clause("special Ricci generalized pseudosymmetric", "always", True, "R·R = Q(S,R)", res.holds))
    ok = all(check_compatibility(bundle, bundle.S, k, config).holds for k in ("R", "C", "W", "K"))
    clauses.append(Clause("Ricci compatibility", "always", True, "S is R-, C-, W- and K-compatible", ok))

    hyp = isz(_specialize(_CONDITION_FORMS["two_qe"], h, f))
    cl = Clause("2-quasi-Einstein", "f h'' = f' h'", hyp, "rank(S - αg) <= 2")
    if hyp:
        qe = quasi_einstein_rank(bundle, config)
        cl.confirmed = qe.k <= 2
        cl.detail = {"quasi_einstein": qe.to_dict()}
    clauses.append(cl)

    hyp = isz(_specialize(_CONDITION_FORMS["ricci_simple"], h, f))
    cl = Clause("Ricci simple", "h'^2 = 2 f f''", hyp, "rank(S) = 1")
    if hyp:
        qe = quasi_einstein_rank(bundle, config)
        cl.confirmed = qe.k == 1 and qe.alpha is not None and qe.alpha.is_zero()
        cl.detail = {"quasi_einstein": qe.to_dict()}
    clauses.append(cl)

    c = _constant_ratio(f, h, chart, config)
    d1 = differentiate(h, "r")
    d3 = differentiate(differentiate(d1, "r"), "r")
    hyp = c is not None and isz(d1 - c * c * d3)
    cl = Clause("semisymmetric", "f = c h' and h' = c^2 h'''", hyp, "R·R = 0")
    if hyp:
        res = check_semisymmetric_type(bundle, EndoKind("R"), "R", config)
        cl.confirmed = res.holds
        cl.detail = {"c": str(c), "check": res.to_dict()}
    clauses.append(cl)

    hyp = c is not None and isz(_specialize(_CONDITION_FORMS["cyclic"], h, f))
    cl = Clause("cyclic parallel", "h'''' h' = h''' h'' and f = c h'", hyp, "cyclic parallel Ricci tensor")
    if hyp:
        _, cyc = check_codazzi_and_cyclic(bundle, config)
        cl.confirmed = cyc.holds
    clauses.append(cl)

    hyp = c is not None
    L = weyl_coefficient_closed_form(h, f)
    cl = Clause("Weyl pseudosymmetric", "f = c h'", hyp, f"C·C = L Q(g,C), L = {L}")
    if hyp:
        res = relation_check(bundle, "weyl_pseudosymmetric", "CC", ["QgC"], config, {"QgC": L})
        found = relation_check(bundle, "weyl_pseudosymmetric", "CC", ["QgC"], config)
        cl.confirmed = res.holds
        cl.detail = {"L_closed_form": str(L), "L_discovered": found.detail.get("particular", {}).get("QgC")}
    clauses.append(cl)

    t = tau(h, f)
    tcert = zero_test(t, chart, config)
    hyp = tcert.verdict is Verdict.PROVED_NONZERO
    cl = Clause("generalized Roter", "τ ≠ 0", hyp, "R = L1 S∧S + L2 S∧S² + L3 S²∧S²")
    cl.detail = {"tau": str(t), "tau_certificate": tcert.to_dict()}
    if hyp:
        sol = roter_decomposition(bundle, basis=REDUCED_ROTER_BASIS, config=config)
        published = roter_coefficients_closed_form(h, f)
        check = verify(
            [Term("R", bundle.R, ONE)],
            [Term(lab, kn_term(bundle, lab), published[lab]) for lab in REDUCED_ROTER_BASIS],
            name="reference generalized Roter", config=config,
        )
        halved = dict(published, **{"S∧S": published["S∧S"] / 2})
        check_half = verify(
            [Term("R", bundle.R, ONE)],
            [Term(lab, kn_term(bundle, lab), halved[lab]) for lab in REDUCED_ROTER_BASIS],
            name="generalized Roter, L1 halved", config=config,
        )
        cl.confirmed = check.holds
        cl.detail.update({
            "holds_with_L1_halved": check_half.holds,
            "published": {k: str(v) for k, v in published.items()},
            "solvable": sol.holds,
            "dimension": len(sol.basis) if sol.holds else None,
            "discovered": {k: str(v) for k, v in sol.particular.items()} if sol.holds else None,
        })
        if sol.holds and not sol.basis:
            cl.detail["published_matches"] = {
                lab: zero_test(sol.particular[lab] - v, chart, config).is_zero for lab, v in published.items()
            }
    clauses.append(cl)
    return clauses


def som_raychaudhuri_roter_family(L1, L3, a="a") -> dict:
    """Two-parameter family of generalized Roter coefficients, keyed by basis label."""
    A = sym(a) if isinstance(a, str) else Expr(a)
    L1, L3 = _coerce(L1), _coerce(L3)
    return {
        "g∧g": L1,
        "g∧S": ZERO,
        "S∧S": L3,
        "g∧S2": -L1 / (2 * A**4),
        "S∧S2": 1 / (4 * A**4) - L3 / A**2,
        "S2∧S2": L1 / (16 * A**8) - 1 / (32 * A**6) + L3 / (4 * A**4),
    }


def som_raychaudhuri_relation_family(L11, L13, L14, a="a"):
    """Coefficients (lhs, rhs) of the three-parameter pseudosymmetric-type relation."""
    A = sym(a) if isinstance(a, str) else Expr(a)
    L11, L13, L14 = (_coerce(x) for x in (L11, L13, L14))
    lhs = {"RR": L11, "RC": L13, "CR": L13, "CC": L14}
    rhs = {"QSR": L11, "QgC": -5 * A**2 * L13 / 3 - 2 * A**2 * L14 / 3, "QSC": L13}
    return lhs, rhs


# -- decomposition ingredients ------------------------------------------------------------------


def som_raychaudhuri_ingredients(spec: MetricSpec, corrected: bool = True) -> dict:
    """Ricci decompositions for the Som-Raychaudhuri chart.

    With ``corrected`` the generalized (Chaki) ingredients use Π with the
    opposite sign of its last component, which is what makes the
    decomposition and the orthogonality condition hold; the published sign
    is kept with ``corrected=False``.
    """
    T = spec.symbols
    s2 = sqrt(2)
    a, r = sym("a"), sym("r")
    if "a" not in T.parameters:
        a = spec.g(1, 2) / r**2
    sign = 1 if corrected else -1
    chaki_pi = covector(T, [1 / (a * r**2), ONE, ZERO, sign / (s2 * a * r**2)], "Π")
    ing = {
        "two-form": {
            "alpha": 2 * a**2,
            "Pi": covector(T, [ONE, a * r**2, ZERO, 1 / s2], "Π"),
            "Phi": covector(T, [-2 * a**2, -2 * a**3 * r**2, ZERO, s2 * a**2], "Φ"),
        },
        "chaki": {
            "alpha": 2 * a**2,
            "beta": -12 * a**4 * r**4,
            "gamma": ONE,
            "Pi": chaki_pi,
            "Phi": covector(T, [4 * a**3 * r**2, 4 * a**4 * r**4, ZERO, 4 * s2 * a**3 * r**2], "Ψ"),
        },
        "de-ghosh": {
            "alpha": 2 * a**2,
            "beta": ONE,
            "gamma": -ONE,
            "Pi": covector(T, [ZERO, ZERO, ZERO, s2 * a], "Π"),
            "Phi": covector(T, [2 * a, 2 * a**2 * r**2, ZERO, ZERO], "Ψ"),
        },
        "pseudo": {
            "alpha": Fraction(2, 3) * a**2,
            "beta": ONE,
            "gamma": -ONE,
            "Pi": covector(T, [ZERO, ZERO, ZERO, sqrt(Fraction(2, 3)) * a], "Π"),
            "E": symmetric_from_matrix(T, [
                [Fraction(8, 3) * a**2, Fraction(8, 3) * a**3 * r**2, ZERO, ZERO],
                [Fraction(8, 3) * a**3 * r**2, Fraction(4, 3) * a**2 * r**2 * (1 + 2 * a**2 * r**2), ZERO, ZERO],
                [ZERO, ZERO, Fraction(4, 3) * a**2, ZERO],
                [ZERO, ZERO, ZERO, ZERO],
            ], "E"),
        },
    }
    if corrected:
        ing["chaki"]["note"] = "last component of Π taken with the opposite sign to the published one"
    return ing


def godel_form(spec: MetricSpec) -> "object":
    """The 1-form (0, m e^{mx}, 0, m) on the Cartesian Gödel chart."""
    T = spec.symbols
    # g24 = e^{mx}, so m = ∂x g24 / g24 recovers a specialized parameter too
    g24 = spec.g(2, 4)
    m = differentiate(g24, "x") / g24
    return covector(T, [ZERO, m * exp(m * sym("x")), ZERO, m], "ω")


# -- registry ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    parameters: tuple
    build: object
    ingredients: object = None
    goldens: dict | None = None

    def spec(self, **params) -> MetricSpec:
        unknown = set(params) - set(self.parameters)
        if unknown:
            raise ValueError(f"{self.name} takes parameters {list(self.parameters)}, got {sorted(unknown)}")
        return self.build(**{k: _coerce_param(k, v) for k, v in params.items()})

    def ingredients_for(self, spec: MetricSpec) -> dict:
        return self.ingredients(spec) if self.ingredients else {}


def _coerce_param(name: str, value):
    """CLI-style binding: an identifier keeps the parameter symbolic, a number specializes it."""
    if not isinstance(value, str):
        return value
    v = value.strip()
    if name in ("h", "f"):
        return v
    if name == "n":
        return int(v)
    if v.isidentifier():
        return v
    try:
        return Fraction(v)
    except ValueError:
        raise ValueError(f"parameter {name} must be a name or a rational number, got {value!r}") from None


def _sr_ingredients(spec):
    return som_raychaudhuri_ingredients(spec, corrected=True)


def _godel_ingredients(spec):
    return {"form": godel_form(spec)}


CATALOG = {
    "minkowski": CatalogEntry("minkowski", "flat space, diag(1,-1,-1,-1)", ("n",), lambda n=4: minkowski(int(n))),
    "som-raychaudhuri": CatalogEntry(
        "som-raychaudhuri", "Gödel-type chart with h = a r^2, f = r", ("a",), som_raychaudhuri,
        _sr_ingredients, SOM_RAYCHAUDHURI_TABLES,
    ),
    "godel": CatalogEntry(
        "godel", "Gödel metric in Cartesian coordinates (x, y, z, t)", ("m",), godel, _godel_ingredients,
    ),
    "godel-cylindrical": CatalogEntry(
        "godel-cylindrical", "Gödel metric as a Gödel-type chart with sinh/cosh profiles", ("m",), godel_cylindrical,
    ),
    "godel-type": CatalogEntry(
        "godel-type", "Gödel-type chart with profiles h(r), f(r)", ("h", "f"), godel_type_from_strings,
    ),
}


def get_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog metric {name!r}; choose from {', '.join(CATALOG)}") from None


def golden_tables(entry: CatalogEntry, spec: MetricSpec) -> dict:
    """Expanded golden components keyed by tensor selector."""
    if not entry.goldens:
        return {}
    return {name: expand_table(name, lines, spec.symbols) for name, lines in entry.goldens.items()}
