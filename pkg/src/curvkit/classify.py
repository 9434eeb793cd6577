"""Decision procedures for curvature-restricted structures.

Every check returns a :class:`CheckResult` whose ``detail`` carries the
witness: a certified rank, solved coefficients with residual certificates,
or a nonzero component that refutes the structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from .curvature import CurvatureBundle, kulkarni_nomizu
from .exprcore import ONE, ZERO, Expr, sym
from .exprcore import poly as P
from .exprcore.numeric import DEFAULT_CONFIG, ZeroTestConfig, zero_test
from .operators import EndoKind, endo_action, tachibana
from .relations import (
    RelationSolution,
    Term,
    certified_rank,
    determinant,
    discover,
    linear_combination,
    verify,
)
from .tensorlab import (
    SYMMETRIC_PAIR,
    TensorField,
    matrix_of,
    tensor_product,
    zero_test_tensor,
)

# -- results -------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    holds: bool | None
    summary: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "summary": self.summary, **self.detail}


@dataclass
class StructureReport:
    metric: str
    seed: int
    checks: dict = field(default_factory=dict)

    def add(self, result: CheckResult):
        self.checks[result.name] = result

    def verdicts(self) -> dict:
        return {k: v.holds for k, v in self.checks.items()}

    def to_dict(self) -> dict:
        return {k: v.to_dict() for k, v in self.checks.items()}


# -- derivation tensors -----------------------------------------------------------

DERIVATION_SELECTORS = (
    "RR", "RS", "RC", "CR", "CS", "CC", "KK", "PR",
    "QgR", "QSR", "QgC", "QSC", "QgK", "QgS",
)


def _tensor_by_name(bundle: CurvatureBundle, name: str) -> TensorField:
    if name in ("g", "S", "S2", "S3", "S4", "R", "C", "P", "W", "K", "G"):
        return getattr(bundle, name)
    raise KeyError(f"unknown tensor {name!r}")


def derivation(bundle: CurvatureBundle, selector: str) -> TensorField:
    """``"RR"`` is R·R, ``"QSC"`` is Q(S, C), ``"KK"`` is K·K and so on."""
    cache = bundle.__dict__.setdefault("_derivations", {})
    hit = cache.get(selector)
    if hit is not None:
        return hit
    if selector.startswith("Q"):
        body = selector[1:]
        for a in ("S2", "g", "S"):
            if body.startswith(a) and len(body) > len(a):
                A, T = a, body[len(a):]
                break
        else:
            raise KeyError(f"unknown derivation selector {selector!r}")
        out = tachibana(_tensor_by_name(bundle, A), _tensor_by_name(bundle, T), bundle.M)
        out = out.with_components(out.components, None, f"Q({A},{T})")
    else:
        H, T = selector[0], selector[1:]
        if H not in "RCPWK" or not T:
            raise KeyError(f"unknown derivation selector {selector!r}")
        out = endo_action(EndoKind(H), _tensor_by_name(bundle, T), bundle.M, bundle)
        out = out.with_components(out.components, None, f"{H}·{T}")
    cache[selector] = out
    return out


BASIC_SELECTORS = ("g", "R", "S", "C", "P", "W", "K", "G", "S2", "S3", "S4", "dR", "dS")
TENSOR_SELECTORS = BASIC_SELECTORS + DERIVATION_SELECTORS


def select_tensor(bundle: CurvatureBundle, selector: str) -> TensorField:
    """Any tensor the command line can print, by selector."""
    if selector in BASIC_SELECTORS:
        return getattr(bundle, selector)
    if selector in DERIVATION_SELECTORS:
        return derivation(bundle, selector)
    raise KeyError(f"unknown tensor selector {selector!r}; choose from {', '.join(TENSOR_SELECTORS)}")


def _nonzero_component(T: TensorField, config) -> dict | None:
    cert = zero_test_tensor(T, config)
    if cert.is_zero:
        return None
    return {"index": "".join(map(str, cert.index)), "component": str(cert.component)}


# -- quasi-Einstein rank --------------------------------------------------------------

LAMBDA = "λ"


def characteristic_polynomial(bundle: CurvatureBundle) -> Expr:
    """Numerator of det(S - λ g) as an Expr in the auxiliary symbol λ."""
    lam = sym(LAMBDA)
    g, S = matrix_of(bundle.g), matrix_of(bundle.S)
    n = bundle.n
    mat = [[S[i][j] - lam * g[i][j] for j in range(n)] for i in range(n)]
    d = determinant(mat)
    return Expr._raw(d.num, P.ONE)


def linear_roots(poly_expr: Expr) -> list:
    """Roots in λ of the linear factors of a polynomial, as Exprs."""
    lam_idx = next(iter(sym(LAMBDA).atoms())).idx
    if poly_expr.is_zero():
        return []
    R, atoms, (elem,) = P.to_sympy([poly_expr.num])
    _, factors = elem.factor_list()
    roots = []
    for f, _mult in factors:
        fd = P.from_sympy(f, atoms)
        if P.degree_in(fd, lam_idx) != 1:
            continue
        c1, c0 = {}, {}
        for m, c in fd.items():
            rest = tuple((k, e) for k, e in m if k != lam_idx)
            if len(rest) == len(m):
                c0[rest] = c
            else:
                c1[rest] = c
        root = -(Expr._make(c0, P.ONE) / Expr._make(c1, P.ONE)) if c0 else ZERO
        if root not in roots:
            roots.append(root)
    return sorted(roots, key=str)


@dataclass
class QuasiEinstein:
    k: int
    alpha: Expr | None
    certificate: object
    candidates: list
    numeric_only: bool = False

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "alpha": None if self.alpha is None else str(self.alpha),
            "rank_certificate": self.certificate.to_dict() if self.certificate else None,
            "candidates": [{"alpha": str(a), "rank": r} for a, r in self.candidates],
        }
        if self.numeric_only:
            out["numeric_only"] = True
        return out


def quasi_einstein_rank(bundle: CurvatureBundle, config: ZeroTestConfig = DEFAULT_CONFIG) -> QuasiEinstein:
    """Minimal rank of S - αg over eigenvalues α of the Ricci operator."""
    chart = bundle.M.chart
    g, S = matrix_of(bundle.g), matrix_of(bundle.S)
    n = bundle.n
    best = None
    candidates = []
    for alpha in linear_roots(characteristic_polynomial(bundle)):
        mat = [[S[i][j] - alpha * g[i][j] for j in range(n)] for i in range(n)]
        cert = certified_rank(mat, chart, config)
        candidates.append((alpha, cert.rank))
        if best is None or cert.rank < best[1].rank:
            best = (alpha, cert)
    if best is None:
        # no eigenvalue is a rational function of the atoms; any eigenvalue gives rank <= n-1
        return QuasiEinstein(n - 1, None, None, [], numeric_only=True)
    return QuasiEinstein(best[1].rank, best[0], best[1], candidates)


# -- decompositions of the Ricci tensor --------------------------------------------------


def _sym_product(A: TensorField, B: TensorField) -> TensorField:
    ab = tensor_product(A, B)
    ba = tensor_product(B, A)
    out = linear_combination([(ONE, ab), (ONE, ba)], ab, f"{A.name}⊙{B.name}")
    return out.with_components(out.components, SYMMETRIC_PAIR)


def _square(A: TensorField) -> TensorField:
    out = tensor_product(A, A)
    return out.with_components(out.components, SYMMETRIC_PAIR)


def _inner(M, u: TensorField, v: TensorField) -> Expr:
    out = ZERO
    for (i,), a in u.components.items():
        for (j,), b in v.components.items():
            gi = M.inv[i - 1][j - 1]
            if not gi.is_zero():
                out = out + gi * a * b
    return out


QE_FORMS = ("chaki", "de-ghosh", "pseudo", "two-form")


def verify_qe_decomposition(
    bundle: CurvatureBundle,
    form: str,
    alpha,
    beta=ZERO,
    gamma=ZERO,
    Pi: TensorField | None = None,
    Phi: TensorField | None = None,
    E: TensorField | None = None,
    config: ZeroTestConfig = DEFAULT_CONFIG,
) -> CheckResult:
    """Zero-test S against one of the explicit Ricci decompositions.

    ``chaki``:    S = αg + βΠ⊗Π + γ(Π⊗Φ + Φ⊗Π), Π ⟂ Φ
    ``de-ghosh``: S = αg + βΠ⊗Π + γΦ⊗Φ, Π ⟂ Φ
    ``pseudo``:   S = αg + βΠ⊗Π + γE, E trace-free, E(X, V) = 0
    ``two-form``: S = αg + (Π⊗Φ + Φ⊗Π), no side condition
    """
    M = bundle.M
    coerce = lambda x: x if isinstance(x, Expr) else Expr(x)
    alpha, beta, gamma = coerce(alpha), coerce(beta), coerce(gamma)
    g, S = bundle.g, bundle.S
    pairs = [(alpha, g)]
    if form == "two-form":
        pairs.append((ONE, _sym_product(Pi, Phi)))
    else:
        pairs.append((beta, _square(Pi)))
        if form == "chaki":
            pairs.append((gamma, _sym_product(Pi, Phi)))
        elif form == "de-ghosh":
            pairs.append((gamma, _square(Phi)))
        elif form == "pseudo":
            pairs.append((gamma, E))
        else:
            raise ValueError(f"unknown decomposition form {form!r}")
    residual = linear_combination([(ONE, S)] + [(-c, T) for c, T in pairs], S, "S - rhs")
    bad = _nonzero_component(residual, config)
    detail = {"form": form, "decomposition": bad is None}
    side_ok = True
    if form in ("chaki", "de-ghosh"):
        ip = _inner(M, Pi, Phi)
        cert = zero_test(ip, M.chart, config)
        side_ok = cert.is_zero
        detail["orthogonal"] = side_ok
        if not side_ok:
            detail["inner_product"] = str(ip)
    elif form == "pseudo":
        tr = ZERO
        for (i, j), e in E.components.items():
            tr = tr + M.inv[i - 1][j - 1] * e
        trace_ok = zero_test(tr, M.chart, config).is_zero
        # V^a = g^{ab} Π_b, then E(X, V)_i = E_ia V^a
        V = [sum((M.inv[a][b] * Pi[b + 1] for b in range(M.n)), ZERO) for a in range(M.n)]
        EV = TensorField(
            M.chart, 1,
            {(i,): v for i in range(1, M.n + 1)
             if not (v := sum((E[i, a + 1] * V[a] for a in range(M.n)), ZERO)).is_zero()},
            (), "E(.,V)",
        )
        annihilates = zero_test_tensor(EV, config).is_zero
        side_ok = trace_ok and annihilates
        detail["trace_free"] = trace_ok
        detail["annihilates_V"] = annihilates
        if not trace_ok:
            detail["trace"] = str(tr)
    if bad is not None:
        detail["counterexample"] = bad
    holds = bad is None and side_ok
    summary = f"{form} decomposition " + ("verified" if holds else "fails")
    if bad is None and not side_ok:
        summary += " (side condition)"
    return CheckResult(f"qe_{form}", holds, summary, detail)


# -- Ein(k) ----------------------------------------------------------------------------


def check_ein(bundle: CurvatureBundle, level: int, config: ZeroTestConfig = DEFAULT_CONFIG) -> RelationSolution:
    """S^k + a S^{k-1} + ... + b g = 0 with unknown scalar coefficients."""
    if level not in (2, 3, 4):
        raise ValueError("Ein level must be 2, 3 or 4")
    lhs = [Term(_level_label(level), bundle.level(level), ONE)]
    lhs += [Term(_level_label(j), bundle.level(j)) for j in range(level - 1, -1, -1)]
    return discover(lhs, name=f"Ein({level})", config=config)


def _level_label(j: int) -> str:
    return {0: "g", 1: "S"}.get(j, f"S{j}")


def minimal_ein(bundle: CurvatureBundle, config: ZeroTestConfig = DEFAULT_CONFIG) -> CheckResult:
    tried = {}
    for level in (2, 3, 4):
        sol = check_ein(bundle, level, config)
        tried[level] = sol.holds
        if sol.holds:
            coeffs = {k: str(v) for k, v in sol.particular.items()}
            terms = [f"{_level_label(level)}"] + [
                f"({v})*{k}" for k, v in sol.particular.items() if not v.is_zero()
            ]
            return CheckResult(
                "ein", True, f"Ein({level}): " + " + ".join(terms) + " = 0",
                {"level": level, "coefficients": coeffs, "dimension": sol.dimension,
                 "refuted_levels": [k for k, v in tried.items() if not v],
                 "solution": sol.to_dict()},
            )
    return CheckResult("ein", False, "not Ein(2), Ein(3) or Ein(4)", {"level": None})


# -- Roter type ---------------------------------------------------------------------------

ROTER_BASIS = ("g∧g", "g∧S", "S∧S")
GENERALIZED_ROTER_BASIS = ROTER_BASIS + ("g∧S2", "S∧S2", "S2∧S2")
REDUCED_ROTER_BASIS = ("S∧S", "S∧S2", "S2∧S2")


def kn_term(bundle: CurvatureBundle, label: str) -> TensorField:
    cache = bundle.__dict__.setdefault("_kn", {})
    if label not in cache:
        a, b = label.split("∧")
        cache[label] = kulkarni_nomizu(_tensor_by_name(bundle, a), _tensor_by_name(bundle, b))
    return cache[label]


def roter_decomposition(
    bundle: CurvatureBundle,
    generalized: bool = False,
    basis: tuple | None = None,
    config: ZeroTestConfig = DEFAULT_CONFIG,
) -> RelationSolution:
    """Solve R = Σ L_i (Kulkarni–Nomizu products) for the scalar L_i."""
    labels = basis or (GENERALIZED_ROTER_BASIS if generalized else ROTER_BASIS)
    rhs = [Term(lab, kn_term(bundle, lab)) for lab in labels]
    name = "generalized Roter" if generalized else "Roter"
    return discover([Term("R", bundle.R, ONE)], rhs, name=name, config=config)


# -- Codazzi / cyclic parallel ------------------------------------------------------------


def check_codazzi_and_cyclic(bundle: CurvatureBundle, config: ZeroTestConfig = DEFAULT_CONFIG):
    """(∇S)_{jk,i} = (∇S)_{ik,j}, and the cyclic sum over (i, j, k)."""
    dS = bundle.dS
    n = bundle.n
    codazzi, cyclic = {}, {}
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                d = dS[j, k, i] - dS[i, k, j]
                if not d.is_zero():
                    codazzi[(i, j, k)] = d
                c = dS[j, k, i] + dS[k, i, j] + dS[i, j, k]
                if not c.is_zero():
                    cyclic[(i, j, k)] = c
    out = []
    for name, comps in (("codazzi", codazzi), ("cyclic_parallel", cyclic)):
        T = TensorField(bundle.M.chart, 3, comps, (), name)
        bad = _nonzero_component(T, config)
        holds = bad is None
        label = "Codazzi type Ricci tensor" if name == "codazzi" else "cyclic parallel Ricci tensor"
        detail = {} if holds else {"counterexample": bad}
        out.append(CheckResult(name, holds, ("" if holds else "not ") + label, detail))
    return tuple(out)


# -- compatibility -------------------------------------------------------------------------


def compatibility_tensor(bundle: CurvatureBundle, E: TensorField, kind: str) -> TensorField:
    """Σ_cyc T(ℰX1, X, X2, X3), ℰ^m_p = g^{mq} E_qp; slots (X1, X, X2, X3)."""
    M = bundle.M
    T = bundle.curvature(kind)
    n = bundle.n
    op = {}
    for (q, p), e in E.components.items():
        for m in range(1, n + 1):
            gi = M.inv[m - 1][q - 1]
            if not gi.is_zero():
                op[(m, p)] = op.get((m, p), ZERO) + gi * e
    op = {k: v for k, v in op.items() if not v.is_zero()}

    def TE(i1, x, i2, i3):
        v = ZERO
        for m in range(1, n + 1):
            o = op.get((m, i1))
            if o is not None:
                t = T[m, x, i2, i3]
                if not t.is_zero():
                    v = v + o * t
        return v

    comps = {}
    rng = range(1, n + 1)
    for i1 in rng:
        for x in rng:
            for i2 in rng:
                for i3 in rng:
                    c = TE(i1, x, i2, i3) + TE(i2, x, i3, i1) + TE(i3, x, i1, i2)
                    if not c.is_zero():
                        comps[(i1, x, i2, i3)] = c
    return TensorField(M.chart, 4, comps, (), f"compat({E.name},{kind})")


def check_compatibility(
    bundle: CurvatureBundle,
    E: TensorField,
    kind: str,
    config: ZeroTestConfig = DEFAULT_CONFIG,
) -> CheckResult:
    """``E`` may be a symmetric (0,2) tensor or a covector Π (meaning Π⊗Π)."""
    if E.order == 1:
        E = _square(E).with_components(_square(E).components, SYMMETRIC_PAIR, f"{E.name}⊗{E.name}")
    bad = _nonzero_component(compatibility_tensor(bundle, E, kind), config)
    holds = bad is None
    return CheckResult(
        f"compatible_{kind}", holds,
        f"{E.name} is " + ("" if holds else "not ") + f"{kind}-compatible",
        {} if holds else {"counterexample": bad},
    )


# -- semisymmetric type --------------------------------------------------------------------


def check_semisymmetric_type(
    bundle: CurvatureBundle, H: EndoKind, T: str, config: ZeroTestConfig = DEFAULT_CONFIG
) -> CheckResult:
    out = endo_action(H, _tensor_by_name(bundle, T), bundle.M, bundle)
    bad = _nonzero_component(out, config)
    holds = bad is None
    label = f"{H.label}·{T} = 0"
    return CheckResult(
        f"semisymmetric_{H.label}{T}", holds, label if holds else f"{H.label}·{T} ≠ 0",
        {} if holds else {"counterexample": bad},
    )


# -- pseudosymmetry-type relations -----------------------------------------------------------


def relation_check(
    bundle: CurvatureBundle,
    name: str,
    lhs: str,
    rhs: list,
    config: ZeroTestConfig = DEFAULT_CONFIG,
    coefficients: dict | None = None,
) -> CheckResult:
    """``lhs = Σ c_i rhs_i``; coefficients given -> verify, else discover."""
    L = [Term(lhs, derivation(bundle, lhs), ONE)]
    if coefficients is not None:
        R = [Term(r, derivation(bundle, r), _as_expr(coefficients[r])) for r in rhs]
        sol = verify(L, R, name=name, config=config)
    else:
        R = [Term(r, derivation(bundle, r)) for r in rhs]
        sol = discover(L, R, name=name, config=config)
    return CheckResult(name, sol.holds, _relation_summary(lhs, rhs, sol, coefficients), sol.to_dict())


def _as_expr(x) -> Expr:
    return x if isinstance(x, Expr) else Expr(x)


def _pretty(sel: str) -> str:
    if sel.startswith("Q"):
        body = sel[1:]
        for a in ("S2", "g", "S"):
            if body.startswith(a):
                return f"Q({a},{body[len(a):]})"
    return f"{sel[0]}·{sel[1:]}"


def _relation_summary(lhs, rhs, sol: RelationSolution, coefficients) -> str:
    if not sol.holds:
        return f"no relation {_pretty(lhs)} = " + " + ".join(f"L*{_pretty(r)}" for r in rhs)
    coeffs = coefficients if coefficients is not None else sol.particular
    parts = [f"({_as_expr(coeffs[r])})*{_pretty(r)}" for r in rhs]
    out = f"{_pretty(lhs)} = " + " + ".join(parts)
    if sol.mode == "discover" and sol.basis:
        out += f" (solution space of dimension {len(sol.basis)})"
    return out


def pseudosymmetric_family(bundle: CurvatureBundle, config: ZeroTestConfig = DEFAULT_CONFIG) -> RelationSolution:
    """Homogeneous relations among R·R, R·C, C·R, C·C, Q(S,R), Q(g,C), Q(S,C).

    The right-hand tensors enter with a minus sign, so a null vector
    (c_RR, c_RC, c_CR, c_CC, d_QSR, d_QgC, d_QSC) reads
    Σ c·(H·T) = Σ d·Q(A,T).
    """
    lhs = [Term(s, derivation(bundle, s)) for s in ("RR", "RC", "CR", "CC")]
    rhs = [Term(s, derivation(bundle, s)) for s in ("QSR", "QgC", "QSC")]
    return discover(lhs, rhs, name="pseudosymmetric family", config=config)


# -- full classification -----------------------------------------------------------------------

ALL_CHECKS = (
    "codazzi",
    "cyclic_parallel",
    "quasi_einstein",
    "ein",
    "qe_two_form",
    "qe_chaki",
    "qe_de_ghosh",
    "qe_pseudo",
    "semisymmetric",
    "ricci_generalized_pseudosymmetric",
    "deszcz_pseudosymmetric",
    "conformally_pseudosymmetric",
    "weyl_pseudosymmetric",
    "conharmonic_pseudosymmetric",
    "conharmonic_semisymmetric",
    "projective_ricci_generalized",
    "roter",
    "generalized_roter",
    "pseudosymmetric_family",
    "ricci_compatibility",
    "form_compatibility",
)

_QE_FORM_OF = {
    "qe_two_form": "two-form",
    "qe_chaki": "chaki",
    "qe_de_ghosh": "de-ghosh",
    "qe_pseudo": "pseudo",
}


def _solution_summary(sol: RelationSolution, what: str) -> str:
    if not sol.holds:
        return f"not {what}"
    return f"{what}; solution space of dimension {len(sol.basis)}"


def run_check(
    bundle: CurvatureBundle,
    name: str,
    ingredients: dict | None = None,
    config: ZeroTestConfig = DEFAULT_CONFIG,
) -> CheckResult:
    ingredients = ingredients or {}
    if name in ("codazzi", "cyclic_parallel"):
        cod, cyc = check_codazzi_and_cyclic(bundle, config)
        return cod if name == "codazzi" else cyc
    if name == "quasi_einstein":
        qe = quasi_einstein_rank(bundle, config)
        labels = {0: "Einstein", 1: "quasi-Einstein"}
        label = labels.get(qe.k, f"{qe.k}-quasi-Einstein")
        if qe.k == 1 and qe.alpha is not None and qe.alpha.is_zero():
            label += " (Ricci simple)"
        summary = f"{label}, rank(S - ({qe.alpha})g) = {qe.k}"
        return CheckResult(name, qe.k <= 1, summary, qe.to_dict())
    if name == "ein":
        return minimal_ein(bundle, config)
    if name in _QE_FORM_OF:
        key = _QE_FORM_OF[name]
        ing = ingredients.get(key)
        if ing is None:
            return CheckResult(name, None, "no decomposition ingredients supplied", {})
        kwargs = {k: v for k, v in ing.items() if k != "note"}
        res = verify_qe_decomposition(bundle, key, config=config, **kwargs)
        res.name = name
        if ing.get("note"):
            res.detail["note"] = ing["note"]
        return res
    if name == "semisymmetric":
        res = check_semisymmetric_type(bundle, EndoKind("R"), "R", config)
        res.name = name
        return res
    if name == "ricci_generalized_pseudosymmetric":
        return relation_check(bundle, name, "RR", ["QSR"], config, {"QSR": ONE})
    if name == "deszcz_pseudosymmetric":
        return relation_check(bundle, name, "RR", ["QgR"], config)
    if name == "conformally_pseudosymmetric":
        return relation_check(bundle, name, "RC", ["QgC"], config)
    if name == "weyl_pseudosymmetric":
        return relation_check(bundle, name, "CC", ["QgC"], config)
    if name == "conharmonic_pseudosymmetric":
        return relation_check(bundle, name, "KK", ["QgK"], config)
    if name == "conharmonic_semisymmetric":
        res = check_semisymmetric_type(bundle, EndoKind("K"), "K", config)
        res.name = name
        return res
    if name == "projective_ricci_generalized":
        return relation_check(bundle, name, "PR", ["QSR"], config)
    if name in ("roter", "generalized_roter"):
        sol = roter_decomposition(bundle, name == "generalized_roter", config=config)
        detail = sol.to_dict()
        profiles = bundle.M.spec.profiles
        if name == "generalized_roter" and {"h", "f"} <= set(profiles):
            from .catalog import tau

            t = tau(profiles["h"], profiles["f"])
            detail["tau"] = str(t)
            detail["tau_certificate"] = zero_test(t, bundle.M.chart, config).to_dict()
        what = "generalized Roter type" if name == "generalized_roter" else "Roter type"
        return CheckResult(name, sol.holds, _solution_summary(sol, what), detail)
    if name == "pseudosymmetric_family":
        sol = pseudosymmetric_family(bundle, config)
        holds = sol.holds and len(sol.basis) > 0
        return CheckResult(name, holds, _solution_summary(sol, "pseudosymmetric type relations"), sol.to_dict())
    if name == "ricci_compatibility":
        results = {k: check_compatibility(bundle, bundle.S, k, config) for k in ("R", "C", "W", "K")}
        holds = all(r.holds for r in results.values())
        ok = [k for k, r in results.items() if r.holds]
        return CheckResult(
            name, holds, "Ricci tensor compatible with " + (", ".join(ok) or "none"),
            {k: r.to_dict() for k, r in results.items()},
        )
    if name == "form_compatibility":
        form = ingredients.get("form")
        if form is None:
            return CheckResult(name, None, "no 1-form supplied", {})
        results = {k: check_compatibility(bundle, form, k, config) for k in ("R", "C", "W", "K")}
        holds = all(r.holds for r in results.values())
        ok = [k for k, r in results.items() if r.holds]
        return CheckResult(
            name, holds, f"1-form {form.name} compatible with " + (", ".join(ok) or "none"),
            {k: r.to_dict() for k, r in results.items()},
        )
    raise KeyError(f"unknown check {name!r}")


def classify_metric(
    bundle: CurvatureBundle,
    checks=None,
    ingredients: dict | None = None,
    config: ZeroTestConfig = DEFAULT_CONFIG,
) -> StructureReport:
    checks = list(ALL_CHECKS if checks is None else checks)
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    report = StructureReport(bundle.M.name, config.seed)
    for name in checks:
        report.add(run_check(bundle, name, ingredients, config))
    return report
