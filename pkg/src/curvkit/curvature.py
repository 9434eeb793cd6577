"""Curvature tensors of a metric and the Kulkarni–Nomizu product.

Every (0,4) curvature tensor here is read as ``X(X1,X2,X3,X4) =
g(𝒳(X1,X2)X3, X4)`` for the corresponding endomorphism 𝒳.  The sign of R is
chosen so that the Som-Raychaudhuri chart gives ``R_1212 = -a^2 r^2``; with
it ``S_jk = g^{il} R_ijkl``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from .exprcore import ZERO, Expr
from .tensorlab import (
    RIEMANN,
    SKEW_12,
    SYMMETRIC_PAIR,
    ChartMismatchError,
    MetricField,
    TensorField,
    covariant_derivative,
    from_function,
)

DERIVED_KINDS = ("G", "C", "P", "W", "K")


def riemann(M: MetricField, use_symmetry: bool = True) -> TensorField:
    """The (0,4) Riemann tensor.

    With ``use_symmetry`` the components are computed once per orbit of the
    Riemann symmetries; without it every component is computed from the
    Christoffel formula (only the built-in skew symmetry in slots 1-2 is
    used), which is what the symmetry property tests exercise.
    """
    n = M.n
    gam = M.gamma
    dgam = {}

    def dG(m, j, k, i):
        key = (m, j, k, i)
        hit = dgam.get(key)
        if hit is None:
            hit = dgam[key] = M.d(gam[m][j][k], i + 1)
        return hit

    # R^m_kij in the usual index placement
    def up(m, k, i, j):
        v = dG(m, j, k, i) - dG(m, i, k, j)
        for p in range(n):
            a, b = gam[m][i][p], gam[p][j][k]
            if not a.is_zero() and not b.is_zero():
                v = v + a * b
            a, b = gam[m][j][p], gam[p][i][k]
            if not a.is_zero() and not b.is_zero():
                v = v - a * b
        return v

    def comp(idx):
        i, j, k, l = (x - 1 for x in idx)
        v = ZERO
        for m in range(n):
            g = M.spec.matrix[l][m]
            if not g.is_zero():
                v = v + g * up(m, k, i, j)
        return -v

    gens = RIEMANN if use_symmetry else SKEW_12
    T = from_function(M.chart, 4, comp, gens, "R")
    return T.with_components(T.components, RIEMANN)


def ricci_and_scalar(M: MetricField, R: TensorField | None = None):
    R = R if R is not None else riemann(M)
    n = M.n

    def comp(idx):
        j, k = idx
        v = ZERO
        for i in range(1, n + 1):
            for l in range(1, n + 1):
                gi = M.inv[i - 1][l - 1]
                if gi.is_zero():
                    continue
                r = R[i, j, k, l]
                if not r.is_zero():
                    v = v + gi * r
        return v

    S = from_function(M.chart, 2, comp, SYMMETRIC_PAIR, "S")
    kappa = trace(S, M)
    return S, kappa


def trace(A: TensorField, M: MetricField) -> Expr:
    v = ZERO
    for (i, j), a in A.components.items():
        gi = M.inv[i - 1][j - 1]
        if not gi.is_zero():
            v = v + gi * a
    return v


def operator_of(A: TensorField, M: MetricField) -> TensorField:
    """The (1,1) endomorphism 𝒜 with g(X, 𝒜Y) = A(X, Y): 𝒜^a_j = g^{ab} A_bj."""
    n = M.n
    comps = {}
    for a in range(1, n + 1):
        for j in range(1, n + 1):
            v = ZERO
            for b in range(1, n + 1):
                gi = M.inv[a - 1][b - 1]
                if gi.is_zero():
                    continue
                x = A[b, j]
                if not x.is_zero():
                    v = v + gi * x
            if not v.is_zero():
                comps[(a, j)] = v
    return TensorField(M.chart, 2, comps, (), f"op({A.name})", "ud")


def compose_with_operator(A: TensorField, op: TensorField, name: str) -> TensorField:
    """B(X, Y) = A(X, 𝒪Y)."""
    n = A.dim

    def comp(idx):
        i, j = idx
        v = ZERO
        for a in range(1, n + 1):
            x, o = A[i, a], op[a, j]
            if not x.is_zero() and not o.is_zero():
                v = v + x * o
        return v

    return from_function(A.chart, 2, comp, (), name)


def ricci_levels(M: MetricField, S: TensorField | None = None):
    """(S², S³, S⁴) with S^{k+1}(X, Y) = S^k(X, 𝒮Y)."""
    S = S if S is not None else ricci_and_scalar(M)[0]
    op = operator_of(S, M)
    out = []
    cur = S
    for k in (2, 3, 4):
        cur = compose_with_operator(cur, op, f"S{k}")
        cur = cur.with_components(cur.components, SYMMETRIC_PAIR)
        out.append(cur)
    return tuple(out)


def kulkarni_nomizu(A: TensorField, E: TensorField) -> TensorField:
    """(A∧E)_ijkl = A_il E_jk + A_jk E_il - A_ik E_jl - A_jl E_ik."""
    if A.chart.coordinates != E.chart.coordinates:
        raise ChartMismatchError("Kulkarni–Nomizu factors live on different charts")

    def comp(idx):
        i, j, k, l = idx
        return A[i, l] * E[j, k] + A[j, k] * E[i, l] - A[i, k] * E[j, l] - A[j, l] * E[i, k]

    return from_function(A.chart, 4, comp, RIEMANN, f"{A.name}∧{E.name}")


def wedge_tensor(A: TensorField, M: MetricField) -> TensorField:
    """g((X1 ∧_A X2)X3, X4) = A(X2,X3) g(X1,X4) - A(X1,X3) g(X2,X4)."""
    g = M.spec.matrix

    def comp(idx):
        i, j, k, l = idx
        return A[j, k] * g[i - 1][l - 1] - A[i, k] * g[j - 1][l - 1]

    return from_function(M.chart, 4, comp, SKEW_12, f"∧_{A.name}")


class CurvatureBundle:
    """Lazily computed curvature tensors of one metric."""

    def __init__(self, M: MetricField):
        self.M = M
        self.n = M.n

    @cached_property
    def g(self) -> TensorField:
        return self.M.metric_tensor()

    @cached_property
    def R(self) -> TensorField:
        return riemann(self.M)

    @cached_property
    def _ricci(self):
        return ricci_and_scalar(self.M, self.R)

    @property
    def S(self) -> TensorField:
        return self._ricci[0]

    @property
    def kappa(self) -> Expr:
        return self._ricci[1]

    @cached_property
    def ricci_operator(self) -> TensorField:
        return operator_of(self.S, self.M)

    @cached_property
    def _levels(self):
        return ricci_levels(self.M, self.S)

    @property
    def S2(self) -> TensorField:
        return self._levels[0]

    @property
    def S3(self) -> TensorField:
        return self._levels[1]

    @property
    def S4(self) -> TensorField:
        return self._levels[2]

    def level(self, k: int) -> TensorField:
        if k == 0:
            return self.g
        if k == 1:
            return self.S
        return self._levels[k - 2]

    @cached_property
    def G(self) -> TensorField:
        T = wedge_tensor(self.g, self.M)
        return T.with_components(T.components, RIEMANN, "G")

    @cached_property
    def gS(self) -> TensorField:
        return kulkarni_nomizu(self.g, self.S)

    @cached_property
    def C(self) -> TensorField:
        n = self.n
        k = self.kappa * Fraction(1, (n - 1) * (n - 2))
        T = self.R - self.gS.scale(Fraction(1, n - 2)) + self.G.scale(k)
        return T.with_components(T.components, RIEMANN, "C")

    @cached_property
    def P(self) -> TensorField:
        T = self.R - wedge_tensor(self.S, self.M).scale(Fraction(1, self.n - 1))
        return T.with_components(T.components, SKEW_12, "P")

    @cached_property
    def W(self) -> TensorField:
        n = self.n
        T = self.R - self.G.scale(self.kappa * Fraction(1, n * (n - 1)))
        return T.with_components(T.components, RIEMANN, "W")

    @cached_property
    def K(self) -> TensorField:
        T = self.R - self.gS.scale(Fraction(1, self.n - 2))
        return T.with_components(T.components, RIEMANN, "K")

    @cached_property
    def dR(self) -> TensorField:
        T = covariant_derivative(self.R, self.M)
        return T.with_components(T.components, None, "∇R")

    @cached_property
    def dS(self) -> TensorField:
        T = covariant_derivative(self.S, self.M)
        return T.with_components(T.components, None, "∇S")

    def curvature(self, kind: str) -> TensorField:
        if kind not in ("R",) + DERIVED_KINDS:
            raise KeyError(f"unknown curvature tensor {kind!r}")
        return getattr(self, kind)


def derived_curvature(M: MetricField, kind: str, bundle: CurvatureBundle | None = None) -> TensorField:
    bundle = bundle or CurvatureBundle(M)
    if kind not in DERIVED_KINDS:
        raise KeyError(f"unknown derived curvature tensor {kind!r}")
    return getattr(bundle, kind)
