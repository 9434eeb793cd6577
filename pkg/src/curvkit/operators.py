"""Curvature endomorphisms acting as derivations, and the Tachibana tensor Q(A, T)."""
from __future__ import annotations

from dataclasses import dataclass

from .curvature import CurvatureBundle, wedge_tensor
from .exprcore import ZERO
from .tensorlab import MetricField, TensorField, extend_symmetries

CURVATURE_SELECTORS = ("R", "C", "P", "W", "K")


@dataclass(frozen=True, eq=False)
class EndoKind:
    """Either a named curvature endomorphism or ``X ∧_A Y`` for a symmetric A."""

    selector: str | None = None
    A: TensorField | None = None

    def __post_init__(self):
        if (self.selector is None) == (self.A is None):
            raise ValueError("EndoKind needs exactly one of selector or A")
        if self.selector is not None and self.selector not in CURVATURE_SELECTORS:
            raise ValueError(f"unknown curvature endomorphism {self.selector!r}")

    @classmethod
    def wedge(cls, A: TensorField) -> "EndoKind":
        return cls(A=A)

    @property
    def label(self) -> str:
        return self.selector if self.selector else f"∧_{self.A.name}"

    def tensor(self, M: MetricField, bundle: CurvatureBundle | None = None) -> TensorField:
        """The (0,4) tensor g(𝓗(X1,X2)X3, X4)."""
        if self.A is not None:
            return wedge_tensor(self.A, M)
        bundle = bundle or CurvatureBundle(M)
        return bundle.curvature(self.selector)


def _raised_table(H4: TensorField, M: MetricField) -> dict:
    """m -> [((x, y, z), 𝓗^m_xyz)] with 𝓗^m_xyz = g^{mw} H_xyzw."""
    acc = {}
    for (x, y, z, w), h in H4.components.items():
        for m in range(1, M.n + 1):
            gi = M.inv[m - 1][w - 1]
            if gi.is_zero():
                continue
            key = (m, x, y, z)
            acc[key] = acc.get(key, ZERO) + gi * h
    table: dict = {}
    for (m, x, y, z), v in sorted(acc.items()):
        if not v.is_zero():
            table.setdefault(m, []).append(((x, y, z), v))
    return table


def endo_action(H: EndoKind, T: TensorField, M: MetricField, bundle: CurvatureBundle | None = None) -> TensorField:
    """(H·T)(X1..Xk, X, Y) = -Σ_s T(X1, .., 𝓗(X,Y)X_s, .., Xk).

    The two endomorphism arguments are appended as the last two slots.
    """
    M.check_chart(T)
    if T.order < 1:
        raise ValueError("H·T needs a tensor of order at least 1")
    if "u" in T.variance:
        raise ValueError("H·T expects a covariant tensor")
    table = _raised_table(H.tensor(M, bundle), M)
    k = T.order
    acc: dict = {}
    for idx, t in T.components.items():
        for s in range(k):
            for (x, y, z), h in table.get(idx[s], ()):
                key = idx[:s] + (z,) + idx[s + 1:] + (x, y)
                acc[key] = acc.get(key, ZERO) - h * t
    comps = {key: v for key, v in acc.items() if not v.is_zero()}
    perm = tuple(range(k)) + (k + 1, k)
    gens = extend_symmetries(T.symmetries, 2) + ((perm, -1),)
    return TensorField(T.chart, k + 2, comps, gens, f"{H.label}·{T.name}")


def tachibana(A: TensorField, T: TensorField, M: MetricField) -> TensorField:
    """Q(A, T)(X1..Xk, X, Y) = ((X ∧_A Y)·T)(X1..Xk)."""
    for (i, j), v in A.components.items():
        if A[j, i] != v:
            raise ValueError(f"Q(A, T) needs a symmetric A; {A.name} differs at ({i},{j})")
    out = endo_action(EndoKind.wedge(A), T, M)
    return out.with_components(out.components, None, f"Q({A.name},{T.name})")
