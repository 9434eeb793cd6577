"""Metrics, tensor fields and the Levi-Civita connection on a coordinate chart.

Indices are 1-based throughout the public API, so ``T[1, 2, 1, 2]`` is the
component the literature writes as ``T_1212``.  Tensor components are kept
sparsely: a dict from index tuple to a nonzero :class:`Expr`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .exprcore import ONE, ZERO, Expr, SymbolTable, differentiate, zero_test
from .exprcore.numeric import DEFAULT_CONFIG, Verdict, ZeroCertificate, ZeroTestConfig

# symmetry generators: (permutation, sign) meaning T[idx∘perm] = sign * T[idx]
SYMMETRIC_PAIR = (((1, 0), 1),)
RIEMANN = (((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((2, 3, 0, 1), 1))
SKEW_12 = (((1, 0, 2, 3), -1),)


class ChartMismatchError(ValueError):
    pass


class DegenerateMetricError(ValueError):
    pass


def _apply(perm, idx):
    return tuple(idx[p] for p in perm)


@lru_cache(maxsize=200_000)
def orbit(idx: tuple, gens: tuple):
    """Signed orbit of ``idx`` under ``gens``.

    Returns ``(members, forced_zero)`` where members maps each index tuple in
    the orbit to its sign relative to ``idx``; ``forced_zero`` is set when
    the symmetries force every component in the orbit to vanish.
    """
    seen = {idx: 1}
    stack = [idx]
    forced_zero = False
    while stack:
        cur = stack.pop()
        s = seen[cur]
        for perm, sign in gens:
            nxt = _apply(perm, cur)
            ns = s * sign
            prev = seen.get(nxt)
            if prev is None:
                seen[nxt] = ns
                stack.append(nxt)
            elif prev != ns:
                forced_zero = True
    return tuple(sorted(seen.items())), forced_zero


def extend_symmetries(gens: tuple, extra_slots: int) -> tuple:
    """Lift generators on the first k slots to a tensor with more slots."""
    out = []
    for perm, sign in gens:
        k = len(perm)
        out.append((tuple(perm) + tuple(range(k, k + extra_slots)), sign))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TensorField:
    """Components of a tensor of fixed order over a chart.

    ``variance`` has one letter per slot: ``"d"`` for covariant and ``"u"``
    for contravariant.  ``symmetries`` lists generators the components are
    known to satisfy; they are used to iterate over orbit representatives.
    """

    chart: SymbolTable
    order: int
    components: dict = field(repr=False)
    symmetries: tuple = ()
    name: str = "T"
    variance: str = ""

    def __post_init__(self):
        if not self.variance:
            object.__setattr__(self, "variance", "d" * self.order)
        if len(self.variance) != self.order:
            raise ValueError("variance string must have one letter per slot")

    @property
    def dim(self) -> int:
        return self.chart.dim

    def __getitem__(self, idx) -> Expr:
        if isinstance(idx, int):
            idx = (idx,)
        return self.components.get(tuple(idx), ZERO)

    def indices(self):
        return itertools.product(range(1, self.dim + 1), repeat=self.order)

    def nonzero(self) -> list:
        return sorted(self.components.items())

    def representatives(self) -> list:
        """Nonzero components, one per symmetry orbit (smallest index tuple)."""
        out = []
        for idx, value in sorted(self.components.items()):
            members, _ = orbit(idx, self.symmetries)
            if members[0][0] == idx:
                out.append((idx, value))
        return out

    def is_trivially_zero(self) -> bool:
        return not self.components

    # -- linear structure --------------------------------------------------
    def _check_compatible(self, other: "TensorField"):
        if other.chart.coordinates != self.chart.coordinates:
            raise ChartMismatchError("tensors live on different charts")
        if other.order != self.order or other.variance != self.variance:
            raise ValueError("tensors have different type")

    def _common_symmetries(self, other):
        return self.symmetries if self.symmetries == other.symmetries else ()

    def __add__(self, other: "TensorField") -> "TensorField":
        self._check_compatible(other)
        out = dict(self.components)
        for idx, v in other.components.items():
            s = out.get(idx, ZERO) + v
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return self.with_components(out, self._common_symmetries(other), f"({self.name}+{other.name})")

    def __neg__(self):
        return self.with_components({k: -v for k, v in self.components.items()}, self.symmetries, f"-{self.name}")

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorField":
        c = c if isinstance(c, Expr) else Expr(c)
        if c.is_zero():
            return self.with_components({}, self.symmetries, self.name)
        out = {k: v * c for k, v in self.components.items()}
        return self.with_components(out, self.symmetries, f"({c})*{self.name}")

    def __rmul__(self, c):
        return self.scale(c)

    def with_components(self, comps, symmetries=None, name=None):
        return TensorField(
            self.chart,
            self.order,
            comps,
            self.symmetries if symmetries is None else symmetries,
            name or self.name,
            self.variance,
        )

    def map(self, fn) -> "TensorField":
        out = {}
        for idx, v in self.components.items():
            w = fn(v)
            if not w.is_zero():
                out[idx] = w
        return self.with_components(out)

    def equals(self, other: "TensorField") -> bool:
        """Canonical componentwise equality."""
        self._check_compatible(other)
        return self.components == other.components


def from_function(chart: SymbolTable, order: int, fn, symmetries=(), name="T", variance="") -> TensorField:
    """Build a tensor by evaluating ``fn(idx)`` once per symmetry orbit."""
    n = chart.dim
    comps = {}
    done = set()
    for idx in itertools.product(range(1, n + 1), repeat=order):
        if idx in done:
            continue
        members, forced_zero = orbit(idx, symmetries)
        done.update(m for m, _ in members)
        if forced_zero:
            continue
        value = fn(idx)
        if value.is_zero():
            continue
        for m, sign in members:
            comps[m] = value if sign == 1 else -value
    return TensorField(chart, order, comps, symmetries, name, variance)


def from_components(chart: SymbolTable, order: int, comps: dict, symmetries=(), name="T") -> TensorField:
    """Fill a tensor from representative components by symmetry."""
    out = {}
    for idx, value in comps.items():
        value = value if isinstance(value, Expr) else Expr(value)
        members, forced_zero = orbit(tuple(idx), symmetries)
        if forced_zero and not value.is_zero():
            raise ValueError(f"component {idx} is forced to vanish by the symmetries")
        if value.is_zero():
            continue
        for m, sign in members:
            out[m] = value if sign == 1 else -value
    return TensorField(chart, order, out, symmetries, name)


# -- zero testing of whole tensors -----------------------------------------------

@dataclass(frozen=True)
class TensorZeroCertificate:
    verdict: Verdict
    index: tuple | None = None
    component: Expr | None = None
    certificate: ZeroCertificate | None = None
    checked: int = 0

    @property
    def is_zero(self) -> bool:
        return self.verdict is not Verdict.PROVED_NONZERO

    def to_dict(self) -> dict:
        out = {"verdict": str(self.verdict), "checked": self.checked}
        if self.index is not None:
            out["index"] = "".join(map(str, self.index))
            out["component"] = str(self.component)
            out["certificate"] = self.certificate.to_dict()
        return out


def zero_test_tensor(T: TensorField, config: ZeroTestConfig = DEFAULT_CONFIG) -> TensorZeroCertificate:
    """Zero-test every stored component; the first nonzero one is the witness."""
    verdict = Verdict.PROVED_ZERO
    reps = T.representatives() if T.symmetries else T.nonzero()
    for idx, value in reps:
        cert = zero_test(value, T.chart, config)
        if cert.verdict is Verdict.PROVED_NONZERO:
            return TensorZeroCertificate(cert.verdict, idx, value, cert, len(reps))
        verdict = Verdict.PROBABLY_ZERO
    return TensorZeroCertificate(verdict, checked=len(reps))


def check_symmetries(T: TensorField, gens, config: ZeroTestConfig = DEFAULT_CONFIG) -> TensorZeroCertificate:
    """Zero-test ``T[perm(idx)] - sign*T[idx]`` over all index tuples."""
    diffs = {}
    for idx in T.indices():
        for k, (perm, sign) in enumerate(gens):
            d = T[_apply(perm, idx)] - (T[idx] if sign == 1 else -T[idx])
            if not d.is_zero():
                diffs[idx + (k,)] = d
    probe = TensorField(T.chart, T.order + 1, diffs, name=f"sym({T.name})")
    return zero_test_tensor(probe, config)


# -- metrics ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MetricSpec:
    """A chart together with the symmetric matrix ``g_ij`` (1-based)."""

    symbols: SymbolTable
    matrix: tuple
    name: str = "metric"
    # profile functions used as closed forms in reports, e.g. {"h": Expr}
    profiles: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.symbols.dim
        if n < 3:
            raise ValueError(f"dimension must be at least 3, got {n}")
        rows = tuple(tuple(e if isinstance(e, Expr) else Expr(e) for e in row) for row in self.matrix)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"metric matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({j + 1},{i + 1})")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_lower(cls, symbols: SymbolTable, entries: dict, name: str = "metric", profiles=None):
        """Build from ``{(i, j): Expr}`` with ``i >= j``; omitted entries are 0."""
        n = symbols.dim
        m = [[ZERO] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not (1 <= j <= n and 1 <= i <= n):
                raise ValueError(f"metric index ({i},{j}) out of range 1..{n}")
            v = v if isinstance(v, Expr) else Expr(v)
            m[i - 1][j - 1] = v
            m[j - 1][i - 1] = v
        return cls(symbols, tuple(map(tuple, m)), name, dict(profiles or {}))

    @property
    def dim(self) -> int:
        return self.symbols.dim

    def g(self, i: int, j: int) -> Expr:
        return self.matrix[i - 1][j - 1]

    def lower_entries(self) -> dict:
        n = self.dim
        return {
            (i, j): self.matrix[i - 1][j - 1]
            for i in range(1, n + 1)
            for j in range(1, i + 1)
            if not self.matrix[i - 1][j - 1].is_zero()
        }

    def __eq__(self, other):
        if not isinstance(other, MetricSpec):
            return NotImplemented
        return (
            self.symbols.coordinates == other.symbols.coordinates
            and self.symbols.parameters == other.symbols.parameters
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.symbols.coordinates, self.matrix))


def _determinant_and_adjugate(mat):
    n = len(mat)
    memo = {}

    def minor(rows: tuple, cols: tuple) -> Expr:
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            val = mat[rows[0]][cols[0]]
        else:
            r0, rest = rows[0], rows[1:]
            val = ZERO
            for k, c in enumerate(cols):
                entry = mat[r0][c]
                if entry.is_zero():
                    continue
                sub = minor(rest, cols[:k] + cols[k + 1:])
                term = entry * sub
                val = val + term if k % 2 == 0 else val - term
        memo[key] = val
        return val

    full = tuple(range(n))
    det = minor(full, full)
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = full[:j] + full[j + 1:]
            cols = full[:i] + full[i + 1:]
            c = minor(rows, cols)
            adj[i][j] = c if (i + j) % 2 == 0 else -c
    return det, adj


class MetricField:
    """A metric with its inverse, determinant and Christoffel symbols."""

    def __init__(self, spec: MetricSpec, config: ZeroTestConfig = DEFAULT_CONFIG):
        self.spec = spec
        self.config = config
        self.chart = spec.symbols
        self.n = spec.dim
        det, adj = _determinant_and_adjugate(spec.matrix)
        cert = zero_test(det, self.chart, config)
        if cert.verdict is not Verdict.PROVED_NONZERO:
            raise DegenerateMetricError(f"metric {spec.name!r} is degenerate (det = {det})")
        self.det = det
        self.det_certificate = cert
        inv_det = det.reciprocal()
        self.inv = tuple(tuple(a * inv_det for a in row) for row in adj)
        self._gamma = None

    @property
    def name(self) -> str:
        return self.spec.name

    def g(self, i: int, j: int) -> Expr:
        return self.spec.matrix[i - 1][j - 1]

    def ginv(self, i: int, j: int) -> Expr:
        return self.inv[i - 1][j - 1]

    def coordinate(self, i: int) -> str:
        return self.chart.coordinates[i - 1]

    def d(self, e: Expr, i: int) -> Expr:
        return differentiate(e, self.chart.coordinates[i - 1])

    @property
    def gamma(self):
        """Christoffel symbols, ``gamma[k][i][j]`` = Γ^k_ij (0-based lists)."""
        if self._gamma is None:
            n = self.n
            dg = [[[self.d(self.spec.matrix[a][b], c + 1) for c in range(n)] for b in range(n)] for a in range(n)]
            first = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
            for l in range(n):
                for i in range(n):
                    for j in range(i, n):
                        v = (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]) / 2
                        first[l][i][j] = first[l][j][i] = v
            gam = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
            for k in range(n):
                for i in range(n):
                    for j in range(i, n):
                        v = ZERO
                        for l in range(n):
                            gi = self.inv[k][l]
                            if gi.is_zero() or first[l][i][j].is_zero():
                                continue
                            v = v + gi * first[l][i][j]
                        gam[k][i][j] = gam[k][j][i] = v
            self._gamma = gam
        return self._gamma

    def christoffel(self, k: int, i: int, j: int) -> Expr:
        return self.gamma[k - 1][i - 1][j - 1]

    def metric_tensor(self) -> TensorField:
        return from_function(self.chart, 2, lambda ij: self.g(*ij), SYMMETRIC_PAIR, "g")

    def inverse_tensor(self) -> TensorField:
        return from_function(self.chart, 2, lambda ij: self.ginv(*ij), SYMMETRIC_PAIR, "ginv", "uu")

    def check_chart(self, T: TensorField):
        if T.chart.coordinates != self.chart.coordinates:
            raise ChartMismatchError(f"tensor {T.name} is not on the chart of {self.name}")


def build_metric(spec: MetricSpec, config: ZeroTestConfig = DEFAULT_CONFIG) -> MetricField:
    return MetricField(spec, config)


# -- tensor operations -------------------------------------------------------------

def covariant_derivative(T: TensorField, M: MetricField) -> TensorField:
    """(∇T)_{i1..ik,j}; the derivative slot is appended last."""
    M.check_chart(T)
    if "u" in T.variance:
        raise ValueError("covariant_derivative expects a covariant tensor")
    n, k = M.n, T.order
    gam = M.gamma

    def comp(idx):
        *base, j = idx
        base = tuple(base)
        val = M.d(T[base], j)
        for s in range(k):
            for m in range(1, n + 1):
                G = gam[m - 1][j - 1][base[s] - 1]
                if G.is_zero():
                    continue
                t = T[base[:s] + (m,) + base[s + 1:]]
                if not t.is_zero():
                    val = val - G * t
        return val

    return from_function(M.chart, k + 1, comp, extend_symmetries(T.symmetries, 1), f"∇{T.name}")


def _slot_check(T: TensorField, slot: int):
    if not 1 <= slot <= T.order:
        raise IndexError(f"slot {slot} out of range for order-{T.order} tensor")


def raise_index(T: TensorField, slot: int, M: MetricField) -> TensorField:
    _slot_check(T, slot)
    if T.variance[slot - 1] == "u":
        raise ValueError(f"slot {slot} is already contravariant")
    s = slot - 1
    out = {}
    for idx, v in T.components.items():
        b = idx[s]
        for a in range(1, M.n + 1):
            gi = M.inv[a - 1][b - 1]
            if gi.is_zero():
                continue
            key = idx[:s] + (a,) + idx[s + 1:]
            out[key] = out.get(key, ZERO) + gi * v
    variance = T.variance[:s] + "u" + T.variance[s + 1:]
    comps = {k: v for k, v in out.items() if not v.is_zero()}
    return TensorField(T.chart, T.order, comps, (), f"{T.name}^{slot}", variance)


def lower_index(T: TensorField, slot: int, M: MetricField) -> TensorField:
    _slot_check(T, slot)
    if T.variance[slot - 1] != "u":
        raise ValueError(f"slot {slot} is already covariant")
    s = slot - 1
    out = {}
    for idx, v in T.components.items():
        b = idx[s]
        for a in range(1, M.n + 1):
            gv = M.spec.matrix[a - 1][b - 1]
            if gv.is_zero():
                continue
            key = idx[:s] + (a,) + idx[s + 1:]
            out[key] = out.get(key, ZERO) + gv * v
    variance = T.variance[:s] + "d" + T.variance[s + 1:]
    comps = {k: v for k, v in out.items() if not v.is_zero()}
    return TensorField(T.chart, T.order, comps, (), f"{T.name}_{slot}", variance)


def contract(T: TensorField, slot1: int, slot2: int, M: MetricField | None = None) -> TensorField:
    """Trace over two slots; two covariant slots are contracted with g^{-1}."""
    _slot_check(T, slot1)
    _slot_check(T, slot2)
    if slot1 == slot2:
        raise ValueError("cannot contract a slot with itself")
    a, b = sorted((slot1 - 1, slot2 - 1))
    mixed = T.variance[a] != T.variance[b]
    if not mixed and M is None:
        raise ValueError("contracting two slots of equal variance needs a metric")
    out = {}
    for idx, v in T.components.items():
        if mixed:
            if idx[a] != idx[b]:
                continue
            w = v
        else:
            w = (M.inv if T.variance[a] == "d" else M.spec.matrix)[idx[a] - 1][idx[b] - 1] * v
            if w.is_zero():
                continue
        key = idx[:a] + idx[a + 1:b] + idx[b + 1:]
        out[key] = out.get(key, ZERO) + w
    variance = T.variance[:a] + T.variance[a + 1:b] + T.variance[b + 1:]
    comps = {k: v for k, v in out.items() if not v.is_zero()}
    return TensorField(T.chart, T.order - 2, comps, (), f"tr({T.name})", variance or "")


def scalar_value(T: TensorField) -> Expr:
    if T.order != 0:
        raise ValueError("not a scalar")
    return T.components.get((), ZERO)


def tensor_product(A: TensorField, B: TensorField) -> TensorField:
    if A.chart.coordinates != B.chart.coordinates:
        raise ChartMismatchError("tensors live on different charts")
    out = {}
    for i, a in A.components.items():
        for j, b in B.components.items():
            out[i + j] = a * b
    return TensorField(A.chart, A.order + B.order, out, (), f"{A.name}⊗{B.name}", A.variance + B.variance)


def covector(chart: SymbolTable, values, name="w") -> TensorField:
    comps = {}
    for i, v in enumerate(values, start=1):
        v = v if isinstance(v, Expr) else Expr(v)
        if not v.is_zero():
            comps[(i,)] = v
    return TensorField(chart, 1, comps, (), name)


def symmetric_from_matrix(chart: SymbolTable, matrix, name="E") -> TensorField:
    n = chart.dim
    comps = {}
    for i in range(n):
        for j in range(n):
            v = matrix[i][j]
            v = v if isinstance(v, Expr) else Expr(v)
            if not v.is_zero():
                comps[(i + 1, j + 1)] = v
    for (i, j), v in comps.items():
        if comps.get((j, i), ZERO) != v:
            raise ValueError(f"matrix for {name} is not symmetric at ({i},{j})")
    return TensorField(chart, 2, comps, SYMMETRIC_PAIR, name)


def matrix_of(T: TensorField):
    n = T.dim
    return [[T[i, j] for j in range(1, n + 1)] for i in range(1, n + 1)]


def kronecker_check(M: MetricField) -> TensorZeroCertificate:
    """Zero-test g^{ik} g_kj - δ^i_j."""
    n = M.n
    comps = {}
    for i in range(n):
        for j in range(n):
            v = ZERO
            for k in range(n):
                v = v + M.inv[i][k] * M.spec.matrix[k][j]
            if i == j:
                v = v - ONE
            if not v.is_zero():
                comps[(i + 1, j + 1)] = v
    return zero_test_tensor(TensorField(M.chart, 2, comps, (), "g^-1 g - 1", "ud"), M.config)
