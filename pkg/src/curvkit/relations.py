"""Linear relations among tensors with scalar-function coefficients.

The unknown coefficients are functions on the chart, so a relation
``Σ x_u T_u = -b`` is a linear system over the field of rational functions
of the chart's atoms.  It is solved symbolically:

1. a numeric pass at a random point picks a maximal independent set of
   component rows (exact rationals when no kernel appears);
2. those rows are reduced to echelon form over :class:`Expr`, pivots being
   accepted only when the zero test says they are nonzero;
3. every solution vector is substituted back into *all* components and
   zero-tested; a failing component is added to the row set and the
   reduction repeated.

The solution is reported as a particular solution plus a reduced-echelon
null-space basis whose free variables follow the column order of the query,
so the answer is deterministic.  As an independent cross-check the numeric
rank of the system is recorded at several sample points.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import mpmath

from .exprcore import ONE, ZERO, Expr
from .exprcore.numeric import (
    DEFAULT_CONFIG,
    DomainError,
    PointEvaluator,
    SingularPointError,
    Verdict,
    ZeroTestConfig,
    sample_assignment,
    zero_test,
)
from .tensorlab import TensorField, TensorZeroCertificate, zero_test_tensor


@dataclass(frozen=True, eq=False)
class Term:
    """One tensor in a relation, with a fixed coefficient or an unknown one."""

    label: str
    tensor: TensorField
    coefficient: Expr | None = None

    @property
    def unknown(self) -> bool:
        return self.coefficient is None


@dataclass(frozen=True, eq=False)
class RelationQuery:
    """``Σ lhs = Σ rhs`` where each side is a list of :class:`Term`.

    In verify mode every coefficient must be given.  In discover mode the
    unknown ones are solved for.
    """

    lhs: tuple
    rhs: tuple = ()
    mode: str = "discover"
    name: str = "relation"

    def __post_init__(self):
        terms = list(self.lhs) + list(self.rhs)
        if not terms:
            raise ValueError("empty relation")
        t0 = terms[0].tensor
        for t in terms:
            if t.tensor.order != t0.order or t.tensor.chart.coordinates != t0.chart.coordinates:
                raise ValueError(f"{t.label} does not match the order and chart of {terms[0].label}")
        if self.mode not in ("verify", "discover"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "verify" and any(t.unknown for t in terms):
            raise ValueError("verify mode needs every coefficient")

    def signed_terms(self):
        """Terms moved to one side: (label, tensor, coefficient, sign)."""
        return [(t.label, t.tensor, t.coefficient, 1) for t in self.lhs] + [
            (t.label, t.tensor, t.coefficient, -1) for t in self.rhs
        ]


def linear_combination(pairs, like: TensorField, name="combo") -> TensorField:
    """Σ c_i T_i for (c_i, T_i) pairs."""
    acc = {}
    for c, T in pairs:
        if c.is_zero():
            continue
        for idx, v in T.components.items():
            acc[idx] = acc.get(idx, ZERO) + c * v
    comps = {k: v for k, v in acc.items() if not v.is_zero()}
    return TensorField(like.chart, like.order, comps, (), name, like.variance)


@dataclass
class RelationSolution:
    name: str
    mode: str
    holds: bool
    labels: list
    unknown_labels: list
    particular: dict | None = None
    basis: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    counterexample: dict | None = None
    pointwise_nullity: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis) if self.holds else -1

    def coefficient(self, label: str) -> Expr:
        return self.particular[label]

    def to_dict(self) -> dict:
        out = {"name": self.name, "mode": self.mode, "holds": self.holds}
        if self.mode == "discover":
            out["unknowns"] = list(self.unknown_labels)
            if self.holds:
                out["particular"] = {k: str(v) for k, v in self.particular.items()}
                out["dimension"] = len(self.basis)
                out["basis"] = [{k: str(v) for k, v in b.items()} for b in self.basis]
            out["pointwise_nullity"] = list(self.pointwise_nullity)
        if self.certificates:
            out["certificates"] = [c.to_dict() for c in self.certificates]
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# -- symbolic linear algebra -------------------------------------------------

def _nonzero(e: Expr, chart, config) -> bool:
    if e.is_zero():
        return False
    if not e.has_kernels():
        return True
    return zero_test(e, chart, config).verdict is Verdict.PROVED_NONZERO


def rref(rows: list, chart, config: ZeroTestConfig = DEFAULT_CONFIG, ncols: int | None = None):
    """Reduced row echelon form over Expr.

    Returns ``(rows, pivots)`` where ``pivots[i]`` is the pivot column of row
    ``i``.  Entries the zero test declares zero are replaced by 0.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        best = None
        for i in range(r, len(rows)):
            e = rows[i][c]
            if not _nonzero(e, chart, config):
                rows[i][c] = ZERO
                continue
            if best is None or e.nterms() < rows[best][c].nterms():
                best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = rows[r][c].reciprocal()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f.is_zero():
                continue
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[: len(pivots)], pivots


def determinant(mat: list) -> Expr:
    """Laplace expansion with memoized minors (fine for n <= 6)."""
    n = len(mat)
    if n == 0:
        return ONE
    memo = {}

    def minor(rows, cols):
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            val = mat[rows[0]][cols[0]]
        else:
            val = ZERO
            for k, c in enumerate(cols):
                entry = mat[rows[0]][c]
                if entry.is_zero():
                    continue
                term = entry * minor(rows[1:], cols[:k] + cols[k + 1:])
                val = val + term if k % 2 == 0 else val - term
        memo[key] = val
        return val

    return minor(tuple(range(n)), tuple(range(n)))


@dataclass
class RankCertificate:
    rank: int
    minor_rows: tuple
    minor_cols: tuple
    minor_value: Expr
    checked_minors: int
    probable: bool = False

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "nonzero_minor": {
                "rows": list(self.minor_rows),
                "cols": list(self.minor_cols),
                "value": str(self.minor_value),
            },
            "vanishing_minors_checked": self.checked_minors,
            "probabilistic": self.probable,
        }


def certified_rank(mat: list, chart, config: ZeroTestConfig = DEFAULT_CONFIG) -> RankCertificate:
    """Rank of a square or rectangular Expr matrix.

    The certificate is a nonzero r-minor and a zero test of every
    (r+1)-minor.
    """
    m, n = len(mat), len(mat[0])
    r = 0
    best = ((), (), ONE)
    for size in range(min(m, n), 0, -1):
        found = None
        for rows in itertools.combinations(range(m), size):
            for cols in itertools.combinations(range(n), size):
                d = determinant([[mat[i][j] for j in cols] for i in rows])
                if _nonzero(d, chart, config):
                    found = (rows, cols, d)
                    break
            if found:
                break
        if found:
            r, best = size, found
            break
    probable = False
    checked = 0
    if r < min(m, n):
        for rows in itertools.combinations(range(m), r + 1):
            for cols in itertools.combinations(range(n), r + 1):
                d = determinant([[mat[i][j] for j in cols] for i in rows])
                cert = zero_test(d, chart, config)
                if not cert.is_zero:
                    raise AssertionError("inconsistent minor search")
                probable |= cert.verdict is Verdict.PROBABLY_ZERO
                checked += 1
    rows, cols, d = best
    return RankCertificate(r, tuple(i + 1 for i in rows), tuple(j + 1 for j in cols), d, checked, probable)


# -- numeric helpers -----------------------------------------------------------

def _atoms_of(exprs) -> set:
    out = set()
    for e in exprs:
        out |= e.free_atoms()
    return out


def _numeric_matrix(rows_exprs: list, chart, k: int, config: ZeroTestConfig):
    """Evaluate a matrix of Exprs at sample point ``k`` (retrying singular points)."""
    flat = [e for row in rows_exprs for e in row]
    atoms = _atoms_of(flat)
    exact = not any(e.has_kernels() for e in flat)
    for attempt in range(config.max_attempts):
        point = sample_assignment(atoms, chart, k, config, attempt)
        ev = PointEvaluator(point, config.precision, exact)
        try:
            return [[ev(e) for e in row] for row in rows_exprs], exact, point
        except (SingularPointError, DomainError):
            continue
    raise SingularPointError("no usable sample point for the linear system")


def _reduce(vec, basis, exact, tol):
    """Reduce ``vec`` against an echelon basis of (pivot, row) pairs."""
    v = list(vec)
    for p, b in basis:
        f = v[p]
        if f != 0:
            v = [x - f * y for x, y in zip(v, b)]
    scale = max((abs(x) for x in vec), default=0)
    for j, x in enumerate(v):
        if exact:
            if x != 0:
                return v, j
        elif abs(x) > tol * max(scale, 1):
            return v, j
    return v, None


def numeric_rank(mat: list, exact: bool, tol=mpmath.mpf("1e-25")) -> int:
    basis = []
    for row in mat:
        v, p = _reduce(row, basis, exact, tol)
        if p is not None:
            basis.append((p, [x / v[p] for x in v]))
    return len(basis)


def _select_rows(mat: list, exact: bool, tol=mpmath.mpf("1e-25")) -> list:
    """Indices of a maximal independent set of rows, greedy in order."""
    basis, chosen = [], []
    for i, row in enumerate(mat):
        v, p = _reduce(row, basis, exact, tol)
        if p is not None:
            basis.append((p, [x / v[p] for x in v]))
            chosen.append(i)
    return chosen


# -- the solver ---------------------------------------------------------------

def _verify(query: RelationQuery, config: ZeroTestConfig) -> RelationSolution:
    terms = query.signed_terms()
    like = terms[0][1]
    residual = linear_combination([(c * s, T) for _, T, c, s in terms], like, f"residual({query.name})")
    cert = zero_test_tensor(residual, config)
    labels = [t[0] for t in terms]
    if not cert.is_zero:
        return RelationSolution(query.name, "verify", False, labels, [], certificates=[cert],
                                counterexample=_counterexample(cert))
    certs = [cert]
    if cert.verdict is Verdict.PROBABLY_ZERO:
        fresh = zero_test_tensor(residual, config.fresh())
        certs.append(fresh)
        if not fresh.is_zero:
            return RelationSolution(query.name, "verify", False, labels, [], certificates=certs,
                                    counterexample=_counterexample(fresh))
    return RelationSolution(query.name, "verify", True, labels, [], certificates=certs)


def _counterexample(cert: TensorZeroCertificate) -> dict:
    return {
        "index": "".join(map(str, cert.index)),
        "component": str(cert.component),
        "witness": cert.certificate.to_dict(),
    }


def solve_relation(query: RelationQuery, config: ZeroTestConfig = DEFAULT_CONFIG, max_rounds: int = 6) -> RelationSolution:
    if query.mode == "verify":
        return _verify(query, config)
    terms = query.signed_terms()
    like = terms[0][1]
    chart = like.chart
    unknown = [(lab, T, s) for lab, T, c, s in terms if c is None]
    fixed = [(c * s, T) for lab, T, c, s in terms if c is not None]
    labels = [t[0] for t in terms]
    unknown_labels = [u[0] for u in unknown]
    b = linear_combination(fixed, like, "fixed") if fixed else None

    index_set = set()
    for _, T, _ in unknown:
        index_set |= set(T.components)
    if b is not None:
        index_set |= set(b.components)
    indices = sorted(index_set)

    def row(idx):
        r = [T[idx] * s for _, T, s in unknown]
        r.append(-b[idx] if b is not None else ZERO)
        return r

    all_rows = [row(idx) for idx in indices]
    nu = len(unknown)

    # numeric cross-check and row preselection
    pointwise = []
    selected: list = []
    if all_rows:
        for k in range(config.samples):
            mat, exact, _ = _numeric_matrix(all_rows, chart, k, config)
            rank_a = numeric_rank([r[:nu] for r in mat], exact)
            rank_ab = numeric_rank(mat, exact)
            pointwise.append({"nullity": nu - rank_a, "consistent": rank_a == rank_ab})
            if k == 0:
                selected = _select_rows(mat, exact)

    for _ in range(max_rounds):
        rows = [all_rows[i] for i in selected]
        if rows:
            red, pivots = rref(rows, chart, config, nu + 1)
        else:
            red, pivots = [], []
        if nu in pivots:
            r = pivots.index(nu)
            return RelationSolution(
                query.name, "discover", False, labels, unknown_labels,
                counterexample={
                    "reason": "inconsistent system",
                    "rows": ["".join(map(str, indices[i])) for i in selected],
                    "reduced_rhs": str(red[r][nu]),
                },
                pointwise_nullity=pointwise,
            )
        particular = {lab: ZERO for lab in unknown_labels}
        for r, p in enumerate(pivots):
            particular[unknown_labels[p]] = red[r][nu]
        free = [j for j in range(nu) if j not in pivots]
        basis = []
        for f in free:
            vec = {lab: ZERO for lab in unknown_labels}
            vec[unknown_labels[f]] = ONE
            for r, p in enumerate(pivots):
                vec[unknown_labels[p]] = -red[r][f]
            basis.append(vec)

        # substitute back into every component
        failing = None
        certs = []
        checks = [(particular, b)] + [(vec, None) for vec in basis]
        for vec, rhs in checks:
            pairs = [(vec[lab] * s, T) for lab, T, s in unknown]
            if rhs is not None:
                pairs.append((ONE, rhs))
            res = linear_combination(pairs, like, "residual")
            cert = zero_test_tensor(res, config)
            if not cert.is_zero:
                failing = cert.index
                break
            if cert.verdict is Verdict.PROBABLY_ZERO:
                cert = zero_test_tensor(res, config.fresh())
                if not cert.is_zero:
                    failing = cert.index
                    break
            certs.append(cert)
        if failing is None:
            return RelationSolution(
                query.name, "discover", True, labels, unknown_labels, particular, basis,
                certs, pointwise_nullity=pointwise,
            )
        i = indices.index(failing)
        if i in selected:
            raise RuntimeError(f"selected row {failing} fails after reduction")
        selected = sorted(selected + [i])
    raise RuntimeError(f"relation {query.name} did not stabilize")


def discover(lhs, rhs=(), name="relation", config: ZeroTestConfig = DEFAULT_CONFIG) -> RelationSolution:
    return solve_relation(RelationQuery(tuple(lhs), tuple(rhs), "discover", name), config)


def verify(lhs, rhs=(), name="relation", config: ZeroTestConfig = DEFAULT_CONFIG) -> RelationSolution:
    return solve_relation(RelationQuery(tuple(lhs), tuple(rhs), "verify", name), config)
