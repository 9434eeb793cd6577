"""Canonical symbolic expressions.

An :class:`Expr` is a rational function ``num/den`` over *atoms*: named
symbols, derivative jets of profile functions (``h``, ``h'``, ``h''`` ...)
and kernel calls (``exp``, ``sinh``, ``cosh``, ``sin``, ``cos``, ``sqrt``)
applied to a canonical argument.  Numerator and denominator are integer
polynomials (see :mod:`.poly`) with gcd 1 and a denominator whose leading
coefficient is positive, so two expressions that agree as rational
functions of their atoms compare equal and print identically.

Kernel calls are opaque: ``cosh(u)^2 - sinh(u)^2`` stays as it is.  The
only kernel rewrites performed are evaluation at a zero argument,
``sqrt`` of rational constants, and ``sqrt(u)^2 -> u``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from . import poly as P

KERNELS = ("exp", "sinh", "cosh", "sin", "cos", "sqrt")


class Atom:
    __slots__ = ("idx", "sort_key", "__weakref__")


class Symbol(Atom):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self.sort_key = (0, name, 0)

    def __str__(self):
        return self.name


class Jet(Atom):
    """k-th derivative of a profile function of one coordinate."""

    __slots__ = ("name", "coord", "order")

    def __init__(self, name, coord, order):
        self.name, self.coord, self.order = name, coord, order
        self.sort_key = (1, name, order)

    def __str__(self):
        return self.name + "'" * self.order


class Kernel(Atom):
    __slots__ = ("fn", "arg")

    def __init__(self, fn, arg):
        self.fn, self.arg = fn, arg
        self.sort_key = (2, fn, str(arg))

    def __str__(self):
        return f"{self.fn}({self.arg})"


_ATOMS: list[Atom] = []
_INTERN: dict = {}
_SQRT_IDX: set[int] = set()


def _intern(key, factory) -> Atom:
    atom = _INTERN.get(key)
    if atom is None:
        atom = factory()
        atom.idx = len(_ATOMS)
        _ATOMS.append(atom)
        _INTERN[key] = atom
        if isinstance(atom, Kernel) and atom.fn == "sqrt":
            _SQRT_IDX.add(atom.idx)
    return atom


def atom_by_index(i: int) -> Atom:
    return _ATOMS[i]


def symbol_atom(name: str) -> Symbol:
    return _intern(("sym", name), lambda: Symbol(name))


def jet_atom(name: str, coord: str, order: int) -> Jet:
    return _intern(("jet", name, coord, order), lambda: Jet(name, coord, order))


def kernel_atom(fn: str, arg: "Expr") -> Kernel:
    return _intern(("ker", fn, arg), lambda: Kernel(fn, arg))


def _mono_key(m):
    keys = sorted(((_ATOMS[k].sort_key, e) for k, e in m), reverse=True)
    return (sum(e for _, e in m), keys)


def _lead(p):
    if len(p) == 1:
        return next(iter(p.items()))
    m = max(p, key=_mono_key)
    return m, p[m]


def _fix_sign(num, den):
    if _lead(den)[1] < 0:
        return P.neg(num), P.neg(den)
    return num, den


def _needs_sqrt_reduction(p) -> bool:
    if not _SQRT_IDX:
        return False
    for m in p:
        for k, e in m:
            if e >= 2 and k in _SQRT_IDX:
                return True
    return False


def _reduce_sqrt(p) -> "Expr":
    total = ZERO
    for m, c in p.items():
        keep = []
        factor = ONE
        for k, e in m:
            if k in _SQRT_IDX and e >= 2:
                factor = factor * (_ATOMS[k].arg ** (e // 2))
                if e % 2:
                    keep.append((k, 1))
            else:
                keep.append((k, e))
        total = total + Expr._raw({tuple(keep): c}, P.ONE) * factor
    return total


class Expr:
    """Immutable canonical rational function over atoms."""

    __slots__ = ("num", "den", "_hash", "_str")

    def __init__(self, value=0):
        if isinstance(value, Expr):
            num, den = value.num, value.den
        else:
            q = Fraction(value)
            num, den = P.const(q.numerator), P.const(q.denominator)
        self.num, self.den = num, den
        self._hash = None
        self._str = None

    @classmethod
    def _raw(cls, num, den):
        e = object.__new__(cls)
        e.num, e.den = num, den
        e._hash = None
        e._str = None
        return e

    @classmethod
    def _make(cls, num, den):
        """Normalize an arbitrary num/den pair (den nonzero)."""
        if not den:
            raise ZeroDivisionError("expression division by zero")
        if not num:
            return ZERO
        if _needs_sqrt_reduction(num) or _needs_sqrt_reduction(den):
            return _reduce_sqrt(num) / _reduce_sqrt(den)
        if P.is_const(den):
            d = den[P.ONE_MONO]
            g = gcd(P.content(num), d)
            if d < 0:
                g = -g
            return cls._raw(P.divide_term(num, g, ()), {(): d // g})
        _, num, den = P.cofactors(num, den)
        num, den = _fix_sign(num, den)
        return cls._raw(num, den)

    @classmethod
    def from_atom(cls, atom: Atom) -> "Expr":
        return cls._raw({((atom.idx, 1),): 1}, P.ONE)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return P.is_const(self.num) and P.is_const(self.den)

    def constant_value(self) -> Fraction | None:
        if not self.is_constant():
            return None
        if not self.num:
            return Fraction(0)
        return Fraction(self.num[()], self.den[()])

    def atoms(self) -> set[Atom]:
        return {_ATOMS[i] for i in P.atoms_of(self.num) | P.atoms_of(self.den)}

    def free_atoms(self) -> set[Atom]:
        """Symbols and jets, looking inside kernel arguments."""
        out = set()
        for a in self.atoms():
            if isinstance(a, Kernel):
                out |= a.arg.free_atoms()
            else:
                out.add(a)
        return out

    def has_kernels(self) -> bool:
        return any(isinstance(a, Kernel) for a in self.atoms())

    def nterms(self) -> int:
        return len(self.num) + len(self.den)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return Expr._make(P.add(self.num, other.num), self.den)
        _, d1, d2 = P.cofactors(self.den, other.den)
        num = P.add(P.mul(self.num, d2), P.mul(other.num, d1))
        return Expr._make(num, P.mul(self.den, d2))

    __radd__ = __add__

    def __neg__(self):
        return Expr._raw(P.neg(self.num), self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if P.is_const(self.den) and P.is_const(other.den) and (
            P.is_const(self.num) or P.is_const(other.num)
        ):
            return Expr._make(P.mul(self.num, other.num), P.mul(self.den, other.den))
        _, n1, d2 = P.cofactors(self.num, other.den)
        _, n2, d1 = P.cofactors(other.num, self.den)
        num, den = P.mul(n1, n2), P.mul(d1, d2)
        if _needs_sqrt_reduction(num) or _needs_sqrt_reduction(den):
            return Expr._make(num, den)
        num, den = _fix_sign(num, den)
        return Expr._raw(num, den)

    __rmul__ = __mul__

    def reciprocal(self):
        if not self.num:
            raise ZeroDivisionError("reciprocal of zero expression")
        num, den = _fix_sign(self.den, self.num)
        return Expr._raw(num, den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.reciprocal()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return self.reciprocal() ** (-k)
        if k == 0:
            return ONE
        if k == 1:
            return self
        return Expr._make(P.power(self.num, k), P.power(self.den, k))

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Expr):
            other = _coerce(other)
            if other is NotImplemented:
                return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __str__(self):
        if self._str is None:
            self._str = _format(self)
        return self._str

    def __repr__(self):
        return f"Expr({str(self)!r})"


def _coerce(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Expr(x)
    return NotImplemented


ZERO = Expr._raw({}, P.ONE)
ONE = Expr._raw(P.ONE, P.ONE)


def const(q) -> Expr:
    return Expr(q)


def sym(name: str) -> Expr:
    return Expr.from_atom(symbol_atom(name))


def jet(name: str, coord: str, order: int = 0) -> Expr:
    return Expr.from_atom(jet_atom(name, coord, order))


# -- kernels -----------------------------------------------------------------

def _sqrt_rational(q: Fraction) -> Expr:
    if q < 0:
        raise ValueError("sqrt of a negative constant")
    n = q.numerator * q.denominator
    outside, inside = 1, 1
    f = 2
    while f * f <= n and f < 10_000:
        while n % (f * f) == 0:
            n //= f * f
            outside *= f
        if n % f == 0:
            n //= f
            inside *= f
        f += 1
    r = isqrt(n)
    if r * r == n:
        outside *= r
    else:
        inside *= n
    coeff = Fraction(outside, q.denominator)
    if inside == 1:
        return Expr(coeff)
    return Expr(coeff) * Expr.from_atom(kernel_atom("sqrt", Expr(inside)))


def kernel(fn: str, arg) -> Expr:
    arg = _coerce(arg)
    if fn not in KERNELS:
        raise ValueError(f"unknown kernel {fn!r}")
    if arg.is_zero():
        return ONE if fn in ("exp", "cosh", "cos") else ZERO
    if fn == "sqrt":
        q = arg.constant_value()
        if q is not None:
            return _sqrt_rational(q)
    return Expr.from_atom(kernel_atom(fn, arg))


def exp(u):
    return kernel("exp", u)


def sinh(u):
    return kernel("sinh", u)


def cosh(u):
    return kernel("cosh", u)


def sin(u):
    return kernel("sin", u)


def cos(u):
    return kernel("cos", u)


def sqrt(u):
    return kernel("sqrt", u)


# -- differentiation ---------------------------------------------------------

_DATOM: dict = {}


def _atom_derivative(atom: Atom, v: str) -> Expr:
    key = (atom.idx, v)
    hit = _DATOM.get(key)
    if hit is not None:
        return hit
    if isinstance(atom, Symbol):
        d = ONE if atom.name == v else ZERO
    elif isinstance(atom, Jet):
        d = jet(atom.name, atom.coord, atom.order + 1) if atom.coord == v else ZERO
    else:
        du = differentiate(atom.arg, v)
        if du.is_zero():
            d = ZERO
        else:
            u = atom.arg
            inner = {
                "exp": lambda: exp(u),
                "sinh": lambda: cosh(u),
                "cosh": lambda: sinh(u),
                "sin": lambda: cos(u),
                "cos": lambda: -sin(u),
                "sqrt": lambda: sqrt(u).reciprocal() / 2,
            }[atom.fn]()
            d = inner * du
    _DATOM[key] = d
    return d


def _dpoly(p: dict, v: str) -> Expr:
    total = ZERO
    for i in sorted(P.atoms_of(p)):
        da = _atom_derivative(_ATOMS[i], v)
        if da.is_zero():
            continue
        total = total + Expr._make(P.partial(p, i), P.ONE) * da
    return total


def differentiate(e: Expr, v: str) -> Expr:
    """Derivative of ``e`` with respect to the coordinate named ``v``."""
    dn = _dpoly(e.num, v)
    dd = _dpoly(e.den, v)
    if dd.is_zero():
        if dn.is_zero():
            return ZERO
        return dn / Expr._raw(e.den, P.ONE)
    N = Expr._raw(e.num, P.ONE)
    D = Expr._raw(e.den, P.ONE)
    return (dn * D - N * dd) / (D * D)


def simplify(e: Expr) -> Expr:
    """Re-normalize from scratch; a no-op on canonical input."""
    return Expr._make(dict(e.num), dict(e.den))


# -- substitution ------------------------------------------------------------

def _eval_poly(p: dict, value_of) -> Expr:
    total = ZERO
    cache: dict = {}
    for m, c in p.items():
        term = Expr(c)
        for k, e in m:
            v = cache.get(k)
            if v is None:
                v = cache[k] = value_of(_ATOMS[k])
            term = term * (v ** e)
        total = total + term
    return total


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace symbols (and profile functions) by expressions.

    ``mapping`` maps a symbol name or profile-function name to an Expr.  A
    profile function ``h`` of coordinate ``r`` mapped to ``H`` replaces the
    jet ``h^(k)`` by the k-th r-derivative of ``H``.
    """
    mapping = {k: _coerce(v) for k, v in mapping.items()}

    def value_of(atom):
        if isinstance(atom, Symbol):
            return mapping.get(atom.name, Expr.from_atom(atom))
        if isinstance(atom, Jet):
            if atom.name not in mapping:
                return Expr.from_atom(atom)
            out = mapping[atom.name]
            for _ in range(atom.order):
                out = differentiate(out, atom.coord)
            return out
        return kernel(atom.fn, substitute(atom.arg, mapping))

    return _eval_poly(e.num, value_of) / _eval_poly(e.den, value_of)


# -- printing ----------------------------------------------------------------

def _fmt_mono(m) -> list[str]:
    parts = []
    for k, e in sorted(m, key=lambda ke: _ATOMS[ke[0]].sort_key):
        s = str(_ATOMS[k])
        parts.append(s if e == 1 else f"{s}^{e}")
    return parts


def _fmt_poly(p: dict, divisor: int = 1) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda mc: _mono_key(mc[0]), reverse=True)
    out = []
    for i, (m, c) in enumerate(terms):
        q = Fraction(c, divisor)
        sign = "-" if q < 0 else "+"
        q = abs(q)
        factors = _fmt_mono(m)
        if q != 1 or not factors:
            factors.insert(0, str(q))
        body = "*".join(factors)
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def _format(e: Expr) -> str:
    if P.is_const(e.den):
        return _fmt_poly(e.num, e.den[()])
    num = _fmt_poly(e.num)
    den = _fmt_poly(e.den)
    if len(e.num) > 1:
        num = f"({num})"
    if len(e.den) > 1 or (len(e.den) == 1 and ("*" in den or den.startswith("-"))):
        den = f"({den})"
    return f"{num}/{den}"
