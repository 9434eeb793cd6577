"""Sparse multivariate polynomials with integer coefficients.

A polynomial is a plain ``dict`` mapping a monomial to a nonzero ``int``.
A monomial is a tuple of ``(atom_index, exponent)`` pairs sorted by atom
index, with every exponent positive; the empty tuple is the unit monomial.
Atom indices are handed out by :mod:`curvkit.exprcore.expr`; this module
only ever sees integers.

Polynomials are treated as immutable once built.  Multivariate gcds fall
back to ``sympy``'s sparse ring arithmetic after the cheap cases (constants,
monomials, disjoint supports) have been peeled off.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

from sympy import ZZ
from sympy.polys.rings import ring

ONE_MONO: tuple = ()
ONE = {ONE_MONO: 1}
ZERO: dict = {}


def const(c: int) -> dict:
    return {ONE_MONO: c} if c else {}


def is_const(p: dict) -> bool:
    return not p or (len(p) == 1 and ONE_MONO in p)


def const_value(p: dict) -> int:
    return p.get(ONE_MONO, 0) if is_const(p) else None


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: tuple, b: tuple) -> tuple:
    """a / b, assuming b divides a."""
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        r = d[k] - e
        if r:
            d[k] = r
        else:
            del d[k]
    return tuple(sorted(d.items()))


def mono_gcd(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ONE_MONO
    db = dict(b)
    return tuple((k, min(e, db[k])) for k, e in a if k in db)


def add(p: dict, q: dict) -> dict:
    if len(p) < len(q):
        p, q = q, p
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def neg(p: dict) -> dict:
    return {m: -c for m, c in p.items()}


def sub(p: dict, q: dict) -> dict:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def scale(p: dict, c: int) -> dict:
    if not c:
        return {}
    if c == 1:
        return p
    return {m: c * v for m, v in p.items()}


def mul(p: dict, q: dict) -> dict:
    if not p or not q:
        return {}
    if len(p) < len(q):
        p, q = q, p
    if len(q) == 1:
        ((m2, c2),) = q.items()
        if not m2:
            return scale(p, c2)
        return {mono_mul(m1, m2): c1 * c2 for m1, c1 in p.items()}
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def power(p: dict, k: int) -> dict:
    if k < 0:
        raise ValueError("negative polynomial power")
    result = ONE
    base = p
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def content(p: dict) -> int:
    g = 0
    for c in p.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def monomial_content(p: dict) -> tuple:
    it = iter(p)
    m = next(it)
    for other in it:
        if not m:
            break
        m = mono_gcd(m, other)
    return m


def divide_term(p: dict, c: int, m: tuple) -> dict:
    """Exact division of p by the term c*m."""
    if c == 1 and not m:
        return p
    return {mono_div(k, m): v // c for k, v in p.items()}


def atoms_of(p: dict) -> set:
    out = set()
    for m in p:
        for k, _ in m:
            out.add(k)
    return out


def degree_in(p: dict, atom: int) -> int:
    best = 0
    for m in p:
        for k, e in m:
            if k == atom and e > best:
                best = e
    return best


def partial(p: dict, atom: int) -> dict:
    """Formal partial derivative with respect to one atom."""
    out: dict = {}
    for m, c in p.items():
        for i, (k, e) in enumerate(m):
            if k == atom:
                if e == 1:
                    nm = m[:i] + m[i + 1:]
                else:
                    nm = m[:i] + ((k, e - 1),) + m[i + 1:]
                out[nm] = out.get(nm, 0) + c * e
                break
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _ring(nvars: int):
    names = ",".join(f"x{i}" for i in range(nvars))
    return ring(names, ZZ)[0]


def _to_ring(p: dict, pos: dict, R, nvars: int):
    data = {}
    for m, c in p.items():
        ev = [0] * nvars
        for k, e in m:
            ev[pos[k]] = e
        data[tuple(ev)] = c
    return R.from_dict(data)


def _from_ring(elem, atoms: list) -> dict:
    out = {}
    for ev, c in elem.items():
        c = int(c)
        if c:
            out[tuple((atoms[i], e) for i, e in enumerate(ev) if e)] = c
    return out


def to_sympy(polys: list):
    """Convert polynomials into one shared sympy ring.

    Returns the ring, the sorted atom list and the converted elements.
    """
    atoms = sorted(set().union(*(atoms_of(p) for p in polys)))
    pos = {a: i for i, a in enumerate(atoms)}
    nvars = max(len(atoms), 1)
    R = _ring(nvars)
    return R, atoms, [_to_ring(p, pos, R, nvars) for p in polys]


def from_sympy(elem, atoms: list) -> dict:
    return _from_ring(elem, atoms)


def cofactors(p: dict, q: dict):
    """Return (g, p/g, q/g) with g = gcd(p, q) over the integers.

    Both arguments must be nonzero.
    """
    if len(p) == 1 or len(q) == 1:
        c = gcd(content(p), content(q))
        m = mono_gcd(monomial_content(p), monomial_content(q))
        return {m: c}, divide_term(p, c, m), divide_term(q, c, m)
    cp, cq = content(p), content(q)
    mp, mq = monomial_content(p), monomial_content(q)
    pp = divide_term(p, cp, mp)
    qq = divide_term(q, cq, mq)
    c = gcd(cp, cq)
    m = mono_gcd(mp, mq)
    if pp == qq:
        h, pr, qr = pp, ONE, ONE
    elif len(pp) == 1 or len(qq) == 1 or not (atoms_of(pp) & atoms_of(qq)):
        h, pr, qr = ONE, pp, qq
    else:
        R, atoms, (a, b) = to_sympy([pp, qq])
        hh, aa, bb = a.cofactors(b)
        h, pr, qr = (_from_ring(x, atoms) for x in (hh, aa, bb))
    g = mul(h, {m: c})
    pr = mul(pr, {mono_div(mp, m): cp // c})
    qr = mul(qr, {mono_div(mq, m): cq // c})
    return g, pr, qr
