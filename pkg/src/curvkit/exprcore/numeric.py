"""Exact and high-precision evaluation, and the randomized zero test.

Kernel-free expressions are evaluated exactly with :class:`Fraction`.  Anything
containing a kernel call goes through ``mpmath`` at the requested number of
decimal digits plus a few guard digits.

Profile-function jets (``h``, ``h'``, ...) are sampled as independent
values.  That is sound for identities that must hold for *every* profile,
since the Taylor coefficients of a generic function at a point are free.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .expr import Expr, Jet, Kernel, atom_by_index

GUARD_DIGITS = 10


class SingularPointError(ZeroDivisionError):
    """Denominator vanishes at the requested point."""


class DomainError(ValueError):
    """A kernel was evaluated outside its real domain (sqrt of a negative)."""


def atom_name(atom) -> str:
    return str(atom) if isinstance(atom, Jet) else atom.name


def _as_value(v):
    """Rationals stay exact; mpmath reals pass through for approximate work."""
    if isinstance(v, (Fraction, mpmath.mpf)):
        return v
    return Fraction(v)


# -- evaluation ---------------------------------------------------------------

class _Evaluator:
    """Evaluates atoms and polynomials at one fixed assignment."""

    def __init__(self, assignment: dict, dps: int):
        self.assignment = {k: _as_value(v) for k, v in assignment.items()}
        self.dps = dps
        self.exact: dict = {}
        self.approx: dict = {}

    def base_value(self, atom) -> Fraction:
        name = atom_name(atom)
        try:
            return self.assignment[name]
        except KeyError:
            raise KeyError(f"no value assigned to {name!r}") from None

    def atom_exact(self, idx: int) -> Fraction:
        v = self.exact.get(idx)
        if v is None:
            v = self.base_value(atom_by_index(idx))
            if not isinstance(v, Fraction):
                raise TypeError("exact evaluation needs rational values")
            self.exact[idx] = v
        return v

    def atom_approx(self, idx: int):
        v = self.approx.get(idx)
        if v is not None:
            return v
        atom = atom_by_index(idx)
        if isinstance(atom, Kernel):
            u = self.expr_approx(atom.arg)
            if atom.fn == "sqrt":
                if u < 0:
                    raise DomainError(f"sqrt of negative value at {atom}")
                v = mpmath.sqrt(u)
            else:
                v = getattr(mpmath, atom.fn)(u)
        else:
            q = self.base_value(atom)
            v = mpmath.mpf(q.numerator) / q.denominator if isinstance(q, Fraction) else mpmath.mpf(q)
        self.approx[idx] = v
        return v

    def poly_exact(self, p: dict) -> Fraction:
        total = Fraction(0)
        for m, c in p.items():
            t = Fraction(c)
            for k, e in m:
                t *= self.atom_exact(k) ** e
            total += t
        return total

    def poly_terms(self, p: dict) -> list:
        out = []
        for m, c in p.items():
            t = mpmath.mpf(c)
            for k, e in m:
                t *= self.atom_approx(k) ** e
            out.append(t)
        return out

    def expr_approx(self, e: Expr):
        den = mpmath.fsum(self.poly_terms(e.den))
        if den == 0:
            raise SingularPointError(f"denominator of {e} vanishes")
        return mpmath.fsum(self.poly_terms(e.num)) / den


def eval_numeric(e: Expr, assignment: dict, precision: int = 50):
    """Value of ``e`` at ``assignment`` (name -> rational or ``mpmath.mpf``).

    Returns a :class:`Fraction` when ``e`` is kernel-free and every value is
    rational, otherwise an ``mpmath.mpf`` rounded to ``precision`` digits.
    """
    if not e.has_kernels() and not any(isinstance(v, mpmath.mpf) for v in assignment.values()):
        ev = _Evaluator(assignment, precision)
        den = ev.poly_exact(e.den)
        if den == 0:
            raise SingularPointError(f"denominator of {e} vanishes")
        return ev.poly_exact(e.num) / den
    with mpmath.workdps(precision + GUARD_DIGITS):
        value = _Evaluator(assignment, precision).expr_approx(e)
    with mpmath.workdps(precision):
        return +value


# -- zero testing -------------------------------------------------------------

class Verdict(str, enum.Enum):
    PROVED_ZERO = "ProvedZero"
    PROVED_NONZERO = "ProvedNonzero"
    PROBABLY_ZERO = "ProbablyZero"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ZeroTestConfig:
    samples: int = 8
    precision: int = 50
    tol: float = 1e-30
    seed: int = 0
    max_attempts: int = 40
    max_numerator: int = 10_000
    # sampled values lie in [-bound, bound]; keeps kernel magnitudes tame
    bound: int = 4
    singular_margin: float = 1e-2

    def fresh(self) -> "ZeroTestConfig":
        """Same settings, independent sample points."""
        return ZeroTestConfig(
            self.samples, self.precision, self.tol, self.seed + 7919, self.max_attempts,
            self.max_numerator, self.bound, self.singular_margin,
        )


DEFAULT_CONFIG = ZeroTestConfig()


@dataclass(frozen=True)
class ZeroCertificate:
    verdict: Verdict
    witness: dict | None = None
    value: str | None = None
    samples: int = 0
    precision: int = 0
    seed: int | None = None

    @property
    def is_zero(self) -> bool:
        return self.verdict is not Verdict.PROVED_NONZERO

    def __bool__(self):
        raise TypeError("use .is_zero to read a ZeroCertificate")

    def to_dict(self) -> dict:
        out = {"verdict": str(self.verdict)}
        if self.witness is not None:
            out["witness"] = {k: str(v) for k, v in sorted(self.witness.items())}
            out["value"] = self.value
        if self.verdict is Verdict.PROBABLY_ZERO:
            out["samples"] = self.samples
            out["precision"] = self.precision
            out["seed"] = self.seed
        return out


PROVED_ZERO = ZeroCertificate(Verdict.PROVED_ZERO)


def draw_value(seed: int, k: int, attempt: int, name: str, tags, config=DEFAULT_CONFIG) -> Fraction:
    """Deterministic rational sample for one symbol at one sample point."""
    rng = random.Random(f"{seed}|{k}|{attempt}|{name}")
    N = config.max_numerator
    while True:
        q = rng.randint(1, N)
        top = min(N, config.bound * q)
        p = rng.randint(1 if "positive" in tags else -top, top)
        v = Fraction(p, q)
        if ("nonzero" in tags or "positive" in tags) and abs(v) < Fraction(1, 100):
            continue
        return v


def _tags(atom, symbols) -> frozenset:
    if symbols is None:
        return frozenset()
    if isinstance(atom, Jet):
        return symbols.assumed(atom.name) if atom.order == 0 else frozenset()
    return symbols.assumed(atom.name)


def _free_base_atoms(e: Expr) -> list:
    return sorted(e.free_atoms(), key=lambda a: a.sort_key)


def sample_assignment(atoms, symbols, k: int, config=DEFAULT_CONFIG, attempt: int = 0) -> dict:
    """Values for the given base atoms (symbols and jets) at sample point ``k``."""
    return {
        atom_name(a): draw_value(config.seed, k, attempt, atom_name(a), _tags(a, symbols), config)
        for a in sorted(atoms, key=lambda a: a.sort_key)
    }


def sample_point(e: Expr, symbols, k: int, config=DEFAULT_CONFIG, attempt: int = 0) -> dict:
    return sample_assignment(_free_base_atoms(e), symbols, k, config, attempt)


class PointEvaluator:
    """Evaluates many expressions at one assignment, sharing atom values.

    ``exact`` selects Fraction arithmetic; it is only valid when none of the
    expressions contains a kernel.
    """

    def __init__(self, assignment: dict, precision: int = 50, exact: bool = True):
        self._ev = _Evaluator(assignment, precision)
        self.exact = exact
        self.precision = precision

    def __call__(self, e: Expr):
        ev = self._ev
        if self.exact:
            den = ev.poly_exact(e.den)
            if den == 0:
                raise SingularPointError(f"denominator of {e} vanishes")
            return ev.poly_exact(e.num) / den
        with mpmath.workdps(self.precision + GUARD_DIGITS):
            return ev.expr_approx(e)


def _relative_residual(ev: _Evaluator, p: dict):
    terms = ev.poly_terms(p)
    scale = mpmath.fsum(abs(t) for t in terms)
    value = mpmath.fsum(terms)
    if scale == 0:
        return value, mpmath.mpf(0)
    return value, abs(value) / scale


def _usable_point(e: Expr, symbols, k: int, config):
    """First non-singular sample point for index ``k`` with its evaluator."""
    fallback = None
    for attempt in range(config.max_attempts):
        point = sample_point(e, symbols, k, config, attempt)
        ev = _Evaluator(point, config.precision)
        try:
            if e.has_kernels():
                _, rel = _relative_residual(ev, e.den)
                if rel == 0:
                    continue
                if rel < config.singular_margin:
                    fallback = fallback or (point, ev)
                    continue
            else:
                if ev.poly_exact(e.den) == 0:
                    continue
            return point, ev
        except DomainError:
            continue
    if fallback is not None:
        return fallback
    raise SingularPointError(f"no usable sample point for {e} after {config.max_attempts} attempts")


def zero_test(e: Expr, symbols=None, config: ZeroTestConfig = DEFAULT_CONFIG) -> ZeroCertificate:
    """Decide whether ``e`` vanishes identically.

    The canonical form settles kernel-free input exactly.  With kernels
    present, ``e`` is evaluated at ``config.samples`` random rational points
    and declared nonzero if the numerator exceeds ``config.tol`` relative to
    the size of its terms at any of them.
    """
    if e.is_zero():
        return PROVED_ZERO
    if e.is_constant():
        return ZeroCertificate(Verdict.PROVED_NONZERO, {}, str(e.constant_value()))
    if not e.has_kernels():
        for k in range(config.samples * 4):
            point, ev = _usable_point(e, symbols, k, config)
            num = ev.poly_exact(e.num)
            if num != 0:
                value = num / ev.poly_exact(e.den)
                return ZeroCertificate(Verdict.PROVED_NONZERO, point, str(value))
        # a nonzero polynomial vanishing at 32 random points: unreachable in practice
        raise RuntimeError(f"failed to find a nonzero witness for {e}")
    tol = mpmath.mpf(config.tol)
    with mpmath.workdps(config.precision + GUARD_DIGITS):
        for k in range(config.samples):
            point, ev = _usable_point(e, symbols, k, config)
            _, rel = _relative_residual(ev, e.num)
            if rel > tol:
                value = ev.expr_approx(e)
                return ZeroCertificate(
                    Verdict.PROVED_NONZERO, point, mpmath.nstr(value, 20)
                )
    return ZeroCertificate(
        Verdict.PROBABLY_ZERO, None, None, config.samples, config.precision, config.seed
    )


def is_zero(e: Expr, symbols=None, config: ZeroTestConfig = DEFAULT_CONFIG) -> bool:
    return zero_test(e, symbols, config).is_zero
