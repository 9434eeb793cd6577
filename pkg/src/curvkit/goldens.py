"""Reference component tables for the Som-Raychaudhuri chart (t, φ, r, z).

Each entry is a chain ``c1 X_idx1 = c2 X_idx2 = ... = value`` meaning every
``c_k * X[idx_k]`` equals ``value``.  One representative per symmetry orbit
is listed; :func:`expand_table` fills the rest.  Derivative slots follow the
trailing-comma convention, so ``dR_12232`` is R_{1223,2}.  Derivation
tensors put the endomorphism arguments last: ``RR_132312`` is (R·R) with
(X1..X4) = (1,3,2,3) and (X, Y) = (1,2).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .exprcore import Expr, SymbolTable, parse_expr
from .tensorlab import RIEMANN, SYMMETRIC_PAIR, extend_symmetries, orbit

SOM_RAYCHAUDHURI_TABLES = {
    "R": [
        "R_1212 = -a^2*r^2",
        "R_1313 = -a^2",
        "R_1323 = -a^3*r^2",
        "R_2323 = -a^2*r^2*(a^2*r^2 + 3)",
    ],
    "S": [
        "S_11 = S_33 = -2*a^2",
        "S_12 = -2*a^3*r^2",
        "S_22 = -2*(a^4*r^4 + a^2*r^2)",
    ],
    "dR": [
        "dR_12232 = -4*a^3*r^3",
        "dR_13233 = -4*a^3*r",
        "dR_23233 = -8*a^4*r^3",
    ],
    "dS": [
        "dS_123 = -dS_132 = -4*a^3*r",
        "-1/2 dS_223 = dS_232 = 4*a^4*r^3",
    ],
    "C": [
        "C_1212 = -2/3*a^2*r^2",
        "-C_1313 = 1/2 C_1414 = C_3434 = 2*a^2/3",
        "C_2323 = -2/3*a^2*r^2*(a^2*r^2 + 2)",
        "-C_1323 = 1/2 C_1424 = 2/3*a^3*r^2",
        "C_2424 = 2/3*(2*a^4*r^4 + a^2*r^2)",
    ],
    "W": [
        "W_1212 = -7/6*a^2*r^2",
        "-1/7 W_1313 = -W_1414 = W_3434 = a^2/6",
        "W_2323 = -1/6*a^2*r^2*(7*a^2*r^2 + 17)",
        "1/7 W_1323 = W_1424 = -1/6*a^3*r^2",
        "W_2424 = -1/6*a^2*r^2*(a^2*r^2 - 1)",
    ],
    "K": [
        "K_1212 = -a^2*r^2",
        "-K_1313 = K_1414 = K_3434 = a^2",
        "-K_1323 = K_1424 = a^3*r^2",
        "K_2323 = -K_2424 = -a^2*r^2*(a^2*r^2 + 1)",
    ],
    "RR": [
        "-RR_122313 = RR_132312 = 4*a^4*r^2",
        "-2 RR_122323 = RR_232312 = 8*a^5*r^4",
    ],
    "RS": [
        "RS_1212 = 4*a^4*r^2",
        "RS_1313 = 4*a^4",
        "RS_2212 = 8*a^5*r^4",
        "RS_1323 = RS_2313 = 4*a^5*r^2",
        "RS_2323 = 4*a^6*r^4",
    ],
    "RC": [
        "-RC_122313 = RC_132312 = -RC_142412 = 2*a^4*r^2",
        "-2 RC_122323 = RC_232312 = -RC_242412 = 4*a^5*r^4",
        "-RC_143413 = 2*a^4",
        "-RC_143423 = -RC_243413 = 2*a^5*r^2",
        "-RC_243423 = 2*a^6*r^4",
    ],
    "CR": [
        "4 CR_121424 = -CR_122313 = 2 CR_122414 = CR_132312 = 8*a^4*r^2/3",
        "-2 CR_122323 = 3/8 CR_122424 = CR_232312 = 16*a^5*r^4/3",
        "2 CR_131434 = CR_133414 = 4*a^4/3",
        "CR_232434 = 2/3*a^4*r^2*(a^2*r^2 + 3)",
        "2 CR_132434 = CR_133424 = 2 CR_142334 = CR_233414 = 4*a^5*r^2/3",
        "CR_233424 = 4*a^6*r^4/3 - 2*a^4*r^2",
    ],
    "CS": [
        "3/8 CS_1212 = a^4*r^2",
        "3/8 CS_1313 = -3/8 CS_1414 = 3/4 CS_3434 = a^4",
        "3/8 CS_1323 = -3/8 CS_1424 = a^5*r^2",
        "3/8 CS_2323 = a^6*r^4",
        "-3/4 CS_2424 = a^4*r^2*(2*a^2*r^2 - 1)",
    ],
    "CC": [
        "3/4 CC_121424 = -3/4 CC_122313 = 3/4 CC_132312 = -3/4 CC_142412 = -3/4 CC_233424 = a^4*r^2",
        "-3/4 CC_122323 = 3/4 CC_122424 = 3/8 CC_232312 = -3/8 CC_242412 = a^5*r^4",
        "3/4 CC_132434 = 3/4 CC_142334 = -3/4 CC_143423 = -3/4 CC_243413 = a^5*r^2",
        "3/4 CC_131434 = -3/4 CC_143413 = a^4",
        "3/4 CC_232434 = a^4*r^2*(a^2*r^2 + 1)",
        "-3/4 CC_243423 = a^6*r^4",
    ],
    "QgR": [
        "-4 QgR_121424 = QgR_122313 = 4 QgR_122414 = -QgR_132312 = 4*a^2*r^2",
        "2 QgR_122323 = -QgR_232312 = 8*a^3*r^4",
        "-QgR_131434 = QgR_133414 = a^2",
        "-QgR_132434 = QgR_133424 = -QgR_142334 = QgR_233414 = a^3*r^2",
        "-QgR_232434 = QgR_233424 = a^2*r^2*(a^2*r^2 + 3)",
    ],
    "QSR": [
        "-QSR_122313 = QSR_132312 = 4*a^4*r^2",
        "-2 QSR_122323 = QSR_232312 = 8*a^5*r^4",
    ],
    "QgC": [
        "-QgC_121424 = QgC_122313 = -QgC_132312 = QgC_142412 = QgC_233424 = 2*a^2*r^2",
        "2 QgC_122323 = -2 QgC_122424 = -QgC_232312 = QgC_242412 = 4*a^3*r^4",
        "-QgC_232434 = 2*a^2*r^2*(a^2*r^2 + 1)",
        "QgC_243423 = 2*a^4*r^4",
        "-QgC_131434 = QgC_143413 = 2*a^2",
        "-QgC_132434 = -QgC_142334 = QgC_143423 = QgC_243413 = 2*a^3*r^2",
    ],
    "QSC": [
        "-1/2 QSC_121424 = -QSC_122313 = QSC_122414 = QSC_132312 = QSC_142412 = 4*a^4*r^2/3",
        "-2 QSC_122323 = -2 QSC_122424 = QSC_232312 = QSC_242412 = 8*a^5*r^4/3",
        "-1/2 QSC_131434 = QSC_133414 = QSC_143413 = 4*a^4/3",
        "-QSC_232434 = 4/3*a^4*r^2*(2*a^2*r^2 + 1)",
        "-1/2 QSC_132434 = QSC_133424 = -1/2 QSC_142334 = QSC_143423 = QSC_233414 = QSC_243413 = 4*a^5*r^2/3",
        "QSC_233424 = 4/3*a^4*r^2*(a^2*r^2 + 1)",
        "QSC_243423 = 4*a^6*r^4/3",
    ],
}

SCALAR_CURVATURE = "2*a^2"

_SKEW_LAST = {4: ((0, 1, 3, 2), -1), 6: ((0, 1, 2, 3, 5, 4), -1)}


def table_symmetries(name: str) -> tuple:
    """Index symmetries the listed representatives are expanded with."""
    if name in ("R", "C", "W", "K"):
        return RIEMANN
    if name == "S":
        return SYMMETRIC_PAIR
    if name == "dR":
        return extend_symmetries(RIEMANN, 1)
    if name == "dS":
        return extend_symmetries(SYMMETRIC_PAIR, 1)
    if name in ("RS", "CS"):
        return extend_symmetries(SYMMETRIC_PAIR, 2) + (_SKEW_LAST[4],)
    return extend_symmetries(RIEMANN, 2) + (_SKEW_LAST[6],)


_TERM = re.compile(r"^\s*(-)?\s*(\d+(?:/\d+)?)?\s*([A-Za-z]+)_(\d+)\s*$")


class TableConflict(ValueError):
    pass


def parse_chain(line: str, symbols: SymbolTable):
    """``"-1/2 dS_223 = dS_232 = 4*a^4*r^3"`` -> [(name, idx, Expr value)]."""
    *lhs, value = line.split("=")
    v = parse_expr(value, symbols)
    out = []
    for part in lhs:
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot read table term {part!r}")
        sign, coeff, name, digits = m.groups()
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign:
            c = -c
        out.append((name, tuple(int(d) for d in digits), v * Expr(1 / c)))
    return out


def expand_table(name: str, lines, symbols: SymbolTable) -> dict:
    """All nonzero components implied by the listed representatives."""
    gens = table_symmetries(name)
    comps = {}
    for line in lines:
        for tname, idx, value in parse_chain(line, symbols):
            if tname != name:
                raise ValueError(f"{tname} listed under {name}")
            members, forced_zero = orbit(idx, gens)
            if forced_zero:
                raise TableConflict(f"{name}_{''.join(map(str, idx))} is forced to vanish")
            for m, sign in members:
                v = value if sign == 1 else -value
                prev = comps.get(m)
                if prev is not None and prev != v:
                    raise TableConflict(f"{name}{m}: listed values disagree ({prev} vs {v})")
                comps[m] = v
    return {k: v for k, v in comps.items() if not v.is_zero()}
