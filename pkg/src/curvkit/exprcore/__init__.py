"""Canonical rational-function expressions over symbols, jets and kernels."""
from .expr import (
    KERNELS,
    ONE,
    ZERO,
    Expr,
    Jet,
    Kernel,
    Symbol,
    const,
    cos,
    cosh,
    differentiate,
    exp,
    jet,
    kernel,
    simplify,
    sin,
    sinh,
    sqrt,
    substitute,
    sym,
)
from .numeric import (
    DEFAULT_CONFIG,
    DomainError,
    SingularPointError,
    Verdict,
    ZeroCertificate,
    ZeroTestConfig,
    eval_numeric,
    is_zero,
    zero_test,
)
from .parser import NonIntegerExponentError, ParseError, UnknownIdentifierError, parse_expr
from .symbols import SymbolTable

__all__ = [
    "KERNELS",
    "ONE",
    "ZERO",
    "Expr",
    "Jet",
    "Kernel",
    "Symbol",
    "const",
    "cos",
    "cosh",
    "differentiate",
    "exp",
    "jet",
    "kernel",
    "simplify",
    "sin",
    "sinh",
    "sqrt",
    "substitute",
    "sym",
    "DEFAULT_CONFIG",
    "DomainError",
    "SingularPointError",
    "Verdict",
    "ZeroCertificate",
    "ZeroTestConfig",
    "eval_numeric",
    "is_zero",
    "zero_test",
    "NonIntegerExponentError",
    "ParseError",
    "UnknownIdentifierError",
    "parse_expr",
    "SymbolTable",
]
