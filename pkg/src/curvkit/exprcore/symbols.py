from __future__ import annotations

from dataclasses import dataclass, field

from .expr import Expr, jet, sym

ASSUMPTIONS = ("nonzero", "positive")


@dataclass(frozen=True)
class SymbolTable:
    """Names an expression may use, and what is assumed about them.

    ``coordinates`` are ordered; coordinate ``coordinates[i]`` is index
    ``i + 1``.  ``functions`` maps a profile-function name to the single
    coordinate it depends on (``{"h": "r"}``); its derivatives are written
    ``h'``, ``h''`` and so on.
    """

    coordinates: tuple[str, ...]
    parameters: tuple[str, ...] = ()
    functions: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(
            self, "assumptions", {k: frozenset(v) for k, v in self.assumptions.items()}
        )
        names = list(self.coordinates) + list(self.parameters) + list(self.functions)
        if len(set(names)) != len(names):
            raise ValueError(f"symbol names must be distinct: {names}")
        for fname, coord in self.functions.items():
            if coord not in self.coordinates:
                raise ValueError(f"function {fname!r} depends on unknown coordinate {coord!r}")
        for name, tags in self.assumptions.items():
            if name not in names:
                raise ValueError(f"assumption on unregistered symbol {name!r}")
            bad = set(tags) - set(ASSUMPTIONS)
            if bad:
                raise ValueError(f"unknown assumptions {sorted(bad)} for {name!r}")

    def __hash__(self):
        return hash((self.coordinates, self.parameters, tuple(sorted(self.functions.items()))))

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def names(self) -> set[str]:
        return set(self.coordinates) | set(self.parameters) | set(self.functions)

    def coord(self, name_or_index) -> Expr:
        if isinstance(name_or_index, int):
            return sym(self.coordinates[name_or_index - 1])
        if name_or_index not in self.coordinates:
            raise KeyError(name_or_index)
        return sym(name_or_index)

    def resolve(self, name: str, order: int = 0) -> Expr:
        if name in self.functions:
            return jet(name, self.functions[name], order)
        if order:
            raise KeyError(f"{name!r} is not a profile function and cannot carry primes")
        if name in self.coordinates or name in self.parameters:
            return sym(name)
        raise KeyError(name)

    def __getitem__(self, name: str) -> Expr:
        return self.resolve(name)

    def assumed(self, name: str) -> frozenset:
        return self.assumptions.get(name, frozenset())

    def extend(self, parameters=(), assumptions=None) -> "SymbolTable":
        """A copy with extra parameters (e.g. free coefficient symbols)."""
        merged = dict(self.assumptions)
        merged.update(assumptions or {})
        return SymbolTable(
            self.coordinates,
            self.parameters + tuple(p for p in parameters if p not in self.parameters),
            self.functions,
            merged,
        )

    def to_dict(self) -> dict:
        return {
            "coordinates": list(self.coordinates),
            "parameters": list(self.parameters),
            "functions": dict(self.functions),
            "assumptions": {k: sorted(v) for k, v in sorted(self.assumptions.items())},
        }
