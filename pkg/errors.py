"""Exception hierarchy shared by every rho module.

Each error keeps its witness data as attributes so callers (and the CLI
diagnostic report) can show exactly what failed.
"""

from __future__ import annotations

from typing import Any, Iterable


class RhoError(Exception):
    """Base class for every domain error raised by rho."""

    def details(self) -> dict[str, Any]:
        return {}


class MixedAlgebras(RhoError):
    def __init__(self, message: str = "operands belong to different algebras"):
        super().__init__(message)


class DegreeMismatch(RhoError):
    def __init__(self, message: str, expected: int | None = None, found: Any = None):
        super().__init__(message)
        self.expected = expected
        self.found = found

    def details(self) -> dict[str, Any]:
        return {"expected": self.expected, "found": None if self.found is None else str(self.found)}


class OutOfRange(RhoError):
    """A degree outside of the range a result was computed for."""


class NotCocycle(RhoError):
    def __init__(self, residue: Any):
        super().__init__(f"element is not a cocycle: d(z) = {residue}")
        self.residue = residue


class D2NotZero(RhoError):
    def __init__(self, generator: str, residue: Any):
        super().__init__(f"d(d({generator})) = {residue} is not zero")
        self.generator = generator
        self.residue = residue

    def details(self) -> dict[str, Any]:
        return {"generator": self.generator, "residue": str(self.residue)}


class TruncationUnsound(RhoError):
    def __init__(self, degree: int, betti: int, top: int):
        super().__init__(
            f"cannot truncate at {top}: betti number {betti} in degree {degree} is not zero"
        )
        self.degree = degree
        self.betti = betti
        self.top = top

    def details(self) -> dict[str, Any]:
        return {"degree": self.degree, "betti": self.betti, "top": self.top}


class NotCartanModel(RhoError):
    def __init__(self, message: str = "the cohomology was not computed from this Cartan model"):
        super().__init__(message)


class NotConnected(RhoError):
    pass


class NotAssociative(RhoError):
    def __init__(self, i: str, j: str, k: str):
        super().__init__(f"({i}*{j})*{k} != {i}*({j}*{k})")
        self.witness = (i, j, k)

    def details(self) -> dict[str, Any]:
        return {"witness": list(self.witness)}


class NotGradedCommutative(RhoError):
    def __init__(self, i: str, j: str):
        super().__init__(f"{i}*{j} and {j}*{i} violate graded commutativity")
        self.witness = (i, j)

    def details(self) -> dict[str, Any]:
        return {"witness": list(self.witness)}


class NotDerivation(RhoError):
    def __init__(self, i: str, j: str):
        super().__init__(f"Leibniz rule fails on the pair ({i}, {j})")
        self.witness = (i, j)

    def details(self) -> dict[str, Any]:
        return {"witness": list(self.witness)}


class NotChainDerivation(RhoError):
    def __init__(self, generator: str, residue: Any):
        super().__init__(f"[D, d]({generator}) = {residue} is not zero")
        self.generator = generator
        self.residue = residue


class NonMultiplicative(RhoError):
    pass


class NotNormalized(RhoError):
    def __init__(self, message: str = "the t_0 coefficient map is not the identity"):
        super().__init__(message)


class NotInvertible(RhoError):
    pass


class ModelMismatch(RhoError):
    pass


class ModelSyntaxError(RhoError):
    """Syntax error in a model description, with 1-based position."""

    def __init__(self, line: int, col: int, expected: Iterable[str], found: str = ""):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        self.found = found
        wanted = ", ".join(self.expected) or "end of input"
        got = f" but found {found!r}" if found else ""
        super().__init__(f"line {line}, column {col}: expected {wanted}{got}")

    def details(self) -> dict[str, Any]:
        return {"line": self.line, "col": self.col, "expected": list(self.expected), "found": self.found}


class DuplicateGenerator(RhoError):
    def __init__(self, name: str, line: int | None = None):
        where = f" (line {line})" if line else ""
        super().__init__(f"name {name!r} is declared twice{where}")
        self.name = name
        self.line = line


class UnknownSymbol(RhoError):
    def __init__(self, name: str, line: int | None = None, col: int | None = None):
        where = f" at line {line}, column {col}" if line else ""
        super().__init__(f"unknown symbol {name!r}{where}")
        self.name = name
        self.line = line
        self.col = col

    def details(self) -> dict[str, Any]:
        return {"symbol": self.name, "line": self.line, "col": self.col}


class UnknownCatalogEntry(RhoError):
    def __init__(self, name: str, available: Iterable[str]):
        self.name = name
        self.available = tuple(available)
        super().__init__(f"unknown catalog entry {name!r}; available: {', '.join(self.available)}")

    def details(self) -> dict[str, Any]:
        return {"available": list(self.available)}
