"""Finite-dimensional connected graded-commutative algebras by structure constants."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import exact_linalg as la
from errors import (
    DegreeMismatch,
    DuplicateGenerator,
    NotAssociative,
    NotConnected,
    NotGradedCommutative,
    UnknownSymbol,
)
from gca_kernel import format_fraction

logger = logging.getLogger(__name__)

Key = Union[int, str]
Sparse = Tuple[Tuple[int, Fraction], ...]


def koszul(p: int, q: int) -> int:
    return -1 if (p * q) % 2 else 1


@dataclass(frozen=True)
class FDAlgebra:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    table: Tuple[Tuple[Sparse, ...], ...]
    representatives: Tuple[Any, ...] = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def unit(self) -> int:
        return self.degrees.index(0)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def index(self, key: Key) -> int:
        if isinstance(key, int):
            if not 0 <= key < self.dim:
                raise UnknownSymbol(str(key))
            return key
        try:
            return self.names.index(key)
        except ValueError:
            raise UnknownSymbol(key) from None

    def indices_in_degree(self, n: int) -> Tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degrees) if d == n)

    def present_degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.degrees)))

    def product(self, i: int, j: int) -> Dict[int, Fraction]:
        return dict(self.table[i][j])

    def basis_vector(self, key: Key, c: Fraction = Fraction(1)) -> la.Vector:
        return la.unit_vector(self.dim, self.index(key), c)

    def unit_vector(self) -> la.Vector:
        return self.basis_vector(self.unit)

    def multiply(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> la.Vector:
        acc = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in row[j]:
                    acc[k] += a * b * c
        return tuple(acc)

    def degrees_of(self, v: Sequence[Fraction]) -> set:
        return {self.degrees[i] for i, c in enumerate(v) if c}

    def is_homogeneous_of(self, v: Sequence[Fraction], n: int) -> bool:
        return all(self.degrees[i] == n for i, c in enumerate(v) if c)

    def format_vector(self, v: Sequence[Fraction]) -> str:
        pieces = []
        for i, c in enumerate(v):
            if not c:
                continue
            name = self.names[i]
            mag = abs(c)
            if i == self.unit:
                body = format_fraction(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{format_fraction(mag)} {name}"
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces) if pieces else "0"


def make_fd_algebra(
    basis: Sequence[Tuple[str, int]],
    mul: Mapping[Tuple[Key, Key], Mapping[Key, Any]],
    representatives: Tuple[Any, ...] = (),
) -> FDAlgebra:
    """Validated constructor.

    Products with the unit are implied. A product given for only one
    order of a pair is completed by graded commutativity.
    """
    names = tuple(n for n, _ in basis)
    degrees = tuple(int(d) for _, d in basis)
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateGenerator(n)
        seen.add(n)
    if any(d < 0 for d in degrees):
        raise NotConnected("negative degrees are not allowed")
    if degrees.count(0) != 1:
        raise NotConnected(f"degree 0 must be one-dimensional, found {degrees.count(0)}")
    bare = FDAlgebra(names, degrees, ())
    dim = len(names)
    unit = bare.unit

    dense: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for (a, b), out in mul.items():
        i, j = bare.index(a), bare.index(b)
        row: Dict[int, Fraction] = {}
        for k, c in out.items():
            c = Fraction(c)
            if c:
                row[bare.index(k)] = row.get(bare.index(k), Fraction(0)) + c
        row = {k: c for k, c in row.items() if c}
        for k in row:
            if degrees[k] != degrees[i] + degrees[j]:
                raise DegreeMismatch(
                    f"{names[i]}*{names[j]} has a term {names[k]} of the wrong degree",
                    expected=degrees[i] + degrees[j], found=degrees[k],
                )
        if unit in (i, j):
            other = j if i == unit else i
            if row != {other: Fraction(1)}:
                raise NotConnected(f"products with the unit are fixed ({names[i]}*{names[j]})")
            continue
        dense[(i, j)] = row

    for (i, j), row in list(dense.items()):
        flipped = {k: koszul(degrees[i], degrees[j]) * c for k, c in row.items()}
        if (j, i) in dense:
            if dense[(j, i)] != flipped:
                raise NotGradedCommutative(names[i], names[j])
        else:
            dense[(j, i)] = flipped
    for i in range(dim):
        if degrees[i] % 2 and dense.get((i, i)):
            raise NotGradedCommutative(names[i], names[i])
        dense[(unit, i)] = {i: Fraction(1)}
        dense[(i, unit)] = {i: Fraction(1)}

    table = tuple(
        tuple(tuple(sorted(dense.get((i, j), {}).items())) for j in range(dim)) for i in range(dim)
    )
    H = FDAlgebra(names, degrees, table, representatives)
    _check_associative(H)
    logger.debug("built algebra of dimension %d", dim)
    return H


def _check_associative(H: FDAlgebra) -> None:
    top = H.top_degree
    for i in range(H.dim):
        for j in range(H.dim):
            if H.degrees[i] + H.degrees[j] > top:
                continue
            ij = H.table[i][j]
            for k in range(H.dim):
                if H.degrees[i] + H.degrees[j] + H.degrees[k] > top:
                    continue
                left: Dict[int, Fraction] = {}
                for m, c in ij:
                    for l, e in H.table[m][k]:
                        left[l] = left.get(l, Fraction(0)) + c * e
                right: Dict[int, Fraction] = {}
                for m, c in H.table[j][k]:
                    for l, e in H.table[i][m]:
                        right[l] = right.get(l, Fraction(0)) + c * e
                if {a: b for a, b in left.items() if b} != {a: b for a, b in right.items() if b}:
                    raise NotAssociative(H.names[i], H.names[j], H.names[k])


@dataclass(frozen=True)
class Subspace:
    """Graded subspace: per-degree reduced echelon bases, concatenated by degree."""

    ambient: FDAlgebra
    basis: Tuple[la.Vector, ...]

    @classmethod
    def span(cls, H: FDAlgebra, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        by_degree: Dict[int, List[la.Vector]] = {}
        for v in vectors:
            degs = H.degrees_of(v)
            if not degs:
                continue
            if len(degs) > 1:
                raise DegreeMismatch("spanning vectors must be homogeneous", found=sorted(degs))
            by_degree.setdefault(degs.pop(), []).append(tuple(v))
        basis: List[la.Vector] = []
        for n in sorted(by_degree):
            basis.extend(la.rref(by_degree[n], H.dim)[0])
        return cls(H, tuple(basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def in_degree(self, n: int) -> Tuple[la.Vector, ...]:
        return tuple(v for v in self.basis if self.ambient.is_homogeneous_of(v, n))

    def contains(self, v: Sequence[Fraction]) -> bool:
        if la.is_zero(v):
            return True
        return la.rank(list(self.basis) + [tuple(v)], self.ambient.dim) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)


def graded_piece(H: FDAlgebra, n: int) -> Subspace:
    return Subspace.span(H, (H.basis_vector(i) for i in H.indices_in_degree(n)))


def char_subspace(H: FDAlgebra, k: int) -> Subspace:
    """H^4 + H^8 + ... up to the rank-k range, plus H^{2m} for even k = 2m."""
    if k < 2:
        raise DegreeMismatch("k must be at least 2", expected=2, found=k)
    m = k // 2
    if k % 2:
        degrees = [4 * i for i in range(1, m + 1)]
    else:
        degrees = [4 * i for i in range(1, m)] + [2 * m]
    wanted = set(degrees)
    return Subspace.span(H, (H.basis_vector(i) for i in range(H.dim) if H.degrees[i] in wanted))


def even_part(H: FDAlgebra) -> Subspace:
    return Subspace.span(H, (H.basis_vector(i) for i in range(H.dim) if H.degrees[i] % 2 == 0 and H.degrees[i] > 0))


def subalgebra_generated(H: FDAlgebra, S: Iterable[Sequence[Fraction]]) -> Subspace:
    current = Subspace.span(H, [H.unit_vector()] + [tuple(v) for v in S])
    while True:
        products = [H.multiply(u, v) for u in current.basis for v in current.basis]
        grown = Subspace.span(H, list(current.basis) + [p for p in products if not la.is_zero(p)])
        if grown.dim == current.dim:
            return current
        current = grown


def tensor_names(A: FDAlgebra, B: FDAlgebra) -> Tuple[str, ...]:
    names = []
    for i, a in enumerate(A.names):
        for j, b in enumerate(B.names):
            if i == A.unit and j == B.unit:
                names.append(a)
            elif j == B.unit:
                names.append(a)
            elif i == A.unit:
                names.append(b)
            else:
                names.append(f"{a}_{b}")
    if len(set(names)) == len(names):
        return tuple(names)
    return tuple(f"{a}_{b}" for a in A.names for b in B.names)


def tensor_index(A: FDAlgebra, B: FDAlgebra, i: int, j: int) -> int:
    return i * B.dim + j


def tensor(A: FDAlgebra, B: FDAlgebra) -> FDAlgebra:
    """A (x) B with (a x b)(a' x b') = (-1)^{|b||a'|} aa' x bb'."""
    names = tensor_names(A, B)
    degrees = [A.degrees[i] + B.degrees[j] for i in range(A.dim) for j in range(B.dim)]
    mul: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i in range(A.dim):
        for j in range(B.dim):
            for i2 in range(A.dim):
                left = A.table[i][i2]
                if not left:
                    continue
                for j2 in range(B.dim):
                    right = B.table[j][j2]
                    if not right:
                        continue
                    sign = koszul(B.degrees[j], A.degrees[i2])
                    out: Dict[int, Fraction] = {}
                    for k, c in left:
                        for l, e in right:
                            out[tensor_index(A, B, k, l)] = sign * c * e
                    if i == A.unit and j == B.unit or i2 == A.unit and j2 == B.unit:
                        continue
                    mul[(tensor_index(A, B, i, j), tensor_index(A, B, i2, j2))] = out
    return make_fd_algebra(list(zip(names, degrees)), mul)


def poincare_check(H: FDAlgebra, m: int) -> bool:
    """Poincare duality of formal dimension m with a nondegenerate pairing."""
    if any(d > m for d in H.degrees):
        return False
    top = H.indices_in_degree(m)
    if len(top) != 1:
        return False
    t = top[0]
    for i in range(m + 1):
        left = H.indices_in_degree(i)
        right = H.indices_in_degree(m - i)
        if len(left) != len(right):
            return False
        if not left:
            continue
        rows = [
            tuple(H.product(a, b).get(t, Fraction(0)) for b in right) for a in left
        ]
        if la.rank(rows, len(right)) != len(left):
            return False
    return True


def is_generated_in_degree(H: FDAlgebra, n: int) -> bool:
    gens = graded_piece(H, n).basis
    return subalgebra_generated(H, gens).dim == H.dim


def exterior_algebra(names: Sequence[str], degrees: Sequence[int]) -> FDAlgebra:
    """Free graded-commutative algebra on odd generators, as an FDAlgebra."""
    if any(d % 2 == 0 for d in degrees):
        raise DegreeMismatch("exterior generators must have odd degree")
    n = len(names)
    subsets: List[Tuple[int, ...]] = []
    for size in range(n + 1):
        subsets.extend(combinations(range(n), size))
    position = {s: i for i, s in enumerate(subsets)}
    label = ["1" if not s else "".join(names[k] for k in s) for s in subsets]
    degs = [sum(degrees[k] for k in s) for s in subsets]
    mul: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a in subsets:
        for b in subsets:
            if not a or not b or set(a) & set(b):
                continue
            inversions = sum(1 for x in a for y in b if x > y)
            mul[(position[a], position[b])] = {position[tuple(sorted(a + b))]: Fraction((-1) ** inversions)}
    return make_fd_algebra(list(zip(label, degs)), mul)
