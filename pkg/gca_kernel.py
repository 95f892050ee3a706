"""Free graded-commutative algebras over the rationals.

Elements are sparse maps from monomials (exponent tuples) to Fraction
coefficients. Odd generators have exponent 0 or 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from errors import DegreeMismatch, DuplicateGenerator, MixedAlgebras, UnknownSymbol

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise DegreeMismatch(f"generator {self.name} needs degree >= 1", expected=1, found=self.degree)

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


def monomial_sort_key(algebra: "FreeGCA", mono: Monomial) -> tuple:
    # graded, then exponents compared lexicographically, larger first
    return (algebra.monomial_degree(mono), tuple(-e for e in mono))


@dataclass(frozen=True)
class FreeGCA:
    generators: Tuple[Generator, ...]

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if g.name in seen:
                raise DuplicateGenerator(g.name)
            seen.add(g.name)

    @classmethod
    def of(cls, spec: Iterable[Tuple[str, int]]) -> "FreeGCA":
        return cls(tuple(Generator(n, d) for n, d in spec))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise UnknownSymbol(name)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_monomial(self, i: int) -> Monomial:
        return tuple(1 if k == i else 0 for k in range(len(self.generators)))

    def zero(self) -> "Element":
        return Element(self, ())

    def one(self) -> "Element":
        return Element.from_dict(self, {self.unit_monomial(): Fraction(1)})

    def gen(self, name: str) -> "Element":
        return Element.from_dict(self, {self.generator_monomial(self.index(name)): Fraction(1)})

    def monomial(self, mono: Monomial) -> "Element":
        return Element.from_dict(self, {mono: Fraction(1)})

    def element(self, terms: Mapping[Monomial, Scalar]) -> "Element":
        return Element.from_dict(self, terms)

    def basis_in_degree(self, n: int) -> Tuple[Monomial, ...]:
        return _basis_in_degree(self, n)

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for e, g in zip(mono, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def _basis_in_degree(algebra: FreeGCA, n: int) -> Tuple[Monomial, ...]:
    if n < 0:
        return ()
    gens = algebra.generators
    out: List[Monomial] = []

    def walk(i: int, remaining: int, acc: List[int]) -> None:
        if i == len(gens):
            if remaining == 0:
                out.append(tuple(acc))
            return
        g = gens[i]
        top = 1 if g.is_odd else remaining // g.degree
        for e in range(min(top, remaining // g.degree) + 1):
            acc.append(e)
            walk(i + 1, remaining - e * g.degree, acc)
            acc.pop()

    walk(0, n, [])
    out.sort(key=lambda m: monomial_sort_key(algebra, m))
    return tuple(out)


def multiply_monomials(algebra: FreeGCA, a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
    """Return (sign, product); product is None when an odd generator squares."""
    gens = algebra.generators
    sign = 1
    odd_in_a_after = 0
    # walk from the last generator so we know how many odd factors of a sit to the right
    for i in range(len(gens) - 1, -1, -1):
        if not gens[i].is_odd:
            continue
        if b[i] and a[i]:
            return 0, None
        if b[i] and odd_in_a_after % 2:
            sign = -sign
        if a[i]:
            odd_in_a_after += 1
    return sign, tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class Element:
    algebra: FreeGCA
    terms: Tuple[Tuple[Monomial, Fraction], ...] = field(default=())

    @classmethod
    def from_dict(cls, algebra: FreeGCA, terms: Mapping[Monomial, Scalar]) -> "Element":
        clean = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(mono) != len(algebra.generators):
                raise DegreeMismatch("monomial length does not match the algebra")
            for e, g in zip(mono, algebra.generators):
                if e < 0 or (g.is_odd and e > 1):
                    raise DegreeMismatch(f"bad exponent {e} for generator {g.name}")
            clean[mono] = c
        ordered = sorted(clean.items(), key=lambda kv: monomial_sort_key(algebra, kv[0]))
        return cls(algebra, tuple(ordered))

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {self.algebra.monomial_degree(m) for m, _ in self.terms}

    def homogeneous_degree(self) -> Optional[int]:
        """Degree if homogeneous, None for zero, DegreeMismatch otherwise."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeMismatch(f"{self} is not homogeneous", found=sorted(degs))
        return degs.pop()

    def is_homogeneous_of(self, n: int) -> bool:
        return all(self.algebra.monomial_degree(m) == n for m, _ in self.terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.as_dict().get(mono, Fraction(0))

    def component(self, n: int) -> "Element":
        return Element.from_dict(
            self.algebra, {m: c for m, c in self.terms if self.algebra.monomial_degree(m) == n}
        )

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra != self.algebra:
            raise MixedAlgebras()

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return Element.from_dict(self.algebra, acc)

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: Scalar) -> "Element":
        c = Fraction(c)
        if c == 0:
            return self.algebra.zero()
        return Element(self.algebra, tuple((m, c * v) for m, v in self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        acc: Dict[Monomial, Fraction] = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                sign, mono = multiply_monomials(self.algebra, ma, mb)
                if mono is None:
                    continue
                acc[mono] = acc.get(mono, Fraction(0)) + sign * ca * cb
        return Element.from_dict(self.algebra, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Element":
        result = self.algebra.one()
        for _ in range(k):
            result = result * self
        return result

    def __str__(self) -> str:
        return format_element(self)


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(x: Element) -> str:
    if x.is_zero():
        return "0"
    pieces = []
    for mono, c in x.terms:
        name = x.algebra.format_monomial(mono)
        mag = abs(c)
        if name == "1":
            body = format_fraction(mag)
        elif mag == 1:
            body = name
        else:
            body = f"{format_fraction(mag)} {name}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)


def monomial_factors(algebra: FreeGCA, mono: Monomial) -> List[int]:
    """Generator indices of a monomial written as an ordered product."""
    out = []
    for i, e in enumerate(mono):
        out.extend([i] * e)
    return out


def extend_derivation(algebra: FreeGCA, images: Mapping[str, Element], degree: int, x: Element) -> Element:
    """Apply the unique degree-`degree` derivation with the given generator images.

    Generators missing from `images` go to zero.
    """
    if x.algebra != algebra:
        raise MixedAlgebras()
    by_index = {}
    for name, img in images.items():
        if img.algebra != algebra:
            raise MixedAlgebras()
        if not img.is_zero():
            by_index[algebra.index(name)] = img
    gens = algebra.generators
    total = algebra.zero()
    for mono, c in x.terms:
        factors = monomial_factors(algebra, mono)
        prefix = algebra.one()
        prefix_degree = 0
        for pos, gi in enumerate(factors):
            img = by_index.get(gi)
            if img is not None:
                suffix = algebra.one()
                for gj in factors[pos + 1:]:
                    suffix = suffix * algebra.monomial(algebra.generator_monomial(gj))
                sign = -1 if (degree * prefix_degree) % 2 else 1
                total = total + (prefix * img * suffix).scale(sign * c)
            prefix = prefix * algebra.monomial(algebra.generator_monomial(gi))
            prefix_degree += gens[gi].degree
    return total


@dataclass(frozen=True)
class AlgebraMorphism:
    source: FreeGCA
    target: FreeGCA
    assignments: Tuple[Tuple[str, Element], ...]

    @classmethod
    def make(cls, source: FreeGCA, target: FreeGCA, assignments: Mapping[str, Element]) -> "AlgebraMorphism":
        """Validated constructor. Unassigned generators go to zero."""
        pairs = []
        for g in source.generators:
            img = assignments.get(g.name, target.zero())
            if img.algebra != target:
                raise MixedAlgebras(f"image of {g.name} is not in the target algebra")
            if not img.is_homogeneous_of(g.degree):
                raise DegreeMismatch(f"image of {g.name} must have degree {g.degree}", expected=g.degree, found=img)
            pairs.append((g.name, img))
        for name in assignments:
            source.index(name)
        return cls(source, target, tuple(pairs))

    @classmethod
    def identity(cls, algebra: FreeGCA) -> "AlgebraMorphism":
        return cls.make(algebra, algebra, {g.name: algebra.gen(g.name) for g in algebra.generators})

    def image(self, name: str) -> Element:
        return dict(self.assignments)[name]

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.source:
            raise MixedAlgebras()
        images = [img for _, img in self.assignments]
        total = self.target.zero()
        for mono, c in x.terms:
            term = self.target.one()
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = term * images[i]
            total = total + term.scale(c)
        return total


def apply_morphism(phi: AlgebraMorphism, x: Element) -> Element:
    return phi(x)
