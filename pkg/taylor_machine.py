"""Automorphisms of H (x) H*(T^d) fixing the torus factor, and their peeling
into derivation steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Mapping, Optional, Sequence, Tuple

import exact_linalg as la
from derivation_solver import Derivation, is_derivation, leibniz_failure
from errors import DegreeMismatch, MixedAlgebras, NonMultiplicative, NotDerivation, NotInvertible, NotNormalized
from fd_algebra import FDAlgebra, char_subspace, exterior_algebra, koszul, tensor, tensor_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorusBasis:
    """Monomials of H*(T^d) ordered by degree, then lexicographically."""

    d: int

    @property
    def monomials(self) -> Tuple[Tuple[int, ...], ...]:
        return _torus_monomials(self.d)

    @property
    def size(self) -> int:
        return 2 ** self.d

    def degree(self, i: int) -> int:
        return len(self.monomials[i])

    @property
    def algebra(self) -> FDAlgebra:
        return _torus_algebra(self.d)


def torus_basis(d: int) -> TorusBasis:
    if d < 1:
        raise DegreeMismatch(f"torus dimension must be at least 1, got {d}", expected=1, found=d)
    return TorusBasis(d)


@lru_cache(maxsize=None)
def _torus_monomials(d: int) -> Tuple[Tuple[int, ...], ...]:
    out: List[Tuple[int, ...]] = []
    for size in range(d + 1):
        out.extend(combinations(range(1, d + 1), size))
    return tuple(out)


@lru_cache(maxsize=None)
def _torus_algebra(d: int) -> FDAlgebra:
    return exterior_algebra([f"x{i}" for i in range(1, d + 1)], [1] * d)


@lru_cache(maxsize=None)
def product_algebra(H: FDAlgebra, d: int) -> FDAlgebra:
    return tensor(H, _torus_algebra(d))


@dataclass(frozen=True)
class ProductAutomorphism:
    base: FDAlgebra
    torus: TorusBasis
    values: Tuple[la.Vector, ...]

    @property
    def product(self) -> FDAlgebra:
        return product_algebra(self.base, self.torus.d)

    def apply(self, v: Sequence[Fraction]) -> la.Vector:
        """h(a x t) = h(a x 1) * (1 x t)."""
        P, H, T = self.product, self.base, self.torus.algebra
        acc = la.zero_vector(P.dim)
        for idx, c in enumerate(v):
            if not c:
                continue
            a, t = divmod(idx, T.dim)
            term = P.multiply(self.values[a], P.basis_vector(tensor_index(H, T, H.unit, t)))
            acc = la.add(acc, la.scale(c, term))
        return acc

    def on_base(self, key) -> la.Vector:
        return self.values[self.base.index(key)]


def lift(H: FDAlgebra, torus: TorusBasis, i: int) -> la.Vector:
    """b_i x 1 in the product algebra."""
    T = torus.algebra
    return la.unit_vector(H.dim * T.dim, tensor_index(H, T, i, T.unit))


def make_product_automorphism(H: FDAlgebra, torus: TorusBasis, values: Mapping) -> ProductAutomorphism:
    """Validated constructor; base elements missing from `values` map to themselves."""
    P = product_algebra(H, torus.d)
    full = [lift(H, torus, i) for i in range(H.dim)]
    for key, v in values.items():
        i = H.index(key)
        if not P.is_homogeneous_of(v, H.degrees[i]):
            raise DegreeMismatch(f"h({H.names[i]}) must have degree {H.degrees[i]}", expected=H.degrees[i])
        full[i] = tuple(Fraction(c) for c in v)
    h = ProductAutomorphism(H, torus, tuple(full))
    for i in range(H.dim):
        for j in range(H.dim):
            lhs = P.multiply(h.values[i], h.values[j])
            rhs = h.apply(P.multiply(lift(H, torus, i), lift(H, torus, j)))
            if lhs != rhs:
                raise NonMultiplicative(f"h({H.names[i]}*{H.names[j]}) != h({H.names[i]}) h({H.names[j]})")
    if _invert_per_degree(coefficient_map(h, 0)) is None:
        raise NotInvertible("the t_0 coefficient map is singular")
    return h


def identity(H: FDAlgebra, torus: TorusBasis) -> ProductAutomorphism:
    return ProductAutomorphism(H, torus, tuple(lift(H, torus, i) for i in range(H.dim)))


def compose(h2: ProductAutomorphism, h1: ProductAutomorphism) -> ProductAutomorphism:
    """h2 after h1."""
    if h1.base != h2.base or h1.torus != h2.torus:
        raise MixedAlgebras("automorphisms act on different products")
    return ProductAutomorphism(h1.base, h1.torus, tuple(h2.apply(v) for v in h1.values))


def partial_derivatives(h: ProductAutomorphism, a: Sequence[Fraction]) -> List[la.Vector]:
    """The d_i(a) with h(a x 1) = sum_i (1 x t_i)(d_i(a) x 1)."""
    H, T = h.base, h.torus.algebra
    image = h.apply(la.combine(a, [lift(H, h.torus, i) for i in range(H.dim)], h.product.dim))
    out = []
    for t in range(T.dim):
        part = [Fraction(0)] * H.dim
        for l in range(H.dim):
            c = image[tensor_index(H, T, l, t)]
            if c:
                part[l] = koszul(T.degrees[t], H.degrees[l]) * c
        out.append(tuple(part))
    return out


def coefficient_map(h: ProductAutomorphism, i: int) -> Derivation:
    """The linear map a -> d_i(a), of degree -|t_i| (not necessarily a derivation)."""
    H = h.base
    images = tuple(partial_derivatives(h, H.basis_vector(b))[i] for b in range(H.dim))
    return Derivation(H, -h.torus.degree(i), images)


def _from_partials(H: FDAlgebra, torus: TorusBasis, parts: Mapping[int, Derivation]) -> ProductAutomorphism:
    T = torus.algebra
    P = product_algebra(H, torus.d)
    values = []
    for b in range(H.dim):
        v = [Fraction(0)] * P.dim
        for t, D in parts.items():
            for l, c in enumerate(D.images[b]):
                if c:
                    v[tensor_index(H, T, l, t)] += koszul(T.degrees[t], H.degrees[l]) * c
        values.append(tuple(v))
    return ProductAutomorphism(H, torus, tuple(values))


def _identity_map(H: FDAlgebra) -> Derivation:
    return Derivation(H, 0, tuple(H.basis_vector(i) for i in range(H.dim)))


def derivation_automorphism(D: Derivation, torus: TorusBasis, i: int) -> ProductAutomorphism:
    """a x 1 -> a x 1 + (1 x t_i)(D(a) x 1); its inverse uses -D."""
    if not 1 <= i < torus.size:
        raise DegreeMismatch(f"torus index {i} out of range")
    if D.degree != -torus.degree(i):
        raise DegreeMismatch(f"derivation degree must be {-torus.degree(i)}", expected=-torus.degree(i),
                             found=D.degree)
    failure = leibniz_failure(D)
    if failure:
        raise NotDerivation(*failure)
    return _from_partials(D.ambient, torus, {0: _identity_map(D.ambient), i: D})


def _invert_per_degree(L: Derivation) -> Optional[Derivation]:
    H = L.ambient
    images = [la.zero_vector(H.dim) for _ in range(H.dim)]
    for n in H.present_degrees():
        idx = H.indices_in_degree(n)
        block = [[L.images[j][i] for i in idx] for j in idx]  # row j: image of b_j
        inv = la.inverse(block)
        if inv is None:
            return None
        for r, j in enumerate(idx):
            v = [Fraction(0)] * H.dim
            for c, i in enumerate(idx):
                v[i] = inv[r][c]
            images[j] = tuple(v)
    return Derivation(H, 0, tuple(images))


def precompose_base(h: ProductAutomorphism, g: Derivation) -> ProductAutomorphism:
    """h o (g x id) for a degree-0 linear map g of H."""
    H, P = h.base, h.product
    lifts = [lift(H, h.torus, i) for i in range(H.dim)]
    lifted = [la.combine(g.images[b], lifts, P.dim) for b in range(H.dim)]
    return ProductAutomorphism(h.base, h.torus, tuple(h.apply(v) for v in lifted))


@dataclass(frozen=True)
class PeelResult:
    steps: Tuple[Tuple[int, Derivation], ...]
    base_map: Optional[Derivation]
    normalized: ProductAutomorphism


def peel(h: ProductAutomorphism, normalize: bool = False) -> PeelResult:
    """Split h into derivation steps h = e(D_1, t_1) o ... o e(D_m, t_m).

    With `normalize`, a non-identity t_0 map g is first removed by
    precomposing with g^-1; then h = (steps) o (g x id).
    """
    H = h.base
    base_map = None
    current = h
    zero_map = coefficient_map(h, 0)
    if zero_map.images != _identity_map(H).images:
        if not normalize:
            raise NotNormalized()
        inverse = _invert_per_degree(zero_map)
        if inverse is None:
            raise NotInvertible("the t_0 coefficient map is singular")
        base_map = zero_map
        current = precompose_base(h, inverse)
    normalized = current
    steps = []
    for i in range(1, h.torus.size):
        C = coefficient_map(current, i)
        if not is_derivation(C):
            raise NonMultiplicative(f"coefficient map at t_{i} is not a derivation")
        steps.append((i, C))
        if not C.is_zero():
            current = compose(derivation_automorphism(-C, h.torus, i), current)
    if current.values != identity(H, h.torus).values:  # pragma: no cover - guaranteed for multiplicative h
        raise NonMultiplicative("peeling did not reach the identity")
    logger.debug("peeled %d nonzero steps", sum(1 for _, C in steps if not C.is_zero()))
    return PeelResult(tuple(steps), base_map, normalized)


def recompose(H: FDAlgebra, torus: TorusBasis, steps: Sequence[Tuple[int, Derivation]]) -> ProductAutomorphism:
    result = identity(H, torus)
    for i, D in steps:
        if not D.is_zero():
            result = compose(result, derivation_automorphism(D, torus, i))
    return result


def char_fixed(h: ProductAutomorphism, k: int) -> bool:
    """h maps Char(H, k) (x) 1 into itself."""
    H = h.base
    S = char_subspace(H, k)
    for v in S.basis:
        parts = partial_derivatives(h, v)
        if any(not la.is_zero(p) for p in parts[1:]):
            return False
        if not S.contains(parts[0]):
            return False
    return True
