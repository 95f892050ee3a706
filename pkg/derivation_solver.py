"""Graded derivations of FD algebras and of DGAs, and the rigidity check."""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import exact_linalg as la
from cohomology_engine import (
    DGA,
    CohomologyResult,
    cohomology,
    cohomology_algebra,
    differential,
    map_degrees,
)
from errors import (
    DegreeMismatch,
    MixedAlgebras,
    ModelMismatch,
    NotChainDerivation,
    NotDerivation,
)
from fd_algebra import (
    FDAlgebra,
    Subspace,
    char_subspace,
    even_part,
    graded_piece,
    koszul,
    tensor_index,
)
from gca_kernel import Element, Monomial, extend_derivation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Derivation:
    """Linear map of degree `degree` on an FD algebra, stored as basis images.

    Construction does not check the Leibniz rule; see `is_derivation`.
    """

    ambient: FDAlgebra
    degree: int
    images: Tuple[la.Vector, ...]

    def apply(self, v: Sequence[Fraction]) -> la.Vector:
        return la.combine(v, self.images, self.ambient.dim)

    def on(self, key) -> la.Vector:
        return self.images[self.ambient.index(key)]

    def is_zero(self) -> bool:
        return all(la.is_zero(v) for v in self.images)

    def vanishes_on(self, S: Subspace) -> bool:
        return all(la.is_zero(self.apply(v)) for v in S.basis)

    def flat(self) -> la.Vector:
        return tuple(c for v in self.images for c in v)

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.ambient != self.ambient or other.degree != self.degree:
            raise MixedAlgebras("derivations live on different algebras or degrees")
        return Derivation(self.ambient, self.degree, tuple(la.add(a, b) for a, b in zip(self.images, other.images)))

    def scale(self, c: Fraction) -> "Derivation":
        return Derivation(self.ambient, self.degree, tuple(la.scale(Fraction(c), v) for v in self.images))

    def __neg__(self) -> "Derivation":
        return self.scale(Fraction(-1))

    def describe(self) -> Dict[str, str]:
        H = self.ambient
        return {H.names[i]: H.format_vector(v) for i, v in enumerate(self.images) if not la.is_zero(v)}


def make_derivation(H: FDAlgebra, degree: int, images: Mapping) -> Derivation:
    """Build from a sparse {basis key: vector} map, checking degrees and Leibniz."""
    full = [la.zero_vector(H.dim) for _ in range(H.dim)]
    for key, v in images.items():
        i = H.index(key)
        if not H.is_homogeneous_of(v, H.degrees[i] + degree):
            raise DegreeMismatch(f"image of {H.names[i]} has the wrong degree", expected=H.degrees[i] + degree)
        full[i] = tuple(Fraction(c) for c in v)
    D = Derivation(H, degree, tuple(full))
    failure = leibniz_failure(D)
    if failure:
        raise NotDerivation(*failure)
    return D


def leibniz_failure(D: Derivation) -> Optional[Tuple[str, str]]:
    H = D.ambient
    for i in range(H.dim):
        for j in range(H.dim):
            bi, bj = H.basis_vector(i), H.basis_vector(j)
            lhs = D.apply(H.multiply(bi, bj))
            rhs = la.add(
                H.multiply(D.images[i], bj),
                la.scale(Fraction(koszul(D.degree, H.degrees[i])), H.multiply(bi, D.images[j])),
            )
            if lhs != rhs:
                return H.names[i], H.names[j]
    return None


def is_derivation(D: Derivation) -> bool:
    if any(not D.ambient.is_homogeneous_of(v, D.ambient.degrees[i] + D.degree) for i, v in enumerate(D.images)):
        return False
    return leibniz_failure(D) is None


def _variables(H: FDAlgebra, n: int) -> List[Tuple[int, int]]:
    return [(i, k) for i in range(H.dim) for k in H.indices_in_degree(H.degrees[i] + n)]


def _from_solution(H: FDAlgebra, n: int, variables, vec) -> Derivation:
    images = [[Fraction(0)] * H.dim for _ in range(H.dim)]
    for (i, k), c in zip(variables, vec):
        images[i][k] = c
    return Derivation(H, n, tuple(tuple(v) for v in images))


def leibniz_constraints(H: FDAlgebra, n: int, variables: Sequence[Tuple[int, int]]) -> List[la.Vector]:
    """Rows of D(b_i b_j) - D(b_i) b_j - (-1)^{n|b_i|} b_i D(b_j) = 0 in the unknowns."""
    position = {v: p for p, v in enumerate(variables)}
    rows = set()
    for i in range(H.dim):
        for j in range(H.dim):
            target = H.degrees[i] + H.degrees[j] + n
            outputs = H.indices_in_degree(target)
            if not outputs:
                continue
            sign = koszul(n, H.degrees[i])
            for l in outputs:
                row: Dict[int, Fraction] = {}
                for m, c in H.table[i][j]:
                    p = position.get((m, l))
                    if p is not None:
                        row[p] = row.get(p, Fraction(0)) + c
                for k in H.indices_in_degree(H.degrees[i] + n):
                    c = H.product(k, j).get(l)
                    if c:
                        p = position[(i, k)]
                        row[p] = row.get(p, Fraction(0)) - c
                for k in H.indices_in_degree(H.degrees[j] + n):
                    c = H.product(i, k).get(l)
                    if c:
                        p = position[(j, k)]
                        row[p] = row.get(p, Fraction(0)) - sign * c
                row = {p: c for p, c in row.items() if c}
                if row:
                    rows.add(tuple(row.get(p, Fraction(0)) for p in range(len(variables))))
    return sorted(rows)


def derivation_space(H: FDAlgebra, n: int) -> Tuple[Derivation, ...]:
    """Echelon basis of Der_n(H)."""
    variables = _variables(H, n)
    if not variables:
        return ()
    rows = leibniz_constraints(H, n, variables)
    basis = tuple(_from_solution(H, n, variables, v) for v in la.nullspace(rows, len(variables)))
    for D in basis:
        failure = leibniz_failure(D)
        if failure:  # pragma: no cover - the constraints encode Leibniz exactly
            raise NotDerivation(*failure)
    logger.debug("Der_%d: %d unknowns, %d constraints, dim %d", n, len(variables), len(rows), len(basis))
    return basis


def echelon_derivations(H: FDAlgebra, n: int, derivations: Sequence[Derivation]) -> Tuple[Derivation, ...]:
    flat, _ = la.rref([D.flat() for D in derivations], H.dim * H.dim)
    return tuple(
        Derivation(H, n, tuple(tuple(v[i * H.dim:(i + 1) * H.dim]) for i in range(H.dim))) for v in flat
    )


@dataclass(frozen=True)
class RestrictedDerivation:
    """Derivation from a subalgebra B into the ambient algebra, as images of B's basis."""

    domain: Subspace
    degree: int
    images: Tuple[la.Vector, ...]

    def apply(self, v: Sequence[Fraction]) -> la.Vector:
        coeffs = la.solve_in_span(self.domain.basis, v)
        if coeffs is None:
            raise DegreeMismatch("vector is outside the subalgebra")
        return la.combine(coeffs, self.images, self.domain.ambient.dim)


def restricted_derivation_space(H: FDAlgebra, B: Subspace, n: int) -> Tuple[RestrictedDerivation, ...]:
    """Der_n(B, H): maps B -> H of degree n obeying Leibniz on B."""
    basis = B.basis
    degs = [H.degrees_of(v).pop() for v in basis]
    variables = [(i, k) for i in range(len(basis)) for k in H.indices_in_degree(degs[i] + n)]
    if not variables:
        return ()
    position = {v: p for p, v in enumerate(variables)}
    rows = set()
    for a in range(len(basis)):
        for b in range(len(basis)):
            prod = H.multiply(basis[a], basis[b])
            coeffs = la.solve_in_span(basis, prod)
            if coeffs is None:
                raise DegreeMismatch("subspace is not closed under multiplication")
            sign = koszul(n, degs[a])
            for l in H.indices_in_degree(degs[a] + degs[b] + n):
                row: Dict[int, Fraction] = {}
                for m, c in enumerate(coeffs):
                    if c and (m, l) in position:
                        row[position[(m, l)]] = row.get(position[(m, l)], Fraction(0)) + c
                for k in H.indices_in_degree(degs[a] + n):
                    c = H.multiply(H.basis_vector(k), basis[b])[l]
                    if c:
                        row[position[(a, k)]] = row.get(position[(a, k)], Fraction(0)) - c
                for k in H.indices_in_degree(degs[b] + n):
                    c = H.multiply(basis[a], H.basis_vector(k))[l]
                    if c:
                        row[position[(b, k)]] = row.get(position[(b, k)], Fraction(0)) - sign * c
                row = {p: c for p, c in row.items() if c}
                if row:
                    rows.add(tuple(row.get(p, Fraction(0)) for p in range(len(variables))))
    out = []
    for vec in la.nullspace(sorted(rows), len(variables)):
        images = [[Fraction(0)] * H.dim for _ in basis]
        for (i, k), c in zip(variables, vec):
            images[i][k] = c
        out.append(RestrictedDerivation(B, n, tuple(tuple(v) for v in images)))
    return tuple(out)


def negative_derivations_vanish_on(H: FDAlgebra, S: Subspace) -> bool:
    for n in range(-H.top_degree, 0):
        for D in derivation_space(H, n):
            if not D.vanishes_on(S):
                return False
    return True


def is_class_h(H: FDAlgebra) -> bool:
    """No nonzero derivations of negative degree."""
    return all(not derivation_space(H, n) for n in range(-H.top_degree, 0))


def separating_derivations(space: Sequence[Derivation], kill: Sequence[Sequence[Fraction]],
                           hit: Sequence[Fraction]) -> Tuple[Derivation, ...]:
    """Combinations of `space` that vanish on `kill` but not on `hit`."""
    if not space:
        return ()
    H = space[0].ambient
    columns = [tuple(c for v in kill for c in D.apply(v)) for D in space]
    nrows = len(kill) * H.dim
    combos = la.nullspace(la.transpose(columns, nrows), len(space)) if nrows else [
        la.unit_vector(len(space), i) for i in range(len(space))
    ]
    out = []
    for coeffs in combos:
        D = space[0].scale(Fraction(0))
        for c, E in zip(coeffs, space):
            if c:
                D = D + E.scale(c)
        if not la.is_zero(D.apply(hit)):
            out.append(D)
    return tuple(out)


# chain derivations of a DGA


@dataclass(frozen=True)
class ChainDerivation:
    ambient: DGA
    degree: int
    images: Tuple[Tuple[str, Element], ...]

    def image(self, name: str) -> Element:
        return dict(self.images).get(name, self.ambient.algebra.zero())

    def apply(self, x: Element) -> Element:
        return extend_derivation(self.ambient.algebra, dict(self.images), self.degree, x)

    def commutator_residue(self, name: str) -> Element:
        """D(dg) - (-1)^n d(Dg)."""
        M = self.ambient
        sign = koszul(self.degree, 1)
        return self.apply(M.image(name)) - differential(M, self.image(name)).scale(sign)

    def is_zero(self) -> bool:
        return all(img.is_zero() for _, img in self.images)

    def describe(self) -> Dict[str, str]:
        return {name: str(img) for name, img in self.images if not img.is_zero()}


def make_chain_derivation(M: DGA, degree: int, images: Mapping[str, Element]) -> ChainDerivation:
    A = M.algebra
    pairs = []
    for name in images:
        A.index(name)
    for g in A.generators:
        img = images.get(g.name, A.zero())
        if img.algebra != A:
            raise MixedAlgebras()
        if not img.is_homogeneous_of(g.degree + degree):
            raise DegreeMismatch(f"D({g.name}) must have degree {g.degree + degree}", found=img)
        pairs.append((g.name, img))
    D = ChainDerivation(M, degree, tuple(pairs))
    for g in A.generators:
        residue = D.commutator_residue(g.name)
        if not residue.is_zero():
            raise NotChainDerivation(g.name, residue)
    return D


def chain_derivation_space(M: DGA, n: int) -> Tuple[ChainDerivation, ...]:
    """Basis of the degree-n derivations of the free algebra commuting with d."""
    A = M.algebra
    variables: List[Tuple[str, Monomial]] = [
        (g.name, mono) for g in A.generators for mono in A.basis_in_degree(g.degree + n)
    ]
    if not variables:
        return ()
    sign = koszul(n, 1)
    row_keys: Dict[Tuple[str, Monomial], int] = {}
    columns: List[Dict[int, Fraction]] = []
    for name, mono in variables:
        single = {name: A.monomial(mono)}
        col: Dict[int, Fraction] = {}
        for g in A.generators:
            expr = extend_derivation(A, single, n, M.image(g.name))
            if g.name == name:
                expr = expr - differential(M, A.monomial(mono)).scale(sign)
            for m, c in expr.terms:
                key = (g.name, m)
                if key not in row_keys:
                    row_keys[key] = len(row_keys)
                col[row_keys[key]] = c
        columns.append(col)
    rows = [
        tuple(col.get(r, Fraction(0)) for col in columns) for r in range(len(row_keys))
    ]
    out = []
    for vec in la.nullspace(rows, len(variables)):
        images: Dict[str, Element] = {}
        for (name, mono), c in zip(variables, vec):
            if c:
                images[name] = images.get(name, A.zero()) + A.monomial(mono).scale(c)
        out.append(ChainDerivation(M, n, tuple((g.name, images.get(g.name, A.zero())) for g in A.generators)))
    logger.debug("chain derivations of degree %d: %d unknowns, dim %d", n, len(variables), len(out))
    return tuple(out)


def induced_on_cohomology(M: DGA, D: ChainDerivation, res: CohomologyResult, top: int,
                          ring: Optional[FDAlgebra] = None) -> Derivation:
    if D.ambient != M:
        raise MixedAlgebras("derivation belongs to another DGA")
    for g in M.algebra.generators:
        residue = D.commutator_residue(g.name)
        if not residue.is_zero():
            raise NotChainDerivation(g.name, residue)
    if ring is None:
        ring = cohomology_algebra(M, res, top)
    offsets: Dict[int, int] = {}
    for i, d in enumerate(ring.degrees):
        offsets.setdefault(d, i)
    images = []
    for i, rep in enumerate(ring.representatives):
        target = ring.degrees[i] + D.degree
        v = [Fraction(0)] * ring.dim
        if 0 <= target <= top and ring.indices_in_degree(target):
            coords = res.reduce_in(D.apply(rep), target)
            for k, c in enumerate(coords):
                v[offsets[target] + k] = c
        images.append(tuple(v))
    return Derivation(ring, D.degree, tuple(images))


def induced_image(M: DGA, res: CohomologyResult, top: int, degrees: Sequence[int],
                  ring: Optional[FDAlgebra] = None) -> Dict[int, Tuple[Derivation, ...]]:
    """Echelon basis of the image of chain derivations in Der(H), per degree."""
    if ring is None:
        ring = cohomology_algebra(M, res, top)
    degrees = list(degrees)

    def solve(n: int) -> Tuple[Derivation, ...]:
        induced = [induced_on_cohomology(M, D, res, top, ring) for D in chain_derivation_space(M, n)]
        return echelon_derivations(ring, n, induced)

    return dict(zip(degrees, map_degrees(solve, degrees)))


@dataclass(frozen=True)
class CoefficientMap:
    """D_i in D(1 x b) = sum_i a_i x D_i(b), with whether it obeys Leibniz on B."""

    basis_name: str
    derivation: Derivation
    valid: bool


def decompose_restriction(A: FDAlgebra, B: FDAlgebra, D: Derivation) -> List[CoefficientMap]:
    """Coefficient maps of D restricted to 1 x B, one per A-basis element."""
    T = D.ambient
    if T.dim != A.dim * B.dim:
        raise MixedAlgebras("derivation does not live on A (x) B")
    parts = []
    for i in range(A.dim):
        images = []
        for j in range(B.dim):
            full = D.images[tensor_index(A, B, A.unit, j)]
            images.append(tuple(full[tensor_index(A, B, i, l)] for l in range(B.dim)))
        part = Derivation(B, D.degree - A.degrees[i], tuple(images))
        parts.append(CoefficientMap(A.names[i], part, is_derivation(part)))
    return parts


def tensor_derivation(A: FDAlgebra, B: FDAlgebra, T: FDAlgebra, a: int, D: Derivation) -> Derivation:
    """The derivation (a x 1) * (1 x D) of T = A (x) B."""
    if D.ambient != B:
        raise MixedAlgebras()
    degree = A.degrees[a] + D.degree
    images = []
    for i in range(A.dim):
        for j in range(B.dim):
            v = [Fraction(0)] * T.dim
            sign = koszul(D.degree, A.degrees[i])
            for k, c in A.table[a][i]:
                for l, e in enumerate(D.images[j]):
                    if e:
                        v[tensor_index(A, B, k, l)] += sign * c * e
            images.append(tuple(v))
    return Derivation(T, degree, tuple(images))


# rigidity


@dataclass(frozen=True)
class Witness:
    derivation: Derivation
    element: la.Vector
    image: la.Vector

    def validate(self) -> bool:
        return is_derivation(self.derivation) and self.derivation.apply(self.element) == self.image \
            and not la.is_zero(self.image)


@dataclass(frozen=True)
class RigidityReport:
    verdict: str
    mode: str
    k: int
    dim_t: int
    degrees: Tuple[int, ...]
    dims: Tuple[Tuple[int, int], ...]
    witnesses: Tuple[Witness, ...]
    target_dim: int
    formal_dimension: int
    converse_holds: bool
    target: str = "char"


def converse_hypothesis(H: FDAlgebra, k: int, dim_t: int) -> bool:
    formal = H.top_degree
    if 2 * k >= formal + dim_t + 3:
        return True
    char = char_subspace(H, k)
    return all(char.contains_subspace(graded_piece(H, n)) for n in range(4, formal + 1, 4))


def _same_ring(H: FDAlgebra, ring: FDAlgebra) -> bool:
    return H.degrees == ring.degrees and H.table == ring.table


def rigidity_report(H: FDAlgebra, dim_t: int, k: int, mode: str = "cohomology",
                    model: Optional[DGA] = None, all_negative: bool = False,
                    target: str = "char") -> RigidityReport:
    """Look for derivations of degree -1..-dim_t that fail to kill Char(H, k)."""
    if mode not in ("cohomology", "model"):
        raise ModelMismatch(f"unknown mode {mode!r}")
    formal = H.top_degree
    lowest = -formal if all_negative or target == "even" else -dim_t
    degrees = tuple(range(lowest, 0))
    S = even_part(H) if target == "even" else char_subspace(H, k)

    if mode == "model":
        if model is None:
            raise ModelMismatch("model mode needs a DGA")
        res = cohomology(model, formal)
        ring = cohomology_algebra(model, res, formal)
        if not _same_ring(H, ring):
            raise ModelMismatch("the model's cohomology ring differs from the given algebra")
        induced = induced_image(model, res, formal, degrees, ring)
        spaces = {
            n: tuple(Derivation(H, n, D.images) for D in induced[n]) for n in degrees
        }
    else:
        spaces = dict(zip(degrees, map_degrees(functools.partial(derivation_space, H), degrees)))

    witnesses = []
    for n in degrees:
        for D in spaces[n]:
            hit = next((v for v in S.basis if not la.is_zero(D.apply(v))), None)
            if hit is not None:
                witnesses.append(Witness(D, hit, D.apply(hit)))
                break
    converse = converse_hypothesis(H, k, dim_t)
    if not witnesses:
        verdict = "rigid"
    elif mode == "model" and converse and target == "char":
        verdict = "not_rigid"
    else:
        verdict = "indeterminate"
    logger.info("rigidity (%s, dimT=%d, k=%d): %s with %d witnesses", mode, dim_t, k, verdict, len(witnesses))
    return RigidityReport(
        verdict=verdict,
        mode=mode,
        k=k,
        dim_t=dim_t,
        degrees=degrees,
        dims=tuple((n, len(spaces[n])) for n in degrees),
        witnesses=tuple(witnesses),
        target_dim=S.dim,
        formal_dimension=formal,
        converse_holds=converse,
        target=target,
    )
