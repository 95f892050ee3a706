"""Sullivan-style DGAs, their cohomology and exported cohomology rings.

Cohomology is computed degree by degree from the matrix of d on the
monomial basis; each degree keeps enough data (representatives, image
basis and preimages) to write any cocycle as a class plus an explicit
exact part.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, TypeVar

from joblib import Parallel, delayed

import exact_linalg as la
from config import get_settings
from errors import (
    D2NotZero,
    DegreeMismatch,
    MixedAlgebras,
    NotCartanModel,
    NotCocycle,
    OutOfRange,
    TruncationUnsound,
    UnknownSymbol,
)
from fd_algebra import FDAlgebra, make_fd_algebra
from gca_kernel import AlgebraMorphism, Element, FreeGCA, Generator, Monomial, apply_morphism, extend_derivation

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class BiquotientData:
    """Generators of H*(BH) (even) and of the odd part, with d restricted to the odd part."""

    bh_generators: Tuple[Generator, ...]
    q_generators: Tuple[Generator, ...]
    dbar: Tuple[Tuple[str, Element], ...]

    @classmethod
    def make(cls, bh: Sequence[Tuple[str, int]], q: Sequence[Tuple[str, int]],
             dbar: Mapping[str, Element]) -> "BiquotientData":
        bh_gens = tuple(Generator(n, d) for n, d in bh)
        q_gens = tuple(Generator(n, d) for n, d in q)
        for g in bh_gens:
            if g.is_odd:
                raise DegreeMismatch(f"{g.name} must have even degree", found=g.degree)
        for g in q_gens:
            if not g.is_odd:
                raise DegreeMismatch(f"{g.name} must have odd degree", found=g.degree)
        base = FreeGCA(bh_gens)
        FreeGCA(bh_gens + q_gens)  # name clashes
        pairs = []
        for g in q_gens:
            img = dbar.get(g.name, base.zero())
            if img.algebra != base:
                raise MixedAlgebras(f"dbar({g.name}) must live in the polynomial part")
            if not img.is_homogeneous_of(g.degree + 1):
                raise DegreeMismatch(f"dbar({g.name}) must have degree {g.degree + 1}",
                                     expected=g.degree + 1, found=img)
            pairs.append((g.name, img))
        for name in dbar:
            if name not in {g.name for g in q_gens}:
                raise UnknownSymbol(name)
        return cls(bh_gens, q_gens, tuple(pairs))

    @property
    def base_algebra(self) -> FreeGCA:
        return FreeGCA(self.bh_generators)

    @property
    def rank_difference(self) -> int:
        return len(self.q_generators) - len(self.bh_generators)


@dataclass(frozen=True)
class DGA:
    algebra: FreeGCA
    d: Tuple[Tuple[str, Element], ...]
    origin: Optional[BiquotientData] = field(default=None, compare=False)

    def image(self, name: str) -> Element:
        return dict(self.d).get(name, self.algebra.zero())

    def images(self) -> Dict[str, Element]:
        return dict(self.d)


def make_dga(algebra: FreeGCA, assignments: Mapping[str, Element],
             origin: Optional[BiquotientData] = None) -> DGA:
    """Validated constructor: d raises degree by one and squares to zero."""
    pairs = []
    for name in assignments:
        algebra.index(name)
    for g in algebra.generators:
        img = assignments.get(g.name, algebra.zero())
        if img.algebra != algebra:
            raise MixedAlgebras(f"d({g.name}) is not in the algebra")
        if not img.is_homogeneous_of(g.degree + 1):
            raise DegreeMismatch(f"d({g.name}) must have degree {g.degree + 1}",
                                 expected=g.degree + 1, found=img)
        if not img.is_zero():
            pairs.append((g.name, img))
    dga = DGA(algebra, tuple(pairs), origin)
    for g in algebra.generators:
        residue = differential(dga, dga.image(g.name))
        if not residue.is_zero():
            raise D2NotZero(g.name, residue)
    return dga


def differential(M: DGA, x: Element) -> Element:
    return extend_derivation(M.algebra, M.images(), 1, x)


def is_pure(M: DGA, strict: Optional[bool] = None) -> bool:
    """d kills the even generators and sends odd ones into the even part.

    With `strict`, odd generators must land in the linear span of even generators.
    """
    if strict is None:
        strict = get_settings().strict_purity
    gens = M.algebra.generators
    odd_idx = [i for i, g in enumerate(gens) if g.is_odd]
    for i, g in enumerate(gens):
        img = M.image(g.name)
        if not g.is_odd:
            if not img.is_zero():
                return False
            continue
        for mono, _ in img.terms:
            if any(mono[j] for j in odd_idx):
                return False
            if strict and sum(mono) != 1:
                return False
    return True


def _coords(basis_index: Mapping[Monomial, int], size: int, x: Element) -> la.Vector:
    v = [Fraction(0)] * size
    for mono, c in x.terms:
        v[basis_index[mono]] = c
    return tuple(v)


@dataclass(frozen=True)
class CohomologyDegree:
    degree: int
    basis: Tuple[Monomial, ...]
    representatives: Tuple[Element, ...]
    rep_vectors: Tuple[la.Vector, ...]
    image_vectors: Tuple[la.Vector, ...]
    image_preimages: Tuple[Element, ...]
    kernel_dim: int

    @property
    def betti(self) -> int:
        return len(self.representatives)


def _degree_data(M: DGA, n: int) -> CohomologyDegree:
    A = M.algebra
    basis = A.basis_in_degree(n)
    index = {m: i for i, m in enumerate(basis)}
    above = A.basis_in_degree(n + 1)
    above_index = {m: i for i, m in enumerate(above)}
    below = A.basis_in_degree(n - 1)

    # columns: d(b) in coordinates of degree n+1
    out_cols = [_coords(above_index, len(above), differential(M, A.monomial(b))) for b in basis]
    kernel = la.nullspace(la.transpose(out_cols, len(above)), len(basis)) if basis else []

    in_cols = [_coords(index, len(basis), differential(M, A.monomial(b))) for b in below]
    picked = la.independent_columns(in_cols, len(basis)) if basis else ()
    image_vectors = tuple(in_cols[j] for j in picked)
    preimages = tuple(A.monomial(below[j]) for j in picked)

    echelon, pivots = la.rref(image_vectors, len(basis))
    reduced = [la.reduce_against(k, echelon, pivots) for k in kernel]
    reps, _ = la.rref(reduced, len(basis))
    representatives = tuple(
        A.element({basis[i]: c for i, c in enumerate(v) if c}) for v in reps
    )
    logger.debug("degree %d: basis %d, kernel %d, image %d, betti %d",
                 n, len(basis), len(kernel), len(image_vectors), len(reps))
    return CohomologyDegree(n, basis, representatives, tuple(reps), image_vectors, preimages, len(kernel))


@dataclass(frozen=True, eq=False)
class CohomologyResult:
    dga: DGA
    max_degree: int
    degrees: Tuple[CohomologyDegree, ...]

    def at(self, n: int) -> CohomologyDegree:
        if n < 0:
            raise OutOfRange(f"no cohomology in negative degree {n}")
        if n > self.max_degree:
            raise OutOfRange(f"degree {n} is above the computed range {self.max_degree}")
        return self.degrees[n]

    def betti(self, n: int) -> int:
        return self.at(n).betti if n >= 0 else 0

    def betti_vector(self) -> Tuple[int, ...]:
        return tuple(d.betti for d in self.degrees)

    def representatives(self, n: int) -> Tuple[Element, ...]:
        return self.at(n).representatives

    def reduce(self, z: Element) -> Tuple[la.Vector, Element, Element]:
        """Write z = sum c_i rep_i + d(w); return (c, d(w), w)."""
        if z.algebra != self.dga.algebra:
            raise MixedAlgebras()
        A = self.dga.algebra
        n = z.homogeneous_degree()
        if n is None:
            raise DegreeMismatch("cannot reduce the zero element without a degree")
        residue = differential(self.dga, z)
        if not residue.is_zero():
            raise NotCocycle(residue)
        data = self.at(n)
        index = {m: i for i, m in enumerate(data.basis)}
        target = _coords(index, len(data.basis), z)
        solution = la.solve_in_span(list(data.rep_vectors) + list(data.image_vectors), target)
        if solution is None:  # pragma: no cover - kernel is spanned by reps and image
            raise NotCocycle(residue)
        k = len(data.rep_vectors)
        coords = tuple(solution[:k])
        w = A.zero()
        for c, pre in zip(solution[k:], data.image_preimages):
            w = w + pre.scale(c)
        return coords, differential(self.dga, w), w

    def reduce_in(self, z: Element, n: int) -> la.Vector:
        """Class coordinates of z in degree n, accepting z == 0."""
        if z.is_zero():
            return la.zero_vector(self.betti(n))
        if not z.is_homogeneous_of(n):
            raise DegreeMismatch(f"expected an element of degree {n}", expected=n, found=z)
        return self.reduce(z)[0]


def map_degrees(solve: Callable[[int], T], degrees: Iterable[int]) -> List[T]:
    """Run one independent solve per degree, on RHO_N_JOBS threads."""
    degrees = list(degrees)
    n_jobs = get_settings().n_jobs
    if n_jobs > 1 and len(degrees) > 1:
        return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(solve)(n) for n in degrees)
    return [solve(n) for n in degrees]


def cohomology(M: DGA, max_degree: int) -> CohomologyResult:
    if max_degree < 0:
        raise OutOfRange("max_degree must be >= 0")
    degrees = map_degrees(functools.partial(_degree_data, M), range(max_degree + 1))
    return CohomologyResult(M, max_degree, tuple(degrees))


def extend(res: CohomologyResult, max_degree: int) -> CohomologyResult:
    if max_degree <= res.max_degree:
        return res
    more = [_degree_data(res.dga, n) for n in range(res.max_degree + 1, max_degree + 1)]
    return CohomologyResult(res.dga, max_degree, res.degrees + tuple(more))


def class_name(M: DGA, degree: int, i: int, betti: int, rep: Element) -> str:
    """A generator name for classes of a single generator, otherwise c<degree>[_i].

    Made-up names never reuse a generator name of M.
    """
    if degree == 0:
        return "1"
    if len(rep.terms) == 1:
        mono, c = rep.terms[0]
        if c == 1 and sum(mono) == 1:
            return M.algebra.generators[mono.index(1)].name
    name = f"c{degree}" if betti == 1 else f"c{degree}_{i}"
    while name in M.algebra.names:
        name += "_c"
    return name


def truncation_window(res: CohomologyResult, top: int) -> CohomologyResult:
    """Check that cohomology vanishes in degrees top+1 .. top+max generator degree."""
    span = max(res.dga.algebra.max_generator_degree, 1)
    full = extend(res, top + span)
    for n in range(top + 1, top + span + 1):
        b = full.betti(n)
        if b:
            logger.warning("refusing truncation at %d: betti %d in degree %d", top, b, n)
            raise TruncationUnsound(n, b, top)
    return full


def cohomology_algebra(M: DGA, res: CohomologyResult, top: int) -> FDAlgebra:
    """Export H^{<=top}(M) as a finite-dimensional algebra.

    The basis is the class representatives in increasing degree; the
    representatives ride along on the result.
    """
    if res.dga != M:
        raise MixedAlgebras("cohomology result belongs to another DGA")
    full = truncation_window(res, top)
    names: List[str] = []
    degrees: List[int] = []
    reps: List[Element] = []
    slots: Dict[Tuple[int, int], int] = {}
    for n in range(top + 1):
        data = full.at(n)
        for i, rep in enumerate(data.representatives):
            slots[(n, i)] = len(names)
            names.append(class_name(M, n, i, data.betti, rep))
            degrees.append(n)
            reps.append(rep)
    mul: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a in range(len(reps)):
        for b in range(len(reps)):
            p = degrees[a] + degrees[b]
            if p > top:
                continue
            coords = full.reduce_in(reps[a] * reps[b], p)
            out = {slots[(p, k)]: c for k, c in enumerate(coords) if c}
            if out:
                mul[(a, b)] = out
    ring = make_fd_algebra(list(zip(names, degrees)), mul, representatives=tuple(reps))
    logger.info("exported cohomology ring: dim %d, top %d", len(names), top)
    return ring


def cartan_model(data: BiquotientData) -> DGA:
    algebra = FreeGCA(data.bh_generators + data.q_generators)
    embed = AlgebraMorphism.make(
        data.base_algebra, algebra, {g.name: algebra.gen(g.name) for g in data.bh_generators}
    )
    return make_dga(algebra, {name: embed(img) for name, img in data.dbar}, origin=data)


@dataclass(frozen=True)
class LowerGrading:
    dims: Tuple[Tuple[Tuple[int, int], int], ...]
    rank_difference: int
    max_degree: int

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return dict(self.dims)

    def dim(self, n: int, k: int) -> int:
        return self.as_dict().get((n, k), 0)

    @property
    def bound_holds(self) -> bool:
        return all(dim == 0 for (n, k), dim in self.dims if k > self.rank_difference)


def _wordlength(data: BiquotientData, algebra: FreeGCA, mono: Monomial) -> int:
    offset = len(data.bh_generators)
    return sum(mono[offset:])


def lower_grading(data: BiquotientData, res: CohomologyResult) -> LowerGrading:
    """Split H^n of a Cartan model by the number of odd generators (k)."""
    M = res.dga
    if M.origin != data:
        raise NotCartanModel()
    A = M.algebra
    dims: Dict[Tuple[int, int], int] = {}
    for n in range(res.max_degree + 1):
        total = 0
        for k in range(len(data.q_generators) + 1):
            dim = _graded_piece_dim(M, data, n, k)
            if dim:
                dims[(n, k)] = dim
                total += dim
        if total != res.betti(n):  # pragma: no cover - d is homogeneous in k
            raise NotCartanModel(f"lower grading does not add up in degree {n}")
    return LowerGrading(tuple(sorted(dims.items())), data.rank_difference, res.max_degree)


def _graded_piece_dim(M: DGA, data: BiquotientData, n: int, k: int) -> int:
    A = M.algebra

    def piece(deg: int, length: int) -> Tuple[Monomial, ...]:
        return tuple(m for m in A.basis_in_degree(deg) if _wordlength(data, A, m) == length)

    here = piece(n, k)
    if not here:
        return 0
    down = piece(n + 1, k - 1)
    down_index = {m: i for i, m in enumerate(down)}
    out_cols = [_coords(down_index, len(down), differential(M, A.monomial(b))) for b in here]
    kernel_dim = len(here) - la.rank(la.transpose(out_cols, len(down)), len(here)) if down else len(here)
    up = piece(n - 1, k + 1)
    here_index = {m: i for i, m in enumerate(here)}
    in_cols = [_coords(here_index, len(here), differential(M, A.monomial(b))) for b in up]
    image_dim = la.rank(in_cols, len(here))
    return kernel_dim - image_dim


def even_part_is_h0(data: BiquotientData, res: CohomologyResult) -> bool:
    grading = lower_grading(data, res)
    return all(
        grading.dim(n, 0) == res.betti(n) for n in range(0, res.max_degree + 1, 2)
    )


def check_dga_morphism(source: DGA, target: DGA, phi: AlgebraMorphism) -> List[Tuple[str, Element]]:
    """Generators where phi fails to commute with d, with the residue phi(dg) - d(phi g)."""
    if phi.source != source.algebra or phi.target != target.algebra:
        raise MixedAlgebras("morphism does not match the given DGAs")
    failures = []
    for g in source.algebra.generators:
        residue = apply_morphism(phi, source.image(g.name)) - differential(target, phi.image(g.name))
        if not residue.is_zero():
            failures.append((g.name, residue))
    return failures


def is_dga_morphism(source: DGA, target: DGA, phi: AlgebraMorphism) -> bool:
    return not check_dga_morphism(source, target, phi)
