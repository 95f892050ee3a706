from fractions import Fraction

import pytest
from sympy import Rational, Symbol, eye, linear_eq_to_matrix

import exact_linalg as la
from catalog import catalog, cpn_algebra, sphere_algebra
from cohomology_engine import differential, make_dga
from derivation_solver import (
    Derivation,
    chain_derivation_space,
    decompose_restriction,
    derivation_space,
    induced_image,
    induced_on_cohomology,
    is_class_h,
    is_derivation,
    make_chain_derivation,
    make_derivation,
    negative_derivations_vanish_on,
    restricted_derivation_space,
    rigidity_report,
    separating_derivations,
    tensor_derivation,
)
from errors import DegreeMismatch, ModelMismatch, NotChainDerivation, NotDerivation
from fd_algebra import Subspace, even_part, graded_piece, subalgebra_generated, tensor
from gca_kernel import FreeGCA, extend_derivation

MODELS = ("su6_su3su3", "yamaguchi14", "bazaikin 0", "eschenburg")


def brute_force_basis(H, n):
    """Der_n(H) from symbolic unknowns and sympy's nullspace, as flattened image vectors."""
    unknowns = {
        (i, k): Symbol(f"d_{i}_{k}")
        for i in range(H.dim) for k in H.indices_in_degree(H.degrees[i] + n)
    }
    if not unknowns:
        return []

    def times(u, v):
        out = [Rational(0)] * H.dim
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                if a == 0 or b == 0:
                    continue
                for k, c in H.table[i][j]:
                    out[k] += a * b * Rational(c.numerator, c.denominator)
        return out

    def apply(v):
        out = [Rational(0)] * H.dim
        for i, a in enumerate(v):
            if a != 0:
                for (src, k), s in unknowns.items():
                    if src == i:
                        out[k] += a * s
        return out

    def basis(i):
        return [Rational(1) if k == i else Rational(0) for k in range(H.dim)]

    equations = []
    for i in range(H.dim):
        for j in range(H.dim):
            sign = -1 if (n * H.degrees[i]) % 2 else 1
            lhs = apply(times(basis(i), basis(j)))
            left = times(apply(basis(i)), basis(j))
            right = times(basis(i), apply(basis(j)))
            equations += [lhs[k] - left[k] - sign * right[k] for k in range(H.dim)]
    positions = list(unknowns)
    symbols = list(unknowns.values())
    equations = [e for e in equations if e != 0]
    if equations:
        matrix, _ = linear_eq_to_matrix(equations, symbols)
        solutions = matrix.nullspace()
    else:
        solutions = [eye(len(symbols)).col(p) for p in range(len(symbols))]
    found = []
    for s in solutions:
        flat = [Fraction(0)] * (H.dim * H.dim)
        for (i, k), c in zip(positions, s):
            flat[i * H.dim + k] = Fraction(int(c.p), int(c.q))
        found.append(tuple(flat))
    return found


def test_cpn_has_no_degree_minus_two_derivations():
    assert derivation_space(cpn_algebra(2), -2) == ()


def test_degree_below_top_is_empty(su6):
    _, _, H = su6
    assert derivation_space(H, -20) == ()


def test_yamaguchi_degree_minus_eight(yamaguchi):
    _, _, H = yamaguchi
    space = derivation_space(H, -8)
    assert any(not la.is_zero(D.on("c11")) for D in space)
    D = make_derivation(H, -8, {"c11": H.basis_vector("y")})
    assert la.rank([E.flat() for E in space] + [D.flat()], H.dim * H.dim) == len(space)


def test_derivation_space_elements_satisfy_leibniz(catalog_rings):
    for name, H in catalog_rings.items():
        for n in range(-H.top_degree, 0):
            for D in derivation_space(H, n):
                assert is_derivation(D), (name, n)


@pytest.mark.parametrize("name", ["cpn 3", "s3s5s7", "bazaikin 0", "yamaguchi14", "su6_su3su3", "eschenburg"])
def test_derivation_space_matches_brute_force(catalog_rings, name):
    H = catalog_rings[name]
    assert H.dim <= 12
    for n in range(-H.top_degree, 3):
        solved = [D.flat() for D in derivation_space(H, n)]
        oracle = brute_force_basis(H, n)
        assert len(solved) == len(oracle), n
        assert la.same_span(solved, oracle, H.dim * H.dim), n


def test_make_derivation_validates(su6):
    _, _, H = su6
    with pytest.raises(DegreeMismatch):
        make_derivation(H, -2, {"y6": H.basis_vector("y6")})
    with pytest.raises(NotDerivation):
        # x^2 = x_2 forces D(x_2) = 2x D(x)
        make_derivation(cpn_algebra(3), 2, {"x": cpn_algebra(3).basis_vector("x_2")})


def test_vanishing_lemma(catalog_rings):
    for name, H in catalog_rings.items():
        for n in range(1, H.top_degree // 2 + 1):
            piece = graded_piece(H, 2 * n)
            if not piece.dim:
                continue
            for D in derivation_space(H, -2 * n):
                assert D.vanishes_on(piece), (name, n)


def test_class_h():
    assert is_class_h(cpn_algebra(2))
    assert is_class_h(sphere_algebra(2))
    assert not is_class_h(sphere_algebra(5))


def test_class_h_of_su6(su6):
    _, _, H = su6
    assert not is_class_h(H)
    assert not negative_derivations_vanish_on(H, even_part(H))


def test_separating_derivations(su6):
    _, _, H = su6
    space = derivation_space(H, -2)
    found = separating_derivations(space, [H.basis_vector("y4")], H.basis_vector("y6"))
    assert found
    for D in found:
        assert la.is_zero(D.apply(H.basis_vector("y4")))
        assert not la.is_zero(D.apply(H.basis_vector("y6")))
    assert separating_derivations(space, [H.basis_vector("y6")], H.basis_vector("y6")) == ()


def test_restricted_derivations(su6):
    _, _, H = su6
    B = subalgebra_generated(H, [H.basis_vector("y4")])
    assert B.dim == 2
    up = restricted_derivation_space(H, B, 2)
    assert len(up) == 1
    image = up[0].apply(H.basis_vector("y4"))
    assert H.is_homogeneous_of(image, 6) and not la.is_zero(image)
    assert restricted_derivation_space(H, B, -4) == ()


def test_restricted_space_needs_a_subalgebra(su6):
    _, _, H = su6
    not_closed = Subspace.span(H, [H.unit_vector(), H.basis_vector("y4"), H.basis_vector("c15")])
    with pytest.raises(DegreeMismatch):
        restricted_derivation_space(H, not_closed, -2)


def test_su6_chain_derivation():
    M = catalog("su6_su3su3").obj
    g = M.algebra.gen
    space = chain_derivation_space(M, -2)
    assert len(space) == 1
    D = space[0]
    c = D.image("y6").coefficient(g("y4").terms[0][0])
    assert c != 0
    assert D.image("y4").is_zero()
    assert D.image("x9") == g("x7").scale(2 * c)
    assert D.image("x11") == g("x9").scale(c)


def test_make_chain_derivation():
    M = catalog("su6_su3su3").obj
    g = M.algebra.gen
    D = make_chain_derivation(M, -2, {"y6": g("y4"), "x9": g("x7") * 2, "x11": g("x9")})
    assert D.describe() == {"y6": "y4", "x9": "2 x7", "x11": "x9"}
    with pytest.raises(NotChainDerivation) as info:
        make_chain_derivation(M, -2, {"y6": g("y4"), "x9": g("x7"), "x11": g("x9") * 2})
    assert info.value.generator == "x9"
    with pytest.raises(DegreeMismatch):
        make_chain_derivation(M, -2, {"y6": g("y6")})


def test_chain_derivations_of_zero_differential():
    A = FreeGCA.of([("x2", 2), ("y3", 3), ("y5", 5)])
    M = make_dga(A, {})
    # every free derivation is closed
    assert len(chain_derivation_space(M, -2)) == 2
    assert len(chain_derivation_space(M, 0)) == 4


def test_induced_action_su6(su6):
    M, res, H = su6
    g = M.algebra.gen
    D = make_chain_derivation(M, -2, {"y6": g("y4"), "x9": g("x7") * 2, "x11": g("x9")})
    induced = induced_on_cohomology(M, D, res, 19, H)
    assert is_derivation(induced)
    assert induced.on("y6") == H.basis_vector("y4")
    assert la.is_zero(induced.on("y4"))


def test_exact_chain_derivations_induce_zero(su6):
    M, res, H = su6
    A = M.algebra
    g = A.gen
    sigma = {"y6": g("y4"), "x9": g("x7"), "x11": g("x9")}
    # [d, sigma] = d sigma - sigma d for sigma of even degree
    images = {
        gen.name: differential(M, sigma.get(gen.name, A.zero()))
        - extend_derivation(A, sigma, -2, M.image(gen.name))
        for gen in A.generators
    }
    E = make_chain_derivation(M, -1, images)
    assert not E.is_zero()
    induced = induced_on_cohomology(M, E, res, 19, H)
    assert induced.is_zero()


def test_yamaguchi_induced_image_is_zero(yamaguchi):
    M, res, H = yamaguchi
    image = induced_image(M, res, 14, range(-14, 0), H)
    assert all(basis == () for basis in image.values())
    assert derivation_space(H, -8)


def test_su6_induced_image_hits_y6(su6):
    M, res, H = su6
    (D,) = induced_image(M, res, 19, [-2], H)[-2]
    assert not la.is_zero(D.on("y6"))


def test_tensor_derivation_round_trip():
    A = sphere_algebra(3, "a")
    B = cpn_algebra(2)
    T = tensor(A, B)
    (D,) = derivation_space(B, 2)
    E = tensor_derivation(A, B, T, A.index("a"), D)
    assert E.degree == 5
    assert is_derivation(E)
    parts = decompose_restriction(A, B, E)
    assert [p.basis_name for p in parts] == ["1", "a"]
    assert parts[0].derivation.is_zero()
    assert parts[1].derivation == D
    assert all(p.valid for p in parts)


def check_coefficient_maps(A, B):
    T = tensor(A, B)
    for n in range(-T.top_degree, 0):
        for D in derivation_space(T, n):
            for part in decompose_restriction(A, B, D):
                assert part.valid, (n, part.basis_name)
                assert is_derivation(part.derivation)
                assert part.derivation.degree == n - A.degrees[A.index(part.basis_name)]
                assert part.derivation.degree < 0
    return T


def test_negative_derivations_of_product_kill_b2():
    T = check_coefficient_maps(sphere_algebra(3, "a"), cpn_algebra(2))
    for n in range(-T.top_degree, 0):
        for D in derivation_space(T, n):
            assert la.is_zero(D.apply(T.basis_vector("x")))


def test_coefficient_maps_over_the_yamaguchi_ring(yamaguchi):
    _, _, H = yamaguchi
    check_coefficient_maps(sphere_algebra(3, "a"), H)


def test_coefficient_maps_flag_non_derivations():
    A = sphere_algebra(3, "a")
    B = cpn_algebra(2)
    T = tensor(A, B)
    # 1 x x -> a x 1 alone breaks Leibniz on x * x = x_2
    bad = Derivation(T, 1, tuple(
        T.basis_vector("a") if name == "x" else la.zero_vector(T.dim) for name in T.names
    ))
    parts = {p.basis_name: p for p in decompose_restriction(A, B, bad)}
    assert not parts["a"].valid
    assert parts["1"].valid


def test_rigid_examples():
    report = rigidity_report(cpn_algebra(3), 3, 2)
    assert report.verdict == "rigid"
    assert report.degrees == (-3, -2, -1)
    assert rigidity_report(sphere_algebra(5), 4, 7).verdict == "rigid"


def test_su6_is_not_rigid_from_the_model(su6):
    M, _, H = su6
    report = rigidity_report(H, 2, 6, mode="model", model=M)
    assert report.verdict == "not_rigid"
    assert report.converse_holds
    assert report.witnesses
    assert all(w.validate() for w in report.witnesses)


def test_su6_is_indeterminate_from_cohomology(su6):
    _, _, H = su6
    report = rigidity_report(H, 2, 6)
    assert report.verdict == "indeterminate"
    assert report.target_dim == 2


def test_yamaguchi_model_beats_cohomology(yamaguchi):
    M, _, H = yamaguchi
    assert rigidity_report(H, 5, 12).verdict == "indeterminate"
    report = rigidity_report(H, 5, 12, mode="model", model=M)
    assert report.verdict == "rigid"
    assert all(dim == 0 for _, dim in report.dims)


@pytest.mark.parametrize("dim_t,k", [(1, 2), (3, 7), (14, 12)])
def test_yamaguchi_model_rigid_for_any_torus(yamaguchi, dim_t, k):
    M, _, H = yamaguchi
    assert rigidity_report(H, dim_t, k, mode="model", model=M).verdict == "rigid"


def test_model_verdict_is_monotone(catalog_rings):
    for name in MODELS:
        H = catalog_rings[name]
        M = catalog(name).obj
        for dim_t, k in ((1, 2), (2, 6), (4, 9)):
            cohomology_mode = rigidity_report(H, dim_t, k)
            if cohomology_mode.verdict == "rigid":
                assert rigidity_report(H, dim_t, k, mode="model", model=M).verdict == "rigid", name


def test_even_target_checks_every_negative_degree():
    report = rigidity_report(cpn_algebra(2), 1, 2, target="even")
    assert report.degrees == (-4, -3, -2, -1)
    assert report.verdict == "rigid"


def test_model_mode_errors(su6, yamaguchi):
    _, _, H = su6
    with pytest.raises(ModelMismatch):
        rigidity_report(H, 2, 6, mode="model")
    with pytest.raises(ModelMismatch):
        rigidity_report(H, 2, 6, mode="model", model=yamaguchi[0])
    with pytest.raises(ModelMismatch):
        rigidity_report(H, 2, 6, mode="fast")


def test_derivation_arithmetic(su6):
    _, _, H = su6
    D = derivation_space(H, -2)[0]
    assert (D + D.scale(-1)).is_zero()
    assert (-D).scale(-1) == D
    assert isinstance(D, Derivation)
    assert D.describe() == (-D).scale(-1).describe() != {}
