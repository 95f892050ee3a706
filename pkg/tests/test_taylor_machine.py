from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import exact_linalg as la
from catalog import catalog, cpn_algebra, sphere_algebra
from derivation_solver import Derivation, derivation_space, is_derivation, make_derivation
from errors import DegreeMismatch, NonMultiplicative, NotDerivation, NotInvertible, NotNormalized
from fd_algebra import char_subspace, tensor, tensor_index
from taylor_machine import (
    TorusBasis,
    char_fixed,
    coefficient_map,
    compose,
    derivation_automorphism,
    identity,
    lift,
    make_product_automorphism,
    partial_derivatives,
    peel,
    recompose,
    torus_basis,
)

# H*(S^1 x CP^2): odd and even classes, with derivations in degrees -1 and -2
PRODUCT = tensor(sphere_algebra(1, "s"), cpn_algebra(2))
TORUS = TorusBasis(2)


def zero_derivation(H, degree):
    return Derivation(H, degree, tuple(la.zero_vector(H.dim) for _ in range(H.dim)))


def test_torus_basis_order():
    assert TorusBasis(1).monomials == ((), (1,))
    assert TORUS.monomials == ((), (1,), (2,), (1, 2))
    three = TorusBasis(3)
    assert three.size == 8
    assert [three.degree(i) for i in range(8)] == [0, 1, 1, 1, 2, 2, 2, 3]
    assert TORUS.algebra.names == ("1", "x1", "x2", "x1x2")
    assert torus_basis(2) == TORUS
    with pytest.raises(DegreeMismatch):
        torus_basis(0)


def test_identity_partials(su6):
    _, _, H = su6
    h = identity(H, TORUS)
    parts = partial_derivatives(h, H.basis_vector("y6"))
    assert parts[0] == H.basis_vector("y6")
    assert all(la.is_zero(p) for p in parts[1:])
    assert char_fixed(h, 6)


def su6_automorphism(H):
    D = make_derivation(H, -2, {"y6": H.basis_vector("y4")})
    return D, derivation_automorphism(D, TORUS, 3)


def test_su6_automorphism_moves_y6(su6):
    _, _, H = su6
    D, h = su6_automorphism(H)
    T = TORUS.algebra
    expected = la.add(lift(H, TORUS, H.index("y6")),
                      la.unit_vector(h.product.dim, tensor_index(H, T, H.index("y4"), 3)))
    assert h.on_base("y6") == expected
    assert h.on_base("y4") == lift(H, TORUS, H.index("y4"))
    parts = partial_derivatives(h, H.basis_vector("y6"))
    assert parts[3] == H.basis_vector("y4")
    assert coefficient_map(h, 3) == D
    assert not char_fixed(h, 6)


def test_automorphism_built_from_char_killing_derivation(su6):
    _, _, H = su6
    D = make_derivation(H, -2, {"c15": H.basis_vector("c13")})
    assert char_fixed(derivation_automorphism(D, TORUS, 3), 6)


def test_inverse_formula(su6):
    _, _, H = su6
    D, h = su6_automorphism(H)
    back = derivation_automorphism(-D, TORUS, 3)
    assert compose(back, h).values == identity(H, TORUS).values
    assert compose(h, back).values == identity(H, TORUS).values


def test_zero_derivation_gives_identity(su6):
    _, _, H = su6
    h = derivation_automorphism(zero_derivation(H, -1), TORUS, 1)
    assert h.values == identity(H, TORUS).values


def test_single_step_peel(su6):
    _, _, H = su6
    D, h = su6_automorphism(H)
    result = peel(h)
    assert [i for i, _ in result.steps] == [1, 2, 3]
    assert result.steps[0][1].is_zero() and result.steps[1][1].is_zero()
    assert result.steps[2][1] == D
    assert result.base_map is None
    assert recompose(H, TORUS, result.steps).values == h.values


def test_derivation_automorphism_errors(su6):
    _, _, H = su6
    D, _ = su6_automorphism(H)
    with pytest.raises(DegreeMismatch):
        derivation_automorphism(D, TORUS, 1)
    with pytest.raises(DegreeMismatch):
        derivation_automorphism(D, TORUS, 0)
    d_s = make_derivation(PRODUCT, -1, {
        "s": PRODUCT.unit_vector(), "s_x": PRODUCT.basis_vector("x"), "s_x_2": PRODUCT.basis_vector("x_2"),
    })
    assert is_derivation(d_s)
    half = Derivation(PRODUCT, -1, tuple(
        d_s.images[i] if PRODUCT.names[i] == "s" else la.zero_vector(PRODUCT.dim)
        for i in range(PRODUCT.dim)
    ))
    with pytest.raises(NotDerivation):
        derivation_automorphism(half, TORUS, 1)


def test_make_product_automorphism_validates():
    H = cpn_algebra(2)
    torus = TorusBasis(1)
    x = lift(H, torus, H.index("x"))
    with pytest.raises(NonMultiplicative):
        make_product_automorphism(H, torus, {"x": la.scale(Fraction(2), x)})
    with pytest.raises(DegreeMismatch):
        make_product_automorphism(H, torus, {"x": lift(H, torus, H.index("x_2"))})
    zero = la.zero_vector(len(x))
    with pytest.raises(NotInvertible):
        make_product_automorphism(H, torus, {"x": zero, "x_2": zero})


def grading_automorphism():
    """s -> s, x -> 2x on H*(S^1 x CP^2), as a product automorphism."""
    values = {}
    for i, name in enumerate(PRODUCT.names):
        weight = Fraction(2) ** (PRODUCT.degrees[i] // 2)
        values[name] = la.scale(weight, lift(PRODUCT, TORUS, i))
    return make_product_automorphism(PRODUCT, TORUS, values)


def test_peel_requires_normalization():
    g = grading_automorphism()
    with pytest.raises(NotNormalized):
        peel(g)


def test_normalized_peel_recovers_the_step():
    D = derivation_space(PRODUCT, -1)[0]
    g = grading_automorphism()
    h = compose(derivation_automorphism(D, TORUS, 1), g)
    result = peel(h, normalize=True)
    assert result.base_map == coefficient_map(g, 0)
    assert result.steps[0] == (1, D)
    assert result.normalized.values == derivation_automorphism(D, TORUS, 1).values


coefficients = st.integers(min_value=-2, max_value=2)


@st.composite
def random_derivation(draw, i):
    degree = -TORUS.degree(i)
    D = zero_derivation(PRODUCT, degree)
    for E in derivation_space(PRODUCT, degree):
        c = draw(coefficients)
        if c:
            D = D + E.scale(c)
    return D


@st.composite
def random_automorphism(draw):
    order = draw(st.permutations([1, 2, 3]))
    h = identity(PRODUCT, TORUS)
    for i in order:
        h = compose(derivation_automorphism(draw(random_derivation(i)), TORUS, i), h)
    return h


@settings(max_examples=25, deadline=None)
@given(random_automorphism())
def test_peel_then_recompose(h):
    make_product_automorphism(PRODUCT, TORUS, dict(enumerate(h.values)))
    result = peel(h)
    for i, C in result.steps:
        assert C.degree == -TORUS.degree(i)
        assert is_derivation(C)
    assert recompose(PRODUCT, TORUS, result.steps).values == h.values


@settings(max_examples=25, deadline=None)
@given(random_derivation(1), random_derivation(3))
def test_peel_round_trip_on_derivation_steps(D1, D3):
    h = compose(derivation_automorphism(D1, TORUS, 1), derivation_automorphism(D3, TORUS, 3))
    steps = dict(peel(h).steps)
    assert steps[1] == D1
    assert steps[2].is_zero()
    assert steps[3] == D3


RINGS = {
    "s1_cp2": PRODUCT,
    "cpn 3": cpn_algebra(3),
    "s3s5s7": catalog("s3s5s7").obj,
}


@lru_cache(maxsize=None)
def cached_space(H, degree):
    return derivation_space(H, degree)


@st.composite
def automorphism_on(draw, H, torus):
    """A product of derivation automorphisms, one per torus monomial, in random order."""
    h = identity(H, torus)
    for i in draw(st.permutations(range(1, torus.size))):
        degree = -torus.degree(i)
        D = zero_derivation(H, degree)
        for E in cached_space(H, degree):
            c = draw(coefficients)
            if c:
                D = D + E.scale(c)
        h = compose(derivation_automorphism(D, torus, i), h)
    return h


def check_peel(H, torus, h):
    result = peel(h)
    assert [i for i, _ in result.steps] == list(range(1, torus.size))
    for i, C in result.steps:
        assert C.degree == -torus.degree(i)
        assert is_derivation(C)
    assert recompose(H, torus, result.steps).values == h.values
    return result


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("name", sorted(RINGS))
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_peel_then_recompose_over_catalog_rings(name, d, data):
    H = RINGS[name]
    torus = torus_basis(d)
    check_peel(H, torus, data.draw(automorphism_on(H, torus)))


@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_peel_then_recompose_on_su6(su6, data):
    _, _, H = su6
    torus = torus_basis(data.draw(st.sampled_from([1, 2, 3])))
    h = data.draw(automorphism_on(H, torus))
    result = check_peel(H, torus, h)
    S = char_subspace(H, 6)
    assert char_fixed(h, 6) == all(C.vanishes_on(S) for _, C in result.steps)


@pytest.mark.parametrize("name, k", [("s1_cp2", 3), ("s3s5s7", 5), ("cpn 3", 4)])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_char_fixed_iff_every_step_kills_char(name, k, data):
    H = RINGS[name]
    torus = torus_basis(data.draw(st.sampled_from([1, 2])))
    h = data.draw(automorphism_on(H, torus))
    S = char_subspace(H, k)
    assert char_fixed(h, k) == all(C.vanishes_on(S) for _, C in peel(h).steps)
    if name == "cpn 3":
        assert char_fixed(h, k)
