from fractions import Fraction

import pytest

from catalog import cpn_algebra, sphere_algebra
from errors import (
    DegreeMismatch,
    DuplicateGenerator,
    NotAssociative,
    NotConnected,
    NotGradedCommutative,
    UnknownSymbol,
)
from fd_algebra import (
    Subspace,
    char_subspace,
    even_part,
    exterior_algebra,
    graded_piece,
    is_generated_in_degree,
    koszul,
    make_fd_algebra,
    poincare_check,
    subalgebra_generated,
    tensor,
)


def test_koszul():
    assert koszul(3, 5) == -1
    assert koszul(2, 5) == 1


def test_unit_products_are_implied():
    H = cpn_algebra(2)
    x = H.basis_vector("x")
    assert H.multiply(H.unit_vector(), x) == x
    assert H.multiply(x, x) == H.basis_vector("x_2")


def test_degree_zero_must_be_one_dimensional():
    with pytest.raises(NotConnected):
        make_fd_algebra([("1", 0), ("e", 0)], {})
    with pytest.raises(NotConnected):
        make_fd_algebra([("s", 3)], {})


def test_unit_products_cannot_be_overridden():
    with pytest.raises(NotConnected):
        make_fd_algebra([("1", 0), ("s", 3)], {("1", "s"): {"s": 2}})


def test_duplicate_names():
    with pytest.raises(DuplicateGenerator):
        make_fd_algebra([("1", 0), ("a", 2), ("a", 4)], {})


def test_wrong_product_degree():
    with pytest.raises(DegreeMismatch):
        make_fd_algebra([("1", 0), ("a", 2), ("b", 3)], {("a", "a"): {"b": 1}})


def test_odd_squares_must_vanish():
    with pytest.raises(NotGradedCommutative):
        make_fd_algebra([("1", 0), ("s", 3), ("t", 6)], {("s", "s"): {"t": 1}})


def test_conflicting_orders():
    basis = [("1", 0), ("a", 3), ("b", 5), ("ab", 8)]
    with pytest.raises(NotGradedCommutative):
        make_fd_algebra(basis, {("a", "b"): {"ab": 1}, ("b", "a"): {"ab": 1}})
    H = make_fd_algebra(basis, {("a", "b"): {"ab": 1}})
    assert H.product(H.index("b"), H.index("a")) == {H.index("ab"): Fraction(-1)}


def test_non_associative_table():
    # (a*a)*b = c while a*(a*b) = 0
    basis = [("1", 0), ("a", 2), ("b", 2), ("a2", 4), ("c", 6)]
    mul = {("a", "a"): {"a2": 1}, ("a2", "b"): {"c": 1}, ("a", "b"): {}}
    with pytest.raises(NotAssociative):
        make_fd_algebra(basis, mul)


def test_unknown_basis_name():
    H = cpn_algebra(2)
    with pytest.raises(UnknownSymbol):
        H.basis_vector("y")


def test_format_vector():
    H = cpn_algebra(3)
    v = H.basis_vector("x", Fraction(-1))
    w = tuple(a + b for a, b in zip(v, H.basis_vector("x_3", Fraction(1, 2))))
    assert H.format_vector(w) == "-x + 1/2 x_3"
    assert H.format_vector(H.unit_vector()) == "1"
    assert H.format_vector((Fraction(0),) * H.dim) == "0"


def test_subspace_span_and_contains():
    H = cpn_algebra(3)
    S = Subspace.span(H, [H.basis_vector("x", 2), H.basis_vector("x", 3)])
    assert S.dim == 1
    assert S.contains(H.basis_vector("x"))
    assert not S.contains(H.basis_vector("x_2"))
    with pytest.raises(DegreeMismatch):
        Subspace.span(H, [tuple(a + b for a, b in zip(H.basis_vector("x"), H.basis_vector("x_2")))])


def test_char_subspace_degrees(yamaguchi):
    _, _, H = yamaguchi
    # k = 6: H^4 + H^6 + H^8, all zero here
    assert char_subspace(H, 6).dim == 0
    # k = 12 reaches H^12
    assert char_subspace(H, 12).dim == 1
    # odd k = 13: H^4, H^8, H^12
    assert char_subspace(H, 13).dim == 1
    with pytest.raises(DegreeMismatch):
        char_subspace(H, 1)


def test_char_subspace_of_su6(su6):
    _, _, H = su6
    S = char_subspace(H, 6)
    assert S.contains(H.basis_vector("y4"))
    assert S.contains(H.basis_vector("y6"))
    assert char_subspace(H, 5).dim == 1


def test_even_part(yamaguchi):
    _, _, H = yamaguchi
    assert [H.degrees[H.index(n)] for n in ("x", "c12", "c14")] == [2, 12, 14]
    assert even_part(H).dim == 3


def test_subalgebra_generated(yamaguchi):
    _, _, H = yamaguchi
    gen = subalgebra_generated(H, [H.basis_vector("x"), H.basis_vector("c12")])
    assert gen.dim == 4
    assert gen.contains(H.basis_vector("c14"))
    assert not gen.contains(H.basis_vector("y"))


def test_generated_in_degree(yamaguchi):
    _, _, H = yamaguchi
    assert not is_generated_in_degree(H, 2)
    assert is_generated_in_degree(cpn_algebra(4), 2)


def test_graded_piece(yamaguchi):
    _, _, H = yamaguchi
    assert graded_piece(H, 7).dim == 2
    assert graded_piece(H, 8).dim == 0


def test_tensor_signs():
    A = sphere_algebra(3, "a")
    B = sphere_algebra(5, "b")
    T = tensor(A, B)
    assert T.names == ("1", "b", "a", "a_b")
    a, b = T.basis_vector("a"), T.basis_vector("b")
    assert T.multiply(a, b) == T.basis_vector("a_b")
    assert T.multiply(b, a) == T.basis_vector("a_b", Fraction(-1))
    assert poincare_check(T, 8)


def test_tensor_with_repeated_names_uses_pairs():
    T = tensor(sphere_algebra(2), sphere_algebra(2))
    assert T.names == ("1_1", "1_s", "s_1", "s_s")


def test_tensor_with_polynomial_factor():
    T = tensor(cpn_algebra(2), sphere_algebra(3, "s"))
    x, s = T.basis_vector("x"), T.basis_vector("s")
    xs = T.multiply(x, s)
    assert T.multiply(xs, x) == T.basis_vector("x_2_s")
    assert poincare_check(T, 7)


def test_poincare_check():
    assert poincare_check(cpn_algebra(3), 6)
    assert not poincare_check(cpn_algebra(3), 8)
    degenerate = make_fd_algebra([("1", 0), ("a", 2), ("t", 4)], {})
    assert not poincare_check(degenerate, 4)


def test_exterior_algebra():
    E = exterior_algebra(["x1", "x2"], [1, 1])
    assert E.names == ("1", "x1", "x2", "x1x2")
    x1, x2 = E.basis_vector("x1"), E.basis_vector("x2")
    assert E.multiply(x2, x1) == E.basis_vector("x1x2", Fraction(-1))
    assert poincare_check(E, 2)
    with pytest.raises(DegreeMismatch):
        exterior_algebra(["y"], [2])


def test_catalog_rings_satisfy_duality(catalog_rings):
    for name, H in catalog_rings.items():
        assert poincare_check(H, H.top_degree), name
