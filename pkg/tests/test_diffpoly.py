from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitonlab.diffpoly import (
    DiffOperator,
    DiffPoly,
    JetVar,
    LambdaMatrix,
    commutator,
    const,
    dp_combine,
    dp_evaluate,
    dp_substitute,
    dp_total_derivative,
    jet,
    op_commutator,
    op_compose,
    parse,
)
from solitonlab.errors import GridMismatch, UnboundField
from solitonlab.fields import Grid1D, ScalarField

u, uh, v = jet("u"), jet("uh"), jet("v")


# random small polynomials over {u, uh} with jets up to order 2
@st.composite
def polys(draw, max_terms=4):
    p = DiffPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        m = const(c)
        for _ in range(draw(st.integers(0, 3))):
            m = m * jet(draw(st.sampled_from(["u", "uh"])), draw(st.integers(0, 2)))
        p = p + m
    return p


def test_additive_inverse():
    assert dp_combine(u, -u).is_zero()


def test_monomial_product():
    assert dp_combine(v, v, "mul") == v**2


def test_multiplicative_identity():
    w = jet("w")
    p = w + const(3) * w**2
    assert dp_combine(p, const(1), "mul") == p


@pytest.mark.parametrize(
    "src, expected",
    [("u^2", "2*u*u[1]"), ("u[1]", "u[2]"), ("v^2 + v[1]", "2*v*v[1] + v[2]"), ("7", "0")],
)
def test_total_derivative_examples(src, expected):
    assert dp_total_derivative(parse(src)) == parse(expected)


def test_miura_substitution():
    miura = v**2 + v.dx()
    assert dp_substitute(u, "u", miura) == miura
    assert dp_substitute(u.dx(), "u", miura) == parse("2*v*v[1] + v[2]")
    p = parse("4*u*u[1] - u[3]")
    assert dp_substitute(p, "u", u) == p


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert (a - a).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_derivation_rule(a, b):
    assert (a * b).dx() == a * b.dx() + b * a.dx()


@settings(max_examples=40, deadline=None)
@given(polys())
def test_ascii_round_trip(a):
    assert parse(a.to_ascii()) == a


def test_canonical_ascii():
    assert parse("-u[3] + 4*u[1]*u").to_ascii() == "4*u*u[1] - u[3]"


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        const(0.5)


def test_unregistered_field():
    with pytest.raises(UnboundField):
        jet("nosuchfield")


def test_weight_homogeneity():
    # u has weight 2, each x-derivative weight 1
    assert parse("4*u*u[1] - u[3]").weights({"u": 2}) == {5}


# numeric evaluation -----------------------------------------------------------
@pytest.fixture
def periodic():
    return Grid1D.periodic(np.pi, 64)


def test_evaluate_derivative(periodic):
    f = {"u": ScalarField(periodic, np.sin(periodic.x))}
    assert np.max(np.abs(dp_evaluate(u.dx(), f).values - np.cos(periodic.x))) < 1e-10


def test_evaluate_zero(periodic):
    f = {"u": ScalarField(periodic, np.sin(periodic.x))}
    assert np.all(dp_evaluate(DiffPoly(), f).values == 0)


def test_evaluate_product():
    g = Grid1D.decaying(-10, 10, 201)
    s = ScalarField(g, 1 / np.cosh(g.x))
    out = dp_evaluate(u * uh, {"u": s, "uh": s}, "fd4").values
    assert np.allclose(out, 1 / np.cosh(g.x) ** 2, atol=1e-14)


def test_evaluate_unbound(periodic):
    with pytest.raises(UnboundField):
        dp_evaluate(u * uh, {"u": ScalarField(periodic, np.sin(periodic.x))})


def test_evaluate_grid_mismatch(periodic):
    other = Grid1D.periodic(np.pi, 32)
    with pytest.raises(GridMismatch):
        dp_evaluate(u * uh, {"u": ScalarField(periodic, np.sin(periodic.x)), "uh": ScalarField(other, np.cos(other.x))})


@settings(max_examples=25, deadline=None)
@given(polys(max_terms=3))
def test_evaluate_commutes_with_derivative(a):
    g = Grid1D.periodic(np.pi, 64)
    f = {"u": ScalarField(g, 0.5 * np.sin(g.x) + 0.2), "uh": ScalarField(g, 0.3 * np.cos(2 * g.x))}
    lhs = dp_evaluate(a.dx(), f).values
    rhs = dp_evaluate(a, f).derivative(1).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-8


# operators ------------------------------------------------------------------------
def test_compose_leibniz():
    assert op_compose(DiffOperator.d_x(), DiffOperator.multiplication(u)) == DiffOperator([u.dx(), u])


def test_compose_identity():
    K = jet("K")
    G = DiffOperator([K, 1])
    assert op_compose(G, DiffOperator.multiplication(1)) == G


def test_compose_schroedinger_with_dx():
    L = DiffOperator([u, 0, -1])
    D = DiffOperator.d_x()
    diff = op_compose(L, D) - op_compose(D, L)
    assert diff.coeff(3).is_zero()
    assert diff == DiffOperator([-u.dx()])


def test_commutator_antisymmetry():
    A = DiffOperator([u, uh, 1])
    B = DiffOperator([uh.dx(), 0, u, 1])
    assert op_commutator(A, A).is_zero()
    assert op_commutator(A, B) == -op_commutator(B, A)


def test_commutator_with_multiplication():
    assert op_commutator(DiffOperator.d_x(), DiffOperator.multiplication(u)) == DiffOperator([u.dx()])


@pytest.mark.parametrize("a", [1, -4, Fraction(3, 2)])
def test_kdv_commutator_is_multiplication(a):
    a = Fraction(a)
    L = DiffOperator([u, 0, -1])
    M = DiffOperator([-Fraction(3, 4) * a * u.dx(), -Fraction(3, 2) * a * u, 0, a])
    C = op_commutator(M, L)
    assert C.order() == 0
    # a = -4 gives 6 u u_x - u_xxx
    assert C.coeff(0) == a * (Fraction(1, 4) * u.dx(3) - Fraction(3, 2) * u * u.dx())


# lambda matrices --------------------------------------------------------------
def test_lambda_matrix_commutator_antisymmetric():
    A = LambdaMatrix([[{1: Fraction(1, 2)}, uh], [u, {1: Fraction(-1, 2)}]])
    B = LambdaMatrix([[{0: u * uh}, {1: uh}], [{0: u.dx()}, 0]])
    assert (commutator(A, B) + commutator(B, A)).is_zero()


def test_jet_order_invariant():
    with pytest.raises(ValueError):
        JetVar("u", -1)
