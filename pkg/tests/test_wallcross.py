from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kblowup.errors import NonInvertible, RangeViolation
from kblowup.wallcross import (ClassData, euler_twist, euler_twist_inverse, HbarPoly, TruncRing, example_blowup_coeff, example_closed_form,
                               example_data, example_integrand, example_phi, generalized_binomial, integrate_proj,
                               k_kernel_residues, psi_kernel)

ring = TruncRing(3, {"s": (1, 3)})
coef = st.fractions(min_value=-3, max_value=3, max_denominator=3)
elems = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), coef, max_size=5).map(ring.elem)


def _eq(a, b):
    return (a - b).is_zero()


@given(elems, elems, elems)
def test_truncated_ring_axioms(a, b, c):
    assert _eq(a * (b + c), a * b + a * c)
    assert _eq((a * b) * c, a * (b * c))
    assert _eq(a * b, b * a)


@given(elems)
def test_inverse_of_units(a):
    u = a + 1 if a.constant_term() != -1 else a + 2
    assert _eq(u * u.inverse(), ring.one())


def test_non_units_and_exp():
    h = ring.gen("h")
    with pytest.raises(NonInvertible):
        h.inverse()
    e = h.exp()
    assert e.coefficient(h=2) == Fraction(1, 2)


def test_integration_over_projective_space():
    r2 = TruncRing(2)
    h = r2.gen("h")
    assert integrate_proj(2, (h + 1) ** 3) == 3
    assert integrate_proj(1, 5) == 5


def test_generalized_binomial():
    assert generalized_binomial(-1, 3) == -1
    assert generalized_binomial(-2, 2) == 3
    assert generalized_binomial(4, 2) == 6
    assert generalized_binomial(3, -1) == 0


def test_example_values():
    assert example_blowup_coeff(2, 0) == -2
    assert example_blowup_coeff(3, 0) == -6
    assert example_blowup_coeff(3, 1) == -3
    assert example_blowup_coeff(2, 1) == -1
    assert example_blowup_coeff(2, 3) == 1
    with pytest.raises(RangeViolation):
        example_blowup_coeff(2, 4)


@pytest.mark.parametrize("r,nf", [(2, 0), (2, 1), (3, 0), (3, 1)])
def test_kernel_reduces_to_the_closed_integrand(r, nf):
    ring_, n_out, n_in = example_data(r)
    k = psi_kernel(1, 0, n_out, n_in, example_phi(r, nf), ring_, residue=False)
    assert k == example_integrand(r, nf)
    assert integrate_proj(r, k.residue()) == example_closed_form(r, nf)


def test_two_exceptional_summands_are_symmetric():
    ring_, n_out, n_in = example_data(2)
    k = psi_kernel(2, 0, n_out, n_in, lambda hb: HbarPoly.const(ring_, 2, ring_.one()), ring_, residue=False)
    assert k.swap(0, 1) == k


@pytest.mark.parametrize("r,d", [(2, 3), (3, 5), (2, 4)])
def test_k_kernel_change_of_variables(r, d):
    in_hbar, in_x = k_kernel_residues(r, d)
    assert _eq(in_hbar, in_x)
    assert not in_hbar.is_zero()


def test_line_class_data():
    r2 = TruncRing(2)
    h = r2.gen("h")
    c = ClassData.from_lines(r2, [(2, h), (-1, h)])
    assert c.rank == 1
    assert _eq(c.chern_class(1, r2), h)


@pytest.mark.parametrize("n", [1, 2, -3])
def test_euler_twist_degree_and_leading_coefficient(n):
    r3 = TruncRing(3)
    h = r3.gen("h")
    alpha = ClassData.from_lines(r3, [(2, h), (1, -h)])
    e = euler_twist(alpha, n, r3)
    top = max(k for (k,) in e.terms)
    assert top == alpha.rank == 3
    assert _eq(e.terms[(top,)], r3.const(Fraction(n) ** 3))
    inv = euler_twist_inverse(alpha, n, r3)
    prod = e * inv
    assert set(prod.terms) == {(0,)} and _eq(prod.terms[(0,)], r3.one())


def test_euler_twist_inverse_needs_a_unit():
    r2 = TruncRing(2)
    alpha = ClassData.from_lines(r2, [(1, r2.gen("h"))])
    with pytest.raises(NonInvertible):
        euler_twist_inverse(alpha, 0, r2)
