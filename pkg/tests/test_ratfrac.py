from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.algebra import ExpPoly, FracSum, RatFrac, frac_equal
from kblowup.errors import DivisionByZero

N = 2
one = ExpPoly.const(1, N)
x = ExpPoly.monomial((1, 0))
y = ExpPoly.monomial((0, 1))
dens = [one - x, one - y, one - x * y, one + x, one - x * x * y.dual()]
nums = st.dictionaries(st.tuples(st.integers(-2, 2), st.integers(-2, 2)).map(lambda e: (4 * e[0], 4 * e[1])),
                       st.integers(-3, 3), max_size=4).map(lambda d: ExpPoly(d, N))
fracs = st.tuples(nums, st.lists(st.sampled_from(dens), max_size=3)).map(
    lambda t: RatFrac.from_factors(t[0], t[1]))


@settings(max_examples=60, deadline=None)
@given(fracs, fracs, fracs)
def test_field_axioms(a, b, c):
    assert frac_equal(a + b, b + a)
    assert frac_equal((a + b) + c, a + (b + c))
    assert frac_equal(a * (b + c), a * b + a * c)
    assert frac_equal((a - b) + b, a)
    if not b.is_zero():
        assert frac_equal(a / b * b, a)


@settings(max_examples=40, deadline=None)
@given(fracs, fracs)
def test_cross_multiplication_and_grid_agree(a, b):
    assert frac_equal(a, b, "cross-mul") == frac_equal(a, b, "grid")
    c = a * b + a
    assert frac_equal(c, a * (b + 1), "grid")


def test_canonical_factors_absorb_units():
    f = RatFrac.from_polys(one - x, one - x)
    assert frac_equal(f, RatFrac.const(1, N))
    g = RatFrac.from_polys(one, x - one)
    assert frac_equal(g, RatFrac.from_polys(-one, one - x))
    assert len(g.factors) == 1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        RatFrac.const(0, N).inverse()


def test_frac_sum_collapses_to_the_sum():
    parts = [RatFrac.from_polys(one, d) for d in dens]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    assert frac_equal(FracSum(parts, N).collapse(), total)
    assert frac_equal(FracSum(parts, N).collapse(workers=3), total)


def test_evaluation():
    f = RatFrac.from_polys(one + x, one - y)
    # e^{eps/4} -> 2 means e^{eps1} = 16
    assert f.evaluate((Fraction(2), Fraction(2))) == Fraction(17, -15)


def test_json_round_trip():
    f = RatFrac.from_factors(one + x * y, [one - x, (one - y, 2)])
    assert frac_equal(RatFrac.from_json(f.to_json(), N), f)
