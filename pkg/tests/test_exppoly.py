from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.algebra import ExpPoly, LinearMap, product
from kblowup.algebra import kernels
from kblowup.algebra.exppoly import _dict_mul
from kblowup.errors import LatticeOverflow

N = 3
exps = st.tuples(*[st.integers(-8, 8) for _ in range(N)])
coefs = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))
polys = st.dictionaries(exps, coefs, max_size=6).map(lambda d: ExpPoly(d, N))
int_maps = st.lists(st.lists(st.integers(-2, 2), min_size=N, max_size=N), min_size=N, max_size=N).map(
    lambda rows: LinearMap(N, dict(enumerate(rows))))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert a * ExpPoly.const(1, N) == a


@given(polys, polys, int_maps)
def test_substitution_is_a_ring_homomorphism(a, b, lmap):
    assert (a * b).substitute(lmap) == a.substitute(lmap) * b.substitute(lmap)
    assert (a + b).substitute(lmap) == a.substitute(lmap) + b.substitute(lmap)


@given(polys, polys, st.integers(-3, 3).filter(bool))
def test_dual_and_adams_are_homomorphisms(a, b, p):
    assert (a * b).dual() == a.dual() * b.dual()
    assert (a * b).adams(p) == a.adams(p) * b.adams(p)
    assert a.dual().dual() == a
    assert a.adams(-1) == a.dual()


@given(polys, polys)
def test_evaluation_is_multiplicative(a, b):
    vals = (Fraction(2), Fraction(3), Fraction(1, 2))
    assert (a * b).evaluate(vals) == a.evaluate(vals) * b.evaluate(vals)


@settings(max_examples=25)
@given(st.lists(st.dictionaries(exps, st.integers(-4, 4), min_size=5, max_size=14), min_size=2, max_size=4))
def test_packed_product_matches_dict_loop(terms):
    ps = [ExpPoly(t, N) for t in terms]
    slow = ps[0]
    for p in ps[1:]:
        slow = _dict_mul(slow, p, N)
    assert product(ps) == slow


def test_packed_kernels_agree():
    rng = np.random.default_rng(7)
    for span in (50, 10 ** 6):
        ka = np.unique(rng.integers(0, span, 300)).astype(np.int64)
        kb = np.unique(rng.integers(0, span, 200)).astype(np.int64)
        ca = rng.integers(-9, 9, ka.size).astype(np.int64)
        cb = rng.integers(-9, 9, kb.size).astype(np.int64)
        want = kernels.mul_packed_numpy(ka, ca, kb, cb)
        got = kernels.mul_packed(ka, ca, kb, cb)
        assert np.array_equal(want[0], got[0]) and np.array_equal(want[1], got[1])


def test_big_coefficients_take_the_exact_path():
    big = ExpPoly({(0, 0): 2 ** 70, (4, 0): 1}, 2)
    sq = big * big
    assert sq.terms[(0, 0)] == 2 ** 140
    assert sq.terms[(4, 0)] == 2 ** 71


@given(polys)
def test_json_round_trip(a):
    assert ExpPoly.from_json(a.to_json(), N) == a


def test_quarter_lattice_and_overflow():
    half = ExpPoly.monomial((Fraction(1, 2), 0))
    assert half * half == ExpPoly.monomial((1, 0))
    eighth = LinearMap(2, {0: [Fraction(1, 2), 0]})
    with pytest.raises(LatticeOverflow):
        ExpPoly.monomial((Fraction(1, 4), 0)).substitute(eighth)


def test_text_is_canonical():
    a = ExpPoly({(4, 0): 1, (0, 4): -2}, 2)
    b = ExpPoly({(0, 4): -2, (4, 0): 1}, 2)
    assert a.to_text() == b.to_text()
    assert hash(a) == hash(b)
