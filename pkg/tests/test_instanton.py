from fractions import Fraction

import pytest

from kblowup.algebra import ExpPoly, LinearMap, RatFrac, frac_equal
from kblowup.instanton import (InsertionSpec, adams_wedge, ek_euler, ek_euler_inverse, fixed_point, impose_traceless,
                               mono, origin_class, tangent_character_adhm, tangent_character_armleg, z_inst)
from kblowup.partitions import YoungTuple, enumerate_tuples


def _scale(r, n):
    return LinearMap(r + 2, {i: [0] * i + [n] for i in range(r + 2)})


def test_rank_one_is_a_plethystic_exponential():
    # the Hilbert-scheme sum is PE of its one-instanton term
    z = z_inst(1, InsertionSpec(), 6)
    f = [None] + [z.coeff(2).substitute(_scale(1, n)) for n in (1, 2, 3)]
    assert frac_equal(z.coeff(4), (f[1] * f[1] + f[2]) * Fraction(1, 2))
    assert frac_equal(z.coeff(6), (f[1] * f[1] * f[1] + f[1] * f[2] * 3 + f[3] * 2) * Fraction(1, 6))


def test_one_instanton_rank_one():
    z = z_inst(1, InsertionSpec(), 2)
    one = ExpPoly.const(1, 3)
    want = RatFrac.from_factors(mono(1, Fraction(1, 2), Fraction(1, 2)), [one - mono(1, 1), one - mono(1, 0, 1)])
    assert frac_equal(z.coeff(2), want)


def test_tangent_weights_are_nonzero_and_agree():
    for Y in enumerate_tuples(2, 4):
        t = tangent_character_armleg(Y)
        assert t == tangent_character_adhm(Y)
        assert all(any(e) for e, _ in t.items())
        assert frac_equal(fixed_point(Y).weight, fixed_point(Y, oracle=True).weight)


def test_euler_class_and_inverse():
    ch = mono(1, 1) + mono(1, 0, 1) * 2 - mono(1, 1, 1)
    assert frac_equal(ek_euler(ch) * ek_euler_inverse(ch), RatFrac.const(1, 3))


def test_wedge_powers_of_a_sum_of_lines():
    cls = mono(3, a=[1]) + mono(3, a=[0, 1]) + mono(3, a=[0, 0, 1])
    assert adams_wedge(cls, 2, "wedge") == mono(3, a=[1, 1]) + mono(3, a=[1, 0, 1]) + mono(3, a=[0, 1, 1])
    assert adams_wedge(cls, 3, "wedge") == mono(3, a=[1, 1, 1])


def test_origin_class_of_empty_tuple_is_the_framing():
    Y = YoungTuple(((), ()))
    assert origin_class(Y) == mono(2, a=[1]) + mono(2, a=[0, 1])


def test_lazy_threaded_and_serial_agree():
    spec = InsertionSpec(l=1, tau_orders=(1, -1), degree=2)
    a = z_inst(2, spec, 4)
    b = z_inst(2, spec, 4, workers=4)
    c = z_inst(2, spec, 4, lazy=True).collapse()
    assert a.keys() == b.keys() == c.keys()
    for k in a.keys():
        assert frac_equal(a.coeffs[k], b.coeffs[k]) and frac_equal(a.coeffs[k], c.coeffs[k])


def test_insertion_degree_limit():
    with pytest.raises(ValueError):
        z_inst(1, InsertionSpec(tau_orders=(1,), degree=3), 2)


def test_traceless_substitution():
    x = mono(3, a=[1, 1, 1])
    assert impose_traceless(x, 3) == ExpPoly.const(1, 5)
