from fractions import Fraction

import pytest

from kblowup.algebra import ExpPoly, LamSeries, LaurentSeries, RatFrac, expand_eps_series, frac_equal, shifted_power
from kblowup.errors import PoleDetected

one = ExpPoly.const(1, 2)
e1 = ExpPoly.monomial((1, 0))
e2 = ExpPoly.monomial((0, 1))


def test_exp_and_inverse():
    s = LaurentSeries.exp(1, 8)
    assert s.coefficient(3) == Fraction(1, 6)
    t = s * LaurentSeries.exp(-1, 8)
    assert t.coefficient(0) == 1 and all(t.coefficient(k) == 0 for k in range(1, 8))
    inv = s.inverse()
    assert (s * inv).coefficient(5) == 0


def test_residue_of_a_pole():
    x = LaurentSeries.monomial(1)
    f = (x * x + x * 3 + 1) * LaurentSeries.monomial(-2)
    assert f.residue() == 3


def test_shifted_power_with_nilpotent_shift():
    # (hbar - w)^-2 with w^2 = 0 is hbar^-2 + 2 w hbar^-3; use w = 0 here
    s = shifted_power(0, -2)
    assert s.coefficient(-2) == 1 and s.coefficient(-3) == 0


def test_eps_expansion_of_a_regular_ratio():
    # (1 - e^{eps1}) / (1 - e^{eps2}) -> 1/c along eps2 = c eps1
    f = RatFrac.from_polys(one - e1, one - e2)
    for c in (Fraction(-2), Fraction(3), Fraction(1, 2)):
        s = expand_eps_series(f, c, 1, regular=True)
        assert s.coefficient(0).evaluate((1, 1)) == 1 / c


def test_eps_expansion_detects_poles():
    f = RatFrac.from_polys(one, one - e1)
    with pytest.raises(PoleDetected):
        expand_eps_series(f, 2, 0, regular=True)
    s = expand_eps_series(f, 2, 0)
    assert s.coefficient(-1).evaluate((1, 1)) == -1


def test_lamseries_truncated_product():
    x = RatFrac.from_poly(e1)
    a = LamSeries({(0, ()): RatFrac.const(1), (2, ()): x}, order=4, degree=0)
    sq = a * a
    assert frac_equal(sq.coeff(2), x * 2)
    assert frac_equal(sq.coeff(4), x * x)
    assert sq.coeff(4, ()) is not None
    with pytest.raises(ValueError):
        sq.coeff(6)


def test_lamseries_json_round_trip():
    tau = (("tau", 1), 1)
    a = LamSeries({(0, ()): RatFrac.const(1), (2, (tau,)): RatFrac.from_polys(e1, one - e2)}, order=2, degree=1)
    b = LamSeries.from_json(a.to_json())
    assert [(l, m) for l, m, _ in b.to_records()] == [(l, m) for l, m, _ in a.to_records()]
    for (l, m, fa), (_, _, fb) in zip(a.to_records(), b.to_records()):
        assert frac_equal(fa, fb)
