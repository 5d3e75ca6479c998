from fractions import Fraction

import pytest

from kblowup.algebra import ExpPoly, RatFrac, frac_equal
from kblowup.errors import ConfigError, PoleDetected, RangeViolation
from kblowup.identities import (VANISHING_K_SIGN, check_blowup_eq, check_sym, check_vanish_k, check_vanish_t,
                                eps_limit, extract_up, f0_tau_derivative, t_range_ok, up_range)
from kblowup.instanton import mono

one = ExpPoly.const(1, 2)
e1 = ExpPoly.monomial((1, 0))
e2 = ExpPoly.monomial((0, 1))


def test_range_guards():
    with pytest.raises(RangeViolation):
        check_blowup_eq(2, 3, 0, 4)
    with pytest.raises(RangeViolation):
        check_vanish_t(2, 0, 2, 1, 4)
    with pytest.raises(RangeViolation):
        check_vanish_k(2, 0, 1, 2, 4)
    with pytest.raises(RangeViolation):
        check_sym(2, 2, 4)
    with pytest.raises(RangeViolation):
        up_range(2, 0, 2)
    assert t_range_ok(2, 1, 1) and not t_range_ok(2, 2, 1)


def test_failing_check_reports_a_witness():
    rep = check_vanish_k(2, 1, 1, -VANISHING_K_SIGN, 6)
    assert not rep.holds
    bad = rep.failures()[0]
    assert bad.witness is not None and not bad.witness.is_zero()
    rec = rep.to_record()
    assert rec["holds"] is False and rec["notes"]["theorem_range"] == "False"
    assert "FAILS" in rep.to_table(timings=False)


def test_vanishing_outside_the_theorem_range_is_not_claimed():
    rep = check_vanish_k(3, 1, 1, -1, 6)
    assert rep.notes["theorem_range"] is False and not rep.holds


def test_rank_three_k_vanishing_in_range():
    rep = check_vanish_k(3, 1, 1, VANISHING_K_SIGN, 6)
    assert rep.notes["theorem_range"] is True and rep.holds


def test_symmetry_probe_at_l_equal_r():
    rep = check_sym(2, 2, 4, allow_l_eq_r=True)
    assert not rep.holds


def test_eps_limit_direction_dependence():
    with pytest.raises(AssertionError):
        eps_limit(RatFrac.from_polys(one - e1, one - e2))
    with pytest.raises(PoleDetected):
        eps_limit(RatFrac.from_polys(one, one - e1))
    assert frac_equal(eps_limit(RatFrac.from_polys(one - e1 * e2, one - e1 * e1 * e2 * e2)),
                      RatFrac.const(Fraction(1, 2), 2))


def test_f0_rank_one_second_order():
    vals = f0_tau_derivative(1, 0, 1, 2)
    assert frac_equal(vals[1], RatFrac.from_poly(-mono(1, a=[1])))


def test_dual_coefficients_at_nonzero_level():
    for l, p in ((1, 1), (1, 2)):
        (u,) = extract_up(3, l, p, 0)
        assert not u.is_zero()


def test_solver_requires_level_zero():
    from kblowup.identities import solve_recursive
    with pytest.raises(ConfigError):
        solve_recursive(2, 1, 0, 1, 4)
