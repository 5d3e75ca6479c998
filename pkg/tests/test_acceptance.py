"""Acceptance suite: one test per criterion, named test_criterion_NN.

The terminal summary prints one PASS/FAIL line per criterion.  Tests named
test_companion_* are supporting checks and do not count towards a criterion.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import subprocess
import sys
from fractions import Fraction

import pytest

from kblowup.algebra import RatFrac, frac_equal
from kblowup.blowup import h1_closed_form, h1_line_bundle_character, l_factor_character
from kblowup.errors import SingularSystem
from kblowup.identities import (VANISHING_K_SIGN, check_blowup_eq, check_sym, check_vanish_k, check_vanish_t,
                                elementary_symmetric, extract_up, f0_tau_derivative, power_sum, solve_recursive,
                                vanishing_signs)
from kblowup.instanton import (InsertionSpec, impose_traceless, tangent_character_adhm, tangent_character_armleg,
                               z_inst)
from kblowup.partitions import enumerate_tuples
from kblowup.wallcross import example_blowup_coeff, generalized_binomial


def _assert_report(rep):
    assert rep.holds, rep.to_table()


# 1
def test_criterion_01_tangent_oracles():
    for r in (1, 2, 3):
        for n in range(6):
            for Y in enumerate_tuples(r, n):
                t = tangent_character_armleg(Y)
                assert t == tangent_character_adhm(Y), Y.to_text()
                assert t.rank() == 2 * r * n


# 2
def test_criterion_02_rank_one_blowup():
    _assert_report(check_blowup_eq(1, 0, 0, 6))


# 3
@pytest.mark.parametrize("l,d", list(itertools.product((0, 1, 2), (0, 1, 2))))
def test_criterion_03_blowup_equation_rank_two(l, d):
    _assert_report(check_blowup_eq(2, l, d, 8))


# 4
def test_criterion_04_line_bundle_characters():
    for m in range(-6, 7):
        assert h1_line_bundle_character(m) == h1_closed_form(m), m
    for r in (1, 2, 3):
        for k in itertools.product(range(-3, 4), repeat=r):
            rank = l_factor_character(k, r).rank()
            assert rank == r * sum(x * x for x in k) - sum(k) ** 2, k


# 5
@pytest.mark.parametrize("p,d", [(1, 0), (1, 1), (-1, 1), (-1, 2), (2, 0)])
def test_criterion_05_insertion_vanishing(p, d):
    _assert_report(check_vanish_t(2, 0, d, p, 8))


# 6
def test_criterion_06_k_vanishing_single_sign():
    # exactly one of k = +1, -1 must vanish identically
    assert vanishing_signs(2, 0, 1, 8) == [VANISHING_K_SIGN]


def test_companion_06_frozen_sign_vanishes():
    _assert_report(check_vanish_k(2, 0, 1, VANISHING_K_SIGN, 8))


@pytest.mark.parametrize("l", [1, 2])
def test_companion_06_sign_is_selected_for_nonzero_level(l):
    assert vanishing_signs(2, l, 1, 8) == [VANISHING_K_SIGN]


# 7
@pytest.mark.parametrize("r,l", [(1, 0), (2, 0), (2, 1)])
def test_criterion_07_symmetry(r, l):
    _assert_report(check_sym(r, l, 8))


# 8
@pytest.fixture(scope="module")
def direct_rank_two():
    return z_inst(2, InsertionSpec(), 8)


def _same_coefficients(solved, direct, orders):
    for lam in orders:
        assert frac_equal(solved.coeff(lam), direct.coeff(lam)), lam


def test_criterion_08_solver_reproduces_direct(direct_rank_two):
    _same_coefficients(solve_recursive(2, 0, 0, 1, 8), direct_rank_two, (4, 8))


def test_criterion_08_solver_pair_invariance(direct_rank_two):
    a = solve_recursive(2, 0, 0, 1, 8)
    b = solve_recursive(2, 0, 0, 2, 8)
    _same_coefficients(a, b, (4, 8))


def test_companion_08_other_pair_agrees(direct_rank_two):
    a = solve_recursive(2, 0, 0, 1, 8)
    b = solve_recursive(2, 0, 1, 2, 8)
    _same_coefficients(a, b, (4, 8))
    _same_coefficients(b, direct_rank_two, (4, 8))


def test_companion_08_symmetric_pair_is_singular():
    with pytest.raises(SingularSystem):
        solve_recursive(2, 0, 0, 2, 4)


# 9
@pytest.mark.parametrize("p", [1, -1])
def test_criterion_09_regularity(p):
    # eps_limit raises on a pole or on direction dependence
    vals = f0_tau_derivative(2, 0, p, 4, directions=(Fraction(-2), Fraction(-1, 2), Fraction(3)))
    assert len(vals) == 2 and all(isinstance(v, RatFrac) for v in vals)


# 10
def test_criterion_10_constant_term():
    for r in (1, 2, 3):
        for p in (1, -1, 2, -2):
            (v,) = f0_tau_derivative(r, 0, p, 0)
            assert frac_equal(v, RatFrac.from_poly(power_sum(r, p))), (r, p)


# 11
@pytest.mark.parametrize("r,p", [(2, 1), (3, 1), (3, 2)])
def test_criterion_11_sw_leading_term(r, p):
    (u,) = extract_up(r, 0, p, 0)
    want = impose_traceless(elementary_symmetric(r, p), r) * (-1) ** p
    assert frac_equal(u, RatFrac.from_poly(want))


def test_criterion_11_newton_cross_check():
    u1 = extract_up(2, 0, 1, 4)
    for p in (1, -1):
        f = f0_tau_derivative(2, 0, p, 4)
        for n in (0, 1):
            assert frac_equal(u1[n], -impose_traceless(f[n], 2)), (p, n)


# 12
def test_criterion_12_wallcross_example():
    assert example_blowup_coeff(2, 0) == -2
    for r in range(1, 5):
        for nf in range(0, 2 * r):
            assert example_blowup_coeff(r, nf) == -generalized_binomial(2 * r - nf - 2, r - 1), (r, nf)


# 13
def _machine(*extra):
    cmd = [sys.executable, "-m", "kblowup", "zhat", "--rank", "2", "--cs", "1", "-d", "1", "--max-order", "8",
           "--format", "machine", *extra]
    out = subprocess.run(cmd, capture_output=True, check=True)
    return out.stdout


def test_criterion_13_thread_determinism():
    one = _machine("--threads", "1")
    many = _machine("--threads", "4")
    assert one and one == many


def test_companion_13_check_report_determinism():
    a = check_blowup_eq(2, 1, 1, 8, workers=1).to_record()
    b = check_blowup_eq(2, 1, 1, 8, workers=4).to_record()
    assert a == b


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
