"""Expansion of exponential fractions around eps1 = eps2 = 0 along a ray.

On the ray ``eps2 = c * eps1`` every monomial ``e^{q1 eps1 + q2 eps2 + a.A}``
becomes ``e^{a.A} e^{(q1 + c q2) eps1}``, so a polynomial is a finite sum of
exponentials in ``eps1`` with a-dependent coefficients.  Such a sum vanishes
identically iff every coefficient does, and otherwise its eps1-valuation is
smaller than the number of distinct rates; both facts make the valuation
computable exactly.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..errors import DivisionByZero, PoleDetected
from .exppoly import QUARTER, ExpPoly
from .laurent import LaurentSeries
from .ratfrac import FracSum, RatFrac, as_ratfrac

VAR = "ε1"


def _on_ray(p: ExpPoly, c: Fraction, nvars: int) -> dict:
    """Group terms by eps1-rate; values are a-only ExpPolys."""
    groups: dict = {}
    for e, coef in p.items():
        e = tuple(e) + (0,) * (nvars - len(e))
        rate = Fraction(e[0], QUARTER) + c * Fraction(e[1], QUARTER)
        a_part = ExpPoly({(0, 0) + e[2:]: coef}, nvars)
        groups[rate] = groups[rate] + a_part if rate in groups else a_part
    return {s: a for s, a in groups.items() if not a.is_zero()}


def _coef(groups: dict, k: int, nvars: int) -> ExpPoly:
    out = ExpPoly.zero(nvars)
    for s, a in groups.items():
        w = s ** k / factorial(k)
        if w:
            out = out + a * w
    return out


def _valuation(groups: dict, nvars: int):
    for k in range(len(groups)):
        if not _coef(groups, k, nvars).is_zero():
            return k
    return None


def _unit_series(groups: dict, v: int, nterms: int, nvars: int):
    """Leading coefficient and the normalized series ``f / (lead x^v)``."""
    lead = _coef(groups, v, nvars)
    lead_inv = RatFrac.from_factors(ExpPoly.const(1, nvars), [(lead, 1)])
    coeffs = {0: RatFrac.const(1, nvars)}
    for i in range(1, nterms):
        ci = _coef(groups, v + i, nvars)
        if not ci.is_zero():
            coeffs[i] = lead_inv * ci
    return lead, LaurentSeries(coeffs, nterms, VAR)


def _expand_term(fr: RatFrac, c: Fraction, order: int, nvars: int) -> LaurentSeries:
    prec = order + 1
    ng = _on_ray(fr.num, c, nvars)
    vn = _valuation(ng, nvars)
    if vn is None:
        return LaurentSeries({}, prec, VAR)
    fdata = []
    vd = 0
    for f, m in fr.factors:
        g = _on_ray(f, c, nvars)
        vf = _valuation(g, nvars)
        if vf is None:
            raise DivisionByZero(f"denominator factor {f.to_text()} vanishes identically on the ray eps2 = {c} eps1")
        fdata.append((g, vf, m))
        vd += m * vf
    nterms = order - (vn - vd) + 1
    if nterms <= 0:
        return LaurentSeries({}, prec, VAR)
    num = LaurentSeries({i: RatFrac.from_poly(_coef(ng, vn + i, nvars)) for i in range(nterms)}, nterms, VAR)
    lead_factors = []
    for g, vf, m in fdata:
        lead, unit = _unit_series(g, vf, nterms, nvars)
        num = num * unit.inverse() ** m
        lead_factors.append((lead, m))
    scale = RatFrac.from_factors(ExpPoly.const(1, nvars), lead_factors)
    return (num * scale).shift(vn - vd)


def expand_eps_series(x, c, order: int, regular: bool = False) -> LaurentSeries:
    """Laurent expansion in eps1 on the ray ``eps2 = c eps1`` through ``eps1**order``.

    Coefficients are RatFrac values in the a-exponentials only.  With
    ``regular=True`` a nonzero negative-order coefficient raises PoleDetected.
    """
    c = Fraction(c)
    if c == 0:
        raise ValueError("direction c must be nonzero")
    if isinstance(x, FracSum):
        parts = x.summands()
    else:
        parts = [as_ratfrac(x)]
    nvars = max([p.nvars for p in parts] + [2])
    total = LaurentSeries({}, order + 1, VAR)
    for fr in parts:
        total = total + _expand_term(fr, c, order, nvars)
    if regular:
        v = total.valuation()
        if v is not None and v < 0:
            raise PoleDetected(-v)
    return total
