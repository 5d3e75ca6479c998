"""Fixed-point data and the K-theoretic instanton partition function on the plane."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra.exppoly import QUARTER, ExpPoly, LinearMap
from .algebra.lamseries import LamSeries, mono_mul, var
from .algebra.ratfrac import FracSum, RatFrac
from .errors import CancellationFailure, ZeroWeight
from .partitions import YoungTuple, arm, enumerate_tuples, leg


def nvars(r: int) -> int:
    return r + 2


def mono(r: int, e1=0, e2=0, a=None, coef=1) -> ExpPoly:
    """Monomial ``coef * exp(e1 eps1 + e2 eps2 + a.A)`` with rational exponents."""
    av = list(a) if a is not None else []
    av = av + [0] * (r - len(av))
    return ExpPoly.monomial([e1, e2] + av, coef, nvars(r))


def a_unit(r: int, alpha: int, scale=1) -> list:
    """Exponent vector of ``scale * a_alpha`` (alpha is 0-based)."""
    v = [0] * r
    v[alpha] = scale
    return v


def framing_character(r: int) -> ExpPoly:
    """W = sum_alpha e^{a_alpha}."""
    out = ExpPoly.zero(nvars(r))
    for al in range(r):
        out = out + mono(r, a=a_unit(r, al))
    return out


def v_character(Y: YoungTuple, r: int | None = None) -> ExpPoly:
    r = r if r is not None else Y.rank
    out = ExpPoly.zero(nvars(r))
    for al, D in enumerate(Y):
        for (i, j) in D.cells():
            out = out + mono(r, -(i - 1), -(j - 1), a_unit(r, al))
    return out


def tangent_character_adhm(Y: YoungTuple, r: int | None = None) -> ExpPoly:
    """Tangent character from the ADHM complex (the reference computation)."""
    r = r if r is not None else Y.rank
    V = v_character(Y, r)
    W = framing_character(r)
    one = ExpPoly.const(1, nvars(r))
    t1 = mono(r, 1, 0)
    t2 = mono(r, 0, 1)
    T = W.dual() * V + mono(r, 1, 1) * V.dual() * W - (one - t1) * (one - t2) * V.dual() * V
    for e, c in T.items():
        if not (isinstance(c, int) and c > 0):
            raise CancellationFailure(f"term {e} has multiplicity {c}")
    return T


def tangent_character_armleg(Y: YoungTuple, r: int | None = None) -> ExpPoly:
    """Arm/leg closed form of the tangent character."""
    r = r if r is not None else Y.rank
    terms: dict = {}

    def add(e1, e2, al, be):
        k = [e1 * QUARTER, e2 * QUARTER] + [0] * r
        k[2 + be] += QUARTER
        k[2 + al] -= QUARTER
        k = tuple(k)
        terms[k] = terms.get(k, 0) + 1

    for al in range(r):
        for be in range(r):
            Ya, Yb = Y[al], Y[be]
            for s in Ya.cells():
                add(-leg(Yb, s), arm(Ya, s) + 1, al, be)
            for t in Yb.cells():
                add(leg(Ya, t) + 1, -arm(Yb, t), al, be)
    return ExpPoly(terms, nvars(r))


def bigrade(T: ExpPoly, r: int) -> dict:
    """Split a character by its a-exponent (``a_beta - a_alpha``)."""
    out: dict = {}
    for e, c in T.items():
        key = tuple(e[2:])
        out[key] = out.get(key, ExpPoly.zero(nvars(r))) + ExpPoly({e: c}, nvars(r))
    return out


def _euler_factors(char: ExpPoly):
    n = char.nvars
    one = ExpPoly.const(1, n)
    pos, neg = [], []
    for e, c in char.sorted_items():
        if not any(e):
            raise ZeroWeight("character contains the trivial weight")
        if Fraction(c).denominator != 1:
            raise CancellationFailure(f"non-integer multiplicity {c}")
        factor = one - ExpPoly({tuple(-x for x in e): 1}, n)
        (pos if c > 0 else neg).append((factor, abs(int(c))))
    return pos, neg


def _expand(factors, n: int) -> ExpPoly:
    out = ExpPoly.const(1, n)
    for f, m in factors:
        out = out * f ** m
    return out


def ek_euler(char: ExpPoly) -> RatFrac:
    """K-theoretic Euler class prod_w (1 - e^{-w})^{mult}; negative multiplicities divide."""
    pos, neg = _euler_factors(char)
    return RatFrac.from_factors(_expand(pos, char.nvars), neg)


def ek_euler_inverse(char: ExpPoly) -> RatFrac:
    """``1 / ek_euler(char)`` built directly in factored form."""
    pos, neg = _euler_factors(char)
    return RatFrac.from_factors(_expand(neg, char.nvars), pos)


def cs_factor(Y: YoungTuple, l: int, r: int | None = None) -> ExpPoly:
    r = r if r is not None else Y.rank
    e1 = e2 = Fraction(0)
    a = [Fraction(0)] * r
    for al, D in enumerate(Y):
        for (i, j) in D.cells():
            a[al] += 1
            e1 += -(i - 1) - Fraction(1, 2)
            e2 += -(j - 1) - Fraction(1, 2)
    return mono(r, l * e1, l * e2, [l * x for x in a])


def origin_class(Y: YoungTuple, r: int | None = None) -> ExpPoly:
    """Restriction of the universal sheaf to the origin: W - (1-e^{-eps1})(1-e^{-eps2}) V."""
    r = r if r is not None else Y.rank
    one = ExpPoly.const(1, nvars(r))
    return framing_character(r) - (one - mono(r, -1, 0)) * (one - mono(r, 0, -1)) * v_character(Y, r)


def adams_wedge(cls: ExpPoly, p: int, mode: str = "adams") -> ExpPoly:
    if mode == "adams":
        return cls.adams(p)
    if mode != "wedge":
        raise ValueError(f"unknown mode {mode!r}")
    if p < 0:
        raise ValueError("wedge powers need p >= 0")
    e = [ExpPoly.const(1, cls.nvars)]
    for k in range(1, p + 1):
        acc = ExpPoly.zero(cls.nvars)
        for i in range(1, k + 1):
            term = e[k - i] * cls.adams(i)
            acc = acc + term if i % 2 else acc - term
        e.append(acc * Fraction(1, k))
    return e[p]


def sinh_product(r: int) -> ExpPoly:
    """(e^{eps1/2} - e^{-eps1/2})(e^{eps2/2} - e^{-eps2/2})."""
    h = Fraction(1, 2)
    return (mono(r, h) - mono(r, -h)) * (mono(r, 0, h) - mono(r, 0, -h))


def tau_factor(Y: YoungTuple, p: int, r: int | None = None) -> RatFrac:
    r = r if r is not None else Y.rank
    if p == 0:
        raise ValueError("Adams index must be nonzero")
    return RatFrac.from_factors(origin_class(Y, r).adams(p), [(sinh_product(r), 1)])


@dataclass(frozen=True)
class InsertionSpec:
    """Chern-Simons level, active Casimir insertions and an optional extra class.

    ``extra_class`` maps a fixed point to an ExpPoly or RatFrac multiplying
    its weight; it is excluded from cache keys, so give it a ``label``.
    """

    l: int = 0
    tau_orders: tuple = ()
    degree: int = 1
    extra_class: Callable | None = field(default=None, compare=False, hash=False)
    label: str = ""


@dataclass(frozen=True)
class FixedPointData:
    index: YoungTuple
    V_char: ExpPoly
    T_char: ExpPoly
    weight: RatFrac


def fixed_point(Y: YoungTuple, l: int = 0, r: int | None = None, oracle: bool = False) -> FixedPointData:
    r = r if r is not None else Y.rank
    T = tangent_character_adhm(Y, r) if oracle else tangent_character_armleg(Y, r)
    n = Y.total
    pre = mono(r, Fraction(-r * n, 2), Fraction(-r * n, 2)) * cs_factor(Y, l, r)
    w = ek_euler_inverse(T) * pre
    return FixedPointData(Y, v_character(Y, r), T, w)


def _insertion_terms(Y: YoungTuple, spec: InsertionSpec, r: int) -> list:
    """``[(monomial, RatFrac)]`` expansion of exp(sum tau_p f_p) up to the insertion degree."""
    out = [((), None)]
    if not spec.tau_orders or spec.degree < 1:
        return out
    fs = {p: tau_factor(Y, p, r) for p in spec.tau_orders}
    for p in spec.tau_orders:
        out.append((var("tau", p), fs[p]))
    if spec.degree >= 2:
        ps = list(spec.tau_orders)
        for i, p in enumerate(ps):
            for q in ps[i:]:
                m = mono_mul(var("tau", p), var("tau", q))
                val = fs[p] * fs[q]
                if p == q:
                    val = val * Fraction(1, 2)
                out.append((m, val))
    if spec.degree > 2:
        raise ValueError("insertion degree above 2 is not supported")
    return out


def fixed_point_terms(Y: YoungTuple, r: int, spec: InsertionSpec) -> list:
    """``[(monomial, RatFrac)]`` contributions of one fixed point."""
    w = fixed_point(Y, spec.l, r).weight
    if spec.extra_class is not None:
        extra = spec.extra_class(Y)
        w = w * extra
    return [(m, w if f is None else w * f) for m, f in _insertion_terms(Y, spec, r)]


def z_inst(r: int, spec: InsertionSpec | None = None, max_order: int = 0, lazy: bool = False,
           workers: int = 1) -> LamSeries:
    """Instanton partition function through Lambda^max_order.

    Coefficients are single fractions over the LCM denominator, or
    :class:`FracSum` values when ``lazy`` is set.
    """
    spec = spec or InsertionSpec()
    tuples = [Y for n in range(max_order // (2 * r) + 1) for Y in enumerate_tuples(r, n)]

    def work(Y):
        return Y, fixed_point_terms(Y, r, spec)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(work, tuples))
    else:
        results = [work(Y) for Y in tuples]
    buckets: dict = {}
    for Y, terms in results:
        lam = 2 * r * Y.total
        for m, val in terms:
            buckets.setdefault((lam, m), []).append(val)
    coeffs = {k: FracSum(v, nvars(r)) for k, v in buckets.items()}
    series = LamSeries(coeffs, max_order, spec.degree if spec.tau_orders else 0)
    return series if lazy else series.collapse(workers)


def shift_map(r: int, images: dict) -> LinearMap:
    """LinearMap on (eps1, eps2, a...) from ``{index: image vector}``."""
    return LinearMap(nvars(r), images)


def impose_traceless(x, r: int):
    """Substitute a_r = -(a_1 + ... + a_{r-1})."""
    img = [0, 0] + [-1] * (r - 1) + [0]
    return x.substitute(LinearMap(nvars(r), {r + 1: img}))
