"""Formal fractions of exponential polynomials.

A :class:`RatFrac` keeps its denominator as a multiset of canonical
factors.  A factor is canonical when its lexicographically smallest term is
``1 * e^0``; the unit stripped off during canonicalization is moved into the
numerator.  In particular ``1 - e^{w}`` and ``1 - e^{-w}`` share one
canonical factor, which keeps common denominators of localization sums small.
No cancellation between numerator and denominator is ever attempted.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable

from ..errors import DivisionByZero, GridExhausted
from .exppoly import ExpPoly, LinearMap, product


def canonical_factor(f: ExpPoly):
    """Split ``f`` as ``unit * g`` with ``g`` canonical.

    Returns ``(coef, exponent, g)`` where the unit is ``coef * e^{exponent}``.
    ``g`` is ``None`` when ``f`` is itself a unit.
    """
    if f.is_zero():
        raise DivisionByZero("zero factor in a denominator")
    e0, c0 = min(f.items())
    if f.is_monomial():
        return c0, e0, None
    inv = 1 / Fraction(c0)
    g = f.shift(tuple(-x for x in e0)) * inv
    return c0, e0, g


def _unit_inverse(num: ExpPoly, coef, exp, mult: int) -> ExpPoly:
    return num.shift(tuple(-mult * x for x in exp)) * (1 / Fraction(coef) ** mult)


def _sorted_factors(fdict: dict) -> tuple:
    return tuple(sorted(((f, m) for f, m in fdict.items() if m), key=lambda fm: fm[0].sort_key()))


class RatFrac:
    """Numerator over a product of canonical factors with multiplicities."""

    __slots__ = ("num", "factors")

    def __init__(self, num: ExpPoly, factors: tuple = ()):
        self.num = num
        self.factors = factors

    # constructors
    @classmethod
    def from_poly(cls, p: ExpPoly) -> "RatFrac":
        return cls(p, ())

    @classmethod
    def const(cls, c=1, nvars: int = 2) -> "RatFrac":
        return cls(ExpPoly.const(c, nvars), ())

    @classmethod
    def from_factors(cls, num: ExpPoly, dens: Iterable) -> "RatFrac":
        """Build ``num / prod(f**m)`` from ``(f, m)`` pairs (or bare polys)."""
        fd: dict = {}
        for item in dens:
            f, m = item if isinstance(item, tuple) else (item, 1)
            c, e, g = canonical_factor(f)
            num = _unit_inverse(num, c, e, m)
            if g is not None:
                fd[g] = fd.get(g, 0) + m
        return cls(num, _sorted_factors(fd))

    @classmethod
    def from_polys(cls, num: ExpPoly, den: ExpPoly) -> "RatFrac":
        return cls.from_factors(num, [(den, 1)])

    # views
    @property
    def numerator(self) -> ExpPoly:
        return self.num

    @property
    def denominator(self) -> ExpPoly:
        """Expanded denominator."""
        polys = [f for f, m in self.factors for _ in range(m)]
        n = max([self.num.nvars] + [f.nvars for f in polys])
        return product(polys).widen(n) if polys else ExpPoly.const(1, n)

    @property
    def nvars(self) -> int:
        return max([self.num.nvars] + [f.nvars for f, _ in self.factors])

    def factor_dict(self) -> dict:
        return dict(self.factors)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    # arithmetic
    def _coerce(self, other) -> "RatFrac":
        if isinstance(other, RatFrac):
            return other
        if isinstance(other, ExpPoly):
            return RatFrac(other, ())
        if isinstance(other, FracSum):
            return other.collapse()
        return RatFrac(ExpPoly.const(other, self.num.nvars), ())

    def __add__(self, other):
        if isinstance(other, FracSum):
            return FracSum([self]) + other
        return frac_sum([self, self._coerce(other)])

    __radd__ = __add__

    def __neg__(self):
        return RatFrac(-self.num, self.factors)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FracSum):
            return FracSum([self]) * other
        if not isinstance(other, RatFrac):
            if isinstance(other, ExpPoly):
                return RatFrac(self.num * other, self.factors)
            return RatFrac(self.num * other, self.factors)
        fd = dict(self.factors)
        for f, m in other.factors:
            fd[f] = fd.get(f, 0) + m
        return RatFrac(self.num * other.num, _sorted_factors(fd))

    __rmul__ = __mul__

    def inverse(self) -> "RatFrac":
        if self.num.is_zero():
            raise DivisionByZero("inverse of a zero fraction")
        top = product([f for f, m in self.factors for _ in range(m)]) if self.factors else ExpPoly.const(1, self.nvars)
        return RatFrac.from_factors(top.widen(self.nvars), [(self.num, 1)])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise DivisionByZero("division by a fraction with zero numerator")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFrac.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def scale_monomial(self, exps_quarters, coef=1) -> "RatFrac":
        return RatFrac(self.num.shift(exps_quarters) * coef, self.factors)

    def substitute(self, lmap: LinearMap) -> "RatFrac":
        num = lmap.apply(self.num)
        return RatFrac.from_factors(num, [(lmap.apply(f), m) for f, m in self.factors])

    def __eq__(self, other):
        if isinstance(other, (RatFrac, FracSum, ExpPoly, int, Fraction)):
            return frac_equal(self, other)
        return NotImplemented

    __hash__ = None

    def evaluate(self, values) -> Fraction:
        d = Fraction(1)
        for f, m in self.factors:
            d *= f.evaluate(values) ** m
        if d == 0:
            raise DivisionByZero("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def __repr__(self):
        den = " * ".join(f"({f.to_text()})^{m}" for f, m in self.factors) or "1"
        return f"RatFrac(({self.num.to_text()}) / {den})"

    def to_json(self) -> dict:
        return {
            "num_terms": self.num.to_json(),
            "den_terms": self.denominator.to_json(),
            "den_factors": [[f.to_json(), m] for f, m in self.factors],
        }

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> "RatFrac":
        num = ExpPoly.from_json(data["num_terms"], nvars)
        if "den_factors" in data:
            fd = {ExpPoly.from_json(f, nvars): m for f, m in data["den_factors"]}
            return cls(num, _sorted_factors(fd))
        return cls.from_polys(num, ExpPoly.from_json(data["den_terms"], nvars))


def lcm_factors(fracs: Iterable[RatFrac]) -> dict:
    out: dict = {}
    for fr in fracs:
        for f, m in fr.factors:
            if out.get(f, 0) < m:
                out[f] = m
    return out


def _lift_numerator(fr: RatFrac, lcm: dict, nvars: int) -> ExpPoly:
    have = dict(fr.factors)
    extra = [f for f, m in lcm.items() for _ in range(m - have.get(f, 0))]
    return product([fr.num.widen(nvars)] + extra).widen(nvars)


def frac_sum(fracs: Iterable[RatFrac], workers: int = 1) -> RatFrac:
    """Exact sum over the least common multiple of the factor multisets."""
    groups: dict = {}
    nvars = 2
    for fr in fracs:
        nvars = max(nvars, fr.nvars)
        groups[fr.factors] = groups.get(fr.factors, ExpPoly.zero(nvars)) + fr.num
    parts = [RatFrac(num, fac) for fac, num in groups.items() if not num.is_zero()]
    if not parts:
        return RatFrac(ExpPoly.zero(nvars), ())
    if len(parts) == 1:
        return RatFrac(parts[0].num.widen(nvars), parts[0].factors)
    lcm = lcm_factors(parts)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            lifted = list(ex.map(lambda fr: _lift_numerator(fr, lcm, nvars), parts))
    else:
        lifted = [_lift_numerator(fr, lcm, nvars) for fr in parts]
    num = ExpPoly.zero(nvars)
    for p in lifted:
        num = num + p
    return RatFrac(num, _sorted_factors(lcm))


def frac_arith(a: RatFrac, b: RatFrac, kind: str) -> RatFrac:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown kind {kind!r}")


def _as_frac(x) -> "RatFrac":
    if isinstance(x, RatFrac):
        return x
    if isinstance(x, FracSum):
        return x.collapse()
    if isinstance(x, ExpPoly):
        return RatFrac(x, ())
    return RatFrac(ExpPoly.const(x), ())


def difference_numerator(a, b) -> ExpPoly:
    """Numerator of ``a - b`` over the LCM of both denominators.

    It is the zero polynomial exactly when ``a == b``; otherwise it is the
    witness reported by the identity checks.
    """
    if isinstance(a, FracSum) or isinstance(b, FracSum):
        d = FracSum.coerce(a) - FracSum.coerce(b)
        return d.collapse().num
    a, b = _as_frac(a), _as_frac(b)
    return frac_sum([a, -b]).num


def frac_equal(a, b, mode: str = "cross-mul", budget: int = 200_000) -> bool:
    """Exact equality test.

    ``cross-mul`` expands the numerator of the difference.  ``grid``
    evaluates the same numerator, in product form, on a full tensor grid whose
    size in each variable exceeds the exponent span, which certifies the
    identity without expanding anything.
    """
    if mode == "cross-mul":
        return difference_numerator(a, b).is_zero()
    if mode == "grid":
        return _grid_zero(_as_frac(a), _as_frac(b), budget)
    raise ValueError(f"unknown mode {mode!r}")


def _grid_zero(a: RatFrac, b: RatFrac, budget: int) -> bool:
    n = max(a.nvars, b.nvars)
    lcm = lcm_factors([a, b])
    sides = []
    for sign, fr in ((1, a), (-1, b)):
        have = dict(fr.factors)
        polys = [fr.num.widen(n)] + [f.widen(n) for f, m in lcm.items() for _ in range(m - have.get(f, 0))]
        sides.append((sign, polys))
    if all(p.is_zero() for _, ps in sides for p in ps[:1]):
        return True
    # per-variable gcd and span of the difference polynomial
    from math import gcd
    g = [0] * n
    lo = [None] * n
    hi = [None] * n
    for _, polys in sides:
        slo = [0] * n
        shi = [0] * n
        for p in polys:
            if p.is_zero():
                continue
            for e, _ in p.items():
                for i, x in enumerate(e):
                    g[i] = gcd(g[i], x)
            plo, phi = p.exponent_bounds()
            for i in range(n):
                slo[i] += int(plo[i])
                shi[i] += int(phi[i])
        for i in range(n):
            lo[i] = slo[i] if lo[i] is None else min(lo[i], slo[i])
            hi[i] = shi[i] if hi[i] is None else max(hi[i], shi[i])
    sizes = []
    for i in range(n):
        span = (hi[i] - lo[i]) // g[i] if g[i] else 0
        sizes.append(span + 1)
    total = 1
    for s in sizes:
        total *= s
    if total > budget:
        raise GridExhausted(f"grid of {total} points exceeds the budget of {budget}")
    axes = [[Fraction(k + 2) for k in range(s)] for s in sizes]
    # each axis value stands for exp(symbol_i * g_i / 4)
    for vals in itertools.product(*axes):
        total_val = Fraction(0)
        for sign, polys in sides:
            t = Fraction(sign)
            for p in polys:
                t *= _eval_reduced(p, vals, g)
                if t == 0:
                    break
            total_val += t
        if total_val != 0:
            return False
    return True


def _eval_reduced(p: ExpPoly, vals, g) -> Fraction:
    total = Fraction(0)
    for e, c in p.items():
        t = Fraction(c)
        for x, v, gi in zip(e, vals, g):
            if x:
                t *= v ** (x // gi)
        total += t
    return total


class FracSum:
    """Unevaluated sum of fractions, grouped by denominator.

    Products distribute over the summands, so multiplying two localization
    sums stays a short list of simple fractions.  :meth:`collapse` forms the
    single fraction over the LCM denominator.
    """

    __slots__ = ("groups", "nvars")

    def __init__(self, fracs: Iterable[RatFrac] = (), nvars: int = 2):
        groups: dict = {}
        for fr in fracs:
            nvars = max(nvars, fr.nvars)
            cur = groups.get(fr.factors)
            groups[fr.factors] = fr.num if cur is None else cur + fr.num
        self.groups = {k: v for k, v in groups.items() if not v.is_zero()}
        self.nvars = nvars

    @classmethod
    def coerce(cls, x) -> "FracSum":
        if isinstance(x, FracSum):
            return x
        return cls([_as_frac(x)])

    def summands(self) -> list:
        return [RatFrac(num, fac) for fac, num in self.groups.items()]

    def __len__(self):
        return len(self.groups)

    def is_zero(self) -> bool:
        return self.collapse().is_zero()

    def collapse(self, workers: int = 1) -> RatFrac:
        return frac_sum(self.summands(), workers=workers)

    def __add__(self, other):
        other = FracSum.coerce(other)
        return FracSum(self.summands() + other.summands(), max(self.nvars, other.nvars))

    __radd__ = __add__

    def __neg__(self):
        return FracSum([-fr for fr in self.summands()], self.nvars)

    def __sub__(self, other):
        return self + (-FracSum.coerce(other))

    def __rsub__(self, other):
        return FracSum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ExpPoly)):
            return FracSum([fr * other for fr in self.summands()], self.nvars)
        other = FracSum.coerce(other)
        out = []
        for x in self.summands():
            for y in other.summands():
                out.append(x * y)
        return FracSum(out, max(self.nvars, other.nvars))

    __rmul__ = __mul__

    def scale_monomial(self, exps_quarters, coef=1) -> "FracSum":
        return FracSum([fr.scale_monomial(exps_quarters, coef) for fr in self.summands()], self.nvars)

    def substitute(self, lmap: LinearMap) -> "FracSum":
        return FracSum([fr.substitute(lmap) for fr in self.summands()], lmap.nvars_out)

    def __eq__(self, other):
        if isinstance(other, (RatFrac, FracSum, ExpPoly, int, Fraction)):
            return frac_equal(self, other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"FracSum({len(self.groups)} summands)"


def as_ratfrac(x) -> RatFrac:
    return _as_frac(x)

