"""Laurent polynomials in exponentials of the equivariant parameters.

An :class:`ExpPoly` is a finite sum ``c * exp(x_1 eps1 + x_2 eps2 + x_3 a1 + ...)``
with rational coefficients and exponents on the quarter-integer lattice.
Exponents are stored as integers in units of 1/4.  The basis is always
``(eps1, eps2, a1, ..., ar)``; polynomials with fewer variables are padded
with zeros when combined with wider ones.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ..errors import LatticeOverflow
from . import kernels

QUARTER = 4
_SMALL_PRODUCT = 96  # below this many term pairs a dict loop beats packing


def _norm_coef(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def to_quarters(x) -> int:
    """Convert an exact rational exponent to quarter units."""
    q = Fraction(x) * QUARTER
    if q.denominator != 1:
        raise LatticeOverflow(f"exponent {x} is not on the 1/4 lattice")
    return q.numerator


def basis_names(nvars: int) -> list[str]:
    return ["ε1", "ε2"][:nvars] + [f"a{i}" for i in range(1, nvars - 1)]


def _pad(e: tuple, n: int) -> tuple:
    return e if len(e) == n else e + (0,) * (n - len(e))


class ExpPoly:
    """Immutable exponential Laurent polynomial.

    ``terms`` maps exponent tuples (quarter units) to nonzero coefficients.
    """

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _norm_coef(c)
                if c:
                    clean[tuple(int(x) for x in e)] = c
        if nvars is None:
            nvars = max((len(e) for e in clean), default=2)
        n = max([nvars] + [len(e) for e in clean])
        if any(len(e) != n for e in clean):
            clean = {_pad(e, n): c for e, c in clean.items()}
        self._terms = clean
        self.nvars = n
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "ExpPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.nvars = nvars
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def const(cls, c=1, nvars: int = 2) -> "ExpPoly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def zero(cls, nvars: int = 2) -> "ExpPoly":
        return cls._raw({}, nvars)

    @classmethod
    def monomial(cls, exps, coef=1, nvars: int | None = None) -> "ExpPoly":
        """Monomial from exponents given as exact rationals (not quarter units)."""
        q = tuple(to_quarters(x) for x in exps)
        n = nvars if nvars is not None else len(q)
        return cls({_pad(q, n): coef}, n)

    @classmethod
    def from_quarters(cls, exps, coef=1, nvars: int | None = None) -> "ExpPoly":
        q = tuple(int(x) for x in exps)
        n = nvars if nvars is not None else len(q)
        return cls({_pad(q, n): coef}, n)

    # basic access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list:
        return sorted(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, 0)

    def widen(self, n: int) -> "ExpPoly":
        if n <= self.nvars:
            return self
        return ExpPoly._raw({_pad(e, n): c for e, c in self._terms.items()}, n)

    def _pair(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other, self.nvars)
        n = max(self.nvars, other.nvars)
        return self.widen(n), other.widen(n), n

    # ring operations
    def __add__(self, other):
        a, b, n = self._pair(other)
        out = dict(a._terms)
        for e, c in b._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm_coef(v)
            else:
                out.pop(e, None)
        return ExpPoly._raw(out, n)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        a, b, _ = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            other = _norm_coef(other)
            if not other:
                return ExpPoly.zero(self.nvars)
            return ExpPoly._raw({e: _norm_coef(c * other) for e, c in self._terms.items()}, self.nvars)
        a, b, n = self._pair(other)
        if not a._terms or not b._terms:
            return ExpPoly.zero(n)
        if len(a._terms) * len(b._terms) <= _SMALL_PRODUCT:
            return _dict_mul(a, b, n)
        return product([a, b])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        return product([self] * k) if k else ExpPoly.const(1, self.nvars)

    def __truediv__(self, c):
        c = Fraction(c)
        return self * (1 / c)

    def dual(self) -> "ExpPoly":
        """Negate every exponent tuple."""
        return ExpPoly._raw({tuple(-x for x in e): c for e, c in self._terms.items()}, self.nvars)

    def adams(self, p: int) -> "ExpPoly":
        """Scale every exponent tuple by ``p``."""
        out: dict = {}
        for e, c in self._terms.items():
            k = tuple(p * x for x in e)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return ExpPoly._raw(out, self.nvars)

    def shift(self, exps_quarters) -> "ExpPoly":
        """Multiply by the monomial with the given quarter-unit exponents."""
        s = tuple(exps_quarters)
        n = max(self.nvars, len(s))
        s = _pad(s, n)
        return ExpPoly._raw({tuple(x + y for x, y in zip(_pad(e, n), s)): c for e, c in self._terms.items()}, n)

    def substitute(self, lmap: "LinearMap") -> "ExpPoly":
        return lmap.apply(self)

    # comparisons
    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            if isinstance(other, (int, Fraction)):
                other = ExpPoly.const(other, self.nvars)
            else:
                return NotImplemented
        a, b, _ = self._pair(other)
        return a._terms == b._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((_trim(e), c) for e, c in self._terms.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple(self.sorted_items())

    # exponent statistics
    def exponent_bounds(self):
        """Per-variable (min, max) exponent arrays in quarter units."""
        arr = np.array(list(self._terms), dtype=np.int64).reshape(-1, self.nvars)
        return arr.min(axis=0), arr.max(axis=0)

    def rank(self):
        """Sum of coefficients, i.e. the virtual rank of a character."""
        return _norm_coef(sum(self._terms.values(), 0))

    def exponent_rationals(self, e) -> tuple:
        return tuple(Fraction(x, QUARTER) for x in e)

    def evaluate(self, values) -> Fraction:
        """Evaluate with ``exp(symbol_i / 4)`` replaced by ``values[i]``."""
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for x, v in zip(e, values):
                if x:
                    t *= Fraction(v) ** x
            total += t
        return total

    # text and json
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        names = basis_names(self.nvars)
        parts = []
        for e, c in self.sorted_items():
            s = str(c)
            for name, x in zip(names, e):
                if x:
                    f = Fraction(x, QUARTER)
                    s += f" * e[{name}]^({f})"
            parts.append(s)
        return " + ".join(parts)

    def __repr__(self):
        return f"ExpPoly({self.to_text()})"

    __str__ = to_text

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.sorted_items()]

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> "ExpPoly":
        return cls({tuple(e): Fraction(c) for e, c in data}, nvars)


def _trim(e: tuple) -> tuple:
    n = len(e)
    while n and e[n - 1] == 0:
        n -= 1
    return e[:n]


def _dict_mul(a: ExpPoly, b: ExpPoly, n: int) -> ExpPoly:
    out: dict = {}
    for ea, ca in a._terms.items():
        for eb, cb in b._terms.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return ExpPoly._raw({e: _norm_coef(c) for e, c in out.items()}, n)


def _integerize(p: ExpPoly):
    """Return (int coefficient list, common denominator)."""
    den = 1
    for c in p._terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p._terms.values()], den


def product(polys: Iterable[ExpPoly]) -> ExpPoly:
    """Expand a product of polynomials with a single key packing.

    All factors are packed against the bit layout of the final result, so
    the intermediate products never need unpacking.  Falls back to the dict
    loop when the packed key would not fit in 62 bits.
    """
    polys = list(polys)
    if not polys:
        return ExpPoly.const(1)
    n = max(p.nvars for p in polys)
    polys = [p.widen(n) for p in polys]
    if any(p.is_zero() for p in polys):
        return ExpPoly.zero(n)
    # pull out monomials: they only shift exponents and scale coefficients
    shift = [0] * n
    scale: object = 1
    rest = []
    for p in polys:
        if p.is_monomial():
            (e, c), = p._terms.items()
            shift = [x + y for x, y in zip(shift, e)]
            scale = scale * c
        else:
            rest.append(p)
    if not rest:
        return ExpPoly._raw({tuple(shift): _norm_coef(scale)}, n)
    if len(rest) == 1:
        res = rest[0]
    else:
        res = _packed_product(rest, n)
    if any(shift):
        res = res.shift(shift)
    if scale != 1:
        res = res * scale
    return res


def _packed_product(polys: list, n: int) -> ExpPoly:
    bounds = [p.exponent_bounds() for p in polys]
    lo = sum(b[0] for b in bounds)
    hi = sum(b[1] for b in bounds)
    span = hi - lo
    bits = [max(1, int(s).bit_length()) for s in span]
    if sum(bits) > 62:
        res = polys[0]
        for p in polys[1:]:
            res = _dict_mul(res, p, n)
        return res
    shifts = np.zeros(n, dtype=np.int64)
    acc = 0
    for i in range(n - 1, -1, -1):
        shifts[i] = acc
        acc += bits[i]
    total_den = 1
    keys = None
    coefs = None
    for p, (plo, _) in zip(polys, bounds):
        arr = np.array(list(p._terms), dtype=np.int64).reshape(-1, n)
        k = ((arr - plo) << shifts).sum(axis=1)
        ints, den = _integerize(p)
        total_den *= den
        c = kernels.to_int64_if_safe(np.array(ints, dtype=object))
        if keys is None:
            order = np.argsort(k)
            keys, coefs = k[order], c[order]
        else:
            keys, coefs = kernels.mul_packed(keys, coefs, k, c)
    masks = [(1 << b) - 1 for b in bits]
    cols = [((keys >> int(shifts[i])) & masks[i]) + int(lo[i]) for i in range(n)]
    exps = np.stack(cols, axis=1).tolist()
    if total_den == 1:
        terms = {tuple(e): int(c) for e, c in zip(exps, coefs.tolist())}
    else:
        terms = {tuple(e): _norm_coef(Fraction(int(c), total_den)) for e, c in zip(exps, coefs.tolist())}
    return ExpPoly._raw(terms, n)


def poly_arith(a: ExpPoly, b: ExpPoly | None, kind: str) -> ExpPoly:
    """Dispatch by name: ``kind`` is ``add``, ``mul`` or ``negate-exponents``."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "negate-exponents":
        return a.dual()
    raise ValueError(f"unknown kind {kind!r}")


class LinearMap:
    """Linear substitution of the exponent basis.

    ``images[j]`` is the image of basis symbol ``j`` as a vector of exact
    rationals over the output basis.  Symbols not listed map to themselves.
    """

    def __init__(self, nvars_in: int, images: Mapping[int, Iterable] | None = None, nvars_out: int | None = None):
        self.nvars_in = nvars_in
        self.nvars_out = nvars_out if nvars_out is not None else nvars_in
        m = np.zeros((nvars_in, self.nvars_out), dtype=object)
        for j in range(min(nvars_in, self.nvars_out)):
            m[j, j] = Fraction(1)
        for j, img in (images or {}).items():
            img = list(img)
            img = img + [0] * (self.nvars_out - len(img))
            m[j, :] = [Fraction(x) for x in img]
        self.matrix = m
        q = m * QUARTER
        self._int = all(Fraction(x).denominator == 1 for x in q.ravel())
        self._m4 = np.array([[int(Fraction(x) * QUARTER) for x in row] for row in m], dtype=np.int64) if self._int else None
        self._key = tuple(tuple(row) for row in m.tolist())

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def map_exponent(self, e: tuple) -> tuple:
        e = _pad(tuple(e), self.nvars_in)
        if self._int:
            v = np.array(e, dtype=np.int64) @ self._m4
            if np.any(v % QUARTER):
                raise LatticeOverflow(f"image of exponent {e} leaves the 1/4 lattice")
            return tuple(int(x) // QUARTER for x in v)
        out = []
        for i in range(self.nvars_out):
            s = sum(Fraction(x) * self.matrix[j, i] for j, x in enumerate(e))
            if s.denominator != 1:
                raise LatticeOverflow(f"image of exponent {e} leaves the 1/4 lattice")
            out.append(s.numerator)
        return tuple(out)

    def apply(self, p: ExpPoly) -> ExpPoly:
        if p.nvars > self.nvars_in:
            raise ValueError("polynomial has more variables than the map")
        out: dict = {}
        for e, c in p.items():
            k = self.map_exponent(e)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return ExpPoly._raw(out, self.nvars_out)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self`` applied after ``other``."""
        m = other.matrix.dot(self.matrix)
        return LinearMap(other.nvars_in, {j: list(m[j, :]) for j in range(other.nvars_in)}, self.nvars_out)


def substitute_linear(x, lmap: LinearMap):
    """Apply a linear exponent substitution to an ExpPoly, RatFrac or LamSeries."""
    return x.substitute(lmap)
