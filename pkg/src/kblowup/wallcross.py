"""Residue kernels of the wall-crossing formula over truncated cohomology rings.

Everything here is evaluated over caller-supplied Chern data, with the
equivariant parameters and masses set to zero.  The ring is
Q[h]/(h^r) (the cohomology of P^{r-1}) with optional extra nilpotent symbols.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .algebra.laurent import LaurentSeries, x_transform
from .errors import NonInvertible, RangeViolation


class TruncRing:
    """Q[h, s_1, ...] truncated by h^r = 0, s_i^{n_i} = 0 and an optional degree cap."""

    def __init__(self, r: int, symbols: dict | None = None, max_degree: int | None = None):
        if r < 1:
            raise ValueError("rank must be positive")
        self.r = r
        self.names = ("h",) + tuple(symbols or {})
        self.degrees = (1,) + tuple(d for d, _ in (symbols or {}).values())
        self.orders = (r,) + tuple(n for _, n in (symbols or {}).values())
        self.max_degree = max_degree

    def __eq__(self, other):
        return isinstance(other, TruncRing) and (self.names, self.degrees, self.orders, self.max_degree) == (
            other.names, other.degrees, other.orders, other.max_degree)

    def __hash__(self):
        return hash((self.names, self.degrees, self.orders, self.max_degree))

    def _ok(self, mono: tuple) -> bool:
        if any(e >= n for e, n in zip(mono, self.orders)):
            return False
        if self.max_degree is not None and sum(e * d for e, d in zip(mono, self.degrees)) > self.max_degree:
            return False
        return True

    def elem(self, terms: dict | None = None) -> "RingElem":
        return RingElem(self, terms or {})

    def const(self, c) -> "RingElem":
        return RingElem(self, {(0,) * len(self.names): Fraction(c)})

    def one(self) -> "RingElem":
        return self.const(1)

    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def gen(self, name: str = "h") -> "RingElem":
        i = self.names.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return RingElem(self, {mono: Fraction(1)})


class RingElem:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: TruncRing, terms: dict):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in terms.items() if c and ring._ok(m)}

    def _lift(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            return other
        return self.ring.const(other)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring.names), Fraction(0))

    def is_unit(self) -> bool:
        return self.constant_term() != 0

    def coefficient(self, **powers) -> Fraction:
        mono = tuple(powers.get(n, 0) for n in self.ring.names)
        return self.terms.get(mono, Fraction(0))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return RingElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RingElem):
            if isinstance(other, (int, Fraction)):
                return RingElem(self.ring, {m: c * other for m, c in self.terms.items()})
            return NotImplemented
        out: dict = {}
        for (ma, ca), (mb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            m = tuple(x + y for x, y in zip(ma, mb))
            if self.ring._ok(m):
                out[m] = out.get(m, 0) + ca * cb
        return RingElem(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, RingElem):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def nilpotent_part(self) -> "RingElem":
        return self - self.constant_term()

    def inverse(self) -> "RingElem":
        c0 = self.constant_term()
        if c0 == 0:
            raise NonInvertible("ring element has zero constant term")
        u = self.nilpotent_part() * (1 / c0)
        out, power, sign = self.ring.one(), self.ring.one(), 1
        while True:
            power = power * u
            if power.is_zero():
                break
            sign = -sign
            out = out + power * sign
        return out * (1 / c0)

    def exp(self) -> "RingElem":
        """exp of a nilpotent element."""
        if self.constant_term() != 0:
            raise NonInvertible("exp needs a nilpotent argument")
        out, power, k = self.ring.one(), self.ring.one(), 0
        while True:
            k += 1
            power = power * self
            if power.is_zero():
                return out
            out = out + power * Fraction(1, factorial(k))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            fac = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.ring.names, m) if e]
            parts.append("*".join([str(self.terms[m])] + fac))
        return " + ".join(parts)

    def __repr__(self):
        return self.to_text()


@dataclass(frozen=True)
class ClassData:
    """Virtual rank and Chern classes c_1, c_2, ...; ``lines`` keeps the roots when known.

    ``lines`` is a tuple of (multiplicity, c_1) pairs describing the class as
    a virtual sum of line bundles; only the K-theoretic Euler class needs it.
    """

    rank: int
    chern: tuple
    lines: tuple | None = None

    @classmethod
    def from_lines(cls, ring: TruncRing, lines) -> "ClassData":
        lines = tuple((int(m), c if isinstance(c, RingElem) else ring.const(c)) for m, c in lines)
        total = ring.one()
        for m, c in lines:
            total = total * (ring.one() + c) ** m
        top = ring.r + sum(ring.orders[1:])
        chern = []
        for i in range(1, top + 1):
            chern.append(_degree_part(total, i))
        while chern and chern[-1].is_zero():
            chern.pop()
        return cls(sum(m for m, _ in lines), tuple(chern), lines)

    def chern_class(self, i: int, ring: TruncRing) -> RingElem:
        if i == 0:
            return ring.one()
        return self.chern[i - 1] if i <= len(self.chern) else ring.zero()


def _degree_part(x: RingElem, deg: int) -> RingElem:
    return RingElem(x.ring, {m: c for m, c in x.terms.items()
                             if sum(e * d for e, d in zip(m, x.ring.degrees)) == deg})


# ---- Laurent polynomials in several hbar variables --------------------------

class HbarPoly:
    """Finite Laurent polynomial in hbar_1..hbar_j with RingElem coefficients."""

    __slots__ = ("ring", "nh", "terms")

    def __init__(self, ring: TruncRing, nh: int, terms: dict | None = None):
        self.ring = ring
        self.nh = nh
        self.terms = {e: c for e, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, ring, nh, c) -> "HbarPoly":
        c = c if isinstance(c, RingElem) else ring.const(c)
        return cls(ring, nh, {(0,) * nh: c})

    @classmethod
    def hbar(cls, ring, nh, i: int, scale=1) -> "HbarPoly":
        e = tuple(1 if k == i else 0 for k in range(nh))
        return cls(ring, nh, {e: ring.const(scale)})

    def _lift(self, other) -> "HbarPoly":
        if isinstance(other, HbarPoly):
            return other
        return HbarPoly.const(self.ring, self.nh, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return HbarPoly(self.ring, self.nh, out)

    __radd__ = __add__

    def __neg__(self):
        return HbarPoly(self.ring, self.nh, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for (ea, ca), (eb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(x + y for x, y in zip(ea, eb))
            t = ca * cb
            out[e] = out[e] + t if e in out else t
        return HbarPoly(self.ring, self.nh, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use an explicit inverse")
        out = HbarPoly.const(self.ring, self.nh, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (HbarPoly, RingElem, int, Fraction)):
            return not (self - other).terms
        return NotImplemented

    __hash__ = None

    def coefficient(self, exps: tuple) -> RingElem:
        return self.terms.get(tuple(exps), self.ring.zero())

    def residue(self) -> RingElem:
        """Iterated residue Res_{hbar_j} ... Res_{hbar_1}: the hbar_1^-1 ... hbar_j^-1 coefficient."""
        return self.coefficient((-1,) * self.nh)

    def swap(self, i: int, k: int) -> "HbarPoly":
        out = {}
        for e, c in self.terms.items():
            e = list(e)
            e[i], e[k] = e[k], e[i]
            out[tuple(e)] = c
        return HbarPoly(self.ring, self.nh, out)

    def to_laurent(self, var: str = "hbar") -> LaurentSeries:
        if self.nh != 1:
            raise ValueError("only single-variable polynomials convert to LaurentSeries")
        return LaurentSeries({e[0]: c for e, c in self.terms.items()}, None, var)

    def __repr__(self):
        return " + ".join(f"({c.to_text()})*hbar^{e}" for e, c in sorted(self.terms.items())) or "0"


def euler_twist(alpha: ClassData, n, ring: TruncRing, index: int = 0, nh: int = 1) -> HbarPoly:
    """e(alpha (x) I_n) = sum_i c_i(alpha) (n hbar)^{rank - i}."""
    n = Fraction(n)
    out = HbarPoly(ring, nh)
    for i in range(len(alpha.chern) + 1):
        c = alpha.chern_class(i, ring)
        p = alpha.rank - i
        if n == 0:
            if p == 0:
                out = out + HbarPoly.const(ring, nh, c)
            continue
        e = tuple(p if k == index else 0 for k in range(nh))
        out = out + HbarPoly(ring, nh, {e: c * (n ** p)})
    return out


def euler_twist_inverse(alpha: ClassData, n, ring: TruncRing, index: int = 0, nh: int = 1) -> HbarPoly:
    """1 / e(alpha (x) I_n), expanded in hbar^-1; exact since the Chern classes are nilpotent."""
    n = Fraction(n)
    if n == 0:
        if alpha.rank == 0:
            c0 = euler_twist(alpha, n, ring, index, nh).coefficient((0,) * nh)
            return HbarPoly.const(ring, nh, c0.inverse())
        raise NonInvertible("e(alpha (x) I_0) of nonzero rank is nilpotent")
    # e = (n hbar)^rank (1 + u), u = sum_{i>=1} c_i (n hbar)^{-i}
    u = HbarPoly(ring, nh)
    for i in range(1, len(alpha.chern) + 1):
        e = tuple(-i if k == index else 0 for k in range(nh))
        u = u + HbarPoly(ring, nh, {e: alpha.chern_class(i, ring) * (n ** -i)})
    geo = HbarPoly.const(ring, nh, 1)
    power = HbarPoly.const(ring, nh, 1)
    while True:
        power = power * (-u)
        if not power.terms:
            break
        geo = geo + power
    lead = tuple(-alpha.rank if k == index else 0 for k in range(nh))
    return geo * HbarPoly(ring, nh, {lead: ring.const(n ** -alpha.rank)})


def psi_kernel(j: int, m: int, n_out: ClassData, n_in: ClassData, phi, ring: TruncRing,
               residue: bool = True):
    """Wall-crossing kernel with j exceptional summands.

    ``n_out`` is N(E, C_m), ``n_in`` is N(C_m, E); ``phi`` maps the list of
    hbar generators to an HbarPoly (the insertion evaluated on
    E + sum C_m (x) e^{-hbar_i}).  ``m`` only labels the chamber: the data
    passed in already refer to it.  Returns the iterated residue, or the
    kernel itself with ``residue=False``.
    """
    if j < 1:
        raise ValueError("j must be positive")
    hb = [HbarPoly.hbar(ring, j, i) for i in range(j)]
    k = HbarPoly.const(ring, j, Fraction(1, factorial(j)))
    for i1 in range(j):
        for i2 in range(j):
            if i1 != i2:
                k = k * (hb[i2] - hb[i1])
    for i in range(j):
        k = k * euler_twist_inverse(n_out, -1, ring, i, j) * euler_twist_inverse(n_in, 1, ring, i, j)
    k = k * phi(hb)
    return k.residue() if residue else k


def integrate_proj(r: int, x):
    """Push-forward to a point from P^{r-1}: the coefficient of h^{r-1}.

    Returns a rational when the ring has no other symbols, otherwise the
    RingElem multiplying h^{r-1}.
    """
    if isinstance(x, (int, Fraction)):
        return Fraction(x) if r == 1 else Fraction(0)
    ring = x.ring
    if ring.r != r:
        raise ValueError("ring rank does not match")
    part = {(0,) + m[1:]: c for m, c in x.terms.items() if m[0] == r - 1}
    if len(ring.names) == 1:
        return part.get((0,), Fraction(0))
    return RingElem(ring, part)


# ---- the rank-r, c2 = 1 example ---------------------------------------------

def example_ring(r: int) -> TruncRing:
    return TruncRing(r)


def example_data(r: int):
    """N(E, C_0) = O(-1) and N(C_0, E) = O(1)^2 + S with S = r O - O(1)."""
    ring = example_ring(r)
    h = ring.gen("h")
    n_out = ClassData.from_lines(ring, [(1, -h)])
    n_in = ClassData.from_lines(ring, [(2, h), (r, ring.zero()), (-1, h)])
    return ring, n_out, n_in


def example_phi(r: int, nf: int):
    """mu(C)^{2r-nf} prod_f (m_f - hbar) at eps = m_f = 0: (-h - hbar)^{2r-nf} (-hbar)^nf."""
    def phi(hb):
        ring = hb[0].ring
        hbar = hb[0]
        h = HbarPoly.const(ring, 1, ring.gen("h"))
        return (-h - hbar) ** (2 * r - nf) * (-hbar) ** nf
    return phi


def example_integrand(r: int, nf: int) -> HbarPoly:
    """-hbar^{nf-r} (h + hbar)^{2r-nf-2}, with negative powers expanded in hbar^-1."""
    ring = example_ring(r)
    k = 2 * r - nf - 2
    line = ClassData.from_lines(ring, [(1, ring.gen("h"))])
    base = euler_twist(line, 1, ring) ** k if k >= 0 else euler_twist_inverse(line, 1, ring) ** (-k)
    mono = HbarPoly(ring, 1, {(nf - r,): ring.const(-1)})
    return mono * base


def example_blowup_coeff(r: int, nf: int) -> Fraction:
    if r < 1 or nf < 0 or 2 * r - nf < 1:
        raise RangeViolation(f"need r >= 1, nf >= 0 and 2r - nf >= 1, got r={r}, nf={nf}")
    ring, n_out, n_in = example_data(r)
    res = psi_kernel(1, 0, n_out, n_in, example_phi(r, nf), ring)
    return integrate_proj(r, res)


def generalized_binomial(n: int, k: int) -> Fraction:
    """n (n-1) ... (n-k+1) / k! for any integer n."""
    if k < 0:
        return Fraction(0)
    if n >= 0:
        return Fraction(comb(n, k))
    out = Fraction(1)
    for i in range(k):
        out *= n - i
    return out / factorial(k)


def example_closed_form(r: int, nf: int) -> Fraction:
    return -generalized_binomial(2 * r - nf - 2, r - 1)


# ---- K-theoretic kernel and the x = e^{-hbar} - 1 change of variables --------

def _series_inverse(s: LaurentSeries, prec: int) -> LaurentSeries:
    """Inverse of a series whose low coefficients may be nilpotent ring elements.

    Split s = L + P with P starting at the first unit coefficient; then
    1/s = P^{-1} sum_k (-L P^{-1})^k, a finite sum because L is nilpotent.
    """
    v = None
    for k in sorted(s.coeffs):
        c = s.coeffs[k]
        unit = c.is_unit() if isinstance(c, RingElem) else c != 0
        if unit:
            v = k
            break
    if v is None:
        raise NonInvertible("no unit coefficient within the precision")
    low = LaurentSeries({k: c for k, c in s.coeffs.items() if k < v}, None, s.var)
    high = LaurentSeries({k: c for k, c in s.coeffs.items() if k >= v}, s.prec, s.var)
    pinv = high.inverse(prec)
    if not low.coeffs:
        return pinv
    step = -(low * pinv)
    out, power = pinv, pinv
    while True:
        power = power * step
        if all(_nil_zero(c) for c in power.coeffs.values()):
            return out
        out = out + power


def _nil_zero(c) -> bool:
    return c.is_zero() if isinstance(c, RingElem) else c == 0


def _ek_line(ring: TruncRing, c1: RingElem, w: LaurentSeries, prec: int) -> LaurentSeries:
    """e^K(L (x) w) = 1 - e^{-c1(L)} w^{-1} for a line bundle L."""
    return 1 - _series_inverse(w, prec) * (-c1).exp()


def ek_twisted(alpha: ClassData, ring: TruncRing, w: LaurentSeries, prec: int) -> LaurentSeries:
    if alpha.lines is None:
        raise ValueError("K-theoretic Euler class needs the line-bundle roots")
    out = LaurentSeries.const(ring.one(), w.var)
    for mult, c1 in alpha.lines:
        f = _ek_line(ring, c1, w, prec)
        if mult < 0:
            f = _series_inverse(f, prec)
        for _ in range(abs(mult)):
            out = out * f
    return out


def k_kernel_builder(r: int, prec: int, d: int = 0):
    """f(X) = (1+X)^d / (e^K(N(E,C_0) (x) (1+X)) e^K(N(C_0,E) (x) (1+X)^{-1})) on the example data.

    At eps = 0, exp(-d ch_2(C_0 (x) (1+x))/[C]) is (1+x)^d since ch_1(C_0)/[C] = -1.
    """
    ring, n_out, n_in = example_data(r)

    def build(X: LaurentSeries) -> LaurentSeries:
        one = LaurentSeries.const(ring.one(), X.var)
        w = one + X * ring.one()
        winv = _series_inverse(w, prec)
        den = ek_twisted(n_out, ring, w, prec) * ek_twisted(n_in, ring, winv, prec)
        num = w ** d if d >= 0 else winv ** (-d)
        return num * _series_inverse(den, prec)

    return ring, build


def k_kernel_residues(r: int, d: int = 0, prec: int | None = None):
    """Residue of the example K-kernel in hbar and, via x = e^{-hbar} - 1, in x."""
    prec = prec if prec is not None else 3 * r + abs(d) + 8
    ring, build = k_kernel_builder(r, prec, d)
    in_hbar, in_x = x_transform(build, prec)
    return in_hbar.residue(), in_x.residue()
