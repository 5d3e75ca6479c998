"""Truncated univariate Laurent series over an arbitrary coefficient ring.

Coefficients only need ``+``, ``-``, ``*`` and either ``.inverse()`` or
``1 / c``; zero is tested with ``.is_zero()`` when available.  Series may be
nested (coefficients that are themselves series), which is how iterated
residues in several variables are taken.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

DEFAULT_PREC = 16


def is_zero(c) -> bool:
    f = getattr(c, "is_zero", None)
    if f is not None:
        return f()
    return c == 0


def invert(c):
    f = getattr(c, "inverse", None)
    if f is not None:
        return f()
    return 1 / Fraction(c)


class LaurentSeries:
    """``sum c_k x^k`` known exactly for every ``k < prec``.

    ``prec=None`` marks an exact (finite) Laurent polynomial.
    """

    __slots__ = ("coeffs", "prec", "var")

    def __init__(self, coeffs=None, prec: int | None = None, var: str = "x"):
        cs = {}
        for k, c in (coeffs or {}).items():
            if prec is not None and k >= prec:
                continue
            if not is_zero(c):
                cs[int(k)] = c
        self.coeffs = cs
        self.prec = prec
        self.var = var

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "x") -> "LaurentSeries":
        return cls({k: c}, None, var)

    @classmethod
    def const(cls, c, var: str = "x") -> "LaurentSeries":
        return cls({0: c}, None, var)

    @classmethod
    def exp(cls, rate, prec: int, var: str = "x") -> "LaurentSeries":
        """``exp(rate * x)`` truncated below ``x**prec``; ``rate`` may be a ring element."""
        out = {}
        term = 1
        fact = 1
        for k in range(prec):
            if k:
                term = term * rate
                fact *= k
            out[k] = term * Fraction(1, fact)
        return cls(out, prec, var)

    def is_exact(self) -> bool:
        return self.prec is None

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def _val_or_prec(self):
        v = self.valuation()
        if v is not None:
            return v
        return self.prec if self.prec is not None else 10 ** 9

    def coefficient(self, k: int):
        if self.prec is not None and k >= self.prec:
            raise ValueError(f"coefficient of {self.var}^{k} is beyond the precision {self.prec}")
        return self.coeffs.get(k, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, prec: int) -> "LaurentSeries":
        p = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.coeffs, p, self.var)

    def _lift(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries({0: other}, None, self.var)

    def __add__(self, other):
        other = self._lift(other)
        prec = _min_prec(self.prec, other.prec)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return LaurentSeries(out, prec, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({k: -c for k, c in self.coeffs.items()}, self.prec, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return LaurentSeries({k: c * other for k, c in self.coeffs.items()}, self.prec, self.var)
        va, vb = self._val_or_prec(), other._val_or_prec()
        cands = []
        if other.prec is not None:
            cands.append(va + other.prec)
        if self.prec is not None:
            cands.append(vb + self.prec)
        prec = min(cands) if cands else None
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if prec is not None and k >= prec:
                    continue
                t = a * b
                out[k] = out[k] + t if k in out else t
        return LaurentSeries(out, prec, self.var)

    def __rmul__(self, other):
        return LaurentSeries({k: other * c for k, c in self.coeffs.items()}, self.prec, self.var)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``x**k``."""
        return LaurentSeries({i + k: c for i, c in self.coeffs.items()},
                             None if self.prec is None else self.prec + k, self.var)

    def inverse(self, prec: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse; ``prec`` bounds the result for exact inputs."""
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of a series that vanishes to its precision")
        if self.prec is not None:
            target = self.prec - 2 * v
        else:
            target = prec if prec is not None else DEFAULT_PREC - v
        if self.prec is None and len(self.coeffs) == 1:
            return LaurentSeries({-v: invert(self.coeffs[v])}, None, self.var)
        if prec is not None:
            target = min(target, prec)
        lead_inv = invert(self.coeffs[v])
        n = target + v  # number of coefficients of the unit part
        unit = [self.coeffs.get(v + i, 0) for i in range(max(n, 0))]
        inv = []
        for i in range(max(n, 0)):
            if i == 0:
                inv.append(lead_inv)
                continue
            acc = 0
            for j in range(1, i + 1):
                if not is_zero(unit[j]):
                    acc = acc + unit[j] * inv[i - j]
            inv.append(-(acc * lead_inv) if not is_zero(acc) else 0)
        return LaurentSeries({i - v: c for i, c in enumerate(inv)}, target, self.var)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * invert(other)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentSeries({0: 1}, None, self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def compose_map(self, fn: Callable) -> "LaurentSeries":
        """Apply ``fn`` to every coefficient."""
        return LaurentSeries({k: fn(c) for k, c in self.coeffs.items()}, self.prec, self.var)

    def residue(self):
        """Coefficient of ``x**-1``."""
        return self.coefficient(-1)

    def __repr__(self):
        body = " + ".join(f"({c})*{self.var}^{k}" for k, c in sorted(self.coeffs.items())) or "0"
        tail = "" if self.prec is None else f" + O({self.var}^{self.prec})"
        return body + tail


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def residue_hbar(x):
    """Coefficient of ``hbar**-1`` of a Laurent series (or of each ring coefficient)."""
    res = getattr(x, "residue", None)
    if res is not None:
        return res()
    raise TypeError("residue_hbar expects a Laurent series")


def shifted_power(omega, j: int, var: str = "hbar", prec: int = DEFAULT_PREC) -> LaurentSeries:
    """``(hbar - omega)**j`` as a Laurent series in ``hbar`` for nilpotent ``omega``."""
    base = LaurentSeries({1: 1, 0: -omega}, None, var)
    if j >= 0:
        return base ** j
    # (hbar - omega)^-1 = sum_k omega^k hbar^(-k-1), finite because omega is nilpotent
    terms = {}
    power = 1
    for k in range(prec):
        if is_zero(power):
            break
        terms[-k - 1] = power
        power = power * omega
    else:
        raise ValueError("omega is not nilpotent within the requested precision")
    inv = LaurentSeries(terms, None, var)
    return inv ** (-j)


def hbar_variable(var: str = "hbar") -> LaurentSeries:
    return LaurentSeries.monomial(1, 1, var)


def x_transform(builder: Callable, prec: int = DEFAULT_PREC):
    """Both sides of the change of variables ``x = exp(-hbar) - 1``.

    ``builder`` maps a series standing for ``exp(-hbar) - 1`` to the series of
    ``f``.  Returns ``(f(exp(-hbar)-1) in hbar, -f(x)/(x+1) in x)``; the two
    have equal residues.
    """
    em1 = LaurentSeries.exp(-1, prec, "hbar") - 1
    in_hbar = builder(em1)
    x = LaurentSeries.monomial(1, 1, "x")
    onepx = LaurentSeries({0: 1, 1: 1}, None, "x")
    in_x = -(builder(x) * onepx.inverse(prec))
    return in_hbar, in_x
