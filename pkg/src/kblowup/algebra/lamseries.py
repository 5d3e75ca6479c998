"""Truncated power series in Lambda, graded by insertion monomials.

Keys are ``(lambda_exponent, monomial)`` where a monomial is a sorted tuple of
``((kind, p), power)`` with ``kind`` either ``"tau"`` or ``"t"``.  Coefficients
are :class:`RatFrac` or :class:`FracSum` values.
"""
from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .exppoly import LinearMap
from .ratfrac import FracSum, RatFrac, as_ratfrac

ONE: tuple = ()


def mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def mono_mul(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_text(m: tuple) -> str:
    if not m:
        return "1"
    parts = []
    for (kind, p), e in m:
        s = f"{kind}[{p}]"
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def var(kind: str, p: int) -> tuple:
    return (((kind, p), 1),)


class LamSeries:
    """Immutable truncated Lambda-series with insertion grading."""

    __slots__ = ("order", "degree", "coeffs")

    def __init__(self, coeffs: Mapping | None = None, order: int = 0, degree: int = 1):
        self.order = order
        self.degree = degree
        out = {}
        for (lam, m), c in (coeffs or {}).items():
            if lam > order or mono_degree(m) > degree:
                continue
            out[(lam, m)] = c
        self.coeffs = out

    def coeff(self, lam: int, mono: tuple = ONE):
        if lam > self.order:
            raise ValueError(f"Lambda^{lam} is beyond the truncation order {self.order}")
        return self.coeffs.get((lam, mono))

    def keys(self) -> list:
        return sorted(self.coeffs, key=lambda k: (k[0], mono_degree(k[1]), k[1]))

    def items(self):
        return [(k, self.coeffs[k]) for k in self.keys()]

    def monomials(self) -> set:
        return {m for _, m in self.coeffs}

    def _combine(self, other, sign: int) -> "LamSeries":
        order = min(self.order, other.order)
        degree = min(self.degree, other.degree)
        out = {k: v for k, v in self.coeffs.items() if k[0] <= order}
        for k, v in other.coeffs.items():
            if k[0] > order:
                continue
            v = v if sign > 0 else -v
            out[k] = out[k] + v if k in out else v
        return LamSeries(out, order, degree)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return LamSeries({k: -v for k, v in self.coeffs.items()}, self.order, self.degree)

    def __mul__(self, other):
        if not isinstance(other, LamSeries):
            return self.map_coeffs(lambda c: c * other)
        order = min(self.order, other.order)
        degree = min(self.degree, other.degree)
        out: dict = {}
        for (la, ma), ca in self.coeffs.items():
            for (lb, mb), cb in other.coeffs.items():
                lam = la + lb
                if lam > order or mono_degree(ma) + mono_degree(mb) > degree:
                    continue
                k = (lam, mono_mul(ma, mb))
                t = ca * cb
                out[k] = out[k] + t if k in out else t
        return LamSeries(out, order, degree)

    def map_coeffs(self, fn: Callable) -> "LamSeries":
        return LamSeries({k: fn(v) for k, v in self.coeffs.items()}, self.order, self.degree)

    def map_items(self, fn: Callable) -> "LamSeries":
        """``fn(lam, mono, coeff) -> coeff``."""
        return LamSeries({k: fn(k[0], k[1], v) for k, v in self.coeffs.items()}, self.order, self.degree)

    def substitute(self, lmap: LinearMap) -> "LamSeries":
        return self.map_coeffs(lambda c: c.substitute(lmap))

    def substitute_insertions(self, images: Mapping[tuple, Iterable]) -> "LamSeries":
        """Replace each insertion variable ``(kind, p)`` by ``sum coef * var``.

        ``images[(kind, p)]`` is a list of ``((kind', p'), coef)``; variables
        without an image are kept.
        """
        out: dict = {}
        for (lam, m), c in self.coeffs.items():
            expansions = [(ONE, None)]
            for v, e in m:
                img = list(images.get(v, [(v, None)]))
                for _ in range(e):
                    nxt = []
                    for mono, coef in expansions:
                        for w, wc in img:
                            nm = mono_mul(mono, ((w, 1),))
                            if mono_degree(nm) > self.degree:
                                continue
                            if coef is None:
                                nc = wc
                            elif wc is None:
                                nc = coef
                            else:
                                nc = coef * wc
                            nxt.append((nm, nc))
                    expansions = nxt
            for mono, coef in expansions:
                t = c if coef is None else c * coef
                k = (lam, mono)
                out[k] = out[k] + t if k in out else t
        return LamSeries(out, self.order, self.degree)

    def collapse(self, workers: int = 1) -> "LamSeries":
        """Turn every coefficient into a single RatFrac, dropping exact zeros."""
        keys = self.keys()

        def one(k):
            c = self.coeffs[k]
            return c.collapse() if isinstance(c, FracSum) else as_ratfrac(c)

        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(workers) as ex:
                vals = list(ex.map(one, keys))
        else:
            vals = [one(k) for k in keys]
        return LamSeries({k: v for k, v in zip(keys, vals) if not v.is_zero()}, self.order, self.degree)

    def truncate(self, order: int | None = None, degree: int | None = None) -> "LamSeries":
        return LamSeries(self.coeffs, self.order if order is None else order,
                         self.degree if degree is None else degree)

    def to_records(self) -> list:
        """Canonical machine records, one per (Lambda exponent, monomial)."""
        rows = []
        for (lam, m), c in self.items():
            fr = as_ratfrac(c.collapse() if isinstance(c, FracSum) else c)
            rows.append((lam, mono_text(m), fr))
        return rows

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "coefficients": [
                {"lambda": lam, "mono": [[k, p, e] for (k, p), e in m], "value": as_ratfrac(c).to_json()}
                for (lam, m), c in self.collapse().items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "LamSeries":
        coeffs = {}
        for rec in data["coefficients"]:
            m = tuple(((k, p), e) for k, p, e in rec["mono"])
            coeffs[(rec["lambda"], m)] = RatFrac.from_json(rec["value"])
        return cls(coeffs, data["order"], data["degree"])

    def __repr__(self):
        return f"LamSeries(order={self.order}, degree={self.degree}, {len(self.coeffs)} coefficients)"
