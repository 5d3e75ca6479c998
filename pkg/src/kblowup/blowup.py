"""Instanton partition function on the blow-up via the k-lattice sum.

Each blow-up fixed point is a vector ``k`` with two tuples of diagrams, one
per torus-fixed point of the exceptional curve.  The two factors are plane
partition functions with shifted arguments (the two *patches*); the
line-bundle part of the tangent space contributes the ``l``-factor built
from the H^1 characters of O(mC).
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .algebra.exppoly import QUARTER, ExpPoly, LinearMap
from .algebra.lamseries import LamSeries, var
from .algebra.ratfrac import FracSum, RatFrac
from .instanton import InsertionSpec, ek_euler, mono, nvars, z_inst


# ---- line bundles on the exceptional curve -------------------------------

def _cech_h1_monomials(m: int) -> list:
    """Exponents (a, b) of s^a t^b s^-m spanning Cech H^1 of O(mC).

    A section on the overlap extends over chart 1 iff b >= 0 and over chart 2
    iff a - m - b >= 0 (chart 2 has s = s't', t = 1/s').
    """
    out = []
    if m <= 0:
        return out
    for a in range(0, m + 1):
        for b in range(-m - 1, 0):
            extends1 = b >= 0
            extends2 = a - m - b >= 0
            if not extends1 and not extends2:
                out.append((a, b))
    return out


def h1_line_bundle_character(m: int) -> ExpPoly:
    """Character of H^1(O(mC)) on the blown-up plane (a-free, 2 variables).

    For m > 0 this is read off the Cech complex with function weights
    s -> eps1, t -> eps2 - eps1.  For m < 0 it is accumulated along
    0 -> O(nC) -> O((n+1)C) -> O_C((n+1)C) -> 0 for n = -1, ..., m; each step
    adds H^0 of O_C of degree N = -n-1, whose fiber at the chart-1 fixed point
    has weight N eps1 and whose sections are t^j, j = 0..N.
    """
    terms: dict = {}

    def add(e1, e2):
        k = (e1 * QUARTER, e2 * QUARTER)
        terms[k] = terms.get(k, 0) + 1

    if m > 0:
        for a, b in _cech_h1_monomials(m):
            add((a - m) - b, b)
    elif m < 0:
        for n in range(-1, m - 1, -1):
            N = -n - 1
            for j in range(N + 1):
                add(N - j, j)
    return ExpPoly(terms, 2)


def h1_closed_form(m: int) -> ExpPoly:
    terms = {}
    if m > 0:
        for i in range(1, m):
            for j in range(1, m - i + 1):
                terms[(-i * QUARTER, -j * QUARTER)] = 1
    elif m < 0:
        for i in range(0, -m):
            for j in range(0, -m - i):
                terms[(i * QUARTER, j * QUARTER)] = 1
    return ExpPoly(terms, 2)


def _eps_dual(p: ExpPoly) -> ExpPoly:
    return ExpPoly({(-e[0], -e[1]) + tuple(e[2:]): c for e, c in p.items()}, p.nvars)


def l_factor_character(kvec, r: int | None = None, orientation: str = "dual") -> ExpPoly:
    """sum_{alpha != beta} e^{a_beta - a_alpha} h1(k_beta - k_alpha), eps-dualized.

    ``orientation="literal"`` skips the eps-dual; it exists only to show that
    the literal orientation breaks the blow-up equation.
    """
    r = r if r is not None else len(kvec)
    out = ExpPoly.zero(nvars(r))
    for al in range(r):
        for be in range(r):
            if al == be:
                continue
            h = h1_line_bundle_character(kvec[be] - kvec[al])
            if orientation == "dual":
                h = _eps_dual(h)
            a = [0] * r
            a[be] += 1
            a[al] -= 1
            out = out + h.widen(nvars(r)) * mono(r, a=a)
    return out


def blowup_l_factor(kvec, r: int | None = None, orientation: str = "dual") -> RatFrac:
    return ek_euler(l_factor_character(kvec, r, orientation))


# ---- patches ---------------------------------------------------------------

def patch_map(r: int, patch: int, kvec) -> LinearMap:
    """(eps1, eps2 - eps1, a + eps1 k) for patch 1, (eps1 - eps2, eps2, a + eps2 k) for patch 2."""
    n = nvars(r)
    images = {}
    if patch == 1:
        images[1] = [-1, 1] + [0] * r
        src = 0
    elif patch == 2:
        images[0] = [1, -1] + [0] * r
        src = 1
    else:
        raise ValueError("patch must be 1 or 2")
    for al in range(r):
        img = [0] * n
        img[2 + al] = 1
        img[src] = kvec[al]
        images[2 + al] = img
    return LinearMap(n, images)


def patch_substitution(series: LamSeries, patch: int, kvec, d, l: int, r: int | None = None,
                       tau_mode: str = "scalar") -> LamSeries:
    r = r if r is not None else len(kvec)
    lmap = patch_map(r, patch, kvec)
    shift = Fraction(d) - Fraction(r + l, 2)
    eps = (1, 0) if patch == 1 else (0, 1)

    def eps_mono(x):
        return mono(r, eps[0] * x, eps[1] * x)

    def one(lam, m, c):
        c = c.substitute(lmap)
        n = lam // (2 * r)
        if n and shift:
            c = c * eps_mono(n * shift)
        return c

    out = series.map_items(one)
    taus = {v for m in series.monomials() for v, _ in m if v[0] == "tau"}
    if not taus:
        return out
    images = {}
    for v in taus:
        q = v[1] if tau_mode == "adams" else 1
        half = eps_mono(Fraction(-q, 2))
        images[v] = [(v, half), (("t", v[1]), half * (eps_mono(q) - 1))]
    return out.substitute_insertions(images)


# ---- the k-lattice sum -----------------------------------------------------

def k_vectors(r: int, k: int, max_order: int) -> list:
    """Vectors with sum k and r (k,k) <= max_order, ordered by (k,k) then lexicographically."""
    bound = math.isqrt(max(max_order, 0) // r) if r else 0
    out = []
    for kv in itertools.product(range(-bound - abs(k), bound + abs(k) + 1), repeat=r):
        if sum(kv) == k and r * sum(x * x for x in kv) <= max_order:
            out.append(kv)
    return sorted(out, key=lambda kv: (sum(x * x for x in kv), kv))


def k_prefactor(kvec, r: int, l: int, d, orientation: str = "dual", cubic_offset: bool = True) -> RatFrac:
    """Everything in one k-summand except Lambda and the two patch factors.

    Since sum k^3 = sum k (mod 6), the cubic term leaves the quarter lattice
    only through the global constant e^{l k (eps1+eps2)/6}.  With
    ``cubic_offset`` that constant is divided out of every summand; without
    it an off-lattice exponent raises LatticeOverflow.
    """
    kk = sum(x * x for x in kvec)
    k3 = sum(x ** 3 for x in kvec)
    if cubic_offset:
        k3 -= sum(kvec)
    e = (Fraction(d) - Fraction(r + l, 2)) * kk / 2 + Fraction(l * k3, 6)
    a = [(Fraction(d) - Fraction(l, 2)) * x + Fraction(l * x * x, 2) for x in kvec]
    num = mono(r, e, e, a)
    return RatFrac.from_poly(num) / blowup_l_factor(kvec, r, orientation)


def zhat_inst(r: int, l: int, k: int, d, max_order: int, tau_orders: tuple = (), degree: int = 1,
              tau_mode: str = "scalar", orientation: str = "dual", lazy: bool = False,
              workers: int = 1, base: LamSeries | None = None, cubic_offset: bool = True) -> LamSeries:
    """Blow-up partition function with c1 fixed by k, through Lambda^max_order.

    ``base`` may supply a lazily computed z_inst with the needed insertions.
    With ``cubic_offset`` (the default) the result is normalized by
    e^{-l k (eps1+eps2)/6}; see :func:`k_prefactor`.
    """
    if base is None:
        spec = InsertionSpec(l=l, tau_orders=tuple(tau_orders), degree=degree)
        base = z_inst(r, spec, max_order, lazy=True, workers=workers)
    deg = base.degree
    kvs = k_vectors(r, k, max_order)

    def term(kv):
        lam0 = r * sum(x * x for x in kv)
        rest = max_order - lam0
        z = base.truncate(order=rest)
        z1 = patch_substitution(z, 1, kv, d, l, r, tau_mode)
        z2 = patch_substitution(z, 2, kv, d, l, r, tau_mode)
        prod = z1 * z2
        pref = FracSum([k_prefactor(kv, r, l, d, orientation, cubic_offset)], nvars(r))
        return {(lam + lam0, m): c * pref for (lam, m), c in prod.coeffs.items()}

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(term, kvs))
    else:
        parts = [term(kv) for kv in kvs]
    coeffs: dict = {}
    for part in parts:
        for key, c in part.items():
            coeffs[key] = coeffs[key] + c if key in coeffs else c
    series = LamSeries(coeffs, max_order, deg)
    return series if lazy else series.collapse(workers)


def t_var(p: int) -> tuple:
    return var("t", p)
