"""Packed-key sparse polynomial multiplication.

Exponent tuples are packed into single int64 keys (one bit field per
variable), so multiplying monomials is adding keys.  The int64-coefficient
kernel is compiled with numba when available; setting the environment
variable ``KBLOWUP_DISABLE_NUMBA=1`` selects the pure numpy implementation.
Coefficients that might overflow int64 go through an object-dtype numpy path.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("KBLOWUP_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

# coefficient magnitudes below this bound are safe to accumulate in int64
INT64_SAFE = 1 << 62


def _combine_sorted_numpy(keys, vals):
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    vals = vals[order]
    if keys.size == 0:
        return keys, vals
    starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    out_keys = keys[starts]
    out_vals = np.add.reduceat(vals, starts)
    nz = out_vals != 0
    return out_keys[nz], out_vals[nz]


def mul_packed_numpy(ka, ca, kb, cb):
    keys = np.add.outer(ka, kb).ravel()
    vals = np.multiply.outer(ca, cb).ravel()
    return _combine_sorted_numpy(keys, vals)


# dense accumulation is used when the key span is at most this many times the pair count
DENSE_SPAN_FACTOR = 8

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _mul_dense_nb(ka, ca, kb, cb, lo, span):
        acc = np.zeros(span, np.int64)
        for i in range(ka.size):
            base = ka[i] - lo
            for j in range(kb.size):
                acc[base + kb[j]] += ca[i] * cb[j]
        m = 0
        for t in range(span):
            if acc[t] != 0:
                m += 1
        out_k = np.empty(m, np.int64)
        out_v = np.empty(m, np.int64)
        w = 0
        for t in range(span):
            if acc[t] != 0:
                out_k[w] = t + lo
                out_v[w] = acc[t]
                w += 1
        return out_k, out_v

    def _mul_packed_nb(ka, ca, kb, cb):
        lo = int(ka.min()) + int(kb.min())
        span = int(ka.max()) + int(kb.max()) - lo + 1
        if span <= DENSE_SPAN_FACTOR * ka.size * kb.size + 1024:
            return _mul_dense_nb(ka, ca, kb, cb, lo, span)
        # numpy's argsort beats the compiled one on sparse key sets
        return mul_packed_numpy(ka, ca, kb, cb)


def mul_packed(ka, ca, kb, cb):
    """Multiply two packed polynomials; returns sorted keys and coefficients.

    ``ca``/``cb`` may be int64 or object arrays.  int64 inputs are only sent
    to the fast kernel when the result provably fits.
    """
    if ka.size == 0 or kb.size == 0:
        return np.empty(0, np.int64), np.empty(0, ca.dtype)
    if ca.dtype == np.int64 and cb.dtype == np.int64:
        bound = min(int(np.abs(ca).max()) * int(np.abs(cb).sum()),
                    int(np.abs(ca).sum()) * int(np.abs(cb).max()))
        if bound < INT64_SAFE:
            if HAVE_NUMBA:
                return _mul_packed_nb(ka, ca, kb, cb)
            return mul_packed_numpy(ka, ca, kb, cb)
        ca = ca.astype(object)
        cb = cb.astype(object)
    elif ca.dtype != cb.dtype:
        ca = ca.astype(object)
        cb = cb.astype(object)
    return mul_packed_numpy(ka, ca, kb, cb)


def to_int64_if_safe(vals):
    """Downcast an object array of Python ints when every entry fits."""
    if vals.dtype == np.int64:
        return vals
    if vals.size == 0:
        return np.empty(0, np.int64)
    if max(abs(int(v)) for v in vals) < INT64_SAFE:
        return vals.astype(np.int64)
    return vals
