"""Hot kernels for arithmetic in the carrier ring (Z/p^N)[y]/(g)[x]/(Phi_q)[t]/(t^e - (1 - x)).

An element is an ``(f, phi, e)`` coefficient tensor indexed by the exponents of
(y, x, t).  A product is a 3-d convolution followed by a fold that rewrites
t^e as 1 - x, reduces x modulo Phi_q and y modulo g.

Two implementations share one contract: numba ``@njit`` loops (int64, needs
modulus < 2**31) and a vectorised numpy path that also accepts ``object``
arrays for larger moduli.  Set ``METALIFT_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

INT64_MODULUS_LIMIT = 2**31


def numba_enabled() -> bool:
    flag = os.environ.get("METALIFT_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------


def _fold_np(raw, mod, rx, ghat, f, phi, e):
    """raw: (..., 2f-1, 2phi, 2e-1) -> (..., f, phi, e), all entries in [0, mod)."""
    R = raw % mod
    for c in range(e, 2 * e - 1):
        v = R[..., :, :, c].copy()
        R[..., :, :, c - e] += v
        R[..., :, 1:, c - e] -= v[..., :, :-1]
    R = R[..., :, :, :e]
    # x reduction: rx has entries in {-1, 0, 1}
    Rx = np.moveaxis(R, -2, -1)  # (..., 2f-1, e, 2phi)
    X = np.zeros(Rx.shape[:-1] + (phi,), dtype=R.dtype)
    for b in range(2 * phi):
        row = rx[b]
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        col = Rx[..., b]
        for k in nz:
            if row[k] == 1:
                X[..., k] += col
            else:
                X[..., k] -= col
    X = np.moveaxis(X % mod, -1, -2)  # (..., 2f-1, phi, e)
    for a in range(2 * f - 2, f - 1, -1):
        v = X[..., a, :, :] % mod
        for j in range(f):
            X[..., a - f + j, :, :] = (X[..., a - f + j, :, :] - (v * int(ghat[j])) % mod) % mod
    return X[..., :f, :, :] % mod


def _raw_shape(lead, f, phi, e):
    return tuple(lead) + (2 * f - 1, 2 * phi, 2 * e - 1)


def mul_np(A, B, mod, rx, ghat):
    """Elementwise product of (n, f, phi, e) batches."""
    n, f, phi, e = A.shape
    raw = np.zeros(_raw_shape((n,), f, phi, e), dtype=A.dtype)
    for a1 in range(f):
        for b1 in range(phi):
            for c1 in range(e):
                x = A[:, a1, b1, c1]
                if not x.any():
                    continue
                raw[:, a1 : a1 + f, b1 : b1 + phi, c1 : c1 + e] += (
                    x[:, None, None, None] * B
                ) % mod
    return _fold_np(raw, mod, rx, ghat, f, phi, e)


def matmul_np(A, B, mod, rx, ghat):
    """Matrix product of (d1, d2, f, phi, e) and (d2, d3, f, phi, e)."""
    d1, d2 = A.shape[:2]
    d3 = B.shape[1]
    f, phi, e = A.shape[2:]
    raw = np.zeros(_raw_shape((d1, d3), f, phi, e), dtype=A.dtype)
    Bb = B[None, :, :, :, :, :]
    for a1 in range(f):
        for b1 in range(phi):
            for c1 in range(e):
                X = A[:, :, a1, b1, c1]
                if not X.any():
                    continue
                term = (X[:, :, None, None, None, None] * Bb) % mod
                raw[:, :, a1 : a1 + f, b1 : b1 + phi, c1 : c1 + e] += term.sum(axis=1)
    return _fold_np(raw, mod, rx, ghat, f, phi, e)


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _conv_acc_nb(a, b, raw, mod):
        f, phi, e = a.shape
        for a1 in range(f):
            for b1 in range(phi):
                for c1 in range(e):
                    x = a[a1, b1, c1]
                    if x == 0:
                        continue
                    for a2 in range(f):
                        for b2 in range(phi):
                            for c2 in range(e):
                                y = b[a2, b2, c2]
                                if y != 0:
                                    raw[a1 + a2, b1 + b2, c1 + c2] += (x * y) % mod

    @numba.njit(cache=True)
    def _fold_nb(raw, out, mod, rx, ghat):
        f, phi, e = out.shape
        F2 = raw.shape[0]
        R = np.empty_like(raw)
        for a in range(F2):
            for b in range(2 * phi):
                for c in range(2 * e - 1):
                    R[a, b, c] = raw[a, b, c] % mod
        for c in range(e, 2 * e - 1):
            for a in range(F2):
                for b in range(2 * phi - 1):
                    v = R[a, b, c]
                    if v != 0:
                        R[a, b, c - e] += v
                        R[a, b + 1, c - e] -= v
        X = np.zeros((F2, phi, e), dtype=np.int64)
        for a in range(F2):
            for b in range(2 * phi):
                for c in range(e):
                    v = R[a, b, c]
                    if v == 0:
                        continue
                    for k in range(phi):
                        s = rx[b, k]
                        if s == 1:
                            X[a, k, c] += v
                        elif s == -1:
                            X[a, k, c] -= v
        for a in range(F2):
            for k in range(phi):
                for c in range(e):
                    X[a, k, c] = X[a, k, c] % mod
        for a in range(F2 - 1, f - 1, -1):
            for k in range(phi):
                for c in range(e):
                    v = X[a, k, c]
                    if v == 0:
                        continue
                    for j in range(f):
                        X[a - f + j, k, c] = (X[a - f + j, k, c] - (v * ghat[j]) % mod) % mod
        for a in range(f):
            for k in range(phi):
                for c in range(e):
                    out[a, k, c] = X[a, k, c]

    @numba.njit(cache=True)
    def _mul_nb(A, B, mod, rx, ghat):
        n, f, phi, e = A.shape
        out = np.zeros_like(A)
        raw = np.zeros((2 * f - 1, 2 * phi, 2 * e - 1), dtype=np.int64)
        for i in range(n):
            raw[:] = 0
            _conv_acc_nb(A[i], B[i], raw, mod)
            _fold_nb(raw, out[i], mod, rx, ghat)
        return out

    @numba.njit(cache=True)
    def _matmul_nb(A, B, mod, rx, ghat):
        d1, d2, f, phi, e = A.shape
        d3 = B.shape[1]
        out = np.zeros((d1, d3, f, phi, e), dtype=np.int64)
        nzA = np.zeros((d1, d2), dtype=np.bool_)
        nzB = np.zeros((d2, d3), dtype=np.bool_)
        for i in range(d1):
            for k in range(d2):
                nzA[i, k] = np.any(A[i, k] != 0)
        for k in range(d2):
            for j in range(d3):
                nzB[k, j] = np.any(B[k, j] != 0)
        raw = np.zeros((2 * f - 1, 2 * phi, 2 * e - 1), dtype=np.int64)
        for i in range(d1):
            for j in range(d3):
                raw[:] = 0
                hit = False
                for k in range(d2):
                    if nzA[i, k] and nzB[k, j]:
                        _conv_acc_nb(A[i, k], B[k, j], raw, mod)
                        hit = True
                if hit:
                    _fold_nb(raw, out[i, j], mod, rx, ghat)
        return out


def mul_nb(A, B, mod, rx, ghat):
    return _mul_nb(A, B, np.int64(mod), rx, ghat)


def matmul_nb(A, B, mod, rx, ghat):
    return _matmul_nb(A, B, np.int64(mod), rx, ghat)


def _fast(A, B, mod) -> bool:
    return (
        numba_enabled()
        and mod < INT64_MODULUS_LIMIT
        and A.dtype == np.int64
        and B.dtype == np.int64
    )


def mul(A, B, mod, rx, ghat):
    if _fast(A, B, mod):
        return mul_nb(np.ascontiguousarray(A), np.ascontiguousarray(B), mod, rx, ghat)
    return mul_np(A, B, mod, rx, ghat)


def matmul(A, B, mod, rx, ghat):
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape[:2]} @ {B.shape[:2]}")
    if _fast(A, B, mod):
        return matmul_nb(np.ascontiguousarray(A), np.ascontiguousarray(B), mod, rx, ghat)
    return matmul_np(A, B, mod, rx, ghat)
