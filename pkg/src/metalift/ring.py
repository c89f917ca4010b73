"""Fixed-precision model of the ramified local ring R.

The carrier ring is ``(Z/p^N)[y]/(g_hat) [x]/(Phi_q(x)) [t]/(t^e - (1 - x))``:
y is a Teichmuller m-th root of unity, x a primitive q-th root of unity and t a
uniformizer with t^e = 1 - x.  Valuations are normalized so that w(t) = 1,
w(1 - x) = e and w(p) = e * phi(q).  Every element carries an absolute
precision P (in t-units): it represents the coset z + t^P R.

Ring operations are exact on representatives; only division by t loses one
unit of precision.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import _kernels
from .field import FieldContext, make_field
from .group import GroupParams

INDIST = -1  # sentinel in valuation arrays: indistinguishable from zero


class PrecisionError(ArithmeticError):
    """An operation needed a determinate value that precision could not provide."""


class DivisibilityError(ArithmeticError):
    """Division by t requested on an element with nonzero residue."""


def _poly_mul_mod(a, b, g, mod):
    """(Z/mod)[Y]/(g) product, g monic, coefficient lists low -> high."""
    f = len(g) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % mod
    for k in range(len(out) - 1, f - 1, -1):
        c = out[k]
        if c:
            for j in range(f + 1):
                out[k - f + j] = (out[k - f + j] - c * g[j]) % mod
    return (out + [0] * f)[:f]


def _poly_pow_mod(a, n, g, mod):
    f = len(g) - 1
    result = [1] + [0] * (f - 1)
    base = list(a)
    while n:
        if n & 1:
            result = _poly_mul_mod(result, base, g, mod)
        n >>= 1
        if n:
            base = _poly_mul_mod(base, base, g, mod)
    return result


def teichmuller_root(zeta: int, m: int, p: int, N: int) -> int:
    """Root of Y^m - 1 mod p^N lifting zeta mod p, by Newton iteration."""
    mod = p**N
    w = zeta % p
    for _ in range(2 * N + 2):
        fw = (pow(w, m, mod) - 1) % mod
        if fw == 0:
            return w
        dfw = (m * pow(w, m - 1, mod)) % mod
        w = (w - fw * pow(dfw, -1, mod)) % mod
    raise AssertionError("Newton iteration for the m-th root of unity did not converge")


def _lift_modulus(fctx: FieldContext, m: int, N: int):
    """g_hat (low -> high, monic) dividing Y^m - 1 mod p^N with g_hat = g mod p."""
    p, f = fctx.p, fctx.f
    mod = p**N
    if f == 1:
        omega = teichmuller_root(fctx.zeta, m, p, N)
        return [(-omega) % mod, 1]
    g = list(fctx.modulus)
    # Teichmuller lift of the class of Y: Y^(p^(f(N-1))) is fixed by Frobenius mod p^N
    omega = _poly_pow_mod([0, 1] + [0] * (f - 2), p ** (f * (N - 1)), g, mod)
    basis_images = []
    for a in range(f):
        ya = [0] * f
        ya[a] = 1
        basis_images.append(_poly_mul_mod(ya, omega, g, mod))
    M = sympy.Matrix(f, f, lambda r, c: basis_images[c][r])
    lam = sympy.Symbol("lam")
    cp = M.charpoly(lam).all_coeffs()  # high -> low
    return [int(c) % mod for c in reversed(cp)]


class RingContext:
    """Immutable description of the carrier ring at precision level N."""

    def __init__(self, params: GroupParams, N: int, e: int = 2, fctx: FieldContext | None = None):
        if N < 2:
            raise ValueError("precision level N must be >= 2")
        if e < 2:
            raise ValueError("ramification index e must be >= 2")
        self.params = params
        self.fctx = fctx if fctx is not None else make_field(params)
        self.p, self.h, self.m, self.q = params.p, params.h, params.m, params.q
        self.f = self.fctx.f
        self.N = N
        self.e = e
        self.phi = params.phi_q
        self.mod = self.p**N
        self.prec_cap = N * e * self.phi
        self.dtype = np.int64 if self.mod < _kernels.INT64_MODULUS_LIMIT else object
        self.shape = (self.f, self.phi, self.e)

        ghat = _lift_modulus(self.fctx, self.m, N)
        if len(ghat) != self.f + 1 or [c % self.p for c in ghat] != list(self.fctx.modulus):
            raise AssertionError("g_hat does not reduce to g")
        self.ghat = np.array(ghat, dtype=np.int64 if self.dtype is np.int64 else object)

        self.rx = self._x_reduction_table()
        self._sbasis = np.array(
            [[(math.comb(b, k) * (-1) ** k) % self.mod for k in range(self.phi)] for b in range(self.phi)],
            dtype=object,
        )

        self.u = self._compute_u()
        self.u_inv = self._newton_inverse(self.u)
        self.w0 = self.mul_arrays(self._one_minus_x_power(self.phi - 1)[None], self.u_inv[None])[0]

        self._check_roots_of_unity()

    # -- construction helpers ---------------------------------------------
    def _x_reduction_table(self) -> np.ndarray:
        phi, q, p, h = self.phi, self.q, self.p, self.h
        rx = np.zeros((2 * phi, phi), dtype=np.int64)
        step = p ** (h - 1)
        for b in range(2 * phi):
            bb = b % q
            if bb < phi:
                rx[b, bb] = 1
            else:
                for j in range(p - 1):
                    rx[b, bb - phi + j * step] -= 1
        return rx

    def zeros_array(self, *lead) -> np.ndarray:
        return np.zeros(tuple(lead) + self.shape, dtype=self.dtype)

    def _one_minus_x_power(self, k: int) -> np.ndarray:
        """(1 - x)^k as an array, reduced."""
        out = self.zeros_array()
        poly = self._reduce_int_poly([math.comb(k, j) * (-1) ** j for j in range(k + 1)])
        for b, c in enumerate(poly):
            out[0, b, 0] = c % self.mod
        return out

    def _reduce_int_poly(self, coeffs: Sequence[int]) -> list[int]:
        """Integer polynomial in x reduced modulo Phi_q (exact, over Z)."""
        phi, q = self.phi, self.q
        acc = [0] * q
        for b, c in enumerate(coeffs):
            acc[b % q] += c
        step = self.p ** (self.h - 1)
        for b in range(q - 1, phi - 1, -1):
            c = acc[b]
            if c:
                acc[b] = 0
                for j in range(self.p - 1):
                    acc[b - phi + j * step] -= c
        return acc[:phi]

    def _compute_u(self) -> np.ndarray:
        phi = self.phi
        expanded = self._reduce_int_poly([math.comb(phi, j) * (-1) ** j for j in range(phi + 1)])
        out = self.zeros_array()
        for b, c in enumerate(expanded):
            if c % self.p != 0:
                raise AssertionError("(1 - x)^phi(q) is not divisible by p in Z[x]/Phi_q")
            out[0, b, 0] = (c // self.p) % self.mod
        return out

    def _newton_inverse(self, u: np.ndarray) -> np.ndarray:
        res = int(self._residue_coeffs(u[None])[0][0])
        if res % self.p == 0:
            raise AssertionError("u is not a unit")
        z = self.zeros_array()
        z[0, 0, 0] = pow(res, -1, self.p)
        one = self.one_array()
        for _ in range(200):
            uz = self.mul_arrays(u[None], z[None])[0]
            if np.array_equal(uz % self.mod, one):
                return z
            z = self.mul_arrays(z[None], ((2 * one - uz) % self.mod)[None])[0]
        raise AssertionError("Newton inversion of u did not converge")

    def _check_roots_of_unity(self):
        x = self.x_array()
        xq = self.power_array(x, self.q)
        if not np.array_equal(xq, self.one_array()):
            raise AssertionError("x^q != 1")
        if np.array_equal(self.power_array(x, self.q // self.p), self.one_array()):
            raise AssertionError("x does not have exact order q")
        y = self.y_array()
        if not np.array_equal(self.power_array(y, self.m), self.one_array()):
            raise AssertionError("y^m != 1")
        for d in range(1, self.m):
            if self.m % d == 0 and np.array_equal(self.power_array(y, d), self.one_array()):
                raise AssertionError("y does not have exact order m")

    # -- basic arrays -------------------------------------------------------
    def one_array(self) -> np.ndarray:
        z = self.zeros_array()
        z[0, 0, 0] = 1
        return z

    def int_array(self, k: int) -> np.ndarray:
        z = self.zeros_array()
        z[0, 0, 0] = int(k) % self.mod
        return z

    def x_power_array(self, k: int) -> np.ndarray:
        k %= self.q
        z = self.zeros_array()
        row = self.rx[k]
        for b in np.nonzero(row)[0]:
            z[0, b, 0] = int(row[b]) % self.mod
        return z

    def x_array(self) -> np.ndarray:
        return self.x_power_array(1)

    def y_array(self) -> np.ndarray:
        z = self.zeros_array()
        if self.f >= 2:
            z[1, 0, 0] = 1
        else:
            z[0, 0, 0] = (-int(self.ghat[0])) % self.mod
        return z

    def t_array(self) -> np.ndarray:
        z = self.zeros_array()
        z[0, 0, 1] = 1
        return z

    # -- batched arithmetic ---------------------------------------------------
    def mul_arrays(self, A, B) -> np.ndarray:
        A = np.asarray(A)
        B = np.asarray(B)
        if A.shape != B.shape:
            A, B = np.broadcast_arrays(A, B)
        lead = A.shape[:-3]
        n = int(np.prod(lead)) if lead else 1
        out = _kernels.mul(
            np.ascontiguousarray(A.reshape((n,) + self.shape)).astype(self.dtype, copy=False),
            np.ascontiguousarray(B.reshape((n,) + self.shape)).astype(self.dtype, copy=False),
            self.mod,
            self.rx,
            self.ghat,
        )
        return out.reshape(lead + self.shape)

    def matmul_arrays(self, A, B) -> np.ndarray:
        return _kernels.matmul(A, B, self.mod, self.rx, self.ghat)

    def power_array(self, a, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.one_array()
        base = np.array(a, copy=True)
        while k:
            if k & 1:
                result = self.mul_arrays(result[None], base[None])[0]
            k >>= 1
            if k:
                base = self.mul_arrays(base[None], base[None])[0]
        return result

    def _residue_coeffs(self, A) -> np.ndarray:
        """c_0(1, y) mod p^N for each element: shape (..., f)."""
        return A[..., :, :, 0].sum(axis=-1) % self.mod

    def residue_codes(self, A) -> np.ndarray:
        """Residue field codes of a batch (..., f, phi, e)."""
        rem = self._residue_coeffs(A) % self.p
        powers = np.array([self.p**a for a in range(self.f)], dtype=object)
        codes = (rem.astype(object) * powers).sum(axis=-1)
        return np.asarray(codes, dtype=np.int64)

    def divide_by_t_arrays(self, A) -> np.ndarray:
        """Batched division by t; raises DivisibilityError if any residue is nonzero."""
        A = np.asarray(A)
        lead = A.shape[:-3]
        c0 = A[..., 0]  # (..., f, phi)
        quot = np.zeros_like(c0)
        acc = np.zeros_like(c0[..., 0])
        for k in range(self.phi - 1, 0, -1):
            acc = (acc + c0[..., k]) % self.mod
            quot[..., k - 1] = acc
        rem = (acc + c0[..., 0]) % self.mod
        if np.any(rem % self.p != 0):
            raise DivisibilityError("division by t of an element with nonzero residue")
        r = self.zeros_array(*lead)
        r[..., :, 0, 0] = rem // self.p
        prod = self.mul_arrays(r, np.broadcast_to(self.w0, r.shape))
        out = self.zeros_array(*lead)
        out[..., : self.e - 1] = A[..., 1:]
        out[..., self.e - 1] = (out[..., self.e - 1] - quot + prod[..., 0]) % self.mod
        return out

    def valuation_array(self, A, prec) -> np.ndarray:
        """Exact valuations of representatives; INDIST where w >= prec."""
        A = np.asarray(A)
        lead = A.shape[:-3]
        p, mod, e, phi, N = self.p, self.mod, self.e, self.phi, self.N
        big = e * phi * (N + 1) + e
        best = np.full(lead, big, dtype=np.int64)
        for j in range(e):
            C = A[..., j].astype(object)  # (..., f, phi) in the x basis
            S = np.zeros_like(C)
            for b in range(phi):
                col = C[..., b]
                if not np.any(col):
                    continue
                S = (S + col[..., None] * self._sbasis[b]) % mod
            v = np.zeros(S.shape, dtype=np.int64)
            T = S.copy()
            zero = T == 0
            for _ in range(N):
                d = (T % p == 0) & ~zero
                if not d.any():
                    break
                v += d
                T = np.where(d, T // p, T)
            v = np.where(zero, N + 1, v)
            vk = v.min(axis=-2)  # over y coordinates -> (..., phi)
            ks = np.arange(phi)
            wk = np.where(vk > N, big, e * (phi * vk + ks) + j)
            best = np.minimum(best, wk.min(axis=-1))
        prec = np.broadcast_to(np.asarray(prec), lead)
        return np.where(best < prec, best, INDIST)

    def residues_zero(self, A) -> np.ndarray:
        return np.all(self._residue_coeffs(A) % self.p == 0, axis=-1)

    # -- element constructors -------------------------------------------------
    def element(self, arr, prec: int | None = None) -> "LocalElement":
        return LocalElement(self, np.asarray(arr, dtype=self.dtype) % self.mod, self.prec_cap if prec is None else prec)

    def one(self) -> "LocalElement":
        return self.element(self.one_array())

    def zero(self) -> "LocalElement":
        return self.element(self.zeros_array())

    def from_int(self, k: int) -> "LocalElement":
        return self.element(self.int_array(k))

    def t(self) -> "LocalElement":
        return self.element(self.t_array())

    def x(self) -> "LocalElement":
        return self.element(self.x_array())

    def y(self) -> "LocalElement":
        return self.element(self.y_array())

    def header(self) -> dict:
        return {**self.params.to_json(), "N": self.N, "e": self.e}

    def with_precision(self, N: int) -> "RingContext":
        return make_ring(self.params, N, self.e)

    def __repr__(self):
        return f"RingContext(p={self.p}, h={self.h}, m={self.m}, N={self.N}, e={self.e}, prec_cap={self.prec_cap})"


def default_precision(params: GroupParams, e: int = 2, min_cap: int = 64) -> int:
    """Smallest N >= 2 with N * e * phi(q) >= min_cap."""
    return max(2, -(-min_cap // (e * params.phi_q)))


@lru_cache(maxsize=32)
def _cached_ring(key, N: int, e: int) -> "RingContext":
    from .group import new_group

    return RingContext(new_group(*key), N, e)


def make_ring(params: GroupParams, N: int | None = None, e: int = 2) -> RingContext:
    """Ring context for the group; contexts are immutable and shared per (group, N, e)."""
    if N is None:
        N = default_precision(params, e)
    return _cached_ring((params.p, params.h, params.m, params.alpha), N, e)


def zeta_q(ctx: RingContext, exponent: int) -> "LocalElement":
    return ctx.element(ctx.x_power_array(exponent))


def zeta_m(ctx: RingContext, exponent: int) -> "LocalElement":
    return ctx.element(ctx.power_array(ctx.y_array(), exponent % ctx.m))


class LocalElement:
    """An element of R known modulo t^prec."""

    __slots__ = ("ctx", "coeffs", "prec")

    def __init__(self, ctx: RingContext, coeffs: np.ndarray, prec: int):
        self.ctx = ctx
        self.coeffs = coeffs
        self.prec = min(int(prec), ctx.prec_cap)

    def _coerce(self, other) -> "LocalElement":
        if isinstance(other, LocalElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements belong to different ring contexts")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalElement(self.ctx, (self.coeffs + o.coeffs) % self.ctx.mod, min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(self.ctx, (-self.coeffs) % self.ctx.mod, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LocalElement(self.ctx, (self.coeffs - o.coeffs) % self.ctx.mod, min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        coeffs = ctx.mul_arrays(self.coeffs[None], o.coeffs[None])[0]
        if self.prec >= ctx.prec_cap and o.prec >= ctx.prec_cap:
            prec = ctx.prec_cap
        else:
            w1 = self.valuation()
            w2 = o.valuation()
            prec = min(self.prec + (w2 or 0), o.prec + (w1 or 0))
        return LocalElement(ctx, coeffs, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def valuation(self) -> int | None:
        """w(z), or None when z is indistinguishable from zero at its precision."""
        v = int(self.ctx.valuation_array(self.coeffs[None], self.prec)[0])
        return None if v == INDIST else v

    def valuation_by_division(self) -> int | None:
        """The same valuation computed by repeated residue tests and division by t."""
        z = self
        v = 0
        while True:
            if v >= self.prec:
                return None
            if int(self.ctx.residue_codes(z.coeffs[None])[0]) != 0:
                return v
            z = z.divide_by_t()
            v += 1

    def divide_by_t(self) -> "LocalElement":
        out = self.ctx.divide_by_t_arrays(self.coeffs[None])[0]
        return LocalElement(self.ctx, out, self.prec - 1)

    def reduce(self) -> int:
        if self.prec < 1:
            raise PrecisionError("no residue at precision 0")
        return int(self.ctx.residue_codes(self.coeffs[None])[0])

    def is_zero_at(self) -> bool:
        return self.valuation() is None

    def eq_at(self, other) -> tuple[bool, int]:
        """(equal, precision at which the comparison was made)."""
        o = self._coerce(other)
        d = self - o
        return d.is_zero_at(), d.prec

    def to_json(self) -> dict:
        return {"prec": self.prec, "coeffs": _to_str_nested(self.coeffs)}

    @classmethod
    def from_json(cls, ctx: RingContext, obj: dict) -> "LocalElement":
        arr = np.array(_from_str_nested(obj["coeffs"]), dtype=object)
        if arr.shape != ctx.shape:
            raise ValueError(f"coefficient tensor has shape {arr.shape}, expected {ctx.shape}")
        return ctx.element(arr.astype(ctx.dtype) if ctx.dtype is np.int64 else arr, int(obj["prec"]))

    def __repr__(self):
        v = self.valuation()
        return f"LocalElement(w={'~0' if v is None else v}, prec={self.prec})"


def _to_str_nested(arr):
    if isinstance(arr, np.ndarray) and arr.ndim > 0:
        return [_to_str_nested(a) for a in arr]
    return str(int(arr))


def _from_str_nested(obj):
    if isinstance(obj, list):
        return [_from_str_nested(o) for o in obj]
    return int(obj)


class LocalMatrix:
    """Dense square matrix over R with per-entry precision."""

    def __init__(self, ctx: RingContext, data: np.ndarray, prec: np.ndarray | None = None):
        if data.ndim != 5 or data.shape[0] != data.shape[1] or data.shape[2:] != ctx.shape:
            raise ValueError(f"bad matrix data shape {data.shape}")
        self.ctx = ctx
        self.data = data
        d = data.shape[0]
        self.prec = np.full((d, d), ctx.prec_cap, dtype=np.int64) if prec is None else np.asarray(prec, dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def zeros(cls, ctx: RingContext, d: int) -> "LocalMatrix":
        return cls(ctx, ctx.zeros_array(d, d))

    @classmethod
    def identity(cls, ctx: RingContext, d: int) -> "LocalMatrix":
        data = ctx.zeros_array(d, d)
        for i in range(d):
            data[i, i, 0, 0, 0] = 1
        return cls(ctx, data)

    @classmethod
    def from_entries(cls, ctx: RingContext, rows: Sequence[Sequence[LocalElement]]) -> "LocalMatrix":
        d = len(rows)
        data = ctx.zeros_array(d, d)
        prec = np.full((d, d), ctx.prec_cap, dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != d:
                raise ValueError("matrix must be square")
            for j, z in enumerate(row):
                data[i, j] = z.coeffs
                prec[i, j] = z.prec
        return cls(ctx, data, prec)

    @classmethod
    def block_diag(cls, blocks: Iterable["LocalMatrix"]) -> "LocalMatrix":
        blocks = list(blocks)
        ctx = blocks[0].ctx
        d = sum(b.dim for b in blocks)
        out = cls.zeros(ctx, d)
        s = 0
        for b in blocks:
            out.data[s : s + b.dim, s : s + b.dim] = b.data
            out.prec[s : s + b.dim, s : s + b.dim] = b.prec
            s += b.dim
        return out

    def entry(self, i: int, j: int) -> LocalElement:
        return LocalElement(self.ctx, self.data[i, j].copy(), int(self.prec[i, j]))

    def block(self, start: int, size: int) -> "LocalMatrix":
        sl = slice(start, start + size)
        return LocalMatrix(self.ctx, self.data[sl, sl].copy(), self.prec[sl, sl].copy())

    def _check(self, other: "LocalMatrix"):
        if other.ctx is not self.ctx:
            raise ValueError("matrices belong to different ring contexts")
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "LocalMatrix") -> "LocalMatrix":
        self._check(other)
        return LocalMatrix(self.ctx, (self.data + other.data) % self.ctx.mod, np.minimum(self.prec, other.prec))

    def __sub__(self, other: "LocalMatrix") -> "LocalMatrix":
        self._check(other)
        return LocalMatrix(self.ctx, (self.data - other.data) % self.ctx.mod, np.minimum(self.prec, other.prec))

    def __matmul__(self, other: "LocalMatrix") -> "LocalMatrix":
        self._check(other)
        data = self.ctx.matmul_arrays(self.data, other.data)
        # conservative bound: w >= 0 for every stored entry
        prec = np.min(np.minimum(self.prec[:, :, None], other.prec[None, :, :]), axis=1)
        return LocalMatrix(self.ctx, data, prec)

    def apply(self, vec: np.ndarray, vec_prec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Matrix-vector product on a (d, f, phi, e) column."""
        col = vec[:, None]
        data = self.ctx.matmul_arrays(self.data, col)[:, 0]
        prec = np.min(np.minimum(self.prec, vec_prec[None, :]), axis=1)
        return data, prec

    def scale(self, z: LocalElement) -> "LocalMatrix":
        data = self.ctx.mul_arrays(self.data, np.broadcast_to(z.coeffs, self.data.shape))
        return LocalMatrix(self.ctx, data, np.minimum(self.prec, z.prec))

    def power(self, k: int) -> "LocalMatrix":
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = LocalMatrix.identity(self.ctx, self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def reduce(self) -> np.ndarray:
        """Entrywise residue map into the residue field (codes)."""
        if np.any(self.prec < 1):
            raise PrecisionError("matrix entry with precision 0 has no residue")
        return self.ctx.residue_codes(self.data)

    def valuations(self) -> np.ndarray:
        return self.ctx.valuation_array(self.data, self.prec)

    def zero_mask(self) -> np.ndarray:
        """True where the entry is indistinguishable from zero at its precision."""
        exact = ~np.any(self.data.reshape(self.dim, self.dim, -1) != 0, axis=-1)
        mask = exact.copy()
        todo = ~exact
        if todo.any():
            v = self.valuations()
            mask |= v == INDIST
        return mask

    def is_zero_at(self) -> bool:
        return bool(self.zero_mask().all())

    def eq_at(self, other: "LocalMatrix") -> tuple[bool, int]:
        diff = self - other
        return diff.is_zero_at(), int(diff.prec.min()) if diff.dim else self.ctx.prec_cap

    def min_prec(self) -> int:
        return int(self.prec.min()) if self.dim else self.ctx.prec_cap

    def to_json(self) -> dict:
        return {
            "dimension": self.dim,
            "entries": [[self.entry(i, j).to_json() for j in range(self.dim)] for i in range(self.dim)],
        }

    @classmethod
    def from_json(cls, ctx: RingContext, obj: dict) -> "LocalMatrix":
        rows = [[LocalElement.from_json(ctx, z) for z in row] for row in obj["entries"]]
        if len(rows) != int(obj.get("dimension", len(rows))):
            raise ValueError("dimension does not match entries")
        return cls.from_entries(ctx, rows)
