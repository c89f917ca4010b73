"""The residue field F_{p^f} (f = ord of p mod m) and dense linear algebra over it.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` are the
coordinates in the basis 1, Y, ..., Y^(f-1) of F_p[Y]/(g).  Matrices are plain
numpy integer arrays of such codes, row-major, vectors are columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from .group import GroupParams, multiplicative_order

MAX_FIELD_SIZE = 1 << 16


def _poly_mulmod(a, b, g, p):
    """Product of coefficient lists (low -> high) modulo monic g over F_p."""
    f = len(g) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, f - 1, -1):
        c = out[k]
        if c:
            for j in range(f + 1):
                out[k - f + j] = (out[k - f + j] - c * g[j]) % p
    return (out + [0] * f)[:f]


def _choose_modulus(p: int, m: int, f: int) -> tuple[tuple[int, ...], int]:
    """Return (g low->high, zeta code)."""
    if f == 1:
        zeta = next(z for z in range(1, p) if multiplicative_order(z, p) == m)
        return ((-zeta) % p, 1), zeta
    y = sympy.Symbol("y")
    poly = sympy.Poly(sympy.cyclotomic_poly(m, y), y, modulus=p)
    factors = [fac for fac, _ in poly.factor_list()[1]]
    keyed = []
    for fac in factors:
        hi_lo = [int(c) % p for c in fac.all_coeffs()]
        keyed.append((tuple(hi_lo), tuple(reversed(hi_lo))))
    keyed.sort()
    return keyed[0][1], p


@dataclass(frozen=True, eq=False)
class FieldContext:
    p: int
    f: int
    m: int
    modulus: tuple
    zeta: int
    size: int
    digits: np.ndarray
    exp_table: np.ndarray
    log_table: np.ndarray

    # -- scalars -----------------------------------------------------------
    def from_int(self, k: int) -> int:
        return int(k) % self.p

    def to_coeffs(self, code: int) -> list[int]:
        return [int(c) for c in self.digits[int(code)]]

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(coeffs)}")
        code = 0
        for i, c in enumerate(coeffs):
            c = int(c)
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} outside [0, {self.p - 1}]")
            code += c * self.p**i
        return code

    def _encode(self, d):
        return (d * self._powers).sum(axis=-1)

    @property
    def _powers(self):
        return self.p ** np.arange(self.f, dtype=np.int64)

    def add(self, a, b):
        if self.f == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self._encode((self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a):
        if self.f == 1:
            return (-np.asarray(a)) % self.p
        return self._encode((-self.digits[a]) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.f == 1:
            return (a * b) % self.p
        la = self.log_table[a]
        lb = self.log_table[b]
        out = self.exp_table[(la + lb) % (self.size - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in the residue field")
        return self.exp_table[(-self.log_table[a]) % (self.size - 1)]

    def power(self, a: int, k: int) -> int:
        a = int(a)
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp_table[(int(self.log_table[a]) * k) % (self.size - 1)])

    def element_order(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.size - 1
        return n // np.gcd(int(self.log_table[a]), n) if self.log_table[a] else 1

    # -- matrices ----------------------------------------------------------
    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def zeros(self, n: int, k: int | None = None) -> np.ndarray:
        return np.zeros((n, n if k is None else k), dtype=np.int64)

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.f == 1:
            # entries < p; chunk the contraction so int64 never overflows
            step = max(1, (2**62) // max(1, (self.p - 1) ** 2))
            out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            for s in range(0, A.shape[1], step):
                out = (out + A[:, s : s + step] @ B[s : s + step, :]) % self.p
            return out
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self.add(out, self.mul(A[:, k][:, None], B[k, :][None, :]))
        return out

    def matpow(self, A, k: int) -> np.ndarray:
        result = self.eye(A.shape[0])
        base = np.asarray(A, dtype=np.int64)
        while k:
            if k & 1:
                result = self.matmul(result, base)
            k >>= 1
            if k:
                base = self.matmul(base, base)
        return result

    def scale(self, c: int, A) -> np.ndarray:
        return self.mul(np.full_like(np.asarray(A), c), A)

    def rref(self, M):
        """Reduced row echelon form; pivot is the first nonzero entry of a column."""
        R = np.array(M, dtype=np.int64, copy=True)
        rows, cols = R.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                R[[r, k]] = R[[k, r]]
            R[r] = self.mul(self.inv(R[r, c]), R[r])
            for i in range(rows):
                if i != r and R[i, c]:
                    R[i] = self.sub(R[i], self.mul(R[i, c], R[r]))
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, M) -> int:
        return len(self.rref(M)[1])

    def kernel(self, M) -> list[np.ndarray]:
        R, pivots = self.rref(M)
        n = R.shape[1]
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            v = np.zeros(n, dtype=np.int64)
            v[fc] = 1
            for row, pc in enumerate(pivots):
                v[pc] = self.neg(R[row, fc])
            basis.append(v)
        return basis

    def inverse(self, M) -> np.ndarray:
        n = M.shape[0]
        R, pivots = self.rref(np.hstack([np.asarray(M, dtype=np.int64), self.eye(n)]))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix over the residue field")
        return R[:, n:]

    def is_zero(self, A) -> bool:
        return not np.any(np.asarray(A))


def make_field(params: GroupParams) -> FieldContext:
    p, m, f = params.p, params.m, params.f
    size = p**f
    if size > MAX_FIELD_SIZE:
        raise ValueError(f"residue field of size {size} exceeds {MAX_FIELD_SIZE}")
    g, zeta = _choose_modulus(p, m, f)
    digits = np.array(
        [[(c // p**i) % p for i in range(f)] for c in range(size)], dtype=np.int64
    )

    def code_to_list(c):
        return [int(x) for x in digits[c]]

    def list_to_code(v):
        return sum(int(x) * p**i for i, x in enumerate(v))

    exp_table = log_table = None
    for cand in range(1, size):
        seq = [1]
        cur = code_to_list(cand)
        x = cur
        while list_to_code(x) != 1:
            seq.append(list_to_code(x))
            x = _poly_mulmod(x, cur, g, p)
            if len(seq) > size:
                break
        if len(seq) == size - 1:
            exp_table = np.array(seq, dtype=np.int64)
            log_table = np.full(size, -1, dtype=np.int64)
            log_table[exp_table] = np.arange(size - 1)
            break
    assert exp_table is not None, "no primitive element found"
    ctx = FieldContext(p, f, m, tuple(g), zeta, size, digits, exp_table, log_table)
    if ctx.element_order(zeta) != m:
        raise AssertionError(f"chosen zeta_m has order {ctx.element_order(zeta)} != {m}")
    return ctx


@lru_cache(maxsize=64)
def _cached_field(p: int, h: int, m: int, alpha: int) -> FieldContext:
    from .group import new_group

    return make_field(new_group(p, h, m, alpha))


def field_for(params: GroupParams) -> FieldContext:
    """Shared FieldContext for a group (contexts are immutable)."""
    return _cached_field(params.p, params.h, params.m, params.alpha)


def a0_for(params: GroupParams) -> int:
    """a0 of the group, from the bound value when present."""
    if params.a0 is not None:
        return params.a0
    return discrete_log_a0(field_for(params), params.alpha)


def discrete_log_a0(ctx: FieldContext, alpha: int) -> int:
    """Least a0 in [0, m-1] with zeta_m**a0 equal to the image of alpha."""
    target = ctx.from_int(alpha)
    for a0 in range(ctx.m):
        if ctx.power(ctx.zeta, a0) == target:
            return a0
    raise ValueError(f"alpha = {alpha} is not a power of zeta_m in F_{ctx.p}^{ctx.f}")


def eigenspace_basis(ctx: FieldContext, M, eigenvalue: int) -> list[np.ndarray]:
    M = np.asarray(M, dtype=np.int64)
    shifted = ctx.sub(M, ctx.scale(eigenvalue, ctx.eye(M.shape[0])))
    return ctx.kernel(shifted)
