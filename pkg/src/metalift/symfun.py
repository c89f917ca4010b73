"""Complete homogeneous symmetric polynomials, products of differences and the
closed formula for the powers of a lower bidiagonal matrix.

The scalar functions only use ``+``, ``-`` and ``*`` on their arguments, so they
work for Python integers, sympy expressions and :class:`LocalElement` alike.
The ``*_arrays`` variants work on batches of raw ring coefficient tensors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def complete_homogeneous(k: int, values: Sequence, one=1):
    """h_k(values) by the recurrence h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j h_{k-1}(x_1..x_j)."""
    if k < 0:
        return one * 0
    if not values:
        return one if k == 0 else one * 0
    # row[c] holds h_c of the prefix processed so far
    row = [one] + [one * 0] * k
    for x in values:
        for c in range(1, k + 1):
            row[c] = row[c] + x * row[c - 1]
    return row[k]


def complete_homogeneous_by_monomials(k: int, values: Sequence, one=1):
    """h_k as the literal sum over all degree-k monomials (test oracle)."""
    if k < 0:
        return one * 0
    total = one * 0
    for combo in itertools.combinations_with_replacement(range(len(values)), k):
        term = one
        for idx in combo:
            term = term * values[idx]
        total = total + term
    if k == 0:
        return one
    return total


def bracket(values: Sequence, lo: int, hi: int, one=1):
    """prod_{x=lo..hi} values[x] with 1-based inclusive bounds; 1 when lo > hi."""
    out = one
    for x in range(lo, hi + 1):
        out = out * values[x - 1]
    return out


def diff_bracket(top, lambdas: Sequence, lo: int, hi: int, one=1):
    """[top - lambda_x]_lo^hi = prod_{x=lo..hi} (top - lambda_x), 1 when lo > hi."""
    out = one
    for x in range(lo, hi + 1):
        out = out * (top - lambdas[x - 1])
    return out


def a_product(subdiag: Sequence, i: int, j: int, one=1):
    """A(i, j) = a_i a_{i+1} ... a_{i+j} for j >= 0 and 0 for j < 0 (1-based)."""
    if j < 0:
        return one * 0
    return bracket(subdiag, i, i + j, one)


def t_alpha_entry(i: int, j: int, alpha: int, lambdas: Sequence, subdiag: Sequence, one=1):
    """Entry (i, j) (1-based) of T^alpha for the lower bidiagonal T(lambdas, subdiag)."""
    d = len(lambdas)
    if len(subdiag) != d - 1:
        raise ValueError(f"need {d - 1} subdiagonal entries, got {len(subdiag)}")
    if not (1 <= i <= d and 1 <= j <= d):
        raise IndexError(f"entry ({i}, {j}) outside a {d}x{d} matrix")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if i == j:
        return _power(lambdas[i - 1], alpha, one)
    if j > i:
        return one * 0
    k = i - j
    return a_product(subdiag, j, k - 1, one) * complete_homogeneous(alpha - k, lambdas[j - 1 : i], one)


def _power(x, k, one):
    out = one
    for _ in range(k):
        out = out * x
    return out


def sum_prod_identity_check(z, xs: Sequence, one=1, is_zero=None) -> bool:
    """Vertical sum of the triangular product array against (z - x_2)...(z - x_n)."""
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two values")
    total = one * 0
    for y in range(1, n + 1):
        term = one
        for nu in range(y + 1, n + 1):
            term = term * (xs[0] - xs[nu - 1])
        for mu in range(1, y):
            term = term * (z - xs[mu - 1])
        total = total + term
    rhs = one
    for nu in range(2, n + 1):
        rhs = rhs * (z - xs[nu - 1])
    return _zero(total - rhs, is_zero)


def bracket_window_identity_check(a_idx: int, b_idx: int, A: int, l: int, L: int, B: int, lambdas: Sequence, one=1, is_zero=None) -> bool:
    """Windowed sum of mixed brackets, checked with the division by (la - lb) cleared.

    Indices are 1-based into ``lambdas``; the window must satisfy A <= l <= L <= B.
    """
    if not (1 <= A <= l <= L <= B <= len(lambdas)):
        raise ValueError(f"need 1 <= A <= l <= L <= B <= {len(lambdas)}, got {(A, l, L, B)}")
    la = lambdas[a_idx - 1]
    lb = lambdas[b_idx - 1]
    if _zero(la - lb, is_zero):
        raise ValueError("la - lb is indistinguishable from zero; the identity is degenerate")
    lhs = one * 0
    for y in range(l, L + 1):
        lhs = lhs + diff_bracket(la, lambdas, A, y - 1, one) * diff_bracket(lb, lambdas, y + 1, B, one)
    outer = diff_bracket(la, lambdas, A, l - 1, one) * diff_bracket(lb, lambdas, L + 1, B, one)
    inner = diff_bracket(la, lambdas, l, L, one) - diff_bracket(lb, lambdas, l, L, one)
    return _zero((la - lb) * lhs - outer * inner, is_zero)


def _zero(v, is_zero) -> bool:
    if is_zero is not None:
        return bool(is_zero(v))
    if hasattr(v, "is_zero_at"):
        return bool(v.is_zero_at())
    if hasattr(v, "expand"):
        return v.expand() == 0
    return v == 0


@dataclass(frozen=True)
class MuSequence:
    """mu = mu_1 > mu_2 > ... > mu_s = 1."""

    values: tuple

    @property
    def interior(self) -> tuple:
        """The increasing tuple of values below mu, starting at 1."""
        return tuple(sorted(self.values[1:]))

    @property
    def s(self) -> int:
        return len(self.values)


def enumerate_mu_sequences(mu: int) -> list[MuSequence]:
    """All 2^(mu-2) descending chains from mu to 1, ordered by the subset bitmask of {2..mu-1}."""
    if mu < 2:
        raise ValueError("mu must be at least 2")
    middle = list(range(2, mu))
    out = []
    for mask in range(1 << len(middle)):
        chosen = [v for b, v in enumerate(middle) if mask >> b & 1]
        out.append(MuSequence((mu,) + tuple(sorted(chosen, reverse=True)) + (1,)))
    return out


def decreasing_index_sequences(i: int, s: int):
    """All i = i_1 > i_2 > ... > i_s >= 1."""
    if s == 1:
        yield (i,)
        return
    for rest in itertools.combinations(range(i - 1, 0, -1), s - 1):
        yield (i,) + rest


# --------------------------------------------------------------------------
# batched ring versions
# --------------------------------------------------------------------------


def complete_homogeneous_table(ctx, lambdas: np.ndarray, kmax: int) -> np.ndarray:
    """H[k, j, i] = h_k(lambda_j, ..., lambda_i) for 0-based j <= i (zero for j > i).

    ``lambdas`` has shape (d, f, phi, e); the result has shape (kmax+1, d, d, f, phi, e).
    """
    d = lambdas.shape[0]
    H = ctx.zeros_array(kmax + 1, d, d)
    one = ctx.one_array()
    for j in range(d):
        H[0, j, j:] = one
    # offset n = i - j; h_k(j..j+n) = h_k(j..j+n-1) + lambda_{j+n} h_{k-1}(j..j+n)
    for n in range(d):
        js = np.arange(d - n)
        ii = js + n
        lam = lambdas[ii]
        for k in range(1, kmax + 1):
            prev = H[k, js, ii - 1] if n > 0 else ctx.zeros_array(d - n)
            H[k, js, ii] = (prev + ctx.mul_arrays(lam, H[k - 1, js, ii])) % ctx.mod
    return H


def t_alpha_matrix(ctx, lambdas: np.ndarray, subdiag: np.ndarray, alpha: int) -> np.ndarray:
    """T^alpha from the closed formula, as a (d, d, f, phi, e) array."""
    d = lambdas.shape[0]
    if subdiag.shape[0] != d - 1:
        raise ValueError("subdiagonal length must be d - 1")
    out = ctx.zeros_array(d, d)
    if d == 0:
        return out
    H = complete_homogeneous_table(ctx, lambdas, max(alpha, 0))
    for i in range(d):
        out[i, i] = ctx.power_array(lambdas[i], alpha)
    # A(j, k-1) = a_j ... a_{j+k-1}: prefix products along the subdiagonal
    for j in range(d):
        acc = ctx.one_array()
        for i in range(j + 1, d):
            k = i - j
            acc = ctx.mul_arrays(acc[None], subdiag[i - 1][None])[0]
            if alpha - k >= 0:
                out[i, j] = ctx.mul_arrays(acc[None], H[alpha - k, j, i][None])[0]
    return out
