"""Integer arithmetic attached to G = C_q x| C_m with sigma tau sigma^-1 = tau^alpha."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

# Trial division is exact for any p; this bound only keeps it desk-scale.
PRIME_BOUND = 10**7


class GroupError(ValueError):
    """Raised when (p, h, m, alpha) does not define a valid group."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    r = math.isqrt(n)
    d = 3
    while d <= r:
        if n % d == 0:
            return False
        d += 2
    return True


def ord_mod(alpha: int, p_power: int) -> int:
    """Least o >= 1 with alpha**o == 1 (mod p_power), by direct iteration."""
    if math.gcd(alpha, p_power) != 1:
        raise GroupError(f"{alpha} is not a unit modulo {p_power}")
    if p_power == 1:
        return 1
    a = alpha % p_power
    x, o = a, 1
    while x != 1:
        x = (x * a) % p_power
        o += 1
    return o


def multiplicative_order(base: int, modulus: int) -> int:
    if modulus == 1:
        return 1
    return ord_mod(base, modulus)


@dataclass(frozen=True)
class GroupParams:
    p: int
    h: int
    m: int
    alpha: int
    q: int
    ord_table: dict = field(compare=False)
    m_prime: int
    f: int
    a0: int | None = None

    @property
    def faithful(self) -> bool:
        """True when ord_{p^i}(alpha) = m for every 1 <= i <= h."""
        return all(o == self.m for o in self.ord_table.values())

    @property
    def phi_q(self) -> int:
        return self.p ** (self.h - 1) * (self.p - 1)

    def to_json(self) -> dict:
        return {"p": self.p, "h": self.h, "m": self.m, "alpha": self.alpha}


def new_group(p: int, h: int, m: int, alpha: int) -> GroupParams:
    for name, v in (("p", p), ("h", h), ("m", m), ("alpha", alpha)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise GroupError(f"{name} must be a positive integer, got {v!r}")
    if p > PRIME_BOUND:
        raise GroupError(f"p = {p} exceeds the supported bound {PRIME_BOUND}")
    if not is_prime(p):
        raise GroupError(f"p = {p} is not prime")
    if math.gcd(p, m) != 1:
        raise GroupError(f"gcd(p, m) = gcd({p}, {m}) != 1")
    q = p**h
    alpha = alpha % q
    if math.gcd(alpha, p) != 1:
        raise GroupError(f"alpha must be prime to p (alpha mod q = {alpha})")
    if pow(alpha, m, q) != 1:
        raise GroupError(f"alpha^m = {alpha}^{m} is not 1 mod {q}")
    ord_table = {p**i: ord_mod(alpha, p**i) for i in range(1, h + 1)}
    return GroupParams(
        p=p,
        h=h,
        m=m,
        alpha=alpha,
        q=q,
        ord_table=ord_table,
        m_prime=m // ord_table[q],
        f=multiplicative_order(p, m),
    )


def centralizer_quotient(params: GroupParams) -> int:
    """m' = |Cent_G(tau)| / q = m / ord_q(alpha)."""
    return params.m // params.ord_table[params.q]


def bind_a0(params: GroupParams, a0: int) -> GroupParams:
    return replace(params, a0=a0 % params.m)
