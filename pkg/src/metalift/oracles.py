"""Independent reference computations and seeded samplers shared by the
self-test command and the test suite."""

from __future__ import annotations

import math
import random
from typing import Sequence

import numpy as np

from .decision import LiftPlan, assign_eigenvalues, chain_flag
from .field import a0_for
from .group import GroupParams
from .modular import SummandSpec
from .ring import LocalElement, LocalMatrix, RingContext


def random_element(ctx: RingContext, rng: np.random.Generator) -> LocalElement:
    return ctx.element(rng.integers(0, min(ctx.mod, 2**62), size=ctx.shape).astype(ctx.dtype))


def random_root_of_unity(ctx: RingContext, rng: np.random.Generator) -> LocalElement:
    return ctx.element(ctx.x_power_array(int(rng.integers(0, ctx.q))))


def bidiagonal(ctx: RingContext, lambdas: Sequence[LocalElement], subdiag: Sequence[LocalElement]) -> LocalMatrix:
    d = len(lambdas)
    M = LocalMatrix.zeros(ctx, d)
    for i, z in enumerate(lambdas):
        M.data[i, i] = z.coeffs
    for i, z in enumerate(subdiag):
        M.data[i + 1, i] = z.coeffs
    return M


def iterated_power(M: LocalMatrix, k: int) -> LocalMatrix:
    """M multiplied by itself k times, one product at a time."""
    out = LocalMatrix.identity(M.ctx, M.dim)
    for _ in range(k):
        out = out @ M
    return out


def random_chain_plan(params: GroupParams, rng: random.Random, max_dim: int = 6) -> LiftPlan | None:
    """A single-chain plan of dimension <= max_dim with a random split of its dimension
    into modular summands; None when no admissible dimension exists."""
    dims = [d for d in range(1, min(max_dim, params.q) + 1) if chain_flag(d, params) is not None]
    if not dims:
        return None
    d = rng.choice(dims)
    kappas, rest = [], d
    while rest:
        k = rng.randint(1, rest)
        kappas.append(k)
        rest -= k
    a0 = a0_for(params)
    eps = rng.randrange(params.m)
    specs, cur = [], eps
    for k in kappas:
        specs.append(SummandSpec(cur % params.m, k))
        cur += a0 * k
    plan = LiftPlan(tuple(specs), (tuple(range(len(specs))),), (chain_flag(d, params),))
    return assign_eigenvalues(plan, params)


def binomial_matrix(d: int, alpha: int, p: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        for j in range(i + 1):
            out[i, j] = math.comb(alpha, i - j) % p
    return out
