"""Seeded self-test: identity oracles, cross-oracles and round trips."""

from __future__ import annotations

import itertools
import random

import numpy as np

from .builder import _block_data, build_Gamma_closed_form, build_Gamma_recursive, build_T, round_trip
from .decision import Refusal, brute_force_liftable, decide_lift
from .field import field_for
from .group import new_group
from .modular import (
    SummandSpec,
    as_multiset,
    build_decomposition,
    decompose,
    from_uniserial,
    to_uniserial,
    verify_kg_relations,
)
from .oracles import bidiagonal, iterated_power, random_chain_plan, random_element, random_root_of_unity
from .ring import LocalMatrix, make_ring
from .symfun import bracket_window_identity_check, sum_prod_identity_check, t_alpha_matrix

SMALL_GROUPS = ((3, 2, 2, 8), (5, 2, 4, 7))
CHAIN_GROUPS = ((3, 2, 2, 8), (5, 2, 4, 7), (7, 1, 3, 2), (5, 1, 4, 2), (13, 1, 3, 3))


def _tally(results) -> dict:
    results = [bool(r) for r in results]
    return {"passed": sum(results), "failed": len(results) - sum(results)}


def check_field(rng: random.Random, trials: int) -> dict:
    out = []
    for _ in range(trials):
        F = field_for(new_group(*rng.choice(CHAIN_GROUPS)))
        a, b, c = (rng.randrange(F.size) for _ in range(3))
        ok = F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a:
            ok &= F.mul(a, F.inv(a)) == 1
        out.append(ok)
    return _tally(out)


def check_ring(rng: random.Random, trials: int) -> dict:
    nrng = np.random.default_rng(rng.randrange(2**32))
    out = []
    for _ in range(trials):
        ctx = make_ring(new_group(*rng.choice(SMALL_GROUPS)))
        z = random_element(ctx, nrng)
        tz = ctx.t() * z
        out.append(bool((ctx.t() * tz.divide_by_t() - tz).is_zero_at()))
    return _tally(out)


def check_sum_prod(rng: random.Random, trials: int) -> dict:
    nrng = np.random.default_rng(rng.randrange(2**32))
    ctx = make_ring(new_group(5, 2, 4, 7))
    out = []
    for k in range(trials):
        n = rng.randint(2, 6)
        xs = [random_element(ctx, nrng) for _ in range(n)]
        z = xs[-1] if k % 4 == 0 else random_element(ctx, nrng)
        out.append(sum_prod_identity_check(z, xs, one=ctx.one()))
    return _tally(out)


def check_bracket_window(rng: random.Random, trials: int) -> dict:
    nrng = np.random.default_rng(rng.randrange(2**32))
    ctx = make_ring(new_group(5, 2, 4, 7))
    out = []
    for _ in range(trials):
        n = rng.randint(2, 7)
        lam = [random_root_of_unity(ctx, nrng) for _ in range(n)]
        A, l, L, B = sorted(rng.randint(1, n) for _ in range(4))
        a_idx, b_idx = rng.sample(range(1, n + 1), 2)
        lam[b_idx - 1] = lam[a_idx - 1] * ctx.x()  # keep la - lb away from zero
        out.append(bracket_window_identity_check(a_idx, b_idx, A, l, L, B, lam, one=ctx.one()))
    return _tally(out)


def check_t_alpha(rng: random.Random, trials: int) -> dict:
    nrng = np.random.default_rng(rng.randrange(2**32))
    out = []
    for _ in range(trials):
        ctx = make_ring(new_group(*rng.choice(SMALL_GROUPS)))
        d = rng.randint(1, 6)
        alpha = rng.randint(1, 50)
        lam = [random_root_of_unity(ctx, nrng) for _ in range(d)]
        sub = [rng.choice([ctx.one(), ctx.t(), ctx.zero(), random_element(ctx, nrng)]) for _ in range(d - 1)]
        T = bidiagonal(ctx, lam, sub)
        formula = LocalMatrix(ctx, t_alpha_matrix(ctx, *_block_data(T, 0, d), alpha), ctx.prec_cap)
        out.append(bool((formula - iterated_power(T, alpha)).is_zero_at()))
    return _tally(out)


def check_gamma_cross(rng: random.Random, trials: int) -> dict:
    out = []
    while len(out) < trials:
        params = new_group(*rng.choice(CHAIN_GROUPS))
        plan = random_chain_plan(params, rng)
        if plan is None:
            continue
        ctx = make_ring(params)
        T = build_T(plan, ctx)
        eps = plan.epsilon_per_block()
        G1 = build_Gamma_recursive(T, eps, ctx, params)
        G2 = build_Gamma_closed_form(T, eps, ctx, params)
        out.append(bool((G1 - G2).is_zero_at()))
    return _tally(out)


def _random_decomposition(rng: random.Random, params, s_max: int, k_max: int) -> list[SummandSpec]:
    return [SummandSpec(rng.randrange(params.m), rng.randint(1, k_max)) for _ in range(rng.randint(1, s_max))]


def check_decide(rng: random.Random, trials: int) -> dict:
    out = []
    for _ in range(trials):
        params = new_group(*rng.choice(SMALL_GROUPS))
        dec = _random_decomposition(rng, params, 3, 6)
        verdict = decide_lift(dec, params)
        out.append(brute_force_liftable(dec, params) == (not isinstance(verdict, Refusal)))
    return _tally(out)


def check_round_trip(rng: random.Random, trials: int) -> dict:
    params = new_group(5, 2, 4, 7)
    cases = [[SummandSpec(1, 2), SummandSpec(3, 2)]]
    while len(cases) < max(1, trials // 20):
        dec = _random_decomposition(rng, params, 2, 4)
        if not isinstance(decide_lift(dec, params), Refusal):
            cases.append(dec)
    return _tally(round_trip(dec, params)["ok"] for dec in cases)


def check_modular(rng: random.Random, trials: int) -> dict:
    params = new_group(3, 2, 2, 8)
    out = []
    for _ in range(trials):
        dec = _random_decomposition(rng, params, 3, 3)
        M = build_decomposition(params, dec)
        ok = verify_kg_relations(M, params)["ok"]
        out.append(ok and as_multiset(decompose(M, params), params.m) == as_multiset(dec, params.m))
    return _tally(out)


def check_uniserial(rng: random.Random, trials: int) -> dict:
    params = new_group(5, 2, 4, 7)
    pairs = itertools.product(range(params.m), range(1, params.q + 1))
    return _tally(to_uniserial(from_uniserial(ell, mu, params), params) == (ell, mu) for ell, mu in pairs)


CHECKS = {
    "field_axioms": check_field,
    "ring_t_division": check_ring,
    "sum_prod_identity": check_sum_prod,
    "bracket_window_identity": check_bracket_window,
    "t_alpha_formula": check_t_alpha,
    "gamma_recursive_vs_closed_form": check_gamma_cross,
    "decide_vs_brute_force": check_decide,
    "lift_round_trip": check_round_trip,
    "modular_decompose": check_modular,
    "uniserial_round_trip": check_uniserial,
}


def run_selftest(seed: int = 0, trials: int = 100) -> dict:
    results = {}
    for name, fn in CHECKS.items():
        rng = random.Random(f"{seed}:{name}")
        results[name] = fn(rng, trials)
    return {
        "seed": seed,
        "trials": trials,
        "checks": results,
        "ok": all(r["failed"] == 0 for r in results.values()),
    }
