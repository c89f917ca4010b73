"""Construction and verification of the lift (T, Gamma) of a liftable module.

T is block diagonal over the chains of a plan; each block is lower bidiagonal
with eigenvalues zeta_q^c on the diagonal and subdiagonal entries 1, except t
where one modular summand of the chain ends.  Gamma is determined block by
block from Gamma E_1 = zeta_m^eps E_1 and the relation Gamma T = T^alpha Gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decision import LiftPlan, PreconditionError, Refusal, assign_eigenvalues, decide_lift, validate_plan
from .field import a0_for
from .group import GroupParams
from .modular import KModule, SummandSpec, as_multiset, decompose, verify_kg_relations
from .ring import (
    INDIST,
    DivisibilityError,
    LocalMatrix,
    PrecisionError,
    RingContext,
    make_ring,
    zeta_m,
)
from .symfun import complete_homogeneous_table, decreasing_index_sequences, enumerate_mu_sequences, t_alpha_matrix


class LiftError(ArithmeticError):
    """A constructed lift failed a check that cannot be fixed by more precision."""


@dataclass
class LiftPair:
    ctx: RingContext
    T: LocalMatrix
    Gamma: LocalMatrix
    plan: LiftPlan
    blocks: tuple  # (start, size) per chain
    epsilon_per_block: tuple

    def to_json(self) -> dict:
        return {
            "header": self.ctx.header(),
            "plan": self.plan.to_json(),
            "T": self.T.to_json(),
            "Gamma": self.Gamma.to_json(),
        }


# --------------------------------------------------------------------------
# T
# --------------------------------------------------------------------------


def build_T(plan: LiftPlan, ctx: RingContext) -> LocalMatrix:
    if plan.exponents is None:
        raise PreconditionError("plan has no eigenvalue assignment")
    d = plan.dimension
    T = LocalMatrix.zeros(ctx, d)
    t = ctx.t_array()
    one = ctx.one_array()
    start = 0
    for c, exps in enumerate(plan.exponents):
        for i, ex in enumerate(exps):
            T.data[start + i, start + i] = ctx.x_power_array(ex)
        for i, sym in enumerate(plan.subdiag_pattern(c)):
            T.data[start + i + 1, start + i] = t if sym == "t" else one
        start += len(exps)
    return T


def block_structure(T: LocalMatrix) -> list[tuple[int, int]]:
    """(start, size) of the diagonal blocks separated by exactly-zero subdiagonal entries."""
    d = T.dim
    blocks, start = [], 0
    for i in range(d - 1):
        if not T.data[i + 1, i].any():
            blocks.append((start, i + 1 - start))
            start = i + 1
    if d:
        blocks.append((start, d - start))
    return blocks


def _t_power_of(ctx: RingContext, a: np.ndarray) -> int:
    """k with a = t^k exactly; the builder only divides by such subdiagonal entries."""
    power = ctx.one_array()
    t = ctx.t_array()
    for k in range(ctx.prec_cap):
        if np.array_equal(a % ctx.mod, power):
            return k
        power = ctx.mul_arrays(power[None], t[None])[0]
    raise PreconditionError("subdiagonal entry is not a power of t")


def _block_data(T: LocalMatrix, start: int, size: int):
    ctx = T.ctx
    lambdas = np.stack([T.data[start + i, start + i] for i in range(size)]) if size else ctx.zeros_array(0)
    subdiag = np.stack([T.data[start + i + 1, start + i] for i in range(size - 1)]) if size > 1 else ctx.zeros_array(0)
    return lambdas, subdiag


# --------------------------------------------------------------------------
# Gamma, column recursion
# --------------------------------------------------------------------------


def gamma_block_recursive(ctx: RingContext, lambdas, subdiag, alpha: int, epsilon: int) -> LocalMatrix:
    """Columns from a_{i-1} Gamma E_i = (T^alpha - lambda_{i-1}) Gamma E_{i-1}."""
    d = lambdas.shape[0]
    Ta = t_alpha_matrix(ctx, lambdas, subdiag, alpha)
    shifts = [_t_power_of(ctx, subdiag[i]) for i in range(d - 1)]
    G = LocalMatrix.zeros(ctx, d)
    col = ctx.zeros_array(d)
    col[0] = zeta_m(ctx, epsilon).coeffs
    prec = np.full(d, ctx.prec_cap, dtype=np.int64)
    G.data[:, 0] = col
    G.prec[:, 0] = prec
    for i in range(1, d):
        image = ctx.matmul_arrays(Ta, col[:, None])[:, 0]
        image = (image - ctx.mul_arrays(col, np.broadcast_to(lambdas[i - 1], col.shape))) % ctx.mod
        p_new = int(prec.min())
        for _ in range(shifts[i - 1]):
            image = ctx.divide_by_t_arrays(image)
            p_new -= 1
        col = image
        prec = np.full(d, p_new, dtype=np.int64)
        G.data[:, i] = col
        G.prec[:, i] = prec
    return G


def build_Gamma_recursive(T: LocalMatrix, epsilon_per_block: Sequence[int], ctx: RingContext, params: GroupParams) -> LocalMatrix:
    blocks = block_structure(T)
    if len(blocks) != len(epsilon_per_block):
        raise ValueError(f"{len(blocks)} blocks but {len(epsilon_per_block)} epsilon values")
    parts = []
    for (start, size), eps in zip(blocks, epsilon_per_block):
        lambdas, subdiag = _block_data(T, start, size)
        parts.append(gamma_block_recursive(ctx, lambdas, subdiag, params.alpha, eps))
    return LocalMatrix.block_diag(parts) if parts else LocalMatrix.zeros(ctx, 0)


# --------------------------------------------------------------------------
# Gamma, explicit sum over descending index chains
# --------------------------------------------------------------------------


def gamma_block_closed_form(ctx: RingContext, lambdas, subdiag, alpha: int, epsilon: int) -> LocalMatrix:
    d = lambdas.shape[0]
    one = ctx.one_array()
    t = ctx.t_array()
    shifts = [_t_power_of(ctx, subdiag[i]) for i in range(d - 1)]
    K = [0] + list(np.cumsum(shifts))  # K[n] = number of t factors in a_1 ... a_n

    lam_a = np.stack([ctx.power_array(lambdas[x], alpha) for x in range(d)])
    # BR[mu][lo][hi] = prod_{x=lo..hi} (lambda_mu^alpha - lambda_x), 1-based, empty = 1
    BR = {}
    for mu in range(1, d + 1):
        for lo in range(1, d + 2):
            acc = one
            BR[mu, lo, lo - 1] = acc
            for hi in range(lo, d + 1):
                diff = (lam_a[mu - 1] - lambdas[hi - 1]) % ctx.mod
                acc = ctx.mul_arrays(acc[None], diff[None])[0]
                BR[mu, lo, hi] = acc
    H = complete_homogeneous_table(ctx, lambdas, max(alpha, 0))

    def h(k, lo, hi):
        if k < 0:
            return None
        return H[k, lo - 1, hi - 1]

    # every term is a list of factors; they are multiplied in one batch
    terms, owners = [], []
    for i in range(1, d + 1):
        terms.append([BR[1, 1, i - 1]])
        owners.append((1, i))
        for mu in range(2, d + 1):
            for seq in enumerate_mu_sequences(mu):
                mus = seq.values
                s = len(mus)
                hfac = []
                for nu in range(1, s):
                    v = h(alpha - mus[nu - 1] + mus[nu], mus[nu], mus[nu - 1])
                    if v is None:
                        hfac = None
                        break
                    hfac.append(v)
                if hfac is None:
                    continue
                for iseq in decreasing_index_sequences(i, s):
                    ext = iseq + (0,)
                    brs = [BR[mus[nu], ext[nu + 1] + 1, ext[nu] - 1] for nu in range(s)]
                    terms.append(hfac + brs)
                    owners.append((mu, i))
    width = max(len(f) for f in terms)
    stack = np.stack([np.stack(f + [one] * (width - len(f))) for f in terms])  # (n, width, ...)
    prod = stack[:, 0]
    for w in range(1, width):
        prod = ctx.mul_arrays(prod, stack[:, w])
    sums = ctx.zeros_array(d, d)
    for (mu, i), v in zip(owners, prod):
        sums[mu - 1, i - 1] = (sums[mu - 1, i - 1] + v) % ctx.mod
    sums = ctx.mul_arrays(sums, np.broadcast_to(zeta_m(ctx, epsilon).coeffs, sums.shape))

    G = LocalMatrix.zeros(ctx, d)
    for mu in range(1, d + 1):
        for i in range(1, d + 1):
            v = sums[mu - 1, i - 1]
            # [a]_1^{mu-1} / [a]_1^{i-1} as a power of t
            shift = K[mu - 1] - K[i - 1]
            prec = ctx.prec_cap
            for _ in range(max(shift, 0)):
                v = ctx.mul_arrays(v[None], t[None])[0]
            for _ in range(max(-shift, 0)):
                v = ctx.divide_by_t_arrays(v[None])[0]
                prec -= 1
            G.data[mu - 1, i - 1] = v
            G.prec[mu - 1, i - 1] = prec
    return G


def build_Gamma_closed_form(T: LocalMatrix, epsilon: int | Sequence[int], ctx: RingContext, params: GroupParams) -> LocalMatrix:
    """Closed-form Gamma; T must be a single block (all a_i nonzero) unless a list of eps is given."""
    blocks = block_structure(T)
    eps_list = [epsilon] if isinstance(epsilon, (int, np.integer)) else list(epsilon)
    if len(eps_list) != len(blocks):
        raise PreconditionError(f"{len(blocks)} blocks but {len(eps_list)} epsilon values")
    parts = []
    for (start, size), eps in zip(blocks, eps_list):
        lambdas, subdiag = _block_data(T, start, size)
        parts.append(gamma_block_closed_form(ctx, lambdas, subdiag, params.alpha, int(eps)))
    return LocalMatrix.block_diag(parts)


# --------------------------------------------------------------------------
# assembly with precision escalation
# --------------------------------------------------------------------------


def _blocks_of_plan(plan: LiftPlan) -> tuple:
    out, s = [], 0
    for d in plan.chain_dims():
        out.append((s, d))
        s += d
    return tuple(out)


def assemble_lift(plan: LiftPlan, params: GroupParams, ctx: RingContext) -> LiftPair:
    validate_plan(plan, params, a0_for(params))
    if plan.exponents is None:
        plan = assign_eigenvalues(plan, params)
    T = build_T(plan, ctx)
    eps = tuple(plan.epsilon_per_block())
    G = build_Gamma_recursive(T, eps, ctx, params)
    return LiftPair(ctx, T, G, plan, _blocks_of_plan(plan), eps)


def build_lift(plan: LiftPlan, params: GroupParams, N: int | None = None, e: int = 2, escalate: bool = True):
    """Build and verify; rebuild once at doubled N when precision runs out.

    Returns (pair, report).
    """
    ctx = make_ring(params, N, e)
    attempts = [ctx, ctx.with_precision(2 * ctx.N)] if escalate else [ctx]
    last_error = None
    for k, c in enumerate(attempts):
        try:
            pair = assemble_lift(plan, params, c)
            report = verify_lift(pair, params)
        except (DivisibilityError, PrecisionError) as exc:
            last_error = exc
            continue
        report["escalated"] = k > 0
        if not report["needs_precision"]:
            return pair, report
        last_error = PrecisionError("a value that must be nonzero stays indistinguishable from zero")
    raise LiftError(f"lift construction failed at N = {attempts[-1].N}: {last_error}")


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------


def _eq(A: LocalMatrix, B: LocalMatrix) -> dict:
    diff = A - B
    mask = diff.zero_mask()
    bad = np.argwhere(~mask)
    out = {"ok": bool(mask.all()), "precision": diff.min_prec()}
    if bad.size:
        i, j = (int(v) for v in bad[0])
        out["entry"] = [i, j]
        out["valuation"] = int(diff.valuations()[i, j])
    return out


def _nonzero(A: LocalMatrix, B: LocalMatrix) -> dict:
    diff = A - B
    mask = diff.zero_mask()
    return {"ok": not bool(mask.all()), "precision": diff.min_prec(), "determinate": not bool(mask.all())}


def expected_sigma_order(plan: LiftPlan, params: GroupParams) -> int:
    """Order of sigma on the predicted modular reduction: the lcm of the orders of
    its diagonal eigenvalues zeta_m^(eps + a0 j)."""
    m = params.m
    a0 = a0_for(params)
    order = 1
    for spec in plan.predicted_decomposition(params, a0):
        for j in range(min(spec.kappa, m)):
            c = (spec.epsilon + a0 * j) % m
            order = math.lcm(order, m // math.gcd(c, m))
    return order


def is_full_orbit_chain(exps: Sequence[int], m: int) -> bool:
    """Chain whose eigenvalue exponents are whole orbits of size m (no eigenvalue 1)."""
    return len(exps) >= 2 and 0 not in exps and len(exps) % m == 0


def verify_lift(pair: LiftPair, params: GroupParams) -> dict:
    ctx, T, G = pair.ctx, pair.T, pair.Gamma
    q, m, alpha = params.q, params.m, params.alpha
    d = T.dim
    I = LocalMatrix.identity(ctx, d)
    checks: dict = {}
    needs_precision = False

    checks["T_order_q"] = _eq(T.power(q), I)
    exps = [c for ex in pair.plan.exponents for c in ex]
    t_ord = max((q // math.gcd(c, q) for c in exps), default=1)
    checks["T_order_exact"] = {"order": t_ord}
    if t_ord > 1:
        r = _nonzero(T.power(t_ord // params.p), I)
        checks["T_order_exact"].update(r)
        needs_precision |= not r["ok"]
    else:
        checks["T_order_exact"]["ok"] = True

    powers = [I]
    for _ in range(m):
        powers.append(powers[-1] @ G)
    checks["Gamma_order_m"] = _eq(powers[m], I)
    expected = expected_sigma_order(pair.plan, params)
    lower = []
    for j in range(1, expected):
        r = _nonzero(powers[j], I)
        lower.append(r["ok"])
        needs_precision |= not r["ok"]
    gamma_order = next((j for j in range(1, m + 1) if _eq(powers[j], I)["ok"]), None)
    checks["Gamma_exact_order"] = {
        "ok": all(lower) and _eq(powers[expected], I)["ok"],
        "order": gamma_order,
        "expected": expected,
    }

    Ta = T.power(alpha)
    checks["conjugation"] = _eq(G @ T, Ta @ G)
    conj_k = []
    for k in range(1, m + 1):
        conj_k.append(_eq(powers[k] @ T, T.power(pow(alpha, k, q)) @ powers[k])["ok"])
    checks["conjugation_powers"] = {"ok": all(conj_k)}

    Gbar = G.reduce()
    upper = np.triu(Gbar, 1)
    checks["lower_triangular_mod_m"] = {"ok": not upper.any()}
    if upper.any():
        i, j = (int(v) for v in np.argwhere(upper)[0])
        checks["lower_triangular_mod_m"]["entry"] = [i, j]

    # divisibility hypothesis: v(lambda_i - lambda_j) >= e > v(a) for the non-unit a
    worst_lambda, worst_a = None, 0
    for start, size in pair.blocks:
        lam = np.stack([T.data[start + i, start + i] for i in range(size)])
        if size > 1:
            ii, jj = np.triu_indices(size, 1)
            diffs = (lam[ii] - lam[jj]) % ctx.mod
            v = ctx.valuation_array(diffs, ctx.prec_cap)
            if np.any(v == INDIST):
                needs_precision = True
            v = v[v != INDIST]
            if v.size:
                worst_lambda = int(v.min()) if worst_lambda is None else min(worst_lambda, int(v.min()))
            for i in range(size - 1):
                a = T.data[start + i + 1, start + i]
                worst_a = max(worst_a, _t_power_of(ctx, a))
    checks["divisibility_hypothesis"] = {
        "ok": worst_lambda is None or (worst_lambda >= ctx.e > worst_a),
        "min_lambda_difference_valuation": worst_lambda,
        "max_subdiagonal_valuation": worst_a,
    }

    # structural structure: required on chains made of whole orbits, also run on the others
    zero_ok, final_ok, examined, full = True, True, 0, 0
    for (start, size), ex in zip(pair.blocks, pair.plan.exponents):
        if size < 2:
            continue
        examined += 1
        full += is_full_orbit_chain(ex, m)
        r = structural_checks_block(ctx, T.block(start, size), G.block(start, size), alpha)
        zero_ok &= r["zero_column"]
        final_ok &= r["last_entry_relation"]
    checks["last_column_zero"] = {"ok": zero_ok, "chains": examined, "full_orbit_chains": full}
    checks["last_entry_relation"] = {"ok": final_ok, "chains": examined, "full_orbit_chains": full}

    ok = all(v.get("ok", True) for v in checks.values())
    precisions = [v["precision"] for v in checks.values() if "precision" in v]
    return {
        "ok": bool(ok),
        "checks": checks,
        "gamma_order": gamma_order,
        "min_precision": int(min(precisions)) if precisions else ctx.prec_cap,
        "needs_precision": bool(needs_precision),
        "N": ctx.N,
        "e": ctx.e,
        "prec_cap": ctx.prec_cap,
    }


def structural_checks_block(ctx: RingContext, T: LocalMatrix, G: LocalMatrix, alpha: int) -> dict:
    """gamma_{mu,d} ~ 0 for mu <= d-2, and (lambda_d - lambda_d^alpha) gamma_{d,d}
    = t^(alpha)_{d,d-1} gamma_{d-1,d}."""
    d = T.dim
    zero = all(G.entry(mu, d - 1).is_zero_at() for mu in range(d - 2))
    lambdas, subdiag = _block_data(T, 0, d)
    Ta = t_alpha_matrix(ctx, lambdas, subdiag, alpha)
    lam_d = T.entry(d - 1, d - 1)
    lhs = (lam_d - lam_d**alpha) * G.entry(d - 1, d - 1)
    rhs = ctx.element(Ta[d - 1, d - 2]) * G.entry(d - 2, d - 1)
    return {"zero_column": bool(zero), "last_entry_relation": bool((lhs - rhs).is_zero_at())}


# --------------------------------------------------------------------------
# reduction
# --------------------------------------------------------------------------


def reduce_pair(T: LocalMatrix, Gamma: LocalMatrix) -> KModule:
    return KModule(T.reduce(), Gamma.reduce())


def reduce_lift(pair: LiftPair, params: GroupParams) -> list[SummandSpec]:
    module = reduce_pair(pair.T, pair.Gamma)
    rel = verify_kg_relations(module, params)
    if not rel["ok"]:
        raise LiftError(f"reduced pair violates the group relations: {rel}")
    got = decompose(module, params)
    predicted = pair.plan.predicted_decomposition(params, a0_for(params))
    if as_multiset(got, params.m) != as_multiset(predicted, params.m):
        raise LiftError(f"reduction {got} differs from the predicted {predicted}")
    return got


def round_trip(dec: Sequence[SummandSpec], params: GroupParams, N: int | None = None, e: int = 2, uniform_a: bool = False) -> dict:
    verdict = decide_lift(dec, params, uniform_a=uniform_a)
    if isinstance(verdict, Refusal):
        return {"liftable": False, "refusal": verdict.to_json()}
    plan = assign_eigenvalues(verdict, params)
    pair, report = build_lift(plan, params, N, e)
    reduced = reduce_lift(pair, params)
    matches = as_multiset(reduced, params.m) == as_multiset(dec, params.m)
    return {
        "liftable": True,
        "plan": plan.to_json(),
        "report": report,
        "reduced": [s.to_json() for s in reduced],
        "matches_input": bool(matches),
        "ok": bool(report["ok"] and matches),
        "pair": pair,
    }
