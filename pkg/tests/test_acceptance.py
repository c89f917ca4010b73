"""Acceptance suite: one test and one summary line per criterion."""

import itertools
import random
import time

import numpy as np
import pytest

from metalift.builder import (
    build_Gamma_closed_form,
    build_Gamma_recursive,
    build_lift,
    build_T,
    is_full_orbit_chain,
    structural_checks_block,
    reduce_lift,
)
from metalift.decision import Refusal, assign_eigenvalues, brute_force_liftable, decide_lift, orbit_balance_check
from metalift.field import a0_for, field_for
from metalift.group import new_group
from metalift.modular import (
    SummandSpec as S,
    as_multiset,
    build_decomposition,
    build_summand,
    decompose,
    from_uniserial,
    to_uniserial,
    verify_kg_relations,
)
from metalift.oracles import bidiagonal, binomial_matrix, iterated_power, random_chain_plan, random_element, random_root_of_unity
from metalift.ring import LocalMatrix, make_ring
from metalift.symfun import bracket_window_identity_check, sum_prod_identity_check, t_alpha_matrix

LIFTABLE_KAPPAS = {1, 4, 5, 8, 9, 12, 13, 16, 17, 20, 21, 24, 25}
SWEEP_GROUPS = ((3, 2, 2, 8), (5, 2, 4, 7))
CHAIN_GROUPS = ((3, 2, 2, 8), (5, 2, 4, 7), (7, 1, 3, 2), (5, 1, 4, 2), (13, 1, 3, 3))


def _full_orbit_structure(pair, m, alpha):
    """Structural check results on every chain of the pair made of whole alpha-orbits."""
    out = []
    for (start, size), ex in zip(pair.blocks, pair.plan.exponents):
        if is_full_orbit_chain(ex, m):
            out.append(structural_checks_block(pair.ctx, pair.T.block(start, size), pair.Gamma.block(start, size), alpha))
    return out


# --------------------------------------------------------------------------
# shared builds
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def worked_lift(g25):
    t0 = time.perf_counter()
    plan = assign_eigenvalues(decide_lift([S(1, 2), S(3, 2)], g25), g25)
    pair, report = build_lift(plan, g25, N=8, e=2)
    reduced = reduce_lift(pair, g25)
    return pair, report, reduced, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sweep():
    """Every decomposition with at most 3 summands, kappa <= 6, over both sweep groups."""
    t0 = time.perf_counter()
    stats = {"cases": 0, "liftable": 0, "oracle_mismatch": [], "round_trip_fail": [], "plans": [], "structure": []}
    for key in SWEEP_GROUPS:
        G = new_group(*key)
        types = [S(e, k) for e in range(G.m) for k in range(1, 7)]
        for s in (1, 2, 3):
            for combo in itertools.combinations_with_replacement(types, s):
                dec = list(combo)
                stats["cases"] += 1
                verdict = decide_lift(dec, G)
                if verdict.liftable != brute_force_liftable(dec, G):
                    stats["oracle_mismatch"].append((key, dec))
                if isinstance(verdict, Refusal):
                    continue
                stats["liftable"] += 1
                plan = assign_eigenvalues(verdict, G)
                stats["plans"].append((key, plan))
                try:
                    pair, report = build_lift(plan, G)
                    reduced = reduce_lift(pair, G)
                    ok = report["ok"] and as_multiset(reduced, G.m) == as_multiset(dec, G.m)
                except Exception as exc:  # recorded as a failure with its reason
                    ok, pair = False, None
                    stats["round_trip_fail"].append((key, dec, repr(exc)))
                if pair is not None:
                    if not ok:
                        stats["round_trip_fail"].append((key, dec, "report"))
                    stats["structure"].extend(_full_orbit_structure(pair, G.m, G.alpha))
    stats["seconds"] = time.perf_counter() - t0
    return stats


@pytest.fixture(scope="session")
def chain_plans():
    """300 seeded single-chain plans of dimension <= 6 with both Gamma constructions."""
    rng = random.Random(20240)
    t0 = time.perf_counter()
    out = []
    while len(out) < 300:
        G = new_group(*rng.choice(CHAIN_GROUPS))
        plan = random_chain_plan(G, rng, max_dim=6)
        if plan is None:
            continue
        ctx = make_ring(G)
        T = build_T(plan, ctx)
        eps = plan.epsilon_per_block()
        G_rec = build_Gamma_recursive(T, eps, ctx, G)
        G_closed = build_Gamma_closed_form(T, eps, ctx, G)
        out.append((G, plan, ctx, T, G_rec, G_closed))
    return out, time.perf_counter() - t0


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------


def test_criterion_1_worked_example_verdicts(g25, acceptance):
    field_for(g25)
    t0 = time.perf_counter()
    singles = {k for k in range(1, 26) if all(decide_lift([S(e, k)], g25).liftable for e in range(4))}
    any_single = {k for k in range(1, 26) if any(decide_lift([S(e, k)], g25).liftable for e in range(4))}
    a0 = a0_for(g25)
    pair_yes = decide_lift([S(1, 2), S(3, 2)], g25).liftable
    pair_no = not decide_lift([S(1, 2), S(1, 2)], g25).liftable
    long_no = all(not decide_lift([S(e, 21), S(e + a0 * 21, 23)], g25).liftable for e in range(4))
    seconds = time.perf_counter() - t0
    ok = singles == any_single == LIFTABLE_KAPPAS and pair_yes and pair_no and long_no and seconds < 1
    acceptance(1, ok, f"singles {sorted(singles)}; pairs yes/no/no = {pair_yes}/{pair_no}/{long_no}; {seconds:.3f}s")
    assert singles == any_single == LIFTABLE_KAPPAS
    assert pair_yes and pair_no and long_no
    assert seconds < 1


def test_criterion_2_worked_lift(worked_lift, acceptance):
    pair, report, reduced, seconds = worked_lift
    c = report["checks"]
    facts = {
        "T^25 = Id": c["T_order_q"]["ok"],
        "Gamma^4 = Id": c["Gamma_order_m"]["ok"],
        "Gamma^j != Id, j < 4": c["Gamma_exact_order"]["ok"] and report["gamma_order"] == 4 and c["Gamma_exact_order"]["expected"] == 4,
        "Gamma T = T^7 Gamma": c["conjugation"]["ok"],
        "lower triangular mod m": c["lower_triangular_mod_m"]["ok"],
        "reduction": sorted(reduced) == [S(1, 2), S(3, 2)],
        "precision >= 32": report["min_precision"] >= 32,
        "N >= 8, e = 2": pair.ctx.N >= 8 and pair.ctx.e == 2,
        "< 10 s": seconds < 10,
    }
    ok = all(facts.values())
    bad = [k for k, v in facts.items() if not v]
    acceptance(2, ok, f"min precision {report['min_precision']}, {seconds:.2f}s" + (f"; failed: {bad}" if bad else ""))
    assert ok, bad


def test_criterion_3_exhaustive_round_trip(sweep, acceptance):
    ok = not sweep["oracle_mismatch"] and not sweep["round_trip_fail"] and sweep["seconds"] < 300
    acceptance(
        3,
        ok,
        f"{sweep['cases']} decompositions, {sweep['liftable']} liftable, "
        f"{len(sweep['oracle_mismatch'])} oracle mismatches, {len(sweep['round_trip_fail'])} round-trip failures, "
        f"{sweep['seconds']:.1f}s",
    )
    assert not sweep["oracle_mismatch"], sweep["oracle_mismatch"][:5]
    assert not sweep["round_trip_fail"], sweep["round_trip_fail"][:5]
    assert sweep["seconds"] < 300


def test_criterion_4_gamma_cross_oracle(chain_plans, acceptance):
    plans, seconds = chain_plans
    mismatches = [p for (_, p, _, _, a, b) in plans if not (a - b).is_zero_at()]
    dims = [p.dimension for (_, p, *_) in plans]
    ok = len(plans) == 300 and not mismatches and max(dims) <= 6
    acceptance(4, ok, f"{len(plans)} plans, d in [{min(dims)}, {max(dims)}], {len(mismatches)} mismatches, {seconds:.1f}s")
    assert len(plans) == 300 and max(dims) <= 6
    assert not mismatches


def test_criterion_5_t_alpha_formula(acceptance):
    rng = random.Random(5)
    nrng = np.random.default_rng(5)
    agree = binom = 0
    trials = 200
    for _ in range(trials):
        G = new_group(*rng.choice(SWEEP_GROUPS))
        ctx = make_ring(G)
        d, alpha = rng.randint(1, 6), rng.randint(1, 50)
        lam = [random_root_of_unity(ctx, nrng) for _ in range(d)]
        sub = [random_element(ctx, nrng) for _ in range(d - 1)]
        for subdiag in (sub, [ctx.one()] * (d - 1)):
            T = bidiagonal(ctx, lam, subdiag)
            lam_arr = np.stack([z.coeffs for z in lam])
            sub_arr = np.stack([z.coeffs for z in subdiag]) if d > 1 else ctx.zeros_array(0)
            formula = LocalMatrix(ctx, t_alpha_matrix(ctx, lam_arr, sub_arr, alpha), ctx.prec_cap)
            same = (formula - iterated_power(T, alpha)).is_zero_at()
            if subdiag is sub:
                agree += same
            else:
                F = field_for(G)
                want = np.vectorize(F.from_int)(binomial_matrix(d, alpha, G.p))
                binom += same and np.array_equal(formula.reduce(), want)
    ok = agree == trials and binom == trials
    acceptance(5, ok, f"formula = iterated product {agree}/{trials}; unit subdiagonal reduces to binomials {binom}/{trials}")
    assert agree == trials and binom == trials


def test_criterion_6_identity_oracles(worked_lift, sweep, chain_plans, acceptance):
    rng = random.Random(6)
    nrng = np.random.default_rng(6)
    ctx = make_ring(new_group(5, 2, 4, 7))

    sp_ok = sp_zero_cases = 0
    for k in range(1000):
        n = rng.randint(2, 7)
        xs = [random_element(ctx, nrng) for _ in range(n)]
        if k % 5 == 0:
            z = xs[-1]
            sp_zero_cases += 1
        else:
            z = random_element(ctx, nrng)
        sp_ok += sum_prod_identity_check(z, xs, one=ctx.one())

    ab_ok = 0
    for _ in range(1000):
        n = rng.randint(2, 7)
        lam = [random_element(ctx, nrng) for _ in range(n)]
        a_idx, b_idx = rng.sample(range(1, n + 1), 2)
        while (lam[a_idx - 1] - lam[b_idx - 1]).is_zero_at():
            lam[b_idx - 1] = random_element(ctx, nrng)
        A, l, L, B = sorted(rng.randint(1, n) for _ in range(4))
        ab_ok += bracket_window_identity_check(a_idx, b_idx, A, l, L, B, lam, one=ctx.one())

    structure = list(sweep["structure"])
    pair = worked_lift[0]
    structure += _full_orbit_structure(pair, 4, 7)
    for G, plan, c, T, G_rec, _ in chain_plans[0]:
        if is_full_orbit_chain(plan.exponents[0], G.m):
            structure.append(structural_checks_block(c, T, G_rec, G.alpha))
    zero_ok = sum(r["zero_column"] for r in structure)
    final_ok = sum(r["last_entry_relation"] for r in structure)

    ok = sp_ok == 1000 and ab_ok == 1000 and sp_zero_cases > 0 and structure and zero_ok == final_ok == len(structure)
    acceptance(
        6,
        ok,
        f"sum-prod {sp_ok}/1000 ({sp_zero_cases} with z = x_n), bracket window {ab_ok}/1000, "
        f"zero column {zero_ok}/{len(structure)} and last entry relation {final_ok}/{len(structure)} full-orbit chains",
    )
    assert sp_ok == 1000 and ab_ok == 1000 and sp_zero_cases > 0
    assert structure and zero_ok == len(structure) and final_ok == len(structure)


def test_criterion_7_modular_suite(acceptance):
    built = built_ok = 0
    for key in SWEEP_GROUPS:
        G = new_group(*key)
        for eps in range(G.m):
            for kappa in range(1, G.q + 1):
                built += 1
                built_ok += verify_kg_relations(build_summand(G, S(eps, kappa)), G)["ok"]

    G9 = new_group(3, 2, 2, 8)
    types = [S(e, k) for e in range(2) for k in range(1, 10)]
    multisets = recovered = 0
    for s in range(1, 10):
        for combo in itertools.combinations_with_replacement(types, s):
            if sum(c.kappa for c in combo) > 9:
                continue
            multisets += 1
            found = decompose(build_decomposition(G9, list(combo)), G9)
            recovered += as_multiset(found, 2) == as_multiset(combo, 2)

    G25 = new_group(5, 2, 4, 7)
    pairs = list(itertools.product(range(4), range(1, 26)))
    uni = sum(to_uniserial(from_uniserial(ell, mu, G25), G25) == (ell, mu) for ell, mu in pairs)

    ok = built == built_ok and multisets == recovered and uni == len(pairs)
    acceptance(
        7,
        ok,
        f"relations {built_ok}/{built} modules, decompose recovered {recovered}/{multisets} multisets, "
        f"uniserial {uni}/{len(pairs)}",
    )
    assert built == built_ok and multisets == recovered and uni == len(pairs)


def test_criterion_8_orbit_balance(sweep, chain_plans, acceptance):
    plans = [(new_group(*key), plan) for key, plan in sweep["plans"]]
    plans += [(G, plan) for G, plan, *_ in chain_plans[0]]
    G25 = new_group(5, 2, 4, 7)
    plans += [
        (G25, assign_eigenvalues(decide_lift([S(e, k)], G25), G25)) for e in range(4) for k in sorted(LIFTABLE_KAPPAS)
    ]
    balanced = sum(orbit_balance_check(plan, G) for G, plan in plans)

    projective = []
    for eps in range(4):
        plan = assign_eigenvalues(decide_lift([S(eps, 25)], G25), G25)
        moved = plan.dimension - sum(ex.count(0) for ex in plan.exponents)
        projective.append(moved == 24 and moved % 4 == 0 and orbit_balance_check(plan, G25))

    ok = balanced == len(plans) and all(projective)
    acceptance(8, ok, f"balanced {balanced}/{len(plans)} accepted plans; (eps, 25): 24 = 0 mod 4 for all eps {all(projective)}")
    assert balanced == len(plans) and all(projective)
