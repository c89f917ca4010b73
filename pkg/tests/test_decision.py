import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metalift.decision import (
    LiftPlan,
    PreconditionError,
    Refusal,
    alpha_orbit,
    assign_eigenvalues,
    bell_number,
    brute_force_liftable,
    chain_flag,
    chain_graph,
    decide_lift,
    fixed_dimension,
    orbit_balance_check,
    set_partitions,
)
from metalift.group import new_group
from metalift.modular import SummandSpec as S

LIFTABLE_KAPPAS = {1, 4, 5, 8, 9, 12, 13, 16, 17, 20, 21, 24, 25}


@pytest.mark.parametrize("kappa", range(1, 26))
def test_single_summands_q25(g25, kappa):
    for eps in range(4):
        assert decide_lift([S(eps, kappa)], g25).liftable == (kappa in LIFTABLE_KAPPAS)


def test_worked_pairs_q25(g25):
    assert decide_lift([S(1, 2), S(3, 2)], g25).liftable
    assert not decide_lift([S(1, 2), S(1, 2)], g25).liftable
    for eps in range(4):
        assert not decide_lift([S(eps, 21), S(eps + 21, 23)], g25).liftable


def test_plan_shape_q25(g25):
    plan = decide_lift([S(3, 2), S(1, 2)], g25)
    # the chain must start at (1, 2): 1 + a0 * 2 = 3
    assert plan.chains == ((1, 0),)
    assert plan.a_flags == (0,)
    assert plan.subdiag_pattern(0) == ["1", "t", "1"]
    plan = assign_eigenvalues(plan, g25)
    assert plan.exponents == ((1, 7, 24, 18),)
    assert plan.predicted_decomposition(g25, 1) == [S(1, 2), S(3, 2)]


def test_refusal_certificate(g25):
    r = decide_lift([S(1, 2), S(1, 2)], g25)
    assert isinstance(r, Refusal) and not r.liftable
    cert = r.to_json()
    assert cert["s"] == 2 and cert["exhaustive"]
    assert cert["search_bound"] == 2 * 2
    assert sorted(map(tuple, cert["graph"]["edges"])) == []
    assert all("neither 0 nor 1" in x for x in cert["reasons"])
    json.dumps(cert)


def test_chain_graph_edges(g25):
    g = chain_graph([S(1, 2), S(3, 2), S(1, 4)], g25, 1)
    assert (0, 1) in g.edges and (1, 0) in g.edges
    assert (2, 0) in g.edges and (0, 2) not in g.edges


def test_chain_flag():
    assert chain_flag(8, new_group(5, 2, 4, 7)) == 0
    assert chain_flag(9, new_group(5, 2, 4, 7)) == 1
    assert chain_flag(6, new_group(5, 2, 4, 7)) is None
    # m = 1: every chain carries the eigenvalue 1
    assert chain_flag(3, new_group(5, 1, 1, 1)) == 1


def test_uniform_a_mode(g25):
    # (0, 4) and (1, 1) cannot share a chain; alone they carry the flags 0 and 1
    dec = [S(0, 4), S(1, 1)]
    assert decide_lift(dec, g25).liftable
    assert not decide_lift(dec, g25, uniform_a=True).liftable
    assert not brute_force_liftable(dec, g25, uniform_a=True)
    plan = decide_lift([S(0, 4), S(0, 4)], g25, uniform_a=True)
    assert plan.liftable and plan.uniform_a


def test_plan_json_round_trip(g25):
    plan = assign_eigenvalues(decide_lift([S(1, 2), S(3, 2), S(2, 1)], g25), g25)
    back = LiftPlan.from_json(json.loads(json.dumps(plan.to_json())))
    assert back == plan


def test_bell_and_partitions():
    assert [bell_number(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]
    for n in range(6):
        parts = list(set_partitions(list(range(n))))
        assert len(parts) == bell_number(n)
        assert len({tuple(sorted(tuple(sorted(b)) for b in p)) for p in parts}) == len(parts)


def test_alpha_orbits(g25):
    assert alpha_orbit(1, g25) == [1, 7, 24, 18]
    assert alpha_orbit(5, g25) == [5, 10, 20, 15]
    assert alpha_orbit(0, g25) == [0]


def test_exhaustive_small_q9(g9):
    types = [S(e, k) for e in range(2) for k in range(1, 5)]
    for s in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(types, s):
            for ua in (False, True):
                v = decide_lift(list(combo), g9, uniform_a=ua)
                assert v.liftable == brute_force_liftable(list(combo), g9, uniform_a=ua), combo


@settings(max_examples=150)
@given(
    st.sampled_from([(3, 2, 2, 8), (5, 2, 4, 7), (7, 1, 3, 2), (13, 1, 3, 3), (5, 1, 4, 2)]),
    st.booleans(),
    st.data(),
)
def test_decide_matches_brute_force(key, uniform_a, data):
    G = new_group(*key)
    dec = data.draw(
        st.lists(st.builds(S, st.integers(0, G.m - 1), st.integers(1, min(G.q, 7))), min_size=1, max_size=5)
    )
    v = decide_lift(dec, G, uniform_a=uniform_a)
    assert v.liftable == brute_force_liftable(dec, G, uniform_a=uniform_a)
    if v.liftable:
        plan = assign_eigenvalues(v, G)
        assert orbit_balance_check(plan, G)
        assert sorted(i for ch in plan.chains for i in ch) == list(range(len(dec)))


def test_orbit_balance_projective(g25):
    for eps in range(4):
        plan = assign_eigenvalues(decide_lift([S(eps, 25)], g25), g25)
        assert plan.dimension == 25
        assert fixed_dimension(plan) == 1
        assert (plan.dimension - fixed_dimension(plan)) % 4 == 0
        assert orbit_balance_check(plan, g25)


def test_orbit_balance_detects_imbalance(g25):
    plan = assign_eigenvalues(decide_lift([S(1, 2), S(3, 2)], g25), g25)
    broken = LiftPlan(plan.decomposition, plan.chains, plan.a_flags, ((1, 7, 24, 2),))
    assert not orbit_balance_check(broken, g25)


def test_unfaithful_group_refuses_eigenvalues():
    G = new_group(5, 2, 4, 1)
    plan = decide_lift([S(0, 4)], G)
    with pytest.raises(PreconditionError):
        assign_eigenvalues(plan, G)
