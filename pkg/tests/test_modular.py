import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metalift.field import field_for
from metalift.group import new_group
from metalift.modular import (
    DecompositionError,
    KModule,
    SummandSpec,
    as_multiset,
    build_decomposition,
    build_summand,
    canonical_order,
    check_spec,
    decompose,
    decomposition_from_json,
    decomposition_to_json,
    direct_sum,
    from_uniserial,
    jordan_tau,
    sigma_closed_form,
    to_uniserial,
    verify_kg_relations,
)

GROUPS = [(3, 2, 2, 8), (5, 2, 4, 7), (5, 1, 3, 1), (7, 1, 3, 2)]


@pytest.mark.parametrize("key", GROUPS)
def test_every_summand_satisfies_relations(key):
    G = new_group(*key)
    for eps in range(G.m):
        for kappa in range(1, min(G.q, 10) + 1):
            M = build_summand(G, SummandSpec(eps, kappa))
            rel = verify_kg_relations(M, G)
            assert rel["ok"], (eps, kappa, rel)


@pytest.mark.parametrize("key", GROUPS)
def test_sigma_two_constructions_agree(key):
    G = new_group(*key)
    for eps in range(G.m):
        for kappa in range(1, min(G.q, 7) + 1):
            spec = SummandSpec(eps, kappa)
            assert np.array_equal(build_summand(G, spec).sigma, sigma_closed_form(G, spec))


def test_sigma_first_column(g25):
    M = build_summand(g25, SummandSpec(1, 3))
    F = field_for(g25)
    assert M.sigma[0, 0] == F.zeta
    assert M.sigma[1, 0] == 0  # sigma e_1 = zeta e_1
    assert np.array_equal(M.tau, jordan_tau(3))


def test_sigma_diagonal_walks_by_a0(g25):
    # diagonal of sigma on V(eps, kappa) is zeta^(eps + a0 j)
    F = field_for(g25)
    M = build_summand(g25, SummandSpec(2, 6))
    assert [int(M.sigma[j, j]) for j in range(6)] == [F.power(F.zeta, 2 + j) for j in range(6)]


def test_check_spec(g25):
    assert check_spec(SummandSpec(5, 3), g25) == SummandSpec(1, 3)
    with pytest.raises(ValueError):
        check_spec(SummandSpec(0, 26), g25)
    with pytest.raises(ValueError):
        check_spec(SummandSpec(0, 0), g25)


def test_canonical_order_and_json():
    specs = [SummandSpec(3, 2), SummandSpec(1, 5), SummandSpec(1, 2)]
    assert canonical_order(specs, 4) == [SummandSpec(1, 5), SummandSpec(1, 2), SummandSpec(3, 2)]
    assert decomposition_from_json(decomposition_to_json(specs)) == specs
    assert decomposition_from_json({"decomposition": [[1, 2]]}) == [SummandSpec(1, 2)]


def _multisets(G, max_total):
    types = [SummandSpec(e, k) for e in range(G.m) for k in range(1, max_total + 1)]
    for s in range(1, max_total + 1):
        for combo in itertools.combinations_with_replacement(types, s):
            if sum(c.kappa for c in combo) <= max_total:
                yield list(combo)


def test_decompose_direct_sum_small(g25):
    for dec in _multisets(g25, 5):
        found = decompose(build_decomposition(g25, dec), g25)
        assert as_multiset(found, g25.m) == as_multiset(dec, g25.m)


@settings(max_examples=60)
@given(st.sampled_from(GROUPS), st.integers(0, 2**32), st.data())
def test_decompose_after_change_of_basis(key, seed, data):
    G = new_group(*key)
    F = field_for(G)
    specs = data.draw(
        st.lists(st.builds(SummandSpec, st.integers(0, G.m - 1), st.integers(1, 4)), min_size=1, max_size=3)
    )
    M = build_decomposition(G, specs)
    rng = np.random.default_rng(seed)
    n = M.dim
    while True:
        P = rng.integers(0, F.size, size=(n, n))
        if F.rank(P) == n:
            break
    Pinv = F.inverse(P)
    conj = KModule(F.matmul(F.matmul(Pinv, M.tau), P), F.matmul(F.matmul(Pinv, M.sigma), P))
    assert verify_kg_relations(conj, G)["ok"]
    assert as_multiset(decompose(conj, G), G.m) == as_multiset(specs, G.m)


def test_decompose_output_sorted(g9):
    dec = [SummandSpec(1, 1), SummandSpec(0, 3), SummandSpec(1, 3)]
    assert decompose(build_decomposition(g9, dec), g9) == [SummandSpec(0, 3), SummandSpec(1, 3), SummandSpec(1, 1)]


def test_decompose_rejects_non_unipotent_tau(g9):
    M = KModule(np.array([[2]]), np.array([[1]]))
    with pytest.raises(DecompositionError):
        decompose(M, g9)


def test_relations_detect_bad_sigma(g25):
    M = build_summand(g25, SummandSpec(0, 3))
    bad = KModule(M.tau, np.eye(3, dtype=np.int64))
    rel = verify_kg_relations(bad, g25)
    assert rel["sigma_m"] and not rel["conjugation"] and not rel["ok"]


def test_uniserial_all_pairs(g25):
    for ell in range(4):
        for mu in range(1, 26):
            spec = from_uniserial(ell, mu, g25)
            assert to_uniserial(spec, g25) == (ell, mu)
            assert spec.kappa == mu and (spec.epsilon + mu) % 4 == ell
    with pytest.raises(ValueError):
        from_uniserial(4, 1, g25)
    with pytest.raises(ValueError):
        from_uniserial(0, 26, g25)


def test_kmodule_json_round_trip():
    G = new_group(5, 1, 3, 1)
    F = field_for(G)
    M = direct_sum([build_summand(G, SummandSpec(1, 2)), build_summand(G, SummandSpec(2, 3))])
    back = KModule.from_json(F, M.to_json(F))
    assert np.array_equal(back.tau, M.tau) and np.array_equal(back.sigma, M.sigma)
    with pytest.raises(ValueError):
        KModule.from_json(F, {"tau": [[[1, 0]]], "sigma": [[[1, 0], [0, 0]]]})
