import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from metalift.field import a0_for, discrete_log_a0, eigenspace_basis, field_for, make_field
from metalift.group import new_group

GROUPS = [(5, 2, 4, 7), (3, 2, 2, 8), (5, 1, 3, 1), (7, 1, 3, 2), (2, 1, 3, 1), (3, 1, 8, 1), (13, 1, 3, 3)]


def test_q25_residue_field():
    F = make_field(new_group(5, 2, 4, 7))
    assert F.f == 1
    assert F.zeta == 2
    assert discrete_log_a0(F, 7) == 1


def test_q9_residue_field():
    F = make_field(new_group(3, 2, 2, 8))
    assert F.zeta == 2
    assert a0_for(new_group(3, 2, 2, 8)) == 1


def test_trivial_alpha_has_a0_zero():
    assert a0_for(new_group(5, 2, 4, 1)) == 0


def test_degree_two_field():
    F = make_field(new_group(5, 1, 3, 1))
    assert F.f == 2
    assert F.size == 25
    Y = sympy.Symbol("Y")
    g = sympy.Poly(list(reversed(F.modulus)), Y, modulus=5)
    assert g.is_irreducible
    assert sympy.Poly(Y**3 - 1, Y, modulus=5).rem(g).is_zero


@pytest.mark.parametrize("key", GROUPS)
def test_zeta_has_order_m(key):
    G = new_group(*key)
    F = field_for(G)
    assert F.element_order(F.zeta) == G.m
    assert F.power(F.zeta, a0_for(G)) == F.from_int(G.alpha)


@settings(max_examples=300)
@given(st.sampled_from(GROUPS), st.data())
def test_field_axioms(key, data):
    F = field_for(new_group(*key))
    a, b, c = (data.draw(st.integers(0, F.size - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@settings(max_examples=200)
@given(st.sampled_from([(5, 1, 3, 1), (2, 1, 3, 1), (3, 1, 8, 1)]), st.data())
def test_mul_matches_polynomial_arithmetic(key, data):
    F = field_for(new_group(*key))
    Y = sympy.Symbol("Y")
    g = sympy.Poly(list(reversed(F.modulus)), Y, modulus=F.p)
    a, b = (data.draw(st.integers(0, F.size - 1)) for _ in range(2))
    pa = sympy.Poly(list(reversed(F.to_coeffs(a))), Y, modulus=F.p)
    pb = sympy.Poly(list(reversed(F.to_coeffs(b))), Y, modulus=F.p)
    expect = (pa * pb).rem(g)
    coeffs = [int(c) % F.p for c in reversed(expect.all_coeffs())]
    coeffs += [0] * (F.f - len(coeffs))
    assert F.to_coeffs(F.mul(a, b)) == coeffs


def test_code_round_trip():
    F = field_for(new_group(5, 1, 3, 1))
    for c in range(F.size):
        assert F.from_coeffs(F.to_coeffs(c)) == c


@settings(max_examples=100)
@given(st.sampled_from([(5, 2, 4, 7), (5, 1, 3, 1)]), st.integers(1, 5), st.integers(0, 2**32))
def test_inverse_and_kernel(key, n, seed):
    F = field_for(new_group(*key))
    rng = np.random.default_rng(seed)
    M = rng.integers(0, F.size, size=(n, n))
    r = F.rank(M)
    basis = F.kernel(M)
    assert len(basis) == n - r
    for v in basis:
        assert not F.matmul(M, v[:, None]).any()
    if r == n:
        assert np.array_equal(F.matmul(M, F.inverse(M)), F.eye(n))
    else:
        with pytest.raises(ZeroDivisionError):
            F.inverse(M)


def test_eigenspace():
    F = field_for(new_group(5, 2, 4, 7))
    M = np.array([[2, 0, 0], [1, 2, 0], [0, 0, 3]])
    assert len(eigenspace_basis(F, M, 2)) == 1
    assert len(eigenspace_basis(F, M, 3)) == 1
    assert eigenspace_basis(F, M, 4) == []
