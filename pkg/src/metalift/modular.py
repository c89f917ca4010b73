"""Indecomposable k[G]-modules V(eps, kappa) as explicit matrix pairs and
decomposition of arbitrary pairs (tau, sigma) into such summands.

A module V(eps, kappa) has basis e_1, ..., e_kappa with tau acting as a single
Jordan block (tau - 1) e_i = e_{i+1} and sigma e_1 = zeta^eps e_1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import FieldContext, eigenspace_basis, field_for
from .group import GroupParams


@dataclass(frozen=True, order=True)
class SummandSpec:
    epsilon: int
    kappa: int

    def normalized(self, m: int) -> "SummandSpec":
        return SummandSpec(self.epsilon % m, self.kappa)

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "kappa": self.kappa}

    @classmethod
    def from_json(cls, obj) -> "SummandSpec":
        if isinstance(obj, (list, tuple)):
            eps, kappa = obj
        else:
            eps, kappa = obj["epsilon"], obj["kappa"]
        return cls(int(eps), int(kappa))


def check_spec(spec: SummandSpec, params: GroupParams) -> SummandSpec:
    if not 1 <= spec.kappa <= params.q:
        raise ValueError(f"kappa = {spec.kappa} outside [1, {params.q}]")
    return spec.normalized(params.m)


def as_multiset(specs: Iterable[SummandSpec], m: int) -> Counter:
    return Counter(s.normalized(m) for s in specs)


def canonical_order(specs: Iterable[SummandSpec], m: int) -> list[SummandSpec]:
    """Sorted by (kappa desc, epsilon asc), with epsilon reduced mod m."""
    return sorted((s.normalized(m) for s in specs), key=lambda s: (-s.kappa, s.epsilon))


def decomposition_to_json(specs: Sequence[SummandSpec]) -> list:
    return [s.to_json() for s in specs]


def decomposition_from_json(obj) -> list[SummandSpec]:
    if isinstance(obj, dict):
        obj = obj["decomposition"]
    return [SummandSpec.from_json(o) for o in obj]


@dataclass(frozen=True, eq=False)
class KModule:
    tau: np.ndarray
    sigma: np.ndarray

    @property
    def dim(self) -> int:
        return self.tau.shape[0]

    def to_json(self, fctx: FieldContext) -> dict:
        def mat(M):
            return [[fctx.to_coeffs(int(c)) for c in row] for row in M]

        return {"dimension": self.dim, "tau": mat(self.tau), "sigma": mat(self.sigma)}

    @classmethod
    def from_json(cls, fctx: FieldContext, obj: dict) -> "KModule":
        def mat(rows):
            n = len(rows)
            M = np.zeros((n, n), dtype=np.int64)
            for i, row in enumerate(rows):
                if len(row) != n:
                    raise ValueError("matrices must be square")
                for j, c in enumerate(row):
                    M[i, j] = fctx.from_coeffs(c if isinstance(c, (list, tuple)) else [c] + [0] * (fctx.f - 1))
            return M

        tau, sigma = mat(obj["tau"]), mat(obj["sigma"])
        if tau.shape != sigma.shape or tau.shape[0] != int(obj.get("dimension", tau.shape[0])):
            raise ValueError("tau, sigma and dimension disagree")
        return cls(tau, sigma)


def jordan_tau(n: int) -> np.ndarray:
    tau = np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        tau[i + 1, i] = 1
    return tau


def build_summand(params: GroupParams, spec: SummandSpec) -> KModule:
    fctx = field_for(params)
    spec = check_spec(spec, params)
    k = spec.kappa
    tau = jordan_tau(k)
    shift = fctx.sub(fctx.matpow(tau, params.alpha), fctx.eye(k))
    col = np.zeros(k, dtype=np.int64)
    col[0] = fctx.power(fctx.zeta, spec.epsilon)
    sigma = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        sigma[:, i] = col
        col = fctx.matmul(shift, col[:, None])[:, 0]
    return KModule(tau, sigma)


def sigma_closed_form(params: GroupParams, spec: SummandSpec) -> np.ndarray:
    """sigma via powers of A = tau^alpha - 1 written out as a matrix (cross-check)."""
    fctx = field_for(params)
    k = spec.kappa
    A = fctx.sub(fctx.matpow(jordan_tau(k), params.alpha), fctx.eye(k))
    z = fctx.power(fctx.zeta, spec.epsilon)
    sigma = np.zeros((k, k), dtype=np.int64)
    Ai = fctx.eye(k)
    for i in range(k):
        sigma[:, i] = fctx.mul(z, Ai[:, 0])
        Ai = fctx.matmul(A, Ai)
    return sigma


def direct_sum(modules: Sequence[KModule]) -> KModule:
    n = sum(M.dim for M in modules)
    tau = np.zeros((n, n), dtype=np.int64)
    sigma = np.zeros((n, n), dtype=np.int64)
    s = 0
    for M in modules:
        tau[s : s + M.dim, s : s + M.dim] = M.tau
        sigma[s : s + M.dim, s : s + M.dim] = M.sigma
        s += M.dim
    return KModule(tau, sigma)


def build_decomposition(params: GroupParams, specs: Sequence[SummandSpec]) -> KModule:
    return direct_sum([build_summand(params, s) for s in specs])


def _order(fctx: FieldContext, M: np.ndarray, bound: int) -> int | None:
    n = M.shape[0]
    P = fctx.eye(n)
    for j in range(1, bound + 1):
        P = fctx.matmul(P, M)
        if np.array_equal(P, fctx.eye(n)):
            return j
    return None


def verify_kg_relations(M: KModule, params: GroupParams) -> dict:
    """Exact check of tau^q = 1, sigma^m = 1 and sigma tau = tau^alpha sigma."""
    fctx = field_for(params)
    n = M.dim
    eye = fctx.eye(n)
    tau_q = np.array_equal(fctx.matpow(M.tau, params.q), eye)
    sigma_m = np.array_equal(fctx.matpow(M.sigma, params.m), eye)
    conj = np.array_equal(fctx.matmul(M.sigma, M.tau), fctx.matmul(fctx.matpow(M.tau, params.alpha), M.sigma))
    report = {
        "tau_q": bool(tau_q),
        "sigma_m": bool(sigma_m),
        "conjugation": bool(conj),
        "tau_order": _order(fctx, M.tau, params.q),
        "sigma_order": _order(fctx, M.sigma, params.m),
    }
    report["ok"] = report["tau_q"] and report["sigma_m"] and report["conjugation"]
    return report


def to_uniserial(spec: SummandSpec, params: GroupParams) -> tuple[int, int]:
    spec = check_spec(spec, params)
    return (spec.epsilon + spec.kappa) % params.m, spec.kappa


def from_uniserial(ell: int, mu: int, params: GroupParams) -> SummandSpec:
    if not 0 <= ell < params.m:
        raise ValueError(f"ell = {ell} outside [0, {params.m - 1}]")
    if not 1 <= mu <= params.q:
        raise ValueError(f"mu = {mu} outside [1, {params.q}]")
    return SummandSpec((ell - mu) % params.m, mu)


class DecompositionError(ArithmeticError):
    pass


def _nilpotency_index(fctx: FieldContext, N: np.ndarray) -> int:
    n = N.shape[0]
    P = fctx.eye(n)
    for k in range(n + 1):
        if not P.any():
            return k
        P = fctx.matmul(P, N)
    raise DecompositionError("tau - 1 is not nilpotent")


def decompose(M: KModule, params: GroupParams) -> list[SummandSpec]:
    """Split off cyclic summands generated by sigma-eigenvectors of maximal tau-depth."""
    fctx = field_for(params)
    tau, sigma = M.tau.copy(), M.sigma.copy()
    found = []
    while tau.shape[0] > 0:
        n = tau.shape[0]
        N = fctx.sub(tau, fctx.eye(n))
        kappa = _nilpotency_index(fctx, N)
        top = fctx.matpow(N, kappa - 1)
        E = None
        for eps in range(params.m):
            for v in eigenspace_basis(fctx, sigma, fctx.power(fctx.zeta, eps)):
                if fctx.matmul(top, v[:, None]).any():
                    E, found_eps = v, eps
                    break
            if E is not None:
                break
        if E is None:
            raise DecompositionError("no sigma-eigenvector escapes the kernel of (tau - 1)^(kappa - 1)")
        found.append(SummandSpec(found_eps, kappa))
        cols = [E]
        for _ in range(kappa - 1):
            cols.append(fctx.matmul(N, cols[-1][:, None])[:, 0])
        U = np.stack(cols, axis=1)
        # complete U to a basis with standard vectors (pivot columns of [U | I])
        _, piv = fctx.rref(np.hstack([U, fctx.eye(n)]))
        comp = [c - kappa for c in piv if c >= kappa]
        P = np.hstack([U, fctx.eye(n)[:, comp]])
        Pinv = fctx.inverse(P)
        tau = fctx.matmul(fctx.matmul(Pinv, tau), P)[kappa:, kappa:]
        sigma = fctx.matmul(fctx.matmul(Pinv, sigma), P)[kappa:, kappa:]
    return sorted(found, key=lambda s: (-s.kappa, s.epsilon))

