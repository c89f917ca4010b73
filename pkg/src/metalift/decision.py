"""Decide liftability of a direct sum of V(eps, kappa) by partitioning the
summands into chains, and assign lifted eigenvalues to an accepted plan.

A chain is an ordered list of summands where each successor satisfies
eps_next = eps_prev + a0 * kappa_prev (mod m); an acceptable chain has total
dimension at most q and total dimension congruent to 0 or 1 mod m.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

from .field import a0_for
from .group import GroupParams
from .modular import SummandSpec, check_spec


class PreconditionError(ValueError):
    """An operation was called outside the hypotheses it relies on."""


@dataclass(frozen=True)
class ChainGraph:
    nodes: tuple
    edges: tuple  # (i, j) pairs, 0-based

    def to_json(self) -> dict:
        return {"nodes": [s.to_json() for s in self.nodes], "edges": [list(e) for e in self.edges]}


def chain_graph(dec: Sequence[SummandSpec], params: GroupParams, a0: int) -> ChainGraph:
    m = params.m
    edges = tuple(
        (i, j)
        for i, si in enumerate(dec)
        for j, sj in enumerate(dec)
        if i != j and (sj.epsilon - si.epsilon - a0 * si.kappa) % m == 0
    )
    return ChainGraph(tuple(dec), edges)


def chain_flag(total: int, params: GroupParams) -> int | None:
    """Residue class a in {0, 1} of a chain's dimension, None if neither.

    For m = 1 every chain is treated as carrying the eigenvalue 1.
    """
    if params.m == 1:
        return 1
    r = total % params.m
    return r if r in (0, 1) else None


@dataclass(frozen=True)
class LiftPlan:
    decomposition: tuple  # input summands, eps reduced mod m
    chains: tuple  # tuple of tuples of 0-based indices into decomposition
    a_flags: tuple
    exponents: tuple | None = None  # per chain, exponents of zeta_q
    uniform_a: bool = False

    @property
    def liftable(self) -> bool:
        return True

    def chain_specs(self, c: int) -> list[SummandSpec]:
        return [self.decomposition[i] for i in self.chains[c]]

    def chain_dims(self) -> list[int]:
        return [sum(self.decomposition[i].kappa for i in ch) for ch in self.chains]

    @property
    def dimension(self) -> int:
        return sum(self.chain_dims())

    def epsilon_per_block(self) -> list[int]:
        return [self.decomposition[ch[0]].epsilon for ch in self.chains]

    def subdiag_pattern(self, c: int) -> list[str]:
        """'1' or 't' for each of the d - 1 subdiagonal slots of chain c."""
        kappas = [s.kappa for s in self.chain_specs(c)]
        d = sum(kappas)
        splits = set(itertools.accumulate(kappas[:-1]))
        return ["t" if i in splits else "1" for i in range(1, d)]

    def global_subdiag(self) -> list[str]:
        out = []
        for c in range(len(self.chains)):
            if c:
                out.append("0")
            out.extend(self.subdiag_pattern(c))
        return out

    def predicted_decomposition(self, params: GroupParams, a0: int) -> list[SummandSpec]:
        out = []
        for c in range(len(self.chains)):
            specs = self.chain_specs(c)
            eps = specs[0].epsilon
            partial = 0
            for s in specs:
                out.append(SummandSpec((eps + a0 * partial) % params.m, s.kappa))
                partial += s.kappa
        return out

    def to_json(self) -> dict:
        out = {
            "decomposition": [s.to_json() for s in self.decomposition],
            "chains": [list(ch) for ch in self.chains],
            "a_flags": list(self.a_flags),
            "subdiag": [self.subdiag_pattern(c) for c in range(len(self.chains))],
            "uniform_a": self.uniform_a,
        }
        if self.exponents is not None:
            out["exponents"] = [list(e) for e in self.exponents]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "LiftPlan":
        return cls(
            decomposition=tuple(SummandSpec.from_json(s) for s in obj["decomposition"]),
            chains=tuple(tuple(int(i) for i in ch) for ch in obj["chains"]),
            a_flags=tuple(int(a) for a in obj["a_flags"]),
            exponents=tuple(tuple(int(c) for c in e) for e in obj["exponents"]) if "exponents" in obj else None,
            uniform_a=bool(obj.get("uniform_a", False)),
        )


@dataclass(frozen=True)
class Refusal:
    graph: ChainGraph
    states_explored: int
    uniform_a: bool
    reasons: tuple = field(default_factory=tuple)

    @property
    def liftable(self) -> bool:
        return False

    @property
    def s(self) -> int:
        return len(self.graph.nodes)

    @property
    def search_bound(self) -> int:
        """s! * Bell(s): orderings times set partitions."""
        return math.factorial(self.s) * bell_number(self.s)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "graph": self.graph.to_json(),
            "states_explored": self.states_explored,
            "search_bound": self.search_bound,
            "exhaustive": True,
            "uniform_a": self.uniform_a,
            "reasons": list(self.reasons),
        }


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def _chain_ok(specs: Sequence[SummandSpec], params: GroupParams, a0: int, required_a: int | None) -> bool:
    total = sum(s.kappa for s in specs)
    if total > params.q:
        return False
    flag = chain_flag(total, params)
    if flag is None or (required_a is not None and flag != required_a):
        return False
    m = params.m
    return all((b.epsilon - a.epsilon - a0 * a.kappa) % m == 0 for a, b in zip(specs, specs[1:]))


def _normalize(dec: Sequence[SummandSpec], params: GroupParams) -> tuple:
    return tuple(check_spec(s, params) for s in dec)


def decide_lift(
    dec: Sequence[SummandSpec],
    params: GroupParams,
    a0: int | None = None,
    uniform_a: bool = False,
) -> LiftPlan | Refusal:
    """Memoized backtracking over chain partitions; returns the first witness in canonical order."""
    if a0 is None:
        a0 = a0_for(params)
    dec = _normalize(dec, params)
    s = len(dec)
    m, q = params.m, params.q
    # canonical order: by (kappa desc, eps asc), ties by input position
    order = sorted(range(s), key=lambda i: (-dec[i].kappa, dec[i].epsilon, i))
    types = sorted(set(dec), key=lambda t: (-t.kappa, t.epsilon))
    counts0 = tuple(sum(1 for d in dec if d == t) for t in types)
    explored = [0]

    def chains_from(counts, first, flag_req):
        """Ordered chains (as type lists) using multiset `counts` that contain type `first`."""
        out = []

        def extend(seq, cnt, total, used_first):
            last = types[seq[-1]]
            if used_first:
                flag = chain_flag(total, params)
                if flag is not None and (flag_req is None or flag == flag_req):
                    out.append((tuple(seq), flag))
            for k, t in enumerate(types):
                if cnt[k] == 0 or total + t.kappa > q:
                    continue
                if (t.epsilon - last.epsilon - a0 * last.kappa) % m:
                    continue
                cnt[k] -= 1
                seq.append(k)
                extend(seq, cnt, total + t.kappa, used_first or k == first)
                seq.pop()
                cnt[k] += 1

        for k, t in enumerate(types):
            if counts[k]:
                cnt = list(counts)
                cnt[k] -= 1
                extend([k], cnt, t.kappa, k == first)
        return out

    @lru_cache(maxsize=None)
    def solve(counts, flag_req):
        explored[0] += 1
        if not any(counts):
            return ()
        first = next(k for k, c in enumerate(counts) if c)
        for seq, flag in chains_from(counts, first, flag_req):
            rest = list(counts)
            for k in seq:
                rest[k] -= 1
            sub = solve(tuple(rest), flag_req)
            if sub is not None:
                return ((seq, flag),) + sub
        return None

    result = None
    if s == 0:
        result = ()
    elif uniform_a:
        for a in (0, 1):
            result = solve(counts0, a)
            if result is not None:
                break
    else:
        result = solve(counts0, None)

    if result is None:
        graph = chain_graph(dec, params, a0)
        reasons = tuple(
            f"summand {i} ({d.epsilon}, {d.kappa}): kappa mod m = {d.kappa % m} is neither 0 nor 1"
            for i, d in enumerate(dec)
            if chain_flag(d.kappa, params) is None
        )
        return Refusal(graph, explored[0], uniform_a, reasons)

    # map type sequences back to input indices, taking positions in canonical order
    pools = {t: [i for i in order if dec[i] == t] for t in types}
    chains, flags = [], []
    for seq, flag in result:
        chains.append(tuple(pools[types[k]].pop(0) for k in seq))
        flags.append(flag)
    plan = LiftPlan(dec, tuple(chains), tuple(flags), None, uniform_a)
    validate_plan(plan, params, a0)
    return plan


def validate_plan(plan: LiftPlan, params: GroupParams, a0: int) -> None:
    """Re-check conditions on sizes, residues and successors, independently of the search."""
    seen = sorted(i for ch in plan.chains for i in ch)
    if seen != list(range(len(plan.decomposition))):
        raise PreconditionError("chains do not partition the summands")
    req = plan.a_flags[0] if plan.uniform_a and plan.a_flags else None
    for c, ch in enumerate(plan.chains):
        specs = plan.chain_specs(c)
        if not _chain_ok(specs, params, a0, req):
            raise PreconditionError(f"chain {c} = {specs} violates the chain conditions")
        if chain_flag(sum(s.kappa for s in specs), params) != plan.a_flags[c]:
            raise PreconditionError(f"chain {c} has the wrong residue flag")


def brute_force_liftable(dec: Sequence[SummandSpec], params: GroupParams, a0: int | None = None, uniform_a: bool = False) -> bool:
    """Unpruned oracle: every set partition, every ordering of every block."""
    if a0 is None:
        a0 = a0_for(params)
    dec = _normalize(dec, params)
    idx = list(range(len(dec)))
    flags = (0, 1) if uniform_a else (None,)
    for partition in set_partitions(idx):
        for req in flags:
            if all(
                any(_chain_ok([dec[i] for i in perm], params, a0, req) for perm in itertools.permutations(block))
                for block in partition
            ):
                return True
    return False


def set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------


def alpha_orbit(r: int, params: GroupParams) -> list[int]:
    """r, r*alpha, r*alpha^2, ... until it returns to r (mod q)."""
    out = [r % params.q]
    x = (r * params.alpha) % params.q
    while x != out[0]:
        out.append(x)
        x = (x * params.alpha) % params.q
    return out


def assign_eigenvalues(plan: LiftPlan, params: GroupParams) -> LiftPlan:
    """Per chain: whole alpha-orbits of nonzero exponents, smallest representatives first,
    followed by the exponent 0 when the chain carries the flag 1."""
    if not params.faithful:
        raise PreconditionError("eigenvalue assignment needs ord_{p^i}(alpha) = m for every i")
    m, q = params.m, params.q
    exps = []
    for c, d in enumerate(plan.chain_dims()):
        flag = plan.a_flags[c]
        n_orbits, rem = divmod(d - flag, m)
        if rem:
            raise AssertionError(f"chain {c}: dimension {d} is not {flag} mod {m}")
        chosen, used = [], set()
        r = 1
        while len(chosen) < n_orbits * m:
            if r >= q:
                raise AssertionError(f"chain {c}: not enough alpha-orbits for dimension {d}")
            if r not in used:
                orb = alpha_orbit(r, params)
                if len(orb) != m:
                    raise AssertionError(f"orbit of {r} has size {len(orb)} != {m}")
                used.update(orb)
                chosen.extend(orb)
            r += 1
        if flag:
            chosen.append(0)
        exps.append(tuple(chosen))
    out = replace(plan, exponents=tuple(exps))
    check_lambda_successors(out, params)
    return out


def check_lambda_successors(plan: LiftPlan, params: GroupParams) -> None:
    """Within each chain: exponents distinct, and c_i * alpha = c_{i+1} (m not dividing i)
    or c_{i-m+1} (m dividing i), 1-based, for every slot inside a full orbit."""
    m, q, alpha = params.m, params.q, params.alpha
    for c, ex in enumerate(plan.exponents):
        if len(set(ex)) != len(ex):
            raise AssertionError(f"chain {c}: repeated eigenvalue exponents {ex}")
        full = len(ex) - plan.a_flags[c]
        for i in range(1, full + 1):
            target = ex[i] if i % m else ex[i - m]
            if (ex[i - 1] * alpha - target) % q:
                raise AssertionError(f"chain {c}: successor rule fails at slot {i}")


def fixed_dimension(plan: LiftPlan) -> int:
    """Multiplicity of the eigenvalue 1 (exponent 0) of T, i.e. dim of the C_q-invariants."""
    return sum(ex.count(0) for ex in plan.exponents)


def orbit_balance_check(plan: LiftPlan, params: GroupParams) -> bool:
    """Eigenvalue multiplicities constant along alpha-orbits and m | (dim - mult of 1)."""
    if not params.faithful:
        raise PreconditionError("orbit balance needs ord_{p^i}(alpha) = m for every i")
    if plan.exponents is None:
        raise PreconditionError("plan has no eigenvalue assignment")
    mult = Counter(c for ex in plan.exponents for c in ex)
    for r in range(1, params.q):
        orb = alpha_orbit(r, params)
        if len({mult.get(x, 0) for x in orb}) != 1:
            return False
    total = sum(len(ex) for ex in plan.exponents)
    return (total - mult.get(0, 0)) % params.m == 0
