"""metalift command line: info | decide | lift | reduce | decompose | selftest.

Every command writes one JSON document (sorted keys) to stdout or --out.
Exit codes: 0 ok, 1 not liftable, 2 bad input, 3 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .builder import LiftError, build_lift, reduce_lift, reduce_pair
from .decision import LiftPlan, PreconditionError, Refusal, assign_eigenvalues, decide_lift, orbit_balance_check
from .field import a0_for, field_for
from .group import GroupError, GroupParams, new_group
from .modular import (
    KModule,
    SummandSpec,
    as_multiset,
    check_spec,
    decompose,
    decomposition_to_json,
    verify_kg_relations,
)
from .ring import LocalMatrix, make_ring
from .selftest import run_selftest

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# input handling
# --------------------------------------------------------------------------


def _load(args) -> dict:
    if not args.input:
        return {}
    try:
        with open(args.input) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.input} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("input document must be a JSON object")
    return obj


def _int(v, name: str) -> int:
    try:
        if isinstance(v, bool):
            raise ValueError
        return int(v)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be an integer, got {v!r}") from None


def resolve_group(args, doc: dict) -> GroupParams:
    """Group from --p/--h/--m/--alpha, falling back to doc["group"] or doc["header"]."""
    base = doc.get("group") or doc.get("header") or {}
    vals = {}
    for key in ("p", "h", "m", "alpha"):
        v = getattr(args, key, None)
        if v is None:
            v = base.get(key)
        if v is None:
            raise InputError(f"missing group parameter {key} (use --{key} or a 'group' object)")
        vals[key] = _int(v, key)
    return new_group(vals["p"], vals["h"], vals["m"], vals["alpha"])


def parse_summand(text: str) -> SummandSpec:
    try:
        eps, kappa = text.split(":")
        return SummandSpec(int(eps), int(kappa))
    except ValueError:
        raise InputError(f"summand {text!r} is not of the form EPS:KAPPA") from None


def resolve_decomposition(args, doc: dict, params: GroupParams) -> list[SummandSpec]:
    if args.summands:
        specs = [parse_summand(s) for s in args.summands]
    elif "decomposition" in doc:
        raw = doc["decomposition"]
        if not isinstance(raw, list):
            raise InputError("'decomposition' must be a list")
        try:
            specs = [SummandSpec.from_json(s) for s in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad summand in 'decomposition': {exc}") from None
    else:
        raise InputError("no decomposition given (positional EPS:KAPPA or 'decomposition' in --in)")
    if not specs:
        raise InputError("decomposition is empty")
    return [check_spec(s, params) for s in specs]


def _precision(args, doc: dict):
    prec = doc.get("precision") or {}
    N = args.N if args.N is not None else prec.get("N")
    e = args.e if args.e is not None else prec.get("e", 2)
    N = None if N is None else _int(N, "N")
    e = _int(e, "e")
    if e < 1 or (N is not None and N < 1):
        raise InputError("N and e must be positive")
    return N, e


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_info(params: GroupParams) -> tuple[dict, int]:
    F = field_for(params)
    out = {
        "group": params.to_json(),
        "q": params.q,
        "ord_table": {str(k): v for k, v in sorted(params.ord_table.items())},
        "m_prime": params.m_prime,
        "faithful": params.faithful,
        "residue_field": {"p": F.p, "f": F.f, "modulus": list(F.modulus), "zeta_m": F.to_coeffs(F.zeta)},
        "a0": a0_for(params),
    }
    return out, EXIT_OK


def cmd_decide(params: GroupParams, dec, uniform_a: bool = False) -> tuple[dict, int]:
    verdict = decide_lift(dec, params, uniform_a=uniform_a)
    out = {"group": params.to_json(), "decomposition": decomposition_to_json(dec)}
    if isinstance(verdict, Refusal):
        out.update(liftable=False, refusal=verdict.to_json())
        return out, EXIT_NEGATIVE
    plan = assign_eigenvalues(verdict, params)
    out.update(liftable=True, plan=plan.to_json(), orbit_balance=orbit_balance_check(plan, params))
    return out, EXIT_OK


def cmd_lift(params: GroupParams, dec, N=None, e: int = 2, uniform_a: bool = False) -> tuple[dict, int]:
    verdict = decide_lift(dec, params, uniform_a=uniform_a)
    if isinstance(verdict, Refusal):
        return {"liftable": False, "refusal": verdict.to_json(), "decomposition": decomposition_to_json(dec)}, EXIT_NEGATIVE
    plan = assign_eigenvalues(verdict, params)
    try:
        pair, report = build_lift(plan, params, N, e)
        reduced = reduce_lift(pair, params)
    except LiftError as exc:
        return {"liftable": True, "error": {"type": "LiftError", "message": str(exc)}}, EXIT_VERIFY
    out = pair.to_json()
    out.update(liftable=True, report=report, reduced=decomposition_to_json(reduced))
    return out, EXIT_OK if report["ok"] else EXIT_VERIFY


def cmd_reduce(params: GroupParams, doc: dict) -> tuple[dict, int]:
    header = doc.get("header") or {}
    try:
        ctx = make_ring(params, _int(header["N"], "N"), _int(header.get("e", 2), "e"))
        T = LocalMatrix.from_json(ctx, doc["T"])
        G = LocalMatrix.from_json(ctx, doc["Gamma"])
    except KeyError as exc:
        raise InputError(f"lift document lacks {exc}") from None
    if T.dim != G.dim:
        raise InputError("T and Gamma have different dimensions")
    module = reduce_pair(T, G)
    rel = verify_kg_relations(module, params)
    out = {"group": params.to_json(), "relations": rel}
    if not rel["ok"]:
        return out, EXIT_VERIFY
    found = decompose(module, params)
    out["decomposition"] = decomposition_to_json(found)
    if "plan" in doc:
        predicted = LiftPlan.from_json(doc["plan"]).predicted_decomposition(params, a0_for(params))
        out["matches_plan"] = as_multiset(found, params.m) == as_multiset(predicted, params.m)
        if not out["matches_plan"]:
            return out, EXIT_VERIFY
    return out, EXIT_OK


def cmd_decompose(params: GroupParams, doc: dict) -> tuple[dict, int]:
    F = field_for(params)
    payload = doc.get("module", doc)
    try:
        module = KModule.from_json(F, payload)
    except KeyError as exc:
        raise InputError(f"module document lacks {exc}") from None
    rel = verify_kg_relations(module, params)
    out = {"group": params.to_json(), "relations": rel}
    if not rel["ok"]:
        raise InputError("tau and sigma do not satisfy the group relations")
    out["decomposition"] = decomposition_to_json(decompose(module, params))
    return out, EXIT_OK


def cmd_selftest(seed: int, trials: int) -> tuple[dict, int]:
    out = run_selftest(seed, trials)
    return out, EXIT_OK if out["ok"] else EXIT_VERIFY


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metalift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, group=True):
        if group:
            for key in ("p", "h", "m", "alpha"):
                sp.add_argument(f"--{key}", type=int)
        sp.add_argument("--in", dest="input", help="input JSON document")
        sp.add_argument("--out", help="write the JSON result here instead of stdout")
        return sp

    common(sub.add_parser("info", help="group arithmetic, residue field and a0"))
    for name, text in (("decide", "decide liftability"), ("lift", "build and verify the lift")):
        sp = common(sub.add_parser(name, help=text))
        sp.add_argument("summands", nargs="*", metavar="EPS:KAPPA")
        sp.add_argument("--strict-uniform-a", action="store_true", help="one a-flag shared by all chains")
        if name == "lift":
            sp.add_argument("--N", type=int)
            sp.add_argument("--e", type=int)
    common(sub.add_parser("reduce", help="reduce a lift document modulo the maximal ideal"))
    common(sub.add_parser("decompose", help="decompose a module given by tau and sigma"))
    sp = common(sub.add_parser("selftest", help="seeded oracle and round-trip checks"), group=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    return parser


def run(argv=None) -> tuple[dict, int, str | None]:
    args = build_parser().parse_args(argv)
    doc = _load(args)
    if args.command == "selftest":
        if args.trials < 1:
            raise InputError("--trials must be positive")
        return (*cmd_selftest(args.seed, args.trials), args.out)
    params = resolve_group(args, doc)
    if args.command == "info":
        result = cmd_info(params)
    elif args.command == "decide":
        result = cmd_decide(params, resolve_decomposition(args, doc, params), args.strict_uniform_a)
    elif args.command == "lift":
        N, e = _precision(args, doc)
        result = cmd_lift(params, resolve_decomposition(args, doc, params), N, e, args.strict_uniform_a)
    elif args.command == "reduce":
        result = cmd_reduce(params, doc)
    else:
        result = cmd_decompose(params, doc)
    return (*result, args.out)


def _emit(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        out, code, path = run(argv)
    except (InputError, GroupError, PreconditionError, ValueError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, None)
        return EXIT_INPUT
    _emit(out, path)
    return code


if __name__ == "__main__":
    sys.exit(main())
