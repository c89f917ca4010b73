"""Liftability of modular representations of C_q x| C_m and explicit lifts."""

from .builder import LiftError, LiftPair, build_lift, reduce_lift, round_trip, verify_lift
from .decision import LiftPlan, Refusal, assign_eigenvalues, brute_force_liftable, decide_lift
from .field import FieldContext, make_field
from .group import GroupError, GroupParams, new_group
from .modular import KModule, SummandSpec, build_decomposition, build_summand, decompose
from .ring import LocalElement, LocalMatrix, RingContext, make_ring

__version__ = "0.1.0"

__all__ = [
    "FieldContext",
    "GroupError",
    "GroupParams",
    "KModule",
    "LiftError",
    "LiftPair",
    "LiftPlan",
    "LocalElement",
    "LocalMatrix",
    "Refusal",
    "RingContext",
    "SummandSpec",
    "assign_eigenvalues",
    "brute_force_liftable",
    "build_decomposition",
    "build_lift",
    "build_summand",
    "decide_lift",
    "decompose",
    "make_field",
    "make_ring",
    "new_group",
    "reduce_lift",
    "round_trip",
    "verify_lift",
]
