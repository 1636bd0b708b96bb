"""Degree-sequence and degree-interval realization for bipartite and
multipartite graphs."""

from .classic import build_bipartite_exact, eg_check, gr_check
from .core import (
    CheckReport,
    DegreeSeq,
    FamilyRow,
    IntervalSeq,
    MultipartiteGraph,
    PartiteSpec,
    bound_violations,
    canonicalize,
    degree_profile,
    verifies,
)
from .errors import (
    BudgetExhausted,
    FuelExhausted,
    InfeasibleInput,
    InstanceTooLarge,
    PreconditionViolated,
    RealizationError,
    StalemateContradiction,
)
from .interval_bipartite import realize_bipartite_interval, repair_step
from .multipartite import (
    cor23_check,
    cor24_check,
    np_necessary_check,
    np_sufficient_check,
    realize_npartite,
    realize_tripartite,
    tri_necessary_check,
    tri_strong_necessary_check,
    tri_sufficient_check,
)
from .oracle import GapWitness, brute_force_realizable, gap_search, oracle_is_realizable

__all__ = [name for name in dir() if not name.startswith("_")]
