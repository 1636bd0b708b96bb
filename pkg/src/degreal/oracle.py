"""Exact realizability on small instances and the gap miner built on it."""

from __future__ import annotations

import itertools
import logging
import random
import sys
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from .core import CheckReport, Interval, MultipartiteGraph, PartiteSpec, verifies
from .errors import BudgetExhausted, InstanceTooLarge
from .multipartite import (
    cor23_check,
    cor24_check,
    np_necessary_check,
    np_sufficient_check,
    tri_necessary_check,
    tri_strong_necessary_check,
    tri_sufficient_check,
)
from .screen import iter_blocks, screen_block

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
MAX_ORACLE_VERTICES = 14
MAX_BRUTE_VERTICES = 8
MAX_DRAWS_PER_SAMPLE = 100


def _flatten(spec: PartiteSpec) -> list[tuple[int, int, int, int]]:
    return [(p, i, lo, hi)
            for p, part in enumerate(spec.parts)
            for i, (lo, hi) in enumerate(part.original())]


def oracle_is_realizable(spec: PartiteSpec, budget: int = DEFAULT_BUDGET,
                         ) -> tuple[bool, MultipartiteGraph | None]:
    """Decide realizability by backtracking over inter-part vertex pairs.

    Vertices are visited by descending lower bound; each pair is first tried
    as a non-edge, then as an edge.  A branch is cut as soon as some vertex
    would exceed its upper bound or can no longer reach its lower bound with
    the pairs it has left.  Raises :class:`BudgetExhausted` after ``budget``
    search nodes.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    flat = _flatten(spec)
    m = len(flat)
    if m > MAX_ORACLE_VERTICES:
        raise InstanceTooLarge(f"{m} vertices exceed the oracle limit of {MAX_ORACLE_VERTICES}")
    order = sorted(range(m), key=lambda v: (-flat[v][2], flat[v][0], flat[v][1]))
    part = [flat[v][0] for v in order]
    lo = [flat[v][2] for v in order]
    hi = [flat[v][3] for v in order]
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m) if part[a] != part[b]]
    rem = [0] * m
    for a, b in pairs:
        rem[a] += 1
        rem[b] += 1
    if any(lo[v] > rem[v] for v in range(m)):
        return False, None
    deg = [0] * m
    chosen = [False] * len(pairs)
    n_pairs = len(pairs)
    nodes = 0

    def dfs(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted(f"oracle exceeded {budget} nodes")
        if k == n_pairs:
            return True
        a, b = pairs[k]
        rem[a] -= 1
        rem[b] -= 1
        if deg[a] + rem[a] >= lo[a] and deg[b] + rem[b] >= lo[b]:
            if dfs(k + 1):
                return True
        if deg[a] < hi[a] and deg[b] < hi[b]:
            deg[a] += 1
            deg[b] += 1
            chosen[k] = True
            if dfs(k + 1):
                return True
            deg[a] -= 1
            deg[b] -= 1
            chosen[k] = False
        rem[a] += 1
        rem[b] += 1
        return False

    limit = sys.getrecursionlimit()
    if n_pairs + 100 > limit:
        sys.setrecursionlimit(n_pairs + 100)
    try:
        found = dfs(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return False, None
    edges = []
    for k, (a, b) in enumerate(pairs):
        if chosen[k]:
            va, vb = flat[order[a]], flat[order[b]]
            edges.append(((va[0], va[1]), (vb[0], vb[1])))
    g = MultipartiteGraph.from_edges(spec.sizes, edges)
    assert verifies(g, spec), "oracle produced a graph outside the bounds"
    return True, g


def brute_force_realizable(spec: PartiteSpec, chunk: int = 1 << 16,
                           ) -> tuple[bool, MultipartiteGraph | None]:
    """Sweep every edge subset as a bit mask (at most 8 vertices).

    Kept deliberately naive: it shares nothing with the backtracking
    oracle and serves as its cross-check.  Returns the lowest-mask witness.
    """
    flat = _flatten(spec)
    m = len(flat)
    if m > MAX_BRUTE_VERTICES:
        raise InstanceTooLarge(f"{m} vertices exceed the brute-force limit of {MAX_BRUTE_VERTICES}")
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m) if flat[a][0] != flat[b][0]]
    inc = np.zeros((len(pairs), m), dtype=np.int64)
    for k, (a, b) in enumerate(pairs):
        inc[k, a] = inc[k, b] = 1
    lo = np.array([f[2] for f in flat], dtype=np.int64)
    hi = np.array([f[3] for f in flat], dtype=np.int64)
    shifts = np.arange(len(pairs), dtype=np.int64)
    total = 1 << len(pairs)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        deg = bits @ inc
        ok = np.all((deg >= lo) & (deg <= hi), axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            mask = int(masks[hit[0]])
            edges = [((flat[a][0], flat[a][1]), (flat[b][0], flat[b][1]))
                     for k, (a, b) in enumerate(pairs) if mask >> k & 1]
            return True, MultipartiteGraph.from_edges(spec.sizes, edges)
    return False, None


# -- universes -------------------------------------------------------------

@dataclass(frozen=True)
class Enumeration:
    """Every spec with ``parts`` parts of size ``0..max_size`` whose
    intervals satisfy ``0 <= lo <= hi <= max_hi`` (``lo == hi`` if exact)."""

    parts: int = 3
    max_size: int = 2
    max_hi: int = 4
    exact: bool = False


@dataclass(frozen=True)
class Sampling:
    """``samples`` distinct seeded random specs."""

    parts: int = 3
    max_size: int = 3
    max_hi: int = 5
    seed: int = 0
    samples: int = 1000
    exact: bool = False


Universe = Enumeration | Sampling


def _part_choices(size: int, max_hi: int, exact: bool) -> list[tuple[Interval, ...]]:
    if exact:
        values = range(max_hi, -1, -1)
        return [tuple((v, v) for v in c) for c in itertools.combinations_with_replacement(values, size)]
    intervals = [(lo, hi) for lo in range(max_hi + 1) for hi in range(lo, max_hi + 1)]
    intervals.sort(key=lambda e: (-e[0], -e[1]))
    return list(itertools.combinations_with_replacement(intervals, size))


def universe_size(u: Universe) -> int:
    if isinstance(u, Sampling):
        return u.samples
    counts = [len(_part_choices(k, u.max_hi, u.exact)) for k in range(u.max_size + 1)]
    return sum(counts) ** u.parts


def iter_universe(u: Universe) -> Iterator[PartiteSpec]:
    if u.parts < 2:
        raise ValueError("universes need at least two parts")
    if isinstance(u, Enumeration):
        choices = [c for k in range(u.max_size + 1) for c in _part_choices(k, u.max_hi, u.exact)]
        for combo in itertools.product(choices, repeat=u.parts):
            yield PartiteSpec.from_raw(combo)
        return
    rng = random.Random(u.seed)
    seen = set()
    # small universes may hold fewer distinct specs than requested
    for _ in range(MAX_DRAWS_PER_SAMPLE * u.samples):
        if len(seen) == u.samples:
            return
        raw = []
        for _ in range(u.parts):
            part = []
            for _ in range(rng.randint(0, u.max_size)):
                hi = rng.randint(0, u.max_hi)
                lo = hi if u.exact else rng.randint(0, hi)
                part.append((lo, hi))
            raw.append(part)
        spec = PartiteSpec.from_raw(raw)
        if spec.key() not in seen:
            seen.add(spec.key())
            yield spec


# -- gap mining ------------------------------------------------------------

SUFFICIENT_CHECKS = ("tri-sufficient", "np-sufficient", "cor23")
NECESSARY_CHECKS = ("tri-necessary", "np-necessary", "cor24", "tri-strong")
EXACT_ONLY = ("cor23", "cor24", "tri-strong")
TRIPARTITE_ONLY = ("tri-sufficient", "tri-necessary") + EXACT_ONLY

CHECKS: dict[str, Callable[[PartiteSpec], CheckReport]] = {
    "tri-sufficient": tri_sufficient_check,
    "tri-necessary": tri_necessary_check,
    "np-sufficient": np_sufficient_check,
    "np-necessary": np_necessary_check,
    "cor23": lambda s: cor23_check(*s.degree_seqs()),
    "cor24": lambda s: cor24_check(*s.degree_seqs()),
    "tri-strong": lambda s: tri_strong_necessary_check(*s.degree_seqs()),
}


def default_checks(n_parts: int) -> tuple[str, ...]:
    if n_parts == 3:
        return ("tri-sufficient", "tri-necessary", "cor23", "cor24", "tri-strong")
    return ("np-sufficient", "np-necessary")


@dataclass(frozen=True)
class GapWitness:
    """A spec on which some check disagrees with the oracle (or, for
    ``strictness``, on which the cross-edge refinement beats the plain
    necessary condition for the same distinguished part).

    ``verdicts`` maps check names to pass/fail; for ``cor24`` and
    ``tri-strong`` the per-part entries ``"cor24@k"`` / ``"tri-strong@k"``
    are recorded as well.
    """

    spec: PartiteSpec
    oracle_realizable: bool
    verdicts: dict[str, bool]
    witness_graph: MultipartiteGraph | None
    kinds: tuple[str, ...]

    def __post_init__(self) -> None:
        if (self.witness_graph is not None) != self.oracle_realizable:
            raise ValueError("witness graph must be present exactly when realizable")
        if self.witness_graph is not None and not verifies(self.witness_graph, self.spec):
            raise ValueError("witness graph does not verify")


@dataclass
class GapSearchResult:
    witnesses: list[GapWitness] = field(default_factory=list)
    unknown: list[PartiteSpec] = field(default_factory=list)
    examined: int = 0

    def count(self, kind: str) -> int:
        return sum(kind in w.kinds for w in self.witnesses)


def evaluate_checks(spec: PartiteSpec, checks: Iterable[str]) -> dict[str, bool]:
    verdicts: dict[str, bool] = {}
    for name in checks:
        if name in EXACT_ONLY and not spec.is_exact:
            continue
        if name in TRIPARTITE_ONLY and len(spec.parts) != 3:
            continue
        report = CHECKS[name](spec)
        verdicts[name] = report.passed
        if name == "cor24":
            for k in range(1, 4):
                verdicts[f"cor24@{k}"] = report.family_passed(f"C({k})") if spec.parts[k - 1].entries else True
        elif name == "tri-strong":
            for k in range(1, 4):
                verdicts[f"tri-strong@{k}"] = all(
                    r.ok for r in report.families if r.family.endswith(f"({k})"))
    return verdicts


def classify(verdicts: dict[str, bool], realizable: bool) -> tuple[str, ...]:
    kinds = []
    if realizable and any(not verdicts[c] for c in SUFFICIENT_CHECKS if c in verdicts):
        kinds.append("sufficiency")
    if not realizable and any(verdicts[c] for c in NECESSARY_CHECKS if c in verdicts):
        kinds.append("necessity")
    if not realizable and any(
            verdicts.get(f"cor24@{k}") and verdicts.get(f"tri-strong@{k}") is False for k in range(1, 4)):
        kinds.append("strictness")
    return tuple(kinds)


def _scalar_witnesses(specs: Iterable[PartiteSpec], checks: tuple[str, ...] | None, budget: int,
                      result: GapSearchResult | None) -> Iterator[GapWitness]:
    for spec in specs:
        if result is not None:
            result.examined += 1
        names = checks if checks is not None else default_checks(len(spec.parts))
        verdicts = evaluate_checks(spec, names)
        try:
            realizable, graph = oracle_is_realizable(spec, budget)
        except BudgetExhausted:
            log.info("oracle budget exhausted on %s", spec)
            if result is not None:
                result.unknown.append(spec)
            continue
        kinds = classify(verdicts, realizable)
        if kinds:
            yield GapWitness(spec, realizable, verdicts, graph, kinds)


def _screened_witnesses(u: Enumeration, checks: tuple[str, ...] | None, budget: int,
                        result: GapSearchResult | None) -> Iterator[GapWitness]:
    names = checks if checks is not None else default_checks(u.parts)
    suff = [c for c in names if c in ("tri-sufficient", "np-sufficient")]
    nec = [c for c in names if c in ("tri-necessary", "np-necessary")]
    if u.parts != 3:
        suff = [c for c in suff if c not in TRIPARTITE_ONLY]
        nec = [c for c in nec if c not in TRIPARTITE_ONLY]
    scalar_names = tuple(c for c in names if c not in suff + nec)
    for sizes, choices in iter_blocks(u.parts, u.max_size, lambda k: _part_choices(k, u.max_hi, u.exact)):
        block = screen_block(sizes, choices, "sufficient", "necessary")
        if block is None:
            specs = (PartiteSpec.from_raw(combo) for combo in itertools.product(*choices))
            yield from _scalar_witnesses(specs, names, budget, result)
            continue
        if result is not None:
            result.examined += len(block)
        real = block.realizable
        s_ok = block.verdicts["sufficient"]
        n_ok = block.verdicts["necessary"]
        cand = np.zeros(len(block), dtype=bool)
        if suff:
            cand |= real & ~s_ok
        if nec:
            cand |= ~real & n_ok
        if scalar_names:
            cand |= np.all(block.lo == block.hi, axis=1)
        for row in np.flatnonzero(cand):
            spec = block.spec(int(row))
            verdicts = {c: bool(s_ok[row]) for c in suff}
            verdicts.update({c: bool(n_ok[row]) for c in nec})
            verdicts.update(evaluate_checks(spec, scalar_names))
            realizable = bool(real[row])
            kinds = classify(verdicts, realizable)
            if kinds:
                graph = block.table.witness(block.lo[row], block.hi[row]) if realizable else None
                yield GapWitness(spec, realizable, verdicts, graph, kinds)


def iter_gap_witnesses(universe: Universe | Iterable[PartiteSpec], checks: Iterable[str] | None = None,
                       budget: int = DEFAULT_BUDGET, result: GapSearchResult | None = None,
                       *, fast: bool = True) -> Iterator[GapWitness]:
    """Stream witnesses in universe order.

    Enumerated universes go through the vectorized screen unless
    ``fast=False``; sampled universes and plain spec iterables always use the
    backtracking oracle.  Specs whose oracle run exhausts the budget go to
    ``result.unknown`` and never become witnesses.
    """
    names = tuple(checks) if checks is not None else None
    if fast and isinstance(universe, Enumeration):
        yield from _screened_witnesses(universe, names, budget, result)
        return
    specs = iter_universe(universe) if isinstance(universe, (Enumeration, Sampling)) else universe
    yield from _scalar_witnesses(specs, names, budget, result)


def run_gap_search(universe: Universe | Iterable[PartiteSpec], checks: Iterable[str] | None = None,
                   budget: int = DEFAULT_BUDGET, *, fast: bool = True) -> GapSearchResult:
    result = GapSearchResult()
    result.witnesses = list(iter_gap_witnesses(universe, checks, budget, result, fast=fast))
    result.witnesses.sort(key=lambda w: w.spec.key())
    result.unknown.sort(key=PartiteSpec.key)
    return result


def gap_search(universe: Universe | Iterable[PartiteSpec], checks: Iterable[str] | None = None,
               budget: int = DEFAULT_BUDGET, *, fast: bool = True) -> list[GapWitness]:
    """Witnesses sorted by total vertex count, then canonical entries."""
    return run_gap_search(universe, checks, budget, fast=fast).witnesses
