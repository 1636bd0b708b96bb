"""Edge-swap construction of a bipartite graph with interval degree bounds.

Given left bounds ``[lo_L, hi_L]`` and right bounds ``[lo_R, hi_R]`` the
engine starts from the empty graph and runs two repair phases:

phase 1
    Walk the left side in order of nonincreasing ``lo``.  The *critical*
    vertex ``x_r`` is the first one below its target ``lo_L``; every earlier
    left vertex sits exactly on its target and no right vertex exceeds
    ``hi_R``.  One step raises ``d(x_r)`` by one using, in this order:

    * ``add``          -- join ``x_r`` to a right vertex below its cap;
    * ``replace``      -- move an edge ``x_k y_j`` (``k > r``) to ``x_r y_j``;
    * ``swap``         -- ``y_j`` below its cap is already a neighbour of
      ``x_r`` but not of some earlier ``x_e``: trade ``x_e v`` for
      ``x_e y_j`` and ``x_r v``;
    * ``double-swap``  -- as ``replace`` but routed through an earlier
      ``x_e`` the same way.

    If none applies, the counting identity
    ``sum_{i<=r} d(x_i) = sum_j min(d(y_j), r) = sum_j min(hi_R_j, r)``
    must hold, which together with the prefix condition forces the critical
    vertex onto its target.

phase 2
    Walk the right side the same way with target ``lo_R`` ("at least"),
    keeping every left degree inside ``[lo_L, hi_L]``.  Moves: ``add`` from a
    left vertex below ``hi_L``, ``transfer`` an edge away from an earlier
    right vertex holding surplus, then the mirrored ``replace``, ``swap`` and
    ``double-swap``.  No move ever lowers a left degree.

The bounds passed in are used as given; callers that need rounded bounds
(``ceil(lo/d)``, ``floor(hi/d)``) divide before calling.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .core import CheckReport, FamilyRow, Interval, IntervalSeq, MultipartiteGraph
from .errors import (
    FuelExhausted,
    InvalidInterval,
    NegativeValue,
    PreconditionViolated,
    StalemateContradiction,
)

log = logging.getLogger(__name__)

Bounds = Sequence[Interval] | IntervalSeq


def _pairs(b: Bounds) -> list[Interval]:
    entries = b.entries if isinstance(b, IntervalSeq) else b
    out = []
    for lo, hi in entries:
        if lo < 0 or hi < 0:
            raise NegativeValue(f"negative bound in ({lo}, {hi})")
        if lo > hi:
            raise InvalidInterval(f"empty interval ({lo}, {hi})")
        out.append((int(lo), int(hi)))
    return out


def fuel_limit(left: Bounds, right: Bounds) -> int:
    lp, rp = _pairs(left), _pairs(right)
    max_hi = max((hi for _, hi in lp + rp), default=0)
    return 4 * (len(lp) + len(rp)) * (1 + max_hi)


def bipartite_precondition(left: Bounds, right: Bounds) -> CheckReport:
    """Prefix conditions under which the engine must succeed.

    ``L`` rows: the ``r`` largest left lower bounds against
    ``sum(min(hi_R, r))``; ``R`` rows: the mirror image.
    """
    lp, rp = _pairs(left), _pairs(right)
    rows = []
    for fam, side, other in (("L", lp, rp), ("R", rp, lp)):
        lows = sorted((lo for lo, _ in side), reverse=True)
        caps = [hi for _, hi in other]
        head = 0
        for r, lo in enumerate(lows, start=1):
            head += lo
            rhs = sum(min(c, r) for c in caps)
            rows.append(FamilyRow(fam, r, head, rhs, head <= rhs))
    return CheckReport("bipartite-interval", tuple(rows))


@dataclass
class RepairState:
    """Working graph of the engine plus its progress measure.

    ``deficiency`` is owed by the critical vertex only: every vertex before
    it already meets its target.  ``last_move`` names the move applied by the
    step that produced this state.
    """

    left_adj: list[set[int]]
    right_adj: list[set[int]]
    critical: int = 0
    deficiency: int = 0
    fuel: int = 0
    last_move: str | None = None

    @classmethod
    def empty(cls, n_left: int, n_right: int, fuel: int) -> RepairState:
        return cls([set() for _ in range(n_left)], [set() for _ in range(n_right)], fuel=fuel)

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges: Sequence[tuple[int, int]], *,
                   fuel: int, critical: int = 0) -> RepairState:
        st = cls.empty(n_left, n_right, fuel)
        for i, j in edges:
            st._add(i, j)
        st.critical = critical
        return st

    @property
    def graph(self) -> MultipartiteGraph:
        return MultipartiteGraph.from_edges(
            (len(self.left_adj), len(self.right_adj)),
            [((0, i), (1, j)) for i, nb in enumerate(self.left_adj) for j in nb],
        )

    def left_degrees(self) -> list[int]:
        return [len(nb) for nb in self.left_adj]

    def right_degrees(self) -> list[int]:
        return [len(nb) for nb in self.right_adj]

    def copy(self) -> RepairState:
        return RepairState([set(s) for s in self.left_adj], [set(s) for s in self.right_adj],
                           self.critical, self.deficiency, self.fuel, self.last_move)

    def _add(self, i: int, j: int) -> None:
        if j in self.left_adj[i]:
            raise AssertionError(f"edge x{i}y{j} already present")
        self.left_adj[i].add(j)
        self.right_adj[j].add(i)

    def _remove(self, i: int, j: int) -> None:
        self.left_adj[i].remove(j)
        self.right_adj[j].remove(i)


def _check_sorted(b: list[Interval], name: str) -> None:
    if any(a[0] < c[0] for a, c in zip(b, b[1:])):
        raise ValueError(f"{name} bounds must have nonincreasing lower ends")


def _deficiency(st: RepairState, lp: list[Interval], rp: list[Interval], phase: int) -> int:
    if phase == 1:
        if st.critical >= len(lp):
            return 0
        d = lp[st.critical][0] - len(st.left_adj[st.critical])
        if d < 0:
            raise AssertionError(f"left vertex {st.critical} exceeds its phase-1 target")
        return d
    if st.critical >= len(rp):
        return 0
    return max(0, rp[st.critical][0] - len(st.right_adj[st.critical]))


def _first_missing(big: set[int], small: set[int]) -> int:
    diff = big - small
    if not diff:
        raise AssertionError("no donor vertex outside the critical neighbourhood")
    return min(diff)


def _phase1_move(st: RepairState, lp: list[Interval], rp: list[Interval]) -> str | None:
    r = st.critical
    L, R = st.left_adj, st.right_adj
    nr = len(R)
    caps = [hi for _, hi in rp]
    for j in range(nr):
        if len(R[j]) < caps[j] and j not in L[r]:
            st._add(r, j)
            return "add"
    for j in range(nr):
        if j not in L[r]:
            later = [k for k in R[j] if k > r]
            if later:
                st._remove(min(later), j)
                st._add(r, j)
                return "replace"
    for j in range(nr):
        if len(R[j]) < caps[j]:
            for e in range(r):
                if j not in L[e]:
                    v = _first_missing(L[e], L[r])
                    st._remove(e, v)
                    st._add(e, j)
                    st._add(r, v)
                    return "swap"
    for j in range(nr):
        later = [k for k in R[j] if k > r]
        if later:
            for e in range(r):
                if j not in L[e]:
                    v = _first_missing(L[e], L[r])
                    st._remove(min(later), j)
                    st._remove(e, v)
                    st._add(e, j)
                    st._add(r, v)
                    return "double-swap"
    return None


def _phase2_move(st: RepairState, lp: list[Interval], rp: list[Interval]) -> str | None:
    s = st.critical
    L, R = st.left_adj, st.right_adj
    nl = len(L)
    caps = [hi for _, hi in lp]
    for i in range(nl):
        if len(L[i]) < caps[i] and i not in R[s]:
            st._add(i, s)
            return "add"
    for i in range(s):
        if len(R[i]) > rp[i][0]:
            v = _first_missing(R[i], R[s])
            st._remove(v, i)
            st._add(v, s)
            return "transfer"
    for i in range(nl):
        if i not in R[s]:
            later = [k for k in L[i] if k > s]
            if later:
                st._remove(i, min(later))
                st._add(i, s)
                return "replace"
    for i in range(nl):
        if len(L[i]) < caps[i]:
            for e in range(s):
                if i not in R[e]:
                    v = _first_missing(R[e], R[s])
                    st._remove(v, e)
                    st._add(i, e)
                    st._add(v, s)
                    return "swap"
    for i in range(nl):
        later = [k for k in L[i] if k > s]
        if later:
            for e in range(s):
                if i not in R[e]:
                    v = _first_missing(R[e], R[s])
                    st._remove(i, min(later))
                    st._remove(v, e)
                    st._add(i, e)
                    st._add(v, s)
                    return "double-swap"
    return None


def _stalemate(st: RepairState, lp: list[Interval], rp: list[Interval], phase: int) -> None:
    """No move applies while the critical vertex is short: check the counting
    identity, then report the prefix condition that must have failed."""
    c = st.critical
    side, other = (st.left_adj, st.right_adj) if phase == 1 else (st.right_adj, st.left_adj)
    other_caps = [hi for _, hi in (rp if phase == 1 else lp)]
    width = c + 1
    head = sum(len(side[i]) for i in range(width))
    by_degree = sum(min(len(nb), width) for nb in other)
    by_cap = sum(min(cap, width) for cap in other_caps)
    if not head == by_degree == by_cap:
        raise StalemateContradiction(
            f"phase {phase}, critical {c}: no move applies but the counting identity fails "
            f"({head}, {by_degree}, {by_cap})")
    fam = "L" if phase == 1 else "R"
    raise PreconditionViolated(
        f"phase {phase} stalled at critical {c}: prefix condition {fam} fails at {width}",
        family=fam, prefix=width)


def _step(st: RepairState, lp: list[Interval], rp: list[Interval], phase: int) -> RepairState:
    side_len = len(lp) if phase == 1 else len(rp)
    if st.critical >= side_len:
        raise ValueError("phase already complete")
    if st.fuel <= 0:
        raise FuelExhausted(f"phase {phase}: repair fuel exhausted at critical {st.critical}")
    st.fuel -= 1
    if _deficiency(st, lp, rp, phase) == 0:
        st.critical += 1
        st.last_move = "advance"
    else:
        move = _phase1_move(st, lp, rp) if phase == 1 else _phase2_move(st, lp, rp)
        if move is None:
            _stalemate(st, lp, rp, phase)
        st.last_move = move
    st.deficiency = _deficiency(st, lp, rp, phase)
    return st


def repair_step(state: RepairState, left: Bounds, right: Bounds, phase: int) -> RepairState:
    """Apply one move (or advance the critical index) to a copy of ``state``.

    Both bound lists must already be ordered by nonincreasing lower end.
    """
    if phase not in (1, 2):
        raise ValueError(f"phase must be 1 or 2, got {phase}")
    lp, rp = _pairs(left), _pairs(right)
    _check_sorted(lp, "left")
    _check_sorted(rp, "right")
    st = state.copy()
    st.deficiency = _deficiency(st, lp, rp, phase)
    return _step(st, lp, rp, phase)


def _check_invariants(st: RepairState, lp: list[Interval], rp: list[Interval], phase: int) -> None:
    ld, rd = st.left_degrees(), st.right_degrees()
    for j, (d, (_, hi)) in enumerate(zip(rd, rp)):
        if d > hi:
            raise AssertionError(f"right vertex {j} above its cap")
    if phase == 1:
        for i in range(min(st.critical, len(lp))):
            if ld[i] != lp[i][0]:
                raise AssertionError(f"left vertex {i} left its phase-1 target")
    else:
        for i, (d, (lo, hi)) in enumerate(zip(ld, lp)):
            if not lo <= d <= hi:
                raise AssertionError(f"left vertex {i} left [{lo}, {hi}] in phase 2")
        for j in range(min(st.critical, len(rp))):
            if rd[j] < rp[j][0]:
                raise AssertionError(f"right vertex {j} dropped below its target")


def run_engine(left: Bounds, right: Bounds, *, fuel: int | None = None,
               on_step: Callable[[int, RepairState], None] | None = None) -> RepairState:
    """Run both phases on bounds already sorted by nonincreasing ``lo``."""
    lp, rp = _pairs(left), _pairs(right)
    _check_sorted(lp, "left")
    _check_sorted(rp, "right")
    st = RepairState.empty(len(lp), len(rp), fuel_limit(lp, rp) if fuel is None else fuel)
    for phase, side_len in ((1, len(lp)), (2, len(rp))):
        st.critical = 0
        st.deficiency = _deficiency(st, lp, rp, phase)
        while st.critical < side_len:
            before = (st.critical, -st.deficiency)
            _step(st, lp, rp, phase)
            if not (st.critical, -st.deficiency) > before:
                raise AssertionError(f"progress measure did not increase: {before}")
            _check_invariants(st, lp, rp, phase)
            if on_step is not None:
                on_step(phase, st)
    return st


def realize_bipartite_interval(left: Bounds, right: Bounds, *, fuel: int | None = None,
                               on_step: Callable[[int, RepairState], None] | None = None,
                               ) -> MultipartiteGraph:
    """Bipartite graph with every degree inside its interval.

    Vertices keep the caller's indexing: part 0 is ``left``, part 1 is
    ``right``.  Left degrees land in ``[lo_L, hi_L]``; right degrees land in
    ``[lo_R, hi_R]`` (typically on ``lo_R`` itself, but a right vertex may
    end higher when the left lower bounds force it).
    """
    lp, rp = _pairs(left), _pairs(right)
    pre = bipartite_precondition(lp, rp)
    if not pre.passed:
        f = pre.failures()[0]
        raise PreconditionViolated(
            f"prefix condition {f.family} fails at {f.prefix}: {f.lhs} > {f.rhs}",
            family=f.family, prefix=f.prefix)
    lorder = sorted(range(len(lp)), key=lambda i: (-lp[i][0], i))
    rorder = sorted(range(len(rp)), key=lambda j: (-rp[j][0], j))
    st = run_engine([lp[i] for i in lorder], [rp[j] for j in rorder], fuel=fuel, on_step=on_step)
    edges = [((0, lorder[i]), (1, rorder[j])) for i, nb in enumerate(st.left_adj) for j in nb]
    g = MultipartiteGraph.from_edges((len(lp), len(rp)), edges)
    ld, rd = g.degrees()
    for side, degs, bounds in (("left", ld, lp), ("right", rd, rp)):
        for i, (d, (lo, hi)) in enumerate(zip(degs, bounds)):
            if not lo <= d <= hi:
                raise AssertionError(f"{side} vertex {i} has degree {d} outside [{lo}, {hi}]")
    log.debug("bipartite realization with %d edges", len(g))
    return g
