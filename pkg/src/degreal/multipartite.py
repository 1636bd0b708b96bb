"""Tripartite and n-partite realizability conditions and constructions.

Family labels number parts from 1 in spec order:

``S(p,q)``
    rounded lower bounds of part ``p`` against rounded caps of part ``q``
    (``ceil(lo/(n-1))`` vs ``floor(hi/(n-1))``), the sufficient condition.
``N(p)``
    lower bounds of part ``p`` against the plain caps of all other parts.
``C(p)``
    ``N(p)`` for exact sequences.
``T(p)``, ``mu(p)``, ``mu-parity(p)``
    the cross-edge-count refinement with part ``p`` distinguished.
"""

from __future__ import annotations

from collections.abc import Sequence

from .core import (
    CheckReport,
    DegreeSeq,
    FamilyRow,
    IntervalSeq,
    MultipartiteGraph,
    PartiteSpec,
    halved_hi,
    halved_lo,
)
from .errors import PreconditionViolated
from .interval_bipartite import realize_bipartite_interval

# (part, other part) for the six inequalities of the tripartite sufficient condition
TRI_SUFFICIENT_PAIRS = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def _sufficient_rows(p: int, q: int, lower: IntervalSeq, upper: IntervalSeq, d: int) -> list[FamilyRow]:
    caps = [halved_hi(e, d) for e in upper.entries]
    rows = []
    head = 0
    for r, e in enumerate(lower.entries, start=1):
        head += halved_lo(e, d)
        rhs = sum(min(c, r) for c in caps)
        rows.append(FamilyRow(f"S({p + 1},{q + 1})", r, head, rhs, head <= rhs))
    return rows


def _necessary_rows(label: str, lower: IntervalSeq, others: Sequence[IntervalSeq]) -> list[FamilyRow]:
    rows = []
    head = 0
    for w, lo in enumerate(lower.lows, start=1):
        head += lo
        rhs = sum(min(hi, w) for o in others for hi in o.highs)
        rows.append(FamilyRow(label, w, head, rhs, head <= rhs))
    return rows


def _require_parts(spec: PartiteSpec, n: int) -> None:
    if len(spec.parts) != n:
        raise ValueError(f"expected {n} parts, got {len(spec.parts)}")


def tri_sufficient_check(spec: PartiteSpec) -> CheckReport:
    """Six prefix inequalities on halved bounds; passing them (with nonempty
    halved intervals) licenses :func:`realize_tripartite`."""
    _require_parts(spec, 3)
    rows = []
    for p, q in TRI_SUFFICIENT_PAIRS:
        rows += _sufficient_rows(p, q, spec.parts[p], spec.parts[q], 2)
    return CheckReport("tri-sufficient", tuple(rows))


def tri_necessary_check(spec: PartiteSpec) -> CheckReport:
    _require_parts(spec, 3)
    x, y, z = spec.parts
    rows = (_necessary_rows("N(1)", x, (y, z))
            + _necessary_rows("N(2)", y, (x, z))
            + _necessary_rows("N(3)", z, (x, y)))
    return CheckReport("tri-necessary", tuple(rows))


def _strong_rows(k: int, own: DegreeSeq, b: DegreeSeq, c: DegreeSeq) -> tuple[list[FamilyRow], int | None]:
    sa, sb, sc = sum(own.values), sum(b.values), sum(c.values)
    twice_mu = sb + sc - sa
    rows = [
        FamilyRow(f"mu({k})", 0, sa, sb + sc, twice_mu >= 0),
        FamilyRow(f"mu-parity({k})", 0, twice_mu % 2, 0, twice_mu % 2 == 0),
    ]
    if twice_mu < 0 or twice_mu % 2:
        return rows, None
    mu = twice_mu // 2
    head = 0
    for delta, a in enumerate(own.values, start=1):
        head += a
        rhs = min(sb - mu, len(b) * delta) + min(sc - mu, len(c) * delta)
        rows.append(FamilyRow(f"T({k})", delta, head, rhs, head <= rhs))
    return rows, mu


def tri_strong_necessary_check(s1: DegreeSeq, s2: DegreeSeq, s3: DegreeSeq) -> CheckReport:
    """Necessary condition using the forced number of edges between the two
    non-distinguished parts, ``mu = (sum(b) + sum(c) - sum(a)) / 2``.

    Every part takes the distinguished role in turn; ``mu`` on the report is
    the value with part 1 distinguished (``None`` if it is not a
    nonnegative integer).
    """
    seqs = (s1, s2, s3)
    rows: list[FamilyRow] = []
    mu_first = None
    for k in range(3):
        others = [seqs[i] for i in range(3) if i != k]
        r, mu = _strong_rows(k + 1, seqs[k], *others)
        rows += r
        if k == 0:
            mu_first = mu
    return CheckReport("tri-strong", tuple(rows), mu=mu_first)


def _exact_spec(s1: DegreeSeq, s2: DegreeSeq, s3: DegreeSeq) -> PartiteSpec:
    return PartiteSpec(tuple(s.to_intervals() for s in (s1, s2, s3)))


def cor23_check(s1: DegreeSeq, s2: DegreeSeq, s3: DegreeSeq, *, strict_paper: bool = False) -> CheckReport:
    """Sufficient condition for exact sequences.

    By default all six families of :func:`tri_sufficient_check` are
    evaluated.  ``strict_paper=True`` keeps only ``S(1,2)`` and ``S(1,3)``;
    that weaker form admits unrealizable triples such as ``(3), (2,2), (2,2)``.
    """
    spec = _exact_spec(s1, s2, s3)
    pairs = ((0, 1), (0, 2)) if strict_paper else TRI_SUFFICIENT_PAIRS
    rows = []
    for p, q in pairs:
        rows += _sufficient_rows(p, q, spec.parts[p], spec.parts[q], 2)
    return CheckReport("cor23-strict" if strict_paper else "cor23", tuple(rows))


def cor24_check(s1: DegreeSeq, s2: DegreeSeq, s3: DegreeSeq) -> CheckReport:
    spec = _exact_spec(s1, s2, s3)
    rows = []
    for k in range(3):
        others = [spec.parts[i] for i in range(3) if i != k]
        rows += _necessary_rows(f"C({k + 1})", spec.parts[k], others)
    return CheckReport("cor24", tuple(rows))


def np_sufficient_check(spec: PartiteSpec) -> CheckReport:
    """All ``n(n-1)`` directed families with divisor ``n - 1``."""
    d = spec.divisor
    rows = []
    for p, lower in enumerate(spec.parts):
        for q, upper in enumerate(spec.parts):
            if p != q:
                rows += _sufficient_rows(p, q, lower, upper, d)
    return CheckReport("np-sufficient", tuple(rows))


def np_necessary_check(spec: PartiteSpec) -> CheckReport:
    rows = []
    for p, part in enumerate(spec.parts):
        others = [o for q, o in enumerate(spec.parts) if q != p]
        rows += _necessary_rows(f"N({p + 1})", part, others)
    return CheckReport("np-necessary", tuple(rows))


def divided_violations(spec: PartiteSpec) -> list[tuple[int, int]]:
    """Vertices (original indexing) with ``ceil(lo/d) > floor(hi/d)``."""
    d = spec.divisor
    bad = []
    for p, part in enumerate(spec.parts):
        for i, e in enumerate(part.original()):
            if halved_lo(e, d) > halved_hi(e, d):
                bad.append((p, i))
    return bad


def _require_constructible(spec: PartiteSpec, report: CheckReport) -> None:
    if not report.passed:
        f = report.failures()[0]
        raise PreconditionViolated(
            f"inequality family {f.family} fails at prefix {f.prefix}: {f.lhs} > {f.rhs}",
            family=f.family, prefix=f.prefix)
    bad = divided_violations(spec)
    if bad:
        p, i = bad[0]
        lo, hi = spec.parts[p].original()[i]
        raise PreconditionViolated(
            f"vertex {i} of part {p + 1}: interval [{lo}, {hi}] is empty after "
            f"rounding by {spec.divisor}", vertex=(p, i))


def _pair_graph(spec: PartiteSpec, p: int, q: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Bipartite layer between parts ``p`` (interval role) and ``q`` (lower
    target role), in original vertex indexing of the whole spec."""
    d = spec.divisor
    left, right = spec.parts[p], spec.parts[q]
    g = realize_bipartite_interval(left.divided(d), right.divided(d))
    return [((p, left.perm[i]), (q, right.perm[j])) for (_, i), (_, j) in g.edges]


def realize_tripartite(spec: PartiteSpec) -> MultipartiteGraph:
    """Union of three bipartite layers X–Y, X–Z and Y–Z built on halved
    bounds.  Each vertex collects between ``2*ceil(lo/2)`` and
    ``2*floor(hi/2)`` edges, so its degree lands inside ``[lo, hi]``."""
    _require_parts(spec, 3)
    _require_constructible(spec, tri_sufficient_check(spec))
    edges = _pair_graph(spec, 0, 1) + _pair_graph(spec, 0, 2) + _pair_graph(spec, 1, 2)
    return MultipartiteGraph.from_edges(spec.sizes, edges)


def realize_npartite(spec: PartiteSpec) -> MultipartiteGraph:
    _require_constructible(spec, np_sufficient_check(spec))
    n = len(spec.parts)
    edges = []
    for p in range(n):
        for q in range(p + 1, n):
            edges += _pair_graph(spec, p, q)
    return MultipartiteGraph.from_edges(spec.sizes, edges)
