"""Erdős–Gallai and Gale–Ryser tests, plus an exact bipartite constructor."""

from __future__ import annotations

from .core import CheckReport, DegreeSeq, FamilyRow, MultipartiteGraph
from .errors import InfeasibleInput


def eg_check(seq: DegreeSeq) -> CheckReport:
    """Graphic-sequence test.

    Rows: ``parity`` (degree sum mod 2 against 0) and ``EG`` for every
    ``k = 0..n``, comparing the sum of the ``k`` largest degrees with
    ``k(k-1) + sum(min(k, d) for the remaining d)``.
    """
    lam = list(seq.values)
    n = len(lam)
    total = sum(lam)
    rows = [FamilyRow("parity", 0, total % 2, 0, total % 2 == 0)]
    head = 0
    for k in range(n + 1):
        if k:
            head += lam[k - 1]
        rhs = k * (k - 1) + sum(min(k, d) for d in lam[k:])
        rows.append(FamilyRow("EG", k, head, rhs, head <= rhs))
    return CheckReport("eg", tuple(rows))


def gr_check(left: DegreeSeq, right: DegreeSeq) -> CheckReport:
    """Bigraphic-pair test: equal sums, and for ``t = 1..len(right)`` the
    ``t`` largest right degrees sum to at most ``sum(min(d, t) for d in left)``."""
    rows = [FamilyRow("sum", 0, sum(left.values), sum(right.values),
                      sum(left.values) == sum(right.values))]
    head = 0
    for t, phi in enumerate(right.values, start=1):
        head += phi
        rhs = sum(min(d, t) for d in left.values)
        rows.append(FamilyRow("GR", t, head, rhs, head <= rhs))
    return CheckReport("gr", tuple(rows))


def build_bipartite_exact(left: DegreeSeq, right: DegreeSeq) -> MultipartiteGraph:
    """Greedy realization of a bigraphic pair.

    Left vertices are served in order; each is joined to the right vertices
    with the largest remaining demand, ties going to the lower index.
    """
    report = gr_check(left, right)
    if not report.passed:
        fail = report.failures()[0]
        raise InfeasibleInput(f"not bigraphic: {fail.family} fails at prefix {fail.prefix}")
    demand = list(right.values)
    edges = []
    for i, d in enumerate(left.values):
        order = sorted(range(len(demand)), key=lambda j: (-demand[j], j))[:d]
        for j in order:
            # gr_check passing guarantees demand here; anything else is a bug
            assert demand[j] > 0, "greedy ran out of right-side demand"
            demand[j] -= 1
            edges.append(((0, i), (1, j)))
    assert not any(demand), "greedy left right-side demand unmet"
    return MultipartiteGraph.from_edges((len(left), len(right)), edges)
