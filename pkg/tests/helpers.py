"""Shared test helpers.

The realizability tables enumerate every simple graph (or bipartite graph)
on the vertex set once and record its sorted degree sequence; they share
no code with the package.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from pathlib import Path

from degreal.core import MultipartiteGraph

FIXTURES = Path(__file__).parent / "fixtures"


def assert_valid_graph(g: MultipartiteGraph) -> None:
    """Structural validator run on every graph a test obtains."""
    g.validate()
    for u, v in g.edges:
        assert u[0] != v[0], f"edge {u}-{v} inside one part"
        assert 0 <= u[1] < g.part_sizes[u[0]] and 0 <= v[1] < g.part_sizes[v[0]]
    assert sum(sum(d) for d in g.degrees()) == 2 * len(g)


@lru_cache(maxsize=None)
def graphic_sequences(n: int) -> frozenset[tuple[int, ...]]:
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    for mask in range(1 << len(pairs)):
        deg = [0] * n
        for k, (a, b) in enumerate(pairs):
            if mask >> k & 1:
                deg[a] += 1
                deg[b] += 1
        seen.add(tuple(sorted(deg, reverse=True)))
    return frozenset(seen)


@lru_cache(maxsize=None)
def bigraphic_pairs(m: int, n: int) -> frozenset[tuple[tuple[int, ...], tuple[int, ...]]]:
    cells = [(i, j) for i in range(m) for j in range(n)]
    seen = set()
    for mask in range(1 << len(cells)):
        left, right = [0] * m, [0] * n
        for k, (i, j) in enumerate(cells):
            if mask >> k & 1:
                left[i] += 1
                right[j] += 1
        seen.add((tuple(sorted(left, reverse=True)), tuple(sorted(right, reverse=True))))
    return frozenset(seen)


def nonincreasing(length: int, top: int):
    return itertools.combinations_with_replacement(range(top, -1, -1), length)


# (command and kind, fixture, expected exit status)
FIXTURE_EXITS = [
    (["check", "tri-sufficient"], "counterexample.yaml", 1),
    (["check", "tri-necessary"], "counterexample.yaml", 0),
    (["check", "np-sufficient"], "counterexample.yaml", 1),
    (["check", "tri-strong"], "strong_fail.yaml", 1),
    (["check", "cor24"], "strong_fail.yaml", 1),
    (["check", "cor23"], "strong_fail.yaml", 1),
    (["check", "eg"], "eg_zeros.yaml", 0),
    (["check", "gr"], "bipartite_exact.yaml", 0),
    (["check", "tri-sufficient"], "interval_23.yaml", 0),
    (["check", "np-sufficient"], "complete4.yaml", 0),
    (["check", "np-necessary"], "complete4.yaml", 0),
    (["check", "gr"], "counterexample.yaml", 2),
    (["check", "eg"], "malformed.yaml", 2),
    (["check", "eg"], "bad_interval.yaml", 2),
    (["check", "cor24"], "counterexample.yaml", 2),
    (["realize"], "counterexample.yaml", 1),
    (["realize"], "interval_23.yaml", 0),
    (["realize"], "all_zero.yaml", 0),
    (["realize"], "complete4.yaml", 0),
    (["realize"], "bipartite_exact.yaml", 0),
    (["realize"], "bipartite_interval.yaml", 0),
    (["realize"], "malformed.yaml", 2),
    (["oracle"], "counterexample.yaml", 0),
    (["oracle"], "strong_fail.yaml", 1),
    (["oracle"], "all_zero.yaml", 0),
]

REALIZABLE_FIXTURES = ["interval_23.yaml", "all_zero.yaml", "complete4.yaml",
                       "bipartite_exact.yaml", "bipartite_interval.yaml"]
