from __future__ import annotations

import pytest
from helpers import assert_valid_graph
from hypothesis import given
from hypothesis import strategies as st

from degreal.core import (
    CheckReport,
    DegreeSeq,
    FamilyRow,
    IntervalSeq,
    MultipartiteGraph,
    PartiteSpec,
    bound_violations,
    canonicalize,
    degree_profile,
    halved_hi,
    halved_lo,
    verifies,
)
from degreal.errors import InputTooLarge, InvalidInterval, NegativeValue, PartOutOfRange

intervals = st.tuples(st.integers(0, 6), st.integers(0, 6)).map(lambda t: (min(t), max(t)))
raw_parts = st.lists(intervals, max_size=5)


def random_graph(sizes, data):
    verts = [(p, i) for p, k in enumerate(sizes) for i in range(k)]
    pairs = [(u, v) for a, u in enumerate(verts) for v in verts[a + 1:] if u[0] != v[0]]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return MultipartiteGraph.from_edges(sizes, chosen)


def test_canonicalize_two_entries():
    seq = canonicalize([(0, 2), (2, 3)])
    assert seq.entries == ((2, 3), (0, 2))
    assert seq.perm == (1, 0)


def test_canonicalize_empty():
    seq = canonicalize([])
    assert seq.entries == () and seq.perm == ()


def test_canonicalize_tie_breaks_on_hi_then_index():
    seq = canonicalize([(2, 4), (2, 3), (3, 3)])
    assert seq.entries == ((3, 3), (2, 4), (2, 3))
    assert seq.perm == (2, 0, 1)


def test_canonicalize_bare_integers_become_degenerate_intervals():
    assert canonicalize([1, 3]).entries == ((3, 3), (1, 1))


def test_canonicalize_rejects_bad_entries():
    with pytest.raises(InvalidInterval):
        canonicalize([(3, 2)])
    with pytest.raises(NegativeValue):
        canonicalize([(-1, 2)])


def test_interval_seq_rejects_unsorted_entries():
    with pytest.raises(ValueError):
        IntervalSeq(((0, 1), (2, 2)), (0, 1))


@given(raw_parts)
def test_canonicalize_idempotent(raw):
    once = canonicalize(raw)
    twice = canonicalize(once.entries)
    assert twice.entries == once.entries
    assert twice.perm == tuple(range(len(raw)))


@given(raw_parts)
def test_perm_recovers_caller_order(raw):
    seq = canonicalize(raw)
    assert seq.original() == [tuple(e) for e in raw]
    assert sorted(seq.perm) == list(range(len(raw)))


@pytest.mark.parametrize("lo,d,want", [(3, 2, 2), (0, 5, 0), (3, 3, 1)])
def test_halved_lo(lo, d, want):
    assert halved_lo(lo, d) == want


@pytest.mark.parametrize("hi,d,want", [(3, 2, 1), (7, 3, 2), (0, 1, 0)])
def test_halved_hi(hi, d, want):
    assert halved_hi(hi, d) == want


def test_halved_accepts_intervals():
    assert halved_lo((3, 7), 3) == 1 and halved_hi((3, 7), 3) == 2


def test_degree_seq_order_and_conversion():
    with pytest.raises(ValueError):
        DegreeSeq((1, 2))
    seq = DegreeSeq.of([1, 3, 2])
    assert seq.values == (3, 2, 1)
    assert seq.to_intervals().entries == ((3, 3), (2, 2), (1, 1))


def test_partite_spec_basics():
    spec = PartiteSpec.from_raw([[(2, 3), (0, 2)], [4], []])
    assert spec.divisor == 2
    assert spec.sizes == (2, 1, 0)
    assert not spec.is_exact
    assert str(spec) == "([2,3], [0,2]); (4); ()"
    with pytest.raises(ValueError):
        PartiteSpec.from_raw([[1]])


def test_partite_spec_caps_total_degree():
    with pytest.raises(InputTooLarge):
        PartiteSpec.from_raw([[10**6], [1]])


def test_degree_profile_examples():
    empty = MultipartiteGraph.from_edges((2, 2, 2), [])
    assert degree_profile(empty, 1) == [0, 0]
    x1, x2, y1, y2, z1, z2 = (0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)
    cycle = MultipartiteGraph.from_edges((2, 2, 2), [(x1, y1), (y1, z1), (z1, x2), (x2, y2), (y2, z2), (z2, x1)])
    assert degree_profile(cycle, 0) == [2, 2]
    single = MultipartiteGraph.from_edges((2, 1), [(x1, y1)])
    assert degree_profile(single, 0) == [1, 0]
    with pytest.raises(PartOutOfRange):
        degree_profile(single, 2)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        MultipartiteGraph.from_edges((2, 1), [((0, 0), (0, 1))])
    with pytest.raises(ValueError):
        MultipartiteGraph.from_edges((2, 1), [((0, 0), (1, 0)), ((1, 0), (0, 0))])
    with pytest.raises(ValueError):
        MultipartiteGraph.from_edges((2, 1), [((0, 2), (1, 0))])


def test_verification_reports_original_indexing():
    spec = PartiteSpec.from_raw([[(0, 0), (1, 1)], [(1, 1)]])
    g = MultipartiteGraph.from_edges((2, 1), [((0, 1), (1, 0))])
    assert verifies(g, spec)
    bad = MultipartiteGraph.from_edges((2, 1), [((0, 0), (1, 0))])
    assert {v for v, _, _ in bound_violations(bad, spec)} == {(0, 0), (0, 1)}


@given(st.lists(st.integers(0, 3), min_size=2, max_size=4), st.data())
def test_handshake_and_validator(sizes, data):
    g = random_graph(tuple(sizes), data)
    assert_valid_graph(g)
    for p in range(len(sizes)):
        for i, d in enumerate(degree_profile(g, p)):
            assert d == len(g.neighbors((p, i)))


def test_report_failures_keep_smallest_prefix():
    rows = (FamilyRow("A", 1, 1, 0, False), FamilyRow("A", 2, 5, 0, False), FamilyRow("B", 1, 0, 0, True))
    report = CheckReport("demo", rows)
    assert not report.passed
    assert report.failures() == [rows[0]]
    assert report.family_ids() == ["A", "B"]
    assert report.family_passed("B")
    with pytest.raises(KeyError):
        report.family_passed("C")
    assert "mu" not in report.to_dict()
    assert CheckReport("demo", rows, mu=3).to_dict()["mu"] == 3
