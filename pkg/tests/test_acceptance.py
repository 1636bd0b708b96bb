"""Acceptance gate: one test per criterion, each printed as a PASS/FAIL
line in the terminal summary."""

from __future__ import annotations

import itertools
import time
from functools import lru_cache

import pytest
from helpers import (
    FIXTURE_EXITS,
    FIXTURES,
    REALIZABLE_FIXTURES,
    assert_valid_graph,
    bigraphic_pairs,
    graphic_sequences,
    nonincreasing,
)

from degreal.classic import eg_check, gr_check
from degreal.cli import load_instance, main, read_graph, run_check
from degreal.core import DegreeSeq, PartiteSpec, verifies
from degreal.errors import FuelExhausted, StalemateContradiction
from degreal.interval_bipartite import realize_bipartite_interval
from degreal.multipartite import (
    divided_violations,
    np_necessary_check,
    np_sufficient_check,
    realize_npartite,
    realize_tripartite,
    tri_necessary_check,
    tri_strong_necessary_check,
    tri_sufficient_check,
)
from degreal.oracle import Enumeration, Sampling, iter_universe, oracle_is_realizable, run_gap_search

COUNTEREXAMPLE_RAW = [[(2, 3), (0, 2)], [(2, 4), (1, 2)], [(1, 2), (0, 1)]]
STRONG_FAIL = PartiteSpec.from_sequences((2, 2), (4,), (2,))


@lru_cache(maxsize=1)
def sweep_universe() -> tuple[PartiteSpec, ...]:
    """Exact triples with part sizes <= 2 and degrees <= 3, plus 1000 seeded
    random interval specs with sizes <= 3 and hi <= 5."""
    exact = list(iter_universe(Enumeration(3, 2, 3, exact=True)))
    sampled = list(iter_universe(Sampling(3, 3, 5, seed=0, samples=1000)))
    return tuple(exact + sampled)


@lru_cache(maxsize=1)
def four_part_specs() -> tuple[PartiteSpec, ...]:
    """The first 200 seeded random 4-part specs that meet the construction
    precondition."""
    chosen = []
    for spec in iter_universe(Sampling(4, 3, 6, seed=0, samples=50_000)):
        if np_sufficient_check(spec).passed and not divided_violations(spec):
            chosen.append(spec)
            if len(chosen) == 200:
                break
    return tuple(chosen)


@pytest.mark.criterion(1, "counterexample reproduced")
def test_counterexample():
    start = time.perf_counter()
    spec = PartiteSpec.from_raw(COUNTEREXAMPLE_RAW)
    ok, g = oracle_is_realizable(spec)
    assert ok and g is not None
    assert_valid_graph(g)
    assert verifies(g, spec)
    report = tri_sufficient_check(spec)
    assert not report.passed
    assert [f.prefix for f in report.failures()] == [2]
    assert tri_necessary_check(spec).passed
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "sufficiency soundness sweep")
def test_sufficiency_sweep():
    start = time.perf_counter()
    universe = sweep_universe()
    assert len(universe) == 3375 + 1000
    built = failures = 0
    for spec in universe:
        if tri_sufficient_check(spec).passed and not divided_violations(spec):
            g = realize_tripartite(spec)
            assert_valid_graph(g)
            failures += not verifies(g, spec)
            built += 1
    assert failures == 0
    assert built >= 50
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(3, "necessity soundness sweep")
def test_necessity_sweep():
    start = time.perf_counter()
    violations = []
    realizable = 0
    for spec in sweep_universe():
        ok, _ = oracle_is_realizable(spec)
        if not ok:
            continue
        realizable += 1
        if not tri_necessary_check(spec).passed:
            violations.append(("tri-necessary", str(spec)))
        if spec.is_exact and not tri_strong_necessary_check(*spec.degree_seqs()).passed:
            violations.append(("tri-strong", str(spec)))
    assert violations == []
    assert realizable > 100
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(4, "cross-edge refinement is strictly stronger")
def test_strictness_witness():
    result = run_gap_search(Enumeration(3, 2, 4, exact=True))
    strict = [w for w in result.witnesses if "strictness" in w.kinds]
    assert strict
    for w in strict:
        assert not w.oracle_realizable
        assert any(w.verdicts[f"cor24@{k}"] and not w.verdicts[f"tri-strong@{k}"] for k in (1, 2, 3))
    stored = [w for w in strict if w.spec.key() == STRONG_FAIL.key()]
    assert stored
    report = tri_strong_necessary_check(*STRONG_FAIL.degree_seqs())
    assert report.mu == 1
    fail = [r for r in report.families if r.family == "T(1)" and not r.ok]
    assert [(r.prefix, r.lhs, r.rhs) for r in fail] == [(2, 4, 3)]


@pytest.mark.criterion(5, "classic equivalence")
def test_classic_equivalence():
    start = time.perf_counter()
    mismatches = []
    for n in range(7):
        table = graphic_sequences(n)
        for values in nonincreasing(n, 5):
            if eg_check(DegreeSeq(values)).passed != (values in table):
                mismatches.append(("eg", values))
    for m, n in itertools.product(range(5), repeat=2):
        table = bigraphic_pairs(m, n)
        for left in nonincreasing(m, 4):
            for right in nonincreasing(n, 4):
                if gr_check(DegreeSeq(left), DegreeSeq(right)).passed != ((left, right) in table):
                    mismatches.append(("gr", left, right))
    assert mismatches == []
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(6, "n-partite coherence")
def test_npartite_coherence():
    for spec in sweep_universe():
        assert np_sufficient_check(spec).families == tri_sufficient_check(spec).families
        assert np_necessary_check(spec).families == tri_necessary_check(spec).families
        assert np_sufficient_check(spec).passed == tri_sufficient_check(spec).passed
    k4 = realize_npartite(PartiteSpec.from_raw([[(3, 3)]] * 4))
    assert_valid_graph(k4)
    assert len(k4) == 6 and k4.degrees() == [[3]] * 4
    specs = four_part_specs()
    assert len(specs) == 200
    for spec in specs:
        g = realize_npartite(spec)
        assert_valid_graph(g)
        assert verifies(g, spec)


@pytest.mark.criterion(7, "engine invariants")
def test_engine_invariants():
    """Re-run every construction of the sweeps with a step hook that checks
    the progress measure independently of the engine's own assertion."""
    steps = 0
    prev = None

    def watch(phase, state):
        nonlocal steps, prev
        steps += 1
        measure = (phase, state.critical, -state.deficiency)
        if prev is not None and prev[0] == phase:
            assert measure > prev, (prev, measure)
        prev = measure

    def layers(spec):
        d = spec.divisor
        for p, q in itertools.combinations(range(len(spec.parts)), 2):
            yield spec.parts[p].divided(d), spec.parts[q].divided(d)

    constructible = [s for s in sweep_universe()
                     if tri_sufficient_check(s).passed and not divided_violations(s)]
    try:
        for spec in constructible + list(four_part_specs()):
            for left, right in layers(spec):
                prev = None
                realize_bipartite_interval(left, right, on_step=watch)
    except (FuelExhausted, StalemateContradiction) as exc:
        pytest.fail(f"engine error: {exc!r}")
    assert steps > 1000


@pytest.mark.criterion(8, "CLI round trip")
def test_cli_round_trip(tmp_path, capsys):
    for fixture in REALIZABLE_FIXTURES:
        spec = load_instance(FIXTURES / fixture).spec()
        for fmt in ("dot", "json"):
            outputs = []
            for attempt in range(2):
                out = tmp_path / f"{fixture}.{attempt}.{fmt}"
                assert main(["realize", str(FIXTURES / fixture), "--out", str(out), "--format", fmt]) == 0
                g = read_graph(out)
                assert_valid_graph(g)
                assert verifies(g, spec)
                outputs.append(out.read_bytes())
            assert outputs[0] == outputs[1]
    for args, fixture, code in FIXTURE_EXITS:
        extra = ["--out", str(tmp_path / "x")] if args[0] in ("realize", "oracle") else []
        assert main(args + [str(FIXTURES / fixture)] + extra) == code, (args, fixture)
        if args[0] == "check" and code != 2:
            verdict = run_check(args[1], load_instance(FIXTURES / fixture)).passed
            assert code == (0 if verdict else 1)
        first = capsys.readouterr().out
        main(args + [str(FIXTURES / fixture)] + extra)
        assert capsys.readouterr().out == first
