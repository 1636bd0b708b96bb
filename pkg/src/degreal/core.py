"""Domain types shared by the checks, the constructions and the oracle.

Vertices are addressed as ``(part, index)`` pairs, both zero-based.  Inside a
part the *canonical* order sorts vertices by lower bound, nonincreasing; the
``perm`` of an :class:`IntervalSeq` maps canonical positions back to the order
the caller supplied.  Graphs returned to callers are indexed in that original
order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    InputTooLarge,
    InvalidInterval,
    NegativeValue,
    PartOutOfRange,
)

MAX_TOTAL_DEGREE = 10**6

Interval = tuple[int, int]
Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]
RawEntry = Union[int, Sequence[int]]


def halved_lo(x: int | Interval, d: int) -> int:
    """Ceiling of the lower bound divided by ``d``."""
    lo = x[0] if isinstance(x, tuple) else x
    return -(-lo // d)


def halved_hi(x: int | Interval, d: int) -> int:
    """Floor of the upper bound divided by ``d``."""
    hi = x[1] if isinstance(x, tuple) else x
    return hi // d


def _canonical_key(item: tuple[int, Interval]) -> tuple[int, int, int]:
    idx, (lo, hi) = item
    return (-lo, -hi, idx)


@dataclass(frozen=True)
class IntervalSeq:
    """Per-vertex degree intervals of one part, in canonical order."""

    entries: tuple[Interval, ...]
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != len(self.perm):
            raise ValueError("entries and perm differ in length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"perm is not a permutation: {self.perm}")
        for lo, hi in self.entries:
            if lo < 0 or hi < 0:
                raise NegativeValue(f"negative bound in ({lo}, {hi})")
            if lo > hi:
                raise InvalidInterval(f"empty interval ({lo}, {hi})")
        keys = [(-lo, -hi, p) for (lo, hi), p in zip(self.entries, self.perm)]
        if keys != sorted(keys):
            raise ValueError("entries are not in canonical order")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def lows(self) -> list[int]:
        return [lo for lo, _ in self.entries]

    @property
    def highs(self) -> list[int]:
        return [hi for _, hi in self.entries]

    @property
    def is_exact(self) -> bool:
        return all(lo == hi for lo, hi in self.entries)

    def original(self) -> list[Interval]:
        """Entries in the caller's original order."""
        out: list[Interval] = [(0, 0)] * len(self.entries)
        for pos, orig in enumerate(self.perm):
            out[orig] = self.entries[pos]
        return out

    def divided(self, d: int) -> list[Interval]:
        """``(ceil(lo/d), floor(hi/d))`` per vertex, canonical order kept."""
        return [(halved_lo(e, d), halved_hi(e, d)) for e in self.entries]


def canonicalize(raw: Iterable[RawEntry]) -> IntervalSeq:
    """Sort intervals by ``lo`` desc, then ``hi`` desc, then original index.

    Plain integers are read as exact intervals ``[v, v]``.
    """
    items: list[tuple[int, Interval]] = []
    for idx, entry in enumerate(raw):
        if isinstance(entry, int):
            lo = hi = entry
        else:
            lo, hi = (int(v) for v in entry)
        if lo < 0 or hi < 0:
            raise NegativeValue(f"entry {idx}: negative bound in ({lo}, {hi})")
        if lo > hi:
            raise InvalidInterval(f"entry {idx}: lo {lo} exceeds hi {hi}")
        items.append((idx, (lo, hi)))
    items.sort(key=_canonical_key)
    return IntervalSeq(tuple(e for _, e in items), tuple(i for i, _ in items))


@dataclass(frozen=True)
class DegreeSeq:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.values):
            raise NegativeValue(f"negative degree in {self.values}")
        if any(a < b for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"degree sequence not nonincreasing: {self.values}")

    @classmethod
    def of(cls, values: Iterable[int]) -> DegreeSeq:
        return cls(tuple(sorted((int(v) for v in values), reverse=True)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def to_intervals(self) -> IntervalSeq:
        return canonicalize(self.values)


@dataclass(frozen=True)
class PartiteSpec:
    """Ordered list of at least two parts."""

    parts: tuple[IntervalSeq, ...]

    def __post_init__(self) -> None:
        if len(self.parts) < 2:
            raise ValueError("a partite spec needs at least two parts")
        total = sum(hi for p in self.parts for hi in p.highs)
        if total > MAX_TOTAL_DEGREE:
            raise InputTooLarge(f"total degree {total} exceeds {MAX_TOTAL_DEGREE}")

    @classmethod
    def from_raw(cls, parts: Iterable[Iterable[RawEntry]]) -> PartiteSpec:
        return cls(tuple(canonicalize(p) for p in parts))

    @classmethod
    def from_sequences(cls, *seqs: Iterable[int]) -> PartiteSpec:
        return cls.from_raw([list(s) for s in seqs])

    @property
    def divisor(self) -> int:
        return len(self.parts) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.parts)

    def degree_seqs(self) -> list[DegreeSeq]:
        if not self.is_exact:
            raise ValueError("spec has non-degenerate intervals")
        return [DegreeSeq(tuple(p.lows)) for p in self.parts]

    def key(self) -> tuple:
        """Sort key: total vertex count, then canonical entries."""
        return (sum(self.sizes), tuple(p.entries for p in self.parts))

    def __str__(self) -> str:
        def fmt(p: IntervalSeq) -> str:
            return "(" + ", ".join(
                str(lo) if lo == hi else f"[{lo},{hi}]" for lo, hi in p.entries) + ")"
        return "; ".join(fmt(p) for p in self.parts)


def _norm_edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class MultipartiteGraph:
    part_sizes: tuple[int, ...]
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        self.validate()

    @classmethod
    def from_edges(cls, part_sizes: Sequence[int], edges: Iterable[tuple[Sequence[int], Sequence[int]]]) -> MultipartiteGraph:
        norm = []
        for u, v in edges:
            norm.append(_norm_edge((int(u[0]), int(u[1])), (int(v[0]), int(v[1]))))
        s = frozenset(norm)
        if len(s) != len(norm):
            raise ValueError("duplicate edge")
        return cls(tuple(part_sizes), s)

    def validate(self) -> None:
        for u, v in self.edges:
            if u > v:
                raise ValueError(f"edge {u}-{v} not normalized")
            for p, i in (u, v):
                if not (0 <= p < len(self.part_sizes)) or not (0 <= i < self.part_sizes[p]):
                    raise ValueError(f"vertex {(p, i)} out of range")
            if u[0] == v[0]:
                raise ValueError(f"edge {u}-{v} joins two vertices of part {u[0]}")

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def degrees(self) -> list[list[int]]:
        deg = [[0] * n for n in self.part_sizes]
        for (p, i), (q, j) in self.edges:
            deg[p][i] += 1
            deg[q][j] += 1
        return deg

    def degree(self, v: Vertex) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: Vertex, part: int | None = None) -> set[Vertex]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        if part is not None:
            out = {w for w in out if w[0] == part}
        return out

    def union(self, other: MultipartiteGraph) -> MultipartiteGraph:
        if other.part_sizes != self.part_sizes:
            raise ValueError("part sizes differ")
        if self.edges & other.edges:
            raise ValueError("graphs share an edge")
        return MultipartiteGraph(self.part_sizes, self.edges | other.edges)

    def __len__(self) -> int:
        return len(self.edges)


def degree_profile(g: MultipartiteGraph, part: int) -> list[int]:
    """Degrees of the vertices of ``part`` in stored order."""
    if not 0 <= part < len(g.part_sizes):
        raise PartOutOfRange(f"part {part} not in 0..{len(g.part_sizes) - 1}")
    return g.degrees()[part]


def bound_violations(g: MultipartiteGraph, spec: PartiteSpec) -> list[tuple[Vertex, int, Interval]]:
    """Vertices whose degree leaves its interval (original indexing)."""
    if g.part_sizes != spec.sizes:
        raise ValueError(f"graph sizes {g.part_sizes} do not match spec sizes {spec.sizes}")
    bad = []
    for p, (degs, part) in enumerate(zip(g.degrees(), spec.parts)):
        for i, (d, (lo, hi)) in enumerate(zip(degs, part.original())):
            if not lo <= d <= hi:
                bad.append(((p, i), d, (lo, hi)))
    return bad


def verifies(g: MultipartiteGraph, spec: PartiteSpec) -> bool:
    return not bound_violations(g, spec)


@dataclass(frozen=True)
class FamilyRow:
    family: str
    prefix: int
    lhs: int
    rhs: int
    ok: bool


@dataclass(frozen=True)
class CheckReport:
    """Every evaluated inequality row of one check.

    Prefix 0 marks whole-sequence conditions (parity, sum balance, the sign
    of the cross-edge count) and the k = 0 Erdős–Gallai row.
    """

    check: str
    families: tuple[FamilyRow, ...]
    mu: int | None = None

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.families)

    def family_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.families:
            seen.setdefault(r.family)
        return list(seen)

    def family_passed(self, family: str) -> bool:
        rows = [r for r in self.families if r.family == family]
        if not rows:
            raise KeyError(family)
        return all(r.ok for r in rows)

    def failures(self) -> list[FamilyRow]:
        """First (smallest-prefix) failing row of every failing family."""
        first: dict[str, FamilyRow] = {}
        for r in self.families:
            if not r.ok and (r.family not in first or r.prefix < first[r.family].prefix):
                first[r.family] = r
        return list(first.values())

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "passed": self.passed,
            "families": [
                {"family": r.family, "prefix": r.prefix, "lhs": r.lhs, "rhs": r.rhs, "ok": r.ok}
                for r in self.families
            ],
        }
        if self.mu is not None:
            out["mu"] = self.mu
        return out
