"""Vectorized screening of enumerated universes.

For a fixed tuple of part sizes every graph is enumerated once as a bit
mask; the distinct degree vectors go into a counting grid whose prefix sums
answer "does some realizable degree vector lie in this box?" with ``2**V``
lookups (inclusion–exclusion over the box corners).  The inequality checks
decompose over parts and pairs of parts, so they are tabulated per part
choice and combined with index arithmetic.

Only the specs flagged as gap candidates are turned back into Python
objects; everything else stays in numpy arrays.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import Interval, IntervalSeq, MultipartiteGraph, PartiteSpec

MAX_TABLE_PAIRS = 20
MAX_GRID_CELLS = 1 << 22
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ShapeTable:
    sizes: tuple[int, ...]
    owner: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int], ...]
    vectors: np.ndarray
    masks: np.ndarray
    prefix: np.ndarray
    grid: int

    def realizable(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Boolean per row of the ``(N, V)`` bound arrays."""
        n, v = lo.shape
        if v == 0:
            return np.ones(n, dtype=bool)
        g = self.grid
        hi_c = np.minimum(hi, g - 1) + 1
        lo_c = np.minimum(lo, g)
        empty = np.any(lo_c >= hi_c, axis=1)
        lo_c = np.minimum(lo_c, hi_c)
        flat = self.prefix.ravel()
        strides = np.array([(g + 1) ** (v - 1 - k) for k in range(v)], dtype=np.int64)
        hi_off = hi_c.astype(np.int64) * strides
        lo_off = lo_c.astype(np.int64) * strides
        total = np.zeros(n, dtype=np.int64)
        for subset in itertools.product((0, 1), repeat=v):
            sel = np.array(subset, dtype=bool)
            idx = np.where(sel, lo_off, hi_off).sum(axis=1)
            sign = -1 if sel.sum() % 2 else 1
            total += sign * flat[idx]
        return (total > 0) & ~empty

    def witness(self, lo: Sequence[int], hi: Sequence[int]) -> MultipartiteGraph | None:
        lo_a, hi_a = np.asarray(lo), np.asarray(hi)
        inside = np.all((self.vectors >= lo_a) & (self.vectors <= hi_a), axis=1)
        hit = np.flatnonzero(inside)
        if not hit.size:
            return None
        mask = int(self.masks[hit[0]])
        edges = [(self.owner[a], self.owner[b]) for k, (a, b) in enumerate(self.pairs) if mask >> k & 1]
        return MultipartiteGraph.from_edges(self.sizes, edges)


@lru_cache(maxsize=64)
def shape_table(sizes: tuple[int, ...]) -> ShapeTable | None:
    """Table for ``sizes``, or ``None`` when it would be too large."""
    owner = tuple((p, i) for p, k in enumerate(sizes) for i in range(k))
    v = len(owner)
    pairs = tuple((a, b) for a in range(v) for b in range(a + 1, v) if owner[a][0] != owner[b][0])
    if len(pairs) > MAX_TABLE_PAIRS:
        return None
    maxdeg = [sum(1 for a, b in pairs if u in (a, b)) for u in range(v)]
    g = max(maxdeg, default=0) + 1
    if (g + 1) ** v > MAX_GRID_CELLS:
        return None
    inc = np.zeros((len(pairs), v), dtype=np.int64)
    for k, (a, b) in enumerate(pairs):
        inc[k, a] = inc[k, b] = 1
    if v == 0:
        return ShapeTable((), (), (), np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64),
                          np.ones((), dtype=np.int64), 1)
    shifts = np.arange(len(pairs), dtype=np.int64)
    seen: dict[bytes, int] = {}
    vecs, masks = [], []
    total = 1 << len(pairs)
    for start in range(0, total, _CHUNK):
        m = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        deg = (((m[:, None] >> shifts) & 1) @ inc).astype(np.int8)
        uniq, first = np.unique(deg, axis=0, return_index=True)
        for row, f in zip(uniq, first):
            key = row.tobytes()
            if key not in seen:
                seen[key] = len(vecs)
                vecs.append(row)
                masks.append(int(m[f]))
    vectors = np.array(vecs, dtype=np.int64).reshape(len(vecs), v)
    counts = np.zeros((g,) * v, dtype=np.int64)
    counts[tuple(vectors.T)] = 1
    prefix = counts
    for axis in range(v):
        prefix = np.cumsum(prefix, axis=axis)
    prefix = np.pad(prefix, [(1, 0)] * v)
    return ShapeTable(tuple(sizes), owner, pairs, vectors, np.array(masks, dtype=np.int64), prefix, g)


def _tabulate_sufficient(lower: np.ndarray, upper: np.ndarray, d: int) -> np.ndarray:
    """``T[a, b]``: choice ``a`` of one part passes the rounded prefix
    family against choice ``b`` of another."""
    k = lower.shape[1]
    if k == 0:
        return np.ones((lower.shape[0], upper.shape[0]), dtype=bool)
    head = np.cumsum(-(-lower // d), axis=1)
    caps = upper // d
    r = np.arange(1, k + 1)
    rhs = np.minimum(caps[:, :, None], r[None, None, :]).sum(axis=1)
    return np.all(head[:, None, :] <= rhs[None, :, :], axis=2)


def _cap_sums(highs: np.ndarray, width: int) -> np.ndarray:
    """``sum_j min(hi_j, w)`` for ``w = 1..width``, per choice."""
    w = np.arange(1, width + 1)
    if highs.shape[1] == 0:
        return np.zeros((highs.shape[0], width), dtype=np.int64)
    return np.minimum(highs[:, :, None], w[None, None, :]).sum(axis=1)


@dataclass
class Block:
    """All specs of one size tuple in an enumerated universe."""

    sizes: tuple[int, ...]
    choices: tuple[list[tuple[Interval, ...]], ...]
    index: tuple[np.ndarray, ...]
    lo: np.ndarray
    hi: np.ndarray
    realizable: np.ndarray
    verdicts: dict[str, np.ndarray]
    table: ShapeTable

    def __len__(self) -> int:
        return self.lo.shape[0]

    def spec(self, row: int) -> PartiteSpec:
        parts = []
        for p, idx in enumerate(self.index):
            entries = self.choices[p][int(idx[row])]
            parts.append(IntervalSeq(entries, tuple(range(len(entries)))))
        return PartiteSpec(tuple(parts))

    def find(self, spec: PartiteSpec) -> int | None:
        if spec.sizes != self.sizes:
            return None
        row = 0
        for p, part in enumerate(spec.parts):
            try:
                c = self.choices[p].index(part.entries)
            except ValueError:
                return None
            row = row * len(self.choices[p]) + c
        return row


def _choice_arrays(choices: list[tuple[Interval, ...]], k: int) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(choices, dtype=np.int64).reshape(len(choices), k, 2)
    return arr[:, :, 0], arr[:, :, 1]


def screen_block(sizes: tuple[int, ...], choices: tuple[list[tuple[Interval, ...]], ...],
                 sufficient_name: str, necessary_name: str) -> Block | None:
    table = shape_table(sizes)
    if table is None:
        return None
    n = len(sizes)
    d = n - 1
    los, his = zip(*(_choice_arrays(c, k) for c, k in zip(choices, sizes)))
    counts = tuple(len(c) for c in choices)
    index = np.unravel_index(np.arange(int(np.prod(counts))), counts)
    lo = np.concatenate([los[p][index[p]] for p in range(n)], axis=1) if sum(sizes) else \
        np.zeros((len(index[0]), 0), dtype=np.int64)
    hi = np.concatenate([his[p][index[p]] for p in range(n)], axis=1) if sum(sizes) else \
        np.zeros((len(index[0]), 0), dtype=np.int64)

    sufficient = np.ones(len(index[0]), dtype=bool)
    for p in range(n):
        for q in range(n):
            if p != q:
                t = _tabulate_sufficient(los[p], his[q], d)
                sufficient &= t[index[p], index[q]]

    caps = [_cap_sums(his[q], max(sizes)) for q in range(n)]
    necessary = np.ones(len(index[0]), dtype=bool)
    for p in range(n):
        k = sizes[p]
        if k == 0:
            continue
        head = np.cumsum(los[p], axis=1)[index[p]]
        rhs = sum(caps[q][index[q], :k] for q in range(n) if q != p)
        necessary &= np.all(head <= rhs, axis=1)

    return Block(tuple(sizes), choices, index, lo, hi, table.realizable(lo, hi),
                 {sufficient_name: sufficient, necessary_name: necessary}, table)


def iter_blocks(parts: int, max_size: int, part_choices) -> Iterator[tuple[tuple[int, ...], tuple]]:
    """Size tuples ordered by total vertex count, with their part choices."""
    all_sizes = sorted(itertools.product(range(max_size + 1), repeat=parts), key=lambda s: (sum(s), s))
    for sizes in all_sizes:
        yield sizes, tuple(part_choices(k) for k in sizes)
