"""Command-line driver: checks, constructions, the oracle and gap mining.

Instance files are YAML::

    name: example          # optional
    parts:
      - [[2, 3], [0, 2]]   # [lo, hi] per vertex
      - [4, 1]             # a bare integer v means [v, v]

Exit codes: 0 pass / realizable, 1 fail / not realizable / precondition
violated, 2 input error, 3 oracle verdict unknown.
"""

from __future__ import annotations

import argparse
import heapq
import json
import re
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import yaml

from .classic import build_bipartite_exact, eg_check, gr_check
from .core import CheckReport, DegreeSeq, IntervalSeq, MultipartiteGraph, PartiteSpec, bound_violations, canonicalize
from .errors import BudgetExhausted, InfeasibleInput, PreconditionViolated, RealizationError
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
from .oracle import DEFAULT_BUDGET, Enumeration, GapSearchResult, GapWitness, Sampling, iter_gap_witnesses, oracle_is_realizable

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3

CHECK_KINDS = ("eg", "gr", "tri-sufficient", "tri-necessary", "tri-strong",
               "cor23", "cor24", "np-sufficient", "np-necessary")
EXACT_KINDS = ("eg", "gr", "tri-strong", "cor23", "cor24")
# part count each kind needs; None means any count of at least two
ARITY = {"eg": 1, "gr": 2, "tri-sufficient": 3, "tri-necessary": 3, "tri-strong": 3,
         "cor23": 3, "cor24": 3, "np-sufficient": None, "np-necessary": None}
_EXTRA_KEYS = ("witness",)


class InstanceError(ValueError):
    """Malformed instance file; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Instance:
    parts: tuple[IntervalSeq, ...]
    name: str | None = None

    def spec(self) -> PartiteSpec:
        return PartiteSpec(self.parts)


# -- instance files ----------------------------------------------------------

def _fail(node: yaml.Node, message: str) -> InstanceError:
    return InstanceError(message, node.start_mark.line + 1, node.start_mark.column + 1)


def _int(node: yaml.Node) -> int:
    if not isinstance(node, yaml.ScalarNode) or node.tag != "tag:yaml.org,2002:int":
        raise _fail(node, "expected an integer")
    return int(node.value, 0)


def _entry(node: yaml.Node):
    if isinstance(node, yaml.ScalarNode):
        return _int(node)
    if isinstance(node, yaml.SequenceNode) and len(node.value) == 2:
        return (_int(node.value[0]), _int(node.value[1]))
    raise _fail(node, "expected an integer or a [lo, hi] pair")


def parse_instance(text: str) -> Instance:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise InstanceError(str(getattr(exc, "problem", exc)), mark.line + 1, mark.column + 1) from exc
        raise InstanceError(str(exc)) from exc
    if not isinstance(root, yaml.MappingNode):
        raise InstanceError("instance must be a mapping with a 'parts' key", 1, 1)
    fields = {}
    for key, value in root.value:
        if not isinstance(key, yaml.ScalarNode) or key.value not in ("name", "parts") + _EXTRA_KEYS:
            raise _fail(key, f"unknown key {key.value!r}")
        fields[key.value] = value
    if "parts" not in fields:
        raise _fail(root, "missing 'parts'")
    node = fields["parts"]
    if not isinstance(node, yaml.SequenceNode):
        raise _fail(node, "'parts' must be a list of lists")
    parts = []
    for part in node.value:
        if not isinstance(part, yaml.SequenceNode):
            raise _fail(part, "each part must be a list")
        raw = [_entry(e) for e in part.value]
        try:
            parts.append(canonicalize(raw))
        except (ValueError, RealizationError) as exc:
            raise _fail(part, str(exc)) from exc
    name = None
    if "name" in fields:
        n = fields["name"]
        if not isinstance(n, yaml.ScalarNode):
            raise _fail(n, "'name' must be a string")
        name = n.value
    return Instance(tuple(parts), name)


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def dump_instance(inst: Instance, extra: str = "") -> str:
    """Normalized text: every entry written as ``[lo, hi]`` in caller order."""
    lines = []
    if inst.name is not None:
        lines.append(f"name: {json.dumps(inst.name, ensure_ascii=False)}")
    lines.append("parts:")
    for part in inst.parts:
        lines.append("  - [" + ", ".join(f"[{lo}, {hi}]" for lo, hi in part.original()) + "]")
    return "\n".join(lines) + "\n" + extra


# -- graph files -------------------------------------------------------------

_FLAT_ARRAY = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")
_FLAT_OBJECT = re.compile(r"\{\s+([^\[\]{}]*?)\s+\}")


def _squash(m: re.Match) -> str:
    inner = re.sub(r",\s+", ", ", m.group(1))
    return m.group(0)[0] + inner + m.group(0)[-1]


def to_json(doc: dict) -> str:
    """Indented JSON with leaf arrays, edges and report rows on one line each."""
    text = json.dumps(doc, indent=2)
    text = _FLAT_ARRAY.sub(_squash, text)
    text = _FLAT_OBJECT.sub(_squash, text)
    # an edge is an array of two already-flattened endpoint arrays
    text = re.sub(r"\[\s+(\[[^\[\]]*\]),\s+(\[[^\[\]]*\])\s+\]", r"[\1, \2]", text)
    return text + "\n"


def graph_to_json(g: MultipartiteGraph, report: CheckReport | None = None) -> str:
    doc = {
        "part_sizes": list(g.part_sizes),
        "edges": [[list(u), list(v)] for u, v in g.sorted_edges()],
    }
    if report is not None:
        doc["report"] = report.to_dict()
    return to_json(doc)


def graph_from_json(text: str) -> MultipartiteGraph:
    doc = json.loads(text)
    return MultipartiteGraph.from_edges(doc["part_sizes"], [tuple(map(tuple, e)) for e in doc["edges"]])


def graph_to_dot(g: MultipartiteGraph, name: str = "realization") -> str:
    lines = [f"graph {json.dumps(name)} {{"]
    for p, size in enumerate(g.part_sizes):
        lines.append(f"  subgraph cluster_p{p} {{")
        lines.append(f'    label="part {p}";')
        lines += [f"    p{p}_v{i};" for i in range(size)]
        lines.append("  }")
    lines += [f"  p{u[0]}_v{u[1]} -- p{v[0]}_v{v[1]};" for u, v in g.sorted_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


_CLUSTER = re.compile(r"subgraph\s+cluster_p(\d+)\s*\{([^}]*)\}")
_VERTEX = re.compile(r"p(\d+)_v(\d+)")
_EDGE = re.compile(r"p(\d+)_v(\d+)\s*--\s*p(\d+)_v(\d+)")


def graph_from_dot(text: str) -> MultipartiteGraph:
    """Reads the DOT dialect written by :func:`graph_to_dot`."""
    sizes: dict[int, int] = {}
    for m in _CLUSTER.finditer(text):
        p = int(m.group(1))
        members = [(int(a), int(b)) for a, b in _VERTEX.findall(m.group(2))]
        if any(q != p for q, _ in members) or sorted(i for _, i in members) != list(range(len(members))):
            raise ValueError(f"cluster p{p} lists unexpected vertices")
        sizes[p] = len(members)
    if sorted(sizes) != list(range(len(sizes))):
        raise ValueError("part clusters are not numbered 0..n-1")
    body = _CLUSTER.sub("", text)
    edges = [((int(a), int(b)), (int(c), int(d))) for a, b, c, d in _EDGE.findall(body)]
    return MultipartiteGraph.from_edges([sizes[p] for p in range(len(sizes))], edges)


def read_graph(path: str | Path) -> MultipartiteGraph:
    text = Path(path).read_text(encoding="utf-8")
    return graph_from_json(text) if text.lstrip().startswith("{") else graph_from_dot(text)


# -- commands ----------------------------------------------------------------

def _exact_seqs(inst: Instance) -> list[DegreeSeq]:
    if not all(p.is_exact for p in inst.parts):
        raise InstanceError("this check needs exact degrees (lo == hi everywhere)")
    return [DegreeSeq.of(p.lows) for p in inst.parts]


def run_check(kind: str, inst: Instance, strict_paper: bool = False) -> CheckReport:
    want = ARITY[kind]
    n = len(inst.parts)
    if (want is None and n < 2) or (want is not None and n != want):
        raise InstanceError(f"{kind} needs {want or 'at least 2'} parts, the instance has {n}")
    if kind in EXACT_KINDS:
        seqs = _exact_seqs(inst)
        if kind == "eg":
            return eg_check(*seqs)
        if kind == "gr":
            return gr_check(*seqs)
        if kind == "tri-strong":
            return tri_strong_necessary_check(*seqs)
        if kind == "cor23":
            return cor23_check(*seqs, strict_paper=strict_paper)
        return cor24_check(*seqs)
    spec = inst.spec()
    return {"tri-sufficient": tri_sufficient_check, "tri-necessary": tri_necessary_check,
            "np-sufficient": np_sufficient_check, "np-necessary": np_necessary_check}[kind](spec)


def realize(inst: Instance) -> tuple[MultipartiteGraph, CheckReport]:
    """Pick the construction by part count and exactness."""
    spec = inst.spec()
    if len(spec.parts) == 2 and spec.is_exact:
        left, right = spec.parts
        g = build_bipartite_exact(DegreeSeq(tuple(left.lows)), DegreeSeq(tuple(right.lows)))
        edges = [((0, left.perm[i]), (1, right.perm[j])) for (_, i), (_, j) in g.edges]
        report = gr_check(DegreeSeq(tuple(left.lows)), DegreeSeq(tuple(right.lows)))
        return MultipartiteGraph.from_edges(spec.sizes, edges), report
    if len(spec.parts) == 3:
        return realize_tripartite(spec), tri_sufficient_check(spec)
    return realize_npartite(spec), np_sufficient_check(spec)


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _render(g: MultipartiteGraph, fmt: str, report: CheckReport | None, name: str | None) -> str:
    return graph_to_dot(g, name or "realization") if fmt == "dot" else graph_to_json(g, report)


def cmd_check(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    report = run_check(args.kind, inst, args.strict_paper)
    sys.stdout.write(to_json(report.to_dict()))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_realize(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    try:
        g, report = realize(inst)
    except PreconditionViolated as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except InfeasibleInput as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    bad = bound_violations(g, inst.spec())
    if bad:
        print(f"construction produced out-of-bound degrees: {bad}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, _render(g, args.format, report, inst.name))
    return EXIT_PASS


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    try:
        ok, g = oracle_is_realizable(inst.spec(), args.budget)
    except BudgetExhausted as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    if not ok:
        print("not realizable", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, _render(g, args.format, None, inst.name))
    return EXIT_PASS


def _witness_text(w: GapWitness) -> str:
    inst = Instance(w.spec.parts)
    lines = ["witness:",
             f"  kinds: [{', '.join(w.kinds)}]",
             f"  oracle_realizable: {str(w.oracle_realizable).lower()}",
             "  verdicts:"]
    lines += [f"    {k}: {str(v).lower()}" for k, v in sorted(w.verdicts.items())]
    if w.witness_graph is not None:
        lines.append("  edges: [" + ", ".join(
            f"[[{u[0]}, {u[1]}], [{v[0]}, {v[1]}]]" for u, v in w.witness_graph.sorted_edges()) + "]")
    return dump_instance(inst, "\n".join(lines) + "\n")


KINDS = ("sufficiency", "necessity", "strictness")


def cmd_gap_search(args: argparse.Namespace) -> int:
    if args.samples is not None:
        universe = Sampling(args.parts, args.sizes, args.max_hi, args.seed, args.samples, args.exact)
    else:
        universe = Enumeration(args.parts, args.sizes, args.max_hi, args.exact)
    result = GapSearchResult()
    counts = dict.fromkeys(KINDS, 0)
    # smallest keys per kind, kept bounded so huge universes stay in memory
    kept: dict[str, list] = {k: [] for k in KINDS}
    limit = args.limit
    for w in iter_gap_witnesses(universe, budget=args.budget, result=result):
        for k in w.kinds:
            counts[k] += 1
            item = _Largest(w.spec.key(), w)
            if limit == 0:
                kept[k].append(item)
            elif len(kept[k]) < limit:
                heapq.heappush(kept[k], item)
            else:
                heapq.heappushpop(kept[k], item)
    chosen = {}
    for k in KINDS:
        for item in kept[k]:
            chosen[item.key] = item.witness
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, key in enumerate(sorted(chosen)):
        w = chosen[key]
        fname = f"witness_{i:06d}.yaml"
        (out / fname).write_text(_witness_text(w), encoding="utf-8")
        rows.append(f"{fname}\t{','.join(w.kinds)}\t{str(w.oracle_realizable).lower()}\t{w.spec}")
    summary = [f"# examined\t{result.examined}", f"# unknown\t{len(result.unknown)}"]
    summary += [f"# {k}\t{counts[k]}" for k in KINDS]
    summary.append("file\tkinds\toracle_realizable\tspec")
    (out / "summary.tsv").write_text("\n".join(summary + rows) + "\n", encoding="utf-8")
    for k in KINDS:
        print(f"{k}: {counts[k]}")
    print(f"examined: {result.examined}, unknown: {len(result.unknown)}, files written: {len(rows)}")
    return EXIT_PASS


class _Largest:
    """Heap entry that inverts the order so a min-heap drops the largest key."""

    __slots__ = ("key", "witness")

    def __init__(self, key: tuple, witness: GapWitness):
        self.key = key
        self.witness = witness

    def __lt__(self, other: _Largest) -> bool:
        return self.key > other.key


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="degreal", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate one condition and print its rows as JSON")
    c.add_argument("kind", choices=CHECK_KINDS)
    c.add_argument("file")
    c.add_argument("--strict-paper", action="store_true",
                   help="cor23: evaluate only the two families with part 1 as the lower side")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("realize", help="construct a realization")
    r.add_argument("file")
    r.add_argument("--out", default=None, help="output path (default: stdout)")
    r.add_argument("--format", choices=("dot", "json"), default="json")
    r.set_defaults(func=cmd_realize)

    o = sub.add_parser("oracle", help="decide realizability by exhaustive search")
    o.add_argument("file")
    o.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    o.add_argument("--out", default=None)
    o.add_argument("--format", choices=("dot", "json"), default="json")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gap-search", help="mine specs separating the checks from the oracle")
    g.add_argument("--parts", type=_positive, default=3)
    g.add_argument("--sizes", type=_nonnegative, default=2, help="largest part size")
    g.add_argument("--max-hi", type=_nonnegative, default=4)
    g.add_argument("--exact", action="store_true", help="only exact degrees")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--samples", type=_positive, default=None,
                   help="sample this many random specs instead of enumerating")
    g.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    g.add_argument("--limit", type=_nonnegative, default=1000,
                   help="witness files kept per kind, smallest first (0: all)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gap_search)
    return ap


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "parts", 3) < 2:
        print("gap-search needs at least two parts", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"{args.file}:{exc}" if exc.line is not None else f"{getattr(args, 'file', '')}: {exc}",
              file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, RealizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
