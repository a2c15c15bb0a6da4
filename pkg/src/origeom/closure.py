"""Constructibility engine: saturate point/line sets under fold rules,
answer constructibility queries, emit degree certificates.

Objects are deduplicated by exact value equality, accelerated by dyadic
interval bucketing (probe neighbor buckets, confirm with exact sign tests).
Enumeration order is (depth, id) lexicographic; ids are assigned in creation
order, so results are deterministic and replayable. Frontier expansion can
run on a thread pool; results are committed in enumeration order, so the
output is schedule-independent.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CoincidentPoints,
    DegenerateLine,
    DivisionByZero,
    EqualLines,
    IsotropicLine,
    NegativeRadicand,
    PreconditionViolated,
    ReducibleCubic,
    UndecidedSign,
)
from .exactnum import (
    cubic_root_by_index,
    degree_bound,
    rational,
    refine,
    sign_of,
    to_sexpr,
)
from .exactnum.cubic import _rational_root
from .folds import (
    FoldResult,
    fold_h1,
    fold_h2,
    fold_h3,
    fold_h4,
    fold_h5,
    fold_h6,
    fold_h7,
)
from .plane import Line, Point, intersect

ALL_RULES = ("H1", "H2", "H3", "H4", "H5", "H6", "H7")

_KEY_BITS = 48
_GRID_BITS = 40


def _value_key(v) -> int:
    lo, hi = refine(v, _KEY_BITS)
    mid = (lo + hi) / 2
    return int(mid * (1 << _GRID_BITS)) if mid >= 0 else -int(-mid * (1 << _GRID_BITS)) - 1


@dataclass
class Step:
    op: str
    inputs: tuple
    outputs: tuple
    witness: str


class _Index:
    """Bucketed exact-dedup index over value tuples."""

    def __init__(self, arity):
        self.arity = arity
        self.buckets: dict = {}

    def _neighbors(self, keys):
        cells = [()]
        for k in keys:
            cells = [c + (k + d,) for c in cells for d in (-1, 0, 1)]
        return cells

    def find(self, values, same, items):
        keys = tuple(_value_key(v) for v in values)
        for cell in self._neighbors(keys):
            for idx in self.buckets.get(cell, ()):
                if same(items[idx]):
                    return idx
        return None

    def insert(self, values, idx):
        keys = tuple(_value_key(v) for v in values)
        self.buckets.setdefault(keys, []).append(idx)


@dataclass
class ConstructionGraph:
    points: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    point_depth: list = field(default_factory=list)
    line_depth: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    truncated: bool = False
    undecided: int = 0

    def __post_init__(self):
        self._pindex = _Index(2)
        self._lindex = _Index(3)

    def size(self) -> int:
        return len(self.points) + len(self.lines)

    def add_point(self, p: Point, depth: int):
        """Returns (id, is_new)."""
        try:
            hit = self._pindex.find(
                (p.x, p.y), lambda q: q.same(p), self.points
            )
        except UndecidedSign:
            self.undecided += 1
            raise
        if hit is not None:
            return f"p{hit}", False
        idx = len(self.points)
        self.points.append(p)
        self.point_depth.append(depth)
        self._pindex.insert((p.x, p.y), idx)
        return f"p{idx}", True

    def add_line(self, l: Line, depth: int):
        try:
            hit = self._lindex.find(
                (l.a, l.b, l.c), lambda m: m.same(l), self.lines
            )
        except UndecidedSign:
            self.undecided += 1
            raise
        if hit is not None:
            return f"l{hit}", False
        idx = len(self.lines)
        self.lines.append(l)
        self.line_depth.append(depth)
        self._lindex.insert((l.a, l.b, l.c), idx)
        return f"l{idx}", True

    def point_id_of(self, p: Point):
        hit = self._pindex.find((p.x, p.y), lambda q: q.same(p), self.points)
        return None if hit is None else f"p{hit}"


def _phase_tuples(op, npts, nlns, wp, wl):
    """Lexicographic argument tuples for one phase, skipping tuples whose
    members were all present the last time this phase ran (watermarks wp,
    wl): those were already tried and can only reproduce duplicates."""
    if op in ("H1", "H2"):
        for i in range(npts):
            for j in range(max(i + 1, wp), npts):
                yield (f"p{i}", f"p{j}")
    elif op == "H3":
        for i in range(nlns):
            for j in range(max(i + 1, wl), nlns):
                yield (f"l{i}", f"l{j}")
    elif op == "H4":
        for i in range(npts):
            for j in range(nlns):
                if i >= wp or j >= wl:
                    yield (f"p{i}", f"l{j}")
    elif op == "H5":
        for i in range(npts):
            for j in range(npts):
                if i == j:
                    continue
                for k in range(nlns):
                    if i >= wp or j >= wp or k >= wl:
                        yield (f"p{i}", f"p{j}", f"l{k}")
    elif op == "H6":
        for i in range(npts):
            for j in range(npts):
                for k in range(nlns):
                    for m in range(nlns):
                        if i >= wp or j >= wp or k >= wl or m >= wl:
                            yield (f"p{i}", f"p{j}", f"l{k}", f"l{m}")
    elif op == "H7":
        for i in range(npts):
            for j in range(nlns):
                for k in range(nlns):
                    if j != k and (i >= wp or j >= wl or k >= wl):
                        yield (f"p{i}", f"l{j}", f"l{k}")
    elif op == "X":
        for i in range(nlns):
            for j in range(max(i + 1, wl), nlns):
                yield (f"l{i}", f"l{j}")


def _resolve(graph, oid):
    if oid.startswith("p"):
        return graph.points[int(oid[1:])]
    return graph.lines[int(oid[1:])]


_GUARD_ERRORS = (
    CoincidentPoints,
    DegenerateLine,
    DivisionByZero,
    EqualLines,
    IsotropicLine,
    NegativeRadicand,
    PreconditionViolated,
)

_FOLD_OPS = {
    "H1": fold_h1,
    "H2": fold_h2,
    "H3": fold_h3,
    "H4": fold_h4,
    "H5": fold_h5,
    "H6": fold_h6,
    "H7": fold_h7,
}


def _apply_one(graph, op, arg_ids):
    """Pure: compute the results of one rule application (no commits)."""
    args = [_resolve(graph, a) for a in arg_ids]
    try:
        if op == "X":
            p = intersect(*args)
            return ([], [p] if p is not None else [], "linear")
        res = _FOLD_OPS[op](*args)
    except _GUARD_ERRORS:
        return ([], [], "skipped")
    except UndecidedSign:
        return ([], [], "undecided")
    return (list(res.lines), [], res.witness)


def _chunks(it, size):
    chunk = []
    for x in it:
        chunk.append(x)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def closure_search(
    seed_points,
    seed_lines,
    rules,
    max_depth: int,
    budget: int = 50000,
    threads: int = 1,
    target: Point | None = None,
):
    """Breadth-first saturation with rule-sequenced generations.

    Within one generation the phases run in the order H1..H7 then the
    implicit line-line intersection, and each phase sees the outputs of the
    earlier phases of the same generation (this is what makes the
    perpendiculars to a generation's own base lines appear in that same
    generation). Stops early when the optional target point appears.
    """
    rules = tuple(r for r in ALL_RULES if r in set(rules))
    if not rules:
        raise ValueError("rule set must be nonempty")
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if not seed_points and not seed_lines:
        raise ValueError("seeds must be nonempty")
    graph = ConstructionGraph()
    for p in seed_points:
        graph.add_point(p, 0)
    for l in seed_lines:
        graph.add_line(l, 0)
    if target is not None and graph.point_id_of(target) is not None:
        return graph
    phases = list(rules) + ["X"]
    marks = {op: (0, 0) for op in phases}
    pool = (
        concurrent.futures.ThreadPoolExecutor(threads) if threads > 1 else None
    )
    try:
        for gen in range(1, max_depth + 1):
            new_in_gen = 0
            for op in phases:
                npts, nlns = len(graph.points), len(graph.lines)
                wp, wl = marks[op]
                marks[op] = (npts, nlns)
                tuples = _phase_tuples(op, npts, nlns, wp, wl)
                for chunk in _chunks(tuples, 256):
                    if pool is not None:
                        results = list(
                            pool.map(
                                lambda ids: _apply_one(graph, op, ids), chunk
                            )
                        )
                    else:
                        results = [_apply_one(graph, op, ids) for ids in chunk]
                    # commit in enumeration order: schedule-independent
                    for arg_ids, (lines, points, witness) in zip(
                        chunk, results
                    ):
                        if witness == "undecided":
                            graph.undecided += 1
                            continue
                        out_ids = []
                        created = False
                        for l in lines:
                            oid, is_new = graph.add_line(l, gen)
                            out_ids.append(oid)
                            created = created or is_new
                        for p in points:
                            oid, is_new = graph.add_point(p, gen)
                            out_ids.append(oid)
                            created = created or is_new
                        if created:
                            graph.steps.append(
                                Step(op, arg_ids, tuple(out_ids), witness)
                            )
                            new_in_gen += 1
                            if (
                                target is not None
                                and graph.point_id_of(target) is not None
                            ):
                                return graph
                        if graph.size() >= budget:
                            graph.truncated = True
                            return graph
            if new_in_gen == 0:
                break  # saturated early
    finally:
        if pool is not None:
            pool.shutdown()
    return graph


@dataclass
class Trace:
    """Witness trace: the ancestor steps of one target object."""

    target_id: str
    seed_ids: list
    steps: list
    depth: int


def find_construction(
    target: Point, seed_points, seed_lines, rules, max_depth, budget=50000,
    threads: int = 1,
):
    """Shortest-generation trace reaching a point exactly equal to target,
    or None. The search may be budget-truncated; absence is then relative
    to the explored graph."""
    graph = closure_search(
        seed_points, seed_lines, rules, max_depth,
        budget=budget, threads=threads, target=target,
    )
    tid = graph.point_id_of(target)
    if tid is None:
        return None, graph
    produced_by = {}
    for step in graph.steps:
        for oid in step.outputs:
            produced_by.setdefault(oid, step)
    needed = []
    seen = set()
    stack = [tid]
    seeds = []
    while stack:
        oid = stack.pop()
        if oid in seen:
            continue
        seen.add(oid)
        step = produced_by.get(oid)
        if step is None:
            seeds.append(oid)
            continue
        needed.append(step)
        stack.extend(step.inputs)
    order = {id(s): i for i, s in enumerate(graph.steps)}
    needed.sort(key=lambda s: order[id(s)])
    depth = graph.point_depth[int(tid[1:])]
    return Trace(tid, sorted(seeds), needed, depth), graph


# -- degree certificates ------------------------------------------------------


@dataclass
class Certificate:
    p: Fraction
    q: Fraction
    r: Fraction
    target_sexpr: str
    verdict: str
    reason: str

    def to_json(self):
        return {
            "cubic": [str(self.p), str(self.q), str(self.r)],
            "target": self.target_sexpr,
            "verdict": self.verdict,
            "reason": self.reason,
        }

    def to_text(self):
        return (
            f"cubic x^3 + ({self.p}) x^2 + ({self.q}) x + ({self.r})\n"
            f"target root: {self.target_sexpr}\n"
            f"verdict: {self.verdict}\n"
            f"reason: {self.reason}\n"
        )


def euclidean_nonconstructibility_certificate(p, q, r) -> Certificate:
    """Degree-3 obstruction: an irreducible rational cubic's root has exact
    degree 3, which divides no power of 2, so no Euclidean-class value (all
    of which have 2-power degree bounds) can equal it."""
    p, q, r = Fraction(p), Fraction(q), Fraction(r)
    root = _rational_root(p, q, r)
    if root is not None:
        raise ReducibleCubic(root)
    target = cubic_root_by_index(rational(p), rational(q), rational(r), 0)
    # the certificate's own soundness checks
    x = target
    assert sign_of(x * x * x + rational(p) * x * x + rational(q) * x + rational(r)) == 0
    assert degree_bound(target) == 3
    return Certificate(
        p,
        q,
        r,
        to_sexpr(target),
        "NotEuclideanConstructible",
        "irreducible over Q (no rational root), so its real root has exact "
        "degree 3; every Euclidean-constructible value lies in a 2-power "
        "degree tower, and 3 divides no power of 2",
    )
