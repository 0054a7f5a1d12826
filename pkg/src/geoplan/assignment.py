"""Transmit-latency costs and the color-to-file assignment solvers.

With every fetch kept inside the nearest-neighbor graph, the demand-
weighted average latency of a placement decomposes over senders: node s
holding file j contributes the round-trip times to every node it
supplies, weighted by those nodes' demand for j.  Summing the sender
contributions over a color class of the conflict graph gives a k x k
cost matrix over (class, file) pairs, and picking the best file per
class is a balanced assignment problem.

Two exact solvers are provided and must agree: the classic matrix
method (row reduction, zero matching, minimum line cover, adjust by the
smallest uncovered entry) which can emit a step trace, and an O(k^3)
shortest-augmenting-path solver used as a cross-check.  Both run on
exact rationals and break ties between optimal bijections the same
way: lexicographically smallest (class, file) mapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .coloring import Coloring
from .errors import BudgetExceededError, InvalidInputError, InvalidSpecError
from .model import NetworkSpec
from .nngraph import NearestNeighborGraph
from .rational import frac_str, to_fraction

#: largest matrix brute_force_assignment will accept (k! blowup)
BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class TxLatencyMatrix:
    """Per (sender, file): demand-weighted cost of that sender holding
    that file, summed over everything the sender supplies."""

    node_ids: tuple[str, ...]
    values: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ColorCostMatrix:
    """Rows follow the coloring's class order, columns are files."""

    classes: tuple[tuple[int, ...], ...]
    values: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FileMap:
    """Bijection class index -> file index with its total cost."""

    assignment: tuple[int, ...]
    cost: Fraction


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "row_reduce" | "column_reduce" | "matching" | "cover" | "adjust"
    matrix: tuple[tuple[Fraction, ...], ...] | None = None
    size: int | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    rows: tuple[int, ...] | None = None
    cols: tuple[int, ...] | None = None
    delta: Fraction | None = None


@dataclass(frozen=True)
class HungarianTrace:
    steps: tuple[TraceStep, ...]

    def adjustments(self) -> tuple[Fraction, ...]:
        return tuple(s.delta for s in self.steps if s.kind == "adjust")

    def final_matching_size(self) -> int:
        sizes = [s.size for s in self.steps if s.kind == "matching"]
        if not sizes:
            raise InvalidInputError("trace holds no matching step")
        return sizes[-1]

    def to_dict(self) -> dict:
        out = []
        for step in self.steps:
            entry: dict = {"kind": step.kind}
            if step.matrix is not None:
                entry["matrix"] = [[frac_str(x) for x in row] for row in step.matrix]
            if step.size is not None:
                entry["matching_size"] = step.size
            if step.pairs is not None:
                entry["pairs"] = [list(p) for p in step.pairs]
            if step.rows is not None:
                entry["covered_rows"] = list(step.rows)
            if step.cols is not None:
                entry["covered_columns"] = list(step.cols)
            if step.delta is not None:
                entry["delta"] = frac_str(step.delta)
            out.append(entry)
        return {"steps": out}


def tx_latency_matrix(spec: NetworkSpec, nng: NearestNeighborGraph) -> TxLatencyMatrix:
    """Sender-side cost of every (node, file) pairing.

    Args:
        spec: unit-capacity network.
        nng: supply graph determining who each node serves.

    Returns:
        Matrix whose (s, j) entry sums rtt(s, v) * demand(v, j) over the
        nodes v supplied by s (s itself included at zero distance).
    """
    if not spec.is_unit_capacity:
        raise InvalidSpecError("transmit costs need a unit-capacity network; expand first")
    if spec.node_ids != nng.node_ids:
        raise InvalidInputError("graph and network disagree on nodes")
    out_sets = nng.out_neighbors()
    values = []
    for s in range(spec.node_count):
        row = []
        for j in range(spec.file_count):
            row.append(sum((spec.rtt[s][v] * spec.demands[v][j] for v in out_sets[s]),
                           Fraction(0)))
        values.append(tuple(row))
    return TxLatencyMatrix(node_ids=spec.node_ids, values=tuple(values))


def color_cost_matrix(coloring: Coloring, tx: TxLatencyMatrix) -> ColorCostMatrix:
    """Aggregate sender costs over each color class.

    Column sums are preserved: every sender lands in exactly one class.
    """
    k = len(coloring.classes)
    width = len(tx.values[0]) if tx.values else 0
    if k != width:
        raise InvalidInputError(
            f"coloring has {k} classes but the network has {width} files"
        )
    values = []
    for members in coloring.classes:
        row = [Fraction(0)] * width
        for s in members:
            for j in range(width):
                row[j] += tx.values[s][j]
        values.append(tuple(row))
    return ColorCostMatrix(classes=coloring.classes, values=tuple(values))


# ---------------------------------------------------------------------------
# Solvers


def _as_rows(cost) -> list[list[Fraction]]:
    if isinstance(cost, ColorCostMatrix):
        rows = [list(row) for row in cost.values]
    else:
        rows = [[to_fraction(x) for x in row] for row in cost]
    k = len(rows)
    if k == 0 or any(len(row) != k for row in rows):
        raise InvalidInputError("cost matrix must be square and non-empty")
    return rows


def _kuhn_zero_matching(rows: list[list[Fraction]]) -> tuple[list[int], int]:
    """Maximum matching on zero entries; returns (col -> row, size)."""
    k = len(rows)
    match_col = [-1] * k

    def try_row(r: int, seen: set[int]) -> bool:
        for c in range(k):
            if rows[r][c] == 0 and c not in seen:
                seen.add(c)
                if match_col[c] == -1 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    size = 0
    for r in range(k):
        if try_row(r, set()):
            size += 1
    return match_col, size


def _line_cover(rows: list[list[Fraction]], match_col: list[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minimum cover of the zeros by rows and columns, via the standard
    alternating-reachability construction from a maximum matching."""
    k = len(rows)
    row_match = [-1] * k
    for c, r in enumerate(match_col):
        if r != -1:
            row_match[r] = c
    reach_rows = {r for r in range(k) if row_match[r] == -1}
    reach_cols: set[int] = set()
    frontier = sorted(reach_rows)
    while frontier:
        nxt = []
        for r in frontier:
            for c in range(k):
                if rows[r][c] == 0 and c not in reach_cols:
                    reach_cols.add(c)
                    owner = match_col[c]
                    if owner != -1 and owner not in reach_rows:
                        reach_rows.add(owner)
                        nxt.append(owner)
        frontier = nxt
    cover_rows = tuple(sorted(set(range(k)) - reach_rows))
    cover_cols = tuple(sorted(reach_cols))
    return cover_rows, cover_cols


def _lex_min_zero_assignment(rows: list[list[Fraction]]) -> tuple[int, ...]:
    """Lexicographically smallest perfect matching on the zero entries.

    Every optimal bijection is tight against the final reduced matrix, so
    fixing columns greedily row by row (with a feasibility probe on the
    remainder) yields the canonical optimum.
    """
    k = len(rows)
    zero_cols = [tuple(c for c in range(k) if rows[r][c] == 0) for r in range(k)]

    def feasible(start: int, used: set[int]) -> bool:
        match_col: dict[int, int] = {}

        def try_row(r: int, seen: set[int]) -> bool:
            for c in zero_cols[r]:
                if c in used or c in seen:
                    continue
                seen.add(c)
                if c not in match_col or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
            return False

        return all(try_row(r, set()) for r in range(start, k))

    used: set[int] = set()
    out: list[int] = []
    for r in range(k):
        for c in zero_cols[r]:
            if c in used:
                continue
            used.add(c)
            if feasible(r + 1, used):
                out.append(c)
                break
            used.discard(c)
        else:
            raise AssertionError("tight subgraph lost its perfect matching")
    return tuple(out)


def hungarian_min_assignment(
    cost,
    column_reduce: bool = False,
    with_trace: bool = False,
) -> tuple[FileMap, HungarianTrace | None]:
    """Minimum-cost bijection by the matrix method.

    Negative entries are handled by the initial row reduction.  With
    ``column_reduce`` a column reduction is applied after the row pass
    as a shortcut; the default keeps the plain row-reduce, match, cover,
    adjust cycle so traces show every adjustment.

    Args:
        cost: square matrix (ColorCostMatrix or nested sequences).
        column_reduce: also subtract column minima before matching.
        with_trace: record matrices, covers and adjustment values.

    Returns:
        (FileMap, trace) where trace is None unless requested.
    """
    matrix = _as_rows(cost)
    k = len(matrix)
    work = [list(row) for row in matrix]
    steps: list[TraceStep] = []

    def snapshot():
        return tuple(tuple(row) for row in work)

    for r in range(k):
        low = min(work[r])
        if low != 0:
            work[r] = [x - low for x in work[r]]
    steps.append(TraceStep(kind="row_reduce", matrix=snapshot()))

    if column_reduce:
        for c in range(k):
            low = min(work[r][c] for r in range(k))
            if low != 0:
                for r in range(k):
                    work[r][c] -= low
        steps.append(TraceStep(kind="column_reduce", matrix=snapshot()))

    while True:
        match_col, size = _kuhn_zero_matching(work)
        pairs = tuple(sorted((r, c) for c, r in enumerate(match_col) if r != -1))
        steps.append(TraceStep(kind="matching", size=size, pairs=pairs))
        if size == k:
            break
        cover_rows, cover_cols = _line_cover(work, match_col)
        steps.append(TraceStep(kind="cover", rows=cover_rows, cols=cover_cols))
        open_rows = [r for r in range(k) if r not in cover_rows]
        open_cols = [c for c in range(k) if c not in cover_cols]
        delta = min(work[r][c] for r in open_rows for c in open_cols)
        for r in open_rows:
            work[r] = [x - delta for x in work[r]]
        for c in cover_cols:
            for r in range(k):
                work[r][c] += delta
        steps.append(TraceStep(kind="adjust", delta=delta, matrix=snapshot()))

    assignment = _lex_min_zero_assignment(work)
    total = sum((matrix[r][assignment[r]] for r in range(k)), Fraction(0))
    trace = HungarianTrace(steps=tuple(steps)) if with_trace else None
    return FileMap(assignment=assignment, cost=total), trace


def shortest_path_min_assignment(cost) -> FileMap:
    """O(k^3) shortest-augmenting-path solver with dual potentials.

    Exact arithmetic throughout; returns the same canonical optimum as
    the matrix method and exists to cross-check it.
    """
    matrix = _as_rows(cost)
    k = len(matrix)
    inf = float("inf")
    zero = Fraction(0)
    u = [zero] * (k + 1)
    v = [zero] * (k + 1)
    col_owner = [0] * (k + 1)  # 1-based row owning each column, 0 = free
    way = [0] * (k + 1)
    for i in range(1, k + 1):
        col_owner[0] = i
        j0 = 0
        minv = [inf] * (k + 1)
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = col_owner[j0]
            delta = inf
            j1 = 0
            for j in range(1, k + 1):
                if used[j]:
                    continue
                cur = matrix[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(k + 1):
                if used[j]:
                    u[col_owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if col_owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            col_owner[j0] = col_owner[j1]
            j0 = j1
    reduced = [
        [matrix[r][c] - u[r + 1] - v[c + 1] for c in range(k)] for r in range(k)
    ]
    assignment = _lex_min_zero_assignment(reduced)
    total = sum((matrix[r][assignment[r]] for r in range(k)), Fraction(0))
    return FileMap(assignment=assignment, cost=total)


def brute_force_assignment(cost) -> FileMap:
    """Exhaustive minimum over all k! bijections; first optimum in
    lexicographic order wins.  Refuses matrices past the size guard."""
    matrix = _as_rows(cost)
    k = len(matrix)
    if k > BRUTE_FORCE_LIMIT:
        raise BudgetExceededError(
            f"brute force over {k}! bijections refused (limit {BRUTE_FORCE_LIMIT})"
        )
    best: tuple[int, ...] | None = None
    best_cost: Fraction | None = None
    for perm in permutations(range(k)):
        total = sum((matrix[r][perm[r]] for r in range(k)), Fraction(0))
        if best_cost is None or total < best_cost:
            best_cost = total
            best = perm
    assert best is not None and best_cost is not None
    return FileMap(assignment=best, cost=best_cost)
