"""Latency evaluation for placements and linear storage codes.

Everything here minimizes over all of the network, with no graph in the
way: a fetch goes to the nearest node (or cheapest decodable node set)
that can produce the wanted file.  The planner's graph-restricted
search is validated against these direct evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import BudgetExceededError, InvalidInputError, InvalidSpecError
from .gf import cauchy_matrix, field, is_prime, matrix_rank, solution_space
from .model import NetworkSpec, Placement
from .nngraph import NearestNeighborGraph, is_admissible
from .rational import frac_decimal, frac_str

#: decoding-set enumeration cap: q ** (n - k) cosets per file
DEFAULT_COSET_BUDGET = 1 << 20


@dataclass(frozen=True)
class LatencyReport:
    """Fetch latencies of one storage configuration.

    ``latencies[v][j]`` is node v's latency for file j; ``worst_case``
    is the per-node max over files, ``wc_bounds`` the per-node floor no
    configuration can beat, ``average`` the demand-weighted mean.
    """

    node_ids: tuple[str, ...]
    file_count: int
    latencies: tuple[tuple[Fraction, ...], ...]
    worst_case: tuple[Fraction, ...]
    wc_bounds: tuple[Fraction, ...]
    average: Fraction

    def meets_bounds(self) -> bool:
        """True when every node's worst case sits exactly on its floor."""
        return self.worst_case == self.wc_bounds

    def to_dict(self) -> dict:
        return {
            "schema": "latency-report/1",
            "nodes": list(self.node_ids),
            "file_count": self.file_count,
            "latencies": [[frac_str(x) for x in row] for row in self.latencies],
            "worst_case": [frac_str(x) for x in self.worst_case],
            "worst_case_bounds": [frac_str(x) for x in self.wc_bounds],
            "average": frac_str(self.average),
            "average_decimal": frac_decimal(self.average),
        }


def wc_lower_bounds(spec: NetworkSpec) -> tuple[Fraction, ...]:
    """Per-node floor on worst-case fetch latency.

    A node keeps at most its capacity locally; the remaining files must
    be produced by other nodes, and a node at distance t can account for
    at most its own capacity of them.  Walking outward by distance, the
    floor is the distance at which the accumulated capacity first covers
    everything.  Ties in distance count with multiplicity.  The bound
    binds any placement and any code.
    """
    k = spec.file_count
    n = spec.node_count
    bounds = []
    for v in range(n):
        need = k - spec.capacities[v]
        if need <= 0:
            bounds.append(Fraction(0))
            continue
        reach = sorted(
            (spec.rtt[v][u], spec.capacities[u]) for u in range(n) if u != v
        )
        got = 0
        bound = None
        for dist, cap in reach:
            got += cap
            if got >= need:
                bound = dist
                break
        if bound is None:
            raise InvalidSpecError("network cannot hold every file once")
        bounds.append(bound)
    return tuple(bounds)


def _as_placement(spec: NetworkSpec, placement) -> Placement:
    plc = placement if isinstance(placement, Placement) else Placement.from_files(placement)
    if len(plc.files_by_node) != spec.node_count:
        raise InvalidInputError(
            f"placement covers {len(plc.files_by_node)} nodes, network has {spec.node_count}"
        )
    k = spec.file_count
    for v, files in enumerate(plc.files_by_node):
        if len(files) != spec.capacities[v]:
            raise InvalidInputError(
                f"node {spec.node_ids[v]} holds {len(files)} files, capacity is {spec.capacities[v]}"
            )
        for j in files:
            if not 0 <= j < k:
                raise InvalidInputError(f"file index {j} out of range")
    return plc


def eval_uncoded(spec: NetworkSpec, placement) -> LatencyReport:
    """Evaluate a replica placement by direct nearest-holder lookup.

    Works for any placement filling every node to capacity with every
    file held somewhere; no supply-graph restriction is applied.
    """
    plc = _as_placement(spec, placement)
    k = spec.file_count
    missing = set(range(k)) - set(plc.covered_files())
    if missing:
        raise InvalidInputError(f"no node holds file {min(missing)}")
    holders = [plc.holders(j) for j in range(k)]
    latencies = tuple(
        tuple(min(spec.rtt[v][s] for s in holders[j]) for j in range(k))
        for v in range(spec.node_count)
    )
    return _finish_report(spec, latencies)


def _finish_report(spec: NetworkSpec, latencies) -> LatencyReport:
    worst = tuple(max(row) for row in latencies)
    avg = sum(
        (
            spec.demands[v][j] * latencies[v][j]
            for v in range(spec.node_count)
            for j in range(spec.file_count)
        ),
        Fraction(0),
    )
    return LatencyReport(
        node_ids=spec.node_ids,
        file_count=spec.file_count,
        latencies=latencies,
        worst_case=worst,
        wc_bounds=wc_lower_bounds(spec),
        average=avg,
    )


def receive_side_avg(spec: NetworkSpec, nng: NearestNeighborGraph, placement) -> Fraction:
    """Average latency computed from the receive side of the supply graph.

    Each node fetches every file from within its closed in-set, which
    requires the placement to be admissible; the result then equals the
    direct evaluation's average, since in-neighbors are exactly the
    nearest nodes.
    """
    plc = _as_placement(spec, placement)
    if not plc.is_unit:
        raise InvalidInputError("receive-side form needs one file per node; expand first")
    files = plc.as_single_files()
    if not is_admissible(files, nng):
        raise InvalidInputError("placement is not admissible for this graph")
    total = Fraction(0)
    for v in range(spec.node_count):
        for s in nng.closed_in(v):
            total += spec.rtt[s][v] * spec.demands[v][files[s]]
    return total


# ---------------------------------------------------------------------------
# Linear codes


@dataclass(frozen=True)
class LinearCode:
    """Coded storage map over GF(q): node i keeps the single symbol
    sum_j generator[i][j] * file_j."""

    field_order: int
    generator: tuple[tuple[int, ...], ...]

    @property
    def node_count(self) -> int:
        return len(self.generator)

    @property
    def file_count(self) -> int:
        return len(self.generator[0]) if self.generator else 0

    def to_dict(self) -> dict:
        return {"q": self.field_order, "generator": [list(row) for row in self.generator]}

    @classmethod
    def from_dict(cls, data: dict) -> "LinearCode":
        try:
            q = data["q"]
            gen = tuple(tuple(int(x) for x in row) for row in data["generator"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed code description: {exc}") from exc
        if not isinstance(q, int):
            raise InvalidInputError("field order q must be an integer")
        return cls(field_order=q, generator=gen)


@dataclass(frozen=True)
class RecoveryPlan:
    """Chosen decoding vector per (node, file): the coefficients each
    node applies to stored symbols across the network."""

    node_ids: tuple[str, ...]
    file_count: int
    vectors: tuple[tuple[tuple[int, ...], ...], ...]

    def to_dict(self) -> dict:
        return {
            "schema": "recovery-plan/1",
            "nodes": list(self.node_ids),
            "file_count": self.file_count,
            "vectors": [[list(x) for x in per_file] for per_file in self.vectors],
        }


def _code_matrix(spec: NetworkSpec, code: LinearCode):
    """Validate shape, coerce entries, return (field, k x n matrix)."""
    if not spec.is_unit_capacity:
        raise InvalidSpecError("coded storage assumes one symbol per node; expand first")
    n = spec.node_count
    k = spec.file_count
    if code.node_count != n:
        raise InvalidInputError(f"code has {code.node_count} rows, network has {n} nodes")
    if any(len(row) != k for row in code.generator):
        raise InvalidInputError(f"every generator row must have {k} entries")
    f = field(code.field_order)
    columns = [[f.coerce(code.generator[s][j]) for s in range(n)] for j in range(k)]
    return f, columns


def eval_linear_code(
    spec: NetworkSpec,
    code: LinearCode,
    budget: int = DEFAULT_COSET_BUDGET,
) -> tuple[LatencyReport, RecoveryPlan]:
    """Evaluate a linear storage code by exhausting each file's decodings.

    For file j the usable decoding vectors form a coset of the
    generator's kernel, q ** (n - k) of them; a node's latency for j is
    the cheapest coset element's worst contacted distance (contacting
    itself is free).  Raises when the coset count exceeds ``budget``.
    """
    f, matrix = _code_matrix(spec, code)
    n = spec.node_count
    k = spec.file_count
    particulars, null_basis = solution_space(f, matrix)
    d = len(null_basis)
    cosets = f.order**d
    if cosets > budget:
        raise BudgetExceededError(
            f"{cosets} decoding candidates per file exceed the budget of {budget}"
        )
    latencies: list[tuple[Fraction, ...]] = []
    chosen: list[tuple[tuple[int, ...], ...]] = []
    per_file: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = []
    for j in range(k):
        options = []
        for combo in product(f.elements(), repeat=d):
            x = list(particulars[j])
            for c, basis in zip(combo, null_basis):
                if c:
                    for s in range(n):
                        x[s] = f.add(x[s], f.mul(c, basis[s]))
            options.append((tuple(x), tuple(s for s in range(n) if x[s])))
        per_file.append(options)
    for v in range(n):
        row = []
        picks = []
        for j in range(k):
            best: Fraction | None = None
            best_x: tuple[int, ...] | None = None
            for x, support in per_file[j]:
                worst = max(spec.rtt[v][s] for s in support)
                if best is None or worst < best:
                    best = worst
                    best_x = x
            assert best is not None and best_x is not None
            row.append(best)
            picks.append(best_x)
        latencies.append(tuple(row))
        chosen.append(tuple(picks))
    report = _finish_report(spec, tuple(latencies))
    plan = RecoveryPlan(node_ids=spec.node_ids, file_count=k, vectors=tuple(chosen))
    return report, plan


def code_is_admissible(spec: NetworkSpec, code: LinearCode, nng: NearestNeighborGraph) -> bool:
    """Whether every node can decode all files from its closed in-set
    alone (the stored symbols there span the full message space)."""
    f, matrix = _code_matrix(spec, code)
    k = spec.file_count
    if spec.node_ids != nng.node_ids:
        raise InvalidInputError("graph and network disagree on nodes")
    for v in range(spec.node_count):
        cols = nng.closed_in(v)
        sub = [[matrix[i][s] for s in cols] for i in range(k)]
        if matrix_rank(f, sub) < k:
            return False
    return True


def _smallest_field_order(minimum: int) -> int:
    q = max(2, minimum)
    while True:
        if is_prime(q):
            return q
        if q & (q - 1) == 0 and q.bit_length() - 1 <= 16:
            return q
        q += 1


def mds_code(node_count: int, file_count: int, field_order: int | None = None) -> LinearCode:
    """Cauchy-built code where any ``file_count`` nodes can decode everything.

    Such a code is admissible for every supply graph and puts each
    node's worst case exactly on its floor.  Any field with at least
    node_count + file_count elements works; by default the smallest
    supported order is used.
    """
    if file_count < 1 or node_count < file_count:
        raise InvalidInputError("need node_count >= file_count >= 1")
    if field_order is None:
        field_order = _smallest_field_order(node_count + file_count)
    f = field(field_order)
    if field_order < node_count + file_count:
        raise InvalidInputError(
            f"field order {field_order} too small: need at least {node_count + file_count}"
        )
    xs = [f.coerce(i) for i in range(node_count)]
    ys = [f.neg(f.coerce(node_count + j)) for j in range(file_count)]
    return LinearCode(field_order=field_order, generator=cauchy_matrix(f, xs, ys))
