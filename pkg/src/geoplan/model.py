"""Storage network model, validation and the multi-capacity reduction.

A network is a set of named nodes joined by a symmetric round-trip-time
matrix with a zero diagonal.  Each node stores ``capacity`` symbols and
issues requests for ``file_count`` distinct files; ``demands[v][j]`` is
the probability that the next request system-wide originates at node v
and asks for file j, so the demand matrix sums to one over the whole
network, not per row.

Nodes with capacity above one are reduced to unit-capacity sub-nodes:
the sub-nodes of one node sit at round-trip time zero from each other,
inherit cross-node times unchanged, and split their node's demand row
evenly across themselves.  Downstream planning and evaluation then only
ever deal with unit-capacity networks and project results back through
the provenance map.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInputError, InvalidSpecError
from .rational import frac_str, to_fraction

#: Ingestion tolerance for the global demand mass check.
DEMAND_SUM_TOLERANCE = Fraction(1, 10**9)


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of a storage network."""

    node_ids: tuple[str, ...]
    capacities: tuple[int, ...]
    rtt: tuple[tuple[Fraction, ...], ...]
    demands: tuple[tuple[Fraction, ...], ...]
    file_count: int

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def is_unit_capacity(self) -> bool:
        return all(c == 1 for c in self.capacities)

    def index_of(self, node_id: str) -> int:
        try:
            return self.node_ids.index(node_id)
        except ValueError:
            raise InvalidInputError(f"unknown node id {node_id!r}") from None

    def to_dict(self) -> dict:
        """Serializable form; exact values are rendered as strings."""
        return {
            "files": self.file_count,
            "nodes": [
                {
                    "id": self.node_ids[v],
                    "capacity": self.capacities[v],
                    "demands": [frac_str(p) for p in self.demands[v]],
                }
                for v in range(self.node_count)
            ],
            "rtt": [[frac_str(t) for t in row] for row in self.rtt],
        }


def make_spec(
    node_ids: Sequence[str],
    rtt: Sequence[Sequence],
    demands: Sequence[Sequence],
    file_count: int,
    capacities: Sequence[int] | None = None,
) -> NetworkSpec:
    """Build a NetworkSpec, coercing all numeric entries to Fraction."""
    ids = tuple(str(i) for i in node_ids)
    caps = tuple(int(c) for c in capacities) if capacities is not None else (1,) * len(ids)
    return NetworkSpec(
        node_ids=ids,
        capacities=caps,
        rtt=tuple(tuple(to_fraction(x) for x in row) for row in rtt),
        demands=tuple(tuple(to_fraction(x) for x in row) for row in demands),
        file_count=int(file_count),
    )


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    severity: str  # "error" | "warning"
    witness: tuple | None = None


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not any(v.severity == "error" for v in self.violations)

    @property
    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == "error")

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == "warning")


def validate_spec(spec: NetworkSpec, strict: bool = False) -> ValidationResult:
    """Check a network description against all structural invariants.

    Round-trip-time triangle breaches are reported as warnings by
    default because measured wide-area RTTs routinely violate the
    triangle inequality; ``strict=True`` turns them into errors.
    """
    out: list[Violation] = []
    n = spec.node_count
    k = spec.file_count

    def err(kind, message, witness=None):
        out.append(Violation(kind, message, "error", witness))

    if n == 0:
        err("node-count", "network has no nodes")
    if k < 1:
        err("file-count", f"file count must be at least 1, got {k}")
    if len(set(spec.node_ids)) != n:
        dupes = sorted({i for i in spec.node_ids if spec.node_ids.count(i) > 1})
        err("duplicate-id", f"duplicate node ids: {dupes}", tuple(dupes))
    for i, node_id in enumerate(spec.node_ids):
        if not node_id:
            err("node-id", f"node {i} has an empty id")

    if len(spec.capacities) != n:
        err("capacity", "capacity list length does not match node count")
    else:
        for v, cap in enumerate(spec.capacities):
            if cap < 1:
                err("capacity", f"node {spec.node_ids[v]} has capacity {cap} < 1", (v,))
        total_slots = sum(spec.capacities)
        if n and total_slots < k:
            err(
                "capacity",
                f"total storage {total_slots} cannot hold {k} distinct files",
            )

    shape_ok = len(spec.rtt) == n and all(len(row) == n for row in spec.rtt)
    if not shape_ok:
        err("rtt-shape", f"rtt matrix must be {n}x{n}")
    else:
        for u in range(n):
            if spec.rtt[u][u] != 0:
                err(
                    "rtt-diagonal",
                    f"rtt from {spec.node_ids[u]} to itself must be 0",
                    (u,),
                )
            for v in range(u + 1, n):
                if spec.rtt[u][v] < 0:
                    err(
                        "rtt-negative",
                        f"negative rtt between {spec.node_ids[u]} and {spec.node_ids[v]}",
                        (u, v),
                    )
                if spec.rtt[u][v] != spec.rtt[v][u]:
                    err(
                        "rtt-asymmetric",
                        f"asymmetric rtt between {spec.node_ids[u]} and {spec.node_ids[v]}",
                        (u, v),
                    )
        severity = "error" if strict else "warning"
        for u in range(n):
            for v in range(u + 1, n):
                for w in range(n):
                    if w in (u, v):
                        continue
                    if spec.rtt[u][v] > spec.rtt[u][w] + spec.rtt[w][v]:
                        out.append(
                            Violation(
                                "triangle",
                                "triangle inequality breach: "
                                f"rtt({spec.node_ids[u]},{spec.node_ids[v]}) > "
                                f"rtt({spec.node_ids[u]},{spec.node_ids[w]}) + "
                                f"rtt({spec.node_ids[w]},{spec.node_ids[v]})",
                                severity,
                                (u, w, v),
                            )
                        )

    demand_shape_ok = len(spec.demands) == n and all(len(row) == k for row in spec.demands)
    if not demand_shape_ok:
        err("demand-shape", f"demand matrix must be {n}x{k}")
    else:
        negative = False
        for v in range(n):
            for j in range(k):
                if spec.demands[v][j] < 0:
                    err(
                        "demand-negative",
                        f"negative demand at node {spec.node_ids[v]}, file {j + 1}",
                        (v, j),
                    )
                    negative = True
        if not negative:
            total = sum(p for row in spec.demands for p in row)
            if abs(total - 1) > DEMAND_SUM_TOLERANCE:
                err(
                    "demand-sum",
                    f"demand probabilities sum to {frac_str(total)}, expected 1",
                )

    return ValidationResult(tuple(out))


def require_valid(spec: NetworkSpec, strict: bool = False) -> ValidationResult:
    """Validate and raise InvalidSpecError on any error-grade violation."""
    result = validate_spec(spec, strict=strict)
    if not result.ok:
        lines = "; ".join(v.message for v in result.errors)
        raise InvalidSpecError(f"invalid network: {lines}", result)
    return result


# ---------------------------------------------------------------------------
# Placements


@dataclass(frozen=True)
class Placement:
    """Files stored per node, one entry per storage slot (0-based files)."""

    files_by_node: tuple[tuple[int, ...], ...]

    @classmethod
    def from_files(cls, files: Iterable[int]) -> Placement:
        """Unit-capacity shorthand: one file per node."""
        return cls(tuple((int(f),) for f in files))

    @property
    def is_unit(self) -> bool:
        return all(len(slots) == 1 for slots in self.files_by_node)

    def single(self, v: int) -> int:
        slots = self.files_by_node[v]
        if len(slots) != 1:
            raise InvalidInputError(f"node index {v} stores {len(slots)} files, expected 1")
        return slots[0]

    def as_single_files(self) -> tuple[int, ...]:
        return tuple(self.single(v) for v in range(len(self.files_by_node)))

    def holders(self, file_index: int) -> tuple[int, ...]:
        return tuple(
            v for v, slots in enumerate(self.files_by_node) if file_index in slots
        )

    def covered_files(self) -> frozenset[int]:
        return frozenset(f for slots in self.files_by_node for f in slots)


# ---------------------------------------------------------------------------
# Multi-capacity reduction


@dataclass(frozen=True)
class ExpandedSpec:
    """Unit-capacity reduction of a network plus its provenance map.

    ``provenance[i]`` is ``(original_node_index, slot)`` for expanded
    node i, slots numbered from 1.  ``groups[v]`` lists the expanded
    node indices belonging to original node v, in slot order.
    """

    network: NetworkSpec
    provenance: tuple[tuple[int, int], ...]
    groups: tuple[tuple[int, ...], ...]

    @property
    def is_identity(self) -> bool:
        return all(len(g) == 1 for g in self.groups)

    def project_placement(self, placement: Placement) -> Placement:
        """Collapse a unit placement on the expansion to per-node multisets."""
        if len(placement.files_by_node) != self.network.node_count:
            raise InvalidInputError("placement does not match the expanded network")
        files: list[tuple[int, ...]] = []
        for group in self.groups:
            files.append(tuple(sorted(placement.single(i) for i in group)))
        return Placement(tuple(files))


def expand_multifile(spec: NetworkSpec) -> ExpandedSpec:
    """Split every capacity-M node into M unit-capacity sub-nodes.

    Sub-nodes of the same parent are at round-trip time zero from each
    other, keep cross-node times, and each carries 1/M of the parent's
    demand row.  Capacity-1 nodes keep their id; sub-node ids are
    formed as ``"<id>#<slot>"``.
    """
    n = spec.node_count
    existing = set(spec.node_ids)
    sub_ids: list[str] = []
    provenance: list[tuple[int, int]] = []
    groups: list[tuple[int, ...]] = []
    for v in range(n):
        cap = spec.capacities[v]
        members = []
        for slot in range(1, cap + 1):
            if cap == 1:
                sub_id = spec.node_ids[v]
            else:
                sub_id = f"{spec.node_ids[v]}#{slot}"
                if sub_id in existing:
                    raise InvalidSpecError(
                        f"expanded id {sub_id!r} collides with an existing node id"
                    )
            members.append(len(sub_ids))
            sub_ids.append(sub_id)
            provenance.append((v, slot))
        groups.append(tuple(members))

    total = len(sub_ids)
    zero = Fraction(0)
    rtt = [[zero] * total for _ in range(total)]
    for i in range(total):
        vi = provenance[i][0]
        for j in range(total):
            vj = provenance[j][0]
            rtt[i][j] = zero if vi == vj else spec.rtt[vi][vj]

    demands = []
    for i in range(total):
        v = provenance[i][0]
        share = Fraction(1, spec.capacities[v])
        demands.append(tuple(p * share for p in spec.demands[v]))

    network = NetworkSpec(
        node_ids=tuple(sub_ids),
        capacities=(1,) * total,
        rtt=tuple(tuple(row) for row in rtt),
        demands=tuple(demands),
        file_count=spec.file_count,
    )
    return ExpandedSpec(network=network, provenance=tuple(provenance), groups=tuple(groups))


# ---------------------------------------------------------------------------
# File formats


def spec_from_dict(data: dict) -> NetworkSpec:
    if not isinstance(data, dict):
        raise InvalidInputError("network file must contain a JSON object")
    try:
        file_count = int(data["files"])
        nodes = data["nodes"]
        rtt = data["rtt"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed network file: {exc}") from exc
    node_ids = []
    capacities = []
    demands = []
    for entry in nodes:
        node_ids.append(str(entry["id"]))
        capacities.append(int(entry.get("capacity", 1)))
        demands.append([to_fraction(x) for x in entry.get("demands", [])])
    return make_spec(node_ids, rtt, demands, file_count, capacities)


def load_spec(
    path: str,
    rtt_csv: str | None = None,
    demands_csv: str | None = None,
) -> NetworkSpec:
    """Load a network from JSON, optionally overriding matrices from CSV."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh, parse_float=Fraction)
    spec = spec_from_dict(data)
    if rtt_csv is not None:
        spec = NetworkSpec(
            node_ids=spec.node_ids,
            capacities=spec.capacities,
            rtt=load_matrix_csv(rtt_csv),
            demands=spec.demands,
            file_count=spec.file_count,
        )
    if demands_csv is not None:
        spec = NetworkSpec(
            node_ids=spec.node_ids,
            capacities=spec.capacities,
            rtt=spec.rtt,
            demands=load_matrix_csv(demands_csv),
            file_count=spec.file_count,
        )
    return spec


def load_matrix_csv(path: str) -> tuple[tuple[Fraction, ...], ...]:
    """Read a headerless numeric CSV matrix as exact rationals."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            if not record:
                continue
            rows.append(tuple(to_fraction(cell) for cell in record))
    return tuple(rows)


def save_spec(spec: NetworkSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2)
        fh.write("\n")
