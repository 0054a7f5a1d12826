"""Brute-force oracle and plan verdicts.

The oracle enumerates raw placement functions (file index per storage
slot) and scores each by the nearest-holder rule alone; it never
touches the planner's graph/coloring/assignment machinery, so
agreement between the two is meaningful evidence.  Scoring runs on a
common-denominator integer scale for speed, and every reported witness
is re-scored with the exact rational evaluator before it leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import BudgetExceededError, InvalidInputError
from .evaluation import eval_uncoded
from .model import NetworkSpec, Placement, expand_multifile, require_valid
from .nngraph import enumerate_nngs
from .rational import frac_str

DEFAULT_ORACLE_BUDGET = 10_000_000
DEFAULT_WITNESS_CAP = 64

MODES = ("admissible_only", "unrestricted")


@dataclass(frozen=True)
class OracleResult:
    best_value: Fraction | None
    witnesses: tuple[Placement, ...]
    search_space: int
    scored: int
    mode: str
    graphs_truncated: bool
    witnesses_capped: bool

    def to_dict(self) -> dict:
        return {
            "schema": "oracle-result/1",
            "mode": self.mode,
            "best": frac_str(self.best_value) if self.best_value is not None else None,
            "witnesses": len(self.witnesses),
            "search_space": self.search_space,
            "scored": self.scored,
            "graphs_truncated": self.graphs_truncated,
            "witnesses_capped": self.witnesses_capped,
        }


def _integer_scale(spec: NetworkSpec):
    """Scale RTTs and demands to integers; score = int_score / (R * P)."""
    r_div = lcm(*(x.denominator for row in spec.rtt for x in row), 1)
    p_div = lcm(*(x.denominator for row in spec.demands for x in row), 1)
    rtt_i = [[int(x * r_div) for x in row] for row in spec.rtt]
    dem_i = [[int(x * p_div) for x in row] for row in spec.demands]
    return rtt_i, dem_i, r_div * p_div


def brute_force_placement(
    spec: NetworkSpec,
    mode: str = "admissible_only",
    budget: int = DEFAULT_ORACLE_BUDGET,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    nng_cap: int = 64,
) -> OracleResult:
    """Exhaustive minimum over placements by direct scoring.

    ``unrestricted`` scores every function from storage slots onto files
    that stores each file somewhere; ``admissible_only`` keeps only
    placements proper for at least one valid supply graph.  Capacities
    are expanded to unit slots first and witnesses projected back.

    Raises when the k ** slot_count space exceeds ``budget``.
    """
    if mode not in MODES:
        raise InvalidInputError(f"unknown oracle mode {mode!r}")
    require_valid(spec)
    expanded = expand_multifile(spec)
    work = expanded.network
    n = work.node_count
    k = work.file_count
    space = k**n
    if space > budget:
        raise BudgetExceededError(
            f"{k}^{n} = {space} placements exceed the oracle budget of {budget}"
        )

    graphs_truncated = False
    closed_sets: list[tuple[tuple[int, ...], ...]] = []
    if mode == "admissible_only":
        enumeration = enumerate_nngs(work, cap=nng_cap)
        graphs_truncated = enumeration.truncated
        for nng in enumeration.graphs:
            closed_sets.append(tuple(nng.closed_in(v) for v in range(n)))

    rtt_i, dem_i, denom = _integer_scale(work)
    # per node: all nodes by distance, nearest first, index as tie-break
    order = [
        sorted(range(n), key=lambda u, v=v: (rtt_i[v][u], u)) for v in range(n)
    ]
    full = (1 << k) - 1

    best: int | None = None
    raw_witnesses: list[tuple[int, ...]] = []
    capped = False
    scored = 0

    for files in product(range(k), repeat=n):
        if closed_sets:
            admissible = False
            for per_graph in closed_sets:
                for members in per_graph:
                    mask = 0
                    for s in members:
                        mask |= 1 << files[s]
                    if mask.bit_count() != k:
                        break
                else:
                    admissible = True
                    break
            if not admissible:
                continue
        total = 0
        surjective = True
        for v in range(n):
            dist = [-1] * k
            left = k
            for u in order[v]:
                j = files[u]
                if dist[j] < 0:
                    dist[j] = rtt_i[v][u]
                    left -= 1
                    if left == 0:
                        break
            if left:
                surjective = False
                break
            row = dem_i[v]
            for j in range(k):
                total += row[j] * dist[j]
        if not surjective:
            continue
        scored += 1
        if best is None or total < best:
            best = total
            raw_witnesses = [files]
            capped = False
        elif total == best:
            if len(raw_witnesses) < witness_cap:
                raw_witnesses.append(files)
            else:
                capped = True

    if best is None:
        return OracleResult(
            best_value=None,
            witnesses=(),
            search_space=space,
            scored=scored,
            mode=mode,
            graphs_truncated=graphs_truncated,
            witnesses_capped=False,
        )

    best_value = Fraction(best, denom)
    witnesses: list[Placement] = []
    seen = set()
    for files in raw_witnesses:
        # independent confirmation on the exact rational path
        report = eval_uncoded(work, files)
        assert report.average == best_value
        projected = expanded.project_placement(Placement.from_files(files))
        if projected.files_by_node not in seen:
            seen.add(projected.files_by_node)
            witnesses.append(projected)
    return OracleResult(
        best_value=best_value,
        witnesses=tuple(witnesses),
        search_space=space,
        scored=scored,
        mode=mode,
        graphs_truncated=graphs_truncated,
        witnesses_capped=capped,
    )


@dataclass(frozen=True)
class Verdict:
    status: str  # "verified" | "refuted" | "unverified"
    message: str
    expected_value: Fraction | None = None
    counterexample: Placement | None = None

    def to_dict(self) -> dict:
        return {
            "schema": "verdict/1",
            "status": self.status,
            "message": self.message,
            "expected": frac_str(self.expected_value)
            if self.expected_value is not None
            else None,
        }


def verify_plan(
    spec: NetworkSpec,
    report,
    budget: int = DEFAULT_ORACLE_BUDGET,
    nng_cap: int = 64,
) -> Verdict:
    """Check a planner result against the independent oracle.

    Confirms the claimed average matches a re-evaluation of the
    placement, equals the admissible-only brute-force minimum, and
    meets every node's worst-case floor.  Oracle budget overruns give
    an ``unverified`` verdict rather than an error.
    """
    try:
        oracle = brute_force_placement(
            spec, mode="admissible_only", budget=budget, nng_cap=nng_cap
        )
    except BudgetExceededError as exc:
        return Verdict(status="unverified", message=str(exc))

    infeasible = not hasattr(report, "placement")
    if infeasible:
        if oracle.best_value is None:
            return Verdict(
                status="verified",
                message="oracle agrees no admissible placement exists",
            )
        return Verdict(
            status="refuted",
            message=f"oracle found an admissible placement with average {frac_str(oracle.best_value)}",
            expected_value=oracle.best_value,
            counterexample=oracle.witnesses[0] if oracle.witnesses else None,
        )

    actual = eval_uncoded(spec, report.placement)
    if actual.average != report.value:
        return Verdict(
            status="refuted",
            message=(
                f"claimed average {frac_str(report.value)} but the placement "
                f"evaluates to {frac_str(actual.average)}"
            ),
            expected_value=actual.average,
            counterexample=report.placement,
        )
    if oracle.best_value is None:
        return Verdict(
            status="refuted",
            message="oracle found no admissible placement, yet the report has one",
        )
    if report.value != oracle.best_value:
        return Verdict(
            status="refuted",
            message=(
                f"oracle minimum is {frac_str(oracle.best_value)}, "
                f"report claims {frac_str(report.value)}"
            ),
            expected_value=oracle.best_value,
            counterexample=oracle.witnesses[0] if oracle.witnesses else None,
        )
    if not actual.meets_bounds():
        return Verdict(
            status="refuted",
            message="placement misses a worst-case floor",
            expected_value=oracle.best_value,
            counterexample=report.placement,
        )
    return Verdict(
        status="verified",
        message=f"average {frac_str(report.value)} matches the oracle minimum",
        expected_value=oracle.best_value,
    )
