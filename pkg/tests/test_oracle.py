"""Independent brute-force checker."""

from __future__ import annotations

import dataclasses
import random
from fractions import Fraction

import pytest

import geoplan as gp
from conftest import random_spec

F = Fraction


def test_oracle_example_admissible(ex1):
    res = gp.brute_force_placement(ex1)
    assert res.mode == "admissible_only"
    assert res.best_value == F(13, 10)
    assert res.search_space == 81
    assert res.scored == 6
    assert [w.files_by_node for w in res.witnesses] == [((2,), (1,), (2,), (0,))]
    assert not res.graphs_truncated
    assert not res.witnesses_capped


def test_oracle_example_unrestricted(ex1):
    res = gp.brute_force_placement(ex1, mode="unrestricted")
    assert res.best_value == F(7, 10)
    # every surjection is scored
    assert res.scored == 36
    assert res.search_space == 81
    assert [w.files_by_node for w in res.witnesses] == [((0,), (1,), (2,), (2,))]


def test_unrestricted_never_loses_to_admissible():
    rng = random.Random(71)
    for _ in range(25):
        spec = random_spec(rng, max_nodes=5, max_files=3)
        adm = gp.brute_force_placement(spec)
        free = gp.brute_force_placement(spec, mode="unrestricted")
        assert free.best_value is not None
        if adm.best_value is not None:
            assert free.best_value <= adm.best_value
            assert free.scored >= adm.scored


def test_oracle_uniform_witnesses():
    res = gp.brute_force_placement(gp.example_instance_uniform())
    assert res.best_value == 2
    assert len(res.witnesses) == 6
    assert not res.witnesses_capped
    assert ((0,), (1,), (0,), (2,)) in {w.files_by_node for w in res.witnesses}


def test_oracle_witness_cap():
    res = gp.brute_force_placement(gp.example_instance_uniform(), witness_cap=2)
    assert res.best_value == 2
    assert len(res.witnesses) == 2
    assert res.witnesses_capped


def test_oracle_infeasible_instance():
    res = gp.brute_force_placement(gp.infeasible_instance())
    assert res.best_value is None
    assert res.scored == 0
    assert res.witnesses == ()


def test_oracle_budget_guard(ex1):
    with pytest.raises(gp.BudgetExceededError, match="81 placements"):
        gp.brute_force_placement(ex1, budget=10)


def test_oracle_rejects_unknown_mode(ex1):
    with pytest.raises(gp.InvalidInputError, match="bogus"):
        gp.brute_force_placement(ex1, mode="bogus")


def test_oracle_dict(ex1):
    data = gp.brute_force_placement(ex1).to_dict()
    assert data["schema"] == "oracle-result/1"
    assert data["best"] == "13/10"
    assert data["witnesses"] == 1
    assert data["search_space"] == 81
    assert data["scored"] == 6


def test_oracle_multi_capacity_projection(ex1):
    spec = gp.make_spec(ex1.node_ids, ex1.rtt, ex1.demands, 3, capacities=(2, 1, 1, 1))
    res = gp.brute_force_placement(spec)
    assert res.best_value == F(9, 10)
    assert ((0, 2), (1,), (2,), (0,)) in {w.files_by_node for w in res.witnesses}


def test_verify_accepts_honest_plan(ex1):
    verdict = gp.verify_plan(ex1, gp.plan(ex1))
    assert verdict.status == "verified"
    assert verdict.expected_value == F(13, 10)
    assert verdict.counterexample is None
    data = verdict.to_dict()
    assert data["schema"] == "verdict/1"
    assert data["expected"] == "13/10"


def test_verify_refutes_tampered_value(ex1):
    report = gp.plan(ex1)
    tampered = dataclasses.replace(report, value=report.value - F(1, 10))
    verdict = gp.verify_plan(ex1, tampered)
    assert verdict.status == "refuted"
    assert "evaluates to 13/10" in verdict.message
    assert verdict.expected_value == F(13, 10)


def test_verify_refutes_swapped_placement(ex1):
    report = gp.plan(ex1)
    tampered = dataclasses.replace(
        report, placement=gp.Placement(((0,), (1,), (2,), (0,)))
    )
    verdict = gp.verify_plan(ex1, tampered)
    assert verdict.status == "refuted"


def test_verify_refutes_suboptimal_claim(ex1):
    # a consistent report about a worse admissible placement
    placement = gp.Placement(((2,), (0,), (2,), (1,)))
    latency = gp.eval_uncoded(ex1, placement)
    report = gp.plan(ex1)
    tampered = dataclasses.replace(
        report,
        placement=placement,
        value=latency.average,
        latency=latency,
        file_map=gp.FileMap((2, 0, 1), latency.average),
    )
    assert latency.average > F(13, 10)
    verdict = gp.verify_plan(ex1, tampered)
    assert verdict.status == "refuted"
    assert verdict.expected_value == F(13, 10)
    assert verdict.counterexample is not None


def test_verify_confirms_infeasibility():
    bad = gp.infeasible_instance()
    verdict = gp.verify_plan(bad, gp.plan(bad))
    assert verdict.status == "verified"


def test_verify_unverified_when_over_budget(ex1):
    verdict = gp.verify_plan(ex1, gp.plan(ex1), budget=10)
    assert verdict.status == "unverified"


def test_verify_multi_capacity(ex1):
    spec = gp.make_spec(ex1.node_ids, ex1.rtt, ex1.demands, 3, capacities=(2, 1, 1, 1))
    assert gp.verify_plan(spec, gp.plan(spec)).status == "verified"


def test_oracle_matches_planner_on_random_instances():
    rng = random.Random(73)
    agreements = 0
    for _ in range(30):
        spec = random_spec(rng, max_nodes=6, max_files=3)
        report = gp.plan(spec)
        oracle = gp.brute_force_placement(spec)
        if isinstance(report, gp.InfeasiblePlan):
            assert oracle.best_value is None
            continue
        assert oracle.best_value == report.value
        assert gp.verify_plan(spec, report).status == "verified"
        agreements += 1
    assert agreements >= 10
