"""R&D accumulation, unlock chains, concerns, deployment and endgame."""

import pytest
from fractions import Fraction

from airace.engine import (
    apply_rnd_allocation,
    attempt_rtai_deployment,
    evaluate_end,
    resolve_turn,
    safety_score,
)
from airace.errors import PauseNotAnswered, PrerequisitesUnmet
from airace.model import (
    DeployDecision,
    GameOutcome,
    OutcomeKind,
    TurnOrders,
    new_game,
)
from airace.rng import TapeDice
from tests.conftest import empty_orders


def complete(state, team, *nodes):
    for nid in nodes:
        state.progress[team][nid].points = state.scenario.node(nid).cost
        state.progress[team][nid].completed = True


# ----------------------------------------------------------- rnd allocation


def test_points_accumulate_without_completion(state):
    s2, events = apply_rnd_allocation(state, "apex", {"lm1": 3})
    assert s2.progress["apex"]["lm1"].points == 3
    assert not s2.progress["apex"]["lm1"].completed
    assert not any(e.kind == "node_completed" for e in events)


def test_completion_unlocks_next_level(state):
    s2, events = apply_rnd_allocation(state, "apex", {"lm1": 10})
    assert s2.progress["apex"]["lm1"].completed
    assert any(e.kind == "node_completed" for e in events)
    assert s2.unlocked("apex", "lm2")
    assert not state.unlocked("apex", "lm2")  # original untouched


def test_application_completion_spawns_concern(state):
    complete(state, "apex", "lm1", "lm2")
    s2, events = apply_rnd_allocation(state, "apex", {"lm2_workflow_automation": 25})
    concerns = [c for c in s2.concerns if c.owner == "apex"]
    assert len(concerns) == 1
    assert concerns[0].severity == 1
    assert not concerns[0].mitigated
    spawn = next(e for e in events if e.kind == "concern_spawned")
    assert spawn.visibility == {"scope": "public"}  # concerns always public


def test_concern_spawns_exactly_once(state):
    complete(state, "apex", "lm1", "lm2")
    s2, _ = apply_rnd_allocation(state, "apex", {"lm2_workflow_automation": 25})
    # sabotage the node below cost, then re-complete: no second concern
    s2.progress["apex"]["lm2_workflow_automation"].points = 0
    s2.progress["apex"]["lm2_workflow_automation"].completed = False
    s3, _ = apply_rnd_allocation(s2, "apex", {"lm2_workflow_automation": 25})
    assert len([c for c in s3.concerns if c.owner == "apex"]) == 1


def test_node_effects_applied(state):
    complete(state, "apex", "lm1", "lm2")
    budget = state.team("apex").resources.budget
    s2, _ = apply_rnd_allocation(state, "apex", {"lm2_workflow_automation": 25})
    assert s2.team("apex").resources.budget == budget + 3


def test_capability_flags_granted(state):
    complete(state, "apex", "lm1", "lm2", "lm3")
    s2, _ = apply_rnd_allocation(state, "apex", {"lm3_auto_vuln_discovery": 60})
    assert "automated_vuln_discovery" in s2.team("apex").capabilities


def test_secret_completion_not_public(state):
    s2, events = apply_rnd_allocation(state, "apex", {"lm1": 10}, rnd_secret=True)
    assert s2.progress["apex"]["lm1"].completed
    assert not s2.progress["apex"]["lm1"].public
    done = next(e for e in events if e.kind == "node_completed")
    assert done.visibility == {"scope": "team", "teams": ["apex"]}


# ---------------------------------------------------------------- deployment


def test_deployment_requires_prereqs(state):
    with pytest.raises(PrerequisitesUnmet):
        attempt_rtai_deployment(state, "apex", "cais", TapeDice([3, 3]), decline_pause=True)


def test_deployment_requires_pause_decline(state):
    complete(state, "apex", "lm1", "lm2", "lm3", "lm4", "cais")
    with pytest.raises(PauseNotAnswered):
        attempt_rtai_deployment(state, "apex", "cais", TapeDice([3, 3]))


def test_zero_safety_threshold_11(state):
    complete(state, "apex", "lm1", "lm2", "lm3", "lm4", "cais")
    outcome = attempt_rtai_deployment(state, "apex", "cais", TapeDice([6, 5]), decline_pause=True)
    assert outcome.threshold == 11
    assert outcome.roll == 11
    assert outcome.aligned


def test_full_safety_threshold_3(state):
    complete(state, "apex", "lm1", "lm2", "lm3", "lm4", "cais")
    for n in state.scenario.safety_nodes():
        complete(state, "apex", n.id)
    assert safety_score(state, "apex") == Fraction(1)
    outcome = attempt_rtai_deployment(state, "apex", "cais", TapeDice([1, 1]), decline_pause=True)
    assert outcome.threshold == 3
    assert not outcome.aligned  # snake eyes still fails: never certain


def test_safety_score_is_bloc_shared(state):
    # apex and us share a bloc; their safety work counts once, jointly
    complete(state, "apex", "lm1", "lm1_interpretability")
    complete(state, "us", "lm1", "lm1_interpretability")
    complete(state, "us", "rl1", "rl1_reward_modeling")
    assert safety_score(state, "apex") == Fraction(2, 8)
    assert safety_score(state, "lotus") == Fraction(0)


def test_multiple_deployers_roll_independently(scenario):
    s = new_game(scenario, 1)
    for team in ("apex", "lotus"):
        complete(s, team, "lm1", "lm2", "lm3", "lm4", "cais")
    orders = empty_orders(s)
    orders["apex"].deploy = DeployDecision(project="cais", decline_pause=True)
    orders["lotus"].deploy = DeployDecision(project="cais", decline_pause=True)
    s2, events = resolve_turn(s, orders)
    rolls = [e for e in events if e.kind == "safety_rolled"]
    assert len(rolls) == 2
    assert {e.payload["team"] for e in rolls} == {"apex", "lotus"}
    assert len(s2.deployments) == 2


def test_pause_accepted_defers_deployment(scenario):
    s = new_game(scenario, 1)
    complete(s, "apex", "lm1", "lm2", "lm3", "lm4", "cais")
    orders = empty_orders(s)
    orders["apex"].deploy = DeployDecision(project="cais", decline_pause=False)
    s2, events = resolve_turn(s, orders)
    assert any(e.kind == "pause_offered" for e in events)
    assert any(e.kind == "pause_accepted" for e in events)
    assert not any(e.kind == "safety_rolled" for e in events)
    assert s2.outcome is None


def test_pause_declined_is_logged(scenario):
    s = new_game(scenario, 1)
    complete(s, "apex", "lm1", "lm2", "lm3", "lm4", "cais")
    orders = empty_orders(s)
    orders["apex"].deploy = DeployDecision(project="cais", decline_pause=True)
    _, events = resolve_turn(s, orders)
    assert any(e.kind == "pause_declined" for e in events)


# ----------------------------------------------------------------- endgame


def _deployed(state, team, aligned):
    from airace.model.types import DeploymentRecord

    state.deployments.append(
        DeploymentRecord(team=team, project="cais", turn=5, roll=11, threshold=11, aligned=aligned)
    )


def test_two_aligned_deployers_multipolar(state):
    _deployed(state, "apex", True)
    _deployed(state, "lotus", True)
    outcome = evaluate_end(state)
    assert outcome.kind == OutcomeKind.SAFE_MULTIPOLAR
    assert outcome.teams == ["apex", "lotus"]
    assert outcome.team_scores["apex"] > 0


def test_single_aligned_deployer_unipolar(state):
    _deployed(state, "apex", True)
    outcome = evaluate_end(state)
    assert outcome.kind == OutcomeKind.SAFE_UNIPOLAR
    assert outcome.teams == ["apex"]
    res = state.team("apex").resources
    assert outcome.team_scores["apex"] == res.soft + res.hard + res.cyber + 10


def test_any_misaligned_is_catastrophe(state):
    _deployed(state, "apex", True)
    _deployed(state, "lotus", False)
    outcome = evaluate_end(state)
    assert outcome.kind == OutcomeKind.MISALIGNED_CATASTROPHE
    assert outcome.teams == ["lotus"]
    assert all(score == 0 for score in outcome.team_scores.values())  # collective loss


def test_no_outcome_mid_game(state):
    assert evaluate_end(state) is None


def test_collapse_zeroes_scores(state):
    state.outcome = None
    state.stability = 0
    from airace.engine.turn import _scored

    outcome = _scored(state, GameOutcome(kind=OutcomeKind.COLLAPSE))
    assert all(v == 0 for v in outcome.team_scores.values())
