"""Action resolution: cyber ops, hard power, governance, economy."""

import pytest

from airace.engine import resolve_turn
from airace.engine.context import TurnContext
from airace.engine.actions import resolve_cyber_op, resolve_hard_power
from airace.model import PolicyAction, TurnOrders, new_game
from airace.rng import TapeDice
from tests.conftest import empty_orders


def make_ctx(state, dice=None, orders=None):
    work = state.copy()
    return TurnContext(
        state=work,
        orders=orders or {},
        dice=dice or TapeDice([]),
        turn=state.turn + 1,
    )


def orders_with(state, team, *actions, **kw):
    orders = empty_orders(state)
    orders[team] = TurnOrders(team=team, turn=state.turn + 1, actions=list(actions), **kw)
    return orders


# ------------------------------------------------------------------- cyber


def test_exfiltrate_rises_to_target_level(state):
    # the classic model-weight theft: 12/80 vs 60/80 -> 60/80
    state.progress["us"]["lm4"].points = 12
    state.progress["prc"]["lm4"].points = 60
    ctx = make_ctx(state, TapeDice([6, 6, 1, 1]))  # attacker 12+cyber vs low defense
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "exfiltrate", "node": "lm4"})
    resolve_cyber_op(ctx, "us", action)
    assert ctx.state.progress["us"]["lm4"].points == 60
    assert ctx.state.progress["prc"]["lm4"].points == 60  # target untouched


def test_exfiltrate_never_decreases_actor(state):
    state.progress["us"]["lm4"].points = 60
    state.progress["prc"]["lm4"].points = 12
    ctx = make_ctx(state, TapeDice([6, 6, 1, 1]))
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "exfiltrate", "node": "lm4"})
    resolve_cyber_op(ctx, "us", action)
    assert ctx.state.progress["us"]["lm4"].points == 60


def test_pooled_defense_raises_defender_attr(state):
    # target cyber 4 + ally contributes 3 -> defender attr 7
    state.team("prc").resources.cyber = 4
    state.team("us").resources.cyber = 6
    state.pooled_defense["prc"] = 3
    ctx = make_ctx(state, TapeDice([3, 3, 3, 3]))  # equal rolls: totals 6+6 vs 6+7
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "monitor", "node": "lm1"})
    resolve_cyber_op(ctx, "us", action)
    ev = next(e for e in ctx.events if e.kind == "cyber_op_resolved")
    assert ev.payload["check"]["defender_total"] == 13
    assert not ev.payload["check"]["success"]


def test_sabotage_floors_at_zero(state):
    state.progress["prc"]["lm2"].points = 4
    state.team("us").resources.cyber = 10
    state.team("prc").resources.cyber = 5
    ctx = make_ctx(state, TapeDice([6, 6, 3, 3]))  # margin 22 - 11 = wait: 12+10 vs 6+5 = 11
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "sabotage", "node": "lm2"})
    resolve_cyber_op(ctx, "us", action)
    assert ctx.state.progress["prc"]["lm2"].points == 0


def test_sabotage_near_detection_attribution(state):
    state.team("us").resources.cyber = 5
    state.team("prc").resources.cyber = 5
    state.progress["prc"]["lm1"].points = 8
    ctx = make_ctx(state, TapeDice([4, 4, 3, 3]))  # margin +2: success, near-detection
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "sabotage", "node": "lm1"})
    resolve_cyber_op(ctx, "us", action)
    assert any(e.kind == "cyber_attribution" and e.visibility["scope"] == "public" for e in ctx.events)


def test_failed_op_attribution_on_bad_margin(state):
    state.team("us").resources.cyber = 2
    state.team("prc").resources.cyber = 8
    ctx = make_ctx(state, TapeDice([2, 2, 5, 4]))  # 4+2 vs 9+8: margin -11
    action = PolicyAction("cyber_op", {"target": "prc", "mode": "monitor", "node": "lm1"})
    resolve_cyber_op(ctx, "us", action)
    kinds = [e.kind for e in ctx.events]
    assert "cyber_attribution" in kinds
    fail = next(e for e in ctx.events if e.kind == "cyber_op_resolved")
    assert fail.visibility == {"scope": "team", "teams": ["us"]}


def test_monitor_gains_intel(state):
    state.progress["lotus"]["lm2"].points = 9
    state.team("us").resources.cyber = 10
    state.team("lotus").resources.cyber = 1
    ctx = make_ctx(state, TapeDice([6, 6, 1, 1]))
    action = PolicyAction("cyber_op", {"target": "lotus", "mode": "monitor", "node": "lm2"})
    resolve_cyber_op(ctx, "us", action)
    assert len(ctx.state.intel) == 1
    entry = ctx.state.intel[0]
    assert (entry.owner, entry.target, entry.node, entry.points) == ("us", "lotus", "lm2", 9)


# -------------------------------------------------------------- hard power


def test_blockade_halves_import_dependent_compute(scenario):
    s = new_game(scenario, 1)
    s.team("prc").resources.hard = 10
    # apex is import-dependent with compute 84; force compute 9 for the example
    s.team("apex").resources.compute = 9
    ctx = make_ctx(s, TapeDice([6, 6, 1, 1]))
    resolve_hard_power(ctx, "prc", PolicyAction("blockade", {"target": "us"}))
    ev = next(e for e in ctx.events if e.kind == "blockade_resolved")
    assert ev.payload["success"]
    assert ctx.state.team("apex").compute_halved_until == ctx.turn + 2
    assert ctx.state.effective_compute("apex", ctx.turn + 1) == 4  # 9 // 2
    assert ctx.state.effective_compute("apex", ctx.turn + 3) == 9  # expires


def test_blockade_margin_5_captures_compute(scenario):
    s = new_game(scenario, 1)
    s.team("prc").resources.hard = 12
    before = s.team("prc").resources.compute
    ctx = make_ctx(s, TapeDice([6, 6, 1, 1]))  # totals 24 vs us bloc hard 8 + 2 = 10+... margin >= 5
    resolve_hard_power(ctx, "prc", PolicyAction("blockade", {"target": "us"}))
    ev = next(e for e in ctx.events if e.kind == "blockade_resolved")
    assert ev.payload["check"]["margin"] >= 5
    assert ctx.state.team("prc").resources.compute == before + 2


def test_blockade_failure_only_pressure(scenario):
    s = new_game(scenario, 1)
    s.team("prc").resources.hard = 3
    compute_before = {t: s.team(t).resources.compute for t in s.teams}
    ctx = make_ctx(s, TapeDice([1, 1, 6, 6]))
    resolve_hard_power(ctx, "prc", PolicyAction("blockade", {"target": "us"}))
    for t in s.teams:
        assert ctx.state.team(t).resources.compute == compute_before[t]
        assert ctx.state.team(t).compute_halved_until == 0
    assert ctx.state.pressure_markers == 1
    assert ctx.state.stability == s.stability  # the -1 lands at the stability phase


def test_blockade_costs_hard_power(scenario):
    s = new_game(scenario, 1)
    s.team("prc").resources.hard = 7
    ctx = make_ctx(s, TapeDice([1, 1, 6, 6]))
    resolve_hard_power(ctx, "prc", PolicyAction("blockade", {"target": "us"}))
    assert ctx.state.team("prc").resources.hard == 4


def test_strike_drains_compute_and_talent(scenario):
    s = new_game(scenario, 1)
    s.team("us").resources.hard = 12
    ctx = make_ctx(s, TapeDice([6, 6, 1, 1]))  # margin (12+12)-(2+hard bloc)
    resolve_hard_power(ctx, "us", PolicyAction("strike", {"target": "lotus"}))
    ev = next(e for e in ctx.events if e.kind == "strike_resolved")
    assert ev.payload["success"]
    losses = ev.payload["losses"]
    assert losses == ev.payload["check"]["margin"] // 2
    assert ctx.state.team("lotus").resources.compute == 84 - losses
    assert ctx.state.team("lotus").resources.talent == 84 - losses


# -------------------------------------------------------------- governance


def test_non_election_state_nationalises_automatically(scenario):
    s = new_game(scenario, 1)
    orders = orders_with(s, "prc", PolicyAction("nationalise", {"corp": "lotus"}))
    s2, events = resolve_turn(s, orders)
    ev = next(e for e in events if e.kind == "nationalisation")
    assert ev.payload["success"] and ev.payload["checks"] == {"automatic": True}
    assert s2.team("lotus").controlled_by == ["prc"]
    assert "lotus" not in s2.live_teams()


def test_election_state_nationalisation_needs_both_checks(scenario):
    s = new_game(scenario, 1)
    s.stability = 3  # internal check attr: 3 - 7 = -4, near-certain failure
    ctx = make_ctx(
        s,
        TapeDice([3, 3, 6, 6]),  # internal: 6 + (-4) = 2 vs 12: fails; no second check rolled
        orders={},
    )
    from airace.engine.actions import resolve_governance_phase

    ctx.orders = {
        "us": TurnOrders(
            team="us", turn=1, actions=[PolicyAction("nationalise", {"corp": "apex"})]
        )
    }
    resolve_governance_phase(ctx)
    ev = next(e for e in ctx.events if e.kind == "nationalisation")
    assert not ev.payload["success"]
    assert "legal" not in ev.payload["checks"]
    assert ctx.state.team("apex").controlled_by == []


def test_election_state_nationalisation_can_succeed(scenario):
    s = new_game(scenario, 1)
    s.stability = 10
    s.team("us").resources.soft = 20
    s.team("apex").resources.soft = 0
    ctx = make_ctx(s, TapeDice([6, 6, 1, 1, 6, 6, 1, 1]))
    from airace.engine.actions import resolve_governance_phase

    ctx.orders = {
        "us": TurnOrders(
            team="us", turn=1, actions=[PolicyAction("nationalise", {"corp": "apex"})]
        )
    }
    resolve_governance_phase(ctx)
    ev = next(e for e in ctx.events if e.kind == "nationalisation")
    assert ev.payload["success"]
    assert ctx.state.team("apex").controlled_by == ["us"]


def test_nationalisation_absorbs_progress(scenario):
    s = new_game(scenario, 1)
    s.progress["lotus"]["lm1"].points = 10
    s.progress["lotus"]["lm1"].completed = True
    s.progress["lotus"]["lm2"].points = 7
    orders = orders_with(s, "prc", PolicyAction("nationalise", {"corp": "lotus"}))
    s2, _ = resolve_turn(s, orders)
    assert s2.progress["prc"]["lm1"].completed
    assert s2.progress["prc"]["lm2"].points == 7


def test_controller_gains_controlled_capacity(scenario):
    from airace.model import allocatable_points

    s = new_game(scenario, 1)
    s.team("lotus").controlled_by.append("prc")
    own = 12  # min((12+12)/2, 14)
    corp = 84
    assert allocatable_points(s, "prc") == own + corp
    assert allocatable_points(s, "lotus") == 0


def test_ppp_needs_mutual_consent_and_pools_into_corp(scenario):
    from airace.model import allocatable_points

    s = new_game(scenario, 1)
    orders = empty_orders(s)
    orders["us"] = TurnOrders(
        team="us", turn=1, actions=[PolicyAction("form_ppp", {"partner": "apex"})]
    )
    orders["apex"] = TurnOrders(
        team="apex", turn=1, actions=[PolicyAction("form_ppp", {"partner": "us"})]
    )
    s2, events = resolve_turn(s, orders)
    assert any(e.kind == "ppp_formed" for e in events)
    assert s2.team("us").ppp_partner == "apex"
    assert s2.team("apex").ppp_partner == "us"
    # capacity flows state -> corporation; the corp keeps the deploy decision
    assert allocatable_points(s2, "apex") == 84 + 12
    assert allocatable_points(s2, "us") == 0
    assert "apex" in s2.live_teams()


def test_ppp_one_sided_fizzles(scenario):
    s = new_game(scenario, 1)
    orders = orders_with(s, "us", PolicyAction("form_ppp", {"partner": "apex"}))
    s2, events = resolve_turn(s, orders)
    assert not any(e.kind == "ppp_formed" for e in events)
    assert s2.team("us").ppp_partner is None


def test_mitigate_costs_budget_and_sets_flag(scenario):
    from airace.model.types import Concern

    s = new_game(scenario, 1)
    s.concerns.append(Concern(id="c1", source_node="lm2_workflow_automation", owner="apex", severity=1))
    budget = s.team("us").resources.budget
    orders = orders_with(s, "us", PolicyAction("mitigate", {"concern": "c1"}))
    s2, events = resolve_turn(s, orders)
    assert s2.concerns[0].mitigated
    assert s2.team("us").resources.budget == budget + s.team("us").income - 2
    assert any(e.kind == "concern_mitigated" for e in events)


def test_mitigation_is_monotone(scenario):
    from airace.model.types import Concern

    s = new_game(scenario, 1)
    s.concerns.append(Concern(id="c1", source_node="lm1_mass_persuasion", owner="apex", severity=1, mitigated=True))
    orders = orders_with(s, "us", PolicyAction("mitigate", {"concern": "c1"}))
    s2, events = resolve_turn(s, orders)
    assert s2.concerns[0].mitigated  # never un-mitigated
    assert any(e.kind == "action_failed" for e in events)


def test_regulate_penalises_corps_next_turn(scenario):
    from airace.model import allocatable_points
    from airace.model.types import Concern

    s = new_game(scenario, 1)
    s.concerns.append(Concern(id="c1", source_node="lm1_mass_persuasion", owner="apex", severity=1))
    orders = orders_with(s, "us", PolicyAction("regulate"))
    s2, _ = resolve_turn(s, orders)
    assert s2.team("apex").rnd_penalty == 1
    assert allocatable_points(s2, "apex") == 83
    assert s2.concerns[0].mitigated  # one concern per corp mitigated
    # penalty clears after the next turn
    s3, _ = resolve_turn(s2, empty_orders(s2))
    assert s3.team("apex").rnd_penalty == 0


# ----------------------------------------------------------------- economy


def test_invest_converts_budget(scenario):
    s = new_game(scenario, 1)
    orders = orders_with(s, "us", PolicyAction("invest_compute"))
    s2, _ = resolve_turn(s, orders)
    assert s2.team("us").resources.compute == 14 + 4
    assert s2.team("us").resources.budget == 14 + 5 - 2  # start + income - cost


def test_poach_talent_moves_talent_on_success(scenario):
    s = new_game(scenario, 1)
    s.team("us").resources.soft = 20
    s.team("lotus").resources.soft = 0
    us_talent = s.team("us").resources.talent
    lotus_talent = s.team("lotus").resources.talent
    orders = orders_with(s, "us", PolicyAction("poach_talent", {"target": "lotus"}))
    s2, events = resolve_turn(s, orders)
    ev = next(e for e in events if e.kind == "talent_poached")
    if ev.payload["success"]:  # near-certain with +20 soft edge
        assert s2.team("us").resources.talent == us_talent + 2
        assert s2.team("lotus").resources.talent == lotus_talent - 2


def test_fund_safety_grants_points(scenario):
    s = new_game(scenario, 1)
    s.progress["us"]["lm1"].points = 10
    s.progress["us"]["lm1"].completed = True
    orders = orders_with(s, "us", PolicyAction("fund_safety", {"recipient": "us"}))
    s2, _ = resolve_turn(s, orders)
    assert s2.progress["us"]["lm1_interpretability"].points == 3


def test_develop_laws_pays_corp_and_adds_progress(scenario):
    s = new_game(scenario, 1)
    for nid in ("rl1", "rl2", "rl3"):
        s.progress["apex"][nid].points = s.scenario.node(nid).cost
        s.progress["apex"][nid].completed = True
    corp_budget = s.team("apex").resources.budget
    orders = orders_with(s, "us", PolicyAction("develop_laws", {"corp": "apex"}))
    s2, _ = resolve_turn(s, orders)
    assert s2.progress["apex"]["rl3_autonomous_weapons"].points == 4
    assert s2.team("apex").resources.budget == corp_budget + s.team("apex").income + 2


def test_open_source_publishes_to_all(scenario):
    s = new_game(scenario, 1)
    s.progress["apex"]["lm1"].points = 10
    s.progress["apex"]["lm1"].completed = True
    s.progress["apex"]["lm1"].public = False
    orders = orders_with(s, "apex", PolicyAction("open_source", {"node": "lm1"}))
    s2, _ = resolve_turn(s, orders)
    for t in s2.teams:
        assert s2.progress[t]["lm1"].completed
        assert s2.progress[t]["lm1"].public
