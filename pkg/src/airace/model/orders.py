"""Order validation: every rule violation, never silent truncation."""

from __future__ import annotations

from .scenario import Scenario
from .state import GameState, allocatable_points
from .types import (
    TERM_KINDS,
    TERM_RND_CAP,
    TERM_SAFETY_FLOOR,
    Lane,
    NodeKind,
    PolicyAction,
    TeamKind,
    TurnOrders,
)

CYBER_MODES = ("monitor", "exfiltrate", "sabotage")

MAX_ACTIONS = 2


def _check_terms(terms, where: str, out: list[str]) -> None:
    if not isinstance(terms, list):
        out.append(f"{where}: terms must be a list")
        return
    for t in terms:
        if not isinstance(t, dict) or t.get("kind") not in TERM_KINDS:
            out.append(f"{where}: bad term {t!r}")
            continue
        if t["kind"] == TERM_RND_CAP:
            if t.get("lane") not in (Lane.LM.value, Lane.RL.value):
                out.append(f"{where}: rnd_cap needs a lane")
            if not isinstance(t.get("max_level"), int) or not 0 <= t.get("max_level", -1) <= 4:
                out.append(f"{where}: rnd_cap max_level must be 0..4")
        if t["kind"] == TERM_SAFETY_FLOOR:
            if not isinstance(t.get("min_nodes"), int) or t.get("min_nodes", -1) < 0:
                out.append(f"{where}: safety_floor min_nodes must be >= 0")


def _check_action(state: GameState, team: str, idx: int, action: PolicyAction, out: list[str]) -> None:
    sc = state.scenario
    where = f"action[{idx}] {action.kind}"
    if not sc.has_action(action.kind):
        out.append(f"{where}: unknown action kind")
        return
    spec = sc.action(action.kind)
    ts = state.team(team)
    if spec.states_only and ts.kind != TeamKind.STATE:
        out.append(f"{where}: restricted to states")
    for res, minimum in spec.requires.items():
        if getattr(ts.resources, res) < minimum:
            out.append(f"{where}: requires {res} >= {minimum}")

    params = action.params
    for name, ptype in spec.params.items():
        if name not in params:
            out.append(f"{where}: missing param {name!r}")
            continue
        value = params[name]
        if ptype == "team":
            if value not in state.teams:
                out.append(f"{where}: unknown team {value!r}")
        elif ptype == "node":
            if not sc.has_node(value):
                out.append(f"{where}: unknown node {value!r}")
        elif ptype == "int":
            if not isinstance(value, int) or value < 0:
                out.append(f"{where}: {name} must be a non-negative integer")
        elif ptype == "cyber_mode":
            if value not in CYBER_MODES:
                out.append(f"{where}: mode must be one of {CYBER_MODES}")
        elif ptype == "concern":
            if not any(c.id == value for c in state.concerns):
                out.append(f"{where}: unknown concern {value!r}")
        elif ptype == "treaty_id":
            if state.treaty(value) is None:
                out.append(f"{where}: unknown treaty {value!r}")
        elif ptype == "team_list":
            if not isinstance(value, list) or len(value) < 2:
                out.append(f"{where}: {name} must list at least 2 teams")
            else:
                for tid in value:
                    if tid not in state.teams:
                        out.append(f"{where}: unknown team {tid!r}")
        elif ptype == "terms":
            _check_terms(value, where, out)

    # kind-specific semantic rules
    if action.kind == "cyber_op" and params.get("target") == team:
        out.append(f"{where}: cannot target yourself")
    if action.kind in ("blockade", "strike") and params.get("target") == team:
        out.append(f"{where}: cannot target yourself")
    if action.kind in ("nationalise", "form_ppp", "develop_laws"):
        corp_id = params.get("corp") or params.get("partner")
        if corp_id in state.teams:
            corp = state.team(corp_id)
            me = state.team(team)
            if me.kind == TeamKind.STATE:
                if corp.kind != TeamKind.CORPORATION or corp.allegiance != team:
                    out.append(f"{where}: {corp_id} is not a corporation of your allegiance")
                elif action.kind == "nationalise" and corp.controlled:
                    out.append(f"{where}: {corp_id} is already controlled")
            else:
                # corporations may only name their own state in a PPP
                if action.kind != "form_ppp" or corp_id != me.allegiance:
                    out.append(f"{where}: restricted to states")
    if action.kind in ("propose_treaty", "sign_treaty"):
        parties = params.get("parties") or []
        if isinstance(parties, list) and team not in parties:
            out.append(f"{where}: proposer must be a party")
        rigor = params.get("rigor")
        if not isinstance(rigor, int) or not 0 <= rigor <= 5:
            out.append(f"{where}: rigor must be 0..5")
    if action.kind == "open_source":
        nid = params.get("node")
        if nid and sc.has_node(nid):
            node = sc.node(nid)
            if node.kind != NodeKind.BASIC:
                out.append(f"{where}: only basic nodes can be open-sourced")
            elif not state.completed(team, nid):
                out.append(f"{where}: you have not completed {nid}")
    if action.kind == "pool_defense":
        defender = params.get("defender")
        if defender == team:
            out.append(f"{where}: pool defense names another team as defender")


def validate_orders(state: GameState, orders: TurnOrders) -> list[str]:
    """Return every violated rule; an empty list means the orders commit."""
    out: list[str] = []
    if state.outcome is not None:
        out.append("game is over")
        return out
    if orders.team not in state.teams:
        out.append(f"unknown team {orders.team!r}")
        return out
    if state.team(orders.team).controlled:
        out.append(f"{orders.team} is controlled and submits no orders")
        return out
    expected = state.turn + 1
    if orders.turn != expected:
        out.append(f"stale orders: turn {orders.turn}, expected {expected}")

    if len(orders.actions) > MAX_ACTIONS:
        out.append(f"max {MAX_ACTIONS} policy actions")
    for idx, action in enumerate(orders.actions):
        _check_action(state, orders.team, idx, action, out)

    # aggregate catalog costs across the turn's actions
    totals: dict[str, int] = {}
    for action in orders.actions:
        if state.scenario.has_action(action.kind):
            for res, amt in state.scenario.action(action.kind).costs.items():
                totals[res] = totals.get(res, 0) + amt
    for res, amt in sorted(totals.items()):
        if getattr(state.team(orders.team).resources, res) < amt:
            out.append(f"insufficient {res} for committed actions ({amt} needed)")

    # R&D allocation
    budget = allocatable_points(state, orders.team, expected)
    total_alloc = 0
    for nid, pts in sorted(orders.rnd_allocation.items()):
        if not state.scenario.has_node(nid):
            out.append(f"allocation: unknown node {nid!r}")
            continue
        if not isinstance(pts, int) or pts < 0:
            out.append(f"allocation: {nid} must get a non-negative integer")
            continue
        total_alloc += pts
        if pts == 0:
            continue
        if state.completed(orders.team, nid):
            out.append(f"allocation: node {nid} already completed")
        elif not state.unlocked(orders.team, nid):
            out.append(f"allocation: locked node {nid}")
    if total_alloc > budget:
        out.append(f"over-allocation: {total_alloc} > {budget} usable points")

    if orders.deploy is not None:
        project = orders.deploy.project
        if not state.scenario.has_node(project) or state.scenario.node(project).kind != NodeKind.DEPLOYMENT:
            out.append(f"deploy: {project!r} is not a deployment project")

    for tid in orders.consent_rtai:
        if tid not in state.teams:
            out.append(f"consent: unknown team {tid!r}")
    for trid in orders.treaty_compliance:
        if state.treaty(trid) is None:
            out.append(f"compliance: unknown treaty {trid!r}")

    return out
