"""Scripted policies encoding the recurring player strategies.

Every builtin policy is deterministic given (view, memory, rng stream) and
must produce orders that pass validate_orders on any reachable view.
"""

from __future__ import annotations

from .errors import UnknownAgent
from .model.types import (
    DeployDecision,
    Lane,
    NodeKind,
    PolicyAction,
    TeamKind,
    TurnOrders,
    Visibility,
)
from .model.views import KnowledgeView
from .rng import GameRng

SAFETY_FLOOR = 3  # treaty term the cooperative policies propose
TREATY_RIGOR = 5
HAWK_LEVEL_DEFICIT = 1  # completed-basic-level lead that triggers aggression
SPYMASTER_CYBER_TARGET = 8


class AgentPolicy:
    """Base policy. Subclasses implement decide()."""

    id: str = "base"

    def decide(self, view: KnowledgeView, memory: dict, rng: GameRng) -> TurnOrders:
        raise NotImplementedError


# ----------------------------------------------------------- view helpers


def _me(view: KnowledgeView) -> dict:
    return view.teams[view.viewer]


def _my_points(view: KnowledgeView, node_id: str) -> int:
    entry = view.progress[view.viewer].get(node_id, {})
    return int(entry.get("points", 0))


def _my_completed(view: KnowledgeView, node_id: str) -> bool:
    return bool(view.progress[view.viewer].get(node_id, {}).get("completed", False))


def _unlocked(view: KnowledgeView, scenario, node_id: str) -> bool:
    return all(_my_completed(view, p) for p in scenario.node(node_id).prereqs)


def _fastest_lane(view: KnowledgeView, scenario) -> Lane:
    remaining = {}
    for lane in (Lane.LM, Lane.RL):
        rem = 0
        for level in range(1, 5):
            node = scenario.basic_node(lane, level)
            if not _my_completed(view, node.id):
                rem += node.cost - _my_points(view, node.id)
        remaining[lane] = rem
    if remaining[Lane.RL] < remaining[Lane.LM]:
        return Lane.RL
    return Lane.LM


def _next_basic(view: KnowledgeView, scenario, lane: Lane):
    for level in range(1, 5):
        node = scenario.basic_node(lane, level)
        if not _my_completed(view, node.id):
            if _unlocked(view, scenario, node.id):
                return node
            return None  # lower level incomplete: everything above is locked
    return None


def _completed_any_application(view: KnowledgeView, scenario) -> bool:
    return any(
        n.kind == NodeKind.APPLICATION and _my_completed(view, n.id) for n in scenario.tech_tree
    )


def _public_completed(view: KnowledgeView, team: str, node_id: str) -> bool:
    if team == view.viewer:
        return _my_completed(view, node_id)
    return bool(view.progress.get(team, {}).get(node_id, {}).get("completed", False))


def _team_level(view: KnowledgeView, scenario, team: str) -> int:
    """Highest basic level a team is known to have completed."""
    best = 0
    for node in scenario.tech_tree:
        if node.kind == NodeKind.BASIC and _public_completed(view, team, node.id):
            best = max(best, node.level)
    return best


def _bloc_safety_count(view: KnowledgeView, scenario) -> int:
    me = _me(view)
    anchor = view.viewer if me["kind"] == "state" else me["allegiance"]
    bloc = {
        t
        for t, td in view.teams.items()
        if t == anchor or td.get("allegiance") == anchor
    }
    done = set()
    for node in scenario.tech_tree:
        if node.kind != NodeKind.SAFETY:
            continue
        for t in bloc:
            if _public_completed(view, t, node.id):
                done.add(node.id)
    return len(done)


def _safety_floor_required(view: KnowledgeView) -> int:
    """Highest safety floor among active treaties the viewer is party to."""
    floor = 0
    for treaty in view.treaties:
        if treaty["status"] != "active" or view.viewer not in treaty["parties"]:
            continue
        for term in treaty["terms"]:
            if term["kind"] == "safety_floor":
                floor = max(floor, term["min_nodes"])
    return floor


def _deploy_project(scenario, lane: Lane) -> str:
    return "cais" if lane == Lane.LM else "agi"


def _affordable(view: KnowledgeView, scenario, actions: list[PolicyAction]) -> list[PolicyAction]:
    """Drop trailing actions the budget cannot cover."""
    res = dict(_me(view)["resources"])
    out = []
    for action in actions:
        spec = scenario.action(action.kind)
        if any(res.get(r, 0) < m for r, m in spec.requires.items()):
            continue
        if any(res.get(r, 0) < c for r, c in spec.costs.items()):
            continue
        for r, c in spec.costs.items():
            res[r] = res.get(r, 0) - c
        out.append(action)
    return out[:2]


# ---------------------------------------------------------------- policies


class IdlePolicy(AgentPolicy):
    id = "idle"

    def decide(self, view, memory, rng):
        return TurnOrders.empty(view.viewer, view.turn + 1)


class RacerPolicy(AgentPolicy):
    """All-out race up the fastest basic lane; one opportunistic commercial
    application en route, deployment at the first possible moment, never a
    thought for mitigation."""

    id = "racer"

    def decide(self, view, memory, rng):
        scenario = memory["scenario"]
        lane = _fastest_lane(view, scenario)
        budget = view.allocatable or 0
        alloc: dict[str, int] = {}

        basic = _next_basic(view, scenario, lane)
        if basic is not None and budget > 0:
            pts = min(budget, basic.cost - _my_points(view, basic.id))
            if pts > 0:
                alloc[basic.id] = pts
                budget -= pts

        # at most one application, only if it finishes this turn
        if not _completed_any_application(view, scenario) and budget > 0:
            apps = sorted(
                (
                    n
                    for n in scenario.tech_tree
                    if n.kind == NodeKind.APPLICATION
                    and n.lane == lane
                    and not _my_completed(view, n.id)
                    and _unlocked(view, scenario, n.id)
                ),
                key=lambda n: n.cost - _my_points(view, n.id),
            )
            if apps:
                need = apps[0].cost - _my_points(view, apps[0].id)
                if 0 < need <= budget:
                    alloc[apps[0].id] = need
                    budget -= need

        deploy = None
        lane_top = scenario.basic_node(lane, 4)
        if _my_completed(view, lane_top.id):
            project = _deploy_project(scenario, lane)
            if _my_completed(view, project):
                deploy = DeployDecision(project=project, decline_pause=True)
            elif budget > 0 and _unlocked(view, scenario, project):
                pts = min(budget, scenario.node(project).cost - _my_points(view, project))
                if pts > 0:
                    alloc[project] = pts
                    budget -= pts
                if _my_points(view, project) + alloc.get(project, 0) >= scenario.node(project).cost:
                    deploy = DeployDecision(project=project, decline_pause=True)

        invest_other = "invest_talent" if (view.turn % 2 == 0) else "invest_data"
        actions = _affordable(
            view, scenario, [PolicyAction("invest_compute"), PolicyAction(invest_other)]
        )
        return TurnOrders(
            team=view.viewer,
            turn=view.turn + 1,
            actions=actions,
            rnd_allocation=alloc,
            deploy=deploy,
        )


class TreatySeekerPolicy(AgentPolicy):
    """Sign a maximum-rigor treaty on turn one, comply forever, research
    safety alongside capability and deploy only past the safety floor."""

    id = "treaty_seeker"

    def _wanted_proposal(self, view) -> dict:
        return {
            "parties": sorted(view.teams),
            "terms": [
                {"kind": "safety_floor", "min_nodes": SAFETY_FLOOR},
                {"kind": "autonomy_guarantee"},
            ],
            "rigor": TREATY_RIGOR,
        }

    def _has_treaty(self, view) -> bool:
        return any(
            t["status"] in ("active", "contested") and view.viewer in t["parties"]
            for t in view.treaties
        )

    def decide(self, view, memory, rng):
        scenario = memory["scenario"]
        me = _me(view)
        is_state = me["kind"] == "state"
        lane = Lane.RL if is_state else Lane.LM
        budget = view.allocatable or 0
        alloc: dict[str, int] = {}

        def grab_safety() -> None:
            nonlocal budget
            for node in sorted(
                scenario.safety_nodes(), key=lambda n: (n.level, n.lane.value, n.id)
            ):
                if budget <= 0:
                    break
                if _my_completed(view, node.id) or not _unlocked(view, scenario, node.id):
                    continue
                pts = min(budget, node.cost - _my_points(view, node.id))
                if pts > 0:
                    alloc[node.id] = alloc.get(node.id, 0) + pts
                    budget -= pts

        if is_state:
            grab_safety()
        basic = _next_basic(view, scenario, lane)
        if basic is not None and budget > 0:
            pts = min(budget, basic.cost - _my_points(view, basic.id))
            if pts > 0:
                alloc[basic.id] = pts
                budget -= pts
        if not is_state:
            grab_safety()

        deploy = None
        lane_top = scenario.basic_node(lane, 4)
        floor = max(_safety_floor_required(view), SAFETY_FLOOR)
        if _my_completed(view, lane_top.id) and _bloc_safety_count(view, scenario) >= floor:
            project = _deploy_project(scenario, lane)
            if _my_completed(view, project):
                deploy = DeployDecision(project=project, decline_pause=True)
            elif budget > 0 and _unlocked(view, scenario, project):
                pts = min(budget, scenario.node(project).cost - _my_points(view, project))
                if pts > 0:
                    alloc[project] = pts
                    budget -= pts
                if _my_points(view, project) + alloc.get(project, 0) >= scenario.node(project).cost:
                    deploy = DeployDecision(project=project, decline_pause=True)

        wanted: list[PolicyAction] = []
        if not self._has_treaty(view):
            proposal = self._wanted_proposal(view)
            wanted.append(PolicyAction("propose_treaty", dict(proposal)))
            wanted.append(PolicyAction("sign_treaty", dict(proposal)))
        else:
            contested = [
                t
                for t in view.treaties
                if t["status"] == "contested" and view.viewer in t["parties"]
            ]
            if contested:
                wanted.append(PolicyAction("ratify_treaty", {"treaty": contested[0]["id"]}))
            if is_state:
                fundable = any(
                    not _my_completed(view, n.id) and _unlocked(view, scenario, n.id)
                    for n in scenario.safety_nodes()
                )
                if fundable:
                    wanted.append(PolicyAction("fund_safety", {"recipient": view.viewer}))
            wanted.append(PolicyAction("invest_compute"))
            wanted.append(PolicyAction("invest_talent" if view.turn % 2 == 0 else "invest_data"))

        return TurnOrders(
            team=view.viewer,
            turn=view.turn + 1,
            actions=_affordable(view, scenario, wanted),
            rnd_allocation=alloc,
            deploy=deploy,
        )


class SafetyChampionPolicy(AgentPolicy):
    """Safety research first, mitigation of whatever concerns exist, and a
    deployment only behind a comfortable safety margin."""

    id = "safety_champion"

    def decide(self, view, memory, rng):
        scenario = memory["scenario"]
        me = _me(view)
        lane = Lane.RL if me["kind"] == "state" else Lane.LM
        budget = view.allocatable or 0
        alloc: dict[str, int] = {}

        for node in sorted(scenario.safety_nodes(), key=lambda n: (n.level, n.lane.value, n.id)):
            if budget <= 0:
                break
            if _my_completed(view, node.id) or not _unlocked(view, scenario, node.id):
                continue
            pts = min(budget, node.cost - _my_points(view, node.id))
            if pts > 0:
                alloc[node.id] = pts
                budget -= pts
        basic = _next_basic(view, scenario, lane)
        if basic is not None and budget > 0:
            pts = min(budget, basic.cost - _my_points(view, basic.id))
            if pts > 0:
                alloc[basic.id] = pts
                budget -= pts

        deploy = None
        lane_top = scenario.basic_node(lane, 4)
        threshold = max(1, len(scenario.safety_nodes()) // 2)
        if (
            _my_completed(view, lane_top.id)
            and _my_completed(view, _deploy_project(scenario, lane))
            and _bloc_safety_count(view, scenario) >= threshold
        ):
            deploy = DeployDecision(project=_deploy_project(scenario, lane), decline_pause=True)

        wanted: list[PolicyAction] = []
        open_concerns = [c for c in view.concerns if not c["mitigated"]]
        if open_concerns:
            wanted.append(PolicyAction("mitigate", {"concern": open_concerns[0]["id"]}))
        fundable = any(
            not _my_completed(view, n.id) and _unlocked(view, scenario, n.id)
            for n in scenario.safety_nodes()
        )
        if fundable:
            wanted.append(PolicyAction("fund_safety", {"recipient": view.viewer}))
        wanted.append(PolicyAction("invest_compute"))

        return TurnOrders(
            team=view.viewer,
            turn=view.turn + 1,
            actions=_affordable(view, scenario, wanted),
            rnd_allocation=alloc,
            deploy=deploy,
        )


class SpymasterPolicy(AgentPolicy):
    """Build cyber power, then watch and rob the progress leader."""

    id = "spymaster"

    def decide(self, view, memory, rng):
        scenario = memory["scenario"]
        me = _me(view)
        lane = _fastest_lane(view, scenario)
        budget = view.allocatable or 0
        alloc: dict[str, int] = {}
        basic = _next_basic(view, scenario, lane)
        if basic is not None and budget > 0:
            pts = min(budget, basic.cost - _my_points(view, basic.id))
            if pts > 0:
                alloc[basic.id] = pts

        others = sorted(t for t in view.teams if t != view.viewer)
        leader = max(others, key=lambda t: (_team_level(view, scenario, t), t)) if others else None

        wanted: list[PolicyAction] = []
        cyber = me["resources"]["cyber"]
        if leader is not None and cyber >= 1:
            steal_target = None
            for node in sorted(
                (n for n in scenario.tech_tree if n.kind == NodeKind.BASIC),
                key=lambda n: -n.level,
            ):
                if _public_completed(view, leader, node.id) and not _my_completed(view, node.id):
                    steal_target = node.id
                    break
            if steal_target is not None:
                wanted.append(
                    PolicyAction(
                        "cyber_op",
                        {"target": leader, "mode": "exfiltrate", "node": steal_target},
                        visibility=Visibility.SECRET,
                    )
                )
            elif cyber >= SPYMASTER_CYBER_TARGET:
                watch = _next_basic(view, scenario, lane)
                node_id = watch.id if watch is not None else scenario.basic_node(lane, 4).id
                wanted.append(
                    PolicyAction(
                        "cyber_op",
                        {"target": leader, "mode": "monitor", "node": node_id},
                        visibility=Visibility.SECRET,
                    )
                )
        wanted.append(PolicyAction("build_cyber"))
        wanted.append(PolicyAction("invest_compute"))

        deploy = None
        lane_top = scenario.basic_node(lane, 4)
        project = _deploy_project(scenario, lane)
        if _my_completed(view, lane_top.id) and _my_completed(view, project):
            deploy = DeployDecision(project=project, decline_pause=True)

        return TurnOrders(
            team=view.viewer,
            turn=view.turn + 1,
            actions=_affordable(view, scenario, wanted),
            rnd_allocation=alloc,
            deploy=deploy,
        )


class HawkPolicy(AgentPolicy):
    """Plays the cooperative game until an opponent pulls a level ahead,
    then turns on the front-runner."""

    id = "hawk"

    def __init__(self):
        self._peaceful = TreatySeekerPolicy()

    def decide(self, view, memory, rng):
        scenario = memory["scenario"]
        me = _me(view)
        my_level = _team_level(view, scenario, view.viewer)
        others = sorted(t for t in view.teams if t != view.viewer)
        leader, lead_level = None, -1
        for t in others:
            lvl = _team_level(view, scenario, t)
            if lvl > lead_level:
                leader, lead_level = t, lvl

        if leader is None or lead_level - my_level < HAWK_LEVEL_DEFICIT:
            return self._peaceful.decide(view, memory, rng)

        orders = self._peaceful.decide(view, memory, rng)
        wanted: list[PolicyAction] = []
        sabotage_node = None
        for node in sorted(
            (n for n in scenario.tech_tree if n.kind == NodeKind.BASIC),
            key=lambda n: -n.level,
        ):
            if _public_completed(view, leader, node.id):
                sabotage_node = node.id
                break
        if sabotage_node is not None and me["resources"]["cyber"] >= 1:
            wanted.append(
                PolicyAction(
                    "cyber_op",
                    {"target": leader, "mode": "sabotage", "node": sabotage_node},
                    visibility=Visibility.SECRET,
                )
            )
        if me["kind"] == "state" and me["resources"]["hard"] >= 3:
            target_state = view.teams[leader].get("allegiance") or leader
            if view.teams[target_state]["kind"] != "state":
                target_state = leader
            if target_state != view.viewer:
                wanted.append(PolicyAction("blockade", {"target": target_state}))
        wanted.append(PolicyAction("build_cyber"))

        # defect from anything stopping the counter-race
        compliance = {
            t["id"]: False
            for t in view.treaties
            if t["status"] == "active" and view.viewer in t["parties"]
        }
        orders.actions = _affordable(view, scenario, wanted)
        orders.treaty_compliance = compliance
        return orders


_BUILTINS = {
    "racer": RacerPolicy,
    "safety_champion": SafetyChampionPolicy,
    "safety": SafetyChampionPolicy,
    "spymaster": SpymasterPolicy,
    "spy": SpymasterPolicy,
    "treaty_seeker": TreatySeekerPolicy,
    "treaty": TreatySeekerPolicy,
    "hawk": HawkPolicy,
    "idle": IdlePolicy,
}


def builtin_agent(name: str) -> AgentPolicy:
    """Factory for the documented policies; raises UnknownAgent otherwise."""
    key = name.strip().lower()
    if key not in _BUILTINS:
        raise UnknownAgent(f"unknown agent {name!r}; choose from {sorted(set(_BUILTINS))}")
    return _BUILTINS[key]()
