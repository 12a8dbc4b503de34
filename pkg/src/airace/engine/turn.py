"""Simultaneous turn resolution in a fixed, deterministic phase order.

Phases: (1) treaty signings, (2) governance, (3) economy, (4) cyber ops,
(5) hard power, (6) R&D, (7) defection checks, (8) shock draw,
(9) stability, (10) elections, (11) RTAI deployment, (12) end evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..errors import (
    MissingOrders,
    OutcomeAlreadySet,
    PauseNotAnswered,
    PrerequisitesUnmet,
    StaleOrders,
)
from ..model.orders import validate_orders
from ..model.state import GameState
from ..model.types import (
    TERM_DEPLOYMENT_CONSENT,
    TERM_RND_CAP,
    TERM_SAFETY_FLOOR,
    DeploymentRecord,
    GameEvent,
    GameOutcome,
    NodeKind,
    OutcomeKind,
    TeamKind,
    TreatyStatus,
    TurnOrders,
    facilitator_only,
    public,
    team_only,
)
from ..rng import DiceSource, RngDice, TapeDice
from .actions import (
    resolve_cyber_phase,
    resolve_economy_phase,
    resolve_governance_phase,
    resolve_hard_phase,
    resolve_treaty_phase,
)
from .checks import SafetyOutcome, roll_detection, roll_safety
from .context import TurnContext

__all__ = [
    "resolve_turn",
    "evaluate_end",
    "apply_rnd_allocation",
    "attempt_rtai_deployment",
    "safety_score",
]


# ---------------------------------------------------------------- phase 6


def _banned_nodes(ctx: TurnContext, team: str) -> dict[str, set]:
    """Allocation targets a treaty forbids this team, with the treaties
    banning each."""
    state = ctx.state
    banned: dict[str, set] = {}
    for treaty in state.treaties:
        if treaty.status != TreatyStatus.ACTIVE or team not in treaty.parties:
            continue
        for term in treaty.terms:
            if term["kind"] == TERM_RND_CAP:
                for nid in ctx.orders[team].rnd_allocation:
                    node = ctx.scenario.node(nid)
                    if node.lane.value == term["lane"] and node.level > term["max_level"]:
                        banned.setdefault(nid, set()).add(treaty.id)
            elif term["kind"] == TERM_SAFETY_FLOOR:
                if len(state.bloc_safety_completed(team)) < term["min_nodes"]:
                    for nid in ctx.orders[team].rnd_allocation:
                        if ctx.scenario.node(nid).kind == NodeKind.DEPLOYMENT:
                            banned.setdefault(nid, set()).add(treaty.id)
    return banned


def _apply_team_allocation(
    ctx: TurnContext, team: str, allocation: dict[str, int], secret: bool
) -> None:
    applied = {}
    for nid in sorted(allocation):
        pts = allocation[nid]
        if pts <= 0:
            continue
        ctx.grant_points(team, nid, pts, publish=not secret)
        applied[nid] = pts
    if applied:
        ctx.emit("rnd_applied", team_only(team), {"team": team, "allocation": applied})


def resolve_rnd_phase(ctx: TurnContext) -> None:
    for team in sorted(ctx.orders):
        orders = ctx.orders[team]
        banned = _banned_nodes(ctx, team)
        ctx.banned_by[team] = banned
        lawful = {n: p for n, p in orders.rnd_allocation.items() if n not in banned}
        deferred, suppressed = {}, []
        for nid, treaties in sorted(banned.items()):
            if all(not orders.complies(tr) for tr in treaties):
                deferred[nid] = orders.rnd_allocation[nid]
            else:
                suppressed.append(nid)
        if suppressed:
            ctx.emit(
                "allocation_suppressed",
                team_only(team),
                {"team": team, "nodes": suppressed, "reason": "treaty terms"},
            )
        ctx.deferred_alloc[team] = deferred
        _apply_team_allocation(ctx, team, lawful, orders.rnd_secret)


# ---------------------------------------------------------------- phase 7


def resolve_defection_phase(ctx: TurnContext) -> None:
    state = ctx.state

    # defectors collect the research their treaties banned
    for team in sorted(ctx.deferred_alloc):
        deferred = ctx.deferred_alloc[team]
        if deferred:
            _apply_team_allocation(ctx, team, deferred, ctx.orders[team].rnd_secret)

    for treaty in list(state.treaties):
        if treaty.status != TreatyStatus.ACTIVE:
            continue
        for party in sorted(treaty.parties):
            if party not in ctx.orders or ctx.orders[party].complies(treaty.id):
                continue  # compliance: no roll, no event
            roll, detected = roll_detection(treaty.verification_rigor, ctx.dice)
            if detected:
                treaty.status = TreatyStatus.DISSOLVED
                ctx.stability_add(-2)
                state.team(party).resources.add("soft", -2)
                ctx.emit(
                    "defection_detected",
                    public(),
                    {"team": party, "treaty": treaty.id, "roll": roll},
                )
            else:
                ctx.emit(
                    "defection_undetected",
                    facilitator_only(),
                    {"team": party, "treaty": treaty.id, "roll": roll},
                )


# ---------------------------------------------------------------- phase 8


def _basics_in_order(ctx: TurnContext):
    return sorted(
        (n for n in ctx.scenario.tech_tree if n.kind == NodeKind.BASIC),
        key=lambda n: (n.level, n.lane.value),
    )


def _apply_shock(ctx: TurnContext, shock_id: str, kind: str) -> dict:
    state = ctx.state
    detail: dict = {}
    if kind == "startup_breakthrough":
        # an outside startup publishes the lowest basic capability anyone
        # is still missing
        for node in _basics_in_order(ctx):
            if any(not state.completed(t, node.id) for t in state.teams):
                detail["node"] = node.id
                for team in sorted(state.teams):
                    entry = state.entry(team, node.id)
                    if not entry.completed:
                        ctx.grant_points(team, node.id, node.cost - entry.points, publish=True)
                    else:
                        ctx.publish_node(team, node.id)
                break
    elif kind == "open_source_release":
        for node in _basics_in_order(ctx):
            holders = [t for t in state.teams if state.completed(t, node.id)]
            if holders and len(holders) < len(state.teams):
                detail["node"] = node.id
                for team in sorted(state.teams):
                    entry = state.entry(team, node.id)
                    if not entry.completed:
                        ctx.grant_points(team, node.id, node.cost - entry.points, publish=True)
                    else:
                        ctx.publish_node(team, node.id)
                break
    elif kind == "talent_exodus":
        for team in sorted(state.teams):
            if state.team(team).kind == TeamKind.CORPORATION:
                state.team(team).resources.add("talent", -2)
        detail["talent_lost"] = 2
    elif kind == "market_crash":
        for team in sorted(state.teams):
            res = state.team(team).resources
            res.budget //= 2
        detail["budget"] = "halved"
    elif kind == "public_backlash":
        ctx.stability_add(-1)
        for team in sorted(state.teams):
            if state.team(team).kind == TeamKind.CORPORATION:
                state.team(team).resources.add("soft", -1)
        detail["stability"] = -1
    elif kind == "warning_shot":
        ctx.stability_add(-1)
        detail["stability"] = -1
    return detail


def resolve_shock_phase(ctx: TurnContext) -> None:
    state = ctx.state
    undrawn = [s for s in ctx.scenario.shock_deck if s.id not in state.shocks_drawn]

    if ctx.injected_shock is not None:
        spec = next((s for s in undrawn if s.id == ctx.injected_shock), None)
        if spec is None:
            return
        state.shocks_drawn.append(spec.id)
        detail = _apply_shock(ctx, spec.id, spec.kind)
        ctx.emit(
            "shock_drawn",
            public(),
            {"id": spec.id, "kind": spec.kind, "injected": True, **detail},
        )
        return

    if not undrawn:
        return
    gate = ctx.dice.roll_d6()
    if gate > 2:  # shocks arrive with probability 1/3
        return
    spec = undrawn[0]
    state.shocks_drawn.append(spec.id)
    detail = _apply_shock(ctx, spec.id, spec.kind)
    ctx.emit("shock_drawn", public(), {"id": spec.id, "kind": spec.kind, **detail})


# ---------------------------------------------------------------- phase 9


def resolve_stability_phase(ctx: TurnContext) -> None:
    state = ctx.state
    concern_drain = sum(c.severity for c in state.concerns if not c.mitigated)
    pressure = state.pressure_markers
    before = state.stability
    ctx.stability_add(-(concern_drain + pressure))
    state.pressure_markers = 0
    ctx.emit(
        "stability_updated",
        public(),
        {
            "before": before,
            "after": state.stability,
            "concern_drain": concern_drain,
            "pressure": pressure,
        },
    )
    if state.stability == 0 and state.outcome is None:
        _set_outcome(ctx, GameOutcome(kind=OutcomeKind.COLLAPSE))


# --------------------------------------------------------------- phase 10


def resolve_election_phase(ctx: TurnContext) -> None:
    state = ctx.state
    if ctx.turn % ctx.scenario.constants.election_period != 0 or ctx.turn == 0:
        return
    election_state = next(
        (t for t in sorted(state.teams) if state.team(t).party is not None), None
    )
    if election_state is None:
        return
    modifier = (state.stability - 5) // 2
    interfered = election_state in state.interference
    if interfered:
        modifier -= 2
    # challenger rolls against the incumbent's modifier; ties retain
    challenger = ctx.dice.roll_2d6()
    incumbent = ctx.dice.roll_2d6() + modifier
    flipped = challenger > incumbent
    ts = state.team(election_state)
    if flipped:
        ts.party = "B" if ts.party == "A" else "A"
        ts.resources.add("soft", -1)
        for treaty in state.treaties:
            if treaty.status == TreatyStatus.ACTIVE and election_state in treaty.parties:
                treaty.status = TreatyStatus.CONTESTED
                treaty.contested_at = ctx.turn
                ctx.emit(
                    "treaty_contested",
                    public(),
                    {"treaty": treaty.id, "reason": "election", "state": election_state},
                )
    ctx.emit(
        "election_held",
        public(),
        {
            "state": election_state,
            "flipped": flipped,
            "party": ts.party,
            "modifier": modifier,
            "interfered": interfered,
            "challenger_total": challenger,
            "incumbent_total": incumbent,
        },
    )


# --------------------------------------------------------------- phase 11


def safety_score(state: GameState, team: str) -> Fraction:
    total = len(state.scenario.safety_nodes())
    if total == 0:
        return Fraction(0)
    return Fraction(len(state.bloc_safety_completed(team)), total)


def _deployment_ready(state: GameState, team: str, project: str) -> bool:
    node = state.scenario.node(project)
    if not state.completed(team, project):
        return False
    return all(state.completed(team, p) for p in node.prereqs)


def _consent_blocked(ctx: TurnContext, team: str) -> bool:
    for treaty in ctx.state.treaties:
        if treaty.status != TreatyStatus.ACTIVE or team not in treaty.parties:
            continue
        if not any(t["kind"] == TERM_DEPLOYMENT_CONSENT for t in treaty.terms):
            continue
        if not ctx.orders[team].complies(treaty.id):
            continue  # defectors deploy anyway and answer for it
        for party in treaty.parties - {team}:
            if party in ctx.orders and team not in ctx.orders[party].consent_rtai:
                return True
    return False


def resolve_deployment_phase(ctx: TurnContext) -> None:
    state = ctx.state
    for team in sorted(ctx.orders):
        decision = ctx.orders[team].deploy
        if decision is None:
            continue
        project = decision.project
        if not _deployment_ready(state, team, project):
            ctx.emit(
                "deployment_failed",
                team_only(team),
                {"team": team, "project": project, "reason": "prerequisites unmet"},
            )
            continue
        if _consent_blocked(ctx, team):
            ctx.emit(
                "deployment_failed",
                team_only(team),
                {"team": team, "project": project, "reason": "consent withheld"},
            )
            continue
        # the pause is always offered; proceeding requires declining it
        ctx.emit("pause_offered", team_only(team), {"team": team, "project": project})
        if not decision.decline_pause:
            ctx.emit("pause_accepted", team_only(team), {"team": team, "project": project})
            continue
        ctx.emit("pause_declined", team_only(team), {"team": team, "project": project})
        outcome = roll_safety(team, safety_score(state, team), ctx.dice)
        state.deployments.append(
            DeploymentRecord(
                team=team,
                project=project,
                turn=ctx.turn,
                roll=outcome.roll,
                threshold=outcome.threshold,
                aligned=outcome.aligned,
            )
        )
        ctx.emit(
            "safety_rolled",
            public(),
            {
                "team": team,
                "project": project,
                "roll": outcome.roll,
                "threshold": outcome.threshold,
                "aligned": outcome.aligned,
            },
        )


# --------------------------------------------------------------- phase 12


def evaluate_end(state: GameState, turn: Optional[int] = None) -> Optional[GameOutcome]:
    """Victory and collective-loss conditions; None while the game runs."""
    if state.outcome is not None:
        return state.outcome
    turn = state.turn if turn is None else turn

    if state.deployments:
        aligned = sorted({d.team for d in state.deployments if d.aligned})
        misaligned = sorted({d.team for d in state.deployments if not d.aligned})
        if misaligned:
            return _scored(state, GameOutcome(kind=OutcomeKind.MISALIGNED_CATASTROPHE, teams=misaligned))
        if len(aligned) == 1:
            return _scored(state, GameOutcome(kind=OutcomeKind.SAFE_UNIPOLAR, teams=aligned))
        return _scored(state, GameOutcome(kind=OutcomeKind.SAFE_MULTIPOLAR, teams=aligned))
    if turn >= state.scenario.constants.horizon_turns:
        return _scored(state, GameOutcome(kind=OutcomeKind.TIMEOUT))
    return None


def _scored(state: GameState, outcome: GameOutcome) -> GameOutcome:
    collective_loss = outcome.kind in (OutcomeKind.MISALIGNED_CATASTROPHE, OutcomeKind.COLLAPSE)
    aligned = {d.team for d in state.deployments if d.aligned}
    scores = {}
    for tid in sorted(state.teams):
        if collective_loss:
            scores[tid] = 0
        else:
            res = state.team(tid).resources
            scores[tid] = res.soft + res.hard + res.cyber + (10 if tid in aligned else 0)
    outcome.team_scores = scores
    return outcome


def _set_outcome(ctx: TurnContext, outcome: GameOutcome) -> None:
    ctx.state.outcome = _scored(ctx.state, outcome)
    ctx.emit(
        "game_ended",
        public(),
        {"outcome": ctx.state.outcome.to_dict(), "turn": ctx.turn},
    )


# ------------------------------------------------------------ main loop


def resolve_turn(
    state: GameState,
    orders: dict[str, TurnOrders],
    dice: Optional[DiceSource] = None,
    injected_shock: Optional[str] = None,
) -> tuple[GameState, list[GameEvent]]:
    """Resolve one turn. Pure: returns a new state, never touches the
    input. Submission order of the orders mapping is irrelevant."""
    if state.outcome is not None:
        raise OutcomeAlreadySet("game already has an outcome")
    expected_turn = state.turn + 1
    live = set(state.live_teams())
    missing = live - set(orders)
    if missing:
        raise MissingOrders(missing)
    for team, team_orders in orders.items():
        if team_orders.turn != expected_turn:
            raise StaleOrders(
                f"{team}: orders for turn {team_orders.turn}, expected {expected_turn}"
            )
        problems = validate_orders(state, team_orders)
        if problems:
            raise ValueError(f"invalid orders for {team}: {problems}")

    work = state.copy()
    if dice is None:
        dice = RngDice(work.rng.copy())
    ctx = TurnContext(
        state=work,
        orders={t: orders[t] for t in sorted(orders) if t in live},
        dice=dice,
        turn=expected_turn,
        injected_shock=injected_shock,
    )

    ctx.emit(
        "orders_committed",
        facilitator_only(),
        {"turn": expected_turn, "orders": {t: ctx.orders[t].to_dict() for t in sorted(ctx.orders)}},
    )

    resolve_treaty_phase(ctx)
    resolve_governance_phase(ctx)
    resolve_economy_phase(ctx)
    resolve_cyber_phase(ctx)
    resolve_hard_phase(ctx)
    resolve_rnd_phase(ctx)
    resolve_defection_phase(ctx)
    resolve_shock_phase(ctx)
    resolve_stability_phase(ctx)
    if work.outcome is None:
        resolve_election_phase(ctx)
    if work.outcome is None:
        resolve_deployment_phase(ctx)
    if work.outcome is None:
        outcome = evaluate_end(work, turn=expected_turn)
        if outcome is not None:
            _set_outcome(ctx, outcome)

    # housekeeping: transient markers clear, penalties arm, clock advances
    work.turn = expected_turn
    work.year = ctx.scenario.constants.start_year + work.turn * ctx.scenario.constants.years_per_turn
    work.pooled_defense = {}
    work.interference = []
    for tid in work.teams:
        work.teams[tid].rnd_penalty = ctx.pending_rnd_penalty.get(tid, 0)

    rng_after = dice.result_rng()
    if rng_after is not None:
        work.rng = rng_after
    ctx.emit(
        "turn_advanced",
        public(),
        {"turn": work.turn, "year": work.year, "stability": work.stability},
    )
    ctx.emit(
        "turn_dice",
        facilitator_only(),
        {"turn": work.turn, "draws": list(dice.tape), "rng_after": work.rng.to_dict()},
    )
    return work, ctx.events


# --------------------------------------------------- standalone operations


def apply_rnd_allocation(
    state: GameState, team: str, allocation: dict[str, int], rnd_secret: bool = False
) -> tuple[GameState, list[GameEvent]]:
    """Apply a validated allocation outside a full turn (unit-level op)."""
    work = state.copy()
    ctx = TurnContext(state=work, orders={}, dice=TapeDice([]), turn=state.turn + 1)
    _apply_team_allocation(ctx, team, allocation, rnd_secret)
    return work, ctx.events


def attempt_rtai_deployment(
    state: GameState,
    team: str,
    project: str,
    dice: DiceSource,
    decline_pause: bool = False,
) -> SafetyOutcome:
    """Direct deployment attempt; the engine's phase 11 wraps the same
    logic with events."""
    if not _deployment_ready(state, team, project):
        raise PrerequisitesUnmet(f"{team} has not completed {project} and its prerequisites")
    if not decline_pause:
        raise PauseNotAnswered("the pause offer must be explicitly declined")
    return roll_safety(team, safety_score(state, team), dice)
