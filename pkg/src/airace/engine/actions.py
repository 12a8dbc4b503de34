"""Resolution of catalog actions, grouped by turn phase.

Within a phase, actions resolve in (team-id lexicographic, action index)
order. Costs are deducted when the action fires; an action whose costs can
no longer be met fizzles with a private event instead of failing the turn.
"""

from __future__ import annotations

from ..model.types import (
    TERM_AUTONOMY_GUARANTEE,
    IntelEntry,
    NodeKind,
    PolicyAction,
    TeamKind,
    Treaty,
    TreatyStatus,
    canonical_terms,
    facilitator_only,
    public,
    team_only,
)
from .checks import opposed_check
from .context import TurnContext

# engine-side action magnitudes; catalog entries carry costs and gating
INVEST_AMOUNT = 4
RECRUIT_AMOUNT = 2
POACH_AMOUNT = 2
PROPAGANDA_AMOUNT = 2
BUILD_AMOUNT = 2
FUND_SAFETY_POINTS = 3
LAWS_POINTS = 4
LAWS_PAYMENT = 2

PHASE_TREATY = ("propose_treaty", "sign_treaty", "ratify_treaty")
PHASE_GOVERNANCE = ("nationalise", "form_ppp", "mitigate", "regulate", "influence_election")
PHASE_ECONOMY = (
    "invest_talent",
    "invest_data",
    "invest_compute",
    "recruit_talent",
    "poach_talent",
    "propaganda_campaign",
    "build_military",
    "build_cyber",
    "fund_safety",
    "develop_laws",
    "open_source",
)
PHASE_CYBER = ("pool_defense", "cyber_op")
PHASE_HARD = ("blockade", "strike")


def actions_in_phase(ctx: TurnContext, kinds: tuple[str, ...]):
    """(team, index, action) triples of this phase, in resolution order."""
    out = []
    for team in sorted(ctx.orders):
        for idx, action in enumerate(ctx.orders[team].actions):
            if action.kind in kinds:
                out.append((team, idx, action))
    return out


def _fizzle(ctx: TurnContext, team: str, action: PolicyAction, reason: str) -> None:
    ctx.emit(
        "action_failed",
        team_only(team),
        {"team": team, "kind": action.kind, "reason": reason},
    )


def _charge(ctx: TurnContext, team: str, action: PolicyAction) -> bool:
    spec = ctx.scenario.action(action.kind)
    ts = ctx.state.team(team)
    for res, minimum in spec.requires.items():
        if getattr(ts.resources, res) < minimum:
            _fizzle(ctx, team, action, f"requires {res} >= {minimum}")
            return False
    if not ctx.pay(team, spec.costs):
        _fizzle(ctx, team, action, "cannot pay action costs")
        return False
    return True


def _treaty_partners(ctx: TurnContext, team: str) -> set[str]:
    """Co-parties across active treaties with an autonomy guarantee."""
    partners: set[str] = set()
    for treaty in ctx.state.treaties:
        if treaty.status != TreatyStatus.ACTIVE or team not in treaty.parties:
            continue
        if any(t["kind"] == TERM_AUTONOMY_GUARANTEE for t in treaty.terms):
            if ctx.orders[team].complies(treaty.id):
                partners |= treaty.parties - {team}
    return partners


# ---------------------------------------------------------------- phase 1


def resolve_treaty_phase(ctx: TurnContext) -> None:
    state = ctx.state

    # contested treaties not re-ratified within one turn dissolve
    for treaty in state.treaties:
        if treaty.status == TreatyStatus.CONTESTED and ctx.turn > (treaty.contested_at or 0) + 1:
            treaty.status = TreatyStatus.DISSOLVED
            ctx.emit("treaty_dissolved", public(), {"treaty": treaty.id, "reason": "not re-ratified"})

    signatures: dict[str, tuple[dict, set[str]]] = {}
    for team, idx, action in actions_in_phase(ctx, PHASE_TREATY):
        vis = ctx.action_visibility(team, action)
        if action.kind == "propose_treaty":
            parties = sorted(action.params["parties"])
            proposal = {
                "parties": parties,
                "terms": canonical_terms(action.params["terms"]),
                "rigor": action.params["rigor"],
            }
            # proposals circulate between the named parties only
            ctx.emit("treaty_proposed", team_only(*parties), {"proposer": team, "proposal": proposal})
        elif action.kind == "sign_treaty":
            proposal = {
                "parties": sorted(action.params["parties"]),
                "terms": canonical_terms(action.params["terms"]),
                "rigor": action.params["rigor"],
            }
            key = repr(proposal)
            if key not in signatures:
                signatures[key] = (proposal, set())
            signatures[key][1].add(team)
        elif action.kind == "ratify_treaty":
            treaty = state.treaty(action.params["treaty"])
            if treaty is not None and treaty.status == TreatyStatus.CONTESTED and team in treaty.parties:
                treaty.status = TreatyStatus.ACTIVE
                treaty.contested_at = None
                ctx.emit("treaty_ratified", public(), {"treaty": treaty.id, "by": team})
            else:
                _fizzle(ctx, team, action, "treaty not contested or not yours")

    n = 0
    for key in sorted(signatures):
        proposal, signers = signatures[key]
        parties = set(proposal["parties"])
        if parties <= signers:
            treaty = Treaty(
                id=f"treaty_t{ctx.turn}_{n}",
                parties=frozenset(parties),
                terms=proposal["terms"],
                verification_rigor=int(proposal["rigor"]),
            )
            n += 1
            state.treaties.append(treaty)
            ctx.emit(
                "treaty_signed",
                public(),
                {
                    "treaty": treaty.id,
                    "parties": sorted(parties),
                    "terms": treaty.terms,
                    "verification_rigor": treaty.verification_rigor,
                },
            )
        else:
            for signer in sorted(signers):
                ctx.emit(
                    "treaty_unmatched",
                    team_only(signer),
                    {"proposal": proposal, "missing": sorted(parties - signers)},
                )


# ---------------------------------------------------------------- phase 2


def resolve_governance_phase(ctx: TurnContext) -> None:
    state = ctx.state
    ppp_requests: set[tuple[str, str]] = set()
    for team, idx, action in actions_in_phase(ctx, PHASE_GOVERNANCE):
        if action.kind == "form_ppp":
            ppp_requests.add((team, action.params["partner"]))

    for team, idx, action in actions_in_phase(ctx, PHASE_GOVERNANCE):
        vis = ctx.action_visibility(team, action)
        if action.kind == "nationalise":
            corp_id = action.params["corp"]
            corp = state.team(corp_id)
            if corp.controlled:
                _fizzle(ctx, team, action, "already controlled")
                continue
            if not _charge(ctx, team, action):
                continue
            me = state.team(team)
            if me.party is not None:
                # the election-holding state faces domestic opposition and
                # a legal fight: an internal stability check plus an
                # opposed soft-power check, both must pass
                internal = opposed_check(state.stability - 7, 0, ctx.dice)
                if internal.success:
                    legal = opposed_check(me.resources.soft, corp.resources.soft, ctx.dice)
                    success = legal.success
                    detail = {"internal": internal.to_dict(), "legal": legal.to_dict()}
                else:
                    success = False
                    detail = {"internal": internal.to_dict()}
            else:
                success = True
                detail = {"automatic": True}
            if success:
                corp.controlled_by.append(team)
                # absorb the corporation's research into the controller
                for node in ctx.scenario.tech_tree:
                    delta = state.entry(corp_id, node.id).points - state.entry(team, node.id).points
                    if delta > 0:
                        ctx.grant_points(team, node.id, delta, publish=False)
                ctx.emit(
                    "nationalisation",
                    public(),
                    {"state": team, "corp": corp_id, "success": True, "checks": detail},
                )
            else:
                ctx.emit(
                    "nationalisation",
                    public(),
                    {"state": team, "corp": corp_id, "success": False, "checks": detail},
                )
        elif action.kind == "form_ppp":
            partner_id = action.params["partner"]
            me = state.team(team)
            partner = state.team(partner_id)
            if me.ppp_partner or partner.ppp_partner:
                _fizzle(ctx, team, action, "already in a partnership")
                continue
            if (partner_id, team) in ppp_requests and (team, partner_id) in ppp_requests:
                if me.kind == TeamKind.STATE:  # form once, on the state's action
                    if not _charge(ctx, team, action):
                        continue
                    me.ppp_partner = partner_id
                    partner.ppp_partner = team
                    ctx.emit("ppp_formed", public(), {"state": team, "corp": partner_id})
            else:
                _fizzle(ctx, team, action, "partner did not consent this turn")
        elif action.kind == "mitigate":
            cid = action.params["concern"]
            concern = next((c for c in state.concerns if c.id == cid), None)
            if concern is None or concern.mitigated:
                _fizzle(ctx, team, action, "concern unknown or already mitigated")
                continue
            if not _charge(ctx, team, action):
                continue
            concern.mitigated = True
            ctx.emit("concern_mitigated", public(), {"concern": cid, "by": team})
        elif action.kind == "regulate":
            if not _charge(ctx, team, action):
                continue
            corps = [
                t
                for t in sorted(state.teams)
                if state.team(t).kind == TeamKind.CORPORATION and state.team(t).allegiance == team
            ]
            mitigated = []
            for corp_id in corps:
                ctx.pending_rnd_penalty[corp_id] = ctx.pending_rnd_penalty.get(corp_id, 0) + 1
                for concern in state.concerns:
                    if concern.owner == corp_id and not concern.mitigated:
                        concern.mitigated = True
                        mitigated.append(concern.id)
                        break
            ctx.emit(
                "regulation_enacted",
                public(),
                {"state": team, "corps": corps, "mitigated": mitigated},
            )
        elif action.kind == "influence_election":
            target = action.params["target"]
            if state.team(target).party is None:
                _fizzle(ctx, team, action, "target holds no elections")
                continue
            if not _charge(ctx, team, action):
                continue
            if target not in state.interference:
                state.interference.append(target)
            ctx.emit("election_influenced", vis, {"by": team, "target": target})


# ---------------------------------------------------------------- phase 3


def resolve_economy_phase(ctx: TurnContext) -> None:
    state = ctx.state
    for team in sorted(state.teams):
        ts = state.team(team)
        if ts.income and not ts.controlled:
            ts.resources.add("budget", ts.income)

    for team, idx, action in actions_in_phase(ctx, PHASE_ECONOMY):
        vis = ctx.action_visibility(team, action)
        ts = state.team(team)
        if action.kind in ("invest_talent", "invest_data", "invest_compute"):
            if not _charge(ctx, team, action):
                continue
            res = action.kind.removeprefix("invest_")
            ts.resources.add(res, INVEST_AMOUNT)
            ctx.emit("resources_invested", vis, {"team": team, "resource": res, "amount": INVEST_AMOUNT})
        elif action.kind == "recruit_talent":
            if not _charge(ctx, team, action):
                continue
            ts.resources.add("talent", RECRUIT_AMOUNT)
            ctx.emit("talent_recruited", vis, {"team": team, "amount": RECRUIT_AMOUNT})
        elif action.kind == "poach_talent":
            target = action.params["target"]
            if not _charge(ctx, team, action):
                continue
            check = opposed_check(
                ts.resources.soft, state.team(target).resources.soft, ctx.dice
            )
            if check.success:
                taken = min(POACH_AMOUNT, state.team(target).resources.talent)
                state.team(target).resources.add("talent", -taken)
                ts.resources.add("talent", taken)
            ctx.emit(
                "talent_poached",
                vis,
                {"team": team, "target": target, "success": check.success, "check": check.to_dict()},
            )
        elif action.kind == "propaganda_campaign":
            if not _charge(ctx, team, action):
                continue
            ts.resources.add("soft", PROPAGANDA_AMOUNT)
            ctx.emit("propaganda_campaign", vis, {"team": team, "amount": PROPAGANDA_AMOUNT})
        elif action.kind == "build_military":
            if not _charge(ctx, team, action):
                continue
            ts.resources.add("hard", BUILD_AMOUNT)
            ctx.emit("military_built", public(), {"team": team, "amount": BUILD_AMOUNT})
        elif action.kind == "build_cyber":
            if not _charge(ctx, team, action):
                continue
            ts.resources.add("cyber", BUILD_AMOUNT)
            ctx.emit("cyber_built", vis, {"team": team, "amount": BUILD_AMOUNT})
        elif action.kind == "fund_safety":
            recipient = action.params["recipient"]
            if not _charge(ctx, team, action):
                continue
            target_node = None
            for node in sorted(
                ctx.scenario.safety_nodes(), key=lambda n: (n.level, n.lane.value, n.id)
            ):
                entry = state.entry(recipient, node.id)
                if not entry.completed and state.unlocked(recipient, node.id):
                    target_node = node
                    break
            if target_node is None:
                _fizzle(ctx, team, action, "no fundable safety node")
                continue
            ctx.grant_points(recipient, target_node.id, FUND_SAFETY_POINTS, publish=True)
            ctx.emit(
                "safety_funded",
                vis,
                {"team": team, "recipient": recipient, "node": target_node.id, "points": FUND_SAFETY_POINTS},
            )
        elif action.kind == "develop_laws":
            corp_id = action.params["corp"]
            laws_node = next(
                (
                    n
                    for n in ctx.scenario.tech_tree
                    if "autonomous_weapon_systems" in n.effects.get("flags", [])
                ),
                None,
            )
            if laws_node is None or not state.unlocked(corp_id, laws_node.id):
                _fizzle(ctx, team, action, "weapons programme locked")
                continue
            if not _charge(ctx, team, action):
                continue
            state.team(corp_id).resources.add("budget", LAWS_PAYMENT)
            ctx.grant_points(corp_id, laws_node.id, LAWS_POINTS, publish=False)
            ctx.emit(
                "laws_programme",
                vis,
                {"state": team, "corp": corp_id, "node": laws_node.id, "points": LAWS_POINTS},
            )
        elif action.kind == "open_source":
            nid = action.params["node"]
            if not state.completed(team, nid):
                _fizzle(ctx, team, action, "node not completed")
                continue
            ctx.publish_node(team, nid)
            node = ctx.scenario.node(nid)
            for other in sorted(state.teams):
                entry = state.entry(other, nid)
                if not entry.completed:
                    ctx.grant_points(other, nid, node.cost - entry.points, publish=True)
                else:
                    ctx.publish_node(other, nid)
            ctx.emit("open_sourced", public(), {"team": team, "node": nid})


# ---------------------------------------------------------------- phase 4


def resolve_cyber_phase(ctx: TurnContext) -> None:
    state = ctx.state

    # pooled-defense declarations register before any attack resolves
    for team, idx, action in actions_in_phase(ctx, ("pool_defense",)):
        defender = action.params["defender"]
        points = min(int(action.params["points"]), state.team(team).resources.cyber)
        if points <= 0:
            _fizzle(ctx, team, action, "no cyber power to contribute")
            continue
        state.pooled_defense[defender] = state.pooled_defense.get(defender, 0) + points
        ctx.emit(
            "defense_pooled",
            team_only(team, defender),
            {"contributor": team, "defender": defender, "points": points},
        )

    for team, idx, action in actions_in_phase(ctx, ("cyber_op",)):
        resolve_cyber_op(ctx, team, action)


def resolve_cyber_op(ctx: TurnContext, team: str, action: PolicyAction) -> None:
    state = ctx.state
    target = action.params["target"]
    mode = action.params["mode"]
    node_id = action.params["node"]
    ts = state.team(team)
    if ts.resources.cyber <= 0:
        _fizzle(ctx, team, action, "no cyber power")
        return
    if mode == "sabotage" and target in _treaty_partners(ctx, team):
        _fizzle(ctx, team, action, "blocked by treaty (set the defection flag to break it)")
        return

    defender_attr = state.team(target).resources.cyber + state.pooled_defense.get(target, 0)
    check = opposed_check(ts.resources.cyber, defender_attr, ctx.dice)
    detail = {
        "actor": team,
        "target": target,
        "mode": mode,
        "node": node_id,
        "check": check.to_dict(),
    }

    if check.success:
        if mode == "monitor":
            entry = state.entry(target, node_id)
            state.intel.append(
                IntelEntry(
                    owner=team,
                    target=target,
                    node=node_id,
                    points=entry.points,
                    completed=entry.completed,
                    turn=ctx.turn,
                )
            )
            detail["intel"] = {"points": entry.points, "completed": entry.completed}
        elif mode == "exfiltrate":
            # model-weight theft: rise to the target's progress, never fall
            theirs = state.entry(target, node_id).points
            mine = state.entry(team, node_id).points
            if theirs > mine:
                ctx.grant_points(team, node_id, theirs - mine, publish=False)
            detail["points_after"] = state.entry(team, node_id).points
        elif mode == "sabotage":
            removed = ctx.reduce_points(target, node_id, check.margin)
            detail["points_removed"] = removed
            if check.margin <= 2:  # near-detection
                ctx.emit(
                    "cyber_attribution",
                    public(),
                    {"actor": team, "target": target, "mode": mode, "node": node_id},
                )
        ctx.emit("cyber_op_resolved", team_only(team), detail)
    else:
        ctx.emit("cyber_op_resolved", team_only(team), detail)
        if check.margin <= -3:
            ctx.emit(
                "cyber_attribution",
                public(),
                {"actor": team, "target": target, "mode": mode, "node": node_id},
            )


# ---------------------------------------------------------------- phase 5


def _bloc_hard(ctx: TurnContext, team: str) -> int:
    return sum(ctx.state.team(t).resources.hard for t in ctx.scenario.bloc_of(team))


def resolve_hard_phase(ctx: TurnContext) -> None:
    for team, idx, action in actions_in_phase(ctx, PHASE_HARD):
        resolve_hard_power(ctx, team, action)


def resolve_hard_power(ctx: TurnContext, team: str, action: PolicyAction) -> None:
    state = ctx.state
    target = action.params["target"]
    if target in _treaty_partners(ctx, team):
        _fizzle(ctx, team, action, "blocked by treaty (set the defection flag to break it)")
        return
    attacker_attr = state.team(team).resources.hard
    if not _charge(ctx, team, action):
        return
    check = opposed_check(attacker_attr, _bloc_hard(ctx, target), ctx.dice)
    state.pressure_markers += 1  # win or lose, force was put in motion

    if action.kind == "blockade":
        affected = []
        if check.success:
            for tid in sorted(state.teams):
                if state.team(tid).import_dependent:
                    state.team(tid).compute_halved_until = ctx.turn + 2
                    affected.append(tid)
            ctx.stability_add(-2)
            if check.margin >= 5:
                state.team(team).resources.add("compute", 2)  # captured capacity
        ctx.emit(
            "blockade_resolved",
            public(),
            {
                "actor": team,
                "target": target,
                "success": check.success,
                "check": check.to_dict(),
                "affected": affected,
                "captured_compute": 2 if check.success and check.margin >= 5 else 0,
            },
        )
    else:  # strike
        losses = 0
        if check.success:
            losses = check.margin // 2
            state.team(target).resources.add("compute", -losses)
            state.team(target).resources.add("talent", -losses)
            ctx.stability_add(-2)
        ctx.emit(
            "strike_resolved",
            public(),
            {
                "actor": team,
                "target": target,
                "success": check.success,
                "check": check.to_dict(),
                "losses": losses,
            },
        )
