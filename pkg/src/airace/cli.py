"""Command-line entry points: batch sims, hot-seat play, serving, replay."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .agents import AgentPolicy, builtin_agent
from .engine.turn import resolve_turn
from .errors import GameError
from .model.orders import validate_orders
from .model.scenario import Scenario, default_scenario, load_scenario
from .model.state import creation_event, new_game, state_hash
from .model.types import (
    DeployDecision,
    NodeKind,
    PolicyAction,
    TurnOrders,
    Visibility,
)
from .model.views import knowledge_view
from .montecarlo import collect_runs, OutcomeStats, write_runs_csv, write_stats
from .replay import EventLog, LogWriter, make_header, read_log, replay as replay_log
from .rng import GameRng, splitmix64


def _load(scenario_path: str | None) -> Scenario:
    if scenario_path is None or scenario_path == "default":
        return default_scenario()
    return load_scenario(Path(scenario_path))


@click.group()
def main():
    """Deterministic AI-race wargame: simulate, play, serve, replay."""


@main.command()
@click.option("--scenario", "scenario_path", default=None, help="Scenario JSON (default: bundled).")
@click.option("--agents", required=True, help="Comma-separated agent names in roster order.")
@click.option("--runs", default=100, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int, help="Master seed.")
@click.option("--out", "out_path", default=None, help="Write the stats JSON here.")
@click.option("--csv", "csv_path", default=None, help="Also write per-run rows as CSV.")
@click.option("--jobs", default=1, show_default=True, type=int, help="Worker processes.")
def sim(scenario_path, agents, runs, seed, out_path, csv_path, jobs):
    """Monte Carlo sweep: N seeded games with scripted agents."""
    scenario = _load(scenario_path)
    names = [a.strip() for a in agents.split(",") if a.strip()]
    roster = [t.id for t in scenario.teams]
    if len(names) != len(roster):
        raise click.UsageError(
            f"need {len(roster)} agents for teams {roster}, got {len(names)}"
        )
    assignment = dict(zip(roster, names))
    for name in names:
        builtin_agent(name)  # fail fast on typos
    run_rows = collect_runs(scenario, assignment, runs, seed, parallelism=jobs)
    stats = OutcomeStats.from_runs(run_rows, scenario.constants.horizon_turns)
    click.echo(json.dumps(stats.to_dict(), indent=2, sort_keys=True))
    if out_path:
        write_stats(stats, out_path)
        click.echo(f"stats written to {out_path}", err=True)
    if csv_path:
        write_runs_csv(run_rows, csv_path)
        click.echo(f"per-run rows written to {csv_path}", err=True)


@main.command()
@click.argument("log_path", type=click.Path(exists=True))
@click.option("--to-turn", default=None, type=int, help="Stop after this turn.")
@click.option("--scenario", "scenario_path", default=None, help="Scenario the log was recorded against.")
def replay(log_path, to_turn, scenario_path):
    """Rebuild the final state from an .irlog transcript."""
    scenario = _load(scenario_path)
    log = read_log(log_path)
    state = replay_log(log, scenario, to_turn=to_turn)
    click.echo(f"replayed {log_path} to turn {state.turn} (year {state.year})")
    click.echo(f"stability: {state.stability}")
    if state.outcome:
        click.echo(f"outcome: {json.dumps(state.outcome.to_dict())}")
    click.echo(f"state hash: {state_hash(state)}")


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=None, help="Directory for session .irlog files.")
@click.option("--ui", "ui_dir", default=None, help="Directory with the built web client.")
def serve(port, host, data_dir, ui_dir):
    """Run the hosted session server."""
    import uvicorn

    from .server.app import create_app

    if ui_dir is None:
        bundled = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
        if bundled.is_dir():
            ui_dir = str(bundled)
    uvicorn.run(create_app(data_dir=data_dir, ui_dir=ui_dir), host=host, port=port)


# ----------------------------------------------------------- hot-seat play


def _parse_value(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _brief(view) -> str:
    lines = [
        f"turn {view.turn} (year {view.year})  stability {view.stability}/10",
        f"you are {view.viewer}; usable R&D points: {view.allocatable}",
    ]
    me = view.teams[view.viewer]
    lines.append("resources: " + ", ".join(f"{k}={v}" for k, v in me["resources"].items()))
    if view.concerns:
        open_c = [c for c in view.concerns if not c["mitigated"]]
        lines.append(f"concerns: {len(open_c)} unmitigated")
    for t in view.treaties:
        lines.append(f"treaty {t['id']}: {t['status']} rigor {t['verification_rigor']}")
    return "\n".join(lines)


def _tree(view, scenario) -> str:
    lines = []
    for node in sorted(scenario.tech_tree, key=lambda n: (n.lane.value, n.level, n.kind.value)):
        mine = view.progress[view.viewer].get(node.id, {})
        pts = mine.get("points", 0)
        done = "done" if mine.get("completed") else f"{pts}/{node.cost}"
        locked = all(
            view.progress[view.viewer].get(p, {}).get("completed") for p in node.prereqs
        )
        flag = "" if locked else " [locked]"
        lines.append(f"{node.lane.value}{node.level} {node.kind.value:<11} {node.id:<28} {done}{flag}")
    return "\n".join(lines)


def _prompt_orders(scenario, state, team: str) -> TurnOrders | AgentPolicy:
    view = knowledge_view(state, team)
    click.echo(f"\n=== {team} ===")
    click.echo(_brief(view))
    orders = TurnOrders.empty(team, state.turn + 1)
    while True:
        raw = click.prompt(f"{team}>", default="done", show_default=False).strip()
        if not raw:
            continue
        parts = raw.split()
        cmd, args = parts[0], parts[1:]
        if cmd == "help":
            click.echo(
                "commands: brief | tree | add <kind> [k=v ...] | secret | "
                "alloc <node>=<pts> [...] | deploy <agi|cais> | comply <treaty> <yes|no> | "
                "auto <agent> | clear | done"
            )
        elif cmd == "brief":
            click.echo(_brief(view))
        elif cmd == "tree":
            click.echo(_tree(view, scenario))
        elif cmd == "add":
            if not args:
                click.echo("usage: add <kind> [k=v ...]")
                continue
            params = {}
            for pair in args[1:]:
                if "=" in pair:
                    k, v = pair.split("=", 1)
                    params[k] = _parse_value(v)
            orders.actions.append(PolicyAction(kind=args[0], params=params))
            click.echo(f"added {args[0]} ({len(orders.actions)}/2 actions)")
        elif cmd == "secret":
            if orders.actions:
                orders.actions[-1].visibility = Visibility.SECRET
                click.echo(f"{orders.actions[-1].kind} is now secret")
        elif cmd == "alloc":
            for pair in args:
                if "=" in pair:
                    node, pts = pair.split("=", 1)
                    orders.rnd_allocation[node] = int(pts)
            total = sum(orders.rnd_allocation.values())
            click.echo(f"allocated {total}/{view.allocatable}")
        elif cmd == "deploy":
            if args:
                orders.deploy = DeployDecision(project=args[0], decline_pause=True)
                click.echo(f"deployment of {args[0]} declared (pause declined)")
        elif cmd == "comply":
            if len(args) == 2:
                orders.treaty_compliance[args[0]] = args[1].lower() in ("yes", "y", "true")
        elif cmd == "auto":
            if args:
                try:
                    return builtin_agent(args[0])
                except GameError as e:
                    click.echo(str(e))
        elif cmd == "clear":
            orders = TurnOrders.empty(team, state.turn + 1)
        elif cmd == "done":
            problems = validate_orders(state, orders)
            if problems:
                for p in problems:
                    click.echo(f"  ! {p}")
                continue
            return orders
        else:
            click.echo(f"unknown command {cmd!r} (try: help)")


@main.command()
@click.option("--hotseat", is_flag=True, default=True, help="All teams at one terminal.")
@click.option("--scenario", "scenario_path", default=None)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--log", "log_path", default=None, help="Record the game to this .irlog file.")
def play(hotseat, scenario_path, seed, log_path):
    """Hot-seat game: each team enters orders in turn, then the turn resolves."""
    scenario = _load(scenario_path)
    state = new_game(scenario, seed)
    writer = None
    created = creation_event(scenario, seed, state)
    if log_path:
        writer = LogWriter(log_path, make_header(scenario, seed))
        writer.append(created)
    autos: dict[str, AgentPolicy] = {}
    memories: dict[str, dict] = {}
    roster = [t.id for t in scenario.teams]
    rngs = {
        tid: GameRng.from_seed(splitmix64(seed ^ roster.index(tid))) for tid in roster
    }

    click.echo(f"scenario {scenario.name}, seed {seed}; teams: {', '.join(roster)}")
    while state.outcome is None:
        orders = {}
        for team in state.live_teams():
            if team in autos:
                view = knowledge_view(state, team)
                orders[team] = autos[team].decide(view, memories[team], rngs[team])
                click.echo(f"{team}: {autos[team].id} agent submitted")
                continue
            result = _prompt_orders(scenario, state, team)
            if isinstance(result, AgentPolicy):
                autos[team] = result
                memories[team] = {"scenario": scenario}
                view = knowledge_view(state, team)
                orders[team] = result.decide(view, memories[team], rngs[team])
                click.echo(f"{team} delegated to {result.id}")
            else:
                orders[team] = result
        state, events = resolve_turn(state, orders)
        if writer:
            for e in events:
                writer.append(e)
        click.echo(f"\n--- turn {state.turn} resolved ---")
        for e in events:
            if e.visibility.get("scope") == "public" and e.kind not in ("turn_advanced",):
                click.echo(f"  {e.kind}: {json.dumps(e.payload)}")
        click.echo(f"stability {state.stability}/10, year {state.year}")
    click.echo(f"\ngame over: {json.dumps(state.outcome.to_dict(), indent=2)}")
    if writer:
        writer.close()
        click.echo(f"transcript written to {log_path}")


if __name__ == "__main__":
    main()
