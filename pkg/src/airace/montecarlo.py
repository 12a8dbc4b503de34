"""Game loop for scripted agents and the seed-sweep measurement harness."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

from .agents import AgentPolicy, builtin_agent
from .errors import GameError
from .model.scenario import Scenario
from .model.state import GameState, creation_event, new_game
from .model.types import GameEvent
from .model.orders import validate_orders
from .model.views import knowledge_view
from .engine.turn import resolve_turn
from .rng import GameRng, splitmix64

AgentSpec = Union[str, AgentPolicy]


@dataclass
class GameRecord:
    """One finished game: final state plus the full event log."""

    scenario: Scenario
    seed: int
    final_state: GameState
    events: list[GameEvent]
    stability_by_turn: list[int]  # entry per resolved turn

    @property
    def outcome_kind(self) -> str:
        return self.final_state.outcome.kind.value


def _resolve_agents(agents: dict[str, AgentSpec]) -> dict[str, AgentPolicy]:
    return {t: (builtin_agent(a) if isinstance(a, str) else a) for t, a in agents.items()}


def run_game(scenario: Scenario, agents: dict[str, AgentSpec], seed: int) -> GameRecord:
    """Play one full game to its outcome; fully deterministic in the seed."""
    policies = _resolve_agents(agents)
    missing = {t.id for t in scenario.teams} - set(policies)
    if missing:
        raise GameError(f"no agent for teams: {sorted(missing)}")

    state = new_game(scenario, seed)
    events: list[GameEvent] = [creation_event(scenario, seed, state)]
    roster = [t.id for t in scenario.teams]
    rngs = {
        tid: GameRng.from_seed(splitmix64(seed ^ roster.index(tid)))
        for tid in policies
    }
    memories = {tid: {"scenario": scenario} for tid in policies}
    stability_by_turn: list[int] = []

    while state.outcome is None:
        orders = {}
        for tid in state.live_teams():
            view = knowledge_view(state, tid)
            team_orders = policies[tid].decide(view, memories[tid], rngs[tid])
            problems = validate_orders(state, team_orders)
            if problems:
                raise GameError(f"agent {policies[tid].id} produced invalid orders for {tid}: {problems}")
            orders[tid] = team_orders
        state, turn_events = resolve_turn(state, orders)
        events.extend(turn_events)
        stability_by_turn.append(state.stability)

    return GameRecord(
        scenario=scenario,
        seed=seed,
        final_state=state,
        events=events,
        stability_by_turn=stability_by_turn,
    )


# ------------------------------------------------------------- statistics


@dataclass
class RunStats:
    """Per-run metrics row, the unit the aggregate is folded from."""

    run: int
    seed: int
    outcome: str
    turns: int
    final_stability: int
    stability_by_turn: list[int]
    first_rtai_turn: Optional[int]
    max_same_turn_deployers: int
    defections: int
    exfiltrations: int
    elections_flipped: int

    @classmethod
    def from_record(cls, run: int, record: GameRecord) -> "RunStats":
        deploy_turns: dict[int, set] = {}
        defections = exfiltrations = flips = 0
        for e in record.events:
            if e.kind == "safety_rolled":
                deploy_turns.setdefault(e.turn, set()).add(e.payload["team"])
            elif e.kind in ("defection_detected", "defection_undetected"):
                defections += 1
            elif e.kind == "cyber_op_resolved":
                if e.payload.get("mode") == "exfiltrate" and e.payload["check"]["success"]:
                    exfiltrations += 1
            elif e.kind == "election_held" and e.payload.get("flipped"):
                flips += 1
        first_rtai = min(deploy_turns) if deploy_turns else None
        max_same = max((len(v) for v in deploy_turns.values()), default=0)
        return cls(
            run=run,
            seed=record.seed,
            outcome=record.outcome_kind,
            turns=record.final_state.turn,
            final_stability=record.final_state.stability,
            stability_by_turn=list(record.stability_by_turn),
            first_rtai_turn=first_rtai,
            max_same_turn_deployers=max_same,
            defections=defections,
            exfiltrations=exfiltrations,
            elections_flipped=flips,
        )

    def csv_row(self) -> dict:
        return {
            "run": self.run,
            "seed": self.seed,
            "outcome": self.outcome,
            "turns": self.turns,
            "final_stability": self.final_stability,
            "first_rtai_turn": "" if self.first_rtai_turn is None else self.first_rtai_turn,
            "max_same_turn_deployers": self.max_same_turn_deployers,
            "defections": self.defections,
            "exfiltrations": self.exfiltrations,
            "elections_flipped": self.elections_flipped,
        }


CSV_FIELDS = list(RunStats(0, 0, "", 0, 0, [], None, 0, 0, 0, 0).csv_row())


def _percentile(sorted_values: list[int], q: float) -> int:
    """Nearest-rank percentile on pre-sorted values."""
    if not sorted_values:
        return 0
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


@dataclass
class OutcomeStats:
    """Aggregate over a seed sweep; order-independent fold of RunStats."""

    n_runs: int
    outcome_counts: dict[str, int]
    stability_trajectory: list[dict]  # per turn: {turn, mean, p10, p90}
    first_rtai_turn: dict[str, int]  # histogram, "none" bucket included
    multipolar_deploy_fraction: float
    defections: int
    exfiltrations: int
    elections_flipped: int

    @classmethod
    def from_runs(cls, runs: list[RunStats], horizon: int) -> "OutcomeStats":
        runs = sorted(runs, key=lambda r: r.run)
        counts: dict[str, int] = {}
        for r in runs:
            counts[r.outcome] = counts.get(r.outcome, 0) + 1

        trajectory = []
        for turn in range(1, horizon + 1):
            values = []
            for r in runs:
                series = r.stability_by_turn
                if not series:
                    continue
                idx = min(turn, len(series)) - 1  # frozen after the game ends
                values.append(series[idx])
            values.sort()
            n = len(values)
            trajectory.append(
                {
                    "turn": turn,
                    "mean": (sum(values) / n) if n else 0.0,
                    "p10": _percentile(values, 0.10),
                    "p90": _percentile(values, 0.90),
                }
            )

        hist: dict[str, int] = {}
        multipolar = 0
        for r in runs:
            key = "none" if r.first_rtai_turn is None else str(r.first_rtai_turn)
            hist[key] = hist.get(key, 0) + 1
            if r.max_same_turn_deployers >= 2:
                multipolar += 1

        return cls(
            n_runs=len(runs),
            outcome_counts={k: counts[k] for k in sorted(counts)},
            stability_trajectory=trajectory,
            first_rtai_turn={k: hist[k] for k in sorted(hist)},
            multipolar_deploy_fraction=multipolar / len(runs) if runs else 0.0,
            defections=sum(r.defections for r in runs),
            exfiltrations=sum(r.exfiltrations for r in runs),
            elections_flipped=sum(r.elections_flipped for r in runs),
        )

    def safe_fraction(self) -> float:
        safe = self.outcome_counts.get("safe_unipolar", 0) + self.outcome_counts.get(
            "safe_multipolar", 0
        )
        return safe / self.n_runs if self.n_runs else 0.0

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "outcome_counts": self.outcome_counts,
            "safe_fraction": self.safe_fraction(),
            "stability_trajectory": self.stability_trajectory,
            "first_rtai_turn": self.first_rtai_turn,
            "multipolar_deploy_fraction": self.multipolar_deploy_fraction,
            "defections": self.defections,
            "exfiltrations": self.exfiltrations,
            "elections_flipped": self.elections_flipped,
        }


def run_seed(master_seed: int, i: int) -> int:
    """Seed for run i of a sweep: splitmix64(master_seed + i)."""
    return splitmix64(master_seed + i)


def _run_chunk(args) -> list[RunStats]:
    scenario_doc, agent_names, master_seed, indices = args
    scenario = Scenario.from_dict(scenario_doc)
    out = []
    for i in indices:
        record = run_game(scenario, agent_names, run_seed(master_seed, i))
        out.append(RunStats.from_record(i, record))
    return out


def monte_carlo(
    scenario: Scenario,
    agents: dict[str, AgentSpec],
    n_runs: int,
    master_seed: int,
    parallelism: int = 1,
) -> OutcomeStats:
    """Outcome distribution over n_runs independent seeds.

    Per-run seeds depend only on (master_seed, run index), so the result is
    identical for any degree of parallelism.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    runs = collect_runs(scenario, agents, n_runs, master_seed, parallelism)
    return OutcomeStats.from_runs(runs, scenario.constants.horizon_turns)


def collect_runs(
    scenario: Scenario,
    agents: dict[str, AgentSpec],
    n_runs: int,
    master_seed: int,
    parallelism: int = 1,
) -> list[RunStats]:
    if parallelism <= 1:
        out = []
        for i in range(n_runs):
            record = run_game(scenario, agents, run_seed(master_seed, i))
            out.append(RunStats.from_record(i, record))
        return out

    agent_names = {
        t: (a if isinstance(a, str) else a.id) for t, a in agents.items()
    }
    doc = scenario.to_dict()
    indices = list(range(n_runs))
    chunks = [indices[i::parallelism] for i in range(parallelism)]
    tasks = [(doc, agent_names, master_seed, chunk) for chunk in chunks if chunk]
    out = []
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        for part in pool.map(_run_chunk, tasks):
            out.extend(part)
    return sorted(out, key=lambda r: r.run)


def write_stats(stats: OutcomeStats, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(stats.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")


def write_runs_csv(runs: list[RunStats], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for r in runs:
            writer.writerow(r.csv_row())
