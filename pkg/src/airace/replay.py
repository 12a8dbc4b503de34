"""Event-sourced persistence: append-only `.irlog` files and replay.

Log format: UTF-8 JSON Lines. Line 1 is the header object; every further
line is one event carrying a `crc32` checksum over its canonical form.
Events embed realized dice (the per-turn `turn_dice` record), so replaying
never re-rolls an RNG: each turn is re-resolved against the recorded tape
and the recorded post-turn RNG state is stamped back on.
"""

from __future__ import annotations

import json
import os
import zlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from .errors import CorruptEvent, DigestMismatch, SequenceGap
from .engine.turn import resolve_turn
from .model.scenario import Scenario, default_scenario
from .model.state import GameState, canonical_json, digest_of, new_game, state_hash
from .model.types import GameEvent, TurnOrders
from .rng import GameRng, TapeDice

LOG_SCHEMA_VERSION = "1"


def make_header(scenario: Scenario, seed: int, created_at: Optional[str] = None) -> dict:
    return {
        "schema_version": LOG_SCHEMA_VERSION,
        "scenario_digest": digest_of(scenario.to_dict()),
        "scenario_name": scenario.name,
        "seed": seed,
        "created_at": created_at or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _event_line(event: GameEvent) -> str:
    d = event.to_dict()
    d["crc32"] = zlib.crc32(canonical_json(d).encode("utf-8"))
    return canonical_json(d)


def _parse_event_line(line: str, lineno: int) -> GameEvent:
    try:
        d = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorruptEvent(lineno, f"not valid JSON: {e}") from None
    crc = d.pop("crc32", None)
    if crc is None or zlib.crc32(canonical_json(d).encode("utf-8")) != crc:
        raise CorruptEvent(int(d.get("seq", lineno)), "checksum mismatch")
    return GameEvent.from_dict(d)


@dataclass
class EventLog:
    """In-memory log: header plus a gap-free event sequence from 0."""

    header: dict
    events: list[GameEvent] = field(default_factory=list)

    def append(self, event: GameEvent) -> None:
        expected = self.events[-1].seq + 1 if self.events else 0
        if event.seq != expected:
            raise SequenceGap(f"event seq {event.seq}, expected {expected}")
        self.events.append(event)

    def extend(self, events: list[GameEvent]) -> None:
        for e in events:
            self.append(e)


def append_event(log: EventLog, event: GameEvent) -> EventLog:
    log.append(event)
    return log


class LogWriter:
    """Durable appender: one event per line, fsync at turn boundaries."""

    def __init__(self, path: Union[str, Path], header: dict):
        self.path = Path(path)
        self._last_seq: Optional[int] = None
        self._f = open(self.path, "w", encoding="utf-8")
        self._f.write(canonical_json(header) + "\n")
        self._f.flush()
        os.fsync(self._f.fileno())

    def append(self, event: GameEvent) -> None:
        expected = 0 if self._last_seq is None else self._last_seq + 1
        if event.seq != expected:
            raise SequenceGap(f"event seq {event.seq}, expected {expected}")
        self._last_seq = event.seq
        self._f.write(_event_line(event) + "\n")
        if event.kind == "turn_dice":  # last event of a turn
            self._f.flush()
            os.fsync(self._f.fileno())

    def close(self) -> None:
        self._f.flush()
        os.fsync(self._f.fileno())
        self._f.close()


def write_log(path: Union[str, Path], log: EventLog) -> None:
    writer = LogWriter(path, log.header)
    for e in log.events:
        writer.append(e)
    writer.close()


def read_log(path: Union[str, Path]) -> EventLog:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise CorruptEvent(0, "empty log file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise CorruptEvent(0, f"bad header: {e}") from None
    log = EventLog(header=header)
    for lineno, line in enumerate(lines[1:], start=1):
        if not line.strip():
            continue
        log.append(_parse_event_line(line, lineno))
    return log


def serialize_log(log: EventLog) -> str:
    out = [canonical_json(log.header)]
    out.extend(_event_line(e) for e in log.events)
    return "\n".join(out) + "\n"


def parse_log(text: str) -> EventLog:
    lines = text.splitlines()
    if not lines:
        raise CorruptEvent(0, "empty log")
    log = EventLog(header=json.loads(lines[0]))
    for lineno, line in enumerate(lines[1:], start=1):
        if line.strip():
            log.append(_parse_event_line(line, lineno))
    return log


# ------------------------------------------------------------------ replay


def _turn_groups(events: list[GameEvent]) -> list[dict]:
    """Split the stream into complete turns; a trailing partial turn is
    dropped (state as of the last complete turn)."""
    turns: dict[int, dict] = {}
    for e in events:
        if e.kind == "orders_committed":
            turns.setdefault(e.turn, {})["orders"] = e.payload["orders"]
        elif e.kind == "turn_dice":
            turns.setdefault(e.turn, {})["dice"] = e.payload
        elif e.kind == "shock_drawn" and e.payload.get("injected"):
            turns.setdefault(e.turn, {})["injected_shock"] = e.payload["id"]
    out = []
    for turn in sorted(turns):
        group = turns[turn]
        if "orders" not in group or "dice" not in group:
            break  # truncated: everything from here on is incomplete
        group["turn"] = turn
        out.append(group)
    return out


def replay(
    source: Union[EventLog, str, Path],
    scenario: Optional[Scenario] = None,
    to_turn: Optional[int] = None,
) -> GameState:
    """Left-fold the logged turns over new_game(scenario, seed).

    No RNG is re-rolled: every dice value comes from the recorded per-turn
    tape and the RNG cursor is restored from the recorded snapshots.
    """
    log = source if isinstance(source, EventLog) else read_log(source)
    if scenario is None:
        scenario = default_scenario()
    if log.header.get("scenario_digest") != digest_of(scenario.to_dict()):
        raise DigestMismatch(
            f"log was recorded against scenario {log.header.get('scenario_digest', '?')[:12]}, "
            f"got {digest_of(scenario.to_dict())[:12]}"
        )

    state = new_game(scenario, int(log.header["seed"]))
    for group in _turn_groups(log.events):
        if to_turn is not None and group["turn"] > to_turn:
            break
        orders = {t: TurnOrders.from_dict(o) for t, o in group["orders"].items()}
        dice = TapeDice(
            faces=group["dice"]["draws"],
            rng_after=GameRng.from_dict(group["dice"]["rng_after"]),
        )
        state, _ = resolve_turn(
            state, orders, dice, injected_shock=group.get("injected_shock")
        )
    return state


def record_log(record) -> EventLog:
    """EventLog for a finished GameRecord (see montecarlo.run_game)."""
    log = EventLog(header=make_header(record.scenario, record.seed))
    log.extend(record.events)
    return log


def verify_roundtrip(record) -> bool:
    """Replay a record's log and compare final state hashes."""
    log = record_log(record)
    replayed = replay(log, record.scenario)
    return state_hash(replayed) == state_hash(record.final_state)
