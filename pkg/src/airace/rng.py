"""Deterministic game RNG: splitmix64 seed expansion into xoshiro256**.

Every dice roll in the engine goes through a DiceSource so that replay and
facilitator overrides can substitute draws without touching game logic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once, returning (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def splitmix64(seed: int) -> int:
    """One splitmix64 output for a seed; used to derive stream seeds."""
    _, out = splitmix64_next(seed & _MASK64)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


@dataclass
class GameRng:
    """xoshiro256** generator with a serializable 256-bit state."""

    s: list[int] = field(default_factory=lambda: [1, 2, 3, 4])

    @classmethod
    def from_seed(cls, seed: int) -> "GameRng":
        state = seed & _MASK64
        words = []
        for _ in range(4):
            state, out = splitmix64_next(state)
            words.append(out)
        return cls(s=words)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def to_dict(self) -> dict:
        return {"algo": "xoshiro256**", "s": list(self.s)}

    @classmethod
    def from_dict(cls, d: dict) -> "GameRng":
        if d.get("algo") != "xoshiro256**":
            raise ValueError(f"unknown rng algorithm: {d.get('algo')!r}")
        s = [int(w) & _MASK64 for w in d["s"]]
        if len(s) != 4:
            raise ValueError("rng state must have 4 words")
        return cls(s=s)

    def copy(self) -> "GameRng":
        return GameRng(s=list(self.s))


class DiceSource:
    """Dice interface used by the adjudication engine.

    Implementations must record every d6 draw in `tape` so the turn log can
    embed realized rolls.
    """

    tape: list[int]

    def roll_d6(self) -> int:
        raise NotImplementedError

    def roll_2d6(self) -> int:
        return self.roll_d6() + self.roll_d6()

    def result_rng(self) -> "GameRng | None":
        """RNG state to stamp onto the post-turn game state, if any."""
        return None


class RngDice(DiceSource):
    """Primary dice source: d6 = 1 + (next_u64 mod 6)."""

    def __init__(self, rng: GameRng):
        self.rng = rng
        self.tape: list[int] = []

    def roll_d6(self) -> int:
        face = 1 + (self.rng.next_u64() % 6)
        self.tape.append(face)
        return face

    def result_rng(self) -> GameRng:
        return self.rng


class TapeDice(DiceSource):
    """Replays a recorded sequence of d6 faces; never touches an RNG."""

    def __init__(self, faces: list[int], rng_after: "GameRng | None" = None):
        self._faces = list(faces)
        self._pos = 0
        self.tape: list[int] = []
        self.rng_after = rng_after

    def roll_d6(self) -> int:
        if self._pos >= len(self._faces):
            raise IndexError("dice tape exhausted")
        face = self._faces[self._pos]
        self._pos += 1
        self.tape.append(face)
        return face

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._faces)

    def result_rng(self) -> "GameRng | None":
        return self.rng_after


class OverridableDice(DiceSource):
    """Wraps another source, substituting queued facilitator overrides.

    An override replaces the value of the next matching roll; the underlying
    draws are still consumed so the RNG state advances identically.
    """

    def __init__(self, inner: DiceSource):
        self.inner = inner
        self._d6_queue: list[int] = []
        self._2d6_queue: list[int] = []
        self.substitutions: list[dict] = []

    @property
    def tape(self) -> list[int]:  # type: ignore[override]
        return self.inner.tape

    def result_rng(self) -> "GameRng | None":
        return self.inner.result_rng()

    def queue_d6(self, value: int) -> None:
        if not 1 <= value <= 6:
            raise ValueError("d6 override must be in 1..6")
        self._d6_queue.append(value)

    def queue_2d6(self, value: int) -> None:
        if not 2 <= value <= 12:
            raise ValueError("2d6 override must be in 2..12")
        self._2d6_queue.append(value)

    def roll_d6(self) -> int:
        real = self.inner.roll_d6()
        if self._d6_queue:
            value = self._d6_queue.pop(0)
            # rewrite the tape so replay sees the substituted face
            self.inner.tape[-1] = value
            self.substitutions.append({"kind": "d6", "rolled": real, "used": value})
            return value
        return real

    def roll_2d6(self) -> int:
        if self._2d6_queue:
            value = self._2d6_queue.pop(0)
            a = self.inner.roll_d6()
            b = self.inner.roll_d6()
            # split the override into two pseudo-faces for the tape
            hi = min(6, value - 1)
            lo = value - hi
            self.inner.tape[-2] = hi
            self.inner.tape[-1] = lo
            self.substitutions.append({"kind": "2d6", "rolled": a + b, "used": value})
            return value
        return self.inner.roll_d6() + self.inner.roll_d6()
