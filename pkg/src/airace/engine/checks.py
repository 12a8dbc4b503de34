"""Dice checks: opposed contests, safety rolls, defection detection.

Ties always favour the defender/incumbent, which makes every probability
here exactly enumerable over the 36x36 table of 2d6 pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..rng import DiceSource


@dataclass(frozen=True)
class CheckOutcome:
    attacker_total: int
    defender_total: int
    success: bool
    margin: int

    def to_dict(self) -> dict:
        return {
            "attacker_total": self.attacker_total,
            "defender_total": self.defender_total,
            "success": self.success,
            "margin": self.margin,
        }


def opposed_check(attacker_attr: int, defender_attr: int, dice: DiceSource) -> CheckOutcome:
    """2d6 + attribute each, attacker rolls first; success iff strictly
    greater."""
    attacker_total = dice.roll_2d6() + attacker_attr
    defender_total = dice.roll_2d6() + defender_attr
    margin = attacker_total - defender_total
    return CheckOutcome(
        attacker_total=attacker_total,
        defender_total=defender_total,
        success=margin > 0,
        margin=margin,
    )


def opposed_check_probability(attr_diff: int) -> Fraction:
    """Exact P(attacker wins) over all 1296 dice pairs, by enumeration."""
    wins = 0
    for a1 in range(1, 7):
        for a2 in range(1, 7):
            for d1 in range(1, 7):
                for d2 in range(1, 7):
                    if a1 + a2 + attr_diff > d1 + d2:
                        wins += 1
    return Fraction(wins, 1296)


def two_d6_at_least(threshold: int) -> Fraction:
    """Exact P(2d6 >= threshold)."""
    hits = sum(1 for a in range(1, 7) for b in range(1, 7) if a + b >= threshold)
    return Fraction(hits, 36)


def safety_threshold(safety_score: Fraction) -> int:
    """Map a safety share s in [0, 1] onto a 2d6 target: 11 - round(8s).

    s = 0 leaves alignment at 3/36; s = 1 raises it to 35/36 - never
    certain, a dice roll is always required.
    """
    scaled = 8 * Fraction(safety_score)
    rounded = int(scaled) if scaled.denominator == 1 else round(scaled)
    return 11 - rounded


@dataclass(frozen=True)
class SafetyOutcome:
    team: str
    threshold: int
    roll: int
    aligned: bool

    def to_dict(self) -> dict:
        return {
            "team": self.team,
            "threshold": self.threshold,
            "roll": self.roll,
            "aligned": self.aligned,
        }


def roll_safety(team: str, safety_score: Fraction, dice: DiceSource) -> SafetyOutcome:
    threshold = safety_threshold(safety_score)
    roll = dice.roll_2d6()
    return SafetyOutcome(team=team, threshold=threshold, roll=roll, aligned=roll >= threshold)


def detection_threshold(verification_rigor: int) -> int:
    """Defection is caught on 2d6 >= 12 - 2 * rigor."""
    return 12 - 2 * verification_rigor


def roll_detection(verification_rigor: int, dice: DiceSource) -> tuple[int, bool]:
    roll = dice.roll_2d6()
    return roll, roll >= detection_threshold(verification_rigor)
