"""Turn adjudication: dice checks, action resolution, phase loop."""

from .checks import (
    CheckOutcome,
    SafetyOutcome,
    detection_threshold,
    opposed_check,
    opposed_check_probability,
    roll_detection,
    roll_safety,
    safety_threshold,
    two_d6_at_least,
)
from .turn import (
    apply_rnd_allocation,
    attempt_rtai_deployment,
    evaluate_end,
    resolve_turn,
    safety_score,
)

__all__ = [
    "CheckOutcome",
    "SafetyOutcome",
    "apply_rnd_allocation",
    "attempt_rtai_deployment",
    "detection_threshold",
    "evaluate_end",
    "opposed_check",
    "opposed_check_probability",
    "resolve_turn",
    "roll_detection",
    "roll_safety",
    "safety_score",
    "safety_threshold",
    "two_d6_at_least",
]
