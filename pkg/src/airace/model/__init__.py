"""Domain model: types, scenario loading, state, views, order validation."""

from .orders import validate_orders
from .scenario import ActionSpec, Constants, Scenario, ShockSpec, default_scenario, load_scenario
from .state import (
    GameState,
    allocatable_points,
    canonical_json,
    creation_event,
    digest_of,
    new_game,
    state_hash,
    usable_rnd_points,
)
from .types import (
    FACILITATOR,
    Concern,
    DeployDecision,
    DeploymentRecord,
    GameEvent,
    GameOutcome,
    IntelEntry,
    Lane,
    NodeKind,
    OutcomeKind,
    PolicyAction,
    ProgressEntry,
    ResourcePool,
    TeamKind,
    TeamSpec,
    TeamState,
    TechNode,
    Treaty,
    TreatyStatus,
    TurnOrders,
    Visibility,
    facilitator_only,
    public,
    team_only,
)
from .views import KnowledgeView, filter_events, knowledge_view

__all__ = [
    "ActionSpec",
    "Concern",
    "Constants",
    "DeployDecision",
    "DeploymentRecord",
    "FACILITATOR",
    "GameEvent",
    "GameOutcome",
    "GameState",
    "IntelEntry",
    "KnowledgeView",
    "Lane",
    "NodeKind",
    "OutcomeKind",
    "PolicyAction",
    "ProgressEntry",
    "ResourcePool",
    "Scenario",
    "ShockSpec",
    "TeamKind",
    "TeamSpec",
    "TeamState",
    "TechNode",
    "Treaty",
    "TreatyStatus",
    "TurnOrders",
    "Visibility",
    "allocatable_points",
    "canonical_json",
    "creation_event",
    "default_scenario",
    "digest_of",
    "facilitator_only",
    "filter_events",
    "knowledge_view",
    "load_scenario",
    "new_game",
    "public",
    "state_hash",
    "team_only",
    "usable_rnd_points",
    "validate_orders",
]
