// Wire types mirroring the session server's JSON payloads.

export interface Resources {
    soft: number;
    hard: number;
    cyber: number;
    budget?: number;
    talent?: number;
    data?: number;
    compute?: number;
}

export interface TeamView {
    id: string;
    kind: "state" | "corporation";
    allegiance: string | null;
    party: string | null;
    import_dependent: boolean;
    controlled_by: string[];
    ppp_partner: string | null;
    resources: Resources;
    capabilities: string[];
    income?: number;
    rnd_penalty?: number;
    compute_halved_until?: number;
}

export interface ProgressView {
    points?: number;
    completed?: boolean;
    public?: boolean;
    intel_turn?: number;
}

export interface ConcernView {
    id: string;
    source_node: string;
    owner: string;
    severity: number;
    mitigated: boolean;
}

export interface TreatyView {
    id: string;
    parties: string[];
    terms: { kind: string; lane?: string; max_level?: number; min_nodes?: number }[];
    verification_rigor: number;
    status: string;
    contested_at: number | null;
}

export interface GameEventView {
    seq: number;
    turn: number;
    kind: string;
    visibility: { scope: string; teams?: string[] };
    payload: Record<string, unknown>;
}

export interface KnowledgeView {
    viewer: string;
    turn: number;
    year: number;
    stability: number;
    outcome: { kind: string; teams: string[]; team_scores: Record<string, number> } | null;
    teams: Record<string, TeamView>;
    progress: Record<string, Record<string, ProgressView>>;
    concerns: ConcernView[];
    treaties: TreatyView[];
    deployments: { team: string; project: string; turn: number; aligned: boolean }[];
    intel: { target: string; node: string; points: number; completed: boolean; turn: number }[];
    allocatable: number | null;
    events: GameEventView[];
}

export interface TechNode {
    id: string;
    lane: "LM" | "RL";
    level: number;
    kind: "basic" | "application" | "safety" | "deployment";
    cost: number;
    prereqs: string[];
    concern?: { severity: number };
    effects?: { resources?: Record<string, number>; flags?: string[] };
}

export interface ActionSpec {
    kind: string;
    params?: Record<string, string>;
    costs?: Record<string, number>;
    requires?: Record<string, number>;
    states_only?: boolean;
}

export interface Scenario {
    schema_version: string;
    name: string;
    constants: {
        start_stability: number;
        horizon_turns: number;
        start_year: number;
        years_per_turn: number;
        election_period: number;
    };
    teams: { id: string; kind: string; name?: string; allegiance?: string | null }[];
    tech_tree: TechNode[];
    action_catalog: ActionSpec[];
    shock_deck: { id: string; kind: string }[];
}

export interface ViewPayload {
    session: string;
    phase: string;
    turn: number;
    deadline: string | null;
    ready: { submitted: string[]; awaiting: string[] };
    outcome: KnowledgeView["outcome"];
    role: string;
    view: KnowledgeView;
    scenario: Scenario;
    sealed_orders?: Record<string, unknown>;
    state_hash?: string;
}

export interface DraftAction {
    kind: string;
    params: Record<string, unknown>;
    visibility: "public" | "secret";
}

export interface DraftOrders {
    team: string;
    turn: number;
    actions: DraftAction[];
    rnd_allocation: Record<string, number>;
    rnd_secret: boolean;
    treaty_compliance: Record<string, boolean>;
    deploy: { project: string; decline_pause: boolean } | null;
    consent_rtai: string[];
}

export type ChannelMessage =
    | { type: "hello"; payload: { session: string; role: string; phase: string; turn: number } }
    | { type: "view"; payload: ViewPayload }
    | { type: "ready_status"; payload: { phase: string; turn: number; submitted: string[]; awaiting: string[] } }
    | {
          type: "turn_resolved";
          payload: { turn: number; phase: string; outcome: KnowledgeView["outcome"]; events: GameEventView[]; view: KnowledgeView };
      }
    | { type: "chat"; payload: { from: string; to: string; text: string } }
    | { type: "error"; payload: { message: string } };

export function emptyDraft(team: string, turn: number): DraftOrders {
    return {
        team,
        turn,
        actions: [],
        rnd_allocation: {},
        rnd_secret: false,
        treaty_compliance: {},
        deploy: null,
        consent_rtai: [],
    };
}
