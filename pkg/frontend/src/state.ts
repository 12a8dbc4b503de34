// Client-side view model: exactly what this seat has been sent, plus the
// draft orders being composed. Nothing here guesses at hidden state.

import type {
    ChannelMessage,
    DraftOrders,
    GameEventView,
    KnowledgeView,
    Scenario,
    ViewPayload,
} from "./types.js";
import { emptyDraft } from "./types.js";

export interface ReadyStatus {
    submitted: string[];
    awaiting: string[];
}

export type Listener = () => void;

export class ClientStore {
    session = "";
    token = "";
    role = "";
    phase = "lobby";
    turn = 0;
    view: KnowledgeView | null = null;
    scenario: Scenario | null = null;
    ready: ReadyStatus = { submitted: [], awaiting: [] };
    draft: DraftOrders | null = null;
    feed: GameEventView[] = [];
    chat: { from: string; to: string; text: string }[] = [];
    sealedOrders: Record<string, unknown> | null = null;
    stateHash: string | null = null;
    lastError = "";
    submittedThisTurn = false;

    private listeners: Listener[] = [];

    subscribe(fn: Listener): void {
        this.listeners.push(fn);
    }

    private emit(): void {
        for (const fn of this.listeners) fn();
    }

    connect(session: string, token: string): void {
        this.session = session;
        this.token = token;
        this.emit();
    }

    applyViewPayload(payload: ViewPayload): void {
        this.role = payload.role;
        this.phase = payload.phase;
        this.turn = payload.turn;
        this.view = payload.view;
        this.scenario = payload.scenario;
        this.ready = payload.ready;
        this.sealedOrders = payload.sealed_orders ?? null;
        this.stateHash = payload.state_hash ?? null;
        this.feed = payload.view.events;
        if (!this.draft || this.draft.turn !== payload.turn + 1) {
            this.draft = this.role === "facilitator" ? null : emptyDraft(this.role, payload.turn + 1);
            this.submittedThisTurn = this.ready.submitted.includes(this.role);
        }
        this.emit();
    }

    applyChannelMessage(msg: ChannelMessage): void {
        switch (msg.type) {
            case "hello":
                this.role = msg.payload.role;
                this.phase = msg.payload.phase;
                this.turn = msg.payload.turn;
                break;
            case "view":
                this.applyViewPayload(msg.payload);
                return; // applyViewPayload already emitted
            case "ready_status":
                this.ready = { submitted: msg.payload.submitted, awaiting: msg.payload.awaiting };
                this.phase = msg.payload.phase;
                this.submittedThisTurn = this.ready.submitted.includes(this.role);
                break;
            case "turn_resolved":
                this.turn = msg.payload.turn;
                this.phase = msg.payload.phase;
                this.view = msg.payload.view;
                this.feed = msg.payload.view.events;
                this.draft = this.role === "facilitator" ? null : emptyDraft(this.role, this.turn + 1);
                this.submittedThisTurn = false;
                break;
            case "chat":
                this.chat.push(msg.payload);
                break;
            case "error":
                this.lastError = msg.payload.message;
                break;
        }
        this.emit();
    }

    markSubmitted(ready: ReadyStatus): void {
        this.submittedThisTurn = true;
        this.ready = ready;
        this.emit();
    }

    setError(message: string): void {
        this.lastError = message;
        this.emit();
    }

    stabilityTimeline(): { turn: number; stability: number }[] {
        const out: { turn: number; stability: number }[] = [];
        for (const e of this.feed) {
            if (e.kind === "stability_updated") {
                out.push({ turn: e.turn, stability: Number(e.payload["after"]) });
            }
        }
        return out;
    }
}
