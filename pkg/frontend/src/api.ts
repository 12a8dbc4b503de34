// Thin REST client for the documented session endpoints.

import type { DraftOrders, ViewPayload } from "./types.js";

export class ApiError extends Error {
    constructor(
        public status: number,
        public code: string,
        message: string,
        public detail: string[] = [],
    ) {
        super(message);
    }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(base + path, {
        headers: { "content-type": "application/json" },
        ...init,
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
        throw new ApiError(
            response.status,
            body.code ?? "error",
            body.message ?? response.statusText,
            body.detail ?? [],
        );
    }
    return body as T;
}

export class SessionApi {
    constructor(
        public base: string,
        public session: string,
        public token: string,
    ) {}

    static async create(
        base: string,
        seed: number,
    ): Promise<{ session_id: string; facilitator_token: string; teams: string[] }> {
        return request(base, "/sessions", { method: "POST", body: JSON.stringify({ seed }) });
    }

    static async join(base: string, session: string, team: string): Promise<{ token: string }> {
        return request(base, `/sessions/${session}/join`, {
            method: "POST",
            body: JSON.stringify({ team }),
        });
    }

    view(): Promise<ViewPayload> {
        return request(this.base, `/sessions/${this.session}/view?token=${this.token}`);
    }

    submitOrders(orders: DraftOrders): Promise<{ ok: boolean; ready: { submitted: string[]; awaiting: string[] } }> {
        return request(this.base, `/sessions/${this.session}/orders?token=${this.token}`, {
            method: "POST",
            body: JSON.stringify(orders),
        });
    }

    advance(force: boolean): Promise<{ turn: number; phase: string }> {
        return request(this.base, `/sessions/${this.session}/advance?token=${this.token}`, {
            method: "POST",
            body: JSON.stringify({ force }),
        });
    }

    override(payload: { dice?: { kind: string; value: number }; shock?: string }): Promise<unknown> {
        return request(this.base, `/sessions/${this.session}/override?token=${this.token}`, {
            method: "POST",
            body: JSON.stringify(payload),
        });
    }

    channelUrl(): string {
        const origin = this.base || window.location.origin;
        const ws = origin.replace(/^http/, "ws");
        return `${ws}/sessions/${this.session}/channel?token=${this.token}`;
    }
}
