import { describe, expect, it } from "vitest";

import { ClientStore } from "../src/state.js";
import type { ViewPayload } from "../src/types.js";
import { fixtureScenario, fixtureView } from "./fixtures.js";

function payload(viewer = "apex"): ViewPayload {
    return {
        session: "s1",
        phase: "awaiting_orders",
        turn: 1,
        deadline: null,
        ready: { submitted: [], awaiting: ["apex", "lotus", "prc", "us"] },
        outcome: null,
        role: viewer,
        view: fixtureView(viewer),
        scenario: fixtureScenario(),
    };
}

describe("client store", () => {
    it("applies a view payload and opens a draft for the next turn", () => {
        const store = new ClientStore();
        store.applyViewPayload(payload());
        expect(store.role).toBe("apex");
        expect(store.draft?.turn).toBe(2);
        expect(store.view?.stability).toBe(7);
    });

    it("tracks ready status pushes", () => {
        const store = new ClientStore();
        store.applyViewPayload(payload());
        store.applyChannelMessage({
            type: "ready_status",
            payload: { phase: "awaiting_orders", turn: 1, submitted: ["prc"], awaiting: ["apex"] },
        });
        expect(store.ready.submitted).toEqual(["prc"]);
    });

    it("resets the draft after a turn resolves", () => {
        const store = new ClientStore();
        store.applyViewPayload(payload());
        store.draft!.rnd_allocation = { lm2: 15 };
        const view = fixtureView();
        view.turn = 2;
        store.applyChannelMessage({
            type: "turn_resolved",
            payload: { turn: 2, phase: "awaiting_orders", outcome: null, events: [], view },
        });
        expect(store.draft?.turn).toBe(3);
        expect(store.draft?.rnd_allocation).toEqual({});
        expect(store.submittedThisTurn).toBe(false);
    });

    it("collects chat and errors", () => {
        const store = new ClientStore();
        store.applyChannelMessage({ type: "chat", payload: { from: "us", to: "all", text: "hi" } });
        store.applyChannelMessage({ type: "error", payload: { message: "nope" } });
        expect(store.chat).toHaveLength(1);
        expect(store.lastError).toBe("nope");
    });

    it("derives the stability timeline from public events only", () => {
        const store = new ClientStore();
        store.applyViewPayload(payload());
        expect(store.stabilityTimeline()).toEqual([{ turn: 1, stability: 7 }]);
    });

    it("facilitator seats never get a draft", () => {
        const store = new ClientStore();
        const p = payload();
        p.role = "facilitator";
        store.applyViewPayload(p);
        expect(store.draft).toBeNull();
    });
});
