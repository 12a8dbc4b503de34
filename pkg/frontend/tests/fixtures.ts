// Minimal seat payloads shaped exactly like the server's responses.

import type { KnowledgeView, Scenario } from "../src/types.js";

export function fixtureScenario(): Scenario {
    return {
        schema_version: "1",
        name: "fixture",
        constants: {
            start_stability: 7,
            horizon_turns: 8,
            start_year: 2025,
            years_per_turn: 2,
            election_period: 2,
        },
        teams: [
            { id: "us", kind: "state" },
            { id: "prc", kind: "state" },
            { id: "apex", kind: "corporation", allegiance: "us" },
            { id: "lotus", kind: "corporation", allegiance: "prc" },
        ],
        tech_tree: [
            { id: "lm1", lane: "LM", level: 1, kind: "basic", cost: 10, prereqs: [] },
            { id: "lm2", lane: "LM", level: 2, kind: "basic", cost: 20, prereqs: ["lm1"] },
            {
                id: "lm2_app",
                lane: "LM",
                level: 2,
                kind: "application",
                cost: 25,
                prereqs: ["lm2"],
                concern: { severity: 1 },
            },
            { id: "lm3", lane: "LM", level: 3, kind: "basic", cost: 40, prereqs: ["lm2"] },
            { id: "lm4", lane: "LM", level: 4, kind: "basic", cost: 80, prereqs: ["lm3"] },
            { id: "cais", lane: "LM", level: 4, kind: "deployment", cost: 30, prereqs: ["lm4"] },
            { id: "rl1", lane: "RL", level: 1, kind: "basic", cost: 10, prereqs: [] },
            { id: "rl2", lane: "RL", level: 2, kind: "basic", cost: 20, prereqs: ["rl1"] },
            { id: "rl3", lane: "RL", level: 3, kind: "basic", cost: 40, prereqs: ["rl2"] },
            { id: "rl4", lane: "RL", level: 4, kind: "basic", cost: 80, prereqs: ["rl3"] },
            { id: "agi", lane: "RL", level: 4, kind: "deployment", cost: 30, prereqs: ["rl4"] },
        ],
        action_catalog: [
            { kind: "invest_compute", costs: { budget: 2 } },
            { kind: "build_military", costs: { budget: 2 }, states_only: true },
            { kind: "build_cyber", costs: { budget: 1 } },
            {
                kind: "cyber_op",
                requires: { cyber: 1 },
                params: { target: "team", mode: "cyber_mode", node: "node" },
            },
            { kind: "mitigate", costs: { budget: 2 }, params: { concern: "concern" } },
        ],
        shock_deck: [{ id: "shock_startup", kind: "startup_breakthrough" }],
    };
}

export function fixtureView(viewer = "apex"): KnowledgeView {
    return {
        viewer,
        turn: 1,
        year: 2027,
        stability: 7,
        outcome: null,
        teams: {
            apex: {
                id: "apex",
                kind: "corporation",
                allegiance: "us",
                party: null,
                import_dependent: true,
                controlled_by: [],
                ppp_partner: null,
                resources:
                    viewer === "apex"
                        ? { soft: 5, hard: 0, cyber: 6, budget: 12, talent: 84, data: 84, compute: 84 }
                        : { soft: 5, hard: 0, cyber: 6 },
                capabilities: [],
            },
            lotus: {
                id: "lotus",
                kind: "corporation",
                allegiance: "prc",
                party: null,
                import_dependent: false,
                controlled_by: [],
                ppp_partner: null,
                resources: { soft: 5, hard: 0, cyber: 6 },
                capabilities: [],
            },
            us: {
                id: "us",
                kind: "state",
                allegiance: null,
                party: "A",
                import_dependent: true,
                controlled_by: [],
                ppp_partner: null,
                resources: { soft: 7, hard: 8, cyber: 6 },
                capabilities: [],
            },
            prc: {
                id: "prc",
                kind: "state",
                allegiance: null,
                party: null,
                import_dependent: false,
                controlled_by: [],
                ppp_partner: null,
                resources: { soft: 6, hard: 7, cyber: 7 },
                capabilities: [],
            },
        },
        progress: {
            apex: {
                lm1: { points: 10, completed: true, public: true },
                lm2: { points: 5, completed: false, public: true },
            },
            lotus: { lm1: { completed: true, public: true } },
            us: {},
            prc: {},
        },
        concerns: [],
        treaties: [],
        deployments: [],
        intel: [],
        allocatable: 84,
        events: [
            {
                seq: 7,
                turn: 1,
                kind: "stability_updated",
                visibility: { scope: "public" },
                payload: { before: 7, after: 7, concern_drain: 0, pressure: 0 },
            },
        ],
    };
}
