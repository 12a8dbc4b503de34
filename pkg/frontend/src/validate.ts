// Local mirror of the server's order validation so the composer can
// refuse a submit before the round-trip. The server remains authoritative.

import type { DraftOrders, KnowledgeView, Scenario, TechNode } from "./types.js";

const MAX_ACTIONS = 2;
const CYBER_MODES = ["monitor", "exfiltrate", "sabotage"];

function resourceOf(resources: unknown, name: string): number {
    const value = (resources as Record<string, number | undefined>)[name];
    return value ?? 0;
}

function myProgress(view: KnowledgeView, nodeId: string) {
    return view.progress[view.viewer]?.[nodeId] ?? {};
}

function completedByMe(view: KnowledgeView, nodeId: string): boolean {
    return myProgress(view, nodeId).completed === true;
}

function unlockedForMe(view: KnowledgeView, node: TechNode): boolean {
    return node.prereqs.every((p) => completedByMe(view, p));
}

export function validateDraft(
    draft: DraftOrders,
    view: KnowledgeView,
    scenario: Scenario,
): string[] {
    const problems: string[] = [];
    const nodes = new Map(scenario.tech_tree.map((n) => [n.id, n]));
    const catalog = new Map(scenario.action_catalog.map((a) => [a.kind, a]));
    const me = view.teams[view.viewer];

    if (draft.actions.length > MAX_ACTIONS) {
        problems.push(`max ${MAX_ACTIONS} policy actions`);
    }

    const totals: Record<string, number> = {};
    draft.actions.forEach((action, idx) => {
        const where = `action[${idx}] ${action.kind}`;
        const spec = catalog.get(action.kind);
        if (!spec) {
            problems.push(`${where}: unknown action kind`);
            return;
        }
        if (spec.states_only && me.kind !== "state") {
            problems.push(`${where}: restricted to states`);
        }
        for (const [res, minimum] of Object.entries(spec.requires ?? {})) {
            if (resourceOf(me.resources, res) < minimum) {
                problems.push(`${where}: requires ${res} >= ${minimum}`);
            }
        }
        for (const [res, amount] of Object.entries(spec.costs ?? {})) {
            totals[res] = (totals[res] ?? 0) + amount;
        }
        for (const [name, ptype] of Object.entries(spec.params ?? {})) {
            const value = action.params[name];
            if (value === undefined || value === null || value === "") {
                problems.push(`${where}: missing param ${name}`);
                continue;
            }
            if (ptype === "team" && !(String(value) in view.teams)) {
                problems.push(`${where}: unknown team ${String(value)}`);
            }
            if (ptype === "node" && !nodes.has(String(value))) {
                problems.push(`${where}: unknown node ${String(value)}`);
            }
            if (ptype === "cyber_mode" && !CYBER_MODES.includes(String(value))) {
                problems.push(`${where}: mode must be one of ${CYBER_MODES.join(", ")}`);
            }
            if (ptype === "int" && (!Number.isInteger(value) || (value as number) < 0)) {
                problems.push(`${where}: ${name} must be a non-negative integer`);
            }
        }
        if (
            ["cyber_op", "blockade", "strike"].includes(action.kind) &&
            action.params["target"] === view.viewer
        ) {
            problems.push(`${where}: cannot target yourself`);
        }
    });

    for (const [res, amount] of Object.entries(totals)) {
        if (resourceOf(me.resources, res) < amount) {
            problems.push(`insufficient ${res} for committed actions (${amount} needed)`);
        }
    }

    let allocated = 0;
    for (const [nodeId, points] of Object.entries(draft.rnd_allocation)) {
        const node = nodes.get(nodeId);
        if (!node) {
            problems.push(`allocation: unknown node ${nodeId}`);
            continue;
        }
        if (!Number.isInteger(points) || points < 0) {
            problems.push(`allocation: ${nodeId} must get a non-negative integer`);
            continue;
        }
        allocated += points;
        if (points === 0) continue;
        if (completedByMe(view, nodeId)) {
            problems.push(`allocation: node ${nodeId} already completed`);
        } else if (!unlockedForMe(view, node)) {
            problems.push(`allocation: locked node ${nodeId}`);
        }
    }
    const budget = view.allocatable ?? 0;
    if (allocated > budget) {
        problems.push(`over-allocation: ${allocated} > ${budget} usable points`);
    }

    if (draft.deploy) {
        const node = nodes.get(draft.deploy.project);
        if (!node || node.kind !== "deployment") {
            problems.push(`deploy: ${draft.deploy.project} is not a deployment project`);
        }
    }
    return problems;
}

export function allocationTotal(draft: DraftOrders): number {
    return Object.values(draft.rnd_allocation).reduce((a, b) => a + b, 0);
}
