// Pure renderers: (view model) -> HTML string. Everything shown comes
// from the seat's own payloads; these functions never fabricate data.

import type { ClientStore } from "./state.js";
import type { KnowledgeView, Scenario } from "./types.js";
import { allocationTotal, validateDraft } from "./validate.js";

export function esc(value: unknown): string {
    return String(value)
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

// ------------------------------------------------------------------ lobby

export function lobbyScreen(store: ClientStore): string {
    return `
<section class="card" data-screen="lobby">
  <h2>Join a session</h2>
  <form id="join-form">
    <label>Server <input id="base-url" value="" placeholder="same origin" /></label>
    <label>Session <input id="session-id" placeholder="session id (empty = create new)" /></label>
    <label>Seed <input id="seed" type="number" value="42" /></label>
    <label>Team
      <select id="team-select">
        <option value="">facilitator (create)</option>
      </select>
    </label>
    <label>Token <input id="token" placeholder="existing seat token (optional)" /></label>
    <button type="submit">Enter</button>
  </form>
  <p class="hint">Create a session to receive the facilitator token, then share
  the session id so teams can join their seats.</p>
  ${store.lastError ? `<p class="error">${esc(store.lastError)}</p>` : ""}
</section>`;
}

// -------------------------------------------------------------- dashboard

function resourceRow(label: string, value: unknown): string {
    return value === undefined || value === null
        ? ""
        : `<tr><th>${esc(label)}</th><td>${esc(value)}</td></tr>`;
}

export function teamDashboard(store: ClientStore): string {
    const view = store.view;
    if (!view || !store.scenario) return "<p>waiting for the first view…</p>";
    const me = view.teams[view.viewer];
    const rows = me
        ? ["soft", "hard", "cyber", "budget", "talent", "data", "compute"]
              .map((k) => resourceRow(k, (me.resources as unknown as Record<string, unknown>)[k]))
              .join("")
        : "";
    const others = Object.values(view.teams)
        .filter((t) => t.id !== view.viewer)
        .map(
            (t) => `
      <tr><td>${esc(t.id)}</td><td>${esc(t.kind)}</td>
      <td>${esc(t.resources.soft)}/${esc(t.resources.hard)}/${esc(t.resources.cyber)}</td>
      <td>${t.capabilities.map(esc).join(", ") || "—"}</td></tr>`,
        )
        .join("");
    return `
<section class="card" data-screen="dashboard">
  <h2>${esc(view.viewer)} — turn ${esc(view.turn)} (${esc(view.year)})</h2>
  <p>stability <strong>${esc(view.stability)}</strong>/10
     · usable R&amp;D points <strong>${esc(view.allocatable ?? "—")}</strong>
     ${store.submittedThisTurn ? "· <em>orders submitted</em>" : ""}</p>
  <div class="columns">
    <div><h3>My resources</h3><table>${rows}</table></div>
    <div><h3>Other teams (public posture)</h3>
      <table><tr><th>team</th><th>kind</th><th>soft/hard/cyber</th><th>known capabilities</th></tr>${others}</table>
    </div>
  </div>
  ${techTree(view, store.scenario)}
  ${concernsAndTreaties(view)}
</section>`;
}

export function techTree(view: KnowledgeView, scenario: Scenario): string {
    const mine = view.progress[view.viewer] ?? {};
    const rows = scenario.tech_tree
        .slice()
        .sort((a, b) => (a.lane + a.level + a.kind).localeCompare(b.lane + b.level + b.kind))
        .map((node) => {
            const entry = mine[node.id] ?? {};
            const pts = entry.points ?? 0;
            const locked = !node.prereqs.every((p) => mine[p]?.completed);
            const status = entry.completed ? "done" : locked ? "locked" : `${pts}/${node.cost}`;
            const who = Object.keys(view.progress)
                .filter((t) => t !== view.viewer && view.progress[t]?.[node.id]?.completed)
                .join(", ");
            return `<tr class="${entry.completed ? "done" : locked ? "locked" : "open"}">
              <td>${esc(node.lane)}${esc(node.level)}</td><td>${esc(node.kind)}</td>
              <td>${esc(node.id)}</td><td>${esc(status)}</td><td>${esc(who || "")}</td></tr>`;
        })
        .join("");
    return `<h3>Tech tree</h3>
<table class="tree"><tr><th></th><th>kind</th><th>node</th><th>mine</th><th>also completed by</th></tr>${rows}</table>`;
}

function concernsAndTreaties(view: KnowledgeView): string {
    const concerns = view.concerns
        .map(
            (c) =>
                `<li class="${c.mitigated ? "mitigated" : "open"}">${esc(c.id)} (severity ${esc(
                    c.severity,
                )}, ${c.mitigated ? "mitigated" : "unmitigated"})</li>`,
        )
        .join("");
    const treaties = view.treaties
        .map(
            (t) =>
                `<li>${esc(t.id)}: ${esc(t.status)} — parties ${t.parties.map(esc).join(", ")}, rigor ${esc(
                    t.verification_rigor,
                )}</li>`,
        )
        .join("");
    return `
  <div class="columns">
    <div><h3>Concerns</h3><ul>${concerns || "<li>none</li>"}</ul></div>
    <div><h3>Treaties</h3><ul>${treaties || "<li>none</li>"}</ul></div>
  </div>`;
}

// ---------------------------------------------------------------- composer

export function orderComposer(store: ClientStore): string {
    const view = store.view;
    const scenario = store.scenario;
    const draft = store.draft;
    if (!view || !scenario || !draft) return "";
    const problems = validateDraft(draft, view, scenario);
    const canSubmit = problems.length === 0 && !store.submittedThisTurn && store.phase === "awaiting_orders";
    const kinds = scenario.action_catalog.map((a) => `<option>${esc(a.kind)}</option>`).join("");
    const actions = draft.actions
        .map(
            (a, i) => `<li>${esc(a.kind)} ${esc(JSON.stringify(a.params))}
              <label><input type="checkbox" data-secret="${i}" ${a.visibility === "secret" ? "checked" : ""}/>secret</label>
              <button data-remove-action="${i}">×</button></li>`,
        )
        .join("");
    const mine = view.progress[view.viewer] ?? {};
    const allocRows = scenario.tech_tree
        .filter((n) => !mine[n.id]?.completed && n.prereqs.every((p) => mine[p]?.completed))
        .map(
            (n) => `<tr><td>${esc(n.id)}</td><td>${esc(mine[n.id]?.points ?? 0)}/${esc(n.cost)}</td>
            <td><input type="number" min="0" data-alloc="${esc(n.id)}" value="${esc(
                draft.rnd_allocation[n.id] ?? 0,
            )}"/></td></tr>`,
        )
        .join("");
    const deployable = scenario.tech_tree.filter((n) => n.kind === "deployment");
    const total = allocationTotal(draft);
    return `
<section class="card" data-screen="composer">
  <h2>Orders for turn ${esc(draft.turn)}</h2>
  <h3>Policy actions (${draft.actions.length}/2)</h3>
  <ul id="draft-actions">${actions || "<li>none yet</li>"}</ul>
  <form id="add-action">
    <select id="action-kind">${kinds}</select>
    <input id="action-params" placeholder='params as JSON, e.g. {"target": "prc"}' />
    <button type="submit" ${draft.actions.length >= 2 ? "disabled" : ""}>add</button>
  </form>
  <h3>R&amp;D allocation (${esc(total)}/${esc(view.allocatable ?? 0)})
    <label><input type="checkbox" id="rnd-secret" ${draft.rnd_secret ? "checked" : ""}/>keep secret</label>
  </h3>
  <table>${allocRows || "<tr><td>nothing allocatable</td></tr>"}</table>
  <h3>Deployment</h3>
  <select id="deploy-project">
    <option value="">no deployment</option>
    ${deployable
        .map(
            (n) =>
                `<option value="${esc(n.id)}" ${draft.deploy?.project === n.id ? "selected" : ""}>${esc(
                    n.id,
                )}</option>`,
        )
        .join("")}
  </select>
  <label><input type="checkbox" id="decline-pause" ${
      draft.deploy?.decline_pause ? "checked" : ""
  }/>decline the pause offer (required to actually deploy)</label>
  ${treatyCompliance(store)}
  <div class="problems">${problems.map((p) => `<p class="error">${esc(p)}</p>`).join("")}</div>
  <button id="submit-orders" ${canSubmit ? "" : "disabled"}>
    ${store.submittedThisTurn ? "orders submitted — waiting" : "submit sealed orders"}
  </button>
</section>`;
}

function treatyCompliance(store: ClientStore): string {
    const view = store.view;
    const draft = store.draft;
    if (!view || !draft) return "";
    const mine = view.treaties.filter(
        (t) => t.status === "active" && t.parties.includes(view.viewer),
    );
    if (mine.length === 0) return "";
    return `<h3>Treaty compliance</h3>` + mine
        .map((t) => {
            const comply = draft.treaty_compliance[t.id] !== false;
            return `<label>${esc(t.id)}
            <select data-comply="${esc(t.id)}">
              <option value="comply" ${comply ? "selected" : ""}>comply</option>
              <option value="defect" ${comply ? "" : "selected"}>defect (secret)</option>
            </select></label>`;
        })
        .join("");
}

// ---------------------------------------------------------- facilitator

export function facilitatorConsole(store: ClientStore): string {
    if (store.role !== "facilitator") return "";
    const shocks = store.scenario?.shock_deck ?? [];
    const sealed = store.sealedOrders
        ? `<pre class="sealed">${esc(JSON.stringify(store.sealedOrders, null, 2))}</pre>`
        : "<p>no sealed orders yet</p>";
    return `
<section class="card" data-screen="facilitator">
  <h2>Facilitator console — ${esc(store.phase)}</h2>
  <p>ready: [${store.ready.submitted.map(esc).join(", ")}] · awaiting: [${store.ready.awaiting
        .map(esc)
        .join(", ")}]</p>
  <button id="advance">resolve turn</button>
  <button id="advance-force">force (fill missing with empty orders)</button>
  <form id="override-dice">
    <select id="dice-kind"><option>2d6</option><option>d6</option></select>
    <input id="dice-value" type="number" min="1" max="12" value="12" />
    <button type="submit">queue dice override</button>
  </form>
  <form id="inject-shock">
    <select id="shock-id">${shocks
        .map((s) => `<option value="${esc(s.id)}">${esc(s.kind)}</option>`)
        .join("")}</select>
    <button type="submit">inject shock next turn</button>
  </form>
  <h3>Sealed orders</h3>${sealed}
  ${store.stateHash ? `<p>state hash <code>${esc(store.stateHash)}</code></p>` : ""}
  <h3>Full event feed</h3>
  ${eventFeed(store.feed, 40)}
</section>`;
}

// ------------------------------------------------------------- timeline

export function timelineView(store: ClientStore): string {
    const points = store.stabilityTimeline();
    const bars = points
        .map(
            (p) => `<div class="bar" title="turn ${esc(p.turn)}">
        <div class="fill" style="height:${p.stability * 10}%"></div>
        <span>${esc(p.turn)}:${esc(p.stability)}</span></div>`,
        )
        .join("");
    return `
<section class="card" data-screen="timeline">
  <h2>Timeline</h2>
  <div class="chart">${bars || "<p>no resolved turns yet</p>"}</div>
  <h3>Events</h3>
  ${eventFeed(store.feed, 25)}
</section>`;
}

export function eventFeed(events: { turn: number; kind: string; payload: unknown }[], limit: number): string {
    const rows = events
        .slice(-limit)
        .reverse()
        .map(
            (e) =>
                `<tr><td>t${esc(e.turn)}</td><td>${esc(e.kind)}</td><td><code>${esc(
                    JSON.stringify(e.payload),
                )}</code></td></tr>`,
        )
        .join("");
    return `<table class="feed">${rows}</table>`;
}

// ----------------------------------------------------------------- shell

export function appShell(store: ClientStore): string {
    if (!store.token || !store.view) {
        return lobbyScreen(store);
    }
    const outcome = store.view.outcome
        ? `<section class="card outcome"><h2>Game over: ${esc(store.view.outcome.kind)}</h2>
           <pre>${esc(JSON.stringify(store.view.outcome.team_scores, null, 2))}</pre></section>`
        : "";
    const composer = store.role === "facilitator" ? facilitatorConsole(store) : orderComposer(store);
    return `
<header>
  <strong>session ${esc(store.session)}</strong> · seat ${esc(store.role)} · phase ${esc(store.phase)}
  ${store.lastError ? `<span class="error">${esc(store.lastError)}</span>` : ""}
</header>
${outcome}
${store.role === "facilitator" ? "" : teamDashboard(store)}
${composer}
${timelineView(store)}
${chatPanel(store)}`;
}

export function chatPanel(store: ClientStore): string {
    const lines = store.chat
        .slice(-30)
        .map((c) => `<p><strong>${esc(c.from)}</strong> → ${esc(c.to)}: ${esc(c.text)}</p>`)
        .join("");
    return `
<section class="card" data-screen="chat">
  <h3>Negotiation channel</h3>
  <div class="chat-log">${lines}</div>
  <form id="chat-form">
    <select id="chat-to"><option value="all">everyone</option>${Object.keys(store.view?.teams ?? {})
        .map((t) => `<option>${esc(t)}</option>`)
        .join("")}</select>
    <input id="chat-text" placeholder="say something (relayed verbatim)" />
    <button type="submit">send</button>
  </form>
</section>`;
}
