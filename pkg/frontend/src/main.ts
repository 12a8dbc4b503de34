// Bootstrapping and DOM wiring for the single-page client.

import { ApiError, SessionApi } from "./api.js";
import { Channel } from "./channel.js";
import { appShell } from "./render.js";
import { ClientStore } from "./state.js";
import { emptyDraft } from "./types.js";

const store = new ClientStore();
let api: SessionApi | null = null;
let channel: Channel | null = null;

const root = document.getElementById("app")!;

function render(): void {
    root.innerHTML = appShell(store);
    wire();
}

store.subscribe(render);

async function enterSession(base: string, session: string, team: string, token: string, seed: number) {
    try {
        if (!session) {
            const created = await SessionApi.create(base, seed);
            session = created.session_id;
            token = created.facilitator_token;
        } else if (!token) {
            token = (await SessionApi.join(base, session, team)).token;
        }
        api = new SessionApi(base, session, token);
        store.connect(session, token);
        store.applyViewPayload(await api.view());
        if (store.role === "facilitator" && store.phase === "lobby") {
            await api.advance(false); // lobby -> awaiting orders
            store.applyViewPayload(await api.view());
        }
        channel = new Channel(api.channelUrl(), (msg) => store.applyChannelMessage(msg));
        channel.open();
    } catch (err) {
        store.setError(err instanceof Error ? err.message : String(err));
    }
}

function wire(): void {
    const joinForm = document.getElementById("join-form") as HTMLFormElement | null;
    if (joinForm) {
        void populateTeams();
        joinForm.onsubmit = (e) => {
            e.preventDefault();
            const base = value("base-url") || "";
            void enterSession(
                base,
                value("session-id"),
                value("team-select"),
                value("token"),
                parseInt(value("seed") || "42", 10),
            );
        };
    }

    wireComposer();
    wireFacilitator();
    wireChat();
}

function value(id: string): string {
    const el = document.getElementById(id) as HTMLInputElement | HTMLSelectElement | null;
    return el ? el.value.trim() : "";
}

async function populateTeams(): Promise<void> {
    // team options for joining an existing session come from its view only
    // after joining; before that, offer the default roster ids
    const select = document.getElementById("team-select") as HTMLSelectElement | null;
    if (!select || select.options.length > 1) return;
    for (const team of ["us", "prc", "apex", "lotus"]) {
        const option = document.createElement("option");
        option.value = team;
        option.textContent = team;
        select.appendChild(option);
    }
}

function wireComposer(): void {
    if (!store.draft || !api) return;
    const addForm = document.getElementById("add-action") as HTMLFormElement | null;
    if (addForm) {
        addForm.onsubmit = (e) => {
            e.preventDefault();
            let params: Record<string, unknown> = {};
            const raw = value("action-params");
            if (raw) {
                try {
                    params = JSON.parse(raw);
                } catch {
                    store.setError("params must be valid JSON");
                    return;
                }
            }
            store.draft!.actions.push({ kind: value("action-kind"), params, visibility: "public" });
            render();
        };
    }
    document.querySelectorAll<HTMLButtonElement>("[data-remove-action]").forEach((btn) => {
        btn.onclick = () => {
            store.draft!.actions.splice(Number(btn.dataset.removeAction), 1);
            render();
        };
    });
    document.querySelectorAll<HTMLInputElement>("[data-secret]").forEach((box) => {
        box.onchange = () => {
            const action = store.draft!.actions[Number(box.dataset.secret)];
            action.visibility = box.checked ? "secret" : "public";
        };
    });
    document.querySelectorAll<HTMLInputElement>("[data-alloc]").forEach((input) => {
        input.onchange = () => {
            const points = parseInt(input.value || "0", 10);
            if (points > 0) {
                store.draft!.rnd_allocation[input.dataset.alloc!] = points;
            } else {
                delete store.draft!.rnd_allocation[input.dataset.alloc!];
            }
            render();
        };
    });
    const secret = document.getElementById("rnd-secret") as HTMLInputElement | null;
    if (secret) secret.onchange = () => (store.draft!.rnd_secret = secret.checked);
    const project = document.getElementById("deploy-project") as HTMLSelectElement | null;
    const pause = document.getElementById("decline-pause") as HTMLInputElement | null;
    const syncDeploy = () => {
        if (!project || !pause) return;
        store.draft!.deploy = project.value
            ? { project: project.value, decline_pause: pause.checked }
            : null;
        render();
    };
    if (project) project.onchange = syncDeploy;
    if (pause) pause.onchange = syncDeploy;
    document.querySelectorAll<HTMLSelectElement>("[data-comply]").forEach((sel) => {
        sel.onchange = () => {
            store.draft!.treaty_compliance[sel.dataset.comply!] = sel.value === "comply";
        };
    });
    const submit = document.getElementById("submit-orders") as HTMLButtonElement | null;
    if (submit) {
        submit.onclick = async () => {
            try {
                const ack = await api!.submitOrders(store.draft!);
                store.markSubmitted(ack.ready);
            } catch (err) {
                if (err instanceof ApiError && err.detail.length) {
                    store.setError(err.detail.join("; "));
                } else {
                    store.setError(err instanceof Error ? err.message : String(err));
                }
            }
        };
    }
}

function wireFacilitator(): void {
    if (!api) return;
    const advance = document.getElementById("advance") as HTMLButtonElement | null;
    const force = document.getElementById("advance-force") as HTMLButtonElement | null;
    const act = (useForce: boolean) => async () => {
        try {
            await api!.advance(useForce);
            store.applyViewPayload(await api!.view());
        } catch (err) {
            store.setError(err instanceof Error ? err.message : String(err));
        }
    };
    if (advance) advance.onclick = act(false);
    if (force) force.onclick = act(true);
    const diceForm = document.getElementById("override-dice") as HTMLFormElement | null;
    if (diceForm) {
        diceForm.onsubmit = async (e) => {
            e.preventDefault();
            await api!.override({
                dice: { kind: value("dice-kind"), value: parseInt(value("dice-value"), 10) },
            });
        };
    }
    const shockForm = document.getElementById("inject-shock") as HTMLFormElement | null;
    if (shockForm) {
        shockForm.onsubmit = async (e) => {
            e.preventDefault();
            await api!.override({ shock: value("shock-id") });
        };
    }
}

function wireChat(): void {
    const form = document.getElementById("chat-form") as HTMLFormElement | null;
    if (form && channel) {
        form.onsubmit = (e) => {
            e.preventDefault();
            const text = value("chat-text");
            if (text) channel!.chat(value("chat-to") || "all", text);
            (document.getElementById("chat-text") as HTMLInputElement).value = "";
        };
    }
}

render();

export { store, emptyDraft };
