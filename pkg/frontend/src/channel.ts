// Per-seat push channel. Each frame is one JSON message; reconnecting
// replays the current view snapshot (the server sends view on connect).

import type { ChannelMessage } from "./types.js";

export class Channel {
    private ws: WebSocket | null = null;
    private closed = false;
    private backoff = 500;

    constructor(
        private url: string,
        private onMessage: (msg: ChannelMessage) => void,
        private onStatus: (connected: boolean) => void = () => {},
    ) {}

    open(): void {
        this.closed = false;
        this.connect();
    }

    private connect(): void {
        this.ws = new WebSocket(this.url);
        this.ws.onopen = () => {
            this.backoff = 500;
            this.onStatus(true);
        };
        this.ws.onmessage = (event) => {
            for (const line of String(event.data).split("\n")) {
                if (!line.trim()) continue;
                try {
                    this.onMessage(JSON.parse(line) as ChannelMessage);
                } catch {
                    // a malformed frame is dropped, not fatal
                }
            }
        };
        this.ws.onclose = () => {
            this.onStatus(false);
            if (!this.closed) {
                setTimeout(() => this.connect(), this.backoff);
                this.backoff = Math.min(this.backoff * 2, 10_000);
            }
        };
        this.ws.onerror = () => this.ws?.close();
    }

    send(type: string, payload: unknown): void {
        if (this.ws && this.ws.readyState === WebSocket.OPEN) {
            this.ws.send(JSON.stringify({ type, payload }));
        }
    }

    chat(to: string, text: string): void {
        this.send("chat", { to, text });
    }

    requestView(): void {
        this.send("view", {});
    }

    close(): void {
        this.closed = true;
        this.ws?.close();
    }
}
