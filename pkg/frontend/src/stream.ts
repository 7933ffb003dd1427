// Single event-stream subscription with exponential-backoff reconnect.
// A gap marker means the node dropped events for us: the only safe move is
// a full state re-fetch, surfaced through onGap.

import type { StreamEvent } from "./types.js";

export const BASE_DELAY_MS = 1000;
export const MAX_DELAY_MS = 30000;

export interface EventSourceLike {
  onopen: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export interface StreamHandlers {
  onEvent(event: StreamEvent): void;
  onGap(): void;
  onStatusChange?(connected: boolean): void;
}

export class EventStream {
  private source: EventSourceLike | null = null;
  private attempt = 0;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private shouldReconnect = true;
  connected = false;

  constructor(
    private url: string,
    private handlers: StreamHandlers,
    private factory: EventSourceFactory = (url) =>
      new EventSource(url) as unknown as EventSourceLike,
  ) {}

  delayMs(): number {
    return Math.min(BASE_DELAY_MS * 2 ** this.attempt, MAX_DELAY_MS);
  }

  connect(): void {
    if (this.source) {
      this.source.close();
    }
    this.source = this.factory(this.url);
    this.source.onopen = () => {
      const reconnected = this.attempt > 0;
      this.attempt = 0;
      this.connected = true;
      this.handlers.onStatusChange?.(true);
      if (reconnected) {
        // Anything may have happened while we were away.
        this.handlers.onGap();
      }
    };
    this.source.onerror = () => {
      this.connected = false;
      this.handlers.onStatusChange?.(false);
      this.source?.close();
      this.source = null;
      this.scheduleReconnect();
    };
    this.source.onmessage = (message) => {
      const event = JSON.parse(message.data) as StreamEvent;
      if (event.type === "gap") {
        this.handlers.onGap();
        return;
      }
      this.handlers.onEvent(event);
    };
  }

  private scheduleReconnect(): void {
    if (!this.shouldReconnect || this.reconnectTimer !== null) {
      return;
    }
    const delay = this.delayMs();
    this.attempt += 1;
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      this.connect();
    }, delay);
  }

  close(): void {
    this.shouldReconnect = false;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    this.source?.close();
    this.source = null;
    this.connected = false;
  }
}
