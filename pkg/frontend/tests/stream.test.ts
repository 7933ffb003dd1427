// Event stream behavior: gap markers force a refresh, reconnects back off.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { absorbStreamEvent } from "../src/engagement.js";
import { ViewState } from "../src/state.js";
import { BASE_DELAY_MS, EventStream } from "../src/stream.js";
import type { EventSourceLike } from "../src/stream.js";
import type { EngagementCaseJson, StreamEvent } from "../src/types.js";
import { loadFixture } from "./fixtures.js";

class FakeEventSource implements EventSourceLike {
  onopen: ((ev: unknown) => void) | null = null;
  onerror: ((ev: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  closed = false;

  close(): void {
    this.closed = true;
  }

  emit(event: object): void {
    this.onmessage?.({ data: JSON.stringify(event) });
  }
}

describe("event stream", () => {
  let sources: FakeEventSource[];
  let events: StreamEvent[];
  let gaps: number;
  let stream: EventStream;

  beforeEach(() => {
    vi.useFakeTimers();
    sources = [];
    events = [];
    gaps = 0;
    stream = new EventStream(
      "/events",
      {
        onEvent: (e) => events.push(e),
        onGap: () => {
          gaps += 1;
        },
      },
      () => {
        const source = new FakeEventSource();
        sources.push(source);
        return source;
      },
    );
  });

  afterEach(() => {
    stream.close();
    vi.useRealTimers();
  });

  it("delivers events and counts gap markers separately", () => {
    stream.connect();
    const source = sources[0]!;
    source.onopen?.(null);
    source.emit({ type: "block", height: 0, block_hash: "aa", entries: 1 });
    source.emit({ type: "gap" });
    source.emit({ type: "trust", source_id: "s1", trust: 0.75 });
    expect(events.map((e) => e.type)).toEqual(["block", "trust"]);
    expect(gaps).toBe(1);
  });

  it("reconnects with exponential backoff and refreshes on reopen", () => {
    stream.connect();
    expect(sources).toHaveLength(1);
    sources[0]!.onerror?.(null);
    expect(stream.delayMs()).toBe(BASE_DELAY_MS * 2);
    vi.advanceTimersByTime(BASE_DELAY_MS);
    expect(sources).toHaveLength(2);
    sources[1]!.onerror?.(null);
    vi.advanceTimersByTime(BASE_DELAY_MS * 2);
    expect(sources).toHaveLength(3);
    // Reopening after a drop counts as a gap: state must be re-fetched.
    sources[2]!.onopen?.(null);
    expect(gaps).toBe(1);
    expect(stream.connected).toBe(true);
  });

  it("close stops reconnecting", () => {
    stream.connect();
    sources[0]!.onerror?.(null);
    stream.close();
    vi.advanceTimersByTime(BASE_DELAY_MS * 10);
    expect(sources).toHaveLength(1);
  });
});

describe("stream events feed the review queue", () => {
  it("conflicts become dismissible alerts and reviews", () => {
    const state = new ViewState();
    absorbStreamEvent(state, {
      type: "conflict",
      code: "C1",
      reason: "red_cross contained in tank (frame 0)",
      related_digest: null,
    });
    expect(state.activeAlerts()).toHaveLength(1);
    expect(state.reviews).toHaveLength(1);
    state.dismissAlert(state.activeAlerts()[0]!.id);
    expect(state.activeAlerts()).toHaveLength(0);
  });

  it("engagement events queue with the machine assessment", () => {
    const state = new ViewState();
    const engagement = loadFixture<EngagementCaseJson>("engagement");
    absorbStreamEvent(state, { type: "engagement", ...engagement });
    expect(state.reviews[0]!.machineAssessment).toBe(
      engagement.machine.assessment,
    );
  });
});
