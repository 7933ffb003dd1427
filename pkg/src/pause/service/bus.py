"""Server-push event fan-out with bounded queues.

Publishing never blocks the ledger writer: a subscriber whose queue is full
loses events and is handed a single gap marker so it knows to re-fetch
state. Subscribers are plain threads (FastAPI sync endpoints), so this is
queue.Queue, not asyncio.
"""

from __future__ import annotations

import json
import queue
import threading
from typing import Any, Iterator


class Subscriber:
    def __init__(self, maxsize: int):
        self.queue: queue.Queue = queue.Queue(maxsize=maxsize)
        self.gapped = False


class EventBus:
    def __init__(self, queue_size: int = 256):
        self._queue_size = queue_size
        self._subscribers: list[Subscriber] = []
        self._lock = threading.Lock()

    def subscribe(self) -> Subscriber:
        subscriber = Subscriber(self._queue_size)
        with self._lock:
            self._subscribers.append(subscriber)
        return subscriber

    def unsubscribe(self, subscriber: Subscriber) -> None:
        with self._lock:
            if subscriber in self._subscribers:
                self._subscribers.remove(subscriber)

    @property
    def subscriber_count(self) -> int:
        with self._lock:
            return len(self._subscribers)

    def publish(self, event: dict[str, Any]) -> None:
        with self._lock:
            subscribers = list(self._subscribers)
        for subscriber in subscribers:
            if subscriber.gapped:
                # One gap marker replaces everything lost; drain a slot for it.
                try:
                    subscriber.queue.put_nowait({"type": "gap"})
                    subscriber.gapped = False
                except queue.Full:
                    continue
            try:
                subscriber.queue.put_nowait(event)
            except queue.Full:
                subscriber.gapped = True

    def stream(
        self, subscriber: Subscriber, max_events: int = 0, poll_s: float = 0.2
    ) -> Iterator[str]:
        """Yield server-sent-event frames; stops after max_events when set."""
        sent = 0
        try:
            while max_events <= 0 or sent < max_events:
                try:
                    event = subscriber.queue.get(timeout=poll_s)
                except queue.Empty:
                    yield ": keepalive\n\n"
                    continue
                yield f"data: {json.dumps(event, sort_keys=True)}\n\n"
                sent += 1
        finally:
            self.unsubscribe(subscriber)
