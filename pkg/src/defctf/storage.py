"""Durable append-only event store.

All sessions share one JSON-lines file; each line is one event in the
format ``{event_type, session_id, seq, payload, logical_clock}``. File
order gives a global total order across sessions (used by the scoreboard
tie-break), ``seq`` orders events within a session. Appends are flushed
and fsynced before the caller may answer a request, so a crash can at most
lose an unacknowledged response, never fork recorded state.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterator, Optional

from .session import CorruptLog, Finished, SessionEvent, Started, event_from_record, event_to_record

LOG_NAME = "events.jsonl"


class EventStore:
    """Append-only store; keeps an in-memory index rebuilt on open.

    Not thread-safe by itself: callers serialize appends per session and
    hold a store-wide lock around the file write (see the service layer).
    """

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / LOG_NAME
        self._events: dict[str, list[SessionEvent]] = {}
        self._global: list[tuple[str, SessionEvent]] = []
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptLog(f"{self.path}:{line_no}: not valid JSON") from exc
                session_id = record.get("session_id")
                if not isinstance(session_id, str):
                    raise CorruptLog(f"{self.path}:{line_no}: missing session_id")
                event = event_from_record(record)
                self._index(session_id, event)

    def _index(self, session_id: str, event: SessionEvent) -> None:
        self._events.setdefault(session_id, []).append(event)
        self._global.append((session_id, event))

    def append(self, session_id: str, events: list[SessionEvent]) -> None:
        """Durably append events for one session, then index them."""
        start_seq = len(self._events.get(session_id, []))
        lines = [
            json.dumps(event_to_record(event, session_id, start_seq + i), ensure_ascii=False)
            for i, event in enumerate(events)
        ]
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write("".join(line + "\n" for line in lines))
            handle.flush()
            os.fsync(handle.fileno())
        for event in events:
            self._index(session_id, event)

    def events(self, session_id: str) -> Optional[list[SessionEvent]]:
        found = self._events.get(session_id)
        return list(found) if found is not None else None

    def session_ids(self) -> list[str]:
        return list(self._events)

    def challenge_id_of(self, session_id: str) -> Optional[str]:
        events = self._events.get(session_id)
        if not events or not isinstance(events[0], Started):
            return None
        return events[0].challenge_id

    def finished_records(self) -> Iterator[tuple[int, str, str, str, Finished]]:
        """Yield (global_order, session_id, player_id, challenge_id, event)
        for every Finished event, in store order."""
        meta: dict[str, tuple[str, str]] = {}
        for order, (session_id, event) in enumerate(self._global):
            if isinstance(event, Started):
                meta[session_id] = (event.player_id, event.challenge_id)
            elif isinstance(event, Finished):
                player_id, challenge_id = meta.get(session_id, ("?", "?"))
                yield order, session_id, player_id, challenge_id, event
