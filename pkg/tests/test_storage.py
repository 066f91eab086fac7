from __future__ import annotations

import json
import random

import pytest

from defctf.scoreboard import build_scoreboard
from defctf.session import (
    CorruptLog,
    Finished,
    Outcome,
    Started,
    event_from_record,
    event_to_record,
    replay,
)
from defctf.storage import EventStore

from .walker import random_walk


class TestEventWireFormat:
    def test_record_fields(self, sample_pack):
        challenge = sample_pack.challenges[0]
        walk = random_walk(challenge, random.Random(3))
        for seq, event in enumerate(walk.session.events):
            record = event_to_record(event, walk.session.session_id, seq)
            assert set(record) == {"event_type", "session_id", "seq", "payload", "logical_clock"}
            assert record["seq"] == seq

    def test_every_event_round_trips(self, sample_pack):
        rng = random.Random(17)
        for challenge in sample_pack.challenges:
            walk = random_walk(challenge, rng)
            for seq, event in enumerate(walk.session.events):
                record = json.loads(
                    json.dumps(event_to_record(event, "sid", seq))
                )
                assert event_from_record(record) == event

    def test_bad_record_is_corrupt(self):
        with pytest.raises(CorruptLog):
            event_from_record({"event_type": "Nonsense", "payload": {}})
        with pytest.raises(CorruptLog):
            event_from_record({"event_type": "Started", "payload": {}})


class TestEventStore:
    def test_append_then_reopen_restores_sessions(self, tmp_path, sample_pack):
        challenge = sample_pack.challenge("scq-bounded-read")
        walk = random_walk(challenge, random.Random(5))
        store = EventStore(tmp_path)
        store.append(walk.session.session_id, list(walk.session.events))

        reopened = EventStore(tmp_path)
        events = reopened.events(walk.session.session_id)
        assert events == list(walk.session.events)
        assert replay(events, challenge) == walk.session

    def test_incremental_appends_accumulate(self, tmp_path, sample_pack):
        challenge = sample_pack.challenge("scq-bounded-read")
        walk = random_walk(challenge, random.Random(6))
        events = list(walk.session.events)
        store = EventStore(tmp_path)
        store.append("s1", events[:2])
        store.append("s1", events[2:])
        assert store.events("s1") == events
        assert EventStore(tmp_path).events("s1") == events

    def test_unknown_session_is_none(self, tmp_path):
        assert EventStore(tmp_path).events("ghost") is None

    def test_challenge_id_recovered_from_started(self, tmp_path, sample_pack):
        challenge = sample_pack.challenge("teq-bounded-copy")
        walk = random_walk(challenge, random.Random(7))
        store = EventStore(tmp_path)
        store.append(walk.session.session_id, list(walk.session.events))
        assert store.challenge_id_of(walk.session.session_id) == "teq-bounded-copy"

    def test_corrupt_line_refuses_to_load(self, tmp_path):
        (tmp_path / "events.jsonl").write_text("not json at all\n")
        with pytest.raises(CorruptLog):
            EventStore(tmp_path)

    def test_interleaved_sessions_keep_global_order(self, tmp_path):
        store = EventStore(tmp_path)
        store.append("a", [Started("a", "p1", "c1", seed=1)])
        store.append("b", [Started("b", "p2", "c1", seed=2)])
        store.append("a", [Finished(Outcome.SOLVED, 100, flag="FLAG{x}")])
        store.append("b", [Finished(Outcome.SOLVED, 100, flag="FLAG{y}")])
        records = list(store.finished_records())
        assert [(r[1], r[0]) for r in records] == [("a", 2), ("b", 3)]


def finished(player, challenge, score, solved=True):
    outcome = Outcome.SOLVED if solved else Outcome.UNSOLVED
    return player, challenge, Finished(outcome, score)


class TestScoreboard:
    def fold(self, rows):
        records = [
            (order, f"s{order}", player, challenge, event)
            for order, (player, challenge, event) in enumerate(rows)
        ]
        return build_scoreboard(records)

    def test_totals_and_solve_counts(self):
        board = self.fold(
            [
                finished("alice", "c1", 100),
                finished("alice", "c2", 80),
                finished("bob", "c1", 90),
            ]
        )
        assert [(e.player_id, e.solved, e.total_score) for e in board] == [
            ("alice", 2, 180),
            ("bob", 1, 90),
        ]

    def test_unsolved_finishes_do_not_count(self):
        board = self.fold([finished("alice", "c1", 10, solved=False)])
        assert board == []

    def test_repeat_solves_of_same_challenge_count_once(self):
        board = self.fold(
            [
                finished("alice", "c1", 100),
                finished("alice", "c1", 100),
            ]
        )
        assert board[0].solved == 1
        assert board[0].total_score == 100

    def test_equal_scores_tie_break_to_the_earlier_last_solve(self):
        board = self.fold(
            [
                finished("early", "c1", 100),
                finished("late", "c1", 100),
            ]
        )
        assert [e.player_id for e in board] == ["early", "late"]

    def test_higher_score_wins_regardless_of_order(self):
        board = self.fold(
            [
                finished("small", "c1", 50),
                finished("big", "c2", 200),
            ]
        )
        assert [e.player_id for e in board] == ["big", "small"]

    def test_fold_is_reproducible(self):
        rows = [
            finished("a", "c1", 100),
            finished("b", "c1", 100),
            finished("a", "c2", 70),
        ]
        assert self.fold(rows) == self.fold(rows)
