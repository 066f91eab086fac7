from __future__ import annotations

import dataclasses
import threading

import pytest

from defctf.model import ScorePolicy
from defctf.packio import ParseError
from defctf.service import ConfigError, ServiceConfig, create_app
from defctf.session import presented_main

from .apiutil import SECRET, Api, FakeClock, make_config, play_challenge, submission_for


@pytest.fixture()
def config(tmp_path, sample_pack):
    return make_config(tmp_path / "data", sample_pack)


@pytest.fixture()
def api(config):
    return Api(config)


class TestStartup:
    def test_missing_secret_refuses_to_start(self, tmp_path, sample_pack):
        config = make_config(tmp_path, sample_pack)
        config.server_secret = ""
        with pytest.raises(ConfigError, match="secret"):
            create_app(config)

    def test_invalid_pack_fails_fast(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"pack_id": "x"}')
        config = ServiceConfig(
            pack_paths=[bad], server_secret="s", storage_dir=tmp_path / "d", tokens={"t": "p"}
        )
        with pytest.raises(ParseError):
            create_app(config)

    def test_no_packs_refused(self, tmp_path):
        config = ServiceConfig(server_secret="s", storage_dir=tmp_path, tokens={"t": "p"})
        with pytest.raises(ConfigError, match="no packs"):
            create_app(config)


class TestAuth:
    def test_missing_token_is_401(self, config):
        api = Api(config, token="")
        response = api.challenges()
        assert response.status_code == 401
        assert response.json()["error"] == "unauthorized"

    def test_unknown_token_is_401(self, config):
        api = Api(config, token="who-dis")
        assert api.challenges().status_code == 401

    def test_other_players_sessions_are_invisible(self, config, sample_pack):
        alice = Api(config, token="alice-token")
        session_id = alice.create_session("scq-bounded-read", seed=1).json()["session_id"]
        bob = Api.__new__(Api)
        bob.client = alice.client  # same service instance, different identity
        bob.token = "bob-token"
        bob.responses = []
        assert bob.view(session_id).status_code == 404


class TestChallengeList:
    def test_lists_one_summary_per_challenge(self, api):
        listing = api.challenges().json()
        assert len(listing) == 6
        assert {entry["type"] for entry in listing} == {"scq", "mcq", "teq", "csc", "cec", "alr"}
        assert all(
            set(entry) == {"id", "title", "type", "base_points"} for entry in listing
        )


class TestSessionEndpoints:
    def test_create_and_fetch_round_trip(self, api):
        created = api.create_session("scq-bounded-read", seed=5).json()
        fetched = api.view(created["session_id"]).json()
        assert fetched == created

    def test_unknown_challenge_404(self, api):
        assert api.create_session("nope").status_code == 404

    def test_unknown_session_404(self, api):
        assert api.view("missing").status_code == 404

    def test_malformed_body_400(self, api):
        response = api.client.post(
            "/api/v1/sessions",
            content=b"{nope",
            headers={"Authorization": "Bearer alice-token", "Content-Type": "application/json"},
        )
        assert response.status_code == 400
        assert response.json()["error"] == "malformed"

    def test_answer_in_wrong_stage_422(self, api, sample_pack):
        session = api.create_session("scq-bounded-read", seed=5).json()  # intro stage
        response = api.answer(session["session_id"], {"type": "scq", "chosen_index": 0})
        assert response.status_code == 422
        assert response.json()["error"] == "wrong_stage"

    def test_variant_mismatch_422(self, api):
        session = api.create_session("teq-bounded-copy", seed=5).json()
        api.ack(session["session_id"])
        response = api.answer(session["session_id"], {"type": "scq", "chosen_index": 0})
        assert response.status_code == 422
        assert response.json()["error"] == "variant_mismatch"

    def test_out_of_range_submission_400(self, api):
        session = api.create_session("scq-bounded-read", seed=5).json()
        api.ack(session["session_id"])
        response = api.answer(session["session_id"], {"type": "scq", "chosen_index": 99})
        assert response.status_code == 400

    def test_full_solve_over_the_wire(self, api, sample_pack):
        challenge = sample_pack.challenge("scq-bounded-read")
        session_id, final = play_challenge(api, challenge, seed=11)
        view = final["view"]
        assert view["stage"] == "finished"
        assert view["outcome"] == "solved"
        assert view["flag"].startswith("FLAG{")
        assert view["explanation"] == challenge.conclusion.explanation

    def test_verdict_is_accepted_or_rejected_string(self, api, sample_pack):
        challenge = sample_pack.challenge("teq-bounded-copy")
        session = api.create_session(challenge.id, seed=2).json()
        api.ack(session["session_id"])
        response = api.answer(session["session_id"], {"type": "teq", "text": "nope"})
        assert response.json()["verdict"] == "rejected"

    def test_cec_rejection_returns_coach_feedback(self, api, sample_pack):
        challenge = sample_pack.challenge("cec-bounded-format")
        session = api.create_session(challenge.id, seed=3).json()
        state = api.ack(session["session_id"], seq=session["seq"]).json()  # intro
        state = api.answer(
            session["session_id"],
            {"type": "scq", "chosen_index": 0},
            seq=state["seq"],
        ).json()  # intro quiz, any answer proceeds
        response = api.answer(
            session["session_id"], {"type": "cec", "code": challenge.body.starter_code}
        )
        body = response.json()
        assert body["verdict"] == "rejected"
        assert any("strcpy" in message for message in body["feedback"])

    def test_hint_endpoint_returns_text_cost_and_updated_score(self, api, sample_pack):
        challenge = sample_pack.challenge("alr-guideline-match")
        session = api.create_session(challenge.id, seed=4).json()
        state = api.ack(session["session_id"]).json()
        response = api.hint(session["session_id"]).json()
        assert response["hint_id"] == "alr-h1"
        assert response["cost"] == 10
        assert response["view"]["score"] == 90

    def test_locked_hint_reports_unlock_condition(self, api, sample_pack):
        session = api.create_session("scq-bounded-read", seed=4).json()
        api.ack(session["session_id"])
        response = api.hint(session["session_id"]).json()
        assert response["hint"] == "locked"
        assert "60s" in response["unlock_hint"]


class TestOptimisticConcurrency:
    def test_stale_seq_conflicts(self, api, sample_pack):
        session = api.create_session("scq-bounded-read", seed=9).json()
        first = api.ack(session["session_id"], seq=session["seq"])
        assert first.status_code == 200
        second = api.ack(session["session_id"], seq=session["seq"])
        assert second.status_code == 409
        assert second.json()["error"] == "conflict"

    def test_racing_submits_apply_exactly_once(self, config, sample_pack):
        api = Api(config)
        challenge = sample_pack.challenge("scq-bounded-read")
        session = api.create_session(challenge.id, seed=9).json()
        state = api.ack(session["session_id"], seq=session["seq"]).json()
        presented = presented_main(9, challenge.body)
        submission = submission_for(challenge.body, presented, correct=False)

        statuses = []
        barrier = threading.Barrier(2)

        def race():
            barrier.wait()
            response = api.answer(session["session_id"], submission, seq=state["seq"])
            statuses.append(response.status_code)

        threads = [threading.Thread(target=race) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(statuses) == [200, 409]
        # exactly one attempt recorded
        assert api.view(session["session_id"]).json()["view"]["attempts"] == 1


class TestRestartRecovery:
    def test_restarted_service_serves_identical_view(self, tmp_path, sample_pack):
        storage = tmp_path / "data"
        clock = FakeClock()
        first = Api(make_config(storage, sample_pack, clock))
        challenge = sample_pack.challenge("mcq-injection-defenses")
        session = first.create_session(challenge.id, seed=21).json()
        state = first.ack(session["session_id"], seq=session["seq"]).json()
        state = first.hint(session["session_id"]).json() if False else state
        before = first.view(session["session_id"]).json()

        second = Api(make_config(storage, sample_pack, clock))
        after = second.view(session["session_id"]).json()
        assert after == before

    def test_recovery_midway_through_branches(self, tmp_path, sample_pack):
        storage = tmp_path / "data"
        clock = FakeClock()
        first = Api(make_config(storage, sample_pack, clock))
        challenge = sample_pack.challenge("mcq-injection-defenses")
        session = first.create_session(challenge.id, seed=33).json()
        state = first.ack(session["session_id"], seq=session["seq"]).json()
        presented = presented_main(33, challenge.body)
        state = first.answer(
            session["session_id"],
            submission_for(challenge.body, presented, correct=False),
            seq=state["seq"],
        ).json()
        assert state["view"]["stage"] == "explaining"
        before = first.view(session["session_id"]).json()

        second = Api(make_config(storage, sample_pack, clock))
        assert second.view(session["session_id"]).json() == before
        # and the revived session still plays on
        state = second.ack(session["session_id"], seq=before["seq"]).json()
        assert state["view"]["stage"] == "challenge"

    def test_solves_survive_restart_on_the_scoreboard(self, tmp_path, sample_pack):
        storage = tmp_path / "data"
        first = Api(make_config(storage, sample_pack))
        challenge = sample_pack.challenge("teq-bounded-copy")
        play_challenge(first, challenge, seed=2, take_hints=False)

        second = Api(make_config(storage, sample_pack))
        board = second.get("/scoreboard").json()
        assert board[0]["player_id"] == "alice"
        assert board[0]["solved"] == 1


class TestScoreboardEndpoint:
    def test_orders_by_score_then_earlier_solve(self, config, sample_pack):
        alice = Api(config, token="alice-token")
        bob = Api.__new__(Api)
        bob.client = alice.client
        bob.token = "bob-token"
        bob.responses = []

        challenge = sample_pack.challenge("teq-bounded-copy")
        play_challenge(alice, challenge, seed=2, take_hints=False)
        play_challenge(bob, challenge, seed=3, take_hints=False)

        board = alice.get("/scoreboard").json()
        assert [entry["player_id"] for entry in board] == ["alice", "bob"]
        assert board[0]["total_score"] == board[1]["total_score"] == 80
        assert board[0]["last_solve"] < board[1]["last_solve"]

    def test_hint_cost_shows_up_in_totals(self, config, sample_pack):
        api = Api(config)
        challenge = sample_pack.challenge("alr-guideline-match")
        play_challenge(api, challenge, seed=5, take_hints=True, fail_first=False)
        board = api.get("/scoreboard").json()
        assert board[0]["total_score"] == 90  # 100 - url hint cost 10
