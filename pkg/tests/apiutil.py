"""Helpers for driving the HTTP service in tests.

``Api`` wraps a TestClient with a bearer token and records every response
body it sees, so confidentiality scans can look at the full wire history.
The submission builders compute presented-space answers from the pack,
which tests are allowed to know even though the wire never shows keys.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Optional

from fastapi.testclient import TestClient

from defctf.model import (
    AssociateBody,
    Challenge,
    ChallengeBody,
    ChallengePack,
    CodeEntryBody,
    CodeSnippetBody,
    MultiChoiceBody,
    SingleChoiceBody,
    TextEntryBody,
)
from defctf.presentation import PresentedBody
from defctf.service import ServiceConfig, create_app
from defctf.session import (
    presented_conclusion_question,
    presented_intro_quiz,
    presented_main,
)

TOKENS = {"alice-token": "alice", "bob-token": "bob"}
SECRET = "test-server-secret"


class FakeClock:
    def __init__(self, start: float = 1_000_000.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


def make_config(storage_dir: Path, pack: ChallengePack, clock: Optional[FakeClock] = None) -> ServiceConfig:
    return ServiceConfig(
        packs=[pack],
        server_secret=SECRET,
        storage_dir=storage_dir,
        tokens=dict(TOKENS),
        clock=clock or FakeClock(),
    )


class Api:
    def __init__(self, config: ServiceConfig, token: str = "alice-token"):
        self.client = TestClient(create_app(config), raise_server_exceptions=True)
        self.token = token
        self.responses: list[tuple[str, int, str]] = []  # (path, status, body text)

    def _headers(self) -> dict:
        return {"Authorization": f"Bearer {self.token}"} if self.token else {}

    def _record(self, path: str, response) -> None:
        self.responses.append((path, response.status_code, response.text))

    def get(self, path: str):
        response = self.client.get(f"/api/v1{path}", headers=self._headers())
        self._record(path, response)
        return response

    def post(self, path: str, payload: dict):
        response = self.client.post(f"/api/v1{path}", json=payload, headers=self._headers())
        self._record(path, response)
        return response

    def challenges(self):
        return self.get("/challenges")

    def create_session(self, challenge_id: str, seed: Optional[int] = None):
        payload: dict = {"challenge_id": challenge_id}
        if seed is not None:
            payload["seed"] = seed
        return self.post("/sessions", payload)

    def view(self, session_id: str):
        return self.get(f"/sessions/{session_id}")

    def answer(self, session_id: str, submission: dict, seq: Optional[int] = None):
        payload: dict = {"submission": submission}
        if seq is not None:
            payload["seq"] = seq
        return self.post(f"/sessions/{session_id}/answer", payload)

    def hint(self, session_id: str, seq: Optional[int] = None):
        payload: dict = {} if seq is None else {"seq": seq}
        return self.post(f"/sessions/{session_id}/hint", payload)

    def ack(self, session_id: str, seq: Optional[int] = None):
        payload: dict = {} if seq is None else {"seq": seq}
        return self.post(f"/sessions/{session_id}/ack", payload)


def submission_for(body: ChallengeBody, presented: PresentedBody, *, correct: bool) -> dict:
    """A presented-space wire submission, correct or deliberately wrong."""
    if isinstance(body, SingleChoiceBody):
        right = presented.index_remap.index(body.correct_index)
        index = right if correct else (right + 1) % len(presented.index_remap)
        return {"type": "scq", "chosen_index": index}
    if isinstance(body, MultiChoiceBody):
        right = sorted(presented.index_remap.index(i) for i in body.correct_indices)
        if correct:
            return {"type": "mcq", "chosen_indices": right}
        return {"type": "mcq", "chosen_indices": right[:1]}
    if isinstance(body, TextEntryBody):
        return {"type": "teq", "text": body.accepted_answers[0] if correct else "not the answer"}
    if isinstance(body, CodeSnippetBody):
        right = sorted(body.correct_units)
        if correct:
            return {"type": "csc", "chosen_units": right}
        n = len(body.selectable_units)
        wrong = [i for i in range(n) if i not in body.correct_units][:1]
        return {"type": "csc", "chosen_units": wrong or []}
    if isinstance(body, CodeEntryBody):
        return {"type": "cec", "code": body.known_good[0] if correct else body.known_bad[0]}
    if isinstance(body, AssociateBody):
        answer = body.answer_dict()
        mapping = {
            str(left): presented.index_remap.index(right) for left, right in answer.items()
        }
        if not correct:
            keys = sorted(mapping)
            mapping[keys[0]], mapping[keys[1]] = mapping[keys[1]], mapping[keys[0]]
        return {"type": "alr", "proposed_map": mapping}
    raise TypeError(type(body))


def play_challenge(
    api: Api,
    challenge: Challenge,
    *,
    seed: int,
    take_hints: bool = True,
    fail_first: bool = True,
) -> tuple[str, dict]:
    """Drive one challenge to Finished over the API; returns (session_id, last body).

    Goes wrong-then-right where the wrong branch returns to the challenge,
    straight to the solve otherwise, acknowledging every intermediate stage.
    """
    created = api.create_session(challenge.id, seed=seed).json()
    session_id = created["session_id"]
    state = created
    guard = 0
    while state["view"]["stage"] != "finished":
        guard += 1
        assert guard < 30, f"stuck at {state['view']['stage']}"
        stage = state["view"]["stage"]
        seq = state["seq"]
        if stage in ("intro", "explaining", "conclusion"):
            state = api.ack(session_id, seq=seq).json()
        elif stage == "intro_quiz":
            quiz = challenge.intro.quiz
            presented = presented_intro_quiz(seed, quiz)
            state = api.answer(session_id, submission_for(quiz, presented, correct=True), seq=seq).json()
        elif stage == "conclusion_question":
            question = challenge.correct_branch.additional_question
            presented = presented_conclusion_question(seed, question)
            state = api.answer(
                session_id, submission_for(question, presented, correct=True), seq=seq
            ).json()
        elif stage == "challenge":
            presented = presented_main(seed, challenge.body)
            if take_hints and state["view"]["available_hint_count"] > 0:
                state = api.hint(session_id, seq=seq).json()
                continue
            returns = challenge.wrong_branch.policy.value in (
                "return-to-challenge",
                "explain-then-return",
            )
            if fail_first and state["view"]["attempts"] == 0 and returns:
                state = api.answer(
                    session_id, submission_for(challenge.body, presented, correct=False), seq=seq
                ).json()
            else:
                state = api.answer(
                    session_id, submission_for(challenge.body, presented, correct=True), seq=seq
                ).json()
        else:  # pragma: no cover
            raise AssertionError(stage)
    return session_id, state
