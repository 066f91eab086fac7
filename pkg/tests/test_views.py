from __future__ import annotations

import json
import random

from defctf.session import Outcome, StageTag, acknowledge, request_hint, start_session, submit
from defctf.views import player_view

from .test_session import correct_choice, wrong_choice
from .walker import random_walk

ANSWER_KEY_FIELDS = {
    "correct_index",
    "correct_indices",
    "correct_units",
    "answer_map",
    "accepted_answers",
    "rule_set",
    "known_good",
    "known_bad",
    "pattern",
}


def field_names(obj) -> set:
    names = set()
    if isinstance(obj, dict):
        for key, value in obj.items():
            names.add(key)
            names |= field_names(value)
    elif isinstance(obj, list):
        for value in obj:
            names |= field_names(value)
    return names


def test_views_never_contain_answer_key_fields(sample_pack):
    rng = random.Random(42)
    for i in range(60):
        challenge = sample_pack.challenges[i % 6]
        walk = random_walk(challenge, rng)
        for prefix in range(1, len(walk.session.events) + 1):
            from defctf.session import replay

            partial = replay(list(walk.session.events[:prefix]), challenge)
            view = player_view(partial, challenge).to_dict()
            assert field_names(view) & ANSWER_KEY_FIELDS == set()


def test_intro_view_shows_framing_text(sample_pack):
    challenge = sample_pack.challenge("scq-bounded-read")
    session = start_session(challenge, "p", seed=1)
    view = player_view(session, challenge)
    assert view.stage == "intro"
    assert view.intro_text == challenge.intro.text
    assert view.body is None


def test_challenge_view_presents_shuffled_options(sample_pack):
    challenge = sample_pack.challenge("scq-bounded-read")
    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    view = player_view(session, challenge)
    assert view.stage == "challenge"
    assert sorted(view.body["options"]) == sorted(challenge.body.options)
    assert view.guiding_question == challenge.body.guiding_question


def test_explaining_view_carries_the_policy_text(sample_pack):
    challenge = sample_pack.challenge("mcq-injection-defenses")
    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    from defctf.grading import MultiChoiceSubmission

    result = submit(session, challenge, MultiChoiceSubmission(frozenset({0})))
    view = player_view(result.session, challenge)
    assert view.stage == "explaining"
    assert view.explanation == challenge.wrong_branch.explanation


def test_conclusion_and_finished_views_show_lesson_and_flag(sample_pack):
    challenge = sample_pack.challenge("scq-bounded-read")
    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    session = submit(session, challenge, correct_choice(challenge, session)).session
    conclusion_view = player_view(session, challenge)
    assert conclusion_view.stage == "conclusion"
    assert conclusion_view.explanation == challenge.conclusion.explanation
    assert conclusion_view.flag is None

    done = acknowledge(session, challenge, server_secret="s")
    final_view = player_view(done, challenge)
    assert final_view.stage == "finished"
    assert final_view.outcome == "solved"
    assert final_view.flag == done.flag
    # lesson travels together with the flag
    assert final_view.explanation == challenge.conclusion.explanation


def test_unsolved_finish_shows_no_flag_and_no_lesson(sample_pack):
    challenge = sample_pack.challenge("teq-bounded-copy")
    from defctf.grading import TextSubmission

    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    done = submit(session, challenge, TextSubmission("wrong"), server_secret="s").session
    view = player_view(done, challenge)
    assert view.outcome == "unsolved"
    assert view.flag is None
    assert view.explanation is None


def test_taken_hints_stay_visible_with_costs(sample_pack):
    challenge = sample_pack.challenge("alr-guideline-match")
    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    grant = request_hint(session, challenge, clock=0)  # url-only hint unlocks immediately
    view = player_view(grant.session, challenge)
    assert [h["hint_id"] for h in view.taken_hints] == ["alr-h1"]
    assert view.taken_hints[0]["url"].startswith("https://")
    assert view.score == 90


def test_hint_counters_and_next_unlock(sample_pack):
    challenge = sample_pack.challenge("alr-guideline-match")
    session = acknowledge(start_session(challenge, "p", seed=1), challenge)
    view = player_view(session, challenge)
    assert view.available_hint_count == 1  # the unlock-free reference hint
    assert "60s" in view.next_unlock

    session = request_hint(session, challenge, clock=0).session
    session = submit(session, challenge, wrong_submission_for_alr(session, challenge)).session
    session = acknowledge(session, challenge)  # through the explain-then-return
    view = player_view(session, challenge)
    assert view.available_hint_count == 1  # the attempt-gated hint opened up
    assert view.next_unlock is None


def wrong_submission_for_alr(session, challenge):
    from defctf.grading import MappingSubmission

    n = len(challenge.body.left)
    return MappingSubmission(tuple((i, 0) for i in range(n)))


def test_view_serializes_to_plain_json(sample_pack):
    challenge = sample_pack.challenge("cec-bounded-format")
    session = start_session(challenge, "p", seed=1)
    payload = json.dumps(player_view(session, challenge).to_dict())
    assert "starter_code" not in payload  # still in intro, body not shown yet
