"""Event-sourced session engine.

One session is one player's run through one challenge. Every state change
is an event; the live operations build events and fold them through the
same transition function that :func:`replay` uses, so a stored log always
reconstructs exactly the session that produced it.

Stage flow (intro phase, challenge phase, conclusion phase):

    Intro -> [IntroQuiz] -> Challenge <-> Explaining
                               |              |
                               v              v
             [ConclusionQuestion] -> Conclusion -> Finished(solved)
                               \\---------------> Finished(unsolved)

A wrong answer takes one of four branches (return, explain-then-return,
proceed-to-finish, explain-then-finish); a correct answer either finishes
immediately or passes through the conclusion stage first. The flag exists
only at Finished(solved).

The engine never reads a wall clock: callers inject a logical clock
(seconds since session start), which keeps sessions deterministic and
replayable.
"""

from __future__ import annotations

import hashlib
import hmac
import uuid
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from .grading import (
    Submission,
    VariantMismatch,
    Verdict,
    grade,
    submission_from_dict,
    submission_to_dict,
)
from .model import Challenge, ChallengeBody, CorrectBranch, HintSpec, WrongBranch
from .presentation import PresentedBody, derive_seed, randomize_presentation, remap_submission


class WrongStage(Exception):
    """The requested action is not legal in the session's current stage."""

    def __init__(self, action: str, stage: "StageTag"):
        super().__init__(f"cannot {action} while in stage {stage.value}")
        self.action = action
        self.stage = stage


class NotSolved(Exception):
    """Flag requested for a session that has not solved its challenge."""


class CorruptLog(Exception):
    """An event log contains an illegal transition or inconsistent data."""


class StageTag(str, Enum):
    INTRO = "intro"
    INTRO_QUIZ = "intro_quiz"
    CHALLENGE = "challenge"
    EXPLAINING = "explaining"
    CONCLUSION_QUESTION = "conclusion_question"
    CONCLUSION = "conclusion"
    FINISHED = "finished"


class Outcome(str, Enum):
    SOLVED = "solved"
    UNSOLVED = "unsolved"


@dataclass(frozen=True)
class StageState:
    tag: StageTag
    explanation: Optional[str] = None  # Explaining only
    next_tag: Optional[StageTag] = None  # Explaining only: CHALLENGE or FINISHED
    outcome: Optional[Outcome] = None  # Finished only


# --- events -----------------------------------------------------------------

@dataclass(frozen=True)
class Started:
    session_id: str
    player_id: str
    challenge_id: str
    seed: int
    started_at: float = 0.0
    clock: int = 0


@dataclass(frozen=True)
class IntroAcknowledged:
    clock: int = 0


@dataclass(frozen=True)
class IntroQuizAnswered:
    submission: Submission
    verdict: Verdict
    clock: int = 0


@dataclass(frozen=True)
class HintRequested:
    hint_id: str
    cost: int
    clock: int = 0


@dataclass(frozen=True)
class Answered:
    submission: Submission
    verdict: Verdict
    clock: int = 0


@dataclass(frozen=True)
class ExplanationShown:
    clock: int = 0


@dataclass(frozen=True)
class ConclusionAnswered:
    submission: Submission
    verdict: Verdict
    clock: int = 0


@dataclass(frozen=True)
class Finished:
    outcome: Outcome
    score: int
    flag: Optional[str] = None
    clock: int = 0


SessionEvent = Union[
    Started,
    IntroAcknowledged,
    IntroQuizAnswered,
    HintRequested,
    Answered,
    ExplanationShown,
    ConclusionAnswered,
    Finished,
]


@dataclass(frozen=True)
class Session:
    session_id: str
    player_id: str
    challenge_id: str
    seed: int
    started_at: float
    stage: StageState
    attempts: int = 0
    hints_taken: tuple[str, ...] = ()
    hint_cost_total: int = 0
    clock: int = 0
    score: int = 0
    flag: Optional[str] = None
    closed: bool = False
    events: tuple[SessionEvent, ...] = ()

    @property
    def seq(self) -> int:
        """Number of recorded events; doubles as the optimistic-lock token."""
        return len(self.events)

    @property
    def solved(self) -> bool:
        return self.stage.tag is StageTag.FINISHED and self.stage.outcome is Outcome.SOLVED


# --- presentation surfaces ---------------------------------------------------

def presented_for_stage(session: Session, challenge: Challenge) -> Optional[PresentedBody]:
    """The presented body for the session's current interactive stage."""
    tag = session.stage.tag
    if tag is StageTag.INTRO_QUIZ and challenge.intro and challenge.intro.quiz:
        return presented_intro_quiz(session.seed, challenge.intro.quiz)
    if tag is StageTag.CHALLENGE:
        return presented_main(session.seed, challenge.body)
    if tag is StageTag.CONCLUSION_QUESTION and challenge.correct_branch.additional_question:
        return presented_conclusion_question(
            session.seed, challenge.correct_branch.additional_question
        )
    return None


def presented_main(seed: int, body: ChallengeBody) -> PresentedBody:
    return randomize_presentation(body, derive_seed(seed, "main"))


def presented_intro_quiz(seed: int, body: ChallengeBody) -> PresentedBody:
    return randomize_presentation(body, derive_seed(seed, "intro"))


def presented_conclusion_question(seed: int, body: ChallengeBody) -> PresentedBody:
    return randomize_presentation(body, derive_seed(seed, "conclusion"))


# --- scoring ----------------------------------------------------------------

def compute_score(session: Session, challenge: Challenge) -> int:
    """Current score under the challenge's penalty policy.

    Deductions are exact integer arithmetic, clamped at the policy floor.
    The first failed attempt is free; each further one costs retry_penalty
    when retry penalties are enabled. An unsolved finish scores the floor.
    """
    policy = challenge.score_policy
    if session.stage.tag is StageTag.FINISHED and session.stage.outcome is Outcome.UNSOLVED:
        return policy.min_score
    total = challenge.base_points
    if policy.penalize_hints:
        total -= session.hint_cost_total
    if policy.penalize_retries:
        total -= policy.retry_penalty * max(0, session.attempts - 1)
    return max(policy.min_score, total)


def flag_for(server_secret: str, session_id: str, challenge_id: str) -> str:
    digest = hmac.new(
        server_secret.encode("utf-8"),
        f"{session_id}\x1f{challenge_id}".encode("utf-8"),
        hashlib.sha256,
    ).hexdigest()
    return "FLAG{" + digest[:16] + "}"


def issue_flag(session: Session, server_secret: str) -> str:
    """Deterministic per-(secret, session, challenge) flag. Solved sessions only."""
    if not session.solved:
        raise NotSolved(f"session {session.session_id} is not at Finished(solved)")
    return flag_for(server_secret, session.session_id, session.challenge_id)


# --- transition function ------------------------------------------------------

_ATTEMPTS_EXHAUSTED = "Maximum attempts reached."


def _initial_stage(challenge: Challenge) -> StageState:
    if challenge.intro is not None:
        return StageState(StageTag.INTRO)
    return StageState(StageTag.CHALLENGE)


def _wrong_branch_stage(session: Session, challenge: Challenge, attempts: int) -> StageState:
    policy = challenge.wrong_branch
    exhausted = policy.max_attempts is not None and attempts >= policy.max_attempts
    if policy.policy is WrongBranch.PROCEED_TO_FINISH:
        return StageState(StageTag.FINISHED, outcome=Outcome.UNSOLVED)
    if policy.policy is WrongBranch.EXPLAIN_THEN_FINISH:
        return StageState(
            StageTag.EXPLAINING, explanation=policy.explanation, next_tag=StageTag.FINISHED
        )
    # return variants; escalate to explain-then-finish once attempts run out
    if exhausted:
        return StageState(
            StageTag.EXPLAINING,
            explanation=policy.explanation or _ATTEMPTS_EXHAUSTED,
            next_tag=StageTag.FINISHED,
        )
    if policy.policy is WrongBranch.EXPLAIN_THEN_RETURN:
        return StageState(
            StageTag.EXPLAINING, explanation=policy.explanation, next_tag=StageTag.CHALLENGE
        )
    return StageState(StageTag.CHALLENGE)


def _correct_branch_stage(challenge: Challenge) -> StageState:
    policy = challenge.correct_branch
    if policy.policy is CorrectBranch.FINISH:
        return StageState(StageTag.FINISHED, outcome=Outcome.SOLVED)
    if policy.additional_question is not None:
        return StageState(StageTag.CONCLUSION_QUESTION)
    return StageState(StageTag.CONCLUSION)


def apply_event(session: Optional[Session], event: SessionEvent, challenge: Challenge) -> Session:
    """Fold one event into a session state.

    Raises :class:`CorruptLog` for any event that is illegal where it
    appears. Live operations only construct events that this function
    accepts, so logs written by the engine always replay.
    """
    if isinstance(event, Started):
        if session is not None:
            raise CorruptLog("Started event after session start")
        if event.challenge_id != challenge.id:
            raise CorruptLog(
                f"log is for challenge {event.challenge_id!r}, not {challenge.id!r}"
            )
        initial = Session(
            session_id=event.session_id,
            player_id=event.player_id,
            challenge_id=event.challenge_id,
            seed=event.seed,
            started_at=event.started_at,
            stage=_initial_stage(challenge),
            clock=event.clock,
            events=(event,),
        )
        return replace(initial, score=compute_score(initial, challenge))

    if session is None:
        raise CorruptLog(f"log must begin with Started, got {type(event).__name__}")
    if session.closed:
        raise CorruptLog(f"{type(event).__name__} after session finished")

    clock = max(session.clock, event.clock)
    base = replace(session, clock=clock, events=session.events + (event,))
    tag = session.stage.tag

    if isinstance(event, IntroAcknowledged):
        if tag is not StageTag.INTRO:
            raise CorruptLog(f"IntroAcknowledged in stage {tag.value}")
        if challenge.intro is not None and challenge.intro.quiz is not None:
            return replace(base, stage=StageState(StageTag.INTRO_QUIZ))
        return replace(base, stage=StageState(StageTag.CHALLENGE))

    if isinstance(event, IntroQuizAnswered):
        if tag is not StageTag.INTRO_QUIZ:
            raise CorruptLog(f"IntroQuizAnswered in stage {tag.value}")
        gating = challenge.intro.gating if challenge.intro else False
        if gating and not event.verdict.accepted:
            return base
        return replace(base, stage=StageState(StageTag.CHALLENGE))

    if isinstance(event, HintRequested):
        if tag is not StageTag.CHALLENGE:
            raise CorruptLog(f"HintRequested in stage {tag.value}")
        if event.hint_id in session.hints_taken:
            raise CorruptLog(f"hint {event.hint_id!r} taken twice")
        if all(h.hint_id != event.hint_id for h in challenge.hints):
            raise CorruptLog(f"unknown hint {event.hint_id!r}")
        updated = replace(
            base,
            hints_taken=session.hints_taken + (event.hint_id,),
            hint_cost_total=session.hint_cost_total + event.cost,
        )
        return replace(updated, score=compute_score(updated, challenge))

    if isinstance(event, Answered):
        if tag is not StageTag.CHALLENGE:
            raise CorruptLog(f"Answered in stage {tag.value}")
        if event.verdict.accepted:
            updated = replace(base, stage=_correct_branch_stage(challenge))
        else:
            attempts = session.attempts + 1
            updated = replace(
                base,
                attempts=attempts,
                stage=_wrong_branch_stage(session, challenge, attempts),
            )
        return replace(updated, score=compute_score(updated, challenge))

    if isinstance(event, ExplanationShown):
        if tag is not StageTag.EXPLAINING:
            raise CorruptLog(f"ExplanationShown in stage {tag.value}")
        if session.stage.next_tag is StageTag.FINISHED:
            updated = replace(
                base, stage=StageState(StageTag.FINISHED, outcome=Outcome.UNSOLVED)
            )
        else:
            updated = replace(base, stage=StageState(StageTag.CHALLENGE))
        return replace(updated, score=compute_score(updated, challenge))

    if isinstance(event, ConclusionAnswered):
        if tag is not StageTag.CONCLUSION_QUESTION:
            raise CorruptLog(f"ConclusionAnswered in stage {tag.value}")
        return replace(base, stage=StageState(StageTag.CONCLUSION))

    if isinstance(event, Finished):
        if tag is StageTag.CONCLUSION:
            if event.outcome is not Outcome.SOLVED:
                raise CorruptLog("conclusion stage can only finish solved")
            updated = replace(
                base, stage=StageState(StageTag.FINISHED, outcome=Outcome.SOLVED)
            )
        elif tag is StageTag.FINISHED:
            if session.stage.outcome is not event.outcome:
                raise CorruptLog(
                    f"Finished({event.outcome.value}) in stage finished({session.stage.outcome})"
                )
            updated = base
        else:
            raise CorruptLog(f"Finished in stage {tag.value}")
        expected = compute_score(updated, challenge)
        if event.score != expected:
            raise CorruptLog(f"Finished score {event.score} != computed {expected}")
        if event.flag is not None and event.outcome is not Outcome.SOLVED:
            raise CorruptLog("flag recorded for an unsolved session")
        return replace(updated, score=expected, flag=event.flag, closed=True)

    raise CorruptLog(f"unknown event {type(event).__name__}")  # pragma: no cover


def replay(events: list[SessionEvent], challenge: Challenge) -> Session:
    """Rebuild a session from its event log.

    The result is identical, field for field, to the live session that
    produced the log. Raises :class:`CorruptLog` on empty or illegal logs.
    """
    if not events:
        raise CorruptLog("empty event log")
    session: Optional[Session] = None
    for event in events:
        session = apply_event(session, event, challenge)
    assert session is not None
    return session


# --- live operations ----------------------------------------------------------

@dataclass(frozen=True)
class HintGrant:
    session: Session
    hint: Optional[HintSpec]  # None when locked
    locked_reason: Optional[str] = None


@dataclass(frozen=True)
class SubmitResult:
    session: Session
    verdict: Verdict


def start_session(
    challenge: Challenge,
    player_id: str,
    seed: int,
    session_id: Optional[str] = None,
    started_at: float = 0.0,
) -> Session:
    """Open a session: score starts at base_points, stage at intro or challenge."""
    event = Started(
        session_id=session_id or uuid.uuid4().hex,
        player_id=player_id,
        challenge_id=challenge.id,
        seed=seed,
        started_at=started_at,
    )
    return apply_event(None, event, challenge)


def _maybe_finish(
    session: Session, challenge: Challenge, server_secret: Optional[str], clock: int
) -> Session:
    """Append the terminal Finished record when a transition lands there."""
    if session.stage.tag is not StageTag.FINISHED or session.closed:
        return session
    outcome = session.stage.outcome
    assert outcome is not None
    flag = None
    if outcome is Outcome.SOLVED and server_secret is not None:
        flag = flag_for(server_secret, session.session_id, session.challenge_id)
    event = Finished(outcome=outcome, score=session.score, flag=flag, clock=clock)
    return apply_event(session, event, challenge)


def submit(
    session: Session,
    challenge: Challenge,
    submission: Submission,
    clock: Optional[int] = None,
    server_secret: Optional[str] = None,
) -> SubmitResult:
    """Grade a presented-space submission and advance the stage.

    The submission's indices refer to the presented (shuffled) order; they
    are remapped to original indices before grading.
    """
    clock = session.clock if clock is None else max(session.clock, clock)
    tag = session.stage.tag

    if tag is StageTag.INTRO_QUIZ:
        assert challenge.intro is not None and challenge.intro.quiz is not None
        body = challenge.intro.quiz
        presented = presented_intro_quiz(session.seed, body)
    elif tag is StageTag.CHALLENGE:
        body = challenge.body
        presented = presented_main(session.seed, body)
    elif tag is StageTag.CONCLUSION_QUESTION:
        question = challenge.correct_branch.additional_question
        assert question is not None
        body = question
        presented = presented_conclusion_question(session.seed, body)
    else:
        raise WrongStage("submit an answer", tag)

    if submission.type_tag is not body.type_tag:
        raise VariantMismatch(body.type_tag, submission.type_tag)
    verdict = grade(body, remap_submission(presented, submission))
    # events record the submission as the player sent it (presented space);
    # replay never re-grades, so a stored log also works as a dryrun script
    if tag is StageTag.INTRO_QUIZ:
        event: SessionEvent = IntroQuizAnswered(submission, verdict, clock=clock)
    elif tag is StageTag.CHALLENGE:
        event = Answered(submission, verdict, clock=clock)
    else:
        event = ConclusionAnswered(submission, verdict, clock=clock)

    updated = apply_event(session, event, challenge)
    updated = _maybe_finish(updated, challenge, server_secret, clock)
    return SubmitResult(session=updated, verdict=verdict)


def request_hint(session: Session, challenge: Challenge, clock: Optional[int] = None) -> HintGrant:
    """Return the first unlockable untaken hint, or why none is available.

    Unlocking is an OR over the time and failed-attempt thresholds; the
    hint's cost is recorded in the event and deducted only when the score
    policy penalizes hints.
    """
    if session.stage.tag is not StageTag.CHALLENGE:
        raise WrongStage("request a hint", session.stage.tag)
    clock = session.clock if clock is None else max(session.clock, clock)

    untaken = [h for h in challenge.hints if h.hint_id not in session.hints_taken]
    if not untaken:
        reason = "no hints remaining" if challenge.hints else "this challenge has no hints"
        return HintGrant(session=session, hint=None, locked_reason=reason)
    for hint in untaken:
        if hint.unlock.satisfied(clock, session.attempts):
            event = HintRequested(hint_id=hint.hint_id, cost=hint.cost, clock=clock)
            return HintGrant(session=apply_event(session, event, challenge), hint=hint)
    return HintGrant(session=session, hint=None, locked_reason=untaken[0].unlock.describe())


def acknowledge(
    session: Session,
    challenge: Challenge,
    clock: Optional[int] = None,
    server_secret: Optional[str] = None,
) -> Session:
    """Advance past a non-interactive stage (intro, explanation, conclusion)."""
    clock = session.clock if clock is None else max(session.clock, clock)
    tag = session.stage.tag

    if tag is StageTag.INTRO:
        return apply_event(session, IntroAcknowledged(clock=clock), challenge)
    if tag is StageTag.EXPLAINING:
        updated = apply_event(session, ExplanationShown(clock=clock), challenge)
        return _maybe_finish(updated, challenge, server_secret, clock)
    if tag is StageTag.CONCLUSION:
        solved = replace(session, stage=StageState(StageTag.FINISHED, outcome=Outcome.SOLVED))
        flag = None
        if server_secret is not None:
            flag = flag_for(server_secret, session.session_id, session.challenge_id)
        event = Finished(
            outcome=Outcome.SOLVED,
            score=compute_score(solved, challenge),
            flag=flag,
            clock=clock,
        )
        return apply_event(session, event, challenge)
    raise WrongStage("acknowledge", tag)


# --- event (de)serialization ---------------------------------------------------

def _verdict_to_dict(verdict: Verdict) -> dict:
    obj: dict = {"accepted": verdict.accepted, "feedback": list(verdict.feedback)}
    if verdict.detail is not None:
        obj["detail"] = verdict.detail
    return obj


def _verdict_from_dict(payload: dict) -> Verdict:
    return Verdict(
        accepted=bool(payload["accepted"]),
        feedback=tuple(payload.get("feedback", [])),
        detail=payload.get("detail"),
    )


def event_to_record(event: SessionEvent, session_id: str, seq: int) -> dict:
    """One event-log line: event_type, session_id, seq, payload, logical_clock."""
    if isinstance(event, Started):
        payload: dict = {
            "session_id": event.session_id,
            "player_id": event.player_id,
            "challenge_id": event.challenge_id,
            "seed": event.seed,
            "started_at": event.started_at,
        }
    elif isinstance(event, (IntroAcknowledged, ExplanationShown)):
        payload = {}
    elif isinstance(event, (IntroQuizAnswered, Answered, ConclusionAnswered)):
        payload = {
            "submission": submission_to_dict(event.submission),
            "verdict": _verdict_to_dict(event.verdict),
        }
    elif isinstance(event, HintRequested):
        payload = {"hint_id": event.hint_id, "cost": event.cost}
    elif isinstance(event, Finished):
        payload = {"outcome": event.outcome.value, "score": event.score}
        if event.flag is not None:
            payload["flag"] = event.flag
    else:  # pragma: no cover - SessionEvent is closed
        raise TypeError(f"not an event: {event!r}")
    return {
        "event_type": type(event).__name__,
        "session_id": session_id,
        "seq": seq,
        "payload": payload,
        "logical_clock": event.clock,
    }


def event_from_record(record: dict) -> SessionEvent:
    """Decode one event-log line. Raises :class:`CorruptLog` on bad shapes."""
    try:
        event_type = record["event_type"]
        payload = record.get("payload", {})
        clock = int(record.get("logical_clock", 0))
        if event_type == "Started":
            return Started(
                session_id=payload["session_id"],
                player_id=payload["player_id"],
                challenge_id=payload["challenge_id"],
                seed=int(payload["seed"]),
                started_at=float(payload.get("started_at", 0.0)),
                clock=clock,
            )
        if event_type == "IntroAcknowledged":
            return IntroAcknowledged(clock=clock)
        if event_type == "ExplanationShown":
            return ExplanationShown(clock=clock)
        if event_type == "HintRequested":
            return HintRequested(
                hint_id=payload["hint_id"], cost=int(payload["cost"]), clock=clock
            )
        if event_type in ("IntroQuizAnswered", "Answered", "ConclusionAnswered"):
            submission = submission_from_dict(payload["submission"])
            verdict = _verdict_from_dict(payload["verdict"])
            cls = {
                "IntroQuizAnswered": IntroQuizAnswered,
                "Answered": Answered,
                "ConclusionAnswered": ConclusionAnswered,
            }[event_type]
            return cls(submission, verdict, clock=clock)
        if event_type == "Finished":
            return Finished(
                outcome=Outcome(payload["outcome"]),
                score=int(payload["score"]),
                flag=payload.get("flag"),
                clock=clock,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptLog(f"bad event record: {exc}") from exc
    raise CorruptLog(f"unknown event type {event_type!r}")
