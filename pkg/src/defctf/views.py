"""Player-facing projection of a session.

A PlayerView is everything a client may see: the guiding question, the
presented (shuffled, key-stripped) body, hint availability, attempts,
score, and stage-appropriate explanation text. Answer keys — correct
indices, correct units, answer maps, accepted answers, rule patterns —
never enter a view by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .model import Challenge
from .presentation import PresentedBody
from .session import Outcome, Session, StageTag, presented_for_stage


@dataclass(frozen=True)
class PlayerView:
    challenge_id: str
    title: str
    stage: str
    attempts: int
    score: int
    base_points: int
    guiding_question: str
    body: Optional[dict] = None
    intro_text: Optional[str] = None
    explanation: Optional[str] = None
    references: tuple[str, ...] = ()
    taken_hints: tuple[dict, ...] = ()
    available_hint_count: int = 0
    next_unlock: Optional[str] = None
    outcome: Optional[str] = None
    flag: Optional[str] = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "challenge_id": self.challenge_id,
            "title": self.title,
            "stage": self.stage,
            "attempts": self.attempts,
            "score": self.score,
            "base_points": self.base_points,
            "guiding_question": self.guiding_question,
            "taken_hints": list(self.taken_hints),
            "available_hint_count": self.available_hint_count,
        }
        if self.body is not None:
            out["body"] = self.body
        if self.intro_text is not None:
            out["intro_text"] = self.intro_text
        if self.explanation is not None:
            out["explanation"] = self.explanation
        if self.references:
            out["references"] = list(self.references)
        if self.next_unlock is not None:
            out["next_unlock"] = self.next_unlock
        if self.outcome is not None:
            out["outcome"] = self.outcome
        if self.flag is not None:
            out["flag"] = self.flag
        return out


def _body_to_view(presented: PresentedBody) -> dict:
    out: dict[str, Any] = {"type": presented.type.value}
    if presented.options is not None:
        out["options"] = list(presented.options)
    if presented.code is not None:
        out["code"] = presented.code
    if presented.unit_labels is not None:
        out["units"] = list(presented.unit_labels)
    if presented.prompt_mode is not None:
        out["prompt_mode"] = presented.prompt_mode
    if presented.starter_code is not None:
        out["starter_code"] = presented.starter_code
    if presented.left is not None:
        out["left"] = list(presented.left)
    if presented.right is not None:
        out["right"] = list(presented.right)
    return out


def _hint_view(session: Session, challenge: Challenge) -> tuple[tuple[dict, ...], int, Optional[str]]:
    taken: list[dict] = []
    by_id = {h.hint_id: h for h in challenge.hints}
    for hint_id in session.hints_taken:
        hint = by_id[hint_id]
        entry: dict[str, Any] = {
            "hint_id": hint.hint_id,
            "kind": hint.kind.value,
            "text": hint.text,
            "cost": hint.cost,
        }
        if hint.url is not None:
            entry["url"] = hint.url
        taken.append(entry)

    available = 0
    next_unlock: Optional[str] = None
    for hint in challenge.hints:
        if hint.hint_id in session.hints_taken:
            continue
        if hint.unlock.satisfied(session.clock, session.attempts):
            available += 1
        elif next_unlock is None:
            next_unlock = hint.unlock.describe()
    return tuple(taken), available, next_unlock


def player_view(session: Session, challenge: Challenge) -> PlayerView:
    """Build the view for the session's current stage."""
    stage = session.stage
    presented = presented_for_stage(session, challenge)

    guiding_question = (
        presented.guiding_question if presented is not None else challenge.body.guiding_question
    )

    intro_text = None
    if stage.tag in (StageTag.INTRO, StageTag.INTRO_QUIZ) and challenge.intro is not None:
        intro_text = challenge.intro.text

    explanation = None
    references: tuple[str, ...] = ()
    if stage.tag is StageTag.EXPLAINING:
        explanation = stage.explanation
    elif stage.tag is StageTag.CONCLUSION:
        explanation = challenge.conclusion.explanation
        references = challenge.conclusion.references
    elif stage.tag is StageTag.FINISHED and stage.outcome is Outcome.SOLVED:
        # post-survey ask: show the lesson together with the flag
        explanation = challenge.conclusion.explanation
        references = challenge.conclusion.references

    taken, available, next_unlock = _hint_view(session, challenge)

    return PlayerView(
        challenge_id=session.challenge_id,
        title=challenge.title,
        stage=stage.tag.value,
        attempts=session.attempts,
        score=session.score,
        base_points=challenge.base_points,
        guiding_question=guiding_question,
        body=_body_to_view(presented) if presented is not None else None,
        intro_text=intro_text,
        explanation=explanation,
        references=references,
        taken_hints=taken,
        available_hint_count=available,
        next_unlock=next_unlock,
        outcome=stage.outcome.value if stage.outcome is not None else None,
        flag=session.flag,
    )
