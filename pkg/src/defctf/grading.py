"""Pure evaluation of player submissions against a challenge body.

Grading is binary: a submission is either acceptable or not, with no partial
credit. Partial information flows back through :class:`Verdict.feedback`
(the coach messages of failing code rules) and :class:`Verdict.detail`
(aggregate counts that never expose the answer key itself).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .model import (
    AssociateBody,
    ChallengeBody,
    ChallengeType,
    CodeEntryBody,
    CodeSnippetBody,
    MultiChoiceBody,
    SingleChoiceBody,
    TextEntryBody,
)
from .rules import evaluate_rules


class VariantMismatch(TypeError):
    """Submission variant does not match the challenge body variant."""

    def __init__(self, body_type: ChallengeType, submission_type: ChallengeType):
        super().__init__(
            f"submission of type {submission_type.value!r} cannot answer "
            f"a {body_type.value!r} challenge"
        )
        self.body_type = body_type
        self.submission_type = submission_type


@dataclass(frozen=True)
class ChoiceSubmission:
    chosen_index: int

    type_tag = ChallengeType.SCQ


@dataclass(frozen=True)
class MultiChoiceSubmission:
    chosen_indices: frozenset[int]

    type_tag = ChallengeType.MCQ


@dataclass(frozen=True)
class TextSubmission:
    text: str

    type_tag = ChallengeType.TEQ


@dataclass(frozen=True)
class UnitsSubmission:
    chosen_units: frozenset[int]

    type_tag = ChallengeType.CSC


@dataclass(frozen=True)
class CodeSubmission:
    code: str

    type_tag = ChallengeType.CEC


@dataclass(frozen=True)
class MappingSubmission:
    proposed_map: tuple[tuple[int, int], ...]  # sorted (left, right) pairs

    type_tag = ChallengeType.ALR

    def as_dict(self) -> dict[int, int]:
        return dict(self.proposed_map)


Submission = Union[
    ChoiceSubmission,
    MultiChoiceSubmission,
    TextSubmission,
    UnitsSubmission,
    CodeSubmission,
    MappingSubmission,
]


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    feedback: tuple[str, ...] = ()
    detail: Optional[dict] = None


def grade(body: ChallengeBody, submission: Submission) -> Verdict:
    """Grade a submission. Pure: same inputs always yield the same verdict."""
    if submission.type_tag is not body.type_tag:
        raise VariantMismatch(body.type_tag, submission.type_tag)

    if isinstance(body, SingleChoiceBody):
        assert isinstance(submission, ChoiceSubmission)
        return Verdict(accepted=submission.chosen_index == body.correct_index)

    if isinstance(body, MultiChoiceBody):
        assert isinstance(submission, MultiChoiceSubmission)
        chosen = submission.chosen_indices
        missing = len(body.correct_indices - chosen)
        extra = len(chosen - body.correct_indices)
        return Verdict(
            accepted=chosen == body.correct_indices,
            detail={"missing": missing, "extra": extra},
        )

    if isinstance(body, TextEntryBody):
        assert isinstance(submission, TextSubmission)
        normalized = body.normalization.apply(submission.text)
        accepted = any(
            normalized == body.normalization.apply(answer) for answer in body.accepted_answers
        )
        return Verdict(accepted=accepted)

    if isinstance(body, CodeSnippetBody):
        assert isinstance(submission, UnitsSubmission)
        chosen = submission.chosen_units
        missing = len(body.correct_units - chosen)
        extra = len(chosen - body.correct_units)
        return Verdict(
            accepted=chosen == body.correct_units,
            detail={"missing": missing, "extra": extra},
        )

    if isinstance(body, CodeEntryBody):
        assert isinstance(submission, CodeSubmission)
        results = evaluate_rules(body.rule_set, submission.code)
        failing = [r for r in results if not r.passed]
        return Verdict(
            accepted=not failing,
            feedback=tuple(r.rule.feedback for r in failing),
            detail={"rules_total": len(results), "rules_failed": len(failing)},
        )

    if isinstance(body, AssociateBody):
        assert isinstance(submission, MappingSubmission)
        proposed = submission.as_dict()
        answer = body.answer_dict()
        matched = sum(1 for k, v in proposed.items() if answer.get(k) == v)
        return Verdict(
            accepted=proposed == answer,
            detail={"matched": matched, "total": len(answer)},
        )

    raise VariantMismatch(body.type_tag, submission.type_tag)  # pragma: no cover


# --- wire / event-log representation ---------------------------------------

def submission_to_dict(submission: Submission) -> dict:
    if isinstance(submission, ChoiceSubmission):
        return {"type": "scq", "chosen_index": submission.chosen_index}
    if isinstance(submission, MultiChoiceSubmission):
        return {"type": "mcq", "chosen_indices": sorted(submission.chosen_indices)}
    if isinstance(submission, TextSubmission):
        return {"type": "teq", "text": submission.text}
    if isinstance(submission, UnitsSubmission):
        return {"type": "csc", "chosen_units": sorted(submission.chosen_units)}
    if isinstance(submission, CodeSubmission):
        return {"type": "cec", "code": submission.code}
    if isinstance(submission, MappingSubmission):
        return {
            "type": "alr",
            "proposed_map": {str(k): v for k, v in submission.proposed_map},
        }
    raise TypeError(f"not a submission: {submission!r}")


class MalformedSubmission(ValueError):
    """Submission payload cannot be decoded into any variant."""


def submission_from_dict(payload: object) -> Submission:
    """Decode a wire/event payload into a typed submission.

    Raises :class:`MalformedSubmission` for structural problems; range checks
    against a particular body happen at grading time.
    """
    if not isinstance(payload, dict):
        raise MalformedSubmission("submission must be an object")
    type_tag = payload.get("type")
    try:
        if type_tag == "scq":
            return ChoiceSubmission(chosen_index=_as_int(payload["chosen_index"]))
        if type_tag == "mcq":
            indices = payload["chosen_indices"]
            if not isinstance(indices, list):
                raise MalformedSubmission("chosen_indices must be a list")
            return MultiChoiceSubmission(chosen_indices=frozenset(_as_int(i) for i in indices))
        if type_tag == "teq":
            text = payload["text"]
            if not isinstance(text, str):
                raise MalformedSubmission("text must be a string")
            return TextSubmission(text=text)
        if type_tag == "csc":
            units = payload["chosen_units"]
            if not isinstance(units, list):
                raise MalformedSubmission("chosen_units must be a list")
            return UnitsSubmission(chosen_units=frozenset(_as_int(u) for u in units))
        if type_tag == "cec":
            code = payload["code"]
            if not isinstance(code, str):
                raise MalformedSubmission("code must be a string")
            return CodeSubmission(code=code)
        if type_tag == "alr":
            raw_map = payload["proposed_map"]
            if not isinstance(raw_map, dict):
                raise MalformedSubmission("proposed_map must be an object")
            pairs = sorted((_as_int(k), _as_int(v)) for k, v in raw_map.items())
            return MappingSubmission(proposed_map=tuple(pairs))
    except KeyError as exc:
        raise MalformedSubmission(f"missing field {exc.args[0]!r}") from exc
    raise MalformedSubmission(f"unknown submission type {type_tag!r}")


def _as_int(value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedSubmission(f"expected integer, got {value!r}")
    try:
        return int(value)
    except ValueError as exc:
        raise MalformedSubmission(f"expected integer, got {value!r}") from exc
