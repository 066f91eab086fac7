"""Per-session presentation of challenge bodies.

Answer options (single/multiple choice) and the right-hand list of an
associate challenge are shuffled with a seeded permutation so players
cannot share positional answers. The answer key itself never enters a
:class:`PresentedBody`; instead an index remap travels alongside so the
engine can translate submissions back to original indices before grading.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Optional

from .grading import (
    ChoiceSubmission,
    MappingSubmission,
    MultiChoiceSubmission,
    Submission,
)
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


@dataclass(frozen=True)
class PresentedBody:
    """What the player sees: body content with the answer key stripped.

    ``index_remap[i]`` is the original index of presented item ``i`` (options
    for choice questions, right-list entries for associate challenges).
    Non-shuffled variants carry an identity remap.
    """

    type: ChallengeType
    guiding_question: str
    index_remap: tuple[int, ...]
    options: Optional[tuple[str, ...]] = None
    code: Optional[str] = None
    unit_labels: Optional[tuple[str, ...]] = None
    prompt_mode: Optional[str] = None
    starter_code: Optional[str] = None
    left: Optional[tuple[str, ...]] = None
    right: Optional[tuple[str, ...]] = None


def derive_seed(seed: int, salt: str) -> int:
    """Stable sub-seed for one presentation surface of a session."""
    digest = hashlib.sha256(f"{seed}:{salt}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _permutation(seed: int, n: int) -> tuple[int, ...]:
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return tuple(order)


def randomize_presentation(body: ChallengeBody, seed: int) -> PresentedBody:
    """Build the presented form of a body under a seeded permutation.

    Deterministic: the same body and seed always produce the same order.
    Only choice options and the associate right list are shuffled; other
    variants are returned unchanged with an identity remap.
    """
    if isinstance(body, SingleChoiceBody) or isinstance(body, MultiChoiceBody):
        remap = _permutation(seed, len(body.options))
        presented = tuple(body.options[original] for original in remap)
        return PresentedBody(
            type=body.type_tag,
            guiding_question=body.guiding_question,
            index_remap=remap,
            options=presented,
        )
    if isinstance(body, AssociateBody):
        remap = _permutation(seed, len(body.right))
        presented_right = tuple(body.right[original] for original in remap)
        return PresentedBody(
            type=ChallengeType.ALR,
            guiding_question=body.guiding_question,
            index_remap=remap,
            left=body.left,
            right=presented_right,
        )
    if isinstance(body, CodeSnippetBody):
        labels = tuple(
            f"line {unit.line}: {unit.excerpt(body.code).strip()}"
            if not unit.is_span
            else f"line {unit.line} [{unit.col_start}:{unit.col_end}]: {unit.excerpt(body.code).strip()}"
            for unit in body.selectable_units
        )
        return PresentedBody(
            type=ChallengeType.CSC,
            guiding_question=body.guiding_question,
            index_remap=tuple(range(len(body.selectable_units))),
            code=body.code,
            unit_labels=labels,
            prompt_mode=body.prompt_mode.value,
        )
    if isinstance(body, CodeEntryBody):
        return PresentedBody(
            type=ChallengeType.CEC,
            guiding_question=body.guiding_question,
            index_remap=(),
            starter_code=body.starter_code,
        )
    if isinstance(body, TextEntryBody):
        return PresentedBody(
            type=ChallengeType.TEQ,
            guiding_question=body.guiding_question,
            index_remap=(),
        )
    raise TypeError(f"not a challenge body: {body!r}")


class SubmissionOutOfRange(ValueError):
    """A submission refers to indices outside the presented body."""


def remap_submission(presented: PresentedBody, submission: Submission) -> Submission:
    """Translate a presented-space submission into original indices.

    Choice indices and associate right-indices pass through the permutation;
    other variants are returned unchanged. Raises
    :class:`SubmissionOutOfRange` when an index falls outside the remap.
    """
    remap = presented.index_remap

    def original(index: int) -> int:
        if not 0 <= index < len(remap):
            raise SubmissionOutOfRange(f"index {index} outside presented range 0..{len(remap) - 1}")
        return remap[index]

    if isinstance(submission, ChoiceSubmission):
        return ChoiceSubmission(chosen_index=original(submission.chosen_index))
    if isinstance(submission, MultiChoiceSubmission):
        return MultiChoiceSubmission(
            chosen_indices=frozenset(original(i) for i in submission.chosen_indices)
        )
    if isinstance(submission, MappingSubmission):
        pairs = sorted((left, original(right)) for left, right in submission.proposed_map)
        return MappingSubmission(proposed_map=tuple(pairs))
    return submission
