from __future__ import annotations

import pytest

from defctf.model import (
    AssociateBody,
    Challenge,
    ChallengePack,
    ConclusionStage,
    CorrectBranch,
    CorrectBranchPolicy,
    MultiChoiceBody,
    ScorePolicy,
    SingleChoiceBody,
    WrongBranch,
    WrongBranchPolicy,
)
from defctf.samplepack import build_sample_pack

SAMPLE_PACK_PATH = "packs/sample.json"


@pytest.fixture(scope="session")
def sample_pack() -> ChallengePack:
    return build_sample_pack()


def make_challenge(
    body,
    *,
    challenge_id: str = "c1",
    base_points: int = 100,
    wrong: WrongBranchPolicy | None = None,
    correct: CorrectBranchPolicy | None = None,
    score_policy: ScorePolicy | None = None,
    hints=(),
    intro=None,
) -> Challenge:
    """Small synthetic challenge for engine tests."""
    return Challenge(
        id=challenge_id,
        title="synthetic",
        base_points=base_points,
        body=body,
        conclusion=ConclusionStage(explanation="why it matters", references=()),
        intro=intro,
        hints=tuple(hints),
        wrong_branch=wrong or WrongBranchPolicy(policy=WrongBranch.RETURN_TO_CHALLENGE),
        correct_branch=correct or CorrectBranchPolicy(policy=CorrectBranch.FINISH),
        score_policy=score_policy or ScorePolicy(),
    )


def scq_body(n_options: int = 3, correct: int = 0) -> SingleChoiceBody:
    return SingleChoiceBody(
        guiding_question="pick one",
        options=tuple(f"option {i}" for i in range(n_options)),
        correct_index=correct,
    )


def mcq_body(n_options: int = 4, correct=frozenset({0, 2})) -> MultiChoiceBody:
    return MultiChoiceBody(
        guiding_question="pick all that apply",
        options=tuple(f"option {i}" for i in range(n_options)),
        correct_indices=frozenset(correct),
    )


def alr_body(n: int = 3) -> AssociateBody:
    return AssociateBody(
        guiding_question="match them",
        left=tuple(f"left {i}" for i in range(n)),
        right=tuple(f"right {i}" for i in range(n)),
        answer_map=tuple((i, (i + 1) % n) for i in range(n)),
    )
