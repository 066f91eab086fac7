"""Domain model for challenge packs.

A pack is a versioned collection of defensive secure-coding challenges plus
the guideline catalog they reference. Every challenge follows the same
three-phase lifecycle (intro, main challenge + evaluation, conclusion) and
carries one of six body variants that define how the player interacts with
it and what counts as a correct answer.

All types here are immutable after construction; parsing and invariant
checking live in :mod:`defctf.packio`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class ChallengeType(str, Enum):
    """Tag for the six challenge body variants."""

    SCQ = "scq"  # single-choice question
    MCQ = "mcq"  # multiple-choice question
    TEQ = "teq"  # text-entry question
    CSC = "csc"  # code-snippet challenge (select offending units)
    CEC = "cec"  # code-entry challenge (rewrite code against a rule set)
    ALR = "alr"  # associate left-right lists


class GuidelineSource(str, Enum):
    CERT = "CERT"
    OWASP = "OWASP"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GuidelineRef:
    """Reference into a secure-coding guideline catalog."""

    source: GuidelineSource
    identifier: str
    title: str

    @property
    def key(self) -> tuple[str, str]:
        return (self.source.value, self.identifier)


_WHITESPACE_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizationSpec:
    """How free-text answers are canonicalized before comparison.

    Each switch is idempotent, so the composed normalization is too.
    """

    trim: bool = True
    case_fold: bool = True
    collapse_internal_whitespace: bool = True

    def apply(self, text: str) -> str:
        out = text
        if self.collapse_internal_whitespace:
            out = _WHITESPACE_RUN.sub(" ", out)
        if self.trim:
            out = out.strip()
        if self.case_fold:
            out = out.casefold()
        return out


class RuleKind(str, Enum):
    FORBIDDEN = "forbidden-pattern"
    REQUIRED = "required-pattern"
    MAX_OCCURRENCES = "max-occurrences"


@dataclass(frozen=True)
class CodeRule:
    """One automated-coach rule applied to submitted code.

    ``pattern`` uses the restricted match language from :mod:`defctf.rules`:
    literal text where ``?`` matches any single character.
    """

    rule_id: str
    kind: RuleKind
    pattern: str
    feedback: str
    limit: Optional[int] = None
    guideline: Optional[GuidelineRef] = None


@dataclass(frozen=True)
class SelectableUnit:
    """A selectable location in a code snippet: a whole line or a span in it."""

    line: int
    col_start: Optional[int] = None
    col_end: Optional[int] = None

    @property
    def is_span(self) -> bool:
        return self.col_start is not None

    def excerpt(self, code: str) -> str:
        """The text this unit covers, for presentation."""
        lines = code.split("\n")
        if not 1 <= self.line <= len(lines):
            return ""
        text = lines[self.line - 1]
        if self.is_span:
            return text[self.col_start : self.col_end]
        return text


class CSCPromptMode(str, Enum):
    FIND_VULNERABILITY = "find-vulnerability"
    FIND_VIOLATED_GUIDELINE = "find-violated-guideline"


@dataclass(frozen=True)
class SingleChoiceBody:
    guiding_question: str
    options: tuple[str, ...]
    correct_index: int

    type_tag = ChallengeType.SCQ


@dataclass(frozen=True)
class MultiChoiceBody:
    guiding_question: str
    options: tuple[str, ...]
    correct_indices: frozenset[int]

    type_tag = ChallengeType.MCQ


@dataclass(frozen=True)
class TextEntryBody:
    guiding_question: str
    accepted_answers: tuple[str, ...]
    normalization: NormalizationSpec = NormalizationSpec()

    type_tag = ChallengeType.TEQ


@dataclass(frozen=True)
class CodeSnippetBody:
    guiding_question: str
    code: str
    selectable_units: tuple[SelectableUnit, ...]
    correct_units: frozenset[int]  # indices into selectable_units
    prompt_mode: CSCPromptMode = CSCPromptMode.FIND_VULNERABILITY

    type_tag = ChallengeType.CSC


@dataclass(frozen=True)
class CodeEntryBody:
    guiding_question: str
    starter_code: str
    rule_set: tuple[CodeRule, ...]
    known_good: tuple[str, ...]
    known_bad: tuple[str, ...]

    type_tag = ChallengeType.CEC


class MappingCardinality(str, Enum):
    BIJECTIVE = "bijective"
    MANY_TO_ONE = "many-to-one"


@dataclass(frozen=True)
class AssociateBody:
    guiding_question: str
    left: tuple[str, ...]
    right: tuple[str, ...]
    answer_map: tuple[tuple[int, int], ...]  # sorted (left_index, right_index) pairs
    cardinality: MappingCardinality = MappingCardinality.BIJECTIVE

    type_tag = ChallengeType.ALR

    def answer_dict(self) -> dict[int, int]:
        return dict(self.answer_map)


ChallengeBody = Union[
    SingleChoiceBody,
    MultiChoiceBody,
    TextEntryBody,
    CodeSnippetBody,
    CodeEntryBody,
    AssociateBody,
]

#: Variants whose presented option order may be shuffled per session.
RANDOMIZABLE_TYPES = frozenset({ChallengeType.SCQ, ChallengeType.MCQ, ChallengeType.ALR})

#: Variants an intro quiz is allowed to use.
INTRO_QUIZ_TYPES = frozenset({ChallengeType.SCQ, ChallengeType.MCQ})


class HintKind(str, Enum):
    CONCEPT_DISCLOSURE = "concept-disclosure"
    EXTERNAL_REFERENCE = "external-reference"
    ANSWER_DETAIL = "answer-detail"


@dataclass(frozen=True)
class UnlockRule:
    """A hint unlocks once either threshold is reached (OR semantics)."""

    after_seconds: int = 0
    after_failed_attempts: int = 0

    def satisfied(self, clock: int, attempts: int) -> bool:
        return clock >= self.after_seconds or attempts >= self.after_failed_attempts

    def describe(self) -> str:
        return (
            f"unlocks after {self.after_seconds}s elapsed "
            f"or {self.after_failed_attempts} failed attempts"
        )


@dataclass(frozen=True)
class HintSpec:
    hint_id: str
    kind: HintKind
    text: str
    cost: int = 0
    unlock: UnlockRule = UnlockRule()
    url: Optional[str] = None


@dataclass(frozen=True)
class ScorePolicy:
    """Penalty switches. Hints are penalized by default, retries are not."""

    penalize_hints: bool = True
    penalize_retries: bool = False
    retry_penalty: int = 0
    min_score: int = 0


class WrongBranch(str, Enum):
    RETURN_TO_CHALLENGE = "return-to-challenge"
    EXPLAIN_THEN_RETURN = "explain-then-return"
    PROCEED_TO_FINISH = "proceed-to-finish"
    EXPLAIN_THEN_FINISH = "explain-then-finish"


#: Wrong-branch variants that send the player back to the challenge stage.
RETURN_BRANCHES = frozenset({WrongBranch.RETURN_TO_CHALLENGE, WrongBranch.EXPLAIN_THEN_RETURN})
#: Wrong-branch variants that must carry an explanation.
EXPLAIN_BRANCHES = frozenset({WrongBranch.EXPLAIN_THEN_RETURN, WrongBranch.EXPLAIN_THEN_FINISH})


@dataclass(frozen=True)
class WrongBranchPolicy:
    policy: WrongBranch = WrongBranch.RETURN_TO_CHALLENGE
    explanation: Optional[str] = None
    max_attempts: Optional[int] = None


class CorrectBranch(str, Enum):
    CONCLUDE_THEN_FINISH = "conclude-then-finish"
    FINISH = "finish"


@dataclass(frozen=True)
class CorrectBranchPolicy:
    policy: CorrectBranch = CorrectBranch.CONCLUDE_THEN_FINISH
    additional_question: Optional[ChallengeBody] = None


@dataclass(frozen=True)
class IntroStage:
    """Optional topic framing, with an optional warm-up quiz (SCQ/MCQ only)."""

    text: str
    quiz: Optional[ChallengeBody] = None
    gating: bool = False


@dataclass(frozen=True)
class ConclusionStage:
    explanation: str
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class Challenge:
    id: str
    title: str
    base_points: int
    body: ChallengeBody
    conclusion: ConclusionStage
    intro: Optional[IntroStage] = None
    hints: tuple[HintSpec, ...] = ()
    wrong_branch: WrongBranchPolicy = WrongBranchPolicy()
    correct_branch: CorrectBranchPolicy = CorrectBranchPolicy()
    score_policy: ScorePolicy = ScorePolicy()
    guideline: Optional[GuidelineRef] = None

    @property
    def type(self) -> ChallengeType:
        return self.body.type_tag


@dataclass(frozen=True)
class ChallengePack:
    pack_id: str
    title: str
    version: str
    challenges: tuple[Challenge, ...]
    scg_catalog: tuple[GuidelineRef, ...] = ()

    def challenge(self, challenge_id: str) -> Challenge:
        for ch in self.challenges:
            if ch.id == challenge_id:
                return ch
        raise KeyError(challenge_id)


@dataclass(frozen=True)
class ChallengeTypeDescriptor:
    """Expert-agreement survey metadata for one challenge type.

    Descriptive only; never feeds scoring. The associate-left-right type was
    added after the survey round, so it has no agreement figures and no rank.
    """

    type_tag: ChallengeType
    expert_agreement_mean: Optional[float]
    expert_agreement_stddev: Optional[float]
    rank: Optional[int]


#: Agreement figures per challenge type, ranked from most to least preferred.
#: CEC and CSC share the top mean; CEC ranks first on its lower spread.
CHALLENGE_TYPE_DESCRIPTORS: dict[ChallengeType, ChallengeTypeDescriptor] = {
    ChallengeType.CEC: ChallengeTypeDescriptor(ChallengeType.CEC, 4.30, 0.92, 1),
    ChallengeType.CSC: ChallengeTypeDescriptor(ChallengeType.CSC, 4.30, 1.26, 2),
    ChallengeType.SCQ: ChallengeTypeDescriptor(ChallengeType.SCQ, 3.95, 0.76, 3),
    ChallengeType.MCQ: ChallengeTypeDescriptor(ChallengeType.MCQ, 3.80, 1.00, 4),
    ChallengeType.TEQ: ChallengeTypeDescriptor(ChallengeType.TEQ, 3.15, 1.04, 5),
    ChallengeType.ALR: ChallengeTypeDescriptor(ChallengeType.ALR, None, None, None),
}
