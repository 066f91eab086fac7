"""Pack file parsing, validation, and serialization.

The pack file is a UTF-8 JSON document. Top level:

    {
      "pack_id": "...", "title": "...", "version": "...",
      "challenges": [ ... ],
      "scg_catalog": [ {"source": "CERT", "identifier": "STR31-C", "title": "..."} ]
    }

Every structural or invariant problem raises :class:`ParseError` with the
JSON-path of the offending field. Code-entry fixtures are cross-checked at
parse time: each known_good sample must pass the challenge's rule set and
each known_bad sample must fail it, otherwise :class:`FixtureError` names
the fixture. Parsed packs are immutable; ``serialize_pack`` round-trips.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .model import (
    AssociateBody,
    Challenge,
    ChallengeBody,
    ChallengePack,
    ChallengeType,
    CodeEntryBody,
    CodeRule,
    CodeSnippetBody,
    ConclusionStage,
    CorrectBranch,
    CorrectBranchPolicy,
    CSCPromptMode,
    EXPLAIN_BRANCHES,
    GuidelineRef,
    GuidelineSource,
    HintKind,
    HintSpec,
    INTRO_QUIZ_TYPES,
    IntroStage,
    MappingCardinality,
    MultiChoiceBody,
    NormalizationSpec,
    RETURN_BRANCHES,
    RuleKind,
    ScorePolicy,
    SelectableUnit,
    SingleChoiceBody,
    TextEntryBody,
    UnlockRule,
    WrongBranch,
    WrongBranchPolicy,
)
from .rules import PatternError, evaluate_rules, validate_rule_patterns


class ParseError(ValueError):
    """A pack document violates the format or an invariant.

    ``path`` pinpoints the offending field, e.g. ``challenges[1].body.options``.
    """

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class FixtureError(ParseError):
    """A code-entry fixture disagrees with its own rule set."""


def parse_pack(document: str) -> ChallengePack:
    """Parse and fully validate a pack document."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    return pack_from_obj(data)


def load_pack(path: str) -> ChallengePack:
    """Read and parse a pack file. I/O errors propagate as OSError."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_pack(handle.read())


def pack_from_obj(data: Any) -> ChallengePack:
    root = _Cursor(data, "$")
    pack_id = root.str_field("pack_id", non_empty=True)
    title = root.str_field("title")
    version = root.str_field("version")

    catalog: list[GuidelineRef] = []
    for entry in root.list_field("scg_catalog", default=[]):
        catalog.append(_parse_guideline(entry))
    catalog_keys = {ref.key for ref in catalog}
    if len(catalog_keys) != len(catalog):
        raise ParseError("scg_catalog", "duplicate guideline entries")

    challenges: list[Challenge] = []
    seen_ids: set[str] = set()
    for node in root.list_field("challenges", required=True):
        challenge = _parse_challenge(node)
        if challenge.id in seen_ids:
            raise ParseError(node.path + ".id", f"duplicate challenge id {challenge.id!r}")
        seen_ids.add(challenge.id)
        challenges.append(challenge)
    if not challenges:
        raise ParseError("challenges", "pack must contain at least one challenge")

    pack = ChallengePack(
        pack_id=pack_id,
        title=title,
        version=version,
        challenges=tuple(challenges),
        scg_catalog=tuple(catalog),
    )
    _check_guideline_citations(pack, catalog_keys)
    return pack


class _Cursor:
    """A JSON node plus its path, for error messages that pinpoint fields."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise ParseError(path, "expected an object")
        self.data = data
        self.path = path

    def child(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path != "$" else key

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    def str_field(self, key: str, *, non_empty: bool = False, default: Optional[str] = None) -> str:
        if key not in self.data:
            if default is not None:
                return default
            raise ParseError(self.child(key), "missing required field")
        value = self.data[key]
        if not isinstance(value, str):
            raise ParseError(self.child(key), "expected a string")
        if non_empty and value.strip() == "":
            raise ParseError(self.child(key), "must be non-empty")
        return value

    def int_field(self, key: str, *, default: Optional[int] = None, minimum: Optional[int] = None) -> int:
        if key not in self.data:
            if default is not None:
                return default
            raise ParseError(self.child(key), "missing required field")
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(self.child(key), "expected an integer")
        if minimum is not None and value < minimum:
            raise ParseError(self.child(key), f"must be >= {minimum}")
        return value

    def bool_field(self, key: str, *, default: bool) -> bool:
        if key not in self.data:
            return default
        value = self.data[key]
        if not isinstance(value, bool):
            raise ParseError(self.child(key), "expected a boolean")
        return value

    def list_field(self, key: str, *, required: bool = False, default: Optional[list] = None) -> list["_Cursor"]:
        if key not in self.data:
            if required:
                raise ParseError(self.child(key), "missing required field")
            return [_Cursor(v, f"{self.child(key)}[{i}]") for i, v in enumerate(default or [])]
        value = self.data[key]
        if not isinstance(value, list):
            raise ParseError(self.child(key), "expected a list")
        return [_Cursor(v, f"{self.child(key)}[{i}]") for i, v in enumerate(value)]

    def str_list_field(self, key: str, *, required: bool = False) -> list[str]:
        if key not in self.data:
            if required:
                raise ParseError(self.child(key), "missing required field")
            return []
        value = self.data[key]
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise ParseError(self.child(key), "expected a list of strings")
        return list(value)

    def obj_field(self, key: str) -> "_Cursor":
        if key not in self.data:
            raise ParseError(self.child(key), "missing required field")
        return _Cursor(self.data[key], self.child(key))

    def enum_field(self, key: str, enum_cls: type, *, default: Any = None) -> Any:
        if key not in self.data:
            if default is not None:
                return default
            raise ParseError(self.child(key), "missing required field")
        value = self.data[key]
        try:
            return enum_cls(value)
        except ValueError:
            allowed = ", ".join(member.value for member in enum_cls)
            raise ParseError(self.child(key), f"must be one of: {allowed}") from None


def _parse_guideline(node: _Cursor) -> GuidelineRef:
    return GuidelineRef(
        source=node.enum_field("source", GuidelineSource),
        identifier=node.str_field("identifier", non_empty=True),
        title=node.str_field("title", default=""),
    )


def _parse_challenge(node: _Cursor) -> Challenge:
    challenge_id = node.str_field("id", non_empty=True)
    title = node.str_field("title")
    base_points = node.int_field("base_points")
    if base_points <= 0:
        raise ParseError(node.child("base_points"), "must be > 0")

    body = _parse_body(node.obj_field("body"))

    intro = None
    if node.has("intro"):
        intro = _parse_intro(node.obj_field("intro"))

    hints: list[HintSpec] = []
    hint_ids: set[str] = set()
    for hint_node in node.list_field("hints", default=[]):
        hint = _parse_hint(hint_node, base_points)
        if hint.hint_id in hint_ids:
            raise ParseError(hint_node.child("hint_id"), f"duplicate hint id {hint.hint_id!r}")
        hint_ids.add(hint.hint_id)
        hints.append(hint)

    wrong_branch = _parse_wrong_branch(node.obj_field("wrong_branch")) if node.has("wrong_branch") else WrongBranchPolicy()
    correct_branch = _parse_correct_branch(node.obj_field("correct_branch")) if node.has("correct_branch") else CorrectBranchPolicy()
    conclusion = _parse_conclusion(node.obj_field("conclusion"))
    score_policy = _parse_score_policy(node.obj_field("score_policy"), base_points) if node.has("score_policy") else ScorePolicy()

    guideline = None
    if node.has("guideline"):
        guideline = _parse_guideline(node.obj_field("guideline"))

    return Challenge(
        id=challenge_id,
        title=title,
        base_points=base_points,
        body=body,
        conclusion=conclusion,
        intro=intro,
        hints=tuple(hints),
        wrong_branch=wrong_branch,
        correct_branch=correct_branch,
        score_policy=score_policy,
        guideline=guideline,
    )


def _parse_body(node: _Cursor) -> ChallengeBody:
    body_type = node.enum_field("type", ChallengeType)
    question = node.str_field("guiding_question", non_empty=True)

    if body_type is ChallengeType.SCQ:
        options = node.str_list_field("options", required=True)
        if len(options) < 2:
            raise ParseError(node.child("options"), "needs at least 2 options")
        correct = node.int_field("correct_index")
        if not 0 <= correct < len(options):
            raise ParseError(node.child("correct_index"), f"out of range 0..{len(options) - 1}")
        return SingleChoiceBody(question, tuple(options), correct)

    if body_type is ChallengeType.MCQ:
        options = node.str_list_field("options", required=True)
        if len(options) < 2:
            raise ParseError(node.child("options"), "needs at least 2 options")
        raw = node.raw("correct_indices")
        if not isinstance(raw, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in raw):
            raise ParseError(node.child("correct_indices"), "expected a list of integers")
        indices = frozenset(raw)
        if len(indices) < 2:
            raise ParseError(
                node.child("correct_indices"),
                "a multiple-choice challenge must include more than one correct answer",
            )
        if any(i < 0 or i >= len(options) for i in indices):
            raise ParseError(node.child("correct_indices"), f"indices out of range 0..{len(options) - 1}")
        return MultiChoiceBody(question, tuple(options), indices)

    if body_type is ChallengeType.TEQ:
        answers = node.str_list_field("accepted_answers", required=True)
        if not answers or any(a.strip() == "" for a in answers):
            raise ParseError(node.child("accepted_answers"), "needs at least one non-empty answer")
        normalization = NormalizationSpec()
        if node.has("normalization"):
            norm_node = node.obj_field("normalization")
            normalization = NormalizationSpec(
                trim=norm_node.bool_field("trim", default=True),
                case_fold=norm_node.bool_field("case_fold", default=True),
                collapse_internal_whitespace=norm_node.bool_field(
                    "collapse_internal_whitespace", default=True
                ),
            )
        return TextEntryBody(question, tuple(answers), normalization)

    if body_type is ChallengeType.CSC:
        code = node.str_field("code", non_empty=True)
        units = _parse_selectable_units(node)
        raw = node.raw("correct_units")
        if not isinstance(raw, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in raw):
            raise ParseError(node.child("correct_units"), "expected a list of unit indices")
        correct = frozenset(raw)
        if not correct:
            raise ParseError(node.child("correct_units"), "must not be empty")
        if any(i < 0 or i >= len(units) for i in correct):
            raise ParseError(node.child("correct_units"), "not a subset of selectable_units")
        mode = node.enum_field("prompt_mode", CSCPromptMode, default=CSCPromptMode.FIND_VULNERABILITY)
        return CodeSnippetBody(question, code, tuple(units), correct, mode)

    if body_type is ChallengeType.CEC:
        starter = node.str_field("starter_code")
        rule_nodes = node.list_field("rule_set", required=True)
        if not rule_nodes:
            raise ParseError(node.child("rule_set"), "needs at least one rule")
        rules = tuple(_parse_rule(rn) for rn in rule_nodes)
        rule_ids = [r.rule_id for r in rules]
        if len(set(rule_ids)) != len(rule_ids):
            raise ParseError(node.child("rule_set"), "duplicate rule ids")
        fixtures = node.obj_field("fixtures")
        known_good = fixtures.str_list_field("known_good", required=True)
        known_bad = fixtures.str_list_field("known_bad", required=True)
        if not known_good:
            raise ParseError(fixtures.child("known_good"), "needs at least one fixture")
        if not known_bad:
            raise ParseError(fixtures.child("known_bad"), "needs at least one fixture")
        body = CodeEntryBody(question, starter, rules, tuple(known_good), tuple(known_bad))
        _check_cec_fixtures(body, node)
        return body

    if body_type is ChallengeType.ALR:
        left = node.str_list_field("left", required=True)
        right = node.str_list_field("right", required=True)
        if not left or not right:
            raise ParseError(node.child("left"), "left and right lists must be non-empty")
        raw_map = node.raw("answer_map")
        if not isinstance(raw_map, dict):
            raise ParseError(node.child("answer_map"), "expected an object mapping left index to right index")
        mapping: dict[int, int] = {}
        for key, value in raw_map.items():
            try:
                left_idx = int(key)
            except ValueError:
                raise ParseError(node.child("answer_map"), f"key {key!r} is not an index") from None
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParseError(node.child("answer_map"), f"value for {key!r} is not an index")
            mapping[left_idx] = value
        if set(mapping) != set(range(len(left))):
            raise ParseError(node.child("answer_map"), "must map every left index exactly once")
        if any(v < 0 or v >= len(right) for v in mapping.values()):
            raise ParseError(node.child("answer_map"), f"right indices out of range 0..{len(right) - 1}")
        cardinality = node.enum_field("cardinality", MappingCardinality, default=MappingCardinality.BIJECTIVE)
        if cardinality is MappingCardinality.BIJECTIVE:
            if len(left) != len(right):
                raise ParseError(node.child("right"), "bijective mapping needs equal-length lists")
            if len(set(mapping.values())) != len(mapping):
                raise ParseError(node.child("answer_map"), "bijective mapping must not reuse right items")
        return AssociateBody(question, tuple(left), tuple(right), tuple(sorted(mapping.items())), cardinality)

    raise ParseError(node.child("type"), f"unknown challenge type {body_type!r}")  # pragma: no cover


def _parse_selectable_units(node: _Cursor) -> list[SelectableUnit]:
    raw = node.raw("selectable_units")
    if not isinstance(raw, list) or not raw:
        raise ParseError(node.child("selectable_units"), "expected a non-empty list")
    code_lines = node.str_field("code").split("\n")
    units: list[SelectableUnit] = []
    for i, entry in enumerate(raw):
        path = f"{node.child('selectable_units')}[{i}]"
        if isinstance(entry, bool):
            raise ParseError(path, "expected a line number or span object")
        if isinstance(entry, int):
            unit = SelectableUnit(line=entry)
        elif isinstance(entry, dict):
            span = _Cursor(entry, path)
            unit = SelectableUnit(
                line=span.int_field("line"),
                col_start=span.int_field("col_start", minimum=0),
                col_end=span.int_field("col_end", minimum=0),
            )
            if unit.col_end <= unit.col_start:
                raise ParseError(path, "span end must be after start")
        else:
            raise ParseError(path, "expected a line number or span object")
        if not 1 <= unit.line <= len(code_lines):
            raise ParseError(path, f"line {unit.line} outside code (1..{len(code_lines)})")
        units.append(unit)
    if len(set(units)) != len(units):
        raise ParseError(node.child("selectable_units"), "duplicate units")
    return units


def _parse_rule(node: _Cursor) -> CodeRule:
    kind = node.enum_field("kind", RuleKind)
    pattern = node.str_field("pattern")
    if pattern == "":
        raise ParseError(node.child("pattern"), "must be non-empty")
    limit = None
    if kind is RuleKind.MAX_OCCURRENCES:
        limit = node.int_field("limit", minimum=0)
    elif node.has("limit"):
        raise ParseError(node.child("limit"), "only max-occurrences rules take a limit")
    guideline = _parse_guideline(node.obj_field("guideline")) if node.has("guideline") else None
    rule = CodeRule(
        rule_id=node.str_field("rule_id", non_empty=True),
        kind=kind,
        pattern=pattern,
        feedback=node.str_field("feedback", non_empty=True),
        limit=limit,
        guideline=guideline,
    )
    try:
        validate_rule_patterns((rule,))
    except PatternError as exc:
        raise ParseError(node.child("pattern"), exc.reason) from exc
    return rule


def _check_cec_fixtures(body: CodeEntryBody, node: _Cursor) -> None:
    for i, sample in enumerate(body.known_good):
        failing = [r.rule.rule_id for r in evaluate_rules(body.rule_set, sample) if not r.passed]
        if failing:
            raise FixtureError(
                f"{node.child('fixtures')}.known_good[{i}]",
                f"known_good fixture fails rules: {', '.join(failing)}",
            )
    for i, sample in enumerate(body.known_bad):
        if all(r.passed for r in evaluate_rules(body.rule_set, sample)):
            raise FixtureError(
                f"{node.child('fixtures')}.known_bad[{i}]",
                "known_bad fixture passes the whole rule set",
            )


def _parse_intro(node: _Cursor) -> IntroStage:
    text = node.str_field("text", non_empty=True)
    quiz = None
    if node.has("quiz"):
        quiz = _parse_body(node.obj_field("quiz"))
        if quiz.type_tag not in INTRO_QUIZ_TYPES:
            raise ParseError(
                node.child("quiz"),
                "intro quiz must be a single-choice or multiple-choice question",
            )
    return IntroStage(text=text, quiz=quiz, gating=node.bool_field("gating", default=False))


def _parse_hint(node: _Cursor, base_points: int) -> HintSpec:
    kind = node.enum_field("kind", HintKind)
    text = node.str_field("text", default="")
    url = node.str_field("url", non_empty=True) if node.has("url") else None
    if text.strip() == "":
        if kind is not HintKind.EXTERNAL_REFERENCE or url is None:
            raise ParseError(
                node.child("text"),
                "only an external-reference hint with a url may omit its text",
            )
    cost = node.int_field("cost", default=0, minimum=0)
    if cost >= base_points:
        raise ParseError(node.child("cost"), f"must be below base_points ({base_points})")
    unlock = UnlockRule()
    if node.has("unlock"):
        unlock_node = node.obj_field("unlock")
        unlock = UnlockRule(
            after_seconds=unlock_node.int_field("after_seconds", default=0, minimum=0),
            after_failed_attempts=unlock_node.int_field("after_failed_attempts", default=0, minimum=0),
        )
    return HintSpec(
        hint_id=node.str_field("hint_id", non_empty=True),
        kind=kind,
        text=text,
        cost=cost,
        unlock=unlock,
        url=url,
    )


def _parse_wrong_branch(node: _Cursor) -> WrongBranchPolicy:
    policy = node.enum_field("policy", WrongBranch)
    explanation = node.str_field("explanation", non_empty=True) if node.has("explanation") else None
    if policy in EXPLAIN_BRANCHES and explanation is None:
        raise ParseError(node.child("explanation"), f"{policy.value} requires an explanation")
    max_attempts = None
    if node.has("max_attempts"):
        if policy not in RETURN_BRANCHES:
            raise ParseError(node.child("max_attempts"), "only return variants take max_attempts")
        max_attempts = node.int_field("max_attempts", minimum=1)
    return WrongBranchPolicy(policy=policy, explanation=explanation, max_attempts=max_attempts)


def _parse_correct_branch(node: _Cursor) -> CorrectBranchPolicy:
    policy = node.enum_field("policy", CorrectBranch)
    additional = None
    if node.has("additional_question"):
        if policy is not CorrectBranch.CONCLUDE_THEN_FINISH:
            raise ParseError(
                node.child("additional_question"),
                "only conclude-then-finish takes an additional question",
            )
        additional = _parse_body(node.obj_field("additional_question"))
        if additional.type_tag not in INTRO_QUIZ_TYPES:
            raise ParseError(
                node.child("additional_question"),
                "additional question must be single-choice or multiple-choice",
            )
    return CorrectBranchPolicy(policy=policy, additional_question=additional)


def _parse_conclusion(node: _Cursor) -> ConclusionStage:
    return ConclusionStage(
        explanation=node.str_field("explanation", default=""),
        references=tuple(node.str_list_field("references")),
    )


def _parse_score_policy(node: _Cursor, base_points: int) -> ScorePolicy:
    policy = ScorePolicy(
        penalize_hints=node.bool_field("penalize_hints", default=True),
        penalize_retries=node.bool_field("penalize_retries", default=False),
        retry_penalty=node.int_field("retry_penalty", default=0, minimum=0),
        min_score=node.int_field("min_score", default=0, minimum=0),
    )
    if policy.min_score > base_points:
        raise ParseError(node.child("min_score"), f"must be <= base_points ({base_points})")
    return policy


def _check_guideline_citations(pack: ChallengePack, catalog_keys: set[tuple[str, str]]) -> None:
    for i, challenge in enumerate(pack.challenges):
        cited: list[tuple[str, GuidelineRef]] = []
        if challenge.guideline is not None:
            cited.append((f"challenges[{i}].guideline", challenge.guideline))
        if isinstance(challenge.body, CodeEntryBody):
            for j, rule in enumerate(challenge.body.rule_set):
                if rule.guideline is not None:
                    cited.append((f"challenges[{i}].body.rule_set[{j}].guideline", rule.guideline))
        for path, ref in cited:
            if ref.key not in catalog_keys:
                raise ParseError(path, f"guideline {ref.source.value} {ref.identifier} not in scg_catalog")


# --- serialization ----------------------------------------------------------

def serialize_pack(pack: ChallengePack, *, indent: int = 2) -> str:
    """Render a pack back to its JSON document form."""
    return json.dumps(pack_to_obj(pack), indent=indent, ensure_ascii=False) + "\n"


def pack_to_obj(pack: ChallengePack) -> dict:
    return {
        "pack_id": pack.pack_id,
        "title": pack.title,
        "version": pack.version,
        "challenges": [_challenge_to_obj(c) for c in pack.challenges],
        "scg_catalog": [_guideline_to_obj(g) for g in pack.scg_catalog],
    }


def _guideline_to_obj(ref: GuidelineRef) -> dict:
    return {"source": ref.source.value, "identifier": ref.identifier, "title": ref.title}


def _challenge_to_obj(challenge: Challenge) -> dict:
    obj: dict[str, Any] = {
        "id": challenge.id,
        "title": challenge.title,
        "base_points": challenge.base_points,
    }
    if challenge.intro is not None:
        intro: dict[str, Any] = {"text": challenge.intro.text}
        if challenge.intro.quiz is not None:
            intro["quiz"] = _body_to_obj(challenge.intro.quiz)
        if challenge.intro.gating:
            intro["gating"] = True
        obj["intro"] = intro
    obj["body"] = _body_to_obj(challenge.body)
    if challenge.hints:
        obj["hints"] = [_hint_to_obj(h) for h in challenge.hints]
    obj["wrong_branch"] = _wrong_branch_to_obj(challenge.wrong_branch)
    obj["correct_branch"] = _correct_branch_to_obj(challenge.correct_branch)
    obj["conclusion"] = {
        "explanation": challenge.conclusion.explanation,
        "references": list(challenge.conclusion.references),
    }
    obj["score_policy"] = {
        "penalize_hints": challenge.score_policy.penalize_hints,
        "penalize_retries": challenge.score_policy.penalize_retries,
        "retry_penalty": challenge.score_policy.retry_penalty,
        "min_score": challenge.score_policy.min_score,
    }
    if challenge.guideline is not None:
        obj["guideline"] = _guideline_to_obj(challenge.guideline)
    return obj


def _body_to_obj(body: ChallengeBody) -> dict:
    obj: dict[str, Any] = {"type": body.type_tag.value, "guiding_question": body.guiding_question}
    if isinstance(body, SingleChoiceBody):
        obj["options"] = list(body.options)
        obj["correct_index"] = body.correct_index
    elif isinstance(body, MultiChoiceBody):
        obj["options"] = list(body.options)
        obj["correct_indices"] = sorted(body.correct_indices)
    elif isinstance(body, TextEntryBody):
        obj["accepted_answers"] = list(body.accepted_answers)
        obj["normalization"] = {
            "trim": body.normalization.trim,
            "case_fold": body.normalization.case_fold,
            "collapse_internal_whitespace": body.normalization.collapse_internal_whitespace,
        }
    elif isinstance(body, CodeSnippetBody):
        obj["code"] = body.code
        obj["selectable_units"] = [
            unit.line if not unit.is_span else {"line": unit.line, "col_start": unit.col_start, "col_end": unit.col_end}
            for unit in body.selectable_units
        ]
        obj["correct_units"] = sorted(body.correct_units)
        obj["prompt_mode"] = body.prompt_mode.value
    elif isinstance(body, CodeEntryBody):
        obj["starter_code"] = body.starter_code
        obj["rule_set"] = [_rule_to_obj(r) for r in body.rule_set]
        obj["fixtures"] = {"known_good": list(body.known_good), "known_bad": list(body.known_bad)}
    elif isinstance(body, AssociateBody):
        obj["left"] = list(body.left)
        obj["right"] = list(body.right)
        obj["answer_map"] = {str(k): v for k, v in body.answer_map}
        obj["cardinality"] = body.cardinality.value
    return obj


def _rule_to_obj(rule: CodeRule) -> dict:
    obj: dict[str, Any] = {
        "rule_id": rule.rule_id,
        "kind": rule.kind.value,
        "pattern": rule.pattern,
        "feedback": rule.feedback,
    }
    if rule.limit is not None:
        obj["limit"] = rule.limit
    if rule.guideline is not None:
        obj["guideline"] = _guideline_to_obj(rule.guideline)
    return obj


def _hint_to_obj(hint: HintSpec) -> dict:
    obj: dict[str, Any] = {
        "hint_id": hint.hint_id,
        "kind": hint.kind.value,
        "text": hint.text,
        "cost": hint.cost,
        "unlock": {
            "after_seconds": hint.unlock.after_seconds,
            "after_failed_attempts": hint.unlock.after_failed_attempts,
        },
    }
    if hint.url is not None:
        obj["url"] = hint.url
    return obj


def _wrong_branch_to_obj(policy: WrongBranchPolicy) -> dict:
    obj: dict[str, Any] = {"policy": policy.policy.value}
    if policy.explanation is not None:
        obj["explanation"] = policy.explanation
    if policy.max_attempts is not None:
        obj["max_attempts"] = policy.max_attempts
    return obj


def _correct_branch_to_obj(policy: CorrectBranchPolicy) -> dict:
    obj: dict[str, Any] = {"policy": policy.policy.value}
    if policy.additional_question is not None:
        obj["additional_question"] = _body_to_obj(policy.additional_question)
    return obj
