from __future__ import annotations

from defctf.lint import lint_pack
from defctf.model import ChallengeType, CorrectBranch, CSCPromptMode, HintKind, WrongBranch
from defctf.packio import parse_pack, serialize_pack
from defctf.rules import evaluate_rules
from defctf.samplepack import build_sample_pack


def test_one_challenge_per_type(sample_pack):
    assert [c.type for c in sample_pack.challenges] == [
        ChallengeType.SCQ,
        ChallengeType.MCQ,
        ChallengeType.TEQ,
        ChallengeType.CSC,
        ChallengeType.CEC,
        ChallengeType.ALR,
    ]


def test_pack_parses_and_round_trips(sample_pack):
    assert parse_pack(serialize_pack(sample_pack)) == sample_pack


def test_zero_lint_findings(sample_pack):
    assert lint_pack(sample_pack) == []


def test_every_wrong_branch_policy_appears(sample_pack):
    used = {c.wrong_branch.policy for c in sample_pack.challenges}
    assert used == set(WrongBranch)


def test_both_correct_branch_policies_appear(sample_pack):
    used = {c.correct_branch.policy for c in sample_pack.challenges}
    assert used == set(CorrectBranch)


def test_all_three_hint_kinds_appear_across_the_pack(sample_pack):
    kinds = {h.kind for c in sample_pack.challenges for h in c.hints}
    assert kinds == set(HintKind)


def test_every_challenge_has_intro_hints_and_conclusion(sample_pack):
    for challenge in sample_pack.challenges:
        assert challenge.intro is not None and challenge.intro.text
        assert challenge.hints
        assert challenge.conclusion.explanation.strip()
        assert challenge.conclusion.references


def test_intro_quiz_present_somewhere(sample_pack):
    assert any(c.intro.quiz is not None for c in sample_pack.challenges)


def test_csc_is_guideline_hunt_with_three_candidates(sample_pack):
    challenge = sample_pack.challenge("csc-spot-the-violation")
    assert challenge.body.prompt_mode is CSCPromptMode.FIND_VIOLATED_GUIDELINE
    assert challenge.guideline is not None
    # the prompt offers three candidate guidelines by name
    assert challenge.body.guiding_question.count("CERT") == 3


def test_cec_fixtures_bracket_the_rule_set(sample_pack):
    body = sample_pack.challenge("cec-bounded-format").body
    assert body.known_bad == (body.starter_code,)
    for sample in body.known_good:
        assert all(r.passed for r in evaluate_rules(body.rule_set, sample))
    for sample in body.known_bad:
        assert not all(r.passed for r in evaluate_rules(body.rule_set, sample))


def test_cec_covers_forbidden_required_and_max_kinds(sample_pack):
    kinds = {r.kind.value for r in sample_pack.challenge("cec-bounded-format").body.rule_set}
    assert kinds == {"forbidden-pattern", "required-pattern", "max-occurrences"}


def test_builder_is_deterministic():
    assert build_sample_pack() == build_sample_pack()


def test_guideline_catalog_covers_citations(sample_pack):
    catalog = {ref.key for ref in sample_pack.scg_catalog}
    for challenge in sample_pack.challenges:
        if challenge.guideline:
            assert challenge.guideline.key in catalog
