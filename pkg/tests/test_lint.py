from __future__ import annotations

import dataclasses

from defctf.lint import Severity, lint_pack, render_findings
from defctf.model import (
    ChallengePack,
    ConclusionStage,
    CSCPromptMode,
    CodeSnippetBody,
    HintKind,
    HintSpec,
    SelectableUnit,
)
from defctf.samplepack import build_sample_pack

from .conftest import make_challenge, scq_body


def pack_of(*challenges) -> ChallengePack:
    return ChallengePack(
        pack_id="lintpack", title="t", version="1", challenges=tuple(challenges)
    )


def test_clean_challenge_yields_no_findings():
    pack = pack_of(make_challenge(scq_body()))
    assert lint_pack(pack) == []


def test_missing_conclusion_explanation_is_a_warning():
    challenge = dataclasses.replace(
        make_challenge(scq_body()), conclusion=ConclusionStage(explanation="")
    )
    findings = lint_pack(pack_of(challenge))
    assert [(f.severity, f.rule) for f in findings] == [
        (Severity.WARNING, "conclusion-explanation")
    ]
    assert "missing conclusion explanation" in findings[0].message


def test_hint_cost_over_quarter_of_base_points_is_a_warning():
    # threshold = 0.25 * 100 = 25, so 80 must warn and 25 must not
    expensive = HintSpec("h1", HintKind.CONCEPT_DISCLOSURE, "spendy", cost=80)
    cheap = HintSpec("h2", HintKind.CONCEPT_DISCLOSURE, "fine", cost=25)
    challenge = make_challenge(scq_body(), base_points=100, hints=[expensive, cheap])
    findings = lint_pack(pack_of(challenge))
    assert len(findings) == 1
    assert findings[0].rule == "hint-cost"
    assert "exceeds 25%" in findings[0].message
    assert "h1" in findings[0].message


def test_hintless_challenge_above_median_points_is_an_info():
    cheap = make_challenge(scq_body(), challenge_id="a", base_points=50)
    mid = make_challenge(scq_body(), challenge_id="b", base_points=100)
    hard = make_challenge(scq_body(), challenge_id="c", base_points=200)
    findings = lint_pack(pack_of(cheap, mid, hard))
    assert [(f.severity, f.challenge_id, f.rule) for f in findings] == [
        (Severity.INFO, "c", "no-hints-difficult")
    ]


def test_hintless_challenge_at_median_is_fine():
    a = make_challenge(scq_body(), challenge_id="a", base_points=100)
    b = make_challenge(scq_body(), challenge_id="b", base_points=100)
    assert lint_pack(pack_of(a, b)) == []


def test_guideline_mode_snippet_without_guideline_ref_warns():
    body = CodeSnippetBody(
        guiding_question="which rule is broken here?",
        code="gets(buf);",
        selectable_units=(SelectableUnit(line=1),),
        correct_units=frozenset({0}),
        prompt_mode=CSCPromptMode.FIND_VIOLATED_GUIDELINE,
    )
    findings = lint_pack(pack_of(make_challenge(body)))
    assert [f.rule for f in findings] == ["csc-guideline"]
    assert findings[0].severity is Severity.WARNING


def test_findings_ordered_by_challenge_then_rule():
    noisy_b = dataclasses.replace(
        make_challenge(scq_body(), challenge_id="b", base_points=300),
        conclusion=ConclusionStage(explanation=""),
    )
    noisy_a = dataclasses.replace(
        make_challenge(scq_body(), challenge_id="a", base_points=100),
        conclusion=ConclusionStage(explanation=""),
    )
    findings = lint_pack(pack_of(noisy_b, noisy_a))
    assert [(f.challenge_id, f.rule) for f in findings] == [
        ("a", "conclusion-explanation"),
        ("b", "conclusion-explanation"),
        ("b", "no-hints-difficult"),
    ]


def test_render_format_is_severity_id_message():
    challenge = dataclasses.replace(
        make_challenge(scq_body(), challenge_id="ch-9"),
        conclusion=ConclusionStage(explanation=""),
    )
    out = render_findings(lint_pack(pack_of(challenge)))
    assert out == "WARNING ch-9: missing conclusion explanation"


def test_lint_never_mutates_the_pack():
    pack = build_sample_pack()
    before = pack
    lint_pack(pack)
    assert pack == before


def test_sample_pack_is_lint_clean():
    assert lint_pack(build_sample_pack()) == []
