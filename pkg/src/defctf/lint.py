"""Advisory checks on parsed packs.

Lint never fails and never mutates the pack; it reports findings a challenge
author should look at before shipping. Findings are ordered by
(challenge_id, rule) and render one per line as ``SEVERITY challenge_id: message``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from statistics import median

from .model import Challenge, ChallengePack, CodeSnippetBody, CSCPromptMode


class Severity(str, Enum):
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class LintFinding:
    severity: Severity
    challenge_id: str
    rule: str
    message: str


def lint_pack(pack: ChallengePack) -> list[LintFinding]:
    findings: list[LintFinding] = []
    points_median = median(c.base_points for c in pack.challenges)
    for challenge in pack.challenges:
        findings.extend(_lint_challenge(challenge, points_median))
    findings.sort(key=lambda f: (f.challenge_id, f.rule))
    return findings


def _lint_challenge(challenge: Challenge, points_median: float) -> list[LintFinding]:
    findings: list[LintFinding] = []

    if challenge.conclusion.explanation.strip() == "":
        findings.append(
            LintFinding(
                Severity.WARNING,
                challenge.id,
                "conclusion-explanation",
                "missing conclusion explanation",
            )
        )

    threshold = challenge.base_points * 0.25
    for hint in challenge.hints:
        if hint.cost > threshold:
            findings.append(
                LintFinding(
                    Severity.WARNING,
                    challenge.id,
                    "hint-cost",
                    f"hint {hint.hint_id!r} cost {hint.cost} exceeds 25% of base points "
                    f"({challenge.base_points})",
                )
            )

    if not challenge.hints and challenge.base_points > points_median:
        findings.append(
            LintFinding(
                Severity.INFO,
                challenge.id,
                "no-hints-difficult",
                f"no hints on a challenge worth {challenge.base_points} points "
                f"(pack median {points_median:g})",
            )
        )

    body = challenge.body
    if (
        isinstance(body, CodeSnippetBody)
        and body.prompt_mode is CSCPromptMode.FIND_VIOLATED_GUIDELINE
        and challenge.guideline is None
    ):
        findings.append(
            LintFinding(
                Severity.WARNING,
                challenge.id,
                "csc-guideline",
                "find-violated-guideline challenge has no guideline reference",
            )
        )

    return findings


def render_findings(findings: list[LintFinding]) -> str:
    """Line-oriented lint output, one finding per line."""
    return "\n".join(
        f"{f.severity.value.upper()} {f.challenge_id}: {f.message}" for f in findings
    )
