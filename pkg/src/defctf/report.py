"""Aggregate reporting over a pack for authors.

The expert-agreement figure averages the per-type survey means over the
challenges that have survey data (associate challenges have none and are
skipped). It describes reviewer preference for the chosen mix of types, not
anything about gameplay scoring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import CHALLENGE_TYPE_DESCRIPTORS, ChallengePack, ChallengeType


@dataclass(frozen=True)
class PackReport:
    pack_id: str
    challenge_count: int
    counts_by_type: dict[ChallengeType, int]
    min_total_score: int
    max_total_score: int
    expert_agreement_mean: Optional[float]


def pack_report(pack: ChallengePack) -> PackReport:
    counts: dict[ChallengeType, int] = {t: 0 for t in ChallengeType}
    for challenge in pack.challenges:
        counts[challenge.type] += 1

    min_total = sum(c.score_policy.min_score for c in pack.challenges)
    max_total = sum(c.base_points for c in pack.challenges)

    agreement_values = [
        CHALLENGE_TYPE_DESCRIPTORS[c.type].expert_agreement_mean
        for c in pack.challenges
        if CHALLENGE_TYPE_DESCRIPTORS[c.type].expert_agreement_mean is not None
    ]
    agreement = sum(agreement_values) / len(agreement_values) if agreement_values else None

    return PackReport(
        pack_id=pack.pack_id,
        challenge_count=len(pack.challenges),
        counts_by_type={t: n for t, n in counts.items() if n > 0},
        min_total_score=min_total,
        max_total_score=max_total,
        expert_agreement_mean=agreement,
    )


def render_report(report: PackReport) -> str:
    lines = [
        f"pack:            {report.pack_id}",
        f"challenges:      {report.challenge_count}",
    ]
    for type_tag, count in sorted(report.counts_by_type.items(), key=lambda kv: kv[0].value):
        descriptor = CHALLENGE_TYPE_DESCRIPTORS[type_tag]
        if descriptor.expert_agreement_mean is not None:
            agreement = (
                f"agreement {descriptor.expert_agreement_mean:.2f} "
                f"+/- {descriptor.expert_agreement_stddev:.2f} (rank {descriptor.rank})"
            )
        else:
            agreement = "no survey data"
        lines.append(f"  {type_tag.value:<4} x{count}   {agreement}")
    lines.append(f"score envelope:  {report.min_total_score}..{report.max_total_score}")
    if report.expert_agreement_mean is not None:
        lines.append(f"mean agreement:  {report.expert_agreement_mean:.2f}")
    else:
        lines.append("mean agreement:  n/a (no surveyed types)")
    return "\n".join(lines)
