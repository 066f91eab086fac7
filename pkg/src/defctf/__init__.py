"""Defense-only, jeopardy-style CTF engine for secure-coding training.

Layers, bottom up: the challenge model and pack format (:mod:`defctf.model`,
:mod:`defctf.packio`), pure graders (:mod:`defctf.grading`,
:mod:`defctf.rules`), seeded presentation (:mod:`defctf.presentation`),
the event-sourced session engine (:mod:`defctf.session`), and on top the
HTTP service (:mod:`defctf.service`) and author CLI (:mod:`defctf.cli`).
"""

from .grading import Submission, Verdict, grade
from .lint import LintFinding, lint_pack
from .model import Challenge, ChallengeBody, ChallengePack, ChallengeType
from .packio import FixtureError, ParseError, load_pack, parse_pack, serialize_pack
from .presentation import PresentedBody, randomize_presentation
from .report import PackReport, pack_report
from .samplepack import build_sample_pack
from .session import (
    Session,
    SessionEvent,
    acknowledge,
    compute_score,
    issue_flag,
    replay,
    request_hint,
    start_session,
    submit,
)

__version__ = "0.1.0"

__all__ = [
    "Challenge",
    "ChallengeBody",
    "ChallengePack",
    "ChallengeType",
    "FixtureError",
    "LintFinding",
    "PackReport",
    "ParseError",
    "PresentedBody",
    "Session",
    "SessionEvent",
    "Submission",
    "Verdict",
    "acknowledge",
    "build_sample_pack",
    "compute_score",
    "grade",
    "issue_flag",
    "lint_pack",
    "load_pack",
    "pack_report",
    "parse_pack",
    "randomize_presentation",
    "replay",
    "request_hint",
    "serialize_pack",
    "start_session",
    "submit",
]
