"""Author tooling: validate, lint, dry-run, and report on packs, plus serve.

Exit codes for ``validate``: 0 valid, 1 parse error, 2 fixture error,
3 unreadable file. ``dryrun`` exits 1 when the script attempts an action
that is illegal in the current stage, naming the offending step.

Dry-run scripts are JSON lines in the event-log format; a recorded session
log can be fed back in unchanged, and hand-written scripts may use the
short action names ``answer``, ``hint``, and ``ack``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .grading import MalformedSubmission, VariantMismatch, submission_from_dict
from .lint import lint_pack, render_findings
from .model import Challenge, ChallengePack
from .packio import FixtureError, ParseError, load_pack
from .report import pack_report, render_report
from .session import (
    Session,
    StageTag,
    WrongStage,
    acknowledge,
    request_hint,
    start_session,
    submit,
)

DRYRUN_SECRET = "dryrun"

_ANSWER_STEPS = {"answer", "Answered", "IntroQuizAnswered", "ConclusionAnswered"}
_ACK_STEPS = {"ack", "IntroAcknowledged", "ExplanationShown"}
_HINT_STEPS = {"hint", "HintRequested"}
_SKIP_STEPS = {"Started"}


def _load_or_fail(path: str) -> tuple[Optional[ChallengePack], int]:
    try:
        return load_pack(path), 0
    except FixtureError as exc:
        print(f"FIXTURE ERROR {exc.path}: {exc.reason}", file=sys.stderr)
        return None, 2
    except ParseError as exc:
        print(f"PARSE ERROR {exc.path}: {exc.reason}", file=sys.stderr)
        return None, 1
    except OSError as exc:
        print(f"IO ERROR {path}: {exc}", file=sys.stderr)
        return None, 3


def cmd_validate(args: argparse.Namespace) -> int:
    pack, code = _load_or_fail(args.pack)
    if pack is None:
        return code
    print(f"OK: {len(pack.challenges)} challenges")
    return 0


def cmd_lint(args: argparse.Namespace) -> int:
    pack, code = _load_or_fail(args.pack)
    if pack is None:
        return code
    findings = lint_pack(pack)
    if findings:
        print(render_findings(findings))
    else:
        print("no findings")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    pack, code = _load_or_fail(args.pack)
    if pack is None:
        return code
    print(render_report(pack_report(pack)))
    findings = lint_pack(pack)
    print()
    print(f"lint findings:   {len(findings)}")
    if findings:
        print(render_findings(findings))
    return 0


def _read_script(path: str) -> list[dict]:
    steps = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {line_no}: not valid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise ValueError(f"line {line_no}: expected an object")
            steps.append(record)
    return steps


def _stage_name(session: Session) -> str:
    tag = session.stage.tag
    if tag is StageTag.FINISHED:
        outcome = session.stage.outcome
        return f"finished({outcome.value if outcome else '?'})"
    return tag.value


def cmd_dryrun(args: argparse.Namespace) -> int:
    pack, code = _load_or_fail(args.pack)
    if pack is None:
        return code
    try:
        challenge: Challenge = pack.challenge(args.challenge_id)
    except KeyError:
        print(f"ERROR: no challenge {args.challenge_id!r} in pack", file=sys.stderr)
        return 1
    try:
        steps = _read_script(args.script)
    except OSError as exc:
        print(f"IO ERROR {args.script}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"SCRIPT ERROR {args.script}: {exc}", file=sys.stderr)
        return 1

    seed = args.seed
    if seed is None:
        seed = next(
            (int(s["payload"]["seed"]) for s in steps
             if s.get("event_type") == "Started" and isinstance(s.get("payload"), dict)
             and "seed" in s["payload"]),
            0,
        )

    session = start_session(challenge, player_id="dryrun", seed=seed, session_id="dryrun")
    print(f"session start: stage {_stage_name(session)}, score {session.score}, seed {seed}")

    for index, step in enumerate(steps):
        kind = step.get("event_type") or step.get("action")
        clock = step.get("logical_clock", session.clock)
        if not isinstance(clock, int):
            clock = session.clock
        if kind in _SKIP_STEPS:
            continue
        if kind == "Finished":
            # in a recorded log this is either the terminal confirmation of a
            # transition the previous action already made (skip) or the
            # conclusion-stage acknowledgment (replay as an ack)
            if session.stage.tag is not StageTag.CONCLUSION:
                continue
            kind = "ack"
        before_stage, before_score = _stage_name(session), session.score
        try:
            if kind in _ANSWER_STEPS:
                payload = step.get("payload", {})
                raw = payload.get("submission") if isinstance(payload, dict) else None
                if raw is None:
                    raw = step.get("submission")
                submission = submission_from_dict(raw)
                result = submit(
                    session, challenge, submission, clock=clock, server_secret=DRYRUN_SECRET
                )
                session = result.session
                verdict = "accepted" if result.verdict.accepted else "rejected"
                note = f"{verdict}"
                for message in result.verdict.feedback:
                    note += f"\n      coach: {message}"
            elif kind in _HINT_STEPS:
                grant = request_hint(session, challenge, clock=clock)
                session = grant.session
                if grant.hint is not None:
                    note = f"hint {grant.hint.hint_id} (cost {grant.hint.cost}): {grant.hint.text}"
                else:
                    note = f"locked: {grant.locked_reason}"
            elif kind in _ACK_STEPS:
                session = acknowledge(session, challenge, clock=clock, server_secret=DRYRUN_SECRET)
                note = "acknowledged"
            else:
                print(f"step {index}: unknown action {kind!r}", file=sys.stderr)
                return 1
        except WrongStage as exc:
            print(f"step {index}: illegal action: {exc}", file=sys.stderr)
            return 1
        except (MalformedSubmission, VariantMismatch) as exc:
            print(f"step {index}: bad submission: {exc}", file=sys.stderr)
            return 1
        delta = session.score - before_score
        delta_note = f" ({delta:+d})" if delta else ""
        print(
            f"[{index}] {kind}: {note}\n"
            f"      stage {before_stage} -> {_stage_name(session)}, "
            f"score {session.score}{delta_note}"
        )

    summary = f"final: {_stage_name(session)}, score={session.score}"
    if session.flag is not None:
        summary += f", flag={session.flag}"
    print(summary)
    return 0


def _parse_tokens(pairs: list[str]) -> dict[str, str]:
    tokens: dict[str, str] = {}
    for pair in pairs:
        token, sep, player = pair.partition("=")
        if not sep or not token or not player:
            raise ValueError(f"expected TOKEN=PLAYER, got {pair!r}")
        tokens[token] = player
    return tokens


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import ConfigError, ServiceConfig, serve

    if not args.secret:
        print(
            "ERROR: a server secret is required (--secret); flags are derived from it",
            file=sys.stderr,
        )
        return 1
    try:
        tokens = _parse_tokens(args.token or [])
    except ValueError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1
    config = ServiceConfig(
        pack_paths=[Path(p) for p in args.pack],
        server_secret=args.secret,
        storage_dir=Path(args.storage),
        tokens=tokens or {"dev-token": "player1"},
        host=args.host,
        port=args.port,
        ui_dir=Path(args.ui) if args.ui else None,
    )
    try:
        serve(config)
    except FixtureError as exc:
        print(f"FIXTURE ERROR {exc.path}: {exc.reason}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"PARSE ERROR {exc.path}: {exc.reason}", file=sys.stderr)
        return 1
    except (ConfigError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defctf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="parse a pack and check every invariant")
    p_validate.add_argument("pack")
    p_validate.set_defaults(func=cmd_validate)

    p_lint = sub.add_parser("lint", help="report advisory findings on a pack")
    p_lint.add_argument("pack")
    p_lint.set_defaults(func=cmd_lint)

    p_report = sub.add_parser("report", help="per-type counts, score envelope, agreement data")
    p_report.add_argument("pack")
    p_report.set_defaults(func=cmd_report)

    p_dryrun = sub.add_parser("dryrun", help="run a scripted session offline")
    p_dryrun.add_argument("pack")
    p_dryrun.add_argument("challenge_id")
    p_dryrun.add_argument("script", help="JSON-lines action script (event-log format)")
    p_dryrun.add_argument("--seed", type=int, default=None, help="presentation seed")
    p_dryrun.set_defaults(func=cmd_dryrun)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--pack", action="append", required=True, help="pack file (repeatable)")
    p_serve.add_argument("--secret", default="", help="server secret for flag issuance")
    p_serve.add_argument("--storage", default="./defctf-data", help="event-log directory")
    p_serve.add_argument("--token", action="append", help="TOKEN=PLAYER (repeatable)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui", default="", help="directory with the built web client")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
