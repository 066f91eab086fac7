"""Rule evaluation for code-entry challenges.

Match expressions are deliberately not regular expressions: a pattern is
literal text in which ``?`` matches any single character. ``\\?`` matches a
literal question mark and ``\\\\`` a literal backslash. This keeps authoring
predictable and rules out pathological matching behavior.

Matching is line-oriented over the raw code text: each line is stripped of
trailing whitespace, then scanned left to right for non-overlapping matches.
Patterns never span lines.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CodeRule, RuleKind


class PatternError(ValueError):
    """A malformed match expression. Surfaces at pack-validation time."""

    def __init__(self, pattern: str, reason: str):
        super().__init__(f"bad pattern {pattern!r}: {reason}")
        self.pattern = pattern
        self.reason = reason


_WILDCARD = object()


def compile_pattern(pattern: str) -> tuple[object, ...]:
    """Parse a match expression into a token sequence.

    Tokens are single characters or the wildcard marker. Raises
    :class:`PatternError` on an empty pattern or a dangling escape.
    """
    if pattern == "":
        raise PatternError(pattern, "pattern is empty")
    tokens: list[object] = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\":
            if i + 1 >= len(pattern):
                raise PatternError(pattern, "dangling escape at end of pattern")
            nxt = pattern[i + 1]
            if nxt not in ("?", "\\"):
                raise PatternError(pattern, f"unknown escape \\{nxt}")
            tokens.append(nxt)
            i += 2
        elif ch == "?":
            tokens.append(_WILDCARD)
            i += 1
        else:
            tokens.append(ch)
            i += 1
    return tuple(tokens)


def _matches_at(line: str, pos: int, tokens: tuple[object, ...]) -> bool:
    if pos + len(tokens) > len(line):
        return False
    for offset, tok in enumerate(tokens):
        if tok is _WILDCARD:
            continue
        if line[pos + offset] != tok:
            return False
    return True


def count_matches(pattern: str, code: str) -> int:
    """Count non-overlapping matches of ``pattern`` in ``code``, per line."""
    tokens = compile_pattern(pattern)
    total = 0
    for raw_line in code.split("\n"):
        line = raw_line.rstrip()
        pos = 0
        while pos + len(tokens) <= len(line):
            if _matches_at(line, pos, tokens):
                total += 1
                pos += len(tokens)
            else:
                pos += 1
    return total


@dataclass(frozen=True)
class RuleResult:
    rule: CodeRule
    passed: bool
    match_count: int


def evaluate_rule(rule: CodeRule, code: str) -> RuleResult:
    count = count_matches(rule.pattern, code)
    if rule.kind is RuleKind.FORBIDDEN:
        passed = count == 0
    elif rule.kind is RuleKind.REQUIRED:
        passed = count >= 1
    elif rule.kind is RuleKind.MAX_OCCURRENCES:
        limit = rule.limit if rule.limit is not None else 0
        passed = count <= limit
    else:  # pragma: no cover - RuleKind is closed
        raise ValueError(f"unknown rule kind {rule.kind}")
    return RuleResult(rule=rule, passed=passed, match_count=count)


def evaluate_rules(rule_set: tuple[CodeRule, ...], code: str) -> list[RuleResult]:
    """Evaluate every rule in order; one result per rule."""
    if not rule_set:
        raise ValueError("rule_set must not be empty")
    return [evaluate_rule(rule, code) for rule in rule_set]


def validate_rule_patterns(rule_set: tuple[CodeRule, ...]) -> None:
    """Compile every pattern so malformed ones fail at validation time."""
    for rule in rule_set:
        compile_pattern(rule.pattern)
