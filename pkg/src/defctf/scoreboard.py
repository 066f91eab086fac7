"""Scoreboard: a pure fold over Finished events.

Only the first solve of a (player, challenge) pair counts; repeat solves
and unsolved finishes contribute nothing. Entries order by total score
descending, then by the global order of the player's last counted solve —
between equal scores, whoever got there first wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .session import Finished, Outcome


@dataclass(frozen=True)
class ScoreboardEntry:
    player_id: str
    solved: int
    total_score: int
    last_solve_order: int


def build_scoreboard(
    finished_records: Iterable[tuple[int, str, str, str, Finished]],
) -> list[ScoreboardEntry]:
    solved_pairs: set[tuple[str, str]] = set()
    solved_count: dict[str, int] = {}
    totals: dict[str, int] = {}
    last_solve: dict[str, int] = {}

    for order, _session_id, player_id, challenge_id, event in finished_records:
        if event.outcome is not Outcome.SOLVED:
            continue
        pair = (player_id, challenge_id)
        if pair in solved_pairs:
            continue
        solved_pairs.add(pair)
        solved_count[player_id] = solved_count.get(player_id, 0) + 1
        totals[player_id] = totals.get(player_id, 0) + event.score
        last_solve[player_id] = order

    entries = [
        ScoreboardEntry(
            player_id=player,
            solved=solved_count[player],
            total_score=totals[player],
            last_solve_order=last_solve[player],
        )
        for player in totals
    ]
    entries.sort(key=lambda e: (-e.total_score, e.last_solve_order, e.player_id))
    return entries
