"""Shared test drivers and the acceptance-summary hook."""

from __future__ import annotations

import random
from datetime import datetime, timedelta
from pathlib import Path

import pytest

from snake_story import (
    Choice,
    GameConfig,
    Phase,
    ProviderConfig,
    SessionStatus,
    SessionVersion,
    SteppingClock,
    TickInput,
)
from snake_story import orchestrator

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GAME_FIXTURE = FIXTURES / "sample_game_session.log"
NONGAME_FIXTURE = FIXTURES / "sample_nongame_session.log"

EPOCH = datetime(2024, 3, 1, 9, 30, 0)

# Acceptance tests append one line each; the terminal-summary hook
# prints them so every criterion shows a visible pass/fail line.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def stepping_clock(step_ms: int = 400) -> SteppingClock:
    return SteppingClock(EPOCH, timedelta(milliseconds=step_ms))


def start_nongame(seed: int = 0, clock=None):
    return orchestrator.start_session(
        SessionVersion.NONGAME,
        GameConfig(),
        ProviderConfig(offline=True, offline_seed=seed),
        seed=seed,
        clock=clock or stepping_clock(),
    )


def start_game(seed: int = 0, clock=None, config: GameConfig | None = None):
    return orchestrator.start_session(
        SessionVersion.GAME,
        config or GameConfig(),
        ProviderConfig(offline=True, offline_seed=seed),
        seed=seed,
        clock=clock or stepping_clock(),
    )


def drive_nongame(seed: int, turns: int) -> "orchestrator.Session":
    """A deterministic non-game session: seeded random choices, then End."""
    rng = random.Random(seed * 7919 + 13)
    session = start_nongame(seed)
    for _ in range(turns):
        if session.status is not SessionStatus.ACTIVE:
            break
        roll = rng.random()
        if roll < 0.4:
            orchestrator.submit_choice(session, Choice.slot0())
        elif roll < 0.8:
            orchestrator.submit_choice(session, Choice.slot1())
        else:
            words = " ".join(rng.choice("sun moss reed dew fern owl".split())
                             for _ in range(rng.randrange(3, 9)))
            orchestrator.submit_choice(
                session, Choice.self_text(f"The snake saw {words}.")
            )
    if session.status is SessionStatus.ACTIVE:
        orchestrator.submit_choice(session, Choice.end_story())
    return session


def drive_game(seed: int, max_turns: int = 6) -> "orchestrator.Session":
    """A deterministic game session: walk to the nearest candy each turn."""
    from snake_story import policysim

    session = start_game(seed)
    ticks = 0
    while session.status is SessionStatus.ACTIVE and ticks < 2000:
        game = session.game
        assert game is not None
        if game.turn_index >= max_turns:
            session.abort()
            break
        if game.phase is Phase.PAUSED:
            orchestrator.advance_game(session, TickInput(end_pause=True))
            continue
        targets = [c for c in game.candies if not c.inert]
        paths = [
            p
            for c in targets
            if (p := policysim.shortest_path(game, c.position)) is not None
        ]
        if not paths:
            session.abort()
            break
        steer = min(paths, key=len)[0]
        orchestrator.advance_game(session, TickInput(steer=steer))
        ticks += 1
    if session.status is SessionStatus.ACTIVE:
        session.abort()
    return session


@pytest.fixture
def game_fixture_text() -> str:
    return GAME_FIXTURE.read_bytes().decode("utf-8")


@pytest.fixture
def nongame_fixture_text() -> str:
    return NONGAME_FIXTURE.read_bytes().decode("utf-8")
