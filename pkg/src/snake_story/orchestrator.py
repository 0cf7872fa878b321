"""Session driver for both interaction versions.

A session owns one story under construction: it requests the two
temperature-contrasted continuations each turn, routes player choices
(or typed text) into the story, keeps the transcript, and assembles
the result page data.  The game version additionally owns a board
state and translates engine events into transcript lines.

Time enters only through the injected clock, and all randomness is
seeded, so identical (config, seed, input script, clock) runs produce
byte-identical transcripts.
"""

from __future__ import annotations

import dataclasses
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import Optional, Protocol

from . import engine, provider, sessionlog
from .engine import CandyKind, Direction, GameConfig, GameState, Phase, TurnEvent
from .errors import EngineJammed, ProviderUnavailable, SequencingError, VersionError
from .words import count_words

# Endings need a story to close over; sessions abandoned before any
# fragment landed get this stand-in opening.
EMPTY_STORY_STANDIN = "The snake looked for a story to tell."

_ORIGIN_BY_SLOT = {0: "slot0", 1: "slot1", 2: "self"}


class Clock(Protocol):
    def now(self) -> datetime: ...


class SystemClock:
    def now(self) -> datetime:
        return datetime.now()


class SteppingClock:
    """Deterministic clock advancing a fixed step per reading."""

    def __init__(self, start: datetime, step: timedelta = timedelta(seconds=1)):
        self._next = start
        self._step = step

    def now(self) -> datetime:
        current = self._next
        self._next = current + self._step
        return current


class SessionVersion(Enum):
    NONGAME = "nongame"
    GAME = "game"


class SessionStatus(Enum):
    ACTIVE = "active"
    ENDED = "ended"


@dataclass(frozen=True)
class Fragment:
    text: str
    origin: str  # "slot0" | "slot1" | "self"


@dataclass(frozen=True)
class Choice:
    """A non-game turn decision."""

    kind: str  # "slot0" | "slot1" | "self_text" | "end_story"
    text: Optional[str] = None

    @classmethod
    def slot0(cls) -> "Choice":
        return cls("slot0")

    @classmethod
    def slot1(cls) -> "Choice":
        return cls("slot1")

    @classmethod
    def self_text(cls, text: str) -> "Choice":
        return cls("self_text", text=text)

    @classmethod
    def end_story(cls) -> "Choice":
        return cls("end_story")


@dataclass(frozen=True)
class TickInput:
    """One game-version input frame."""

    steer: Optional[Direction] = None
    end_pause: bool = False
    self_text: Optional[str] = None


@dataclass(frozen=True)
class StoryResult:
    full_story: str
    story_word_count: int
    snake_length: Optional[int] = None
    candies_eaten: Optional[dict[CandyKind, int]] = None


def _join_fragments(texts) -> str:
    return " ".join(t.strip() for t in texts if t.strip())


@dataclass
class Session:
    id: str
    version: SessionVersion
    config: GameConfig
    provider_config: provider.ProviderConfig
    seed: int
    clock: Clock
    created_at: datetime
    status: SessionStatus = SessionStatus.ACTIVE
    fragments: list[Fragment] = field(default_factory=list)
    decision_times: list[float] = field(default_factory=list)
    game: Optional[GameState] = None
    holding: bool = False  # provider failed; texts pending retry
    ending: Optional[str] = None
    events: list[sessionlog.SessionEvent] = field(default_factory=list)
    pending_options: Optional[tuple[provider.TextOption, provider.TextOption]] = None
    _options_shown_at: Optional[datetime] = None
    _last_advance_at: Optional[datetime] = None

    @property
    def story(self) -> str:
        return _join_fragments(f.text for f in self.fragments)

    def session_log(self) -> sessionlog.SessionLog:
        return sessionlog.SessionLog(events=tuple(self.events))

    # -- transcript helpers -------------------------------------------------

    def _log(self, event: sessionlog.SessionEvent) -> None:
        # The transcript format carries whole seconds only; truncate on
        # entry so a serialized log parses back to equal events.
        self.events.append(
            dataclasses.replace(
                event, timestamp=event.timestamp.replace(microsecond=0)
            )
        )

    def _log_options(self, low: provider.TextOption, high: provider.TextOption) -> None:
        now = self.clock.now()
        if self.version is SessionVersion.GAME:
            assert self.game is not None
            by_slot = {c.option_slot: c for c in self.game.candies}
            self._log(
                sessionlog.OptionShown(
                    now, 0, slot=0, kind=int(by_slot[0].kind), text=by_slot[0].text
                )
            )
            self._log(
                sessionlog.OptionShown(
                    now, 1, slot=1, kind=int(by_slot[1].kind), text=by_slot[1].text
                )
            )
        else:
            self._log(
                sessionlog.StoryOption(now, 0, temperature=low.temperature, text=low.text)
            )
            self._log(
                sessionlog.StoryOption(now, 1, temperature=high.temperature, text=high.text)
            )
        self._options_shown_at = now

    # -- turn sequencing ----------------------------------------------------

    def _request_texts(self) -> None:
        """Generate this turn's option pair; on provider failure the
        session parks in a retryable holding state."""
        try:
            low, high = provider.generate_options(
                self.story, self.provider_config, self.config
            )
        except ProviderUnavailable:
            self.holding = True
            raise
        self.holding = False
        if self.version is SessionVersion.GAME:
            assert self.game is not None
            try:
                self.game = engine.spawn_turn_candies(self.game, low, high)
            except EngineJammed:
                self._end_session()
                return
        self.pending_options = (low, high)
        self._log_options(low, high)

    def retry_texts(self) -> None:
        """Retry option generation after a provider failure."""
        if self.status is not SessionStatus.ACTIVE:
            raise SequencingError("session already ended")
        if not self.holding:
            raise SequencingError("no text request is pending retry")
        self._request_texts()

    def _end_session(self) -> None:
        basis = self.story.strip() or EMPTY_STORY_STANDIN
        self.ending = provider.generate_ending(
            basis, self.provider_config, self.config
        )
        now = self.clock.now()
        if self.version is SessionVersion.GAME:
            assert self.game is not None
            self._log(sessionlog.GameEnd(now, 1))
            self._log(sessionlog.AteCount(now, 0, count=self.game.total_eaten))
        else:
            self._log(sessionlog.GameEnd(now, 0))
        self.status = SessionStatus.ENDED

    def abort(self) -> None:
        """End an active session from outside (quit, disconnect timeout)."""
        if self.status is not SessionStatus.ACTIVE:
            return
        self._end_session()


def start_session(
    version: SessionVersion,
    config: Optional[GameConfig] = None,
    provider_config: Optional[provider.ProviderConfig] = None,
    seed: int = 0,
    clock: Optional[Clock] = None,
    session_id: Optional[str] = None,
) -> Session:
    """Open a session and request the first pair of continuations.

    A provider failure leaves the session in a retryable holding state
    rather than tearing it down; call :meth:`Session.retry_texts`.
    """
    config = config or GameConfig()
    config.validate()
    provider_config = provider_config or provider.ProviderConfig(
        offline=True, offline_seed=seed
    )
    provider_config.validate()
    clock = clock or SystemClock()
    session = Session(
        id=session_id or uuid.uuid4().hex[:12],
        version=version,
        config=config,
        provider_config=provider_config,
        seed=seed,
        clock=clock,
        created_at=clock.now(),
    )
    session._log(sessionlog.GameStart(session.created_at, 1))
    if version is SessionVersion.GAME:
        session.game = engine.new_game(config, seed)
    try:
        session._request_texts()
    except ProviderUnavailable:
        pass  # session stays active and holding
    return session


def submit_choice(session: Session, choice: Choice) -> Session:
    """Apply one non-game turn decision."""
    if session.version is not SessionVersion.NONGAME:
        raise VersionError("choices apply to non-game sessions; use advance_game")
    if session.status is not SessionStatus.ACTIVE:
        raise SequencingError("session already ended")
    if session.holding or session.pending_options is None:
        raise SequencingError("options are still being generated")

    now = session.clock.now()
    low, high = session.pending_options
    if choice.kind in ("slot0", "slot1"):
        picked = low if choice.kind == "slot0" else high
        session._log(
            sessionlog.StoryChose(now, 1, temperature=picked.temperature)
        )
        session.fragments.append(Fragment(picked.text, choice.kind))
    elif choice.kind == "self_text":
        if not choice.text or not choice.text.strip():
            raise SequencingError("self-written text must be non-empty")
        session._log(sessionlog.OwnText(now, 1, text=choice.text))
        session.fragments.append(Fragment(choice.text, "self"))
    elif choice.kind == "end_story":
        session._end_session()
        return session
    else:
        raise SequencingError(f"unknown choice kind {choice.kind!r}")

    if session._options_shown_at is not None:
        session.decision_times.append(
            (now - session._options_shown_at).total_seconds()
        )
    session.pending_options = None
    session._request_texts()
    return session


def advance_game(
    session: Session, inputs: Optional[TickInput] = None
) -> tuple[Session, list[TurnEvent]]:
    """Advance a game-version session by one input frame.

    During the pause phase this consumes injected-clock time (typing
    and early-end inputs land here); during the moving phase it runs
    exactly one engine tick with the given steering.
    """
    if session.version is not SessionVersion.GAME:
        raise VersionError("tick inputs apply to game sessions; use submit_choice")
    if session.status is not SessionStatus.ACTIVE:
        raise SequencingError("session already ended")
    if session.holding:
        session.retry_texts()
    inputs = inputs or TickInput()
    assert session.game is not None
    now = session.clock.now()
    events: list[TurnEvent] = []

    if inputs.self_text is not None and session.game.phase in (
        Phase.PAUSED,
        Phase.MOVING,
    ):
        session.game = engine.set_self_text(session.game, inputs.self_text)
        self_candy = next(
            c for c in session.game.candies if c.option_slot == engine.SLOT_SELF
        )
        session._log(
            sessionlog.OptionShown(
                now, 1, slot=2, kind=int(CandyKind.YELLOW), text=self_candy.text
            )
        )

    if session.game.phase is Phase.PAUSED:
        if inputs.end_pause:
            session.game = engine.end_pause(session.game)
        elif session._last_advance_at is not None:
            elapsed_ms = (now - session._last_advance_at).total_seconds() * 1000.0
            if elapsed_ms > 0:
                session.game = engine.advance_pause(session.game, elapsed_ms)
    elif session.game.phase is Phase.MOVING:
        session.game, events = engine.step(session.game, inputs.steer)
        eaten_slot: Optional[int] = None
        for event in events:
            if event.type is engine.EventType.CANDY_EATEN:
                eaten_slot = event.option_slot
                session._log(
                    sessionlog.Chose(
                        now, 2, slot=event.option_slot, kind=int(event.kind)
                    )
                )
                if session._options_shown_at is not None:
                    session.decision_times.append(
                        (now - session._options_shown_at).total_seconds()
                    )
            elif event.type is engine.EventType.TEXT_APPENDED:
                assert eaten_slot is not None
                session.fragments.append(
                    Fragment(event.text, _ORIGIN_BY_SLOT[eaten_slot])
                )
        if session.game.phase is Phase.ENDED:
            session._end_session()
        elif session.game.phase is Phase.AWAITING_TEXTS:
            session.pending_options = None
            session._request_texts()
    else:
        raise SequencingError(
            f"session cannot advance during {session.game.phase.value}"
        )

    session._last_advance_at = now
    return session, events


def finalize(session: Session) -> StoryResult:
    """Result-page data for an ended session; idempotent."""
    if session.status is not SessionStatus.ENDED:
        raise SequencingError("session is still active")
    parts = [session.story]
    if session.ending:
        parts.append(session.ending)
    full_story = _join_fragments(parts)
    if session.version is SessionVersion.GAME:
        assert session.game is not None
        return StoryResult(
            full_story=full_story,
            story_word_count=count_words(full_story),
            snake_length=len(session.game.snake),
            candies_eaten=dict(session.game.eaten_counts),
        )
    return StoryResult(
        full_story=full_story, story_word_count=count_words(full_story)
    )
