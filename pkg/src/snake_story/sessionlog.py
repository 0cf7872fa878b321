"""Reading and writing session transcripts.

A transcript is a plain-text file of timestamped lines::

    [3/6/2023 7:29:47 PM]Game Start

The bracketed timestamp never zero-pads month, day, or hour; minutes
and seconds are always two digits.  A payload may spill onto following
lines (option texts often contain their own newlines and blank lines);
continuation lines belong to the most recent timestamped line.  Blank
lines *trailing* a payload are separators, recorded per event as
``blanks_after`` so that parsing and serializing are byte-exact
inverses of each other.

Game-version payloads::

    Game Start
    [slot][kind]text      an option on the map (slot 0 low-T, 1 high-T,
                          2 self-written; kind is the candy id 0-5)
    Chose[slot][kind]     the snake ate that option's candy
    Game End
    Ate[n]                total candies eaten

Non-game payloads::

    [0.6]text             an option at that sampling temperature
    [Chose][0.6]          the player picked that option
    [Add Own Text]text    the player typed their own continuation
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Union

from .engine import CandyKind
from .errors import LogParseError, ReplayError

TIMESTAMP_RE = re.compile(
    r"^\[(\d{1,2})/(\d{1,2})/(\d{4}) (\d{1,2}):(\d{2}):(\d{2}) (AM|PM)\]"
)
_SLOT_KIND_RE = re.compile(r"^\[(\d)\]\[(\d)\]", re.DOTALL)
_CHOSE_RE = re.compile(r"^Chose\[(\d)\]\[(\d)\]$")
_ATE_RE = re.compile(r"^Ate\[(\d+)\]$")
_TEMPERATURE_RE = re.compile(r"^\[(\d+\.\d+)\]", re.DOTALL)
_NONGAME_CHOSE_RE = re.compile(r"^\[Chose\]\[(\d+\.\d+)\]$")
_OWN_TEXT_PREFIX = "[Add Own Text]"


def format_timestamp(moment: datetime) -> str:
    hour = moment.hour % 12 or 12
    meridiem = "AM" if moment.hour < 12 else "PM"
    return (
        f"[{moment.month}/{moment.day}/{moment.year} "
        f"{hour}:{moment.minute:02d}:{moment.second:02d} {meridiem}]"
    )


def parse_timestamp(match: "re.Match[str]") -> datetime:
    month, day, year, hour, minute, second, meridiem = match.groups()
    hour = int(hour) % 12
    if meridiem == "PM":
        hour += 12
    return datetime(int(year), int(month), int(day), hour, int(minute), int(second))


def _format_temperature(value: float) -> str:
    return format(value, "g")


@dataclass(frozen=True)
class LogEvent:
    timestamp: datetime
    blanks_after: int = 0


@dataclass(frozen=True)
class GameStart(LogEvent):
    pass


@dataclass(frozen=True)
class GameEnd(LogEvent):
    pass


@dataclass(frozen=True)
class OptionShown(LogEvent):
    slot: int = 0
    kind: int = 0
    text: str = ""


@dataclass(frozen=True)
class Chose(LogEvent):
    slot: int = 0
    kind: int = 0


@dataclass(frozen=True)
class AteCount(LogEvent):
    count: int = 0


@dataclass(frozen=True)
class StoryOption(LogEvent):
    temperature: float = 0.0
    text: str = ""


@dataclass(frozen=True)
class StoryChose(LogEvent):
    temperature: float = 0.0


@dataclass(frozen=True)
class OwnText(LogEvent):
    text: str = ""


SessionEvent = Union[
    GameStart, GameEnd, OptionShown, Chose, AteCount, StoryOption, StoryChose, OwnText
]


@dataclass(frozen=True)
class SessionLog:
    events: tuple[SessionEvent, ...]
    trailing_newline: bool = True


def _payload_of(event: SessionEvent) -> str:
    if isinstance(event, GameStart):
        return "Game Start"
    if isinstance(event, GameEnd):
        return "Game End"
    if isinstance(event, OptionShown):
        return f"[{event.slot}][{event.kind}]{event.text}"
    if isinstance(event, Chose):
        return f"Chose[{event.slot}][{event.kind}]"
    if isinstance(event, AteCount):
        return f"Ate[{event.count}]"
    if isinstance(event, StoryOption):
        return f"[{_format_temperature(event.temperature)}]{event.text}"
    if isinstance(event, StoryChose):
        return f"[Chose][{_format_temperature(event.temperature)}]"
    if isinstance(event, OwnText):
        return f"{_OWN_TEXT_PREFIX}{event.text}"
    raise TypeError(f"unknown event type {type(event).__name__}")


def serialize_session_log(log: SessionLog) -> str:
    lines: list[str] = []
    for event in log.events:
        lines.append(format_timestamp(event.timestamp) + _payload_of(event))
        lines.extend([""] * event.blanks_after)
    text = "\n".join(lines)
    if log.trailing_newline:
        text += "\n"
    return text


def _parse_payload(
    payload: str, timestamp: datetime, blanks_after: int, line_number: int
) -> SessionEvent:
    if payload == "Game Start":
        return GameStart(timestamp, blanks_after)
    if payload == "Game End":
        return GameEnd(timestamp, blanks_after)
    match = _ATE_RE.match(payload)
    if match:
        return AteCount(timestamp, blanks_after, count=int(match.group(1)))
    match = _CHOSE_RE.match(payload)
    if match:
        return Chose(
            timestamp, blanks_after, slot=int(match.group(1)), kind=int(match.group(2))
        )
    match = _NONGAME_CHOSE_RE.match(payload)
    if match:
        return StoryChose(timestamp, blanks_after, temperature=float(match.group(1)))
    if payload.startswith(_OWN_TEXT_PREFIX):
        return OwnText(timestamp, blanks_after, text=payload[len(_OWN_TEXT_PREFIX):])
    match = _SLOT_KIND_RE.match(payload)
    if match:
        return OptionShown(
            timestamp,
            blanks_after,
            slot=int(match.group(1)),
            kind=int(match.group(2)),
            text=payload[match.end():],
        )
    match = _TEMPERATURE_RE.match(payload)
    if match:
        return StoryOption(
            timestamp,
            blanks_after,
            temperature=float(match.group(1)),
            text=payload[match.end():],
        )
    raise LogParseError(f"unrecognized payload {payload[:40]!r}", line_number)


def parse_session_log(text: str) -> SessionLog:
    trailing_newline = text.endswith("\n")
    lines = text.split("\n")
    if trailing_newline:
        lines.pop()

    # Group lines into (start line number, timestamp, payload lines) blocks.
    blocks: list[tuple[int, datetime, list[str]]] = []
    for number, line in enumerate(lines, start=1):
        match = TIMESTAMP_RE.match(line)
        if match:
            blocks.append((number, parse_timestamp(match), [line[match.end():]]))
        elif blocks:
            blocks[-1][2].append(line)
        elif line == "":
            raise LogParseError("log starts with a blank line", number)
        else:
            raise LogParseError("log must start with a timestamped line", number)
    if not blocks:
        raise LogParseError("log contains no events", 1)

    events: list[SessionEvent] = []
    for number, timestamp, payload_lines in blocks:
        blanks_after = 0
        while payload_lines and len(payload_lines) > 1 and payload_lines[-1] == "":
            payload_lines.pop()
            blanks_after += 1
        payload = "\n".join(payload_lines)
        events.append(_parse_payload(payload, timestamp, blanks_after, number))
    return SessionLog(events=tuple(events), trailing_newline=trailing_newline)


def load_session_log(path) -> SessionLog:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return parse_session_log(handle.read())


def save_session_log(log: SessionLog, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(serialize_session_log(log))


@dataclass(frozen=True)
class ReplayedSession:
    """What a transcript pins down: the story and the choice trail.

    Board geometry is not logged, so replay reconstructs text and
    counts rather than full game states.
    """

    is_game: bool
    fragments: tuple[str, ...]
    eaten_kinds: tuple[CandyKind, ...] = ()
    shown_kind_counts: dict = field(default_factory=dict)
    chosen_temperatures: tuple[float, ...] = ()
    shown_temperature_counts: dict = field(default_factory=dict)
    own_text_count: int = 0
    declared_eaten: Optional[int] = None

    @property
    def story(self) -> str:
        return " ".join(f.strip() for f in self.fragments if f.strip())

    @property
    def eaten_counts(self) -> dict[CandyKind, int]:
        counts: dict[CandyKind, int] = {}
        for kind in self.eaten_kinds:
            counts[kind] = counts.get(kind, 0) + 1
        return counts


def replay(log: SessionLog) -> ReplayedSession:
    """Walk a transcript and rebuild the story it produced.

    A ``Chose``/``[Chose]`` event appends the text of the matching
    option most recently shown; typing a continuation appends it
    directly.  Inconsistent transcripts (choosing an option that was
    never shown, or an eaten-count line that contradicts the choice
    trail) raise :class:`ReplayError`.
    """
    game_kinds = (OptionShown, Chose, AteCount)
    story_kinds = (StoryOption, StoryChose, OwnText)
    has_game = any(isinstance(e, game_kinds) for e in log.events)
    has_story = any(isinstance(e, story_kinds) for e in log.events)
    if has_game and has_story:
        raise ReplayError("transcript mixes game and non-game events")
    if has_game:
        return _replay_game(log)
    if has_story:
        return _replay_story(log)
    raise ReplayError("transcript contains no choice events")


def _replay_game(log: SessionLog) -> ReplayedSession:
    pending: dict[int, OptionShown] = {}
    fragments: list[str] = []
    eaten: list[CandyKind] = []
    shown_counts: dict[CandyKind, int] = {}
    declared: Optional[int] = None
    for event in log.events:
        if isinstance(event, OptionShown):
            pending[event.slot] = event
            kind = CandyKind(event.kind)
            shown_counts[kind] = shown_counts.get(kind, 0) + 1
        elif isinstance(event, Chose):
            shown = pending.get(event.slot)
            if shown is None:
                raise ReplayError(
                    f"chose slot {event.slot} but no option was shown for it"
                )
            if shown.kind != event.kind:
                raise ReplayError(
                    f"chose kind {event.kind} in slot {event.slot} "
                    f"but kind {shown.kind} was shown"
                )
            fragments.append(shown.text)
            eaten.append(CandyKind(event.kind))
            pending.clear()
        elif isinstance(event, AteCount):
            declared = event.count
            if declared != len(eaten):
                raise ReplayError(
                    f"transcript declares {declared} candies eaten "
                    f"but records {len(eaten)} choices"
                )
    return ReplayedSession(
        is_game=True,
        fragments=tuple(fragments),
        eaten_kinds=tuple(eaten),
        shown_kind_counts=shown_counts,
        declared_eaten=declared,
    )


def _replay_story(log: SessionLog) -> ReplayedSession:
    pending: dict[float, StoryOption] = {}
    fragments: list[str] = []
    chosen: list[float] = []
    shown_counts: dict[float, int] = {}
    own_count = 0
    for event in log.events:
        if isinstance(event, StoryOption):
            pending[event.temperature] = event
            shown_counts[event.temperature] = shown_counts.get(event.temperature, 0) + 1
        elif isinstance(event, StoryChose):
            shown = pending.get(event.temperature)
            if shown is None:
                raise ReplayError(
                    f"chose temperature {event.temperature} "
                    "but no option was shown for it"
                )
            fragments.append(shown.text)
            chosen.append(event.temperature)
            pending.clear()
        elif isinstance(event, OwnText):
            fragments.append(event.text)
            own_count += 1
            pending.clear()
    return ReplayedSession(
        is_game=False,
        fragments=tuple(fragments),
        chosen_temperatures=tuple(chosen),
        shown_temperature_counts=shown_counts,
        own_text_count=own_count,
    )
